//! `hetspin` command-line driver.
//!
//! Every subcommand prints one JSON document (or writes it to `--report`)
//! and exits with 0 when all checks pass, 1 when a residual or table value
//! fails, and 2 on bad input.

mod commands;
mod envelope;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use envelope::{CliError, Outcome};

#[derive(Parser)]
#[command(name = "hetspin", version, about = "Spinorial geometry of heterotic backgrounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug, Serialize)]
struct Common {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Seed for sampled grids.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Recompute the isotropy table and Clifford-generator counts.
    Tables {
        /// Only this row (label such as `L=1` or `SU3`).
        #[arg(long)]
        row: Option<String>,
        /// JSON file of expected values replacing the built-in catalog.
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Independent form bilinears of the given spinors.
    Bilinears {
        /// Spinor expressions such as `1+e_{1234}` or `i(e_{12}+e_{34})`.
        #[arg(required = true)]
        spinors: Vec<String>,
        /// Use the spinors as given instead of their Majorana parts.
        #[arg(long)]
        raw: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Dilatino and gaugino kernels for pointwise flux data.
    KseCheck {
        /// JSON file `{dPhi, H, F}`.
        #[arg(long)]
        spec: PathBuf,
        /// Restrict to the span of a catalog row; default is all of Δ⁺.
        #[arg(long)]
        row: Option<String>,
        /// Relative rank tolerance for floating-point data.
        #[arg(long)]
        tol: Option<f64>,
        /// Fail unless the joint kernel has this real dimension.
        #[arg(long)]
        expect: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Sweep a background over a grid and check every condition.
    Verify {
        #[arg(value_enum)]
        background: Background,
        /// Background spec JSON.
        #[arg(long)]
        spec: PathBuf,
        /// Grid JSON; a sampled default grid is used when absent.
        #[arg(long)]
        grid: Option<PathBuf>,
        /// Uniform residual tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Finite-difference step.
        #[arg(long)]
        fd_step: Option<f64>,
        /// Points used for negative controls (string only).
        #[arg(long, default_value_t = 10)]
        controls: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Background {
    String,
    Su2Instanton,
    ProductGroup,
}

impl Background {
    fn name(self) -> &'static str {
        match self {
            Background::String => "string",
            Background::Su2Instanton => "su2-instanton",
            Background::ProductGroup => "product-group",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, result) = match cli.command {
        Command::Tables { row, catalog, common } => (common.clone(), commands::tables(row, catalog, &common)),
        Command::Bilinears { spinors, raw, common } => (common.clone(), commands::bilinears(&spinors, raw, &common)),
        Command::KseCheck { spec, row, tol, expect, common } => {
            (common.clone(), commands::kse_check(&spec, row, tol, expect, &common))
        }
        Command::Verify { background, spec, grid, tol, fd_step, controls, common } => {
            let args = commands::VerifyArgs { background, spec, grid, tol, fd_step, controls };
            (common.clone(), commands::verify(&args, &common))
        }
    };
    match result.and_then(|doc| envelope::emit(&doc, common.report.as_deref()).map(|()| doc.outcome)) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(CliError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
