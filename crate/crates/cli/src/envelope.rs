//! Report document shared by all subcommands.

use std::fmt::Display;
use std::path::Path;

use hetspin::conventions::{CHIRALITY_SIGN, LIGHTCONE, LIGHTCONE_SIGN, PLANE_ORIENTATION, TORSION_SIGN};
use serde::Serialize;
use serde_json::{json, Value};

/// Input or I/O failure; exit code 2.
#[derive(Debug)]
pub struct CliError(pub String);

impl From<hetspin::Error> for CliError {
    fn from(e: hetspin::Error) -> Self {
        CliError(e.to_string())
    }
}

pub fn input_error(path: &Path, e: impl Display) -> CliError {
    CliError(format!("{}: {e}", path.display()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

/// Everything needed to rerun a command and get the same bytes back.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub background: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub catalog: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub row: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub spinors: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fd_step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub controls: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expect: Option<usize>,
    pub seed: u64,
    /// Spec and grid after defaults and overrides were applied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolved: Option<Value>,
}

pub struct Document {
    pub config: RunConfig,
    pub outcome: Outcome,
    pub result: Value,
    /// Lines for stderr, such as table diffs.
    pub diagnostics: Vec<String>,
}

fn conventions() -> Value {
    json!({
        "chirality_sign": CHIRALITY_SIGN,
        "chirality": "Γ_0…Γ_9 is +1 on even forms",
        "plane_orientation": PLANE_ORIENTATION,
        "lightcone": LIGHTCONE,
        "lightcone_sign": LIGHTCONE_SIGN,
        "null_frame": "e⁻ = (e^0 − e^5)/√2, e⁺ = −(e^0 + e^5)/√2",
        "torsion_sign": TORSION_SIGN,
        "connection": "∇̂ = ∇ + ½H",
        "majorana_inner_product": "B(ψ, θ) = <Γ_{06789} ψ*, θ>",
        "gaugino_sum": "F_MN Γ^MN over all index orders",
        "complex_structure": "ω(X, Y) = g(X, I Y)",
        "form_inner_product": "(α, β) = (1/k!) α_{i…} β^{i…}",
    })
}

pub fn emit(doc: &Document, report: Option<&Path>) -> Result<(), CliError> {
    for line in &doc.diagnostics {
        eprintln!("{line}");
    }
    let out = json!({
        "tool": "hetspin",
        "version": env!("CARGO_PKG_VERSION"),
        "outcome": doc.outcome,
        "conventions": conventions(),
        "config": doc.config,
        "result": doc.result,
    });
    let mut text = serde_json::to_string_pretty(&out).map_err(|e| CliError(e.to_string()))?;
    text.push('\n');
    match report {
        Some(path) => std::fs::write(path, text).map_err(|e| input_error(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
