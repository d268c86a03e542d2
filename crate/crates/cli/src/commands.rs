//! Subcommand implementations.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use hetspin::bilinears::fundamental_forms;
use hetspin::clifford::{chirality, Chirality, ExactSpinor, NumSpinor, Spinor};
use hetspin::kse::{
    dilatino_apply, dilatino_kernel, dilatino_kernel_numeric, exact_joint_kernel, gaugino_apply,
    gaugino_kernel_numeric, killing_kernel_numeric, parse_flux_json, FluxInput, RANK_TOL,
};
use hetspin::numgeom::{FdConfig, Grid};
use hetspin::solutions::{
    verify_product_group, verify_string, verify_su2_instanton, InstantonBackgroundSpec, StringBackgroundSpec,
    Tolerances, BASE_SLOTS,
};
use hetspin::spinor_text::parse_spinor;
use hetspin::stabilizer::{
    catalog_row, check_row, clifford_counts, isotropy_algebra, majorana_span, SpinorSubspace, TABLE, TRANSVERSE,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::envelope::{input_error, CliError, Document, Outcome, RunConfig};
use crate::{Background, Common};

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| input_error(path, e))?;
    serde_json::from_str(&text).map_err(|e| input_error(path, e))
}

fn path_string(p: &Path) -> String {
    p.display().to_string()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct ExpectedRow {
    label: String,
    stabilizer_dim: usize,
    sigma_dim: usize,
    #[serde(default)]
    clifford_generators: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ExpectedCatalog {
    rows: Vec<ExpectedRow>,
    /// `(N, generators)` pairs.
    #[serde(default)]
    clifford_counts: Option<Vec<(usize, usize)>>,
}

fn builtin_catalog() -> ExpectedCatalog {
    ExpectedCatalog {
        rows: TABLE
            .iter()
            .map(|r| ExpectedRow {
                label: r.label.into(),
                stabilizer_dim: r.stabilizer_dim,
                sigma_dim: r.sigma_dim,
                clifford_generators: r.clifford_generators,
            })
            .collect(),
        clifford_counts: Some((2..=8).map(|n| (n, n - 1)).collect()),
    }
}

pub fn tables(row: Option<String>, catalog: Option<PathBuf>, common: &Common) -> Result<Document, CliError> {
    let expected = match &catalog {
        Some(p) => read_json::<ExpectedCatalog>(p)?,
        None => builtin_catalog(),
    };
    let mut rows: Vec<&ExpectedRow> = expected.rows.iter().collect();
    if let Some(key) = &row {
        let label = catalog_row(key).map(|r| r.label).ok_or_else(|| CliError(format!("unknown catalog row `{key}`")))?;
        rows.retain(|r| r.label == label);
        if rows.is_empty() {
            return Err(CliError(format!("row `{label}` has no expected values")));
        }
    }

    let mut diagnostics = Vec::new();
    let mut out_rows = Vec::new();
    for exp in rows {
        let cat = catalog_row(&exp.label).ok_or_else(|| CliError(format!("unknown catalog row `{}`", exp.label)))?;
        let got = check_row(cat)?;
        let computed = ExpectedRow {
            label: exp.label.clone(),
            stabilizer_dim: got.stabilizer_dim,
            sigma_dim: got.sigma_dim,
            clifford_generators: got.clifford_generators,
        };
        let identified = got.catalog_match == Some(cat.label);
        let ok = computed == *exp && identified;
        if computed.stabilizer_dim != exp.stabilizer_dim {
            diagnostics.push(format!("{}: stabilizer_dim expected {} got {}", exp.label, exp.stabilizer_dim, got.stabilizer_dim));
        }
        if computed.sigma_dim != exp.sigma_dim {
            diagnostics.push(format!("{}: sigma_dim expected {} got {}", exp.label, exp.sigma_dim, got.sigma_dim));
        }
        if computed.clifford_generators != exp.clifford_generators {
            diagnostics.push(format!(
                "{}: clifford_generators expected {:?} got {:?}",
                exp.label, exp.clifford_generators, got.clifford_generators
            ));
        }
        if !identified {
            diagnostics.push(format!("{}: isotropy algebra identified as {:?}", exp.label, got.catalog_match));
        }
        out_rows.push(json!({
            "label": cat.label,
            "stabilizer": cat.stabilizer,
            "sigma": cat.sigma,
            "representatives": cat.representatives,
            "expected": exp,
            "computed": computed,
            "match": ok,
        }));
    }

    let mut result = json!({ "rows": out_rows });
    if row.is_none() {
        if let Some(exp) = &expected.clifford_counts {
            let got = clifford_counts()?;
            if got != *exp {
                diagnostics.push(format!("clifford_counts expected {exp:?} got {got:?}"));
            }
            result["clifford_counts"] = json!({ "expected": exp, "computed": got, "match": got == *exp });
        }
    }
    let config = RunConfig {
        command: "tables".into(),
        catalog: catalog.as_deref().map(path_string),
        row,
        seed: common.seed,
        ..RunConfig::default()
    };
    Ok(Document { config, outcome: Outcome::from_pass(diagnostics.is_empty()), result, diagnostics })
}

fn parse_weyl(text: &str) -> Result<ExactSpinor, CliError> {
    let s = parse_spinor(text).map_err(|e| CliError(format!("`{text}`: {e}")))?;
    if s.is_zero() {
        return Err(CliError(format!("`{text}` is the zero spinor")));
    }
    match chirality(&s)? {
        Chirality::Positive => Ok(s),
        c => Err(CliError(format!("`{text}` has chirality {c:?}; positive chirality is required"))),
    }
}

pub fn bilinears(spinors: &[String], raw: bool, common: &Common) -> Result<Document, CliError> {
    let parsed = spinors.iter().map(|s| parse_weyl(s)).collect::<Result<Vec<_>, _>>()?;
    let basis: Vec<ExactSpinor> = if raw { parsed } else { majorana_span(&parsed)?.basis().to_vec() };
    let forms = fundamental_forms(&basis);
    let mut by_degree = serde_json::Map::new();
    for degree in 1..=5 {
        let entries: Vec<Value> = forms
            .iter()
            .filter(|f| f.degree == degree)
            .map(|f| json!({ "pair": f.label(), "form": f.form.to_json() }))
            .collect();
        if !entries.is_empty() {
            by_degree.insert(degree.to_string(), Value::Array(entries));
        }
    }
    let counts: Vec<usize> = (1..=5).map(|d| forms.iter().filter(|f| f.degree == d).count()).collect();
    let mut result = json!({
        "spinors": basis.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "counts_by_degree": counts,
        "forms": by_degree,
    });
    if !raw {
        let iso = isotropy_algebra(&basis);
        result["isotropy"] = json!({ "dim": iso.dim, "catalog_match": iso.catalog_match });
    }
    let config = RunConfig {
        command: if raw { "bilinears --raw".into() } else { "bilinears".into() },
        spinors: spinors.to_vec(),
        seed: common.seed,
        ..RunConfig::default()
    };
    Ok(Document { config, outcome: Outcome::Pass, result, diagnostics: Vec::new() })
}

pub fn kse_check(
    spec: &Path,
    row: Option<String>,
    tol: Option<f64>,
    expect: Option<usize>,
    common: &Common,
) -> Result<Document, CliError> {
    let value: Value = read_json(spec)?;
    let data = parse_flux_json(&value).map_err(|e| input_error(spec, e))?;
    let space = match &row {
        Some(key) => catalog_row(key).ok_or_else(|| CliError(format!("unknown catalog row `{key}`")))?.expand()?,
        None => SpinorSubspace::full_positive(),
    };
    let p = space.basis();
    let (mode, dilatino, gaugino, joint, basis) = match &data {
        FluxInput::Exact(d) => {
            let dil = dilatino_kernel(d, p);
            let gops: Vec<Box<dyn Fn(&ExactSpinor) -> ExactSpinor + '_>> =
                d.f.iter().map(|f| Box::new(move |s: &ExactSpinor| gaugino_apply(f, s)) as Box<_>).collect();
            let grefs: Vec<&dyn Fn(&ExactSpinor) -> ExactSpinor> = gops.iter().map(|b| b.as_ref()).collect();
            let gau = exact_joint_kernel(p, &grefs);
            let dil_op = |s: &ExactSpinor| dilatino_apply(d, s);
            let mut all: Vec<&dyn Fn(&ExactSpinor) -> ExactSpinor> = vec![&dil_op];
            all.extend(grefs.iter().copied());
            let joint = exact_joint_kernel(p, &all);
            let basis: Vec<String> = joint.basis.iter().map(|s| s.to_string()).collect();
            ("exact", dil.dim, gau.dim, joint.dim, Some(basis))
        }
        FluxInput::Numeric(d) => {
            let tol = tol.unwrap_or(RANK_TOL);
            let np: Vec<NumSpinor> = p.iter().map(Spinor::to_c64).collect();
            let dil = dilatino_kernel_numeric(d, &np, tol);
            let gau = gaugino_kernel_numeric(d, &np, tol);
            let joint = killing_kernel_numeric(d, &np, tol);
            ("numeric", dil.dim, gau.dim, joint.dim, None)
        }
    };
    let pass = expect.map_or(true, |n| n == joint);
    let mut result = json!({
        "arithmetic": mode,
        "space_dim": p.len(),
        "dilatino_kernel_dim": dilatino,
        "gaugino_kernel_dim": gaugino,
        "joint_kernel_dim": joint,
    });
    if let Some(b) = basis {
        result["joint_kernel_basis"] = json!(b);
    }
    let diagnostics = match expect {
        Some(n) if !pass => vec![format!("joint kernel dimension expected {n} got {joint}")],
        _ => Vec::new(),
    };
    let config = RunConfig {
        command: "kse-check".into(),
        spec: Some(path_string(spec)),
        row,
        tol,
        expect,
        seed: common.seed,
        ..RunConfig::default()
    };
    Ok(Document { config, outcome: Outcome::from_pass(pass), result, diagnostics })
}

pub struct VerifyArgs {
    pub background: Background,
    pub spec: PathBuf,
    pub grid: Option<PathBuf>,
    pub tol: Option<f64>,
    pub fd_step: Option<f64>,
    pub controls: usize,
}

/// Lightcone coordinates in `[-2, 2]`, transverse ones within 1 of the
/// box spanned by the centres.
fn default_string_grid(spec: &StringBackgroundSpec) -> Grid {
    let mut ranges = vec![[-2.0, 2.0]; 10];
    for (k, &t) in TRANSVERSE.iter().enumerate() {
        let lo = spec.centers.iter().map(|c| c[k]).fold(0.0, f64::min);
        let hi = spec.centers.iter().map(|c| c[k]).fold(0.0, f64::max);
        ranges[t] = [lo - 1.0, hi + 1.0];
    }
    Grid { ranges, counts: Vec::new(), guard_radius: 0.1, samples: Some(200), points: Vec::new() }
}

/// Group fibre coordinates inside their Euler charts, base within `3ρ` of
/// the instanton centre.
fn default_group_grid(spec: &InstantonBackgroundSpec) -> Grid {
    let mut ranges = vec![[0.0, 0.0]; 10];
    ranges[0] = [-1.0, 1.0];
    ranges[1] = [0.3, 1.2];
    ranges[2] = [-1.0, 1.0];
    ranges[5] = [0.0, TAU];
    ranges[6] = [0.4, 2.7];
    ranges[7] = [0.0, TAU];
    for (k, &s) in BASE_SLOTS.iter().enumerate() {
        ranges[s] = [spec.center[k] - 3.0 * spec.rho, spec.center[k] + 3.0 * spec.rho];
    }
    Grid { ranges, counts: Vec::new(), guard_radius: 0.1, samples: Some(100), points: Vec::new() }
}

pub fn verify(args: &VerifyArgs, common: &Common) -> Result<Document, CliError> {
    let tol = args.tol.map_or_else(Tolerances::default, Tolerances::uniform);
    let fd = args.fd_step.map(FdConfig::with_step);
    let load_grid = |fallback: Grid| -> Result<Grid, CliError> {
        match &args.grid {
            Some(p) => {
                let g: Grid = read_json(p)?;
                g.validate().map_err(|e| input_error(p, e))?;
                Ok(g)
            }
            None => Ok(fallback),
        }
    };
    let (report, resolved, grid) = match args.background {
        Background::String => {
            let mut spec: StringBackgroundSpec = read_json(&args.spec)?;
            if fd.is_some() {
                spec.fd = fd;
            }
            let grid = load_grid(default_string_grid(&spec))?;
            spec.guard_radius = spec.guard_radius.max(grid.guard_radius);
            spec.validate().map_err(|e| input_error(&args.spec, e))?;
            let pts = grid_points(&grid, common.seed)?;
            (verify_string(&spec, &pts, &tol, args.controls)?, json!(spec), grid)
        }
        Background::Su2Instanton | Background::ProductGroup => {
            let mut spec: InstantonBackgroundSpec = read_json(&args.spec)?;
            if fd.is_some() {
                spec.fd = fd;
            }
            spec.validate().map_err(|e| input_error(&args.spec, e))?;
            let grid = load_grid(default_group_grid(&spec))?;
            let pts = grid_points(&grid, common.seed)?;
            let report = if args.background == Background::Su2Instanton {
                verify_su2_instanton(&spec, &pts, &tol)?
            } else {
                verify_product_group(&spec, &pts, &tol)?
            };
            (report, json!(spec), grid)
        }
    };
    let diagnostics = report
        .conditions
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("FAIL {}: residual {:e}, tolerance {:e}", c.name, c.max_residual, c.tolerance))
        .collect();
    let config = RunConfig {
        command: "verify".into(),
        background: Some(args.background.name().into()),
        spec: Some(path_string(&args.spec)),
        grid: args.grid.as_deref().map(path_string),
        tol: args.tol,
        fd_step: args.fd_step,
        controls: (args.background == Background::String).then_some(args.controls),
        seed: common.seed,
        resolved: Some(json!({ "spec": resolved, "grid": grid, "tolerances": tolerances_json(&tol) })),
        ..RunConfig::default()
    };
    Ok(Document {
        config,
        outcome: Outcome::from_pass(report.pass()),
        result: serde_json::to_value(&report).map_err(|e| CliError(e.to_string()))?,
        diagnostics,
    })
}

fn grid_points(grid: &Grid, seed: u64) -> Result<Vec<Vec<f64>>, CliError> {
    let pts: Vec<Vec<f64>> = grid.points(seed).into_iter().map(|p| p.x).collect();
    if let Some(bad) = pts.iter().find(|x| x.len() != 10) {
        return Err(CliError(format!("grid points must have 10 coordinates, found {}", bad.len())));
    }
    if pts.is_empty() {
        return Err(CliError("grid has no points".into()));
    }
    Ok(pts)
}

fn tolerances_json(t: &Tolerances) -> Value {
    json!({
        "field_eq": t.field_eq,
        "dh": t.dh,
        "gravitino": t.gravitino,
        "killing": t.killing,
        "fineqn": t.fineqn,
        "fineqn_spread": t.fineqn_spread,
        "close_h": t.close_h,
        "asd": t.asd,
        "instanton_number": t.instanton_number,
        "structure": t.structure,
        "control": t.control,
    })
}
