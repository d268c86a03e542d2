//! End-to-end verification sweeps over sample points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::group::{
    build_half_bps_su2, build_product_group_background, sl2r_su2_constants, structure_constant_self_duality,
    Fibre, GroupBundle, InstantonBackgroundSpec, BASE_SLOTS,
};
use super::instanton::{build_bpst_connection, chern_number, half_bps_h, star4, AsdConnection};
use super::string::{build_string_background, StringBackground, StringBackgroundSpec};
use crate::clifford::{NumSpinor, Spinor};
use crate::error::{Error, Result};
use crate::form::RealForm;
use crate::gstructure::{condition_report, Case};
use crate::kse::{dilatino_apply, dilatino_kernel_numeric, NumFluxData, RANK_TOL};
use crate::numgeom::{
    dh_residual, exterior_derivative, field_eq_residual, frame_data, gravitino_residual, laplacian,
    lie_derivative_metric, spinor_max, Background, FdConfig, Flat,
};
use crate::report::{fold_max, ConditionReport, Skip};
use crate::stabilizer::catalog_row;

/// Thresholds used by the sweeps.
#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    pub field_eq: f64,
    pub dh: f64,
    pub gravitino: f64,
    pub killing: f64,
    pub fineqn: f64,
    pub fineqn_spread: f64,
    pub close_h: f64,
    pub asd: f64,
    pub instanton_number: f64,
    pub structure: f64,
    pub control: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            field_eq: 1e-6,
            dh: 1e-8,
            gravitino: 1e-7,
            killing: 1e-8,
            fineqn: 1e-6,
            fineqn_spread: 1e-4,
            close_h: 1e-6,
            asd: 1e-10,
            instanton_number: 1e-2,
            structure: 1e-6,
            control: 1e-2,
        }
    }
}

impl Tolerances {
    /// Replace every residual bound by `tol`; controls keep their threshold.
    pub fn uniform(tol: f64) -> Self {
        Self {
            field_eq: tol,
            dh: tol,
            gravitino: tol,
            killing: tol,
            fineqn: tol,
            close_h: tol,
            structure: tol,
            ..Self::default()
        }
    }
}

/// Numeric spinors of a catalog row.
pub fn row_spinors(row: &str) -> Result<Vec<NumSpinor>> {
    let r = catalog_row(row).ok_or_else(|| Error::Spec(format!("unknown catalog row {row}")))?;
    Ok(r.expand()?.basis().iter().map(Spinor::to_c64).collect())
}

/// Per-point quantities shared by every background.
#[derive(Clone, Debug, Default)]
pub struct PointResiduals {
    pub field_eq: f64,
    pub dh: f64,
    pub gravitino: f64,
    pub dilatino_dim: usize,
}

/// Field equations, `dH`, gravitino on `spinors` and the dilatino kernel
/// restricted to `spinors`, at one point.
pub fn point_residuals<B: Background + ?Sized>(bg: &B, spinors: &[NumSpinor], x: &[f64]) -> Result<PointResiduals> {
    let field_eq = field_eq_residual(bg, x)?.max();
    let dh = dh_residual(bg, x)?.max_abs();
    let mut gravitino = 0.0;
    for s in spinors {
        gravitino = fold_max(gravitino, spinor_max(&gravitino_residual(bg, s, x)?));
    }
    let (dphi, h) = frame_data(bg, x)?;
    let data = NumFluxData::from_real(&dphi, &h, &[]);
    let dilatino_dim = dilatino_kernel_numeric(&data, spinors, RANK_TOL).dim;
    Ok(PointResiduals { field_eq, dh, gravitino, dilatino_dim })
}

/// Evaluate `f` at every point in parallel; guard violations become skips.
pub(crate) fn sweep<T: Send>(
    points: &[Vec<f64>],
    f: impl Fn(&[f64]) -> Result<T> + Sync,
) -> Result<(Vec<T>, Vec<Skip>)> {
    let results: Vec<Result<T>> = points.par_iter().map(|x| f(x)).collect();
    let mut ok = Vec::new();
    let mut skipped = Vec::new();
    for (index, (x, r)) in points.iter().zip(results).enumerate() {
        match r {
            Ok(v) => ok.push(v),
            Err(Error::Guard(_)) => skipped.push(Skip { index, point: x.clone(), reason: "inside guard region".into() }),
            Err(e) => return Err(e),
        }
    }
    Ok((ok, skipped))
}

fn max_of<T>(items: &[T], f: impl Fn(&T) -> f64) -> f64 {
    items.iter().map(f).fold(0.0, fold_max)
}

fn common_conditions(report: &mut ConditionReport, res: &[PointResiduals], tol: &Tolerances, expected_dim: usize) {
    report
        .check("field equations", "R_MN − (1/4) H_MLA H_N^LA + 2 ∇_M ∂_N Φ = 0, ∇_M (e^{−2Φ} H^M_PR) = 0", max_of(res, |r| r.field_eq), tol.field_eq)
        .check("closure", "dH = 0", max_of(res, |r| r.dh), tol.dh)
        .check("gravitino", "∇̂_M ε = 0", max_of(res, |r| r.gravitino), tol.gravitino);
    let worst_dim = res.iter().map(|r| r.dilatino_dim.abs_diff(expected_dim)).max().unwrap_or(0);
    report.check(
        "dilatino kernel",
        &format!("dim ker (Γ^M ∂_M Φ − (1/12) H_MNR Γ^MNR) = {expected_dim}"),
        worst_dim as f64,
        0.5,
    );
}

fn no_points(report: &mut ConditionReport, n: usize) {
    if n == 0 {
        report.check("evaluated points", "at least one point outside the guard", 0.0, 0.0);
    }
}

/// The fundamental-string sweep, with its negative controls on the first
/// `controls` points. A control is reported by its largest residual over
/// those points.
pub fn verify_string(
    spec: &StringBackgroundSpec,
    points: &[Vec<f64>],
    tol: &Tolerances,
    controls: usize,
) -> Result<ConditionReport> {
    let bg = build_string_background(spec.clone())?;
    let spinors = row_spinors("L=8")?;
    let wrong = vec![crate::clifford::ExactSpinor::monomial(&[1, 5]).to_c64()];
    let mut report = ConditionReport::new("string");

    let (res, skipped) = sweep(points, |x| {
        let r = point_residuals(&bg, &spinors, x)?;
        let killing = lie_derivative_metric(&bg, &killing_u, x)?.abs().max();
        Ok((r, killing))
    })?;
    report.skipped = skipped;
    no_points(&mut report, res.len());
    let (base, killing): (Vec<_>, Vec<_>) = res.into_iter().unzip();
    common_conditions(&mut report, &base, tol, 8);
    report.check("null Killing vector", "L_{∂_u} g = 0", max_of(&killing, |k| *k), tol.killing);
    merge_case(&mut report, Case::R8, &bg, points, tol.structure)?;

    let mut bad = spec.clone();
    bad.non_harmonic_control = true;
    let bad = build_string_background(bad)?;
    let sample: Vec<Vec<f64>> = points.iter().filter(|x| bg.in_domain(x)).take(controls).cloned().collect();
    if !sample.is_empty() {
        let (ctrl, _) = sweep(&sample, |x| {
            let nh = field_eq_residual(&bad, x)?.max();
            Ok((nh, wrong_chirality_residual(&bg, &wrong, x)?))
        })?;
        let nh = ctrl.iter().map(|c| c.0).fold(0.0, fold_max);
        let wc = ctrl.iter().map(|c| c.1).fold(0.0, fold_max);
        report
            .check_exceeds("control: non-harmonic h", "field equations fail for h = 1 + |x|²", nh, tol.control)
            .check_exceeds("control: wrong lightcone chirality", "Killing spinor equations fail on e_15", wc, tol.control);
    }
    Ok(report)
}

/// Fold a G-structure condition report in, prefixing its names with the case.
fn merge_case<B: Background + ?Sized>(
    report: &mut ConditionReport,
    case: Case,
    bg: &B,
    points: &[Vec<f64>],
    tol: f64,
) -> Result<()> {
    let mut r = condition_report(case, bg, points, tol)?;
    for c in &mut r.conditions {
        c.name = format!("{case}: {}", c.name);
    }
    r.skipped.clear();
    report.merge(r);
    Ok(())
}

fn killing_u(_: &[f64]) -> Vec<f64> {
    let mut v = vec![0.0; 10];
    v[0] = 1.0;
    v
}

fn wrong_chirality_residual(bg: &StringBackground, spinors: &[NumSpinor], x: &[f64]) -> Result<f64> {
    let (dphi, h) = frame_data(bg, x)?;
    let data = NumFluxData::from_real(&dphi, &h, &[]);
    let mut worst: f64 = 0.0;
    for s in spinors {
        let grav = spinor_max(&gravitino_residual(bg, s, x)?);
        let dil = spinor_max(&[dilatino_apply(&data, s)]);
        worst = worst.max(grav).max(dil);
    }
    Ok(worst)
}

/// `−∇²h` and `(1/2) Σ_a F^a_ij F^a_ij` at a base point. The Laplacian step
/// grows with the distance from `scale_center` so that far points keep
/// their relative accuracy.
pub fn fineqn_terms(
    conn: Option<&dyn AsdConnection>,
    h: &(dyn Fn(&[f64; 4]) -> f64 + Sync),
    x: &[f64; 4],
    scale_center: &[f64; 4],
    fd: &FdConfig,
) -> Result<(f64, f64)> {
    let r = x.iter().zip(scale_center).map(|(a, c)| (a - c) * (a - c)).sum::<f64>().sqrt();
    let mut flat = Flat::euclidean(4);
    flat.fd = FdConfig { step: fd.step * (1.0 + r), ..fd.clone() };
    let f = |y: &[f64]| h(&[y[0], y[1], y[2], y[3]]);
    let lap = laplacian(&flat, &f, x)?;
    let density = conn.map_or(0.0, |c| 0.5 * c.density(x));
    Ok((-lap, density))
}

/// The harmonic-function equation `−∇²h − c · (1/2) F·F = 0` for any
/// connection provider. `c` is fitted at the first point with a nonzero
/// source; the test is that the same `c` holds at every other point.
pub fn fineqn_report(
    conn: Option<&dyn AsdConnection>,
    h: &(dyn Fn(&[f64; 4]) -> f64 + Sync),
    points: &[[f64; 4]],
    scale_center: [f64; 4],
    fd: &FdConfig,
    tol: &Tolerances,
) -> Result<ConditionReport> {
    let terms: Vec<(f64, f64)> =
        points.par_iter().map(|x| fineqn_terms(conn, h, x, &scale_center, fd)).collect::<Result<_>>()?;
    let mut report = ConditionReport::new("fineqn");
    let fit = terms.iter().find(|(_, s)| *s > 1e-12);
    let c = fit.map_or(1.0, |(l, s)| l / s);
    let residual = max_of(&terms, |(l, s)| (l - c * s).abs());
    let spread = terms
        .iter()
        .filter(|(_, s)| *s > 1e-12)
        .map(|(l, s)| ((l / s - c) / c).abs())
        .fold(0.0, fold_max);
    report.constants.insert("fineqn_normalization".into(), c);
    report
        .check("fineqn", "−∇²h − (1/2) η_ab F^a_ij F^b_ij = 0", residual, tol.fineqn)
        .check("fineqn normalization constancy", "max |c(x)/c(x₀) − 1|", spread, tol.fineqn_spread);
    Ok(report)
}

/// `−∇²h − (1/2) F·F` with a fixed normalization, per point.
pub fn fineqn_residual_fixed(
    conn: Option<&dyn AsdConnection>,
    h: &(dyn Fn(&[f64; 4]) -> f64 + Sync),
    x: &[f64; 4],
    constant: f64,
    fd: &FdConfig,
) -> Result<f64> {
    let (l, s) = fineqn_terms(conn, h, x, &[0.0; 4], fd)?;
    Ok(l - constant * s)
}

/// The base-point part of an instanton spec: its connection and `h`.
#[allow(clippy::type_complexity)]
fn spec_fields(spec: &InstantonBackgroundSpec) -> (Option<Box<dyn AsdConnection>>, Box<dyn Fn(&[f64; 4]) -> f64 + Sync>) {
    let (rho, center) = (spec.rho, spec.center);
    match spec.fibre {
        Fibre::Abelian => (None, Box::new(|_| 1.0)),
        Fibre::Sl2rSu2 => {
            let conn: Box<dyn AsdConnection> = Box::new(build_bpst_connection(rho, center));
            if spec.constant_h {
                (Some(conn), Box::new(|_| 1.0))
            } else {
                (Some(conn), Box::new(move |y| half_bps_h(rho, center, y)))
            }
        }
    }
}

/// `verify_fineqn` over base points.
pub fn verify_fineqn(spec: &InstantonBackgroundSpec, points: &[[f64; 4]], tol: &Tolerances) -> Result<ConditionReport> {
    spec.validate()?;
    let (conn, h) = spec_fields(spec);
    let fd = spec.fd.clone().unwrap_or_default();
    fineqn_report(conn.as_deref(), h.as_ref(), points, spec.center, &fd, tol)
}

/// `n` base points with `r_min ≤ |x − center| ≤ r_max`, radius uniform.
pub fn shell_points(n: usize, center: [f64; 4], r_min: f64, r_max: f64, seed: u64) -> Vec<[f64; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let dir = loop {
                let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
                let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
                if norm > 0.1 && norm <= 1.0 {
                    break v.map(|a| a / norm);
                }
            };
            let r = rng.gen_range(r_min..=r_max);
            std::array::from_fn(|i| center[i] + r * dir[i])
        })
        .collect()
}

/// Spacetime points over the given base points, fibre angles drawn from
/// the regular part of the Euler charts.
pub fn lift_base_points(base: &[[f64; 4]], seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    base.iter()
        .map(|b| {
            let mut x = vec![0.0; 10];
            x[0] = rng.gen_range(-1.0..1.0);
            x[1] = rng.gen_range(0.3..1.2);
            x[2] = rng.gen_range(-1.0..1.0);
            x[5] = rng.gen_range(0.0..std::f64::consts::TAU);
            x[6] = rng.gen_range(0.4..2.7);
            x[7] = rng.gen_range(0.0..std::f64::consts::TAU);
            for (k, &s) in BASE_SLOTS.iter().enumerate() {
                x[s] = b[k];
            }
            x
        })
        .collect()
}

fn base_of(x: &[f64]) -> [f64; 4] {
    BASE_SLOTS.map(|s| x[s])
}

/// `d(−⋆dh) + Σ_p F^p∧F^p` with both terms computed separately.
pub fn close_h_residual(bg: &GroupBundle, x: &[f64]) -> Result<f64> {
    let field = |y: &[f64]| -> Result<RealForm> {
        if !bg.in_domain(y) {
            return Err(Error::Guard(y.to_vec()));
        }
        Ok(bg.base_torsion(y))
    };
    let d_torsion = exterior_derivative(&field, x, &bg.fd)?;
    let mut ff = RealForm::zero(10, 4);
    for f in bg.curvature(x) {
        ff = ff + f.wedge(&f);
    }
    Ok((d_torsion + ff).max_abs())
}

/// The SU(2) half-BPS sweep: fineqn on the base points, closure of `H` in
/// split and full form, the instanton's duality and charge, and the
/// supersymmetry and field equations at the spacetime points.
pub fn verify_su2_instanton(
    spec: &InstantonBackgroundSpec,
    points: &[Vec<f64>],
    tol: &Tolerances,
) -> Result<ConditionReport> {
    let bg = build_half_bps_su2(spec)?;
    let spinors = row_spinors("SU2")?;
    let mut report = ConditionReport::new("su2-instanton");

    let (res, skipped) = sweep(points, |x| {
        let r = point_residuals(&bg, &spinors, x)?;
        Ok((r, close_h_residual(&bg, x)?))
    })?;
    report.skipped = skipped;
    no_points(&mut report, res.len());
    let (base, close): (Vec<_>, Vec<_>) = res.into_iter().unzip();
    common_conditions(&mut report, &base, tol, 8);
    report.check("closeH", "d(−⋆dh) + η_ab F^a∧F^b = 0", max_of(&close, |c| *c), tol.close_h);

    let base_pts: Vec<[f64; 4]> = points.iter().filter(|x| bg.in_domain(x)).map(|x| base_of(x)).collect();
    report.merge(verify_fineqn(spec, &base_pts, tol)?);
    merge_case(&mut report, Case::SU2, &bg, points, tol.structure)?;

    if let Some(conn) = &bg.connection {
        let asd = base_pts
            .iter()
            .flat_map(|y| conn.curvature(y))
            .map(|f| (star4(&f) + f).max_abs())
            .fold(0.0, fold_max);
        let k = chern_number(conn.as_ref(), spec.center, 50.0 * spec.rho, 48, 1e-3 * spec.rho);
        report.constants.insert("instanton_number".into(), k);
        report
            .check("anti-self-duality", "⋆F + F = 0", asd, tol.asd)
            .check("instanton number", "|k| = 1, k = (1/16π²) ∫ F^a∧F^a", (k.abs() - 1.0).abs(), tol.instanton_number);
        report.notes.push("k is negative for anti-self-dual curvature with base orientation dx¹²³⁴".into());
    }
    Ok(report)
}

/// Jacobi identity for fully antisymmetric structure constants `H_abc`
/// with fibre metric `diag(−1, 1, …, 1)`:
/// `max |Σ_e η^ee (H_abe H_ecd + H_bce H_ead + H_cae H_ebd)|`.
pub fn jacobi_residual(h: &[[[i64; 6]; 6]; 6]) -> i64 {
    let eta = [-1i64, 1, 1, 1, 1, 1];
    let mut worst = 0;
    for a in 0..6 {
        for b in 0..6 {
            for c in 0..6 {
                for d in 0..6 {
                    let s: i64 = (0..6)
                        .map(|e| eta[e] * (h[a][b][e] * h[e][c][d] + h[b][c][e] * h[e][a][d] + h[c][a][e] * h[e][b][d]))
                        .sum();
                    worst = worst.max(s.abs());
                }
            }
        }
    }
    worst
}

/// The product `G × R⁴` sweep.
pub fn verify_product_group(
    spec: &InstantonBackgroundSpec,
    points: &[Vec<f64>],
    tol: &Tolerances,
) -> Result<ConditionReport> {
    let bg = build_product_group_background(spec)?;
    let consts = match spec.fibre {
        Fibre::Sl2rSu2 => sl2r_su2_constants(),
        Fibre::Abelian => [[[0; 6]; 6]; 6],
    };
    let spinors = row_spinors("SU2")?;
    let mut report = ConditionReport::new("product-group");
    report
        .check("self-dual structure constants", "H_abc = −(⋆H)_abc on the fibre", structure_constant_self_duality(&consts) as f64, 0.5)
        .check("Jacobi identity", "H_e[ab H^e_cd] = 0", jacobi_residual(&consts) as f64, 0.5);
    let (res, skipped) = sweep(points, |x| point_residuals(&bg, &spinors, x))?;
    report.skipped = skipped;
    no_points(&mut report, res.len());
    common_conditions(&mut report, &res, tol, 8);
    Ok(report)
}
