use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[path = "../../tests/support/pullback.rs"]
mod pullback;

use super::*;
use pullback::{j0, PulledBack};
use crate::numgeom::{spin_connection, Background, Flat, FdConfig, FnBackground};
use crate::solutions::{
    build_half_bps_su2, build_string_background, lift_base_points, shell_points, su2_maurer_cartan,
    InstantonBackgroundSpec, StringBackgroundSpec,
};

fn random_spd(n: usize, rng: &mut ChaCha8Rng) -> Mat {
    let a = Mat::from_fn(n, n, |_, _| rng.gen_range(-0.5..0.5));
    Mat::identity(n, n) + a.transpose() * a
}

fn random_form(n: usize, k: usize, rng: &mut ChaCha8Rng) -> RealForm {
    let m = subsets(n, k).masks.len();
    RealForm::from_components(n, k, (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect())
}

fn volume(g: &Mat, orientation: i8) -> RealForm {
    let n = g.nrows();
    RealForm::scalar(n, orientation as f64 * g.determinant().sqrt()).wedge(&RealForm::basis(n, &(0..n).collect::<Vec<_>>(), 1.0))
}

#[test]
fn star_squares_to_sign_on_full_bases() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in SLICE_DIMS {
        let g = random_spd(n, &mut rng);
        for o in [1i8, -1] {
            for k in 0..=n {
                let sign = if (k * (n - k)) % 2 == 0 { 1.0 } else { -1.0 };
                for &m in &subsets(n, k).masks {
                    let a = RealForm::basis(n, &mask_to_tuple(m), 1.0);
                    let ss = hodge_star(&g, o, &hodge_star(&g, o, &a).unwrap()).unwrap();
                    assert!((ss - a.scale(&sign)).max_abs() < 1e-10, "n={n} k={k}");
                }
            }
        }
    }
}

#[test]
fn wedge_with_star_is_inner_product_volume() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in SLICE_DIMS {
        let g = random_spd(n, &mut rng);
        for k in 1..n {
            let (a, b) = (random_form(n, k, &mut rng), random_form(n, k, &mut rng));
            let lhs = a.wedge(&hodge_star(&g, -1, &b).unwrap());
            let rhs = volume(&g, -1).scale(&inner(&g, &a, &b).unwrap());
            assert!((lhs - rhs).max_abs() < 1e-10);
        }
    }
}

#[test]
fn star_of_flat_basis_forms() {
    let g = Mat::identity(4, 4);
    let s = hodge_star(&g, 1, &RealForm::basis(4, &[0], 1.0)).unwrap();
    assert_eq!(s.get(&[1, 2, 3]), 1.0);
    let s = hodge_star(&g, -1, &RealForm::basis(4, &[0, 1], 1.0)).unwrap();
    assert_eq!(s.get(&[2, 3]), -1.0);
    assert!(matches!(hodge_star(&Mat::identity(3, 3), 1, &RealForm::zero(4, 1)), Err(Error::Degree { .. })));
}

#[test]
fn pulled_back_structures_are_hermitian() {
    let s = PulledBack::new(6, 1);
    let x = [0.2, -0.1, 0.3, 0.05, -0.2, 0.1];
    let (g, i) = (s.metric(&x), s.complex(&x));
    assert!((&i * &i + Mat::identity(6, 6)).amax() < 1e-12);
    assert!((i.transpose() * &g * &i - &g).amax() < 1e-12);
    let back = complex_structure(&g, &s.omega(&x)).unwrap();
    assert!((back - i).amax() < 1e-10);
}

#[test]
fn hermitian_torsion_forms_agree_on_integrable_structures() {
    for (n, seed) in [(8, 3), (8, 4), (6, 5), (6, 6)] {
        let s = PulledBack::new(n, seed);
        let slice = s.slice();
        let w = |y: &[f64]| s.omega(y);
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 100);
        for _ in 0..3 {
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.4..0.4)).collect();
            let t = torsion_hermitian(&slice, &w, &x).unwrap();
            assert!(t.contraction.max_abs() > 1e-2, "non-trivial torsion");
            assert!(t.mismatch() < 1e-7, "n={n} mismatch {:e}", t.mismatch());
        }
    }
}

#[test]
fn nijenhuis_vanishes_for_pulled_back_structures() {
    for n in [4, 6, 8] {
        let s = PulledBack::new(n, 20 + n as u64);
        let slice = s.slice();
        let x: Vec<f64> = (0..n).map(|k| 0.1 * k as f64 - 0.2).collect();
        let field = |y: &[f64]| s.complex(y);
        let nij = nijenhuis(&slice, &field, &x).unwrap();
        assert!(nij.iter().all(|v| v.abs() < 1e-8), "n={n}");
        let w = |y: &[f64]| s.omega(y);
        assert!(nijenhuis_of_form(&slice, &w, &x).unwrap().iter().all(|v| v.abs() < 1e-8));
    }
}

#[test]
fn nijenhuis_detects_non_integrable_structure() {
    let n = 4;
    let slice = RiemannianSlice::flat(n).unwrap();
    let a = Mat::from_row_slice(4, 4, &[0.0, 0.3, 0.1, -0.2, 0.2, 0.0, 0.4, 0.1, -0.1, 0.3, 0.0, 0.2, 0.3, -0.2, 0.1, 0.0]);
    let field = move |y: &[f64]| {
        let p = Mat::identity(n, n) + &a * (y[0] + 0.5 * y[2]);
        p.clone().try_inverse().unwrap() * j0(n) * p
    };
    let x = [0.3, 0.1, -0.2, 0.4];
    let nij = nijenhuis(&slice, &field, &x).unwrap();
    let max = nij.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(max > 1e-3, "{max}");
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                assert_eq!(nij[(k * n + i) * n + j], -nij[(k * n + j) * n + i]);
            }
        }
    }
}

fn bump(y: &[f64]) -> f64 {
    let r2: f64 = y.iter().enumerate().map(|(k, v)| (v - 0.1 * k as f64).powi(2)).sum();
    1.0 + 2.0 / (1.0 + r2)
}

fn dlog_bump(y: &[f64]) -> Vec<f64> {
    let r2: f64 = y.iter().enumerate().map(|(k, v)| (v - 0.1 * k as f64).powi(2)).sum();
    let h = bump(y);
    y.iter()
        .enumerate()
        .map(|(k, v)| -4.0 * (v - 0.1 * k as f64) / (1.0 + r2).powi(2) / h)
        .collect()
}

/// Fit `θ = c d log h` and return `(c, residual)`.
fn conformal_coefficient(theta: &RealForm, y: &[f64]) -> (f64, f64) {
    let d = dlog_bump(y);
    let t = theta.components();
    let c = t.iter().zip(&d).map(|(a, b)| a * b).sum::<f64>() / d.iter().map(|b| b * b).sum::<f64>();
    let r = t.iter().zip(&d).fold(0.0f64, |m, (a, b)| m.max((a - c * b).abs()));
    (c, r)
}

fn sample(n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..4).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect()
}

fn assert_coefficient(name: &str, thetas: impl Iterator<Item = (RealForm, Vec<f64>)>, expected: f64) {
    for (theta, y) in thetas {
        let (c, r) = conformal_coefficient(&theta, &y);
        assert!(r < 1e-8, "{name}: θ not proportional to d log h ({r:e})");
        assert!((c - expected).abs() < 1e-7, "{name}: coefficient {c}");
    }
}

/// Conformal families `g = h δ` with the structure forms rescaled by the
/// matching power of `h`: the Lee forms are fixed multiples of `d log h`,
/// frozen from the finite-difference evaluation.
#[test]
fn lee_forms_on_conformal_families() {
    let spin7 = case_structure(Case::Spin7).unwrap();
    let su4 = case_structure(Case::SU4).unwrap();
    let su3 = case_structure(Case::SU3).unwrap();
    let su2 = case_structure(Case::SU2).unwrap();
    let g2 = case_structure(Case::G2).unwrap();
    let scaled = |f: &RealForm, p: f64| {
        let f = f.clone();
        move |y: &[f64]| f.scale(&bump(y).powf(p))
    };

    let slice = RiemannianSlice::conformal(8, bump).unwrap().with_orientation(spin7.orientation);
    let phi = scaled(spin7.form("phi"), 2.0);
    assert_coefficient("spin7", sample(8, 1).into_iter().map(|y| (lee_form_spin7(&slice, &phi, &y).unwrap(), y)), 7.0 / 3.0);

    let slice = RiemannianSlice::conformal(8, bump).unwrap().with_orientation(su4.orientation);
    let w = scaled(su4.form("omega"), 1.0);
    let chi = scaled(su4.form("re_chi"), 2.0);
    assert_coefficient("hermitian 8", sample(8, 2).into_iter().map(|y| (lee_form_hermitian(&slice, &w, &y).unwrap(), y)), 3.0);
    assert_coefficient("re chi 8", sample(8, 3).into_iter().map(|y| (lee_form_re_chi(&slice, &chi, &y).unwrap(), y)), 2.0);

    let slice = RiemannianSlice::conformal(6, bump).unwrap().with_orientation(su3.orientation);
    let w = scaled(su3.form("omega"), 1.0);
    let chi = scaled(su3.form("re_chi"), 1.5);
    assert_coefficient("hermitian 6", sample(6, 4).into_iter().map(|y| (lee_form_hermitian(&slice, &w, &y).unwrap(), y)), 2.0);
    assert_coefficient("re chi 6", sample(6, 5).into_iter().map(|y| (lee_form_re_chi(&slice, &chi, &y).unwrap(), y)), 1.5);

    let slice = RiemannianSlice::conformal(4, bump).unwrap().with_orientation(su2.orientation);
    let w = scaled(su2.form("omega_1"), 1.0);
    assert_coefficient("hermitian 4", sample(4, 6).into_iter().map(|y| (lee_form_hermitian(&slice, &w, &y).unwrap(), y)), 1.0);

    let slice = RiemannianSlice::conformal(7, bump).unwrap().with_orientation(g2.orientation);
    let phi = scaled(g2.form("phi"), 1.5);
    assert_coefficient("g2", sample(7, 7).into_iter().map(|y| (lee_form_g2(&slice, &phi, &y).unwrap(), y)), 2.0);
}

#[test]
fn lee_form_rejects_invalid_structures() {
    let slice = RiemannianSlice::flat(8).unwrap();
    let bad = |_: &[f64]| RealForm::basis(8, &[0, 1, 2, 3], 1.0);
    assert!(matches!(lee_form_spin7(&slice, &bad, &[0.0; 8]), Err(Error::NotSelfDual(_))));
    let bad = |_: &[f64]| RealForm::basis(8, &[0, 1], 2.0);
    assert!(matches!(lee_form_hermitian(&slice, &bad, &[0.0; 8]), Err(Error::NotComplex(_))));
    assert!(matches!(RiemannianSlice::flat(5), Err(Error::Spec(_))));
    assert!(matches!(slice.form("phi"), Err(Error::MissingField(_))));
}

/// The torsion of a conformally flat Spin(7) structure parallelises `φ`;
/// the opposite sign does not.
#[test]
fn spin7_torsion_parallelises_phi() {
    let cs = case_structure(Case::Spin7).unwrap();
    let v = |y: &[f64]| Mat::identity(8, 8) * bump(y).sqrt();
    let slice = RiemannianSlice::conformal(8, bump).unwrap().with_orientation(cs.orientation);
    let p0 = cs.form("phi").clone();
    let phi = move |y: &[f64]| p0.scale(&bump(y).powi(2));
    let x = [0.3, -0.2, 0.5, 0.1, 0.0, -0.4, 0.2, 0.6];
    for (sgn, parallel) in [(1.0, true), (-1.0, false)] {
        let (sl, ph) = (slice.clone(), phi.clone());
        let r = parallel_residual(8, v, move |y| torsion_spin7(&sl, &ph, y).unwrap().scale(&sgn), cs.form("phi"), &x);
        assert_eq!(r < 1e-8, parallel, "sign {sgn}: {r:e}");
    }
    assert!(torsion_spin7(&slice, &phi, &x).unwrap().max_abs() > 1e-2);
}

#[test]
fn structure_forms_have_the_standard_algebra() {
    let cs = case_structure(Case::Spin7).unwrap();
    let phi = cs.form("phi");
    let id = Mat::identity(8, 8);
    assert!((hodge_star(&id, cs.orientation, phi).unwrap() - phi.clone()).max_abs() < 1e-12);
    assert!((phi.wedge(phi).components()[0] - 14.0 * cs.orientation as f64).abs() < 1e-12);
    assert_eq!(cs.algebra.len(), 29);

    let cs = case_structure(Case::SU2).unwrap();
    let id4 = Mat::identity(4, 4);
    let is: Vec<Mat> = cs.omegas().iter().map(|w| complex_structure(&id4, cs.form(w)).unwrap()).collect();
    assert!((&is[0] * &is[1] - &is[2]).amax() < 1e-12);
    assert!((&is[1] * &is[2] - &is[0]).amax() < 1e-12);
    assert_eq!(cs.orientation, crate::conventions::PLANE_ORIENTATION);
    assert_eq!(cs.fibre, vec![0, 1, 2, 5, 6, 7]);

    let cs = case_structure(Case::G2).unwrap();
    let phi = cs.form("phi");
    let id7 = Mat::identity(7, 7);
    for x in 0..7 {
        for y in 0..7 {
            let ix = RealForm::basis(7, &[x], 1.0);
            let iy = RealForm::basis(7, &[y], 1.0);
            let cx = interior_vector(phi, &ix);
            let cy = interior_vector(phi, &iy);
            let top = cx.wedge(&cy).wedge(phi).components()[0] * cs.orientation as f64;
            assert!((top + if x == y { 6.0 } else { 0.0 }).abs() < 1e-12);
        }
    }
    assert!((inner(&id7, phi, phi).unwrap() - 7.0).abs() < 1e-12);

    let cs = case_structure(Case::SU3).unwrap();
    let (w, chi) = (cs.form("omega"), cs.form("re_chi"));
    assert!(w.wedge(chi).max_abs() < 1e-12);
    assert!((w.wedge(w).wedge(w).components()[0] / 6.0 - cs.orientation as f64).abs() < 1e-12);
}

fn interior_vector(form: &RealForm, v: &RealForm) -> RealForm {
    let (n, k) = (form.dim(), form.degree());
    let mut out = RealForm::zero(n, k - 1);
    for (slot, &m) in subsets(n, k - 1).masks.iter().enumerate() {
        let rest = mask_to_tuple(m);
        out.components_mut()[slot] = (0..n)
            .map(|a| {
                let mut idx = vec![a];
                idx.extend(&rest);
                v.components()[a] * form.get(&idx)
            })
            .sum();
    }
    out
}

/// SU(2) × R⁴ with `φ = e^{123} + Σ e^p ∧ ω_p`: the torsion is a multiple of
/// `e^{123}` and parallelises `φ`.
#[test]
fn g2_torsion_of_group_times_flat_space() {
    let cs = case_structure(Case::G2).unwrap();
    let radius = 1.3;
    let vielbein = move |x: &[f64]| {
        let (_, mc) = su2_maurer_cartan([x[0], x[1], x[2]]);
        let mut e = Mat::identity(7, 7);
        for a in 0..3 {
            for k in 0..3 {
                e[(a, k)] = radius * mc[a][k];
            }
        }
        e
    };
    let x0 = [0.4, 1.1, -0.3, 0.2, 0.5, -0.7, 0.1];
    let o = cs.orientation * vielbein(&x0).determinant().signum() as i8;
    let slice = RiemannianSlice::new(7, move |x| vielbein(x).transpose() * vielbein(x), o).unwrap();
    let p0 = cs.form("phi").clone();
    let phi = move |x: &[f64]| cases::transform(&p0, &vielbein(x));
    let theta = lee_form_g2(&slice, &phi, &x0).unwrap();
    assert!(theta.max_abs() < 1e-8);
    let h_coord = torsion_g2(&slice, &phi, &x0).unwrap();
    let e_inv = vielbein(&x0).try_inverse().unwrap();
    let h_frame = cases::transform(&h_coord, &e_inv);
    let c = h_frame.get(&[0, 1, 2]);
    assert!(c.abs() > 0.1);
    assert!((h_frame.clone() - RealForm::basis(7, &[0, 1, 2], c)).max_abs() < 1e-8, "{h_frame:?}");

    let r = parallel_residual(7, vielbein, move |x| torsion_g2(&slice, &phi, x).unwrap(), cs.form("phi"), &x0);
    assert!(r < 1e-8, "{r:e}");
}

fn summary(r: &crate::report::ConditionReport) -> String {
    r.conditions.iter().map(|c| format!("{}={:.1e}", c.name, c.max_residual)).collect::<Vec<_>>().join(", ")
}

#[test]
fn flat_data_passes_every_case() {
    let flat = Flat::minkowski();
    let pts = vec![vec![0.1; 10], vec![0.3, -0.2, 0.5, 1.0, -1.0, 0.0, 0.7, 0.2, -0.4, 0.9]];
    for c in Case::ALL {
        let r = condition_report(c, &flat, &pts, 1e-10).unwrap();
        assert!(r.pass(), "{c}: {}", summary(&r));
        assert!(!r.conditions.is_empty());
    }
}

#[test]
fn string_background_passes_non_compact_cases() {
    let mut far = [0.0; 8];
    far[0] = 1.5;
    let bg = build_string_background(StringBackgroundSpec::new(vec![[0.0; 8], far], vec![1.0, 0.5])).unwrap();
    let pts = vec![vec![0.3, 0.8, -0.6, 1.1, 0.4, 0.2, 0.7, -0.5, 0.9, 0.3], vec![0.0; 10]];
    for c in [Case::Spin7, Case::SU4, Case::Sp2AndLower, Case::R8] {
        let r = condition_report(c, &bg, &pts, 1e-6).unwrap();
        assert!(r.pass(), "{c}: {}", summary(&r));
        assert_eq!(r.skipped.len(), 1);
    }
}

#[test]
fn su2_background_passes_su2_case() {
    let bg = build_half_bps_su2(&InstantonBackgroundSpec::new(0.8)).unwrap();
    let pts = lift_base_points(&shell_points(3, [0.0; 4], 0.3, 3.0, 1), 2);
    let r = condition_report(Case::SU2, &bg, &pts, 1e-6).unwrap();
    assert!(r.pass(), "{}", summary(&r));
    assert!(r.get("curvature").unwrap().max_residual < 1e-10);
}

/// The half-BPS background with its dilaton doubled.
struct WrongDilaton<B>(B);

impl<B: Background> Background for WrongDilaton<B> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn metric(&self, x: &[f64]) -> Mat {
        self.0.metric(x)
    }
    fn three_form(&self, x: &[f64]) -> RealForm {
        self.0.three_form(x)
    }
    fn dilaton(&self, x: &[f64]) -> f64 {
        2.0 * self.0.dilaton(x)
    }
    fn vielbein(&self, x: &[f64]) -> Option<Mat> {
        self.0.vielbein(x)
    }
    fn in_domain(&self, x: &[f64]) -> bool {
        self.0.in_domain(x)
    }
    fn fd(&self) -> &FdConfig {
        self.0.fd()
    }
}

#[test]
fn wrong_dilaton_fails_su2_case() {
    let bg = WrongDilaton(build_half_bps_su2(&InstantonBackgroundSpec::new(0.8)).unwrap());
    let pts = lift_base_points(&shell_points(2, [0.0; 4], 0.3, 3.0, 1), 2);
    let r = condition_report(Case::SU2, &bg, &pts, 1e-6).unwrap();
    assert!(!r.get("dilaton and Lee form").unwrap().pass);
    assert!(r.get("curvature").unwrap().pass);
}

#[test]
fn missing_vielbein_is_reported() {
    let bg = FnBackground::new(10, |_| {
        let mut g = Mat::identity(10, 10);
        g[(0, 0)] = -1.0;
        g
    });
    let err = condition_report(Case::R8, &bg, &[vec![0.0; 10]], 1e-6).unwrap_err();
    assert!(matches!(err, Error::MissingField(ref m) if m.contains("vielbein")));
}

#[test]
fn case_names_round_trip() {
    for c in Case::ALL {
        assert_eq!(c.name().parse::<Case>().unwrap(), c);
        assert_eq!(serde_json::to_value(c).unwrap(), c.name());
    }
    assert!("E8".parse::<Case>().is_err());
}


/// Largest `|ω̂_M · τ|` for a frame-constant form `τ`, with `∇̂` built from `H`.
fn parallel_residual(
    n: usize,
    vielbein: impl Fn(&[f64]) -> Mat + Send + Sync + Clone + 'static,
    h: impl Fn(&[f64]) -> RealForm + Send + Sync + 'static,
    tau: &RealForm,
    x: &[f64],
) -> f64 {
    let v2 = vielbein.clone();
    let bg = FnBackground::new(n, move |y| v2(y).transpose() * v2(y))
        .with_eta(vec![1.0; n])
        .with_vielbein(vielbein)
        .with_three_form(h);
    spin_connection(&bg, x)
        .unwrap()
        .iter()
        .map(|w| {
            let lam = Mat::from_fn(n, n, |m, a| 0.5 * (w[(a, m)] - w[(m, a)]));
            interior_complex(&lam, tau).max_abs()
        })
        .fold(0.0, f64::max)
}
