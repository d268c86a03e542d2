//! Connection coefficients and curvature.
//!
//! Index layout: `Γ^M_{NP}` is stored at `m·n² + a·n + b`, `R^M_{NPQ}` at
//! `((m·n + a)·n + b)·n + c`. Curvature convention:
//!
//! ```text
//! R^M_{NPQ} = ∂_P Γ^M_{QN} − ∂_Q Γ^M_{PN} + Γ^M_{PL} Γ^L_{QN} − Γ^M_{QL} Γ^L_{PN}
//! R_{NQ}    = R^P_{NPQ}
//! ```
//!
//! so the round sphere has positive Ricci curvature.

use super::{gradient, inverse, metric_at, Background, Mat};
use crate::conventions::TORSION_SIGN;
use crate::error::Result;

fn flat_metric(g: &Mat) -> Vec<f64> {
    g.iter().copied().collect()
}

/// Levi-Civita coefficients from central differences of the metric.
pub fn christoffel<B: Background + ?Sized>(bg: &B, x: &[f64]) -> Result<Vec<f64>> {
    let n = bg.dim();
    let g = metric_at(bg, x)?;
    let ginv = inverse(&g)?;
    let f = |y: &[f64]| metric_at(bg, y).map(|m| flat_metric(&m));
    // nalgebra stores column-major; the metric is symmetric so (i, j) order is immaterial.
    let dg = gradient(&f, x, bg.fd())?;
    let d = |p: usize, a: usize, b: usize| dg[p][a + n * b];
    let mut lower = vec![0.0; n * n * n];
    for q in 0..n {
        for a in 0..n {
            for b in 0..n {
                lower[(q * n + a) * n + b] = 0.5 * (d(a, q, b) + d(b, q, a) - d(q, a, b));
            }
        }
    }
    let mut out = vec![0.0; n * n * n];
    for m in 0..n {
        for q in 0..n {
            let c = ginv[(m, q)];
            if c == 0.0 {
                continue;
            }
            for ab in 0..n * n {
                out[m * n * n + ab] += c * lower[q * n * n + ab];
            }
        }
    }
    Ok(out)
}

/// `H^M_{NP}` with the first index raised.
pub(crate) fn raised_h<B: Background + ?Sized>(bg: &B, x: &[f64], ginv: &Mat) -> Vec<f64> {
    let n = bg.dim();
    let h = bg.three_form(x);
    let mut low = vec![0.0; n * n * n];
    for (idx, c) in h.iter() {
        if *c == 0.0 {
            continue;
        }
        let [a, b, d] = [idx[0], idx[1], idx[2]];
        for (p, q, r, s) in [
            (a, b, d, 1.0),
            (b, d, a, 1.0),
            (d, a, b, 1.0),
            (b, a, d, -1.0),
            (a, d, b, -1.0),
            (d, b, a, -1.0),
        ] {
            low[(p * n + q) * n + r] = s * c;
        }
    }
    let mut out = vec![0.0; n * n * n];
    for m in 0..n {
        for q in 0..n {
            let c = ginv[(m, q)];
            if c == 0.0 {
                continue;
            }
            for ab in 0..n * n {
                out[m * n * n + ab] += c * low[q * n * n + ab];
            }
        }
    }
    out
}

/// Coefficients of `∇̂ = ∇ + (1/2)H`, i.e. `Γ^M_{NP} + (s/2) H^M_{NP}`
/// with `s = TORSION_SIGN`.
pub fn torsionful_connection<B: Background + ?Sized>(bg: &B, x: &[f64]) -> Result<Vec<f64>> {
    let mut gamma = christoffel(bg, x)?;
    let ginv = inverse(&metric_at(bg, x)?)?;
    let h = raised_h(bg, x, &ginv);
    let s = 0.5 * TORSION_SIGN as f64;
    gamma.iter_mut().zip(&h).for_each(|(g, t)| *g += s * t);
    Ok(gamma)
}

/// `R^M_{NPQ}` by nested central differences.
pub fn riemann<B: Background + ?Sized>(bg: &B, x: &[f64]) -> Result<Vec<f64>> {
    let n = bg.dim();
    let gam = christoffel(bg, x)?;
    let f = |y: &[f64]| christoffel(bg, y);
    let dgam = gradient(&f, x, bg.fd())?;
    let g3 = |m: usize, a: usize, b: usize| gam[(m * n + a) * n + b];
    let mut out = vec![0.0; n * n * n * n];
    for m in 0..n {
        for a in 0..n {
            for p in 0..n {
                for q in 0..n {
                    let mut v = dgam[p][(m * n + q) * n + a] - dgam[q][(m * n + p) * n + a];
                    for l in 0..n {
                        v += g3(m, p, l) * g3(l, q, a) - g3(m, q, l) * g3(l, p, a);
                    }
                    out[((m * n + a) * n + p) * n + q] = v;
                }
            }
        }
    }
    Ok(out)
}

/// `R_{NQ} = R^P_{NPQ}`, returned as an `n×n` matrix.
pub fn ricci<B: Background + ?Sized>(bg: &B, x: &[f64]) -> Result<Mat> {
    let n = bg.dim();
    Ok(ricci_from(&riemann(bg, x)?, n))
}

pub(crate) fn ricci_from(r: &[f64], n: usize) -> Mat {
    Mat::from_fn(n, n, |a, q| (0..n).map(|p| r[((p * n + a) * n + p) * n + q]).sum())
}

/// Max-abs of `R^M_{[NPQ]}`, the first Bianchi identity.
pub fn bianchi_residual(r: &[f64], n: usize) -> f64 {
    let at = |m: usize, a: usize, p: usize, q: usize| r[((m * n + a) * n + p) * n + q];
    let mut worst = 0.0f64;
    for m in 0..n {
        for a in 0..n {
            for p in 0..n {
                for q in 0..n {
                    let s = at(m, a, p, q) + at(m, p, q, a) + at(m, q, a, p);
                    worst = worst.max(s.abs());
                }
            }
        }
    }
    worst
}

/// Max-abs of `∇_M g_{NP}` for the given connection coefficients, with the
/// metric derivative taken by finite differences.
pub fn metric_compatibility<B: Background + ?Sized>(bg: &B, x: &[f64], conn: &[f64]) -> Result<f64> {
    let n = bg.dim();
    let g = metric_at(bg, x)?;
    let f = |y: &[f64]| metric_at(bg, y).map(|m| flat_metric(&m));
    let dg = gradient(&f, x, bg.fd())?;
    let mut worst = 0.0f64;
    for m in 0..n {
        for a in 0..n {
            for b in 0..n {
                let mut v = dg[m][a + n * b];
                for l in 0..n {
                    v -= conn[(l * n + m) * n + a] * g[(l, b)] + conn[(l * n + m) * n + b] * g[(a, l)];
                }
                worst = worst.max(v.abs());
            }
        }
    }
    Ok(worst)
}

/// `(L_v g)_{MN} = v^P ∂_P g_{MN} + g_{PN} ∂_M v^P + g_{MP} ∂_N v^P`.
pub fn lie_derivative_metric<B: Background + ?Sized>(
    bg: &B,
    v: &dyn Fn(&[f64]) -> Vec<f64>,
    x: &[f64],
) -> Result<Mat> {
    let n = bg.dim();
    let g = metric_at(bg, x)?;
    let f = |y: &[f64]| metric_at(bg, y).map(|m| flat_metric(&m));
    let dg = gradient(&f, x, bg.fd())?;
    let vf = |y: &[f64]| -> Result<Vec<f64>> {
        super::check_domain(bg, y)?;
        Ok(v(y))
    };
    let dv = gradient(&vf, x, bg.fd())?;
    let v0 = v(x);
    Ok(Mat::from_fn(n, n, |m, a| {
        let mut s = (0..n).map(|p| v0[p] * dg[p][m + n * a]).sum::<f64>();
        s += (0..n).map(|p| g[(p, a)] * dv[m][p] + g[(m, p)] * dv[a][p]).sum::<f64>();
        s
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::RealForm;
    use crate::numgeom::{max_abs, Flat, FnBackground};

    #[test]
    fn flat_minkowski_has_no_connection() {
        let bg = Flat::minkowski();
        let x = [0.3; 10];
        assert!(max_abs(&christoffel(&bg, &x).unwrap()) < 1e-12);
        assert!(max_abs(&riemann(&bg, &x).unwrap()) < 1e-10);
    }

    #[test]
    fn conformally_flat_matches_closed_form() {
        // g = h δ, Γ^i_{jk} = (δ_ij ∂_k f + δ_ik ∂_j f − δ_jk ∂_i f) with f = (1/2) log h.
        let h = |x: &[f64]| 1.0 + 0.3 * x[0] * x[0] + 0.2 * (x[1] * x[2]).sin();
        let bg = FnBackground::new(4, move |x| Mat::identity(4, 4) * h(x));
        let x = [0.4, -0.7, 1.1, 0.2];
        let gam = christoffel(&bg, &x).unwrap();
        let hx = h(&x);
        let dh = [0.6 * x[0], 0.2 * x[2] * (x[1] * x[2]).cos(), 0.2 * x[1] * (x[1] * x[2]).cos(), 0.0];
        let df: Vec<f64> = dh.iter().map(|d| 0.5 * d / hx).collect();
        let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let want = delta(i, j) * df[k] + delta(i, k) * df[j] - delta(j, k) * df[i];
                    assert!((gam[(i * 4 + j) * 4 + k] - want).abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn round_sphere_has_positive_ricci() {
        // S² of radius 2 in (θ, φ): R_ij = g_ij / r².
        let bg = FnBackground::new(2, |x| {
            Mat::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 4.0 * x[0].sin().powi(2)])
        });
        let x = [0.9, 0.1];
        let ric = ricci(&bg, &x).unwrap();
        let g = bg.metric(&x);
        for a in 0..2 {
            for b in 0..2 {
                assert!((ric[(a, b)] - g[(a, b)] / 4.0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn pp_wave_ricci() {
        // 2 du dv + V dv² + dx² in (u, v, x, y) with V = x³ − 3xy² + x² + y²:
        // only R_vv = −(1/2) ∂²V = −2 survives.
        let v = |x: &[f64]| x[2].powi(3) - 3.0 * x[2] * x[3] * x[3] + x[2] * x[2] + x[3] * x[3];
        let bg = FnBackground::new(4, move |x| {
            let mut g = Mat::zeros(4, 4);
            g[(0, 1)] = 1.0;
            g[(1, 0)] = 1.0;
            g[(1, 1)] = v(x);
            g[(2, 2)] = 1.0;
            g[(3, 3)] = 1.0;
            g
        });
        let ric = ricci(&bg, &[0.2, -0.4, 0.5, 0.8]).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let want = if (a, b) == (1, 1) { -2.0 } else { 0.0 };
                assert!((ric[(a, b)] - want).abs() < 1e-6, "R_{a}{b} = {}", ric[(a, b)]);
            }
        }
    }

    #[test]
    fn curved_metric_bianchi_and_symmetry() {
        let bg = FnBackground::new(3, |x| {
            let mut g = Mat::identity(3, 3);
            g[(0, 0)] = 1.0 + 0.3 * x[1] * x[1];
            g[(0, 2)] = 0.1 * x[0];
            g[(2, 0)] = 0.1 * x[0];
            g[(1, 1)] = (0.4 * x[2]).exp();
            g
        });
        let x = [0.3, 0.5, -0.2];
        let r = riemann(&bg, &x).unwrap();
        assert!(bianchi_residual(&r, 3) < 1e-8);
        let ric = ricci_from(&r, 3);
        assert!((ric.clone() - ric.transpose()).abs().max() < 1e-8);
        let gam = christoffel(&bg, &x).unwrap();
        assert!(metric_compatibility(&bg, &x, &gam).unwrap() < 1e-8);
    }

    #[test]
    fn torsion_keeps_metric_compatibility() {
        let bg = FnBackground::new(3, |x| {
            let mut g = Mat::identity(3, 3);
            g[(1, 1)] = 1.0 + x[0] * x[0];
            g
        })
        .with_three_form(|x| RealForm::basis(3, &[0, 1, 2], 0.7 + x[2]));
        let x = [0.2, 0.1, 0.3];
        let conn = torsionful_connection(&bg, &x).unwrap();
        assert!(metric_compatibility(&bg, &x, &conn).unwrap() < 1e-8);
        // Torsion part lowered on its first index is antisymmetric in the other two.
        let gam = christoffel(&bg, &x).unwrap();
        let g = bg.metric(&x);
        let t: Vec<f64> = conn.iter().zip(&gam).map(|(a, b)| a - b).collect();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let low = |p: usize, q: usize, r: usize| {
                        (0..3).map(|m| g[(p, m)] * t[(m * 3 + q) * 3 + r]).sum::<f64>()
                    };
                    assert!((low(a, b, c) + low(a, c, b)).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn lie_derivative_of_sphere_metric() {
        // Round S² in (θ, φ): ∂_φ is Killing, ∂_θ is not.
        let bg = FnBackground::new(2, |x| Mat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, x[0].sin().powi(2)]));
        let x = [0.7, 0.3];
        let rot = lie_derivative_metric(&bg, &|_| vec![0.0, 1.0], &x).unwrap();
        assert!(rot.abs().max() < 1e-12);
        let tilt = lie_derivative_metric(&bg, &|_| vec![1.0, 0.0], &x).unwrap();
        assert!((tilt[(1, 1)] - (2.0 * 0.7f64).sin()).abs() < 1e-9);
        // Dilation of flat space: L_x δ = 2δ.
        let flat = Flat::euclidean(3);
        let d = lie_derivative_metric(&flat, &|y| y.to_vec(), &[0.2, 0.5, -0.1]).unwrap();
        assert!((d - Mat::identity(3, 3) * 2.0).abs().max() < 1e-10);
    }
}
