//! Field-equation residuals and exterior derivatives.
//!
//! ```text
//! E_{MN}  = R_{MN} − (1/4) H_{MLA} H_N^{LA} + 2 ∇_M ∂_N Φ
//! LH_{PR} = ∇_M (e^{−2Φ} H^M_{PR})
//! ```

use super::curvature::ricci_from;
use super::{check_domain, christoffel, gradient, inverse, metric_at, partial, riemann, Background, FdConfig, Mat};
use crate::error::Result;
use crate::form::{mask_to_tuple, subsets, RealForm};

/// Both residual tensors at one point.
#[derive(Clone, Debug)]
pub struct FieldResidual {
    pub e: Mat,
    pub lh: Mat,
}

impl FieldResidual {
    pub fn e_max(&self) -> f64 {
        self.e.abs().max()
    }
    pub fn lh_max(&self) -> f64 {
        self.lh.abs().max()
    }
    pub fn max(&self) -> f64 {
        self.e_max().max(self.lh_max())
    }
}

fn dilaton_at<B: Background + ?Sized>(bg: &B, y: &[f64]) -> Result<Vec<f64>> {
    check_domain(bg, y)?;
    Ok(vec![bg.dilaton(y)])
}

fn dilaton_gradient<B: Background + ?Sized>(bg: &B, y: &[f64]) -> Result<Vec<f64>> {
    let f = |z: &[f64]| dilaton_at(bg, z);
    Ok(gradient(&f, y, bg.fd())?.into_iter().map(|v| v[0]).collect())
}

/// `∇_M ∂_N Φ`.
pub fn covariant_hessian<B: Background + ?Sized>(bg: &B, x: &[f64]) -> Result<Mat> {
    let n = bg.dim();
    let gam = christoffel(bg, x)?;
    let dphi = dilaton_gradient(bg, x)?;
    let f = |y: &[f64]| dilaton_gradient(bg, y);
    let ddphi = gradient(&f, x, bg.fd())?;
    Ok(Mat::from_fn(n, n, |m, a| {
        let sym = 0.5 * (ddphi[m][a] + ddphi[a][m]);
        sym - (0..n).map(|p| gam[(p * n + m) * n + a] * dphi[p]).sum::<f64>()
    }))
}

/// Fully antisymmetric array of a 3-form, `t[(a·n + b)·n + c]`.
pub(crate) fn dense3(h: &RealForm) -> Vec<f64> {
    let n = h.dim();
    let mut t = vec![0.0; n * n * n];
    for (idx, c) in h.iter() {
        let [a, b, d] = [idx[0], idx[1], idx[2]];
        for (p, q, r, s) in [
            (a, b, d, 1.0),
            (b, d, a, 1.0),
            (d, a, b, 1.0),
            (b, a, d, -1.0),
            (a, d, b, -1.0),
            (d, b, a, -1.0),
        ] {
            t[(p * n + q) * n + r] = s * c;
        }
    }
    t
}

/// Raise every index of a dense 3-tensor.
fn raise3(t: &[f64], ginv: &Mat) -> Vec<f64> {
    let n = ginv.nrows();
    let mut step = t.to_vec();
    for slot in 0..3 {
        let mut next = vec![0.0; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let idx = [a, b, c];
                    let mut v = 0.0;
                    for k in 0..n {
                        let g = ginv[(idx[slot], k)];
                        if g == 0.0 {
                            continue;
                        }
                        let mut src = idx;
                        src[slot] = k;
                        v += g * step[(src[0] * n + src[1]) * n + src[2]];
                    }
                    next[(a * n + b) * n + c] = v;
                }
            }
        }
        step = next;
    }
    step
}

/// `E_{MN}` and `LH_{PR}` at `x`.
pub fn field_eq_residual<B: Background + ?Sized>(bg: &B, x: &[f64]) -> Result<FieldResidual> {
    let n = bg.dim();
    let g = metric_at(bg, x)?;
    let ginv = inverse(&g)?;
    let ric = ricci_from(&riemann(bg, x)?, n);
    let hess = covariant_hessian(bg, x)?;

    let h_low = dense3(&bg.three_form(x));
    let h_up = raise3(&h_low, &ginv);
    let e = Mat::from_fn(n, n, |m, a| {
        let mut hh = 0.0;
        for l in 0..n {
            for b in 0..n {
                // H_N^{LB} = g_{NK} H^{KLB}
                let hn: f64 = (0..n).map(|k| g[(a, k)] * h_up[(k * n + l) * n + b]).sum();
                hh += h_low[(m * n + l) * n + b] * hn;
            }
        }
        ric[(m, a)] - 0.25 * hh + 2.0 * hess[(m, a)]
    });

    let density = |y: &[f64]| -> Result<Vec<f64>> {
        let gy = metric_at(bg, y)?;
        let gi = inverse(&gy)?;
        let w = gy.determinant().abs().sqrt() * (-2.0 * bg.dilaton(y)).exp();
        Ok(raise3(&dense3(&bg.three_form(y)), &gi).into_iter().map(|v| v * w).collect())
    };
    let root = g.determinant().abs().sqrt();
    let mut div = Mat::zeros(n, n);
    for m in 0..n {
        let d = partial(&density, x, m, bg.fd())?;
        for p in 0..n {
            for r in 0..n {
                div[(p, r)] += d[(m * n + p) * n + r] / root;
            }
        }
    }
    let lh = &g * div * &g;
    Ok(FieldResidual { e, lh })
}

/// Exterior derivative of a form field at `x`.
///
/// Components on increasing tuples: `(dα)_{M0…Mk} = Σ_i (−1)^i ∂_{Mi} α_{M0…M̂i…Mk}`.
pub fn exterior_derivative(
    field: &dyn Fn(&[f64]) -> Result<RealForm>,
    x: &[f64],
    cfg: &FdConfig,
) -> Result<RealForm> {
    let base = field(x)?;
    let (n, k) = (base.dim(), base.degree());
    let flat = |y: &[f64]| field(y).map(|f| f.components().to_vec());
    let grads = gradient(&flat, x, cfg)?;
    let mut out = RealForm::zero(n, k + 1);
    let basis = subsets(n, k);
    for (slot, &mask) in subsets(n, k + 1).masks.iter().enumerate() {
        let idx = mask_to_tuple(mask);
        let mut v = 0.0;
        for (i, &m) in idx.iter().enumerate() {
            let rest = mask & !(1u16 << m);
            let c = grads[m][basis.position(rest)];
            v += if i % 2 == 0 { c } else { -c };
        }
        out.components_mut()[slot] = v;
    }
    Ok(out)
}

/// `dH` of the background's 3-form.
pub fn dh_residual<B: Background + ?Sized>(bg: &B, x: &[f64]) -> Result<RealForm> {
    let field = |y: &[f64]| -> Result<RealForm> {
        check_domain(bg, y)?;
        Ok(bg.three_form(y))
    };
    exterior_derivative(&field, x, bg.fd())
}

/// Scalar Laplacian `(1/√g) ∂_M (√g g^{MN} ∂_N f)`.
pub fn laplacian<B: Background + ?Sized>(
    bg: &B,
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    x: &[f64],
) -> Result<f64> {
    let n = bg.dim();
    let scalar = |y: &[f64]| -> Result<Vec<f64>> {
        check_domain(bg, y)?;
        Ok(vec![f(y)])
    };
    let flux = |y: &[f64]| -> Result<Vec<f64>> {
        let gy = metric_at(bg, y)?;
        let gi = inverse(&gy)?;
        let root = gy.determinant().abs().sqrt();
        let df: Vec<f64> = gradient(&scalar, y, bg.fd())?.into_iter().map(|v| v[0]).collect();
        Ok((0..n).map(|m| root * (0..n).map(|k| gi[(m, k)] * df[k]).sum::<f64>()).collect())
    };
    let root = metric_at(bg, x)?.determinant().abs().sqrt();
    let mut acc = 0.0;
    for m in 0..n {
        acc += partial(&flux, x, m, bg.fd())?[m];
    }
    Ok(acc / root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numgeom::{Flat, FnBackground};

    #[test]
    fn minkowski_residuals_vanish() {
        let bg = Flat::minkowski();
        let r = field_eq_residual(&bg, &[0.1; 10]).unwrap();
        assert!(r.max() < 1e-10);
    }

    #[test]
    fn constant_form_is_closed() {
        let f = |_: &[f64]| -> Result<RealForm> { Ok(RealForm::basis(5, &[0, 2, 3], 1.7)) };
        let d = exterior_derivative(&f, &[0.3; 5], &FdConfig::default()).unwrap();
        assert!(d.max_abs() < 1e-12);
    }

    #[test]
    fn derivative_of_one_form() {
        // α = x0 x1 dx1 + sin(x2) dx0 → dα = x1 dx0∧dx1 − cos(x2) dx0∧dx2
        let f = |x: &[f64]| -> Result<RealForm> {
            let mut a = RealForm::zero(3, 1);
            a.set(&[1], x[0] * x[1]);
            a.set(&[0], x[2].sin());
            Ok(a)
        };
        let x = [0.3, 0.7, -0.4];
        let d = exterior_derivative(&f, &x, &FdConfig::default()).unwrap();
        assert!((d.get(&[0, 1]) - 0.7).abs() < 1e-10);
        assert!((d.get(&[0, 2]) + (-0.4f64).cos()).abs() < 1e-10);
        assert!(d.get(&[1, 2]).abs() < 1e-10);
    }

    #[test]
    fn d_squared_vanishes() {
        let f = |x: &[f64]| -> Result<RealForm> {
            let mut a = RealForm::zero(4, 1);
            a.set(&[0], x[1] * x[2].cos());
            a.set(&[3], x[0] * x[0] * x[1]);
            Ok(a)
        };
        let cfg = FdConfig::default();
        let df = |y: &[f64]| exterior_derivative(&f, y, &cfg);
        let dd = exterior_derivative(&df, &[0.2, 0.5, 0.1, -0.3], &cfg).unwrap();
        assert!(dd.max_abs() < 1e-8);
    }

    #[test]
    fn laplacian_of_r8_kernel() {
        let bg = Flat::euclidean(8);
        let h = |x: &[f64]| 1.0 + x.iter().map(|v| v * v).sum::<f64>().powi(-3);
        let x = [0.8, -0.3, 0.5, 0.2, 0.1, -0.6, 0.4, 0.3];
        assert!(laplacian(&bg, &h, &x).unwrap().abs() < 1e-8);
        let g = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        assert!((laplacian(&bg, &g, &x).unwrap() - 16.0).abs() < 1e-8);
    }

    #[test]
    fn dilaton_hessian_on_flat_space() {
        let bg = FnBackground::new(3, |_| Mat::identity(3, 3)).with_dilaton(|x| x[0] * x[1] + x[2] * x[2]);
        let hs = covariant_hessian(&bg, &[0.1, 0.2, 0.3]).unwrap();
        let want = Mat::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 2.0]);
        assert!((hs - want).abs().max() < 1e-8);
    }
}
