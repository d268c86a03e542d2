//! Spin connection with torsion and the gravitino residual.
//!
//! `ω̂_M{}^A{}_B = e^A_N (∂_M E_B^N + Γ̂^N_{MP} E_B^P)`, where `E` is the
//! inverse vielbein and `Γ̂` the torsionful connection. The residual is
//! `∇̂_M ε = (1/4) ω̂_{M,AB} Γ^{AB} ε` for a frame-constant `ε`.

use num_complex::Complex64;

use super::{check_domain, gradient, inverse, torsionful_connection, Background, Mat};
use crate::clifford::{gamma_product_raw, NumSpinor};
use crate::error::{Error, Result};
use crate::form::{mask_to_tuple, subsets, RealForm};
use super::fields::dense3;

fn vielbein_at<B: Background + ?Sized>(bg: &B, y: &[f64]) -> Result<Mat> {
    check_domain(bg, y)?;
    bg.vielbein(y).ok_or(Error::MissingVielbein)
}

/// `max |η_AB e^A_M e^B_N − g_MN|`.
pub fn vielbein_residual<B: Background + ?Sized>(bg: &B, x: &[f64]) -> Result<f64> {
    let e = vielbein_at(bg, x)?;
    let eta = Mat::from_diagonal(&nalgebra::DVector::from_vec(bg.frame_metric()));
    Ok((e.transpose() * eta * &e - bg.metric(x)).abs().max())
}

/// `ω̂_{M,AB}` for every coordinate direction `M`, frame indices lowered with η.
pub fn spin_connection<B: Background + ?Sized>(bg: &B, x: &[f64]) -> Result<Vec<Mat>> {
    let n = bg.dim();
    let e = vielbein_at(bg, x)?;
    let inv = |y: &[f64]| -> Result<Vec<f64>> {
        let ey = vielbein_at(bg, y)?;
        Ok(inverse(&ey)?.iter().copied().collect())
    };
    let big_e = inverse(&e)?;
    let d_e = gradient(&inv, x, bg.fd())?;
    let conn = torsionful_connection(bg, x)?;
    let eta = bg.frame_metric();
    let mut out = Vec::with_capacity(n);
    for m in 0..n {
        // column-major flattening: entry (N, B) sits at N + n·B
        let de = &d_e[m];
        let w = Mat::from_fn(n, n, |a, b| {
            let mut v = 0.0;
            for nn in 0..n {
                let mut t = de[nn + n * b];
                for p in 0..n {
                    t += conn[(nn * n + m) * n + p] * big_e[(p, b)];
                }
                v += e[(a, nn)] * t;
            }
            eta[a] * v
        });
        out.push(w);
    }
    Ok(out)
}

/// `∇̂_M ε` for each coordinate direction, `ε` constant in the frame.
pub fn gravitino_residual<B: Background + ?Sized>(
    bg: &B,
    eps: &NumSpinor,
    x: &[f64],
) -> Result<Vec<NumSpinor>> {
    if bg.dim() != 10 {
        return Err(Error::Spec("gravitino residual needs a 10-dimensional background".into()));
    }
    let omega = spin_connection(bg, x)?;
    let eta = bg.frame_metric();
    Ok(omega
        .iter()
        .map(|w| {
            let mut out = NumSpinor::zero();
            for a in 0..10 {
                for b in a + 1..10 {
                    let c = 0.25 * (w[(a, b)] - w[(b, a)]) * eta[a] * eta[b];
                    if c == 0.0 {
                        continue;
                    }
                    out = out + gamma_product_raw([a, b].into_iter(), eps).scale(&Complex64::new(c, 0.0));
                }
            }
            out
        })
        .collect())
}

/// Frame components `∂_AΦ` and `H_{ABC}` at `x`.
pub fn frame_data<B: Background + ?Sized>(bg: &B, x: &[f64]) -> Result<(Vec<f64>, RealForm)> {
    let n = bg.dim();
    let e = vielbein_at(bg, x)?;
    let big_e = inverse(&e)?;
    let phi = |y: &[f64]| -> Result<Vec<f64>> {
        check_domain(bg, y)?;
        Ok(vec![bg.dilaton(y)])
    };
    let dphi: Vec<f64> = gradient(&phi, x, bg.fd())?.into_iter().map(|v| v[0]).collect();
    let frame_dphi = (0..n).map(|a| (0..n).map(|m| big_e[(m, a)] * dphi[m]).sum()).collect();
    let h = dense3(&bg.three_form(x));
    let mut out = RealForm::zero(n, 3);
    for (slot, &mask) in subsets(n, 3).masks.iter().enumerate() {
        let idx = mask_to_tuple(mask);
        let mut v = 0.0;
        for p in 0..n {
            let ep = big_e[(p, idx[0])];
            if ep == 0.0 {
                continue;
            }
            for q in 0..n {
                let eq = big_e[(q, idx[1])];
                if eq == 0.0 {
                    continue;
                }
                for r in 0..n {
                    v += ep * eq * big_e[(r, idx[2])] * h[(p * n + q) * n + r];
                }
            }
        }
        out.components_mut()[slot] = v;
    }
    Ok((frame_dphi, out))
}

/// Largest amplitude modulus across all directions.
pub fn spinor_max(v: &[NumSpinor]) -> f64 {
    v.iter().flat_map(|s| s.amplitudes().iter().map(|a| a.norm())).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::ExactSpinor;
    use crate::numgeom::{Flat, FnBackground};

    #[test]
    fn flat_space_constant_spinor() {
        let eps = ExactSpinor::one().to_c64();
        let r = gravitino_residual(&Flat::minkowski(), &eps, &[0.2; 10]).unwrap();
        assert!(spinor_max(&r) < 1e-12);
    }

    #[test]
    fn missing_vielbein_is_an_error() {
        let bg = FnBackground::new(10, |_| Mat::identity(10, 10));
        let eps = ExactSpinor::one().to_c64();
        assert!(matches!(gravitino_residual(&bg, &eps, &[0.0; 10]), Err(Error::MissingVielbein)));
    }

    #[test]
    fn rotated_frame_on_flat_space() {
        // A position-dependent rotation of the frame on flat space: the spin
        // connection is pure gauge, ω_{M,12} = −∂_M θ for e^1 = cos θ dx^1 + sin θ dx^2.
        let bg = FnBackground::new(3, |_| Mat::identity(3, 3)).with_vielbein(|x| {
            let t = 0.3 * x[0] + x[2] * x[2];
            let (c, s) = (t.cos(), t.sin());
            Mat::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, c, s, 0.0, -s, c])
        });
        let x = [0.1, 0.4, 0.5];
        assert!(vielbein_residual(&bg, &x).unwrap() < 1e-14);
        let w = spin_connection(&bg, &x).unwrap();
        let dt = [0.3, 0.0, 1.0];
        for m in 0..3 {
            assert!((w[m][(1, 2)] + dt[m]).abs() < 1e-9, "{m}: {}", w[m][(1, 2)]);
            assert!((w[m][(1, 2)] + w[m][(2, 1)]).abs() < 1e-9);
        }
    }
}
