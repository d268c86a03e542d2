//! Group-manifold fibres and the SU(2) half-BPS backgrounds.
//!
//! Chart slots coincide with frame indices. SL(2,R) occupies slots
//! `0, 1, 2`, the SU(2) fibre `5, 6, 7` and the base R⁴ the remaining
//! `3, 4, 8, 9`, with base coordinates `(x¹, x², x³, x⁴)` placed in slots
//! `(4, 3, 8, 9)`. That ordering makes `dx¹²³⁴ = −e^{3489}`, the
//! orientation of the base plane fixed by `PLANE_ORIENTATION`, so
//! anti-self-dual curvature lands in the SU(2) stabilizer.
//!
//! Both group factors use Euler-type coordinates `(ψ, θ, φ)`. On SU(2),
//! `λ = g⁻¹dg + g⁻¹ A g` with `g = e^{φT₃} e^{θT₂} e^{ψT₃}`, so that
//! `dλ^p + (1/2) ε_pqr λ^q∧λ^r = (Ad_{g⁻¹} F)^p`. On SL(2,R) the
//! left-invariant forms are
//!
//! ```text
//! μ⁰ = dψ + cosh θ dφ
//! μ¹ = −sin ψ dθ + cos ψ sinh θ dφ
//! μ² = −cos ψ dθ − sin ψ sinh θ dφ
//! ```
//!
//! with `dμ⁰ = μ¹∧μ²`, `dμ¹ = −μ²∧μ⁰`, `dμ² = −μ⁰∧μ¹`. The fibre structure
//! constants in the frame are `H_012 = H_567 = −1`, and both factors are
//! parallelised by `∇̂`.

use std::sync::Arc;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::instanton::{build_bpst_connection, half_bps_h, star4, AsdConnection};
use crate::error::{Error, Result};
use crate::form::RealForm;
use crate::numgeom::{Background, FdConfig, Mat};

pub const SL2R_SLOTS: [usize; 3] = [0, 1, 2];
pub const SU2_SLOTS: [usize; 3] = [5, 6, 7];
pub const BASE_SLOTS: [usize; 4] = [4, 3, 8, 9];
/// Fibre frame directions in the order used for structure constants.
pub const FIBRE_FRAME: [usize; 6] = [0, 1, 2, 5, 6, 7];

type C2 = Matrix2<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `T_a = −iσ_a/2`.
pub fn su2_generator(a: usize) -> C2 {
    let h = 0.5;
    match a {
        0 => C2::new(c(0.0, 0.0), c(0.0, -h), c(0.0, -h), c(0.0, 0.0)),
        1 => C2::new(c(0.0, 0.0), c(-h, 0.0), c(h, 0.0), c(0.0, 0.0)),
        _ => C2::new(c(0.0, -h), c(0.0, 0.0), c(0.0, 0.0), c(0.0, h)),
    }
}

/// `exp(α T_a)`.
fn su2_exp(a: usize, alpha: f64) -> C2 {
    let (s, co) = (0.5 * alpha).sin_cos();
    C2::identity().map(|z| z * co) + su2_generator(a).map(|z| z * 2.0 * s)
}

/// Components `X^a` of `X = X^a T_a`.
fn su2_components(x: &C2) -> [f64; 3] {
    std::array::from_fn(|a| (-2.0 * (x * su2_generator(a)).trace()).re)
}

/// Euler coordinates `(ψ, θ, φ)` to `g`, and `g⁻¹ dg` as `[a][coordinate]`.
pub fn su2_maurer_cartan(angles: [f64; 3]) -> (C2, [[f64; 3]; 3]) {
    let [psi, theta, phi] = angles;
    let g = su2_exp(2, phi) * su2_exp(1, theta) * su2_exp(2, psi);
    let ginv = g.adjoint();
    let d_psi = su2_generator(2);
    let e_psi = su2_exp(2, psi);
    let d_theta = e_psi.adjoint() * su2_generator(1) * e_psi;
    let d_phi = ginv * su2_generator(2) * g;
    let cols = [su2_components(&d_psi), su2_components(&d_theta), su2_components(&d_phi)];
    (g, std::array::from_fn(|a| std::array::from_fn(|k| cols[k][a])))
}

/// `M_pq` with `g⁻¹ T_q g = M_pq T_p`.
pub fn adjoint_inverse(g: &C2) -> [[f64; 3]; 3] {
    let ginv = g.adjoint();
    let cols: [[f64; 3]; 3] = std::array::from_fn(|q| su2_components(&(ginv * su2_generator(q) * g)));
    std::array::from_fn(|p| std::array::from_fn(|q| cols[q][p]))
}

/// SL(2,R) left-invariant forms as `[a][coordinate]` in `(ψ, θ, φ)`.
pub fn sl2r_forms(angles: [f64; 3]) -> [[f64; 3]; 3] {
    let [psi, theta, _] = angles;
    let (sp, cp) = psi.sin_cos();
    [
        [1.0, 0.0, theta.cosh()],
        [0.0, -sp, cp * theta.sinh()],
        [0.0, -cp, -sp * theta.sinh()],
    ]
}

fn one_form(slots: &[usize], comps: &[f64]) -> RealForm {
    let mut f = RealForm::zero(10, 1);
    for (s, v) in slots.iter().zip(comps) {
        f.set(&[*s], f.get(&[*s]) + v);
    }
    f
}

fn angles(x: &[f64], slots: [usize; 3]) -> [f64; 3] {
    slots.map(|s| x[s])
}

fn base(x: &[f64]) -> [f64; 4] {
    BASE_SLOTS.map(|s| x[s])
}

/// Self-duality residual of fibre structure constants `H_abc` (frame
/// indices of `FIBRE_FRAME`, metric `diag(−1, 1, …, 1)`), with the fibre
/// oriented so that `vol_fibre ∧ vol_base` is the spacetime orientation:
/// `max |H_abc + (1/3!) ε_abc^{def} H_def|`.
pub fn structure_constant_self_duality(h: &[[[i64; 6]; 6]; 6]) -> i64 {
    // e^{012567} ∧ (−e^{3489}) = −e^{0…9}, so ε_{012345} = −1 on the fibre.
    let eps_sign = -1i64;
    let eta = [-1i64, 1, 1, 1, 1, 1];
    let mut worst = 0;
    for a in 0..6 {
        for b in 0..6 {
            for c in 0..6 {
                if a == b || b == c || a == c {
                    continue;
                }
                let rest: Vec<usize> = (0..6).filter(|i| ![a, b, c].contains(i)).collect();
                let perm = [a, b, c, rest[0], rest[1], rest[2]];
                let inv = (0..6).flat_map(|i| (i + 1..6).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
                let eps = if inv % 2 == 0 { eps_sign } else { -eps_sign };
                let raised = eta[rest[0]] * eta[rest[1]] * eta[rest[2]];
                // (1/3!) Σ over orderings of `rest` = the single sorted term
                let dual = eps * raised * h[rest[0]][rest[1]][rest[2]];
                worst = worst.max((h[a][b][c] + dual).abs());
            }
        }
    }
    worst
}

/// Fully antisymmetric structure constants from a list of `(a, b, c, value)`.
pub fn structure_constants(entries: &[(usize, usize, usize, i64)]) -> [[[i64; 6]; 6]; 6] {
    let mut h = [[[0i64; 6]; 6]; 6];
    for &(a, b, c, v) in entries {
        for (p, q, r, s) in [(a, b, c, 1), (b, c, a, 1), (c, a, b, 1), (b, a, c, -1), (a, c, b, -1), (c, b, a, -1)] {
            h[p][q][r] = s * v;
        }
    }
    h
}

/// Structure constants of sl(2,R) ⊕ su(2) in this chart.
pub fn sl2r_su2_constants() -> [[[i64; 6]; 6]; 6] {
    structure_constants(&[(0, 1, 2, -1), (3, 4, 5, -1)])
}

/// Which Lorentzian fibre sits over the base.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fibre {
    #[serde(rename = "SL2R_x_SU2")]
    Sl2rSu2,
    /// Abelian R⁶, the trivial-connection flat case.
    #[serde(rename = "trivial_G")]
    Abelian,
}

fn default_fibre() -> Fibre {
    Fibre::Sl2rSu2
}

fn default_center() -> [f64; 4] {
    [0.0; 4]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstantonBackgroundSpec {
    pub rho: f64,
    #[serde(default = "default_center")]
    pub center: [f64; 4],
    #[serde(default = "default_fibre")]
    pub fibre: Fibre,
    /// Optional explicit structure constants `(a, b, c, H_abc)` in fibre
    /// labels 0..5; they must agree with the fibre's own.
    #[serde(default)]
    pub structure_constants: Option<Vec<(usize, usize, usize, i64)>>,
    /// Keep the instanton but replace `h` by 1 (negative control).
    #[serde(default)]
    pub constant_h: bool,
    #[serde(default)]
    pub fd: Option<FdConfig>,
}

impl InstantonBackgroundSpec {
    pub fn new(rho: f64) -> Self {
        Self {
            rho,
            center: [0.0; 4],
            fibre: Fibre::Sl2rSu2,
            structure_constants: None,
            constant_h: false,
            fd: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(Error::Spec("instanton size rho must be positive".into()));
        }
        if let Some(fd) = &self.fd {
            fd.validate()?;
        }
        if let Some(entries) = &self.structure_constants {
            if entries.iter().any(|&(a, b, c, _)| a > 5 || b > 5 || c > 5) {
                return Err(Error::Spec("structure constant indices run over 0..5".into()));
            }
            let given = structure_constants(entries);
            let r = structure_constant_self_duality(&given);
            if r != 0 {
                return Err(Error::NotSelfDualAlgebra(r as f64));
            }
            let own = match self.fibre {
                Fibre::Sl2rSu2 => sl2r_su2_constants(),
                Fibre::Abelian => [[[0; 6]; 6]; 6],
            };
            if given != own {
                return Err(Error::Spec("structure constants do not match the chosen fibre".into()));
            }
        }
        Ok(())
    }
}

/// A principal bundle over R⁴ with Lorentzian group fibre, connection `λ`
/// and conformally flat base.
pub struct GroupBundle {
    pub fibre: Fibre,
    pub connection: Option<Arc<dyn AsdConnection + Send + Sync>>,
    pub h: Arc<dyn Fn(&[f64; 4]) -> f64 + Send + Sync>,
    pub dh: Arc<dyn Fn(&[f64; 4]) -> [f64; 4] + Send + Sync>,
    pub fd: FdConfig,
}

impl std::fmt::Debug for GroupBundle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupBundle").field("fibre", &self.fibre).field("fd", &self.fd).finish_non_exhaustive()
    }
}

/// The SU(2) half-BPS background over R⁴ with a single BPST instanton.
pub fn build_half_bps_su2(spec: &InstantonBackgroundSpec) -> Result<GroupBundle> {
    spec.validate()?;
    let fd = spec.fd.clone().unwrap_or_default();
    let (rho, center) = (spec.rho, spec.center);
    if spec.fibre == Fibre::Abelian {
        return Ok(GroupBundle {
            fibre: Fibre::Abelian,
            connection: None,
            h: Arc::new(|_| 1.0),
            dh: Arc::new(|_| [0.0; 4]),
            fd,
        });
    }
    let conn = Arc::new(build_bpst_connection(rho, center));
    if spec.constant_h {
        return Ok(GroupBundle {
            fibre: spec.fibre,
            connection: Some(conn),
            h: Arc::new(|_| 1.0),
            dh: Arc::new(|_| [0.0; 4]),
            fd,
        });
    }
    Ok(GroupBundle {
        fibre: spec.fibre,
        connection: Some(conn),
        h: Arc::new(move |y| half_bps_h(rho, center, y)),
        dh: Arc::new(move |y| {
            let yc: [f64; 4] = std::array::from_fn(|i| y[i] - center[i]);
            let r2: f64 = yc.iter().map(|v| v * v).sum();
            let d = r2 + rho * rho;
            // ∂_i h = 8 y_i [d − 2(r² + 2ρ²)] / d³
            let k = 8.0 * (d - 2.0 * (r2 + 2.0 * rho * rho)) / (d * d * d);
            yc.map(|v| k * v)
        }),
        fd,
    })
}

/// `G × R⁴` with the flat base and no connection.
pub fn build_product_group_background(spec: &InstantonBackgroundSpec) -> Result<GroupBundle> {
    spec.validate()?;
    Ok(GroupBundle {
        fibre: spec.fibre,
        connection: None,
        h: Arc::new(|_| 1.0),
        dh: Arc::new(|_| [0.0; 4]),
        fd: spec.fd.clone().unwrap_or_default(),
    })
}

impl GroupBundle {
    /// `(λ¹, λ², λ³)` as 10-dimensional coordinate 1-forms.
    pub fn lambda(&self, x: &[f64]) -> [RealForm; 3] {
        if self.fibre == Fibre::Abelian {
            return std::array::from_fn(|p| RealForm::basis(10, &[SU2_SLOTS[p]], 1.0));
        }
        let (g, mc) = su2_maurer_cartan(angles(x, SU2_SLOTS));
        let m = adjoint_inverse(&g);
        let a = self.connection.as_ref().map(|c| c.potential(&base(x)));
        std::array::from_fn(|p| {
            let mut f = one_form(&SU2_SLOTS, &mc[p]);
            if let Some(a) = &a {
                let comps: Vec<f64> = (0..4).map(|i| (0..3).map(|q| m[p][q] * a[q][i]).sum()).collect();
                f = f + one_form(&BASE_SLOTS, &comps);
            }
            f
        })
    }

    /// `(μ⁰, μ¹, μ²)` as coordinate 1-forms.
    pub fn mu(&self, x: &[f64]) -> [RealForm; 3] {
        if self.fibre == Fibre::Abelian {
            return std::array::from_fn(|a| RealForm::basis(10, &[SL2R_SLOTS[a]], 1.0));
        }
        let f = sl2r_forms(angles(x, SL2R_SLOTS));
        std::array::from_fn(|a| one_form(&SL2R_SLOTS, &f[a]))
    }

    /// Curvature `F^p = (Ad_{g⁻¹} F_A)^p` as 10-dimensional 2-forms.
    pub fn curvature(&self, x: &[f64]) -> [RealForm; 3] {
        let Some(conn) = &self.connection else {
            return std::array::from_fn(|_| RealForm::zero(10, 2));
        };
        let (g, _) = su2_maurer_cartan(angles(x, SU2_SLOTS));
        let m = adjoint_inverse(&g);
        let fa = conn.curvature(&base(x));
        std::array::from_fn(|p| {
            let mut f = RealForm::zero(4, 2);
            for (q, fq) in fa.iter().enumerate() {
                f = f + fq.scale(&m[p][q]);
            }
            f.embed(10, &BASE_SLOTS)
        })
    }

    /// Base conformal factor at a spacetime point.
    pub fn h_at(&self, x: &[f64]) -> f64 {
        (self.h)(&base(x))
    }

    /// `−⋆_hk dh` pulled back to spacetime.
    pub fn base_torsion(&self, x: &[f64]) -> RealForm {
        let dh = (self.dh)(&base(x));
        let mut f = RealForm::zero(4, 1);
        for (i, v) in dh.iter().enumerate() {
            f.set(&[i], *v);
        }
        (-star4(&f)).embed(10, &BASE_SLOTS)
    }
}

impl Background for GroupBundle {
    fn dim(&self) -> usize {
        10
    }

    fn metric(&self, x: &[f64]) -> Mat {
        let e = self.vielbein(x).expect("group bundle has a frame");
        let mut eta = Mat::identity(10, 10);
        eta[(0, 0)] = -1.0;
        e.transpose() * eta * e
    }

    fn vielbein(&self, x: &[f64]) -> Option<Mat> {
        let mut e = Mat::zeros(10, 10);
        for (a, f) in SL2R_SLOTS.iter().zip(self.mu(x)) {
            for m in 0..10 {
                e[(*a, m)] = f.get(&[m]);
            }
        }
        for (a, f) in SU2_SLOTS.iter().zip(self.lambda(x)) {
            for m in 0..10 {
                e[(*a, m)] = f.get(&[m]);
            }
        }
        let s = self.h_at(x).sqrt();
        for &b in &BASE_SLOTS {
            e[(b, b)] = s;
        }
        Some(e)
    }

    /// `H_012 μ⁰¹² + (1/3) λ^p∧dλ^p + (2/3) λ^p∧F^p − ⋆_hk dh`, using
    /// `dλ^p = F^p − (1/2) ε_pqr λ^q∧λ^r` to write the middle terms as
    /// `λ^p∧F^p − λ¹²³`.
    fn three_form(&self, x: &[f64]) -> RealForm {
        if self.fibre == Fibre::Abelian {
            return RealForm::zero(10, 3);
        }
        let [m0, m1, m2] = self.mu(x);
        let lam = self.lambda(x);
        let f = self.curvature(x);
        let mut h = -m0.wedge(&m1).wedge(&m2);
        for (l, fp) in lam.iter().zip(&f) {
            h = h + l.wedge(fp);
        }
        h = h - lam[0].wedge(&lam[1]).wedge(&lam[2]);
        h + self.base_torsion(x)
    }

    fn dilaton(&self, x: &[f64]) -> f64 {
        0.5 * self.h_at(x).ln()
    }

    fn in_domain(&self, x: &[f64]) -> bool {
        // Euler charts degenerate at θ = 0 on both factors.
        let su2_theta = x[SU2_SLOTS[1]];
        let sl_theta = x[SL2R_SLOTS[1]];
        self.fibre == Fibre::Abelian || (su2_theta.sin().abs() > 1e-2 && sl_theta.abs() > 1e-2)
    }

    fn fd(&self) -> &FdConfig {
        &self.fd
    }
}
