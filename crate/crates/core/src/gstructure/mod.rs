//! G-structures on Riemannian slices: Hodge duals, Lee forms, torsion and
//! integrability of the fundamental forms.
//!
//! Forms are coordinate forms on the slice. Complex structures follow
//! `ω(X, Y) = g(X, IY)`, and `i_I` acts as a derivation,
//! `(i_I α)_{i1…ik} = Σ_s I^m_{i_s} α_{i1…m…ik}`.

mod cases;

pub use cases::{case_structure, condition_report, Case, CaseStructure};

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::SVD;

use crate::error::{Error, Result};
use crate::form::{mask_to_tuple, sort_indices, subsets, RealForm};
use crate::numgeom::{exterior_derivative, inverse, FdConfig, Mat};

pub type MetricField<'a> = Arc<dyn Fn(&[f64]) -> Mat + Send + Sync + 'a>;
pub type FormField<'a> = Arc<dyn Fn(&[f64]) -> RealForm + Send + Sync + 'a>;

/// Dimensions of the slices carrying the structures in use.
pub const SLICE_DIMS: [usize; 4] = [4, 6, 7, 8];

/// A Riemannian chart with an orientation and named form fields.
#[derive(Clone)]
pub struct RiemannianSlice<'a> {
    pub dim: usize,
    pub metric: MetricField<'a>,
    /// `vol = orientation · √g dx^1∧…∧dx^n`.
    pub orientation: i8,
    pub forms: BTreeMap<String, FormField<'a>>,
    pub fd: FdConfig,
}

impl<'a> RiemannianSlice<'a> {
    pub fn new(dim: usize, metric: impl Fn(&[f64]) -> Mat + Send + Sync + 'a, orientation: i8) -> Result<Self> {
        if !SLICE_DIMS.contains(&dim) {
            return Err(Error::Spec(format!("slice dimension {dim} not in {SLICE_DIMS:?}")));
        }
        if orientation.abs() != 1 {
            return Err(Error::Spec("orientation must be ±1".into()));
        }
        Ok(Self { dim, metric: Arc::new(metric), orientation, forms: BTreeMap::new(), fd: FdConfig::default() })
    }

    pub fn flat(dim: usize) -> Result<Self> {
        Self::new(dim, move |_| Mat::identity(dim, dim), 1)
    }

    /// The metric `h δ`.
    pub fn conformal(dim: usize, h: impl Fn(&[f64]) -> f64 + Send + Sync + 'a) -> Result<Self> {
        Self::new(dim, move |x| Mat::identity(dim, dim) * h(x), 1)
    }

    pub fn with_orientation(mut self, orientation: i8) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn with_fd(mut self, fd: FdConfig) -> Self {
        self.fd = fd;
        self
    }

    pub fn with_form(mut self, name: &str, field: impl Fn(&[f64]) -> RealForm + Send + Sync + 'a) -> Self {
        self.forms.insert(name.to_string(), Arc::new(field));
        self
    }

    pub fn form(&self, name: &str) -> Result<&FormField<'a>> {
        self.forms.get(name).ok_or_else(|| Error::MissingField(name.to_string()))
    }

    pub fn metric_at(&self, x: &[f64]) -> Result<Mat> {
        let g = (self.metric)(x);
        if g.nrows() != self.dim || g.iter().any(|v| !v.is_finite()) || !(g.determinant() > 0.0) {
            return Err(Error::SingularMetric);
        }
        Ok(g)
    }

    /// `dα` by central differences of the field.
    pub fn d(&self, field: &(dyn Fn(&[f64]) -> RealForm + Sync), x: &[f64]) -> Result<RealForm> {
        exterior_derivative(&|y: &[f64]| Ok(field(y)), x, &self.fd)
    }

    pub fn star(&self, form: &RealForm, x: &[f64]) -> Result<RealForm> {
        hodge_star(&self.metric_at(x)?, self.orientation, form)
    }
}

fn minor(m: &Mat, rows: &[usize], cols: &[usize]) -> f64 {
    let k = rows.len();
    if k == 0 {
        return 1.0;
    }
    Mat::from_fn(k, k, |a, b| m[(rows[a], cols[b])]).determinant()
}

/// Contravariant components `α^{I}` on sorted tuples.
pub fn raise(ginv: &Mat, form: &RealForm) -> RealForm {
    let (n, k) = (form.dim(), form.degree());
    let mut out = RealForm::zero(n, k);
    let tuples: Vec<Vec<usize>> = subsets(n, k).masks.iter().map(|&m| mask_to_tuple(m)).collect();
    for (slot, i) in tuples.iter().enumerate() {
        out.components_mut()[slot] = form
            .iter()
            .filter(|(_, c)| **c != 0.0)
            .map(|(j, c)| minor(ginv, i, &j) * c)
            .sum();
    }
    out
}

/// `(α, β) = (1/k!) α_{i1…ik} β^{i1…ik}`.
pub fn inner(g: &Mat, a: &RealForm, b: &RealForm) -> Result<f64> {
    let up = raise(&inverse(g)?, b);
    Ok(a.components().iter().zip(up.components()).map(|(x, y)| x * y).sum())
}

/// Hodge dual for the metric `g` and orientation sign.
pub fn hodge_star(g: &Mat, orientation: i8, form: &RealForm) -> Result<RealForm> {
    let (n, k) = (form.dim(), form.degree());
    if k > n || g.nrows() != n {
        return Err(Error::Degree { degree: k, dim: g.nrows() });
    }
    let up = raise(&inverse(g)?, form);
    let vol = orientation as f64 * g.determinant().abs().sqrt();
    let mut out = RealForm::zero(n, n - k);
    let full = (1u16 << n) - 1;
    for (mask, c) in up.iter_masks() {
        if *c == 0.0 {
            continue;
        }
        let rest = full & !mask;
        let mut idx = mask_to_tuple(mask);
        idx.extend(mask_to_tuple(rest));
        let (_, odd) = sort_indices(&idx).expect("complementary tuples");
        let pos = subsets(n, n - k).position(rest);
        out.components_mut()[pos] += if odd { -vol * c } else { vol * c };
    }
    Ok(out)
}

/// `I^m_i = g^{mj} ω_{ji}`, checked against `I² = −1`.
pub fn complex_structure(g: &Mat, omega: &RealForm) -> Result<Mat> {
    let n = g.nrows();
    if omega.degree() != 2 || omega.dim() != n || n % 2 != 0 {
        return Err(Error::Degree { degree: omega.degree(), dim: n });
    }
    let ginv = inverse(g)?;
    let i = Mat::from_fn(n, n, |m, a| (0..n).map(|j| ginv[(m, j)] * omega.get(&[j, a])).sum());
    let res = (&i * &i + Mat::identity(n, n)).amax();
    if res > 1e-8 {
        return Err(Error::NotComplex(res));
    }
    Ok(i)
}

/// `i_I α` for an endomorphism `I` acting on the lower slots.
pub fn interior_complex(i: &Mat, form: &RealForm) -> RealForm {
    let (n, k) = (form.dim(), form.degree());
    let mut out = RealForm::zero(n, k);
    for (slot, &mask) in subsets(n, k).masks.iter().enumerate() {
        let idx = mask_to_tuple(mask);
        let mut v = 0.0;
        for s in 0..k {
            let mut j = idx.clone();
            for m in 0..n {
                let c = i[(m, idx[s])];
                if c != 0.0 {
                    j[s] = m;
                    v += c * form.get(&j);
                }
            }
        }
        out.components_mut()[slot] = v;
    }
    out
}

/// `c ⋆(⋆dτ ∧ τ)`.
fn lee(slice: &RiemannianSlice<'_>, tau: &(dyn Fn(&[f64]) -> RealForm + Sync), x: &[f64], c: f64) -> Result<RealForm> {
    let t = tau(x);
    let dt = slice.d(tau, x)?;
    Ok(slice.star(&slice.star(&dt, x)?.wedge(&t), x)?.scale(&c))
}

fn require(slice: &RiemannianSlice<'_>, form: &RealForm, dims: &[usize], degree: usize) -> Result<()> {
    if !dims.contains(&slice.dim) || form.dim() != slice.dim || form.degree() != degree {
        return Err(Error::Degree { degree: form.degree(), dim: slice.dim });
    }
    Ok(())
}

/// Relative failure of `⋆φ = φ`.
pub fn self_duality_residual(slice: &RiemannianSlice<'_>, phi: &RealForm, x: &[f64]) -> Result<f64> {
    let d = slice.star(phi, x)? - phi.clone();
    Ok(d.max_abs() / phi.max_abs().max(f64::MIN_POSITIVE))
}

/// `θ_φ = −(1/6) ⋆(⋆dφ ∧ φ)` for a self-dual 4-form in eight dimensions.
pub fn lee_form_spin7(slice: &RiemannianSlice<'_>, phi: &(dyn Fn(&[f64]) -> RealForm + Sync), x: &[f64]) -> Result<RealForm> {
    let p = phi(x);
    require(slice, &p, &[8], 4)?;
    let res = self_duality_residual(slice, &p, x)?;
    if res > 1e-8 {
        return Err(Error::NotSelfDual(res));
    }
    lee(slice, phi, x, -1.0 / 6.0)
}

/// `θ_ω = −⋆(⋆dω ∧ ω)`.
pub fn lee_form_hermitian(slice: &RiemannianSlice<'_>, omega: &(dyn Fn(&[f64]) -> RealForm + Sync), x: &[f64]) -> Result<RealForm> {
    let w = omega(x);
    require(slice, &w, &[4, 6, 8], 2)?;
    complex_structure(&slice.metric_at(x)?, &w)?;
    lee(slice, omega, x, -1.0)
}

/// `θ_{Re χ} = −(1/4) ⋆(⋆d Re χ ∧ Re χ)` in eight dimensions and
/// `−(1/2) ⋆(⋆d Re χ ∧ Re χ)` in six.
pub fn lee_form_re_chi(slice: &RiemannianSlice<'_>, re_chi: &(dyn Fn(&[f64]) -> RealForm + Sync), x: &[f64]) -> Result<RealForm> {
    let r = re_chi(x);
    let c = match (slice.dim, r.degree()) {
        (8, 4) => -0.25,
        (6, 3) => -0.5,
        _ => return Err(Error::Degree { degree: r.degree(), dim: slice.dim }),
    };
    lee(slice, re_chi, x, c)
}

/// `θ_φ = −(1/3) ⋆(⋆dφ ∧ φ)` for a 3-form in seven dimensions.
pub fn lee_form_g2(slice: &RiemannianSlice<'_>, phi: &(dyn Fn(&[f64]) -> RealForm + Sync), x: &[f64]) -> Result<RealForm> {
    let p = phi(x);
    require(slice, &p, &[7], 3)?;
    lee(slice, phi, x, -1.0 / 3.0)
}

/// `H = −⋆dφ + ⋆(θ_φ ∧ φ)`.
pub fn torsion_spin7(slice: &RiemannianSlice<'_>, phi: &(dyn Fn(&[f64]) -> RealForm + Sync), x: &[f64]) -> Result<RealForm> {
    let theta = lee_form_spin7(slice, phi, x)?;
    let dphi = slice.d(phi, x)?;
    Ok(slice.star(&theta.wedge(&phi(x)), x)? - slice.star(&dphi, x)?)
}

/// `H = −(1/6)(dφ, ⋆φ) φ + ⋆dφ − ⋆(θ_φ ∧ φ)`.
pub fn torsion_g2(slice: &RiemannianSlice<'_>, phi: &(dyn Fn(&[f64]) -> RealForm + Sync), x: &[f64]) -> Result<RealForm> {
    let theta = lee_form_g2(slice, phi, x)?;
    let p = phi(x);
    let g = slice.metric_at(x)?;
    let dphi = slice.d(phi, x)?;
    let c = inner(&g, &dphi, &slice.star(&p, x)?)?;
    Ok(p.scale(&(-c / 6.0)) + slice.star(&dphi, x)? - slice.star(&theta.wedge(&p), x)?)
}

/// Torsion of a Hermitian structure, computed two ways.
#[derive(Clone, Debug)]
pub struct HermitianTorsion {
    /// `−i_I dω`.
    pub contraction: RealForm,
    /// `⋆(dω∧ω) − ½⋆(θ_ω∧ω∧ω)` in eight dimensions and
    /// `⋆dω − ⋆(θ_ω∧ω)` in six; `None` otherwise.
    pub star: Option<RealForm>,
}

impl HermitianTorsion {
    /// Largest disagreement between the two forms, zero when only one exists.
    pub fn mismatch(&self) -> f64 {
        self.star.as_ref().map_or(0.0, |s| (s.clone() - self.contraction.clone()).max_abs())
    }
}

pub fn torsion_hermitian(
    slice: &RiemannianSlice<'_>,
    omega: &(dyn Fn(&[f64]) -> RealForm + Sync),
    x: &[f64],
) -> Result<HermitianTorsion> {
    let w = omega(x);
    let g = slice.metric_at(x)?;
    let i = complex_structure(&g, &w)?;
    let dw = slice.d(omega, x)?;
    let contraction = -interior_complex(&i, &dw);
    let star = match slice.dim {
        8 => {
            let theta = lee_form_hermitian(slice, omega, x)?;
            let a = slice.star(&dw.wedge(&w), x)?;
            let b = slice.star(&theta.wedge(&w).wedge(&w), x)?;
            Some(a - b.scale(&0.5))
        }
        6 => {
            let theta = lee_form_hermitian(slice, omega, x)?;
            Some(slice.star(&dw, x)? - slice.star(&theta.wedge(&w), x)?)
        }
        _ => None,
    };
    Ok(HermitianTorsion { contraction, star })
}

/// `N^k_{ij}` of an endomorphism field, stored at `[(k·n + i)·n + j]`.
pub fn nijenhuis(slice: &RiemannianSlice<'_>, field: &(dyn Fn(&[f64]) -> Mat + Sync), x: &[f64]) -> Result<Vec<f64>> {
    let n = slice.dim;
    let i0 = field(x);
    let flat = |y: &[f64]| -> Result<Vec<f64>> {
        let m = field(y);
        Ok((0..n * n).map(|s| m[(s / n, s % n)]).collect())
    };
    let grads = crate::numgeom::gradient(&flat, x, &slice.fd)?;
    // ∂_p I^a_b
    let d = |p: usize, a: usize, b: usize| grads[p][a * n + b];
    let mut out = vec![0.0; n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut v = 0.0;
                for m in 0..n {
                    v += i0[(m, i)] * d(m, k, j) - i0[(m, j)] * d(m, k, i);
                    v -= i0[(k, m)] * (d(i, m, j) - d(j, m, i));
                }
                out[(k * n + i) * n + j] = v;
            }
        }
    }
    Ok(out)
}

/// Nijenhuis tensor of `I = g⁻¹ω` for a 2-form field.
pub fn nijenhuis_of_form(slice: &RiemannianSlice<'_>, omega: &(dyn Fn(&[f64]) -> RealForm + Sync), x: &[f64]) -> Result<Vec<f64>> {
    complex_structure(&slice.metric_at(x)?, &omega(x))?;
    let field = |y: &[f64]| -> Mat {
        let g = (slice.metric)(y);
        let ginv = g.try_inverse().unwrap_or_else(|| Mat::from_element(slice.dim, slice.dim, f64::NAN));
        let w = omega(y);
        let n = slice.dim;
        Mat::from_fn(n, n, |m, a| (0..n).map(|j| ginv[(m, j)] * w.get(&[j, a])).sum())
    };
    nijenhuis(slice, &field, x)
}

/// Distance of `v` from the span of `basis`.
pub fn span_residual(basis: &[Vec<f64>], v: &[f64]) -> f64 {
    if basis.is_empty() {
        return v.iter().fold(0.0, |m, x| m.max(x.abs()));
    }
    let b = Mat::from_fn(v.len(), basis.len(), |i, j| basis[j][i]);
    let svd = SVD::new(b, true, false);
    let u = svd.u.expect("left vectors requested");
    let smax = svd.singular_values.max();
    let mut r = nalgebra::DVector::from_column_slice(v);
    for (k, s) in svd.singular_values.iter().enumerate() {
        if *s > 1e-10 * smax.max(1.0) {
            let col = u.column(k);
            let c = col.dot(&r);
            r -= col * c;
        }
    }
    r.amax()
}

#[cfg(test)]
mod tests;
