//! Pointwise Killing spinor operators: dilatino and gaugino.
//!
//! ```text
//! A ε = (Γ^M ∂_M Φ − (1/12) H_{MNL} Γ^{MNL}) ε
//! F ε = F_{MN} Γ^{MN} ε
//! ```
//!
//! With forms stored on increasing tuples these become
//! `Σ_A η^{AA} ∂_AΦ Γ_A − (1/2) Σ_{A<B<C} H^{ABC} Γ_AΓ_BΓ_C` and
//! `2 Σ_{A<B} F^{AB} Γ_AΓ_B`, indices raised with η.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::Value;

use crate::clifford::{gamma_product_raw, ExactSpinor, NumSpinor, Spinor, ETA};
use crate::error::{Error, Result};
use crate::exact::{kernel, realify};
use crate::form::{mask_to_tuple, ExactForm, Form, RealForm};
use crate::scalar::{ComplexRational, Scalar};

/// Default relative singular-value cutoff for numerical kernels.
pub const RANK_TOL: f64 = 1e-8;

/// Frame components of `∂Φ`, `H` and `F` at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointFluxData<T: Scalar> {
    pub dphi: Vec<T>,
    pub h: Form<T>,
    /// Gauge field strength, one 2-form per Lie algebra generator.
    pub f: Vec<Form<T>>,
}

pub type ExactFluxData = PointFluxData<ComplexRational>;
pub type NumFluxData = PointFluxData<Complex64>;

impl<T: Scalar> PointFluxData<T> {
    pub fn zero() -> Self {
        Self { dphi: vec![T::zero(); 10], h: Form::zero(10, 3), f: Vec::new() }
    }
}

impl NumFluxData {
    pub fn from_real(dphi: &[f64], h: &RealForm, f: &[RealForm]) -> Self {
        let c = |x: &f64| Complex64::new(*x, 0.0);
        Self { dphi: dphi.iter().map(c).collect(), h: h.map(c), f: f.iter().map(|g| g.map(c)).collect() }
    }
}

fn raised_sign(indices: &[usize]) -> bool {
    indices.iter().filter(|&&a| ETA[a] < 0).count() % 2 == 1
}

fn signed<T: Scalar>(c: &T, negative: bool) -> T {
    if negative {
        -c.clone()
    } else {
        c.clone()
    }
}

/// `A ε`.
pub fn dilatino_apply<T: Scalar>(data: &PointFluxData<T>, psi: &Spinor<T>) -> Spinor<T> {
    let mut out = Spinor::zero();
    for (a, d) in data.dphi.iter().enumerate() {
        if d.is_zero() {
            continue;
        }
        out = out + crate::clifford::gamma_apply_raw(a, psi).scale(&signed(d, ETA[a] < 0));
    }
    let half = T::ratio(-1, 2);
    for (mask, c) in data.h.iter_masks() {
        if c.is_zero() {
            continue;
        }
        let idx = mask_to_tuple(mask);
        let coeff = signed(c, raised_sign(&idx)) * half.clone();
        out = out + gamma_product_raw(idx.into_iter(), psi).scale(&coeff);
    }
    out
}

/// `F ε` for a single 2-form.
pub fn gaugino_apply<T: Scalar>(f: &Form<T>, psi: &Spinor<T>) -> Spinor<T> {
    assert_eq!(f.degree(), 2, "gaugino operator needs a 2-form");
    let two = T::ratio(2, 1);
    let mut out = Spinor::zero();
    for (mask, c) in f.iter_masks() {
        if c.is_zero() {
            continue;
        }
        let idx = mask_to_tuple(mask);
        let coeff = signed(c, raised_sign(&idx)) * two.clone();
        out = out + gamma_product_raw(idx.into_iter(), psi).scale(&coeff);
    }
    out
}

/// Dimension and basis of a kernel inside a spinor subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelResult<T: Scalar> {
    pub dim: usize,
    pub basis: Vec<Spinor<T>>,
}

fn combine<T: Scalar>(basis: &[Spinor<T>], coeffs: &[T]) -> Spinor<T> {
    basis.iter().zip(coeffs).fold(Spinor::zero(), |acc, (s, c)| acc + s.scale(c))
}

/// Exact joint kernel of a family of linear operators on `span_R(basis)`.
pub fn exact_joint_kernel(
    basis: &[ExactSpinor],
    ops: &[&dyn Fn(&ExactSpinor) -> ExactSpinor],
) -> KernelResult<ComplexRational> {
    let images: Vec<Vec<BigRational>> = basis
        .iter()
        .map(|s| ops.iter().flat_map(|op| realify(op(s).amplitudes())).collect())
        .collect();
    let height = images.first().map_or(0, Vec::len);
    let rows = (0..height).map(|r| images.iter().map(|v| v[r].clone()).collect::<Vec<_>>());
    let ker = kernel(basis.len(), rows);
    let spinors = ker
        .iter()
        .map(|c| combine(basis, &c.iter().cloned().map(ComplexRational::real).collect::<Vec<_>>()))
        .collect();
    KernelResult { dim: ker.len(), basis: spinors }
}

/// Numerical joint kernel: singular values below `tol · max(σ_max, scale)`
/// count as zero.
///
/// `scale` is the size of the data defining the operators. Without it an
/// operator that vanishes on the whole subspace up to roundoff would have
/// only noise singular values and no kernel.
pub fn numeric_joint_kernel(
    basis: &[NumSpinor],
    ops: &[&dyn Fn(&NumSpinor) -> NumSpinor],
    tol: f64,
    scale: f64,
) -> KernelResult<Complex64> {
    let l = basis.len();
    let cols: Vec<Vec<f64>> = basis
        .iter()
        .map(|s| {
            ops.iter()
                .flat_map(|op| op(s).amplitudes().iter().flat_map(|z| [z.re, z.im]).collect::<Vec<_>>())
                .collect()
        })
        .collect();
    let height = cols.first().map_or(0, Vec::len);
    if l == 0 {
        return KernelResult { dim: 0, basis: Vec::new() };
    }
    // Pad to at least l rows so the SVD exposes all l right singular vectors.
    let rows = height.max(l);
    let m = DMatrix::from_fn(rows, l, |r, c| if r < height { cols[c][r] } else { 0.0 });
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested right singular vectors");
    let smax = svd.singular_values.iter().cloned().fold(scale.abs(), f64::max);
    let mut out = Vec::new();
    for (k, s) in svd.singular_values.iter().enumerate() {
        if smax == 0.0 || *s <= tol * smax {
            let coeffs: Vec<Complex64> = (0..l).map(|c| Complex64::new(vt[(k, c)], 0.0)).collect();
            out.push(combine(basis, &coeffs));
        }
    }
    KernelResult { dim: out.len(), basis: out }
}

fn dilatino_scale(data: &NumFluxData) -> f64 {
    data.dphi.iter().chain(data.h.components()).map(|z| z.norm()).fold(0.0, f64::max)
}

fn gaugino_scale(data: &NumFluxData) -> f64 {
    data.f.iter().flat_map(|f| f.components()).map(|z| z.norm()).fold(0.0, f64::max)
}

/// `{ε ∈ P : A ε = 0}`, exact.
pub fn dilatino_kernel(data: &ExactFluxData, p: &[ExactSpinor]) -> KernelResult<ComplexRational> {
    exact_joint_kernel(p, &[&|s| dilatino_apply(data, s)])
}

/// `{ε ∈ P : A ε = 0}` by numerical rank.
pub fn dilatino_kernel_numeric(data: &NumFluxData, p: &[NumSpinor], tol: f64) -> KernelResult<Complex64> {
    numeric_joint_kernel(p, &[&|s| dilatino_apply(data, s)], tol, dilatino_scale(data))
}

/// Joint kernel of the dilatino operator and every gaugino component.
pub fn killing_kernel_numeric(data: &NumFluxData, p: &[NumSpinor], tol: f64) -> KernelResult<Complex64> {
    let mut ops: Vec<Box<dyn Fn(&NumSpinor) -> NumSpinor + '_>> = vec![Box::new(|s| dilatino_apply(data, s))];
    for f in &data.f {
        ops.push(Box::new(move |s| gaugino_apply(f, s)));
    }
    let refs: Vec<&dyn Fn(&NumSpinor) -> NumSpinor> = ops.iter().map(|b| b.as_ref()).collect();
    numeric_joint_kernel(p, &refs, tol, dilatino_scale(data).max(gaugino_scale(data)))
}

/// Joint kernel of all gaugino components.
pub fn gaugino_kernel_numeric(data: &NumFluxData, p: &[NumSpinor], tol: f64) -> KernelResult<Complex64> {
    let ops: Vec<Box<dyn Fn(&NumSpinor) -> NumSpinor + '_>> =
        data.f.iter().map(|f| Box::new(move |s: &NumSpinor| gaugino_apply(f, s)) as Box<_>).collect();
    let refs: Vec<&dyn Fn(&NumSpinor) -> NumSpinor> = ops.iter().map(|b| b.as_ref()).collect();
    if refs.is_empty() {
        return KernelResult { dim: p.len(), basis: p.to_vec() };
    }
    numeric_joint_kernel(p, &refs, tol, gaugino_scale(data))
}

/// Parse `{dPhi: [10 numbers], H: form, F: form | [forms]}`.
///
/// Exact rational data (`"a/b,c/d"` strings or integers) is kept exact;
/// anything with a decimal point goes through the floating path.
pub fn parse_flux_json(v: &Value) -> Result<FluxInput> {
    let dphi = v
        .get("dPhi")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::MissingField("dPhi".into()))?;
    if dphi.len() != 10 {
        return Err(Error::Spec(format!("dPhi has {} entries, expected 10", dphi.len())));
    }
    let h = v.get("H").ok_or_else(|| Error::MissingField("H".into()))?;
    let fs: Vec<&Value> = match v.get("F") {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::Array(a)) => a.iter().collect(),
        Some(f) => vec![f],
    };
    let exact = || -> Result<ExactFluxData> {
        let dphi = dphi
            .iter()
            .map(|x| match x {
                Value::Number(n) if n.is_i64() => Ok(ComplexRational::from_integers(n.as_i64().unwrap(), 0)),
                Value::String(s) => s
                    .parse::<BigRational>()
                    .map(ComplexRational::real)
                    .map_err(|_| Error::Spec(format!("bad rational `{s}`"))),
                _ => Err(Error::Spec("not exact".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        let h = ExactForm::from_json(h, 10)?;
        let f = fs.iter().map(|f| ExactForm::from_json(f, 10)).collect::<Result<Vec<_>>>()?;
        Ok(ExactFluxData { dphi, h, f })
    };
    if let Ok(d) = exact() {
        return Ok(FluxInput::Exact(d));
    }
    let dphi = dphi
        .iter()
        .map(|x| x.as_f64().ok_or_else(|| Error::Spec("dPhi entries must be numbers".into())))
        .collect::<Result<Vec<_>>>()?;
    let h = RealForm::from_json(h, 10)?;
    let f = fs.iter().map(|f| RealForm::from_json(f, 10)).collect::<Result<Vec<_>>>()?;
    check_degrees(&h, &f)?;
    Ok(FluxInput::Numeric(NumFluxData::from_real(&dphi, &h, &f)))
}

fn check_degrees(h: &RealForm, f: &[RealForm]) -> Result<()> {
    if h.degree() != 3 {
        return Err(Error::Degree { degree: h.degree(), dim: 10 });
    }
    if let Some(g) = f.iter().find(|g| g.degree() != 2) {
        return Err(Error::Degree { degree: g.degree(), dim: 10 });
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub enum FluxInput {
    Exact(ExactFluxData),
    Numeric(NumFluxData),
}
