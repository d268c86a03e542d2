//! Per-case conditions on backgrounds with a chosen G-structure.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    complex_structure, hodge_star, interior_complex, lee_form_g2, lee_form_hermitian, lee_form_re_chi,
    lee_form_spin7, nijenhuis_of_form, span_residual, torsion_g2, torsion_hermitian, torsion_spin7,
    RiemannianSlice,
};
use crate::bilinears::form_bilinear;
use crate::clifford::ExactSpinor;
use crate::conventions::{LIGHTCONE, LIGHTCONE_SIGN};
use crate::error::{Error, Result};
use crate::form::{mask_to_tuple, sort_indices, subsets, RealForm};
use crate::numgeom::{exterior_derivative, frame_data, inverse, Background, Mat};
use crate::report::{fold_max, ConditionReport};
use crate::scalar::rational_to_f64;
use crate::solutions::sweep;
use crate::stabilizer::{catalog_row, generator_pairs, isotropy_algebra, TRANSVERSE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    Spin7,
    SU4,
    #[serde(rename = "Sp2_and_lower")]
    Sp2AndLower,
    R8,
    G2,
    SU3,
    SU2,
}

impl Case {
    pub const ALL: [Case; 7] = [Case::Spin7, Case::SU4, Case::Sp2AndLower, Case::R8, Case::G2, Case::SU3, Case::SU2];

    pub fn name(self) -> &'static str {
        match self {
            Case::Spin7 => "Spin7",
            Case::SU4 => "SU4",
            Case::Sp2AndLower => "Sp2_and_lower",
            Case::R8 => "R8",
            Case::G2 => "G2",
            Case::SU3 => "SU3",
            Case::SU2 => "SU2",
        }
    }

    /// Catalog row whose spinors define the structure.
    pub fn row(self) -> &'static str {
        match self {
            Case::Spin7 => "L=1",
            Case::SU4 => "L=2",
            Case::Sp2AndLower => "L=3",
            Case::R8 => "L=8",
            Case::G2 => "G2",
            Case::SU3 => "SU3",
            Case::SU2 => "SU2",
        }
    }

    pub fn compact(self) -> bool {
        matches!(self, Case::G2 | Case::SU3 | Case::SU2)
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Case::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Spec(format!("unknown case `{s}`")))
    }
}

/// Frame-constant data of one case, derived from the catalog spinors.
#[derive(Clone, Debug)]
pub struct CaseStructure {
    pub case: Case,
    /// Lightcone directions for non-compact cases, the 1-form bilinears otherwise.
    pub fibre: Vec<usize>,
    pub base: Vec<usize>,
    /// Sign of the base volume form relative to `e^{base}` in ascending order.
    pub orientation: i8,
    /// Compact cases: `vol_fibre ∧ vol_base = e^{0…9}`.
    pub fibre_orientation: i8,
    /// Fundamental forms as frame forms on the base, indexed by base position.
    pub forms: BTreeMap<String, RealForm>,
    /// Isotropy algebra in the 45 `(A, B)` parameters.
    pub algebra: Vec<Vec<f64>>,
    /// Base blocks of the isotropy algebra as base 2-form components.
    pub base_algebra: Vec<Vec<f64>>,
}

impl CaseStructure {
    pub fn form(&self, name: &str) -> &RealForm {
        &self.forms[name]
    }

    /// Names of the Hermitian forms, `omega` or `omega_1…`.
    pub fn omegas(&self) -> Vec<String> {
        self.forms.keys().filter(|k| k.starts_with("omega")).cloned().collect()
    }
}

fn perm_sign(idx: &[usize]) -> f64 {
    match sort_indices(idx) {
        Some((_, true)) => -1.0,
        Some((_, false)) => 1.0,
        None => 0.0,
    }
}

/// Orthonormal basis (component inner product) of the span of `vs`.
fn orthonormal(vs: impl IntoIterator<Item = Vec<f64>>) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for mut v in vs {
        for b in &basis {
            let c: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-9 {
            basis.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    basis
}

/// Span of the base k-form parts of all fibre contractions of all bilinears.
fn base_span(spinors: &[ExactSpinor], fibre: &[usize], base: &[usize], k: usize) -> Vec<Vec<f64>> {
    let mut cands = Vec::new();
    for (a, psi) in spinors.iter().enumerate() {
        for theta in &spinors[a..] {
            for deg in [1usize, 3, 5] {
                if deg < k || deg - k > fibre.len() {
                    continue;
                }
                let b = form_bilinear(psi, theta, deg);
                for part in [b.map(|c| rational_to_f64(&c.re)), b.map(|c| rational_to_f64(&c.im))] {
                    if part.is_zero() {
                        continue;
                    }
                    for &smask in &subsets(fibre.len(), deg - k).masks {
                        let s: Vec<usize> = mask_to_tuple(smask).iter().map(|&i| fibre[i]).collect();
                        let mut out = RealForm::zero(base.len(), k);
                        for (slot, &m) in subsets(base.len(), k).masks.iter().enumerate() {
                            let mut idx = s.clone();
                            idx.extend(mask_to_tuple(m).iter().map(|&i| base[i]));
                            out.components_mut()[slot] = part.get(&idx);
                        }
                        if !out.is_zero() {
                            cands.push(out.components().to_vec());
                        }
                    }
                }
            }
        }
    }
    orthonormal(cands)
}

fn to_form(n: usize, k: usize, v: &[f64], norm2: f64) -> RealForm {
    let s = (norm2 / v.iter().map(|x| x * x).sum::<f64>()).sqrt();
    let snap = |x: f64| if (x - x.round()).abs() < 1e-12 { x.round() } else { x };
    RealForm::from_components(n, k, v.iter().map(|x| snap(x * s)).collect())
}

fn expect_dim(case: Case, what: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::Stabilizer(format!("{case}: {what} spans {got} dimensions, expected {want}")));
    }
    Ok(())
}

fn top(f: &RealForm) -> f64 {
    f.components()[0]
}

fn omega_orientation(w: &RealForm) -> i8 {
    let m = w.dim() / 2;
    let mut p = w.clone();
    for _ in 1..m {
        p = p.wedge(w);
    }
    if top(&p) > 0.0 {
        1
    } else {
        -1
    }
}

/// Reorder signs so that `I_1 I_2 = I_3`.
fn quaternionic(case: Case, mut ws: Vec<RealForm>) -> Result<Vec<RealForm>> {
    let n = ws[0].dim();
    let id = Mat::identity(n, n);
    let is: Vec<Mat> = ws.iter().map(|w| complex_structure(&id, w)).collect::<Result<_>>()?;
    let p = &is[0] * &is[1];
    if (&p + &is[2]).amax() < 1e-9 {
        ws[2] = -ws[2].clone();
    } else if (&p - &is[2]).amax() > 1e-9 {
        return Err(Error::Stabilizer(format!("{case}: Hermitian forms are not quaternionic")));
    }
    Ok(ws)
}

/// Structure forms, orientation and algebra of a case.
pub fn case_structure(case: Case) -> Result<CaseStructure> {
    let row = catalog_row(case.row()).ok_or_else(|| Error::Spec(format!("missing catalog row {}", case.row())))?;
    let spinors = row.expand()?.basis().to_vec();
    let fibre: Vec<usize> = if case.compact() {
        let mut dirs = std::collections::BTreeSet::new();
        for (a, psi) in spinors.iter().enumerate() {
            for theta in &spinors[a..] {
                for (idx, c) in form_bilinear(psi, theta, 1).iter() {
                    if !num_traits::Zero::is_zero(c) {
                        dirs.insert(idx[0]);
                    }
                }
            }
        }
        dirs.into_iter().collect()
    } else {
        LIGHTCONE.to_vec()
    };
    let base: Vec<usize> = (0..10).filter(|a| !fibre.contains(a)).collect();
    if !case.compact() {
        debug_assert_eq!(base, TRANSVERSE);
    }
    let n = base.len();
    let mut forms = BTreeMap::new();
    let orientation = match case {
        Case::Spin7 => {
            let s = base_span(&spinors, &fibre, &base, 4);
            expect_dim(case, "base 4-forms", s.len(), 1)?;
            let phi = to_form(n, 4, &s[0], 14.0);
            let star = hodge_star(&Mat::identity(n, n), 1, &phi)?;
            forms.insert("phi".into(), phi.clone());
            if (star.clone() - phi.clone()).max_abs() < 1e-9 {
                1
            } else if (star + phi).max_abs() < 1e-9 {
                -1
            } else {
                return Err(Error::NotSelfDual(1.0));
            }
        }
        Case::SU4 | Case::SU3 => {
            let s2 = base_span(&spinors, &fibre, &base, 2);
            expect_dim(case, "base 2-forms", s2.len(), 1)?;
            let w = to_form(n, 2, &s2[0], n as f64 / 2.0);
            let (k, chi_dim, norm) = if case == Case::SU4 { (4, 3, 8.0) } else { (3, 2, 4.0) };
            let sk = base_span(&spinors, &fibre, &base, k);
            expect_dim(case, "base top-degree forms", sk.len(), chi_dim)?;
            let rest = if case == Case::SU4 {
                let ww = w.wedge(&w).components().to_vec();
                orthonormal(std::iter::once(ww).chain(sk)).split_off(1)
            } else {
                sk
            };
            forms.insert("re_chi".into(), to_form(n, k, &rest[0], norm));
            forms.insert("omega".into(), w.clone());
            omega_orientation(&w)
        }
        Case::Sp2AndLower | Case::SU2 => {
            let s = base_span(&spinors, &fibre, &base, 2);
            expect_dim(case, "base 2-forms", s.len(), 3)?;
            let ws = s.iter().map(|v| to_form(n, 2, v, n as f64 / 2.0)).collect();
            let ws = quaternionic(case, ws)?;
            let o = omega_orientation(&ws[0]);
            for (r, w) in ws.into_iter().enumerate() {
                forms.insert(format!("omega_{}", r + 1), w);
            }
            o
        }
        Case::R8 => 1,
        Case::G2 => {
            let s = base_span(&spinors, &fibre, &base, 3);
            expect_dim(case, "base 3-forms", s.len(), 1)?;
            let phi = to_form(n, 3, &s[0], 7.0);
            let i0 = contract_first(&phi, 0);
            let t = i0.wedge(&i0).wedge(&phi);
            forms.insert("phi".into(), phi);
            // (i_Xφ)∧(i_Xφ)∧φ = −6|X|² vol makes the torsion formula φ-parallel for ∇ + ½H
            if top(&t) > 0.0 {
                -1
            } else {
                1
            }
        }
    };
    let mut order = fibre.clone();
    order.extend(&base);
    let fibre_orientation = if case.compact() { orientation * perm_sign(&order) as i8 } else { 1 };
    let iso = isotropy_algebra(&spinors);
    let algebra: Vec<Vec<f64>> = iso.basis.iter().map(|b| b.params().iter().map(rational_to_f64).collect()).collect();
    let base_algebra = iso
        .basis
        .iter()
        .map(|b| {
            subsets(n, 2)
                .masks
                .iter()
                .map(|&m| {
                    let t = mask_to_tuple(m);
                    rational_to_f64(b.get(base[t[0]], base[t[1]]))
                })
                .collect()
        })
        .collect();
    Ok(CaseStructure { case, fibre, base, orientation, fibre_orientation, forms, algebra, base_algebra })
}

/// `i_{e_a} α` for a frame-basis vector.
fn contract_first(form: &RealForm, a: usize) -> RealForm {
    let (n, k) = (form.dim(), form.degree());
    let mut out = RealForm::zero(n, k - 1);
    for (slot, &m) in subsets(n, k - 1).masks.iter().enumerate() {
        let mut idx = vec![a];
        idx.extend(mask_to_tuple(m));
        out.components_mut()[slot] = form.get(&idx);
    }
    out
}

/// `out_J = Σ_I α_I det M[I, J]`: pulls back along `e^I = M^I_J dx^J`.
pub fn transform(form: &RealForm, m: &Mat) -> RealForm {
    let (n, k) = (m.ncols(), form.degree());
    let mut out = RealForm::zero(n, k);
    let cols: Vec<Vec<usize>> = subsets(n, k).masks.iter().map(|&s| mask_to_tuple(s)).collect();
    for (i, c) in form.iter() {
        if *c == 0.0 {
            continue;
        }
        for (slot, j) in cols.iter().enumerate() {
            let d = if k == 0 { 1.0 } else { Mat::from_fn(k, k, |a, b| m[(i[a], j[b])]).determinant() };
            out.components_mut()[slot] += c * d;
        }
    }
    out
}

/// Null frame vectors `(e_−, e_+)` as components along `(e_0, e_5)`.
fn lightcone_duals() -> [[f64; 2]; 2] {
    let s = LIGHTCONE_SIGN as f64 / 2f64.sqrt();
    // rows e⁻, e⁺ in terms of e^0, e^5
    let m = [[s, -s], [-s, -s]];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let inv = [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]];
    // e_α = Σ_A inv[A][α] e_A
    [[inv[0][0], inv[1][0]], [inv[0][1], inv[1][1]]]
}

fn e_minus() -> [f64; 2] {
    let s = LIGHTCONE_SIGN as f64 / 2f64.sqrt();
    [s, -s]
}

struct Evaluated {
    values: Vec<(&'static str, String, f64)>,
}

impl Evaluated {
    fn push(&mut self, name: &'static str, eq: impl Into<String>, v: f64) {
        self.values.push((name, eq.into(), v));
    }
}

/// Per-point data shared by all conditions.
struct PointData {
    e_inv: Mat,
    dphi: Vec<f64>,
    h: RealForm,
}

fn d_frame_row<B: Background + ?Sized>(bg: &B, row: &[f64], x: &[f64], e_inv: &Mat) -> Result<RealForm> {
    let field = |y: &[f64]| -> Result<RealForm> {
        if !bg.in_domain(y) {
            return Err(Error::Guard(y.to_vec()));
        }
        let e = bg.vielbein(y).ok_or(Error::MissingVielbein)?;
        let mut f = RealForm::zero(10, 1);
        for m in 0..10 {
            f.components_mut()[m] = (0..row.len()).map(|a| row[a] * e[(a, m)]).sum();
        }
        Ok(f)
    };
    Ok(transform(&exterior_derivative(&field, x, bg.fd())?, e_inv))
}

/// Evaluate every condition of `case` on the background at `points`.
///
/// Base coordinates are the coordinate slots with the same labels as the
/// base frame directions; the base geometry at a point is the coordinate
/// slice through it with metric `Σ_{A ∈ base} e^A e^A`.
pub fn condition_report<B: Background + ?Sized>(
    case: Case,
    bg: &B,
    points: &[Vec<f64>],
    tol: f64,
) -> Result<ConditionReport> {
    if bg.dim() != 10 {
        return Err(Error::Spec(format!("background dimension {} is not 10", bg.dim())));
    }
    if let Some(x) = points.first() {
        if bg.vielbein(x).is_none() {
            return Err(Error::MissingField(format!("vielbein (every {case} condition)")));
        }
    }
    let cs = case_structure(case)?;
    let (evals, skipped) = sweep(points, |x| evaluate(&cs, bg, x))?;
    let mut report = ConditionReport::new(case.name());
    if let Some(first) = evals.first() {
        for (k, (name, eq, _)) in first.values.iter().enumerate() {
            let worst = evals.iter().map(|e| e.values[k].2).fold(0.0, fold_max);
            report.check(name, eq, worst, tol);
        }
    } else {
        report.check("evaluated points", "at least one point outside the guard", 0.0, 0.0);
    }
    report.skipped = skipped;
    report.notes.push(format!(
        "base frame directions {:?}, orientation {:+}, structure forms normalised to unit frame components",
        cs.base, cs.orientation
    ));
    Ok(report)
}

fn evaluate<B: Background + ?Sized>(cs: &CaseStructure, bg: &B, x: &[f64]) -> Result<Evaluated> {
    if !bg.in_domain(x) {
        return Err(Error::Guard(x.to_vec()));
    }
    let e = bg.vielbein(x).ok_or(Error::MissingVielbein)?;
    let e_inv = inverse(&e)?;
    let (dphi, h) = frame_data(bg, x)?;
    let pd = PointData { e_inv, dphi, h };
    let base = &cs.base;
    let n = base.len();
    let embed = |y: &[f64]| -> Vec<f64> {
        let mut z = x.to_vec();
        for (i, &s) in base.iter().enumerate() {
            z[s] = y[i];
        }
        z
    };
    let p_at = |y: &[f64]| -> Mat {
        match bg.vielbein(&embed(y)) {
            Some(e) => Mat::from_fn(n, n, |a, m| e[(base[a], base[m])]),
            None => Mat::from_element(n, n, f64::NAN),
        }
    };
    let slice = RiemannianSlice::new(
        n,
        move |y: &[f64]| {
            let p = p_at(y);
            p.transpose() * p
        },
        cs.orientation,
    )?
    .with_fd(bg.fd().clone());
    let y0: Vec<f64> = base.iter().map(|&s| x[s]).collect();
    let p0 = p_at(&y0);
    let q0 = inverse(&p0)?;
    let field = |name: &str| {
        let tau = cs.form(name).clone();
        move |y: &[f64]| transform(&tau, &p_at(y))
    };
    let to_frame = |f: &RealForm| transform(f, &q0);
    let h_base = pd.h.restrict(base);
    let dphi_base: Vec<f64> = base.iter().map(|&i| pd.dphi[i]).collect();
    let mut out = Evaluated { values: Vec::new() };

    if !cs.case.compact() {
        let duals = lightcone_duals();
        let (em, ep) = (duals[0], duals[1]);
        let [l0, l5] = LIGHTCONE;
        let d_plus = ep[0] * pd.dphi[l0] + ep[1] * pd.dphi[l5];
        let h_mp: Vec<f64> = base
            .iter()
            .map(|&i| {
                let mut v = 0.0;
                for (a, ca) in [(l0, em[0]), (l5, em[1])] {
                    for (b, cb) in [(l0, ep[0]), (l5, ep[1])] {
                        if a != b {
                            v += ca * cb * pd.h.get(&[a, b, i]);
                        }
                    }
                }
                v
            })
            .collect();
        let mut row = vec![0.0; 10];
        row[l0] = e_minus()[0];
        row[l5] = e_minus()[1];
        let de = d_frame_row(bg, &row, x, &pd.e_inv)?;
        let dilaton_lee = |theta: &RealForm| -> f64 {
            let t = to_frame(theta);
            (0..n).map(|i| (2.0 * dphi_base[i] - t.components()[i] - h_mp[i]).abs()).fold(0.0, f64::max)
        };
        if cs.case == Case::R8 {
            let mut em_form = RealForm::zero(10, 1);
            em_form.components_mut()[l0] = row[l0];
            em_form.components_mut()[l5] = row[l5];
            out.push("null form integrable", "e⁻ ∧ de⁻ = 0", em_form.wedge(&de).max_abs());
            out.push("transverse flux", "H_ijk = 0", h_base.max_abs());
            return Ok(out);
        }
        out.push("dilaton along e_+", "∂_+Φ = 0", d_plus.abs());
        let eta = bg.frame_metric();
        let params: Vec<f64> = generator_pairs().iter().map(|&(a, b)| de.get(&[a, b]) * eta[a] * eta[b]).collect();
        out.push("null form derivative", "de⁻ ∈ k ⊕ R⁸", span_residual(&cs.algebra, &params));
        match cs.case {
            Case::Spin7 => {
                let phi = field("phi");
                let theta = lee_form_spin7(&slice, &phi, &y0)?;
                out.push("dilaton and Lee form", "2∂_iΦ − θ_i − H_{−+i} = 0", dilaton_lee(&theta));
                let tor = to_frame(&torsion_spin7(&slice, &phi, &y0)?);
                out.push("torsion", "H_ijk = (−⋆dφ + ⋆(θ_φ∧φ))_ijk", (tor - h_base).max_abs());
            }
            Case::SU4 => {
                let w = field("omega");
                let chi = field("re_chi");
                let theta = lee_form_hermitian(&slice, &w, &y0)?;
                let theta_chi = lee_form_re_chi(&slice, &chi, &y0)?;
                out.push("dilaton and Lee form", "2∂_iΦ − θ_i − H_{−+i} = 0", dilaton_lee(&theta));
                out.push("integrability", "N(I) = 0", max_abs(&nijenhuis_of_form(&slice, &w, &y0)?));
                out.push("Lee forms agree", "θ_ω = θ_{Re χ}", (theta - theta_chi).max_abs());
                let tor = torsion_hermitian(&slice, &w, &y0)?;
                out.push("torsion", "H_ijk = (−i_I dω)_ijk", (to_frame(&tor.contraction) - h_base).max_abs());
                out.push("torsion dual form", "−i_I dω = ⋆(dω∧ω) − ½⋆(θ_ω∧ω∧ω)", tor.mismatch());
            }
            Case::Sp2AndLower => {
                let names = cs.omegas();
                let mut contractions = Vec::new();
                let mut thetas = Vec::new();
                let mut nij: f64 = 0.0;
                for name in &names {
                    let w = field(name);
                    contractions.push(torsion_hermitian(&slice, &w, &y0)?.contraction);
                    thetas.push(lee_form_hermitian(&slice, &w, &y0)?);
                    nij = nij.max(max_abs(&nijenhuis_of_form(&slice, &w, &y0)?));
                }
                out.push("dilaton and Lee form", "2∂_iΦ − θ_i − H_{−+i} = 0", dilaton_lee(&thetas[0]));
                out.push("integrability", "N(I_r) = 0", nij);
                out.push("torsions agree", "i_{I_r} dω_r = i_{I_s} dω_s", pairwise(&contractions));
                out.push("Lee forms agree", "θ_{ω_r} = θ_{ω_s}", pairwise(&thetas));
                out.push("torsion", "H_ijk = (−i_{I_1} dω_1)_ijk", (to_frame(&contractions[0]) - h_base).max_abs());
            }
            _ => unreachable!(),
        }
        return Ok(out);
    }

    let fibre = &cs.fibre;
    let eta = bg.frame_metric();
    out.push(
        "dilaton along fibre",
        "∂_aΦ = 0",
        fibre.iter().map(|&a| pd.dphi[a].abs()).fold(0.0, f64::max),
    );
    let mut curv = Vec::new();
    for &a in fibre {
        let mut row = vec![0.0; 10];
        row[a] = 1.0;
        curv.push(d_frame_row(bg, &row, x, &pd.e_inv)?.restrict(base));
    }
    let in_k = curv.iter().map(|f| span_residual(&cs.base_algebra, f.components())).fold(0.0, f64::max);
    let sgn = cs.fibre_orientation as f64;
    // ε with the fibre indices in the given order, raised with η where flagged
    let eps = |idx: &[usize], raised: &[usize]| -> f64 {
        let pos: Vec<usize> = idx.iter().map(|a| fibre.iter().position(|f| f == a).expect("fibre index")).collect();
        sgn * perm_sign(&pos) * raised.iter().map(|&a| eta[a]).product::<f64>()
    };
    match cs.case {
        Case::G2 => {
            out.push("curvature", "F^a ∈ g₂", in_k);
            let phi_frame = cs.form("phi");
            let f = [fibre[0], fibre[1], fibre[2]];
            let lhs = 6.0 * eps(&f, &f) * pd.h.get(&f)
                + 6.0 * h_base.components().iter().zip(phi_frame.components()).map(|(a, b)| a * b).sum::<f64>();
            out.push("fibre flux", "ε^{abc} H_abc + H_ijk φ^ijk = 0", lhs.abs());
            let phi = field("phi");
            let theta = lee_form_g2(&slice, &phi, &y0)?;
            let t = to_frame(&theta);
            out.push(
                "dilaton and Lee form",
                "θ_φ = 2dΦ",
                (0..n).map(|i| (t.components()[i] - 2.0 * dphi_base[i]).abs()).fold(0.0, f64::max),
            );
            let star_phi = |y: &[f64]| -> RealForm {
                hodge_star(&(slice.metric)(y), slice.orientation, &phi(y)).unwrap_or_else(|_| RealForm::zero(n, 4))
            };
            let d_star = slice.d(&star_phi, &y0)?;
            let rhs = -theta.wedge(&star_phi(&y0));
            out.push("co-closure", "d⋆φ = −θ_φ ∧ ⋆φ", (d_star - rhs).max_abs());
            let tor = to_frame(&torsion_g2(&slice, &phi, &y0)?);
            out.push("torsion", "H_ijk = (−(1/6)(dφ,⋆φ)φ + ⋆dφ − ⋆(θ_φ∧φ))_ijk", (tor - h_base).max_abs());
        }
        Case::SU3 => {
            out.push("curvature", "F^a ∈ su(3)", in_k);
            let w_frame = cs.form("omega");
            let mut flux: f64 = 0.0;
            for (k, &a) in fibre.iter().enumerate() {
                let others: Vec<usize> = fibre.iter().copied().filter(|&b| b != a).collect();
                let mut idx = vec![a];
                idx.extend(&others);
                let dual = eps(&idx, &idx) * pd.h.get(&others);
                let fw: f64 = curv[k].components().iter().zip(w_frame.components()).map(|(p, q)| p * q).sum();
                flux = flux.max((dual - fw).abs());
            }
            out.push("fibre flux", "(1/3!) ε^{abcd} H_bcd − ½ F^a_ij ω^ij = 0", flux);
            let id = Mat::identity(n, n);
            let i = complex_structure(&id, w_frame)?;
            let f20 = curv
                .iter()
                .map(|f| {
                    let m = Mat::from_fn(n, n, |p, q| f.get(&[p, q]));
                    (i.transpose() * &m * &i - m).amax()
                })
                .fold(0.0, f64::max);
            out.push("curvature type", "(F^a)^{2,0} = 0", f20);
            let w = field("omega");
            let chi = field("re_chi");
            let theta = lee_form_hermitian(&slice, &w, &y0)?;
            let theta_chi = lee_form_re_chi(&slice, &chi, &y0)?;
            out.push("integrability", "N(I) = 0", max_abs(&nijenhuis_of_form(&slice, &w, &y0)?));
            out.push("Lee forms agree", "θ_ω = θ_{Re χ}", (theta.clone() - theta_chi).max_abs());
            let t = to_frame(&theta);
            out.push(
                "dilaton and Lee form",
                "∂_iΦ − ½θ_i = 0",
                (0..n).map(|k| (dphi_base[k] - 0.5 * t.components()[k]).abs()).fold(0.0, f64::max),
            );
            let tor = torsion_hermitian(&slice, &w, &y0)?;
            out.push("torsion", "H_ijk = (−i_I dω)_ijk", (to_frame(&tor.contraction) - h_base).max_abs());
            out.push("torsion dual form", "−i_I dω = ⋆dω − ⋆(θ_ω∧ω)", tor.mismatch());
        }
        Case::SU2 => {
            out.push("curvature", "F^a ∈ su(2)", in_k);
            let mut sd: f64 = 0.0;
            for &m in &subsets(fibre.len(), 3).masks {
                let abc: Vec<usize> = mask_to_tuple(m).iter().map(|&i| fibre[i]).collect();
                let def: Vec<usize> = fibre.iter().copied().filter(|f| !abc.contains(f)).collect();
                let mut idx = abc.clone();
                idx.extend(&def);
                sd = sd.max((pd.h.get(&abc) + eps(&idx, &def) * pd.h.get(&def)).abs());
            }
            out.push("fibre self-duality", "H_abc + (1/3!) ε_abc^{def} H_def = 0", sd);
            let names = cs.omegas();
            let mut is = Vec::new();
            let mut dws = Vec::new();
            for name in &names {
                let w = field(name);
                is.push(complex_structure(&slice.metric_at(&y0)?, &w(&y0))?);
                dws.push(slice.d(&w, &y0)?);
            }
            let contractions: Vec<RealForm> = is.iter().zip(&dws).map(|(i, dw)| interior_complex(i, dw)).collect();
            out.push("torsions agree", "i_{I_r} dω_r = i_{I_s} dω_s", pairwise(&contractions));
            let w1 = field(&names[0]);
            let theta = lee_form_hermitian(&slice, &w1, &y0)?;
            let t = to_frame(&theta);
            out.push(
                "dilaton and Lee form",
                "2∂_iΦ − θ_{ω_1,i} = 0",
                (0..n).map(|k| (2.0 * dphi_base[k] - t.components()[k]).abs()).fold(0.0, f64::max),
            );
            let tor = -contractions[0].clone();
            out.push("torsion", "H_ijk = (−i_{I_1} dω_1)_ijk", (to_frame(&tor) - h_base).max_abs());
        }
        _ => unreachable!(),
    }
    Ok(out)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn pairwise(forms: &[RealForm]) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..forms.len() {
        for s in r + 1..forms.len() {
            worst = worst.max((forms[r].clone() - forms[s].clone()).max_abs());
        }
    }
    worst
}
