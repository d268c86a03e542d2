//! The so(9,1) action on spinors and exact isotropy and normalizer algebras.
//!
//! Generators are antisymmetric rational matrices `Λ_{AB}` acting by
//! `σ(Λ) = (1/2) Σ_{A<B} Λ_{AB} Γ_A Γ_B`. All kernels are computed over the
//! rationals on the realified spinor components.

use std::fmt;
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bilinears::form_bilinear;
use crate::clifford::{gamma_product_raw, is_majorana, majorana_imag, majorana_real, ExactSpinor, ETA};
use crate::error::{Error, Result};
use crate::exact::{kernel, realify, RowEchelon};
use crate::form::ExactForm;
use crate::scalar::{q, ComplexRational};
use crate::spinor_text::parse_spinor;

/// Frame directions transverse to the lightcone spanned by `e^0, e^5`.
pub const TRANSVERSE: [usize; 8] = [1, 2, 3, 4, 6, 7, 8, 9];

/// The 45 index pairs `A < B` in lexicographic order.
pub fn generator_pairs() -> &'static [(usize, usize)] {
    static PAIRS: OnceLock<Vec<(usize, usize)>> = OnceLock::new();
    PAIRS.get_or_init(|| (0..10).flat_map(|a| (a + 1..10).map(move |b| (a, b))).collect())
}

/// An element of so(9,1), stored as the antisymmetric matrix `Λ_{AB}`.
#[derive(Clone, PartialEq)]
pub struct SpinAlgebraElement {
    lambda: Vec<BigRational>,
}

impl SpinAlgebraElement {
    pub fn zero() -> Self {
        Self { lambda: vec![BigRational::zero(); 100] }
    }

    /// `Λ_{ab} = 1 = -Λ_{ba}`.
    pub fn elementary(a: usize, b: usize) -> Self {
        assert!(a != b && a < 10 && b < 10);
        let mut out = Self::zero();
        out.lambda[a * 10 + b] = BigRational::one();
        out.lambda[b * 10 + a] = -BigRational::one();
        out
    }

    /// From the 45 coordinates along [`generator_pairs`].
    pub fn from_params(params: &[BigRational]) -> Self {
        assert_eq!(params.len(), 45);
        let mut out = Self::zero();
        for (p, &(a, b)) in params.iter().zip(generator_pairs()) {
            out.lambda[a * 10 + b] = p.clone();
            out.lambda[b * 10 + a] = -p.clone();
        }
        out
    }

    /// From an arbitrary 10×10 matrix; fails unless it is antisymmetric.
    pub fn from_matrix(m: Vec<BigRational>) -> Result<Self> {
        assert_eq!(m.len(), 100);
        for a in 0..10 {
            for b in 0..10 {
                if m[a * 10 + b] != -m[b * 10 + a].clone() {
                    return Err(Error::Stabilizer(format!("matrix not antisymmetric at ({a},{b})")));
                }
            }
        }
        Ok(Self { lambda: m })
    }

    pub fn params(&self) -> Vec<BigRational> {
        generator_pairs().iter().map(|&(a, b)| self.get(a, b).clone()).collect()
    }

    pub fn get(&self, a: usize, b: usize) -> &BigRational {
        &self.lambda[a * 10 + b]
    }

    pub fn is_zero(&self) -> bool {
        self.lambda.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self { lambda: self.lambda.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { lambda: self.lambda.iter().zip(&other.lambda).map(|(a, b)| a + b).collect() }
    }

    /// `(Λη)_{AB} = Λ_{AB} η_{BB}`: the vector representation.
    pub fn vector_matrix(&self) -> Vec<BigRational> {
        (0..100).map(|k| eta_scale(&self.lambda[k], k % 10)).collect()
    }

    /// `[Λ, Λ′] = ΛηΛ′ − Λ′ηΛ`, which makes `σ` a homomorphism.
    pub fn bracket(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for a in 0..10 {
            for b in 0..10 {
                let mut acc = BigRational::zero();
                for c in 0..10 {
                    let x = self.get(a, c) * other.get(c, b) - other.get(a, c) * self.get(c, b);
                    acc += eta_scale(&x, c);
                }
                out.lambda[a * 10 + b] = acc;
            }
        }
        out
    }

    /// Components `Λ_{ij}` with `i < j` both transverse (28 numbers).
    pub fn transverse_block(&self) -> Vec<BigRational> {
        let mut out = Vec::with_capacity(28);
        for (x, &i) in TRANSVERSE.iter().enumerate() {
            for &j in &TRANSVERSE[x + 1..] {
                out.push(self.get(i, j).clone());
            }
        }
        out
    }

    /// Infinitesimal tensorial action on a form with lower frame indices,
    /// matching `α(σψ, θ) + α(ψ, σθ)` for bilinears.
    pub fn act_on_form(&self, form: &ExactForm) -> ExactForm {
        let m = self.vector_matrix();
        let mut out = ExactForm::zero(form.dim(), form.degree());
        let entries: Vec<(Vec<usize>, ComplexRational)> =
            form.iter().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect();
        for (idx, c) in entries {
            for slot in 0..idx.len() {
                let d = idx[slot];
                for a in 0..10 {
                    let coeff = &m[d * 10 + a];
                    if coeff.is_zero() || idx.contains(&a) {
                        continue;
                    }
                    let mut target = idx.clone();
                    target[slot] = a;
                    let delta = c.clone() * ComplexRational::real(-coeff.clone());
                    let prev = out.get(&target);
                    out.set(&target, prev + delta);
                }
            }
        }
        out
    }
}

fn eta_scale(x: &BigRational, index: usize) -> BigRational {
    if ETA[index] < 0 {
        -x.clone()
    } else {
        x.clone()
    }
}

impl fmt::Debug for SpinAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for &(a, b) in generator_pairs() {
            let v = self.get(a, b);
            if !v.is_zero() {
                m.entry(&format!("{a}{b}"), &v.to_string());
            }
        }
        m.finish()
    }
}

/// `σ(Λ)ψ = (1/2) Σ_{A<B} Λ_{AB} Γ_A Γ_B ψ`.
pub fn spin_action(lambda: &SpinAlgebraElement, psi: &ExactSpinor) -> ExactSpinor {
    let mut out = ExactSpinor::zero();
    for &(a, b) in generator_pairs() {
        let l = lambda.get(a, b);
        if l.is_zero() {
            continue;
        }
        let g = gamma_product_raw([a, b].into_iter(), psi);
        out = out + g.scale(&ComplexRational::real(l * q(1, 2)));
    }
    out
}

/// A real subspace of Majorana-Weyl spinors with an independent basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorSubspace {
    basis: Vec<ExactSpinor>,
}

impl SpinorSubspace {
    pub fn new(basis: Vec<ExactSpinor>) -> Result<Self> {
        let mut e = RowEchelon::new(64);
        for (k, s) in basis.iter().enumerate() {
            if !is_majorana(s) {
                return Err(Error::Stabilizer(format!("basis spinor {} is not Majorana", k + 1)));
            }
            if !e.insert(&realify(s.amplitudes())) {
                return Err(Error::Stabilizer(format!("basis spinor {} is dependent", k + 1)));
            }
        }
        Ok(Self { basis })
    }

    pub fn basis(&self) -> &[ExactSpinor] {
        &self.basis
    }

    pub fn real_dim(&self) -> usize {
        self.basis.len()
    }

    /// The full positive-chirality space of Majorana-Weyl spinors.
    pub fn full_positive() -> Self {
        let reps: Vec<ExactSpinor> = crate::clifford::SpinorIndex::all()
            .filter(|s| s.is_even())
            .map(ExactSpinor::basis)
            .collect();
        expand_majorana(&reps, 16, "Δ⁺").expect("even forms span Δ⁺")
    }
}

/// Real and imaginary Majorana parts of each representative, deduplicated
/// by exact linear dependence.
pub fn majorana_span(reps: &[ExactSpinor]) -> Result<SpinorSubspace> {
    let mut e = RowEchelon::new(64);
    let mut basis = Vec::new();
    for r in reps {
        for part in [majorana_real(r), majorana_imag(r)] {
            if !part.is_zero() && e.insert(&realify(part.amplitudes())) {
                basis.push(part);
            }
        }
    }
    SpinorSubspace::new(basis)
}

/// [`majorana_span`], which must yield exactly `target` spinors.
pub fn expand_majorana(reps: &[ExactSpinor], target: usize, row: &str) -> Result<SpinorSubspace> {
    let p = majorana_span(reps)?;
    if p.basis().len() != target {
        return Err(Error::ExpansionCount { row: row.to_string(), got: p.basis().len(), expected: target });
    }
    Ok(p)
}

/// Result of an isotropy or normalizer computation.
#[derive(Clone, Debug)]
pub struct AlgebraReport {
    pub dim: usize,
    pub basis: Vec<SpinAlgebraElement>,
    /// Dimension of the part acting trivially on the transverse 8-space.
    pub radical_dim: usize,
    pub catalog_match: Option<&'static str>,
}

impl AlgebraReport {
    fn from_basis(basis: Vec<SpinAlgebraElement>) -> Self {
        let blocks: Vec<Vec<BigRational>> = basis.iter().map(|b| b.transverse_block()).collect();
        let block_rank = crate::exact::rank(28, blocks);
        let dim = basis.len();
        let radical_dim = dim - block_rank;
        let catalog_match = TABLE
            .iter()
            .find(|r| r.stabilizer_dim == dim && r.radical_dim() == radical_dim)
            .map(|r| r.label);
        Self { dim, basis, radical_dim, catalog_match }
    }

    /// Transverse blocks of the basis, as 8×8 antisymmetric matrices.
    pub fn transverse_algebra(&self) -> Vec<Vec<BigRational>> {
        self.basis
            .iter()
            .map(|b| {
                let mut m = vec![BigRational::zero(); 64];
                for (x, &i) in TRANSVERSE.iter().enumerate() {
                    for (y, &j) in TRANSVERSE.iter().enumerate() {
                        m[x * 8 + y] = b.get(i, j).clone();
                    }
                }
                m
            })
            .collect()
    }
}

/// `σ(E_k)ψ` for all 45 elementary generators.
fn generator_images(psi: &ExactSpinor) -> Vec<Vec<BigRational>> {
    generator_pairs()
        .iter()
        .map(|&(a, b)| realify(spin_action(&SpinAlgebraElement::elementary(a, b), psi).amplitudes()))
        .collect()
}

fn solve(rows: impl IntoIterator<Item = Vec<BigRational>>) -> Vec<SpinAlgebraElement> {
    kernel(45, rows).iter().map(|p| SpinAlgebraElement::from_params(p)).collect()
}

/// The Lie algebra of `Stab(ε_1, …, ε_L)`.
pub fn isotropy_algebra(spinors: &[ExactSpinor]) -> AlgebraReport {
    let mut rows = Vec::new();
    for s in spinors {
        let images = generator_images(s);
        for coord in 0..64 {
            let row: Vec<BigRational> = images.iter().map(|v| v[coord].clone()).collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    AlgebraReport::from_basis(solve(rows))
}

/// The Lie algebra of `Stab(P) = {ℓ : ℓP ⊆ P}`.
pub fn normalizer_algebra(p: &SpinorSubspace) -> AlgebraReport {
    let span: Vec<Vec<BigRational>> = p.basis().iter().map(|s| realify(s.amplitudes())).collect();
    let annihilators = kernel(64, span);
    let mut rows = Vec::new();
    for s in p.basis() {
        let images = generator_images(s);
        for f in &annihilators {
            let row: Vec<BigRational> =
                images.iter().map(|v| v.iter().zip(f).map(|(a, b)| a * b).sum()).collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    let mut report = AlgebraReport::from_basis(solve(rows));
    report.catalog_match = None;
    report
}

/// `dim Stab(P) − dim Stab(ε_1, …, ε_L)`.
pub fn sigma_dim(p: &SpinorSubspace) -> usize {
    normalizer_algebra(p).dim - isotropy_algebra(p.basis()).dim
}

/// Anticommuting complex structures on the transverse space.
#[derive(Clone, Debug)]
pub struct CliffordModule {
    /// 8×8 row-major matrices `I_r`, mutually anticommuting.
    pub generators: Vec<Vec<BigRational>>,
    /// `I_r² = −c_r`, with `c_r > 0`.
    pub squares: Vec<BigRational>,
}

/// 8×8 transverse block of the `e^0`-component of the degree-3 bilinear.
fn transverse_two_form(a: &ExactSpinor, b: &ExactSpinor) -> Result<Vec<BigRational>> {
    let f = form_bilinear(a, b, 3);
    let mut m = vec![BigRational::zero(); 64];
    for (x, &i) in TRANSVERSE.iter().enumerate() {
        for (y, &j) in TRANSVERSE.iter().enumerate() {
            if i == j {
                continue;
            }
            let c = f.get(&[0, i, j]);
            if !c.is_real() {
                return Err(Error::Stabilizer("complex bilinear from Majorana input".into()));
            }
            m[x * 8 + y] = c.re;
        }
    }
    Ok(m)
}

pub fn mat_mul(a: &[BigRational], b: &[BigRational], n: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let x = &a[i * n + k];
            if x.is_zero() {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * &b[k * n + j];
            }
        }
    }
    out
}

fn trace_pairing(a: &[BigRational], b: &[BigRational]) -> BigRational {
    // -tr(AB) for antisymmetric A, B is the Frobenius inner product.
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Scalar `c` with `m = c·1`, if `m` is a multiple of the identity.
pub fn scalar_multiple(m: &[BigRational], n: usize) -> Option<BigRational> {
    let c = m[0].clone();
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j { c.clone() } else { BigRational::zero() };
            if m[i * n + j] != expect {
                return None;
            }
        }
    }
    Some(c)
}

/// Build the endomorphisms `I_r` from `ε_1` paired with each later spinor
/// and verify that they generate a Clifford algebra.
pub fn clifford_module_structure(spinors: &[ExactSpinor]) -> Result<CliffordModule> {
    let iso = isotropy_algebra(spinors);
    if iso.radical_dim != 8 {
        return Err(Error::Stabilizer(format!(
            "isotropy algebra of dimension {} is not of the form K⋉R⁸",
            iso.dim
        )));
    }
    let mut gens: Vec<Vec<BigRational>> = Vec::new();
    for s in &spinors[1..] {
        let mut m = transverse_two_form(&spinors[0], s)?;
        for g in &gens {
            let c = trace_pairing(&m, g) / trace_pairing(g, g);
            for (x, y) in m.iter_mut().zip(g) {
                *x -= &c * y;
            }
        }
        if m.iter().any(|x| !x.is_zero()) {
            gens.push(m);
        }
    }
    let mut squares = Vec::new();
    for (r, a) in gens.iter().enumerate() {
        let sq = mat_mul(a, a, 8);
        let c = scalar_multiple(&sq, 8)
            .filter(|c| c < &BigRational::zero())
            .ok_or_else(|| Error::Stabilizer(format!("I_{} does not square to a negative scalar", r + 1)))?;
        squares.push(-c);
        for (s, b) in gens.iter().enumerate().skip(r + 1) {
            let ab = mat_mul(a, b, 8);
            let ba = mat_mul(b, a, 8);
            if ab.iter().zip(&ba).any(|(x, y)| !(x + y).is_zero()) {
                return Err(Error::Stabilizer(format!("I_{} and I_{} do not anticommute", r + 1, s + 1)));
            }
        }
    }
    Ok(CliffordModule { generators: gens, squares })
}

/// One row of the isotropy table.
#[derive(Clone, Debug)]
pub struct CatalogRow {
    pub label: &'static str,
    pub l: usize,
    pub compact: bool,
    pub stabilizer: &'static str,
    pub stabilizer_dim: usize,
    pub sigma: &'static str,
    pub sigma_dim: usize,
    pub representatives: &'static [&'static str],
    /// Number of anticommuting complex structures for `N = L` Killing spinors.
    pub clifford_generators: Option<usize>,
}

impl CatalogRow {
    pub fn radical_dim(&self) -> usize {
        if self.compact {
            0
        } else {
            8
        }
    }

    pub fn representative_spinors(&self) -> Vec<ExactSpinor> {
        self.representatives.iter().map(|r| parse_spinor(r).expect("catalog spinor parses")).collect()
    }

    pub fn expand(&self) -> Result<SpinorSubspace> {
        expand_majorana(&self.representative_spinors(), self.l, self.label)
    }
}

pub const TABLE: [CatalogRow; 11] = [
    CatalogRow {
        label: "L=1",
        l: 1,
        compact: false,
        stabilizer: "Spin(7)⋉R^8",
        stabilizer_dim: 29,
        sigma: "Spin(1,1)",
        sigma_dim: 1,
        representatives: &["1+e_{1234}"],
        clifford_generators: None,
    },
    CatalogRow {
        label: "L=2",
        l: 2,
        compact: false,
        stabilizer: "SU(4)⋉R^8",
        stabilizer_dim: 23,
        sigma: "Spin(1,1)×U(1)",
        sigma_dim: 2,
        representatives: &["1"],
        clifford_generators: Some(1),
    },
    CatalogRow {
        label: "L=3",
        l: 3,
        compact: false,
        stabilizer: "Sp(2)⋉R^8",
        stabilizer_dim: 18,
        sigma: "Spin(1,1)×SU(2)",
        sigma_dim: 4,
        representatives: &["1", "i(e_{12}+e_{34})"],
        clifford_generators: Some(2),
    },
    CatalogRow {
        label: "L=4",
        l: 4,
        compact: false,
        stabilizer: "SU(2)×SU(2)⋉R^8",
        stabilizer_dim: 14,
        sigma: "Spin(1,1)×Sp(1)×Sp(1)",
        sigma_dim: 7,
        representatives: &["1", "e_{12}"],
        clifford_generators: Some(3),
    },
    CatalogRow {
        label: "L=5",
        l: 5,
        compact: false,
        stabilizer: "SU(2)⋉R^8",
        stabilizer_dim: 11,
        sigma: "Spin(1,1)×Sp(2)",
        sigma_dim: 11,
        representatives: &["1", "e_{12}", "e_{13}+e_{24}"],
        clifford_generators: Some(4),
    },
    CatalogRow {
        label: "L=6",
        l: 6,
        compact: false,
        stabilizer: "U(1)⋉R^8",
        stabilizer_dim: 9,
        sigma: "Spin(1,1)×SU(4)",
        sigma_dim: 16,
        representatives: &["1", "e_{12}", "e_{13}"],
        clifford_generators: Some(5),
    },
    CatalogRow {
        label: "L=8",
        l: 8,
        compact: false,
        stabilizer: "R^8",
        stabilizer_dim: 8,
        sigma: "Spin(1,1)×Spin(8)",
        sigma_dim: 29,
        representatives: &["1", "e_{12}", "e_{13}", "e_{14}"],
        clifford_generators: Some(7),
    },
    CatalogRow {
        label: "G2",
        l: 2,
        compact: true,
        stabilizer: "G2",
        stabilizer_dim: 14,
        sigma: "Spin(2,1)",
        sigma_dim: 3,
        representatives: &["1+e_{1234}", "e_{15}+e_{2345}"],
        clifford_generators: None,
    },
    CatalogRow {
        label: "SU3",
        l: 4,
        compact: true,
        stabilizer: "SU(3)",
        stabilizer_dim: 8,
        sigma: "Spin(3,1)×U(1)",
        sigma_dim: 7,
        representatives: &["1", "e_{15}"],
        clifford_generators: None,
    },
    CatalogRow {
        label: "SU2",
        l: 8,
        compact: true,
        stabilizer: "SU(2)",
        stabilizer_dim: 3,
        sigma: "Spin(5,1)×SU(2)",
        sigma_dim: 18,
        representatives: &["1", "e_{12}", "e_{15}", "e_{25}"],
        clifford_generators: None,
    },
    CatalogRow {
        label: "L=16",
        l: 16,
        compact: true,
        stabilizer: "{1}",
        stabilizer_dim: 0,
        sigma: "Spin(9,1)",
        sigma_dim: 45,
        representatives: &[
            "1", "e_{12}", "e_{13}", "e_{14}", "e_{23}", "e_{24}", "e_{34}", "e_{15}", "e_{25}", "e_{35}",
            "e_{45}",
        ],
        clifford_generators: None,
    },
];

/// Look up a row by label (`L=3`, `SU3`, …) or stabilizer name.
pub fn catalog_row(key: &str) -> Option<&'static CatalogRow> {
    TABLE.iter().find(|r| r.label == key || r.stabilizer == key)
}

/// Recomputed values for one catalog row.
#[derive(Clone, Debug, PartialEq)]
pub struct RowCheck {
    pub label: &'static str,
    pub stabilizer_dim: usize,
    pub sigma_dim: usize,
    pub catalog_match: Option<&'static str>,
    pub clifford_generators: Option<usize>,
}

impl RowCheck {
    pub fn matches(&self, row: &CatalogRow) -> bool {
        self.stabilizer_dim == row.stabilizer_dim
            && self.sigma_dim == row.sigma_dim
            && self.catalog_match == Some(row.label)
            && self.clifford_generators == row.clifford_generators
    }
}

pub fn check_row(row: &CatalogRow) -> Result<RowCheck> {
    let p = row.expand()?;
    let iso = isotropy_algebra(p.basis());
    let norm = normalizer_algebra(&p);
    let clifford_generators = match row.clifford_generators {
        Some(_) => Some(clifford_module_structure(p.basis())?.generators.len()),
        None => None,
    };
    Ok(RowCheck {
        label: row.label,
        stabilizer_dim: iso.dim,
        sigma_dim: norm.dim - iso.dim,
        catalog_match: iso.catalog_match,
        clifford_generators,
    })
}

/// Generator counts for `N = 2..8` Killing spinors of the non-compact
/// family; `N = 7` uses the first seven spinors of the `R⁸` basis.
pub fn clifford_counts() -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for row in TABLE.iter().filter(|r| r.clifford_generators.is_some()) {
        let p = row.expand()?;
        if row.l == 8 {
            let seven = &p.basis()[..7];
            out.push((7, clifford_module_structure(seven)?.generators.len()));
        }
        out.push((row.l, clifford_module_structure(p.basis())?.generators.len()));
    }
    Ok(out)
}
