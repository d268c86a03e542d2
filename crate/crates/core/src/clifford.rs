//! Dirac spinors of Spin(9,1) realized as forms on C^5.
//!
//! A spinor is a complex combination of the 32 monomials `e_S`, with `S` a
//! subset of `{1,..,5}` stored as a 5-bit mask (bit `k-1` for `e_k`). The
//! gamma matrices act by wedge and contraction:
//!
//! ```text
//! Γ_0 ψ = -e_5∧ψ + e_5⌟ψ        Γ_5 ψ = e_5∧ψ + e_5⌟ψ
//! Γ_i ψ =  e_i∧ψ + e_i⌟ψ        Γ_{5+i} ψ = i e_i∧ψ - i e_i⌟ψ     (i = 1..4)
//! ```
//!
//! Moving `e_j` past the smaller indices of `S` costs `(-1)^{#{s in S : s < j}}`
//! for both the wedge and the contraction. On a basis monomial each `Γ_A`
//! therefore returns a single monomial times a power of `i`, which is what
//! [`gamma_on_basis`] tabulates.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use crate::conventions::CHIRALITY_SIGN;
use crate::error::{Error, Result};
use num_traits::Zero;

use crate::scalar::{ComplexRational, Scalar};

/// Minkowski metric signature in the frame: η_00 = -1, η_ii = +1.
pub const ETA: [i8; 10] = [-1, 1, 1, 1, 1, 1, 1, 1, 1, 1];

/// A subset of `{1,..,5}` labelling the monomial `e_{i1..ik}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinorIndex(pub u8);

impl SpinorIndex {
    pub const COUNT: usize = 32;

    pub fn from_digits(digits: &[u8]) -> Option<Self> {
        let mut mask = 0u8;
        for &d in digits {
            if !(1..=5).contains(&d) || mask & (1 << (d - 1)) != 0 {
                return None;
            }
            mask |= 1 << (d - 1);
        }
        Some(Self(mask))
    }

    /// Members of the subset in increasing order.
    pub fn digits(self) -> Vec<u8> {
        (1..=5).filter(|&k| self.0 & (1 << (k - 1)) != 0).collect()
    }

    pub fn degree(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_even(self) -> bool {
        self.degree() % 2 == 0
    }

    pub fn all() -> impl Iterator<Item = SpinorIndex> {
        (0..32u8).map(SpinorIndex)
    }
}

impl fmt::Display for SpinorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e_{{")?;
        for d in self.digits() {
            write!(f, "{d}")?;
        }
        write!(f, "}}")
    }
}

/// Label of `Γ_A` in the pseudo-orthonormal frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FrameIndex(u8);

impl FrameIndex {
    pub fn new(a: usize) -> Result<Self> {
        if a < 10 {
            Ok(Self(a as u8))
        } else {
            Err(Error::FrameIndex(a))
        }
    }

    pub fn value(self) -> usize {
        self.0 as usize
    }

    pub fn eta(self) -> i8 {
        ETA[self.0 as usize]
    }

    pub fn all() -> impl Iterator<Item = FrameIndex> {
        (0..10u8).map(FrameIndex)
    }
}

/// Image of the basis monomial `mask` under `Γ_a`: `i^phase · e_target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisImage {
    pub target: u8,
    pub phase: u8,
}

/// `Γ_a e_S` for frame index `a` and subset mask `s`.
pub fn gamma_on_basis(a: usize, s: u8) -> BasisImage {
    debug_assert!(a < 10 && s < 32);
    let j = match a {
        0 | 5 => 5u8,
        1..=4 => a as u8,
        _ => (a - 5) as u8,
    };
    let bit = 1u8 << (j - 1);
    let below = (s & (bit - 1)).count_ones();
    let sign_phase = if below % 2 == 0 { 0u8 } else { 2u8 };
    let wedge = s & bit == 0;
    // Extra phase from the coefficient in front of the wedge or contraction.
    let coeff_phase = match (a, wedge) {
        (0, true) => 2,
        (0, false) => 0,
        (1..=5, _) => 0,
        (_, true) => 1,
        (_, false) => 3,
    };
    BasisImage { target: s ^ bit, phase: (sign_phase + coeff_phase) % 4 }
}

/// A Dirac spinor with 32 amplitudes.
#[derive(Clone, PartialEq)]
pub struct Spinor<T: Scalar = ComplexRational> {
    amps: Vec<T>,
}

pub type ExactSpinor = Spinor<ComplexRational>;
pub type NumSpinor = Spinor<Complex64>;

impl<T: Scalar> Spinor<T> {
    pub fn zero() -> Self {
        Self { amps: vec![T::zero(); 32] }
    }

    /// The monomial `e_S` with unit coefficient.
    pub fn basis(s: SpinorIndex) -> Self {
        let mut out = Self::zero();
        out.amps[s.0 as usize] = T::one();
        out
    }

    /// The spinor `1` (the empty monomial).
    pub fn one() -> Self {
        Self::basis(SpinorIndex(0))
    }

    /// Monomial from its digit list, e.g. `&[1, 2, 3, 4]` for `e_{1234}`.
    pub fn monomial(digits: &[u8]) -> Self {
        Self::basis(SpinorIndex::from_digits(digits).expect("invalid monomial digits"))
    }

    pub fn from_amplitudes(amps: Vec<T>) -> Self {
        assert_eq!(amps.len(), 32, "a spinor has 32 amplitudes");
        Self { amps }
    }

    pub fn amplitude(&self, s: SpinorIndex) -> &T {
        &self.amps[s.0 as usize]
    }

    pub fn amplitudes(&self) -> &[T] {
        &self.amps
    }

    pub fn set(&mut self, s: SpinorIndex, value: T) {
        self.amps[s.0 as usize] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.amps.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self { amps: self.amps.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    pub fn conj(&self) -> Self {
        Self { amps: self.amps.iter().map(Scalar::conj).collect() }
    }

    /// Support as subset masks with nonzero amplitude.
    pub fn support(&self) -> impl Iterator<Item = SpinorIndex> + '_ {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(s, _)| SpinorIndex(s as u8))
    }

    pub fn to_c64(&self) -> NumSpinor {
        Spinor { amps: self.amps.iter().map(Scalar::to_c64).collect() }
    }

    /// Hermitian basis inner product `<self, other> = Σ conj(self_S) other_S`.
    pub fn hermitian(&self, other: &Self) -> T {
        self.amps
            .iter()
            .zip(&other.amps)
            .fold(T::zero(), |acc, (a, b)| acc + a.conj() * b.clone())
    }

    /// Wedge product of forms; reduces to scalar multiplication when
    /// either factor is a multiple of `1`.
    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (s, a) in self.amps.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (t, b) in other.amps.iter().enumerate() {
                if b.is_zero() || s & t != 0 {
                    continue;
                }
                let sign = shuffle_sign(s as u8, t as u8);
                let c = a.clone() * b.clone();
                let c = if sign { -c } else { c };
                out.amps[s | t] += c;
            }
        }
        out
    }
}

/// Sign of `e_S ∧ e_T = ± e_{S∪T}`: true when odd.
fn shuffle_sign(s: u8, t: u8) -> bool {
    let mut inversions = 0u32;
    for j in 0..5 {
        if t & (1 << j) != 0 {
            inversions += (s >> (j + 1)).count_ones();
        }
    }
    inversions % 2 == 1
}

impl<T: Scalar> Add for Spinor<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<'a, T: Scalar> Add<&'a Spinor<T>> for &'a Spinor<T> {
    type Output = Spinor<T>;
    fn add(self, rhs: &Spinor<T>) -> Spinor<T> {
        Spinor {
            amps: self.amps.iter().zip(&rhs.amps).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<T: Scalar> Sub for Spinor<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<'a, T: Scalar> Sub<&'a Spinor<T>> for &'a Spinor<T> {
    type Output = Spinor<T>;
    fn sub(self, rhs: &Spinor<T>) -> Spinor<T> {
        Spinor {
            amps: self.amps.iter().zip(&rhs.amps).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<T: Scalar> Neg for Spinor<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Spinor { amps: self.amps.into_iter().map(|a| -a).collect() }
    }
}

impl<T: Scalar> fmt::Debug for Spinor<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = f.debug_map();
        for s in self.support() {
            terms.entry(&s.to_string(), self.amplitude(s));
        }
        terms.finish()
    }
}

/// `Γ_A ψ`.
pub fn gamma_apply<T: Scalar>(a: FrameIndex, psi: &Spinor<T>) -> Spinor<T> {
    gamma_apply_raw(a.value(), psi)
}

pub(crate) fn gamma_apply_raw<T: Scalar>(a: usize, psi: &Spinor<T>) -> Spinor<T> {
    let mut out = Spinor::zero();
    for (s, amp) in psi.amps.iter().enumerate() {
        if amp.is_zero() {
            continue;
        }
        let img = gamma_on_basis(a, s as u8);
        out.amps[img.target as usize] = amp.mul_i_pow(img.phase);
    }
    out
}

/// `Γ_{A1} Γ_{A2} … Γ_{Ak} ψ` for pairwise distinct indices.
pub fn gamma_monomial<T: Scalar>(indices: &[FrameIndex], psi: &Spinor<T>) -> Result<Spinor<T>> {
    let mut seen = 0u16;
    for a in indices {
        let bit = 1u16 << a.value();
        if seen & bit != 0 {
            return Err(Error::UnreducedMonomial(a.value() as u8));
        }
        seen |= bit;
    }
    Ok(gamma_product_raw(indices.iter().map(|a| a.value()), psi))
}

/// Unchecked product; the rightmost index acts first.
pub(crate) fn gamma_product_raw<T: Scalar>(
    indices: impl DoubleEndedIterator<Item = usize>,
    psi: &Spinor<T>,
) -> Spinor<T> {
    indices.rev().fold(psi.clone(), |acc, a| gamma_apply_raw(a, &acc))
}

/// Convenience for literal index lists; panics on out-of-range indices.
pub fn gamma<T: Scalar>(indices: &[usize], psi: &Spinor<T>) -> Result<Spinor<T>> {
    let idx = indices.iter().map(|&a| FrameIndex::new(a)).collect::<Result<Vec<_>>>()?;
    gamma_monomial(&idx, psi)
}

/// Chirality of a nonzero spinor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chirality {
    Positive,
    Negative,
    Mixed,
}

/// `+1` on even forms, `-1` on odd forms, mixed otherwise.
///
/// The chirality operator is `CHIRALITY_SIGN · Γ_0 Γ_1 … Γ_9`; its sign is
/// fixed so that even forms are positive (see [`crate::conventions`]).
pub fn chirality<T: Scalar>(psi: &Spinor<T>) -> Result<Chirality> {
    if psi.is_zero() {
        return Err(Error::ZeroSpinor);
    }
    let even = psi.support().any(|s| s.is_even());
    let odd = psi.support().any(|s| !s.is_even());
    Ok(match (even, odd) {
        (true, false) => Chirality::Positive,
        (false, true) => Chirality::Negative,
        _ => Chirality::Mixed,
    })
}

/// `CHIRALITY_SIGN · Γ_0…Γ_9 ψ`.
pub fn chirality_operator<T: Scalar>(psi: &Spinor<T>) -> Spinor<T> {
    let v = gamma_product_raw(0..10, psi);
    if CHIRALITY_SIGN > 0 {
        v
    } else {
        -v
    }
}

/// The anti-linear reality map `R(ψ) = Γ_{6789} ψ*`.
pub fn reality_map<T: Scalar>(psi: &Spinor<T>) -> Spinor<T> {
    gamma_product_raw(6..10, &psi.conj())
}

/// True when `η* = Γ_{6789} η`, i.e. `R(η) = η`.
pub fn is_majorana<T: Scalar>(psi: &Spinor<T>) -> bool {
    reality_map(psi) == *psi
}

/// Real part `ψ + R(ψ)`; `majorana_real(1) = 1 + e_{1234}`.
pub fn majorana_real<T: Scalar>(psi: &Spinor<T>) -> Spinor<T> {
    psi + &reality_map(psi)
}

/// Imaginary part `i(ψ - R(ψ))`; `majorana_imag(1) = i(1 - e_{1234})`.
pub fn majorana_imag<T: Scalar>(psi: &Spinor<T>) -> Spinor<T> {
    (psi - &reality_map(psi)).scale(&T::i())
}
