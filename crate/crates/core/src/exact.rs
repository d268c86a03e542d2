//! Exact linear algebra over the rationals and Gaussian rationals.
//!
//! Everything the stabilizer and bilinear modules decide (ranks, kernels,
//! linear independence) goes through here, so no tolerance ever enters an
//! algebraic classification.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::ComplexRational;

/// Minimal field interface for Gaussian elimination.
pub trait Field: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn inv(&self) -> Self;
    fn neg(&self) -> Self;
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn inv(&self) -> Self {
        self.recip()
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Field for ComplexRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self.clone() - other.clone()
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn inv(&self) -> Self {
        ComplexRational::inv(self).expect("inverse of zero")
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
}

/// Incrementally maintained reduced row-echelon basis of a row space.
///
/// Rows are fully reduced against each other, so after every insertion
/// the stored rows form the RREF of everything inserted so far.
#[derive(Clone, Debug)]
pub struct RowEchelon<F: Field> {
    width: usize,
    rows: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> RowEchelon<F> {
    pub fn new(width: usize) -> Self {
        Self { width, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<F>] {
        &self.rows
    }

    /// Reduce `v` against the current basis.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.width, "row width mismatch");
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.sub(&c.mul(r));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(Field::is_zero)
    }

    /// Insert a row; returns `true` if it was independent of the basis.
    pub fn insert(&mut self, v: &[F]) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv();
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = x.mul(&inv);
            }
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (x, r) in row.iter_mut().zip(&v) {
                if !r.is_zero() {
                    *x = x.sub(&c.mul(r));
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    /// Basis of the right null space `{x : row · x = 0 for all rows}`.
    ///
    /// One vector per free column, with a 1 in that column: the standard
    /// reduced kernel basis read off the RREF.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let mut out = Vec::new();
        for free in 0..self.width {
            if self.pivots.binary_search(&free).is_ok() {
                continue;
            }
            let mut x = vec![F::zero(); self.width];
            x[free] = F::one();
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                x[p] = row[free].neg();
            }
            out.push(x);
        }
        out
    }
}

/// Rank of a list of rows.
pub fn rank<F: Field>(width: usize, rows: impl IntoIterator<Item = Vec<F>>) -> usize {
    let mut e = RowEchelon::new(width);
    for r in rows {
        e.insert(&r);
        if e.rank() == width {
            break;
        }
    }
    e.rank()
}

/// Kernel of the matrix whose rows are given.
pub fn kernel<F: Field>(width: usize, rows: impl IntoIterator<Item = Vec<F>>) -> Vec<Vec<F>> {
    let mut e = RowEchelon::new(width);
    for r in rows {
        e.insert(&r);
        if e.rank() == width {
            break;
        }
    }
    e.kernel()
}

/// Indices of a maximal linearly independent prefix-greedy subset.
pub fn independent_subset<F: Field>(width: usize, vectors: &[Vec<F>]) -> Vec<usize> {
    let mut e = RowEchelon::new(width);
    vectors
        .iter()
        .enumerate()
        .filter_map(|(i, v)| e.insert(v).then_some(i))
        .collect()
}

/// Split a Gaussian-rational vector into its real coordinates
/// `(re_0, im_0, re_1, im_1, ...)`, for real-linear questions.
pub fn realify(v: &[ComplexRational]) -> Vec<BigRational> {
    v.iter().flat_map(|z| [z.re.clone(), z.im.clone()]).collect()
}
