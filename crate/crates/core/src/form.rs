//! Exterior forms at a point, stored on strictly increasing index tuples.
//!
//! A degree-`k` form in dimension `n` keeps one coefficient per subset of
//! size `k`, i.e. `α = Σ_{i1<…<ik} α_{i1…ik} e^{i1}∧…∧e^{ik}`. Any
//! `1/k!` from summing over all orderings is absorbed by this convention.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::ComplexRational;

/// Coefficient requirements for [`Form`].
pub trait Coeff:
    Clone + PartialEq + fmt::Debug + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
}

impl<T> Coeff for T where
    T: Clone + PartialEq + fmt::Debug + Zero + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>
{
}

pub const MAX_DIM: usize = 10;

/// Lexicographic enumeration of the `k`-subsets of `{0..n-1}`.
pub struct SubsetBasis {
    pub masks: Vec<u16>,
    index: Vec<u32>,
}

impl SubsetBasis {
    fn build(n: usize, k: usize) -> Self {
        let mut masks: Vec<u16> =
            (0u16..(1 << n)).filter(|m| m.count_ones() as usize == k).collect();
        masks.sort_by_key(|&m| mask_to_tuple(m));
        let mut index = vec![u32::MAX; 1 << n];
        for (i, &m) in masks.iter().enumerate() {
            index[m as usize] = i as u32;
        }
        Self { masks, index }
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn position(&self, mask: u16) -> usize {
        self.index[mask as usize] as usize
    }
}

/// Cached subset basis for dimension `n` and degree `k`.
pub fn subsets(n: usize, k: usize) -> &'static SubsetBasis {
    static CACHE: OnceLock<Vec<Vec<SubsetBasis>>> = OnceLock::new();
    let table = CACHE.get_or_init(|| {
        (0..=MAX_DIM).map(|n| (0..=n).map(|k| SubsetBasis::build(n, k)).collect()).collect()
    });
    &table[n][k]
}

pub fn mask_to_tuple(mask: u16) -> Vec<usize> {
    (0..16).filter(|b| mask & (1 << b) != 0).collect()
}

/// Mask and permutation parity of an index list; `None` on repeats.
pub fn sort_indices(indices: &[usize]) -> Option<(u16, bool)> {
    let mut mask = 0u16;
    let mut odd = false;
    for &i in indices {
        let bit = 1u16 << i;
        if mask & bit != 0 {
            return None;
        }
        odd ^= (mask >> (i + 1)).count_ones() % 2 == 1;
        mask |= bit;
    }
    Some((mask, odd))
}

/// A `degree`-form in `dim` dimensions.
#[derive(Clone, PartialEq)]
pub struct Form<T: Coeff> {
    dim: usize,
    degree: usize,
    comps: Vec<T>,
}

/// Exact spacetime form, the `FormValue` of bilinear computations.
pub type ExactForm = Form<ComplexRational>;
/// Floating-point form used by the numerical modules.
pub type RealForm = Form<f64>;

impl<T: Coeff> Form<T> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(dim <= MAX_DIM && degree <= dim, "degree {degree} in dimension {dim}");
        Self { dim, degree, comps: vec![T::zero(); subsets(dim, degree).len()] }
    }

    pub fn try_zero(dim: usize, degree: usize) -> Result<Self> {
        if dim > MAX_DIM || degree > dim {
            return Err(Error::Degree { degree, dim });
        }
        Ok(Self::zero(dim, degree))
    }

    /// The 0-form with value `c`.
    pub fn scalar(dim: usize, c: T) -> Self {
        let mut f = Self::zero(dim, 0);
        f.comps[0] = c;
        f
    }

    /// The basis form `e^{i1}∧…∧e^{ik}` (indices in any order).
    pub fn basis(dim: usize, indices: &[usize], one: T) -> Self {
        let mut f = Self::zero(dim, indices.len());
        f.set(indices, one);
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &[T] {
        &self.comps
    }

    pub fn components_mut(&mut self) -> &mut [T] {
        &mut self.comps
    }

    pub fn from_components(dim: usize, degree: usize, comps: Vec<T>) -> Self {
        assert_eq!(comps.len(), subsets(dim, degree).len());
        Self { dim, degree, comps }
    }

    /// Component with indices in arbitrary order (antisymmetry applied).
    pub fn get(&self, indices: &[usize]) -> T {
        debug_assert_eq!(indices.len(), self.degree);
        match sort_indices(indices) {
            None => T::zero(),
            Some((mask, odd)) => {
                let v = self.comps[subsets(self.dim, self.degree).position(mask)].clone();
                if odd {
                    -v
                } else {
                    v
                }
            }
        }
    }

    /// Component by sorted-subset mask.
    pub fn get_mask(&self, mask: u16) -> &T {
        &self.comps[subsets(self.dim, self.degree).position(mask)]
    }

    /// Set the component `α_{indices}`, keeping antisymmetry.
    pub fn set(&mut self, indices: &[usize], value: T) {
        let (mask, odd) = sort_indices(indices).expect("repeated form index");
        let pos = subsets(self.dim, self.degree).position(mask);
        self.comps[pos] = if odd { -value } else { value };
    }

    /// Iterate over `(sorted tuple, coefficient)`.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, &T)> {
        subsets(self.dim, self.degree)
            .masks
            .iter()
            .zip(&self.comps)
            .map(|(&m, c)| (mask_to_tuple(m), c))
    }

    pub fn iter_masks(&self) -> impl Iterator<Item = (u16, &T)> {
        subsets(self.dim, self.degree).masks.iter().copied().zip(&self.comps)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Zero::is_zero)
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Form<U> {
        Form { dim: self.dim, degree: self.degree, comps: self.comps.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let deg = self.degree + other.degree;
        assert!(deg <= self.dim, "wedge degree {deg} exceeds dimension {}", self.dim);
        let mut out = Self::zero(self.dim, deg);
        for (ma, a) in self.iter_masks() {
            if a.is_zero() {
                continue;
            }
            for (mb, b) in other.iter_masks() {
                if b.is_zero() || ma & mb != 0 {
                    continue;
                }
                let mut idx = mask_to_tuple(ma);
                idx.extend(mask_to_tuple(mb));
                let (m, odd) = sort_indices(&idx).expect("disjoint");
                let pos = subsets(self.dim, deg).position(m);
                let c = a.clone() * b.clone();
                let v = out.comps[pos].clone();
                out.comps[pos] = if odd { v - c } else { v + c };
            }
        }
        out
    }

    /// Pull the form back to the index subset `dirs` (in the given order),
    /// giving a form in `dirs.len()` dimensions.
    pub fn restrict(&self, dirs: &[usize]) -> Self {
        let n = dirs.len();
        let mut out = Self::zero(n, self.degree.min(n));
        if self.degree > n {
            return out;
        }
        for &m in &subsets(n, self.degree).masks {
            let idx: Vec<usize> = mask_to_tuple(m).iter().map(|&i| dirs[i]).collect();
            let pos = subsets(n, self.degree).position(m);
            out.comps[pos] = self.get(&idx);
        }
        out
    }

    /// Push forward a form on `dirs.len()` dimensions into `dim` dimensions.
    pub fn embed(&self, dim: usize, dirs: &[usize]) -> Self {
        assert_eq!(dirs.len(), self.dim);
        let mut out = Self::zero(dim, self.degree);
        for (idx, c) in self.iter() {
            if c.is_zero() {
                continue;
            }
            let big: Vec<usize> = idx.iter().map(|&i| dirs[i]).collect();
            let (mask, odd) = sort_indices(&big).expect("distinct directions");
            let pos = subsets(dim, self.degree).position(mask);
            out.comps[pos] = if odd { -c.clone() } else { c.clone() };
        }
        out
    }
}

impl<T: Coeff> Add for Form<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        assert_eq!((self.dim, self.degree), (rhs.dim, rhs.degree));
        let comps = self.comps.into_iter().zip(rhs.comps).map(|(a, b)| a + b).collect();
        Self { comps, ..self }
    }
}

impl<T: Coeff> Sub for Form<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        assert_eq!((self.dim, self.degree), (rhs.dim, rhs.degree));
        let comps = self.comps.into_iter().zip(rhs.comps).map(|(a, b)| a - b).collect();
        Self { comps, ..self }
    }
}

impl<T: Coeff> Neg for Form<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { comps: self.comps.into_iter().map(|a| -a).collect(), ..self }
    }
}

impl<T: Coeff> fmt::Debug for Form<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (idx, c) in self.iter() {
            if !c.is_zero() {
                m.entry(&idx, c);
            }
        }
        m.finish()
    }
}

impl RealForm {
    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.comps.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Euclidean norm of the stored components.
    pub fn norm(&self) -> f64 {
        self.comps.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn to_json(&self) -> Value {
        let comps: BTreeMap<String, String> = self
            .iter()
            .filter(|(_, c)| **c != 0.0)
            .map(|(idx, c)| (tuple_key(&idx), format!("{c},0")))
            .collect();
        json!({ "degree": self.degree, "components": comps })
    }

    /// Parse the `{"degree", "components": {"A,B,..": "re,im"}}` layout,
    /// rejecting nonzero imaginary parts.
    pub fn from_json(v: &Value, dim: usize) -> Result<Self> {
        let (degree, entries) = parse_form_json(v, dim)?;
        let mut f = Self::zero(dim, degree);
        for (idx, re, im) in entries {
            let re: f64 = re.parse().map_err(|_| json_err(&format!("bad number `{re}`")))?;
            let im: f64 = im.parse().map_err(|_| json_err(&format!("bad number `{im}`")))?;
            if im != 0.0 {
                return Err(json_err("real form expected"));
            }
            f.set(&idx, re);
        }
        Ok(f)
    }
}

impl ExactForm {
    pub fn to_f64(&self) -> RealForm {
        self.map(|c| crate::scalar::rational_to_f64(&c.re))
    }

    pub fn to_json(&self) -> Value {
        let comps: BTreeMap<String, String> = self
            .iter()
            .filter(|(_, c)| !Zero::is_zero(*c))
            .map(|(idx, c)| (tuple_key(&idx), format!("{},{}", c.re, c.im)))
            .collect();
        json!({ "degree": self.degree, "components": comps })
    }

    pub fn from_json(v: &Value, dim: usize) -> Result<Self> {
        let (degree, entries) = parse_form_json(v, dim)?;
        let mut f = Self::zero(dim, degree);
        for (idx, re, im) in entries {
            let re: BigRational = re.parse().map_err(|_| json_err(&format!("bad rational `{re}`")))?;
            let im: BigRational = im.parse().map_err(|_| json_err(&format!("bad rational `{im}`")))?;
            f.set(&idx, ComplexRational::new(re, im));
        }
        Ok(f)
    }

    /// Real and imaginary parts as a flat rational vector.
    pub fn realified(&self) -> Vec<BigRational> {
        crate::exact::realify(&self.comps)
    }
}

fn tuple_key(idx: &[usize]) -> String {
    idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

fn json_err(msg: &str) -> Error {
    Error::Spec(format!("form JSON: {msg}"))
}

type FormEntries = Vec<(Vec<usize>, String, String)>;

fn parse_form_json(v: &Value, dim: usize) -> Result<(usize, FormEntries)> {
    let degree = v
        .get("degree")
        .and_then(Value::as_u64)
        .ok_or_else(|| json_err("missing integer `degree`"))? as usize;
    if degree > dim {
        return Err(Error::Degree { degree, dim });
    }
    let comps = v
        .get("components")
        .and_then(Value::as_object)
        .ok_or_else(|| json_err("missing object `components`"))?;
    let mut out = Vec::new();
    for (key, val) in comps {
        let idx: Vec<usize> = if key.trim().is_empty() {
            Vec::new()
        } else {
            key.split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| json_err(&format!("bad index list `{key}`"))))
                .collect::<Result<_>>()?
        };
        if idx.len() != degree || idx.iter().any(|&i| i >= dim) || sort_indices(&idx).is_none() {
            return Err(json_err(&format!("index list `{key}` does not fit degree {degree}")));
        }
        let (re, im) = match val {
            Value::String(s) => match s.split_once(',') {
                Some((a, b)) => (a.trim().to_string(), b.trim().to_string()),
                None => (s.trim().to_string(), "0".to_string()),
            },
            Value::Number(n) => (n.to_string(), "0".to_string()),
            _ => return Err(json_err("component must be a \"re,im\" string or a number")),
        };
        out.push((idx, re, im));
    }
    Ok((degree, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antisymmetric_access() {
        let mut f = RealForm::zero(10, 3);
        f.set(&[4, 1, 7], 2.0);
        assert_eq!(f.get(&[1, 4, 7]), -2.0);
        assert_eq!(f.get(&[7, 1, 4]), -2.0);
        assert_eq!(f.get(&[1, 1, 4]), 0.0);
    }

    #[test]
    fn wedge_anticommutes_for_one_forms() {
        let a = RealForm::basis(4, &[0], 1.0) + RealForm::basis(4, &[2], 3.0);
        let b = RealForm::basis(4, &[1], 2.0);
        assert_eq!(a.wedge(&b), -b.wedge(&a));
        assert_eq!(a.wedge(&b).get(&[1, 2]), -6.0);
        assert_eq!(a.wedge(&b).get(&[2, 1]), 6.0);
    }

    #[test]
    fn restrict_and_embed_are_inverse_on_support() {
        let dirs = [1, 2, 3, 4, 6, 7, 8, 9];
        let mut f = RealForm::zero(8, 2);
        f.set(&[0, 5], 1.5);
        f.set(&[7, 2], -0.5);
        let big = f.embed(10, &dirs);
        assert_eq!(big.get(&[1, 7]), 1.5);
        assert_eq!(big.restrict(&dirs), f);
    }

    #[test]
    fn json_round_trip_exact() {
        let mut f = ExactForm::zero(10, 2);
        f.set(&[0, 5], ComplexRational::new(crate::scalar::q(1, 2), crate::scalar::q(-3, 1)));
        let v = f.to_json();
        assert_eq!(v["components"]["0,5"], "1/2,-3");
        assert_eq!(ExactForm::from_json(&v, 10).unwrap(), f);
    }

    #[test]
    fn json_rejects_bad_degree() {
        let v = json!({"degree": 2, "components": {"0,1,2": "1,0"}});
        assert!(RealForm::from_json(&v, 10).is_err());
    }
}
