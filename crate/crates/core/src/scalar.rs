//! Coefficient fields for spinors and forms.
//!
//! Exact work happens over the Gaussian rationals [`ComplexRational`];
//! numerical work over [`Complex64`]. Both implement [`Scalar`], so the
//! gamma-matrix machinery is written once.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Field operations shared by exact and floating spinor coefficients.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + Zero
    + One
{
    /// The imaginary unit.
    fn i() -> Self;
    fn conj(&self) -> Self;
    /// The rational number `num/den`.
    fn ratio(num: i64, den: i64) -> Self;

    /// Multiply by `i^k`.
    fn mul_i_pow(&self, k: u8) -> Self {
        match k % 4 {
            0 => self.clone(),
            1 => self.clone() * Self::i(),
            2 => -self.clone(),
            _ => -(self.clone() * Self::i()),
        }
    }

    /// Lossy conversion, used when exact data feeds a numerical pipeline.
    fn to_c64(&self) -> Complex64;
}

/// A Gaussian rational `re + im i` with arbitrary-precision parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ComplexRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl ComplexRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_integers(re: i64, im: i64) -> Self {
        Self {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        Some(Self { re: &self.re / &n, im: -&self.im / &n })
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for ComplexRational {
    /// Canonical form `a/b+c/d i`; both parts are always printed.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re = fmt_rational(&self.re);
        let sign = if self.im.is_negative() { '-' } else { '+' };
        let im = fmt_rational(&self.im.abs());
        write!(f, "{re}{sign}{im} i")
    }
}

impl fmt::Debug for ComplexRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for ComplexRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl<'a> Add<&'a ComplexRational> for &'a ComplexRational {
    type Output = ComplexRational;
    fn add(self, rhs: &ComplexRational) -> ComplexRational {
        ComplexRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl AddAssign for ComplexRational {
    fn add_assign(&mut self, rhs: Self) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl Sub for ComplexRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl SubAssign for ComplexRational {
    fn sub_assign(&mut self, rhs: Self) {
        self.re -= rhs.re;
        self.im -= rhs.im;
    }
}

impl Mul for ComplexRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<'a> Mul<&'a ComplexRational> for &'a ComplexRational {
    type Output = ComplexRational;
    fn mul(self, rhs: &ComplexRational) -> ComplexRational {
        ComplexRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for ComplexRational {
    type Output = Self;
    /// Panics on division by zero, like the rational division it wraps.
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv().expect("division by zero ComplexRational")
    }
}

impl Neg for ComplexRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

impl Zero for ComplexRational {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for ComplexRational {
    fn one() -> Self {
        Self::from_integers(1, 0)
    }
}

impl Scalar for ComplexRational {
    fn i() -> Self {
        Self::from_integers(0, 1)
    }
    fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im }
    }
    fn ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(num.into(), den.into()))
    }
    fn mul_i_pow(&self, k: u8) -> Self {
        match k % 4 {
            0 => self.clone(),
            1 => Self { re: -&self.im, im: self.re.clone() },
            2 => Self { re: -&self.re, im: -&self.im },
            _ => Self { re: self.im.clone(), im: -&self.re },
        }
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

impl Scalar for Complex64 {
    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
}

/// Shorthand for an exact rational.
pub fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_canonical() {
        let z = ComplexRational::new(q(1, 2), q(-3, 4));
        assert_eq!(z.to_string(), "1/2-3/4 i");
        assert_eq!(ComplexRational::one().to_string(), "1+0 i");
    }

    #[test]
    fn i_powers() {
        let z = ComplexRational::new(q(2, 3), q(5, 7));
        let i = ComplexRational::i();
        assert_eq!(z.mul_i_pow(1), z.clone() * i.clone());
        assert_eq!(z.mul_i_pow(3), z.clone() * i.clone() * i.clone() * i);
        assert_eq!(z.mul_i_pow(2), -z);
    }

    #[test]
    fn inverse() {
        let z = ComplexRational::new(q(1, 2), q(-3, 4));
        assert_eq!(z.clone() / z, ComplexRational::one());
        assert!(ComplexRational::zero().inv().is_none());
    }
}
