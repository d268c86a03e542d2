//! Text form of exact spinors.
//!
//! Printing produces terms `(a/b+c/d i) * e_{i1…ik}` joined by ` + `, in
//! order of degree and then digits; the zero spinor prints as `0`. Parsing
//! accepts that canonical form and a looser expression syntax used on the
//! command line:
//!
//! ```text
//! expr   := [+|-] term ((+|-) term)*
//! term   := factor ([*] factor)*
//! factor := number | i | e_{digits} | e_digit | ( expr )
//! number := digits [/ digits]
//! ```
//!
//! Juxtaposition and `*` both mean the wedge product of forms, which is
//! ordinary scalar multiplication whenever one factor is a scalar. So
//! `1+e_{1234}`, `i(e_{12}+e_{34})` and `(1/2-3 i) * e_{15}` all parse.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::clifford::{ExactSpinor, SpinorIndex, Spinor};
use crate::error::{Error, Result};
use crate::scalar::{ComplexRational, Scalar};

impl fmt::Display for Spinor<ComplexRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut order: Vec<SpinorIndex> = self.support().collect();
        if order.is_empty() {
            return write!(f, "0");
        }
        order.sort_by_key(|s| (s.degree(), s.digits()));
        for (k, s) in order.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}) * {}", self.amplitude(*s), s)?;
        }
        Ok(())
    }
}

impl FromStr for Spinor<ComplexRational> {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_spinor(s)
    }
}

pub fn parse_spinor(text: &str) -> Result<ExactSpinor> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<ExactSpinor> {
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ExactSpinor> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = acc.wedge(&rhs);
                }
                Some(c) if c.is_ascii_digit() || c == b'i' || c == b'e' || c == b'(' => {
                    let rhs = self.factor()?;
                    acc = acc.wedge(&rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<ExactSpinor> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(ExactSpinor::one().scale(&ComplexRational::i()))
            }
            Some(b'e') => self.monomial(),
            Some(c) if c.is_ascii_digit() => {
                let q = self.number()?;
                Ok(ExactSpinor::one().scale(&ComplexRational::real(q)))
            }
            Some(_) => Err(self.err("expected a number, `i`, `e_{..}` or `(`")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn digits(&mut self) -> Result<&[u8]> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(&self.src[start..self.pos])
    }

    fn integer(&mut self) -> Result<BigInt> {
        let d = self.digits()?;
        let s = std::str::from_utf8(d).expect("ascii digits");
        Ok(s.parse().expect("digit string parses"))
    }

    fn number(&mut self) -> Result<BigRational> {
        let num = self.integer()?;
        if self.src.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            let den = self.integer()?;
            if den == BigInt::from(0) {
                return Err(self.err("zero denominator"));
            }
            return Ok(BigRational::new(num, den));
        }
        Ok(BigRational::from_integer(num))
    }

    fn monomial(&mut self) -> Result<ExactSpinor> {
        self.pos += 1; // 'e'
        if self.src.get(self.pos) != Some(&b'_') {
            return Err(self.err("expected `_` after `e`"));
        }
        self.pos += 1;
        let digits: Vec<u8> = if self.src.get(self.pos) == Some(&b'{') {
            self.pos += 1;
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let ds = self.src[start..self.pos].iter().map(|c| c - b'0').collect();
            if self.src.get(self.pos) != Some(&b'}') {
                return Err(self.err("expected `}`"));
            }
            self.pos += 1;
            ds
        } else {
            match self.src.get(self.pos) {
                Some(c) if c.is_ascii_digit() => {
                    self.pos += 1;
                    vec![c - b'0']
                }
                _ => return Err(self.err("expected index digit")),
            }
        };
        let mut sorted = digits.clone();
        sorted.sort_unstable();
        let idx = SpinorIndex::from_digits(&sorted)
            .ok_or_else(|| self.err("monomial indices must be distinct digits 1..5"))?;
        // e_{21} = -e_{12}: build by successive wedges to get the sign right.
        if sorted == digits {
            return Ok(ExactSpinor::basis(idx));
        }
        let mut acc = ExactSpinor::one();
        for d in digits {
            acc = acc.wedge(&ExactSpinor::monomial(&[d]));
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::scalar::q;
    use proptest::prelude::*;

    #[test]
    fn parses_table_notation() {
        let a: ExactSpinor = "1+e_{1234}".parse().unwrap();
        assert_eq!(a, ExactSpinor::one() + ExactSpinor::monomial(&[1, 2, 3, 4]));
        let b: ExactSpinor = "i(e_{12}+e_{34})".parse().unwrap();
        let expect = (ExactSpinor::monomial(&[1, 2]) + ExactSpinor::monomial(&[3, 4]))
            .scale(&ComplexRational::i());
        assert_eq!(b, expect);
        let c: ExactSpinor = "e_1 e_2".parse().unwrap();
        assert_eq!(c, ExactSpinor::monomial(&[1, 2]));
        let d: ExactSpinor = "e_{21}".parse().unwrap();
        assert_eq!(d, -ExactSpinor::monomial(&[1, 2]));
    }

    #[test]
    fn canonical_print() {
        let s = ExactSpinor::one().scale(&ComplexRational::new(q(1, 2), q(-3, 4)))
            + ExactSpinor::monomial(&[1, 5]);
        assert_eq!(s.to_string(), "(1/2-3/4 i) * e_{} + (1+0 i) * e_{15}");
        assert_eq!(ExactSpinor::zero().to_string(), "0");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_spinor("e_{16}").is_err());
        assert!(parse_spinor("1 +").is_err());
        assert!(parse_spinor("e_{11}").is_err());
        assert!(parse_spinor("1/0").is_err());
        assert!(parse_spinor("(1").is_err());
    }

    fn arb_rational() -> impl Strategy<Value = BigRational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| q(n, d))
    }

    fn arb_spinor() -> impl Strategy<Value = ExactSpinor> {
        proptest::collection::vec((arb_rational(), arb_rational(), any::<bool>()), 32).prop_map(
            |v| {
                ExactSpinor::from_amplitudes(
                    v.into_iter()
                        .map(|(re, im, keep)| {
                            if keep {
                                ComplexRational::new(re, im)
                            } else {
                                ComplexRational::zero()
                            }
                        })
                        .collect(),
                )
            },
        )
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(s in arb_spinor()) {
            let text = s.to_string();
            let back: ExactSpinor = text.parse().unwrap();
            prop_assert_eq!(back, s);
        }
    }
}
