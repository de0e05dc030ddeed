//! Exact arithmetic in `Z[q, q^-1]`.
//!
//! A [`LaurentPoly`] is kept as a list of `(exponent, coefficient)` pairs,
//! strictly ascending in the exponent and with no zero coefficient, so two
//! values are equal exactly when their term lists are equal.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: Vec<(i32, BigInt)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::q_pow(0)
    }

    /// `q^e`.
    pub fn q_pow(e: i32) -> Self {
        Self {
            terms: vec![(e, BigInt::one())],
        }
    }

    pub fn constant<C: Into<BigInt>>(c: C) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * q^e`.
    pub fn monomial<C: Into<BigInt>>(c: C, e: i32) -> Self {
        let c = c.into();
        if c.is_zero() {
            Self::zero()
        } else {
            Self {
                terms: vec![(e, c)],
            }
        }
    }

    /// Builds a polynomial from arbitrary `(exponent, coefficient)` pairs,
    /// summing repeated exponents.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, C)>,
        C: Into<BigInt>,
    {
        let mut acc: BTreeMap<i32, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            *acc.entry(e).or_default() += c.into();
        }
        Self::from_map(acc)
    }

    fn from_map(map: BTreeMap<i32, BigInt>) -> Self {
        Self {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl ExactSizeIterator<Item = (i32, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: i32) -> BigInt {
        match self.terms.binary_search_by_key(&e, |(k, _)| *k) {
            Ok(pos) => self.terms[pos].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn min_exponent(&self) -> Option<i32> {
        self.terms.first().map(|(e, _)| *e)
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.terms.last().map(|(e, _)| *e)
    }

    /// The involution `q -> q^-1`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(e, c)| (-e, c.clone()))
                .collect(),
        }
    }

    pub fn is_bar_invariant(&self) -> bool {
        *self == self.bar()
    }

    /// `bar(self) == -self`.
    pub fn is_bar_antisymmetric(&self) -> bool {
        let n = self.terms.len();
        (0..n).all(|k| {
            let (e, c) = &self.terms[k];
            let (f, d) = &self.terms[n - 1 - k];
            *e == -*f && *c == -d
        })
    }

    /// Multiplication by `q^k`, failing instead of wrapping on overflow.
    pub fn checked_shift(&self, k: i32) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                e.checked_add(k)
                    .map(|e| (e, c.clone()))
                    .ok_or(Error::ExponentOverflow)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { terms })
    }

    /// Multiplication by `q^k`.
    ///
    /// Panics on exponent overflow; use [`checked_shift`](Self::checked_shift)
    /// to handle it.
    pub fn shift(&self, k: i32) -> Self {
        self.checked_shift(k).expect("q-exponent overflow")
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        if other.terms.len() == 1 {
            let (e, c) = &other.terms[0];
            return self.checked_scale_term(c, *e);
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return other.checked_scale_term(c, *e);
        }
        let mut acc: BTreeMap<i32, BigInt> = BTreeMap::new();
        for (e, c) in &self.terms {
            for (f, d) in &other.terms {
                let g = e.checked_add(*f).ok_or(Error::ExponentOverflow)?;
                *acc.entry(g).or_default() += c * d;
            }
        }
        Ok(Self::from_map(acc))
    }

    fn checked_scale_term(&self, c: &BigInt, e: i32) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(f, d)| {
                f.checked_add(e)
                    .map(|g| (g, d * c))
                    .ok_or(Error::ExponentOverflow)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { terms })
    }

    /// Splits a bar-antisymmetric `g` as `g = h - bar(h)` with `h` in `qZ[q]`.
    ///
    /// Such an `h` is unique: it is the positive-exponent part of `g`.
    pub fn antisymmetric_split(&self) -> Result<Self> {
        if !self.is_bar_antisymmetric() {
            return Err(Error::PreconditionViolation(format!(
                "antisymmetric_split needs bar(g) = -g, got g = {self}"
            )));
        }
        Ok(Self {
            terms: self.terms.iter().filter(|(e, _)| *e > 0).cloned().collect(),
        })
    }

    /// `Some(m)` when `self == q^m`.
    pub fn as_pure_power(&self) -> Option<i32> {
        match self.terms.as_slice() {
            [(e, c)] if c.is_one() => Some(*e),
            _ => None,
        }
    }

    /// `Some((c, m))` when `self == c * q^m` for a single term.
    pub fn as_single_term(&self) -> Option<(&BigInt, i32)> {
        match self.terms.as_slice() {
            [(e, c)] => Some((c, *e)),
            _ => None,
        }
    }

    /// True when every exponent is strictly positive, i.e. `self` lies in `qZ[q]`.
    pub fn in_q_zq(&self) -> bool {
        self.terms.iter().all(|(e, _)| *e > 0)
    }

    /// The balanced quantum integer `(q^{2k} - q^{-2k}) / (q^2 - q^{-2})`.
    pub fn quantum_integer(k: i32) -> Self {
        let sign: i64 = if k < 0 { -1 } else { 1 };
        let m = k.abs();
        Self::from_terms((0..m).map(|j| (2 * (m - 1) - 4 * j, sign)))
    }

    /// Value at `q = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c.clone()).sum()
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let unit = abs.is_one();
            match *e {
                0 => write!(f, "{abs}")?,
                1 if unit => f.write_str("q")?,
                1 => write!(f, "{abs}q")?,
                e if unit => write!(f, "q^{e}")?,
                e => write!(f, "{abs}q^{e}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    /// Accepts the display grammar: signed terms `c`, `q`, `q^e`, `cq^e`,
    /// with an optional `*` between coefficient and `q`. Whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        Parser {
            src: s.as_bytes(),
            pos: 0,
        }
        .poly()
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        })
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

    fn digits(&mut self) -> Option<&str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn poly(mut self) -> Result<LaurentPoly> {
        let mut terms: Vec<(i32, BigInt)> = Vec::new();
        let mut first = true;
        loop {
            let negative = match self.peek() {
                None if first => return self.err("empty polynomial"),
                None => break,
                Some(b'+') if !first => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(_) if first => false,
                Some(_) => return self.err("expected '+' or '-'"),
            };
            first = false;
            let (e, mut c) = self.term()?;
            if negative {
                c = -c;
            }
            terms.push((e, c));
        }
        Ok(LaurentPoly::from_terms(terms))
    }

    fn term(&mut self) -> Result<(i32, BigInt)> {
        let coeff = match self.digits() {
            Some(d) => Some(d.parse::<BigInt>().unwrap()),
            None => None,
        };
        if self.peek() == Some(b'*') {
            if coeff.is_none() {
                return self.err("'*' without a coefficient");
            }
            self.pos += 1;
            if self.peek() != Some(b'q') {
                return self.err("expected 'q' after '*'");
            }
        }
        if self.peek() != Some(b'q') {
            return match coeff {
                Some(c) => Ok((0, c)),
                None => self.err("expected a coefficient or 'q'"),
            };
        }
        self.pos += 1;
        let mut e: i64 = 1;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let negative = match self.peek() {
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                _ => false,
            };
            let Some(d) = self.digits() else {
                return self.err("expected an exponent after '^'");
            };
            e = d
                .parse::<i64>()
                .or_else(|_| self.err("exponent out of range"))?;
            if negative {
                e = -e;
            }
        }
        let e = i32::try_from(e).or_else(|_| self.err("exponent out of range"))?;
        Ok((e, coeff.unwrap_or_else(BigInt::one)))
    }
}

fn merge(a: &[(i32, BigInt)], b: &[(i32, BigInt)], negate_b: bool) -> Vec<(i32, BigInt)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let sign = |c: &BigInt| if negate_b { -c } else { c.clone() };
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((b[j].0, sign(&b[j].1)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = if negate_b {
                    &a[i].1 - &b[j].1
                } else {
                    &a[i].1 + &b[j].1
                };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().map(|(e, c)| (*e, sign(c))));
    out
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly {
            terms: merge(&self.terms, &rhs.terms, false),
        }
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly {
            terms: merge(&self.terms, &rhs.terms, true),
        }
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("q-exponent overflow")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for (_, c) in &mut self.terms {
            *c = -std::mem::take(c);
        }
        self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        self.terms = merge(&self.terms, &rhs.terms, false);
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        self.terms = merge(&self.terms, &rhs.terms, true);
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(p("q^2 + 1") + p("-1"), p("q^2"));
        assert_eq!(p("q^2 - q^-2") * p("q^2 + q^-2"), p("q^4 - q^-4"));
        let d = p("q^2 - q^-2");
        assert_eq!(&d * &d, LaurentPoly::from_terms([(4, 1), (0, -2), (-4, 1)]));
    }

    #[test]
    fn bar_examples() {
        assert_eq!(p("q^2").bar(), p("q^-2"));
        assert_eq!(p("3").bar(), p("3"));
        let g = p("q^2 - q^-2");
        assert_eq!(g.bar(), -&g);
        assert!(g.is_bar_antisymmetric());
    }

    #[test]
    fn split_examples() {
        assert_eq!(
            LaurentPoly::zero().antisymmetric_split().unwrap(),
            LaurentPoly::zero()
        );
        let g = p("q^2 - q^-2");
        let h = g.antisymmetric_split().unwrap();
        assert_eq!(h, p("q^2"));
        assert_eq!(&h - &h.bar(), g);
        let g = p("3q - 3q^-1 + q^4 - q^-4");
        let h = g.antisymmetric_split().unwrap();
        assert_eq!(h, p("3q + q^4"));
        assert_eq!(&h - &h.bar(), g);
    }

    #[test]
    fn split_rejects_non_antisymmetric() {
        assert!(matches!(
            p("1").antisymmetric_split(),
            Err(Error::PreconditionViolation(_))
        ));
        assert!(matches!(
            p("q + q^-1").antisymmetric_split(),
            Err(Error::PreconditionViolation(_))
        ));
        assert!(matches!(
            p("q - 2q^-1").antisymmetric_split(),
            Err(Error::PreconditionViolation(_))
        ));
    }

    #[test]
    fn pure_power() {
        assert_eq!(p("q^-3").as_pure_power(), Some(-3));
        assert_eq!(p("1").as_pure_power(), Some(0));
        assert_eq!(p("q + 1").as_pure_power(), None);
        assert_eq!(p("2q").as_pure_power(), None);
        assert_eq!(LaurentPoly::zero().as_pure_power(), None);
    }

    #[test]
    fn display_round_trip() {
        let x = LaurentPoly::from_terms([(-2, -1), (0, 3), (4, 1)]);
        assert_eq!(x.to_string(), "-q^-2 + 3 + q^4");
        assert_eq!(p(&x.to_string()), x);
        assert_eq!(p("-2q + q^1 - 7").to_string(), "-7 - q");
        assert_eq!(p("2*q^3 - q^-1").to_string(), "-q^-1 + 2q^3");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }

    #[test]
    fn parse_errors_carry_position() {
        assert!(matches!(
            "".parse::<LaurentPoly>(),
            Err(Error::Parse { pos: 0, .. })
        ));
        assert!(matches!(
            "q^".parse::<LaurentPoly>(),
            Err(Error::Parse { pos: 2, .. })
        ));
        assert!(matches!(
            "1 2".parse::<LaurentPoly>(),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            "x".parse::<LaurentPoly>(),
            Err(Error::Parse { pos: 0, .. })
        ));
    }

    #[test]
    fn exponent_overflow_is_an_error() {
        let x = LaurentPoly::q_pow(i32::MAX);
        assert_eq!(x.checked_shift(1), Err(Error::ExponentOverflow));
        assert_eq!(
            x.checked_mul(&LaurentPoly::q_pow(1)),
            Err(Error::ExponentOverflow)
        );
    }

    #[test]
    fn big_coefficients_do_not_overflow() {
        let mut x = LaurentPoly::from_terms([(1, 1), (-1, 1)]);
        for _ in 0..7 {
            x = &x * &x;
        }
        // (q + q^-1)^128 has central coefficient C(128, 64) > 2^64.
        let c = x.coeff(0);
        assert!(c > BigInt::from(u64::MAX));
        assert_eq!(x.eval_at_one(), BigInt::from(2).pow(128));
    }

    #[test]
    fn quantum_integers() {
        assert_eq!(LaurentPoly::quantum_integer(0), LaurentPoly::zero());
        assert_eq!(LaurentPoly::quantum_integer(1), LaurentPoly::one());
        assert_eq!(LaurentPoly::quantum_integer(2), p("q^2 + q^-2"));
        assert_eq!(LaurentPoly::quantum_integer(-3), p("-q^4 - 1 - q^-4"));
        for k in -4..=4 {
            let lhs = LaurentPoly::quantum_integer(k) * p("q^2 - q^-2");
            assert_eq!(
                lhs,
                &LaurentPoly::q_pow(2 * k) - &LaurentPoly::q_pow(-2 * k)
            );
        }
    }
}
