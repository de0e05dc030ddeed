//! Elements of `O_q(M(n))` in the ordered-monomial basis `{Z^A}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::matrix::{ExpMatrix, Letter};

/// A finite `Z[q, q^-1]`-combination of ordered monomials `Z^A`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    n: usize,
    terms: BTreeMap<ExpMatrix, LaurentPoly>,
}

impl Element {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(ExpMatrix::zeros(n))
    }

    /// `Z^A`.
    pub fn monomial(a: ExpMatrix) -> Self {
        Self::term(a, LaurentPoly::one())
    }

    pub fn term(a: ExpMatrix, c: LaurentPoly) -> Self {
        let n = a.n();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(a, c);
        }
        Self { n, terms }
    }

    pub fn generator(n: usize, l: Letter) -> Self {
        Self::monomial(ExpMatrix::unit(n, l))
    }

    /// Builds an element from `(matrix, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExpMatrix, LaurentPoly)>,
    {
        let mut x = Self::zero(n);
        for (a, c) in terms {
            if a.n() != n {
                return Err(Error::SizeMismatch {
                    left: n,
                    right: a.n(),
                });
            }
            x.add_term(a, &c);
        }
        Ok(x)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lex order of the index matrix.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExpMatrix, &LaurentPoly)> + '_ {
        self.terms.iter()
    }

    pub fn support(&self) -> impl DoubleEndedIterator<Item = &ExpMatrix> + '_ {
        self.terms.keys()
    }

    pub fn coeff(&self, a: &ExpMatrix) -> LaurentPoly {
        self.terms.get(a).cloned().unwrap_or_default()
    }

    /// The lex-largest term.
    pub fn leading_term(&self) -> Option<(&ExpMatrix, &LaurentPoly)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, a: ExpMatrix, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(a.n(), self.n);
        match self.terms.entry(a) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Element, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        if c.is_one() {
            for (a, d) in &other.terms {
                self.add_term(a.clone(), d);
            }
            return;
        }
        for (a, d) in &other.terms {
            self.add_term(a.clone(), &(d * c));
        }
    }

    pub fn scale(&self, c: &LaurentPoly) -> Element {
        let mut out = Element::zero(self.n);
        out.add_scaled(self, c);
        out
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: i32) -> Element {
        Element {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), c.shift(k)))
                .collect(),
        }
    }

    /// Applies `q -> q^-1` to every coefficient, leaving the monomials alone.
    pub fn bar_coefficients(&self) -> Element {
        Element {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), c.bar()))
                .collect(),
        }
    }

    /// Coordinates in the normalized basis `Z(A) = D(A) Z^A`: the coefficient
    /// of `Z(A)` is `q^{d_exponent(A)}` times the coefficient of `Z^A`.
    pub fn normalize(&self) -> BTreeMap<ExpMatrix, LaurentPoly> {
        self.terms
            .iter()
            .map(|(a, c)| (a.clone(), c.shift(exponent(a))))
            .collect()
    }

    /// Inverse of [`normalize`](Self::normalize).
    pub fn denormalize(n: usize, coords: &BTreeMap<ExpMatrix, LaurentPoly>) -> Element {
        let mut out = Element::zero(n);
        for (a, c) in coords {
            out.add_term(a.clone(), &c.shift(-exponent(a)));
        }
        out
    }

    /// `Z(A)` as an element of the monomial basis.
    pub fn normalized_monomial(a: ExpMatrix) -> Element {
        let e = exponent(&a);
        Element::term(a, LaurentPoly::q_pow(-e))
    }

    /// True when every term has the given row and column sums.
    pub fn is_homogeneous_in(&self, rows: &[u32], cols: &[u32]) -> bool {
        self.terms
            .keys()
            .all(|a| a.row_sums() == rows && a.col_sums() == cols)
    }
}

fn exponent(a: &ExpMatrix) -> i32 {
    i32::try_from(a.d_exponent()).expect("q-exponent overflow")
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Leading term first: `Z[[1,0],[0,1]] - q^2 Z[[0,1],[1,0]]`.
impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (a, c)) in self.terms.iter().rev().enumerate() {
            let (negative, body) = match c.as_single_term() {
                Some((d, _)) if d < &num_bigint::BigInt::from(0) => (true, (-c).to_string()),
                Some(_) => (false, c.to_string()),
                None => (false, format!("({c})")),
            };
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if body != "1" {
                write!(f, "{body} ")?;
            }
            write!(f, "Z{a}")?;
        }
        Ok(())
    }
}

impl Add<&Element> for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        assert_eq!(self.n, rhs.n, "size mismatch");
        let mut out = self.clone();
        out.add_scaled(rhs, &LaurentPoly::one());
        out
    }
}

impl Sub<&Element> for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        assert_eq!(self.n, rhs.n, "size mismatch");
        let mut out = self.clone();
        out.add_scaled(rhs, &LaurentPoly::constant(-1));
        out
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element {
            n: self.n,
            terms: self.terms.iter().map(|(a, c)| (a.clone(), -c)).collect(),
        }
    }
}

/// An unordered product of generators with a coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    pub n: usize,
    pub letters: Vec<Letter>,
    pub coeff: LaurentPoly,
}

impl Word {
    pub fn new(n: usize, letters: Vec<Letter>) -> Result<Self> {
        Self::with_coeff(n, letters, LaurentPoly::one())
    }

    pub fn with_coeff(n: usize, letters: Vec<Letter>, coeff: LaurentPoly) -> Result<Self> {
        if let Some(l) = letters.iter().find(|l| l.row >= n || l.col >= n) {
            return Err(Error::Malformed(format!(
                "letter {l} out of range for n = {n}"
            )));
        }
        Ok(Self { n, letters, coeff })
    }

    /// The exponent matrix counting each letter.
    pub fn content(&self) -> ExpMatrix {
        let mut a = ExpMatrix::zeros(self.n);
        for l in &self.letters {
            a = a.add_letter(*l);
        }
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> ExpMatrix {
        s.parse().unwrap()
    }

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut x = Element::monomial(m("1,0;0,1"));
        x.add_term(m("1,0;0,1"), &p("-1"));
        assert!(x.is_zero());
        assert_eq!(
            Element::term(m("1,0;0,1"), LaurentPoly::zero()),
            Element::zero(2)
        );
    }

    #[test]
    fn normalize_examples() {
        let x = Element::monomial(m("1,1;0,0"));
        assert_eq!(x.normalize().get(&m("1,1;0,0")), Some(&p("q")));
        let d = Element::term(m("2,0;0,3"), p("q^2 + 1"));
        assert_eq!(d.normalize().get(&m("2,0;0,3")), Some(&p("q^2 + 1")));
        let y = Element::from_terms(2, [(m("1,1;0,0"), p("q^-1 + 2")), (m("1,1;1,1"), p("3"))])
            .unwrap();
        assert_eq!(Element::denormalize(2, &y.normalize()), y);
    }

    #[test]
    fn display_puts_leading_term_first() {
        let det =
            Element::from_terms(2, [(m("1,0;0,1"), p("1")), (m("0,1;1,0"), p("-q^2"))]).unwrap();
        assert_eq!(det.to_string(), "Z[[1,0],[0,1]] - q^2 Z[[0,1],[1,0]]");
        let x = Element::from_terms(2, [(m("0,1;1,0"), p("q^2 - q^-2"))]).unwrap();
        assert_eq!(x.to_string(), "(-q^-2 + q^2) Z[[0,1],[1,0]]");
        assert_eq!(Element::zero(2).to_string(), "0");
        assert_eq!(Element::one(1).to_string(), "Z[[0]]");
    }

    #[test]
    fn words_validate_letters() {
        assert!(Word::new(2, vec![Letter::new(0, 2)]).is_err());
        let w = Word::new(
            2,
            vec![Letter::new(1, 1), Letter::new(0, 0), Letter::new(1, 1)],
        )
        .unwrap();
        assert_eq!(w.content(), m("1,0;0,2"));
    }
}
