//! The quotient `O_q(SL(n)) = O_q(M(n)) / (det_q - 1)`.
//!
//! `det_q` is central and bar-invariant, and `b(A) det_q = b(A + I)`, so the
//! images of `b(A)` with `min_i a_ii = 0` form a basis of the quotient.
//! Elements are kept as a representative in `O_q(M(n))` together with the
//! power of `det_q` that was divided out of it; equality is decided on the
//! basis expansion with every index reduced to its coset representative.

use std::collections::BTreeMap;
use std::fmt;

use crate::canon::{CanonicalBasis, Coords};
use crate::element::Element;
use crate::error::Result;
use crate::laurent::LaurentPoly;
use crate::matrix::{ExpMatrix, Letter};

/// `(A - kI, k)` with `k = min_i a_ii`.
pub fn reduce_index(a: &ExpMatrix) -> (ExpMatrix, u32) {
    let k = a.min_diagonal();
    let mut r = a.clone();
    for i in 0..a.n() {
        r.set(i, i, a.get(i, i) - k);
    }
    (r, k)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SLElement {
    /// A preimage in `O_q(M(n))`.
    pub rep: Element,
    /// The power of `det_q` divided out to reach `rep`.
    pub shift: u32,
}

impl SLElement {
    pub fn n(&self) -> usize {
        self.rep.n()
    }
}

impl fmt::Display for SLElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

pub struct SLQuotient {
    cb: CanonicalBasis,
}

impl SLQuotient {
    pub fn new(n: usize) -> Self {
        Self {
            cb: CanonicalBasis::new(n),
        }
    }

    pub fn n(&self) -> usize {
        self.cb.n()
    }

    pub fn basis(&self) -> &CanonicalBasis {
        &self.cb
    }

    /// The image of `x`, with the largest power of `det_q` dividing it in the
    /// basis `B*` removed from the representative.
    pub fn from_element(&self, x: &Element) -> Result<SLElement> {
        let coords = self.cb.express(x)?;
        let k = coords
            .keys()
            .map(ExpMatrix::min_diagonal)
            .min()
            .unwrap_or(0);
        let mut rep = Element::zero(self.n());
        for (a, c) in &coords {
            let mut reduced = a.clone();
            for i in 0..self.n() {
                reduced.set(i, i, a.get(i, i) - k);
            }
            rep.add_scaled(&self.cb.basis_element(&reduced)?.element, c);
        }
        Ok(SLElement { rep, shift: k })
    }

    /// `X_ij`, 0-based.
    pub fn generator(&self, row: usize, col: usize) -> SLElement {
        SLElement {
            rep: Element::generator(self.n(), Letter::new(row, col)),
            shift: 0,
        }
    }

    pub fn one(&self) -> SLElement {
        SLElement {
            rep: Element::one(self.n()),
            shift: 0,
        }
    }

    /// `b~(A)`: the image of `b(A - kI)`, `k = min_i a_ii`.
    pub fn sl_basis_element(&self, a: &ExpMatrix) -> Result<SLElement> {
        let (r, k) = reduce_index(a);
        Ok(SLElement {
            rep: self.cb.basis_element(&r)?.element.clone(),
            shift: k,
        })
    }

    /// Coordinates on the basis `{b~(A) : min_i a_ii = 0}`.
    pub fn normal_form(&self, x: &SLElement) -> Result<Coords> {
        let mut out: Coords = BTreeMap::new();
        for (a, c) in self.cb.express(&x.rep)? {
            let (r, _) = reduce_index(&a);
            let slot = out.entry(r).or_insert_with(LaurentPoly::zero);
            *slot += &c;
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    pub fn equal(&self, x: &SLElement, y: &SLElement) -> Result<bool> {
        Ok(self.normal_form(x)? == self.normal_form(y)?)
    }

    pub fn multiply(&self, x: &SLElement, y: &SLElement) -> Result<SLElement> {
        let rep = self.cb.algebra().multiply(&x.rep, &y.rep)?;
        let mut out = self.from_element(&rep)?;
        out.shift += x.shift + y.shift;
        Ok(out)
    }

    /// The anti-automorphism induced by bar. `det_q` is bar-invariant, so the
    /// shift is carried over unchanged.
    pub fn phi(&self, x: &SLElement) -> SLElement {
        SLElement {
            rep: self.cb.algebra().bar(&x.rep),
            shift: x.shift,
        }
    }

    /// The image of `det_q` equals 1.
    pub fn det_relation_holds(&self) -> Result<bool> {
        let det = SLElement {
            rep: self.cb.algebra().det(),
            shift: 0,
        };
        self.equal(&det, &self.one())
    }
}
