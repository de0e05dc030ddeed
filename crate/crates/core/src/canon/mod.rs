//! The dual canonical basis `B* = {b(A)}`.
//!
//! `b(A)` is the unique bar-invariant element of the form
//! `Z(A) + sum_{B < A} h_B(A) Z(B)` with every `h_B(A)` in `qZ[q]` and every
//! `B` in the block of `A` (same row and column sums). Blocks are solved
//! bottom-up in lex order: with `d = Z(A)`, the difference `bar(d) - d` is
//! expanded in the already-computed `b(B)`, each coefficient `g_B` is split as
//! `p_B - bar(p_B)` with `p_B` in `qZ[q]`, and `b(A) = d + sum p_B b(B)`.

mod oracle;
pub mod staircase;
pub mod verify;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use dashmap::DashMap;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::matrix::{enumerate_margins, ExpMatrix};
use crate::qmatrix::QMatrix;

pub use oracle::{oracle_unique_ic, oracle_unique_ic_with_bound};
pub use staircase::Staircase;

/// Normalized coordinates: coefficient of `Z(B)` for each `B`.
pub type Coords = BTreeMap<ExpMatrix, LaurentPoly>;

/// The matrices with fixed row sums `R` and column sums `C`, lex-ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub rows: Vec<u32>,
    pub cols: Vec<u32>,
    pub matrices: Vec<ExpMatrix>,
}

impl Block {
    pub fn new(rows: &[u32], cols: &[u32]) -> Self {
        Self {
            rows: rows.to_vec(),
            cols: cols.to_vec(),
            matrices: enumerate_margins(rows, cols),
        }
    }

    pub fn of(a: &ExpMatrix) -> Self {
        Self::new(&a.row_sums(), &a.col_sums())
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }
}

/// `enumerate_block`: every matrix with the given margins.
pub fn enumerate_block(rows: &[u32], cols: &[u32]) -> Block {
    Block::new(rows, cols)
}

/// A computed basis element `b(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonElement {
    pub index: ExpMatrix,
    /// `b(A)` in the ordered monomial basis `Z^B`.
    pub element: Element,
    /// `h_B(A)`: coefficients of `Z(B)`, `B < A`, in the normalized basis.
    pub h: Coords,
}

impl CanonElement {
    /// All normalized coordinates, including the leading `1` on `A`.
    pub fn coords(&self) -> Coords {
        let mut c = self.h.clone();
        c.insert(self.index.clone(), LaurentPoly::one());
        c
    }

    pub(crate) fn from_coords(index: ExpMatrix, coords: Coords) -> Self {
        let element = Element::denormalize(index.n(), &coords);
        let mut h = coords;
        h.remove(&index);
        Self { index, element, h }
    }
}

struct SolvedBlock {
    elements: Vec<Arc<CanonElement>>,
    position: HashMap<ExpMatrix, usize>,
}

/// Canonical basis computations for one matrix size, with a block cache.
///
/// Distinct blocks may be solved from different threads. Two threads racing
/// on the same block both solve it and store identical results.
pub struct CanonicalBasis {
    alg: QMatrix,
    blocks: DashMap<(Vec<u32>, Vec<u32>), Arc<SolvedBlock>>,
}

impl CanonicalBasis {
    pub fn new(n: usize) -> Self {
        Self {
            alg: QMatrix::new(n),
            blocks: DashMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.alg.n()
    }

    pub fn algebra(&self) -> &QMatrix {
        &self.alg
    }

    fn solved(&self, rows: &[u32], cols: &[u32]) -> Result<Arc<SolvedBlock>> {
        let key = (rows.to_vec(), cols.to_vec());
        if let Some(hit) = self.blocks.get(&key) {
            return Ok(Arc::clone(hit.value()));
        }
        let solved = Arc::new(self.solve_block(&Block::new(rows, cols))?);
        self.blocks.insert(key, Arc::clone(&solved));
        Ok(solved)
    }

    fn solve_block(&self, block: &Block) -> Result<SolvedBlock> {
        let mut elements: Vec<Arc<CanonElement>> = Vec::with_capacity(block.len());
        let mut position: HashMap<ExpMatrix, usize> = HashMap::with_capacity(block.len());
        for (k, a) in block.matrices.iter().enumerate() {
            let d = Element::normalized_monomial(a.clone());
            let mut diff = self.alg.bar(&d).normalize();
            match diff.remove(a) {
                Some(c) if c.is_one() => {}
                other => {
                    return Err(Error::InternalInconsistency(format!(
                        "bar(Z({a})) has coefficient {} on Z({a}), expected 1",
                        other.unwrap_or_default()
                    )))
                }
            }
            let mut coords: Coords = BTreeMap::new();
            coords.insert(a.clone(), LaurentPoly::one());
            while let Some((b, g)) = diff.pop_last() {
                let Some(&j) = position.get(&b) else {
                    return Err(Error::InternalInconsistency(format!(
                        "bar(Z({a})) has support {b} outside the lower part of its block"
                    )));
                };
                if !g.is_bar_antisymmetric() {
                    return Err(Error::InternalInconsistency(format!(
                        "coefficient of b({b}) in bar(d) - d for d = Z({a}) is not \
                         bar-antisymmetric: {g}"
                    )));
                }
                let lower: &CanonElement = &elements[j];
                for (c, v) in &lower.h {
                    sub_scaled(&mut diff, c, v, &g);
                }
                let p = g.antisymmetric_split()?;
                for (c, v) in lower.coords() {
                    add_scaled(&mut coords, &c, &(&v * &p));
                }
            }
            position.insert(a.clone(), k);
            elements.push(Arc::new(CanonElement::from_coords(a.clone(), coords)));
        }
        Ok(SolvedBlock { elements, position })
    }

    /// `b(A)`.
    pub fn basis_element(&self, a: &ExpMatrix) -> Result<Arc<CanonElement>> {
        if a.n() != self.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: a.n(),
            });
        }
        let solved = self.solved(&a.row_sums(), &a.col_sums())?;
        let k = solved.position[a];
        Ok(Arc::clone(&solved.elements[k]))
    }

    /// Every `b(A)` in the block `M(R, C)`, lex-ascending in `A`.
    pub fn basis_block(&self, rows: &[u32], cols: &[u32]) -> Result<Vec<CanonElement>> {
        if rows.len() != self.n() || cols.len() != self.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: rows.len().max(cols.len()),
            });
        }
        let solved = self.solved(rows, cols)?;
        Ok(solved.elements.iter().map(|e| (**e).clone()).collect())
    }

    /// Coordinates of `x` in the basis `{b(A)}`, found by peeling off the
    /// lex-largest normalized term. Exact because each `b(A)` is unitriangular.
    pub fn express(&self, x: &Element) -> Result<Coords> {
        let mut rest = x.normalize();
        let mut out = BTreeMap::new();
        while let Some((a, c)) = rest.pop_last() {
            let b = self.basis_element(&a)?;
            for (d, v) in &b.h {
                sub_scaled(&mut rest, d, v, &c);
            }
            out.insert(a, c);
        }
        Ok(out)
    }

    /// `Some((a, B))` when `x = q^a b(B)` for a single basis element.
    pub fn as_basis_power(&self, x: &Element) -> Result<Option<(i32, ExpMatrix)>> {
        let coords = self.express(x)?;
        if coords.len() != 1 {
            return Ok(None);
        }
        let (b, c) = coords.into_iter().next().unwrap();
        Ok(c.as_pure_power().map(|a| (a, b)))
    }

    /// Checks the defining conditions of `b(A)` directly on `x` up to a power
    /// of `q`, without solving the block of `A`: the lex-leading normalized
    /// term is `q^k Z(A)`, every other normalized coefficient of `q^-k x` lies
    /// in `qZ[q]`, and `q^-k x` equals the supplied `bar_x` scaled the same way.
    /// Returns `k` when all hold.
    pub fn canonical_up_to_power(
        &self,
        x: &Element,
        bar_x: &Element,
        a: &ExpMatrix,
    ) -> Option<i32> {
        let coords = x.normalize();
        let (lead, c) = coords.iter().next_back()?;
        if lead != a {
            return None;
        }
        let k = c.as_pure_power()?;
        let ok = coords.iter().all(|(b, v)| b == a || v.shift(-k).in_q_zq());
        (ok && x.shift(-k) == bar_x.shift(k)).then_some(k)
    }
}

fn add_scaled(target: &mut Coords, key: &ExpMatrix, v: &LaurentPoly) {
    if v.is_zero() {
        return;
    }
    match target.get_mut(key) {
        Some(cur) => {
            *cur += v;
            if cur.is_zero() {
                target.remove(key);
            }
        }
        None => {
            target.insert(key.clone(), v.clone());
        }
    }
}

// target -= v * c
fn sub_scaled(target: &mut Coords, key: &ExpMatrix, v: &LaurentPoly, c: &LaurentPoly) {
    add_scaled(target, key, &-(v * c));
}

/// `Some(m)` when `x = q^m y` exactly; `Some(0)` when both vanish.
pub fn equiv_up_to_q_power(x: &Element, y: &Element) -> Option<i32> {
    if x.n() != y.n() || x.len() != y.len() {
        return None;
    }
    let Some((a, cy)) = y.leading_term() else {
        return Some(0);
    };
    let cx = x.coeff(a);
    let m = cx.min_exponent()? - cy.min_exponent()?;
    (*x == y.shift(m)).then_some(m)
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

    fn el(n: usize, terms: &[(&str, &str)]) -> Element {
        Element::from_terms(n, terms.iter().map(|(a, c)| (m(a), p(c)))).unwrap()
    }

    #[test]
    fn antidiagonal_is_its_own_basis_element() {
        let cb = CanonicalBasis::new(2);
        let b = cb.basis_element(&m("0,1;1,0")).unwrap();
        assert_eq!(b.element, el(2, &[("0,1;1,0", "1")]));
        assert!(b.h.is_empty());
    }

    #[test]
    fn identity_gives_the_determinant() {
        let cb = CanonicalBasis::new(2);
        let b = cb.basis_element(&m("1,0;0,1")).unwrap();
        assert_eq!(b.element, el(2, &[("1,0;0,1", "1"), ("0,1;1,0", "-q^2")]));
        assert_eq!(b.element, cb.algebra().det());
        assert_eq!(b.h.get(&m("0,1;1,0")), Some(&p("-q^2")));
    }

    #[test]
    fn single_generator_blocks() {
        let cb = CanonicalBasis::new(2);
        let b = cb.basis_element(&m("0,0;0,1")).unwrap();
        assert_eq!(b.element, cb.algebra().generator(1, 1));
    }

    #[test]
    fn block_examples() {
        let cb = CanonicalBasis::new(2);
        let blk = cb.basis_block(&[1, 1], &[1, 1]).unwrap();
        assert_eq!(blk.len(), 2);
        assert_eq!(blk[0].element, el(2, &[("0,1;1,0", "1")]));
        assert_eq!(blk[1].element, cb.algebra().det());
        assert!(cb.basis_block(&[2, 0], &[1, 0]).unwrap().is_empty());
    }

    #[test]
    fn n3_permutation_block() {
        let cb = CanonicalBasis::new(3);
        let blk = cb.basis_block(&[1, 1, 1], &[1, 1, 1]).unwrap();
        assert_eq!(blk.len(), 6);
        assert_eq!(blk[5].index, ExpMatrix::identity(3));
        assert_eq!(blk[5].element, cb.algebra().det());
    }

    #[test]
    fn equiv_examples() {
        let cb = CanonicalBasis::new(2);
        let b = cb.basis_element(&m("1,0;0,1")).unwrap().element.clone();
        assert_eq!(equiv_up_to_q_power(&b.shift(3), &b), Some(3));
        assert_eq!(equiv_up_to_q_power(&b, &b), Some(0));
        assert_eq!(
            equiv_up_to_q_power(&Element::zero(2), &Element::zero(2)),
            Some(0)
        );
        let z1221 = el(2, &[("0,1;1,0", "1")]);
        let z1122 = el(2, &[("1,0;0,1", "1")]);
        assert_eq!(equiv_up_to_q_power(&z1221, &z1122), None);
        assert_eq!(equiv_up_to_q_power(&b.scale(&p("2")), &b), None);
        assert_eq!(equiv_up_to_q_power(&Element::zero(2), &b), None);
    }

    #[test]
    fn express_round_trips() {
        let cb = CanonicalBasis::new(2);
        let alg = cb.algebra();
        let x = alg
            .multiply(&alg.generator(0, 0), &alg.generator(1, 1))
            .unwrap();
        let coords = cb.express(&x).unwrap();
        assert_eq!(coords.get(&m("1,0;0,1")), Some(&p("1")));
        assert_eq!(coords.get(&m("0,1;1,0")), Some(&p("q^2")));
        assert_eq!(cb.as_basis_power(&x).unwrap(), None);
        let det2 = alg.multiply(&alg.det(), &alg.det()).unwrap();
        assert_eq!(cb.as_basis_power(&det2).unwrap(), Some((0, m("2,0;0,2"))));
    }

    #[test]
    fn canonical_up_to_power_matches_solved_block() {
        let cb = CanonicalBasis::new(2);
        let alg = cb.algebra();
        let a = m("1,1;1,1");
        let b = cb.basis_element(&a).unwrap().element.shift(-5);
        let bar_b = alg.bar(&b);
        assert_eq!(cb.canonical_up_to_power(&b, &bar_b, &a), Some(-5));
        let z = Element::monomial(a.clone());
        assert_eq!(cb.canonical_up_to_power(&z, &alg.bar(&z), &a), None);
    }
}
