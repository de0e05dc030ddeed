//! Independent uniqueness oracle for a block.
//!
//! For each `A` the unknowns are the integer coefficients `h_{B,e}`,
//! `B < A`, `1 <= e <= bound`, of `h_B(A) = sum_e h_{B,e} q^e`. Writing
//! `bar(Z(B)) = sum_C a_BC Z(C)`, bar-invariance of
//! `Z(A) + sum_B h_B(A) Z(B)` is the linear system
//!
//! `a_AC - [C = A] + sum_B bar(h_B) a_BC - h_C = 0` for every `C`,
//!
//! one equation per `(C, power of q)`. It is solved exactly over the
//! rationals with all unknowns at once, without the lex-ordered recursion.
//! An inconsistent system means the true `h` needs a higher degree.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Block, CanonElement, CanonicalBasis, Coords};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

const MAX_BOUND: usize = 64;

/// Solves every `b(A)` of `block` with `deg h_B(A) <= bound`.
pub fn oracle_unique_ic_with_bound(
    cb: &CanonicalBasis,
    block: &Block,
    bound: usize,
) -> Result<Vec<CanonElement>> {
    let alg = cb.algebra();
    let bars: Vec<Coords> = block
        .matrices
        .iter()
        .map(|a| {
            alg.bar(&Element::normalized_monomial(a.clone()))
                .normalize()
        })
        .collect();
    (0..block.len())
        .map(|k| solve_one(block, &bars, k, bound))
        .collect()
}

/// Like [`oracle_unique_ic_with_bound`], doubling the bound from 2 until the
/// system becomes consistent.
pub fn oracle_unique_ic(cb: &CanonicalBasis, block: &Block) -> Result<Vec<CanonElement>> {
    let mut bound = 2;
    loop {
        match oracle_unique_ic_with_bound(cb, block, bound) {
            Err(Error::DegreeBoundExceeded { .. }) if bound < MAX_BOUND => bound *= 2,
            other => return other,
        }
    }
}

fn solve_one(block: &Block, bars: &[Coords], k: usize, bound: usize) -> Result<CanonElement> {
    let a = &block.matrices[k];
    let lower = &block.matrices[..k];
    let unknown = |j: usize, e: usize| j * bound + (e - 1);
    let num_unknowns = k * bound;

    // rows keyed by (C, exponent); each row is a sparse map unknown -> coefficient
    let mut rows: BTreeMap<(usize, i32), (BTreeMap<usize, BigInt>, BigInt)> = BTreeMap::new();
    let pos: HashMap<_, _> = block
        .matrices
        .iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();

    // constant part moves to the right-hand side
    for (c_mat, v) in &bars[k] {
        let c = pos[c_mat];
        for (f, coef) in v.terms() {
            let target = if c == k && f == 0 {
                coef - BigInt::one()
            } else {
                coef.clone()
            };
            let entry = rows.entry((c, f)).or_default();
            entry.1 -= target;
        }
    }
    for (j, _) in lower.iter().enumerate() {
        for (c_mat, v) in &bars[j] {
            let c = pos[c_mat];
            for (g, coef) in v.terms() {
                for e in 1..=bound {
                    // bar(q^e) * q^g = q^{g - e}
                    let entry = rows.entry((c, g - e as i32)).or_default();
                    *entry.0.entry(unknown(j, e)).or_default() += coef;
                }
            }
        }
    }
    for j in 0..k {
        for e in 1..=bound {
            let entry = rows.entry((j, e as i32)).or_default();
            *entry.0.entry(unknown(j, e)).or_default() -= BigInt::one();
        }
    }

    let system: Vec<(Vec<BigRational>, BigRational)> = rows
        .into_values()
        .map(|(lhs, rhs)| {
            let mut dense = vec![BigRational::zero(); num_unknowns];
            for (u, c) in lhs {
                dense[u] = BigRational::from_integer(c);
            }
            (dense, BigRational::from_integer(rhs))
        })
        .collect();

    let solution = match solve_exact(system, num_unknowns) {
        Solution::Unique(x) => x,
        Solution::Inconsistent => {
            return Err(Error::DegreeBoundExceeded {
                bound,
                index: a.to_string(),
            })
        }
        Solution::Underdetermined => {
            return Err(Error::InternalInconsistency(format!(
                "bar-invariance system for b({a}) has more than one solution"
            )))
        }
    };

    let mut coords: Coords = BTreeMap::new();
    coords.insert(a.clone(), LaurentPoly::one());
    for (j, b) in lower.iter().enumerate() {
        let mut terms = Vec::new();
        for e in 1..=bound {
            let v = &solution[unknown(j, e)];
            if !v.is_integer() {
                return Err(Error::InternalInconsistency(format!(
                    "non-integral coefficient {v} in b({a})"
                )));
            }
            terms.push((e as i32, v.to_integer()));
        }
        let h = LaurentPoly::from_terms(terms);
        if !h.is_zero() {
            coords.insert(b.clone(), h);
        }
    }
    let element = Element::denormalize(a.n(), &coords);
    coords.remove(a);
    Ok(CanonElement {
        index: a.clone(),
        element,
        h: coords,
    })
}

enum Solution {
    Unique(Vec<BigRational>),
    Inconsistent,
    Underdetermined,
}

/// Gauss-Jordan elimination over the rationals.
fn solve_exact(mut rows: Vec<(Vec<BigRational>, BigRational)>, num_unknowns: usize) -> Solution {
    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(num_unknowns);
    for col in 0..num_unknowns {
        let Some(r) = (pivot_row..rows.len()).find(|&r| !rows[r].0[col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, r);
        let inv = rows[pivot_row].0[col].recip();
        let (lhs, rhs) = &mut rows[pivot_row];
        for v in lhs.iter_mut() {
            *v *= &inv;
        }
        *rhs *= &inv;
        let (pivot_lhs, pivot_rhs) = rows[pivot_row].clone();
        for (r, (lhs, rhs)) in rows.iter_mut().enumerate() {
            if r == pivot_row || lhs[col].is_zero() {
                continue;
            }
            let factor = lhs[col].clone();
            for (v, p) in lhs.iter_mut().zip(&pivot_lhs) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
            *rhs -= &factor * &pivot_rhs;
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|(_, rhs)| !rhs.is_zero()) {
        return Solution::Inconsistent;
    }
    if pivots.len() < num_unknowns {
        return Solution::Underdetermined;
    }
    let mut x = vec![BigRational::zero(); num_unknowns];
    for (r, &col) in pivots.iter().enumerate() {
        x[col] = rows[r].1.clone();
    }
    Solution::Unique(x)
}
