//! Checks of the multiplicative identities satisfied by `B*`.
//!
//! Every check computes both sides exactly with the straightening engine and
//! compares them in `Z[q, q^-1]`; nothing is assumed about the result.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use super::{equiv_up_to_q_power, Block, CanonicalBasis, Staircase};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::matrix::{ExpMatrix, Letter};
use crate::qmatrix::region_exponent;

/// Above this total degree, ladder and stripe products are checked against
/// the defining conditions of `b(A)` instead of a solved block.
pub const DIRECT_COMPARISON_MAX_TOTAL: u32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Right multiplication by `det_q(t)`.
    Row,
    /// Right multiplication by `sigma(det_q(t))`.
    Column,
}

/// `E_t`: ones at `(i, n - t + i)` for `i < t` (0-based), or its transpose.
pub fn corner_shift(n: usize, t: usize, side: Side) -> ExpMatrix {
    let mut e = ExpMatrix::zeros(n);
    for i in 0..t {
        match side {
            Side::Row => e.set(i, n - t + i, 1),
            Side::Column => e.set(n - t + i, i, 1),
        }
    }
    e
}

/// The q-exponent predicted for `b(A) det_q(t)` (row side) or
/// `b(A) sigma(det_q(t))` (column side), read from the margins of `m`:
/// `r_1 + ... + r_t - c_{n-t+1} - ... - c_n`, and the transpose for columns.
pub fn minor_exponent(m: &ExpMatrix, t: usize, side: Side) -> i64 {
    let n = m.n();
    let (first, last) = match side {
        Side::Row => (m.row_sums(), m.col_sums()),
        Side::Column => (m.col_sums(), m.row_sums()),
    };
    let head: i64 = first[..t].iter().map(|&v| i64::from(v)).sum();
    let tail: i64 = last[n - t..].iter().map(|&v| i64::from(v)).sum();
    head - tail
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinorReport {
    pub t: usize,
    pub side: Side,
    /// Exponent predicted from the margins of `A`.
    pub predicted: i64,
    /// Exponent predicted from the margins of `A + E_t`.
    pub predicted_shifted: i64,
    /// `k` with `b(A) * minor = q^k b(A + E_t)`, if any.
    pub observed: Option<i32>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionReport {
    pub t: usize,
    pub letter: Letter,
    pub predicted: i32,
    pub observed: Option<i32>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrokenLineReport {
    /// The part of `A` on the upper-left side of the line.
    pub upper_left: ExpMatrix,
    /// The part of `A` on the lower-right side of the line.
    pub lower_right: ExpMatrix,
    /// `a` with `p = q^a r`, where `p = b(upper_left) b(lower_right)` and
    /// `r = b(lower_right) b(upper_left)`.
    pub commute_exponent: Option<i32>,
    /// `k` with `b(A) = q^k p`.
    pub product_exponent: Option<i32>,
    /// `m = sum_j (r_j^+ r_j^- + c_j^+ c_j^-)`.
    pub predicted_m: i64,
}

impl BrokenLineReport {
    pub fn q_commuting(&self) -> bool {
        self.commute_exponent.is_some()
    }

    pub fn factorizes(&self) -> bool {
        self.product_exponent.is_some()
    }

    /// The two sides of the equivalence agree, and when they hold the
    /// exponent is `-m`.
    pub fn pass(&self) -> bool {
        self.q_commuting() == self.factorizes()
            && self
                .product_exponent
                .map_or(true, |k| i64::from(k) == -self.predicted_m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinorFactor {
    /// 0-based rows.
    pub rows: Vec<usize>,
    /// 0-based columns.
    pub cols: Vec<usize>,
    pub power: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LadderReport {
    /// Quantum minors from peeling off diagonals, when `A` is a ladder.
    pub factors: Vec<MinorFactor>,
    /// `k` with `product of factors = q^k b(A)`.
    pub ladder_exponent: Option<i32>,
    pub pairwise_q_commuting: bool,
    /// For constant-diagonal `A`: `k` with the corner-minor product times
    /// `b(diag)` equal to `q^k b(A)`. Outer `None` when `A` is not striped.
    pub striped_exponent: Option<Option<i32>>,
    pub is_ladder: bool,
}

impl LadderReport {
    pub fn pass(&self) -> bool {
        let ladder_ok =
            !self.is_ladder || (self.ladder_exponent.is_some() && self.pairwise_q_commuting);
        let striped_ok = self.striped_exponent.map_or(true, |k| k.is_some());
        ladder_ok && striped_ok
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QCommutePair {
    pub left: ExpMatrix,
    pub right: ExpMatrix,
    /// `a` with `b_left b_right = q^a b(product)`.
    pub exponent: i32,
    pub product: ExpMatrix,
    /// Whether `b_right b_left = q^-a b(product)`.
    pub symmetric: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct QCommuteReport {
    pub pairs_checked: usize,
    pub in_basis: Vec<QCommutePair>,
}

impl QCommuteReport {
    pub fn pass(&self) -> bool {
        self.in_basis.iter().all(|p| p.symmetric)
    }

    pub fn merge(&mut self, other: QCommuteReport) {
        self.pairs_checked += other.pairs_checked;
        self.in_basis.extend(other.in_basis);
    }
}

impl CanonicalBasis {
    /// `normalize(bar(Z(A)))` is `Z(A)` plus terms strictly lex-below `A`
    /// with the margins of `A`.
    pub fn verify_unitriangular(&self, a: &ExpMatrix) -> Result<bool> {
        let coords = self
            .alg
            .bar(&Element::normalized_monomial(a.clone()))
            .normalize();
        let (rows, cols) = (a.row_sums(), a.col_sums());
        let lead_ok = coords.get(a).is_some_and(|c| c.is_one());
        let rest_ok = coords
            .keys()
            .all(|b| b <= a && b.row_sums() == rows && b.col_sums() == cols);
        Ok(lead_ok && rest_ok)
    }

    /// Bar-invariance, `qZ[q]` coefficients, block support and lex-lower
    /// support of `b(A)`.
    pub fn verify_basis_conditions(&self, a: &ExpMatrix) -> Result<bool> {
        let b = self.basis_element(a)?;
        let (rows, cols) = (a.row_sums(), a.col_sums());
        Ok(self.alg.bar(&b.element) == b.element
            && b.h
                .iter()
                .all(|(m, h)| m < a && h.in_q_zq() && m.row_sums() == rows && m.col_sums() == cols))
    }

    /// Every matrix in the support of `b(A)` is reachable from `A` by 2x2
    /// submatrix moves.
    pub fn verify_support_closure(&self, a: &ExpMatrix) -> Result<bool> {
        let b = self.basis_element(a)?;
        let mut seen: BTreeSet<ExpMatrix> = BTreeSet::from([a.clone()]);
        let mut queue = VecDeque::from([a.clone()]);
        while let Some(m) = queue.pop_front() {
            for next in m.submatrix_moves() {
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        Ok(b.h.keys().all(|m| seen.contains(m)))
    }

    /// `b(A) det_q = b(A + I_n)`.
    pub fn verify_det_multiplication(&self, a: &ExpMatrix) -> Result<bool> {
        let b = self.basis_element(a)?;
        let lhs = self.alg.multiply(&b.element, &self.alg.det())?;
        let shifted = a.checked_add(&ExpMatrix::identity(self.n()))?;
        Ok(lhs == self.basis_element(&shifted)?.element)
    }

    /// `b(diag(a)) = prod_i det_{q,i}^{a_i - a_{i-1}}` for ascending `a`.
    pub fn verify_diagonal_formula(&self, diag: &[u32]) -> Result<bool> {
        if diag.len() != self.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: diag.len(),
            });
        }
        if diag.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::PreconditionViolation(format!(
                "diagonal {diag:?} is not ascending"
            )));
        }
        let mut product = self.alg.one();
        let mut prev = 0;
        for (i, &a) in diag.iter().enumerate() {
            let minor = self.alg.det_trailing(i + 1)?;
            product = self
                .alg
                .multiply(&product, &self.alg.power(&minor, a - prev)?)?;
            prev = a;
        }
        Ok(product == self.basis_element(&ExpMatrix::diag(diag))?.element)
    }

    /// `b(A) det_q(t) = q^{r_1+...+r_t - c_{n-t+1}-...-c_n} b(A + E_t)` and
    /// the transposed identity for `sigma(det_q(t))`.
    pub fn verify_minor_multiplication(
        &self,
        a: &ExpMatrix,
        t: usize,
        side: Side,
    ) -> Result<MinorReport> {
        let n = self.n();
        if t == 0 || t > n {
            return Err(Error::BadIndexSet(format!("t = {t} outside 1..={n}")));
        }
        let minor = match side {
            Side::Row => self.alg.det_corner(t)?,
            Side::Column => self.alg.det_corner_transposed(t)?,
        };
        let lhs = self.alg.multiply(&self.basis_element(a)?.element, &minor)?;
        let target = a.checked_add(&corner_shift(n, t, side))?;
        let rhs = &self.basis_element(&target)?.element;
        let predicted = minor_exponent(a, t, side);
        let observed = equiv_up_to_q_power(&lhs, rhs);
        Ok(MinorReport {
            t,
            side,
            predicted,
            predicted_shifted: minor_exponent(&target, t, side),
            observed,
            pass: observed.map(i64::from) == Some(predicted),
        })
    }

    /// `sigma(b(A)) = b(A^T)`.
    pub fn verify_transpose_symmetry(&self, a: &ExpMatrix) -> Result<bool> {
        let b = self.basis_element(a)?;
        Ok(self.alg.sigma(&b.element) == self.basis_element(&a.transpose())?.element)
    }

    /// `Z_ij det_q(t) = q^k det_q(t) Z_ij` with `k` from the region table.
    pub fn verify_region_commutation(&self, t: usize, l: Letter) -> Result<RegionReport> {
        let minor = self.alg.det_corner(t)?;
        let z = Element::generator(self.n(), l);
        let lhs = self.alg.multiply(&z, &minor)?;
        let rhs = self.alg.multiply(&minor, &z)?;
        let predicted = region_exponent(self.n(), t, l);
        let observed = equiv_up_to_q_power(&lhs, &rhs);
        Ok(RegionReport {
            t,
            letter: l,
            predicted,
            observed,
            pass: observed == Some(predicted),
        })
    }

    /// Splits `A` along the staircase and compares `b(A)` with the product
    /// of the basis elements of the two parts.
    pub fn verify_broken_line(&self, a: &ExpMatrix, line: &Staircase) -> Result<BrokenLineReport> {
        if line.n() != self.n() {
            return Err(Error::BadRegion(format!(
                "staircase is for n = {}, algebra has n = {}",
                line.n(),
                self.n()
            )));
        }
        let (upper, lower) = line.split(a);
        let bu = self.basis_element(&upper)?;
        let bl = self.basis_element(&lower)?;
        let p = self.alg.multiply(&bu.element, &bl.element)?;
        let r = self.alg.multiply(&bl.element, &bu.element)?;
        let b = self.basis_element(a)?;
        let (ru, rl) = (upper.row_sums(), lower.row_sums());
        let (cu, cl) = (upper.col_sums(), lower.col_sums());
        let predicted_m = (0..self.n())
            .map(|j| i64::from(ru[j] * rl[j] + cu[j] * cl[j]))
            .sum();
        Ok(BrokenLineReport {
            commute_exponent: equiv_up_to_q_power(&p, &r),
            product_exponent: equiv_up_to_q_power(&b.element, &p),
            upper_left: upper,
            lower_right: lower,
            predicted_m,
        })
    }

    /// For every pair of basis elements drawn from the two blocks whose
    /// product is `q^a b` for a single basis element `b`, checks that the
    /// reversed product is `q^-a b`.
    pub fn verify_q_commuting_pairs(&self, left: &Block, right: &Block) -> Result<QCommuteReport> {
        let mut report = QCommuteReport::default();
        for a1 in &left.matrices {
            let b1 = self.basis_element(a1)?;
            for a2 in &right.matrices {
                let b2 = self.basis_element(a2)?;
                report.pairs_checked += 1;
                let prod = self.alg.multiply(&b1.element, &b2.element)?;
                let Some((exponent, product)) = self.as_basis_power(&prod)? else {
                    continue;
                };
                let rev = self.alg.multiply(&b2.element, &b1.element)?;
                let target = self.basis_element(&product)?.element.shift(-exponent);
                report.in_basis.push(QCommutePair {
                    left: a1.clone(),
                    right: a2.clone(),
                    exponent,
                    product,
                    symmetric: rev == target,
                });
            }
        }
        Ok(report)
    }

    /// Factors `b(A)` into corner quantum minors.
    ///
    /// For a ladder, diagonals are peeled off from the bottom-right corner of
    /// successively smaller leading blocks; the factors must multiply to
    /// `b(A)` up to a power of `q` and pairwise q-commute. For a matrix that
    /// is constant along each off-diagonal, the product
    /// `prod_t det_q(t)^{b_{n-t+1}} sigma(det_q(t))^{c_{n-t+1}} b(diag)`
    /// is checked as well.
    pub fn verify_ladder_factorization(&self, a: &ExpMatrix) -> Result<LadderReport> {
        let is_ladder = a.is_ladder();
        let is_striped = a.is_striped();
        if !is_ladder && !is_striped {
            return Err(Error::NotALadder(format!(
                "{a} has a diagonal step a_ij < a_(i+1)(j+1) and is not constant along its \
                 off-diagonals"
            )));
        }
        let mut report = LadderReport {
            factors: Vec::new(),
            ladder_exponent: None,
            pairwise_q_commuting: false,
            striped_exponent: None,
            is_ladder,
        };
        if is_ladder {
            report.factors = ladder_factors(a);
            let minors = report
                .factors
                .iter()
                .map(|f| self.alg.quantum_minor(&f.rows, &f.cols))
                .collect::<Result<Vec<_>>>()?;
            let mut expanded = Vec::new();
            for (f, m) in report.factors.iter().zip(&minors) {
                expanded.extend(std::iter::repeat(m.clone()).take(f.power as usize));
            }
            report.ladder_exponent = self.product_equiv(&expanded, a)?;
            report.pairwise_q_commuting = self.pairwise_q_commuting(&minors)?;
        }
        if is_striped {
            let n = self.n();
            let mut factors = Vec::new();
            for t in 1..n {
                let upper = a.get(0, n - t);
                let lower = a.get(n - t, 0);
                let m = self.alg.det_corner(t)?;
                factors.extend(std::iter::repeat(m).take(upper as usize));
                let m = self.alg.det_corner_transposed(t)?;
                factors.extend(std::iter::repeat(m).take(lower as usize));
            }
            let d: Vec<u32> = (0..n).map(|i| a.get(i, i)).collect();
            factors.push(self.basis_element(&ExpMatrix::diag(&d))?.element.clone());
            report.striped_exponent = Some(self.product_equiv(&factors, a)?);
        }
        Ok(report)
    }

    /// `k` with `f_1 f_2 ... f_r = q^k b(A)`.
    fn product_equiv(&self, factors: &[Element], a: &ExpMatrix) -> Result<Option<i32>> {
        let product = self.alg.product(factors)?;
        if a.total() <= DIRECT_COMPARISON_MAX_TOTAL {
            return Ok(equiv_up_to_q_power(
                &product,
                &self.basis_element(a)?.element,
            ));
        }
        // bar is an anti-automorphism: bar(f_1 ... f_r) = bar(f_r) ... bar(f_1)
        let barred: Vec<Element> = factors.iter().rev().map(|f| self.alg.bar(f)).collect();
        let bar_product = self.alg.product(&barred)?;
        Ok(self.canonical_up_to_power(&product, &bar_product, a))
    }

    fn pairwise_q_commuting(&self, elements: &[Element]) -> Result<bool> {
        for (i, x) in elements.iter().enumerate() {
            for y in &elements[i + 1..] {
                let xy = self.alg.multiply(x, y)?;
                let yx = self.alg.multiply(y, x)?;
                if equiv_up_to_q_power(&xy, &yx).is_none() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Peels a ladder into corner minors of its leading `m x m` blocks,
/// `m = n, n-1, ..., 1`. In block `m`, the minor on rows `1..=t` and columns
/// `m-t+1..=m` takes the power of the bottom-right entry of its diagonal,
/// and its transpose likewise below the main diagonal.
pub fn ladder_factors(a: &ExpMatrix) -> Vec<MinorFactor> {
    let n = a.n();
    let mut rest = a.clone();
    let mut out = Vec::new();
    for m in (1..=n).rev() {
        for t in (1..=m).rev() {
            let power = rest.get(t - 1, m - 1);
            if power > 0 {
                for i in 0..t {
                    let j = m - t + i;
                    rest.set(i, j, rest.get(i, j) - power);
                }
                out.push(MinorFactor {
                    rows: (0..t).collect(),
                    cols: (m - t..m).collect(),
                    power,
                });
            }
        }
        for t in (1..m).rev() {
            let power = rest.get(m - 1, t - 1);
            if power > 0 {
                for i in 0..t {
                    let r = m - t + i;
                    rest.set(r, i, rest.get(r, i) - power);
                }
                out.push(MinorFactor {
                    rows: (m - t..m).collect(),
                    cols: (0..t).collect(),
                    power,
                });
            }
        }
    }
    debug_assert!(rest.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::matrices_up_to_total;

    fn m(s: &str) -> ExpMatrix {
        s.parse().unwrap()
    }

    #[test]
    fn det_multiplication_n2() {
        let cb = CanonicalBasis::new(2);
        for a in matrices_up_to_total(2, 4) {
            assert!(cb.verify_det_multiplication(&a).unwrap(), "{a}");
        }
    }

    #[test]
    fn minor_multiplication_n3() {
        let cb = CanonicalBasis::new(3);
        for a in matrices_up_to_total(3, 2) {
            for t in 1..=3 {
                for side in [Side::Row, Side::Column] {
                    let r = cb.verify_minor_multiplication(&a, t, side).unwrap();
                    assert!(r.pass, "{a} t={t} {side:?}: {r:?}");
                    assert_eq!(r.predicted, r.predicted_shifted);
                }
            }
        }
    }

    #[test]
    fn region_table_n3() {
        let cb = CanonicalBasis::new(3);
        for t in 1..=3 {
            for i in 0..3 {
                for j in 0..3 {
                    let r = cb.verify_region_commutation(t, Letter::new(i, j)).unwrap();
                    assert!(r.pass, "{r:?}");
                }
            }
        }
    }

    #[test]
    fn transpose_and_conditions_n3() {
        let cb = CanonicalBasis::new(3);
        for a in matrices_up_to_total(3, 3) {
            assert!(cb.verify_transpose_symmetry(&a).unwrap(), "{a}");
            assert!(cb.verify_unitriangular(&a).unwrap(), "{a}");
            assert!(cb.verify_basis_conditions(&a).unwrap(), "{a}");
            assert!(cb.verify_support_closure(&a).unwrap(), "{a}");
        }
    }

    #[test]
    fn diagonal_formula() {
        let cb = CanonicalBasis::new(3);
        for d in [[0, 0, 1], [0, 1, 1], [0, 1, 2], [1, 1, 2], [0, 0, 2]] {
            assert!(cb.verify_diagonal_formula(&d).unwrap(), "{d:?}");
        }
        assert!(cb.verify_diagonal_formula(&[1, 0, 0]).is_err());
    }

    #[test]
    fn broken_lines_n2() {
        let cb = CanonicalBasis::new(2);
        for a in matrices_up_to_total(2, 4) {
            for line in Staircase::all(2) {
                let r = cb.verify_broken_line(&a, &line).unwrap();
                assert!(r.pass(), "{a} {line}: {r:?}");
            }
        }
    }

    #[test]
    fn ladder_peeling() {
        let a = m("2,1,0;1,1,0;0,0,0");
        let f = ladder_factors(&a);
        let mut rebuilt = ExpMatrix::zeros(3);
        for x in &f {
            for (r, c) in x.rows.iter().zip(&x.cols) {
                rebuilt.set(*r, *c, rebuilt.get(*r, *c) + x.power);
            }
        }
        assert_eq!(rebuilt, a);
        let cb = CanonicalBasis::new(3);
        assert!(cb.verify_ladder_factorization(&a).unwrap().pass());
    }

    #[test]
    fn striped_but_not_ladder() {
        let cb = CanonicalBasis::new(2);
        let a = m("1,0;0,2");
        let r = cb.verify_ladder_factorization(&a).unwrap();
        assert!(!r.is_ladder);
        assert!(r.pass(), "{r:?}");
        let cb3 = CanonicalBasis::new(3);
        assert!(matches!(
            cb3.verify_ladder_factorization(&m("1,0,0;0,0,1;0,0,0")),
            Err(Error::NotALadder(_))
        ));
    }

    #[test]
    fn det_squared_q_commutes_with_itself() {
        let cb = CanonicalBasis::new(2);
        let block = Block::of(&ExpMatrix::identity(2));
        let r = cb.verify_q_commuting_pairs(&block, &block).unwrap();
        assert!(r.pass());
        let diag = r
            .in_basis
            .iter()
            .find(|p| p.left == ExpMatrix::identity(2) && p.right == p.left);
        let diag = diag.unwrap();
        assert_eq!(diag.exponent, 0);
        assert_eq!(diag.product, m("2,0;0,2"));
    }
}
