//! The algebra `O_q(M(n))`: straightening into ordered monomials, the bar
//! anti-automorphism, the transpose automorphism, quantum minors.
//!
//! Products are computed by right multiplication with one generator at a
//! time. For a monomial `Z^A` whose largest letter `m` exceeds the incoming
//! letter `l`, write `Z^A = Z^{A'} Z_m`, rewrite the pair `Z_m Z_l` with the
//! defining relations, and recurse. Every product `Z^A * Z_l` is memoized.
//! The recursion terminates: the pair rewrite only produces letters `<= m`,
//! so the recursive calls either drop one degree or append without
//! reordering beyond the same row.

use std::sync::Arc;

use dashmap::DashMap;

use crate::element::{Element, Word};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::matrix::{ExpMatrix, Letter};

/// Rewrites an out-of-order pair `Z_big Z_small` (with `big > small`) as a
/// combination of ordered pairs `c * Z_u Z_v`, `u <= v`.
pub fn swap_pair(big: Letter, small: Letter) -> Vec<(LaurentPoly, Letter, Letter)> {
    debug_assert!(big > small);
    if big.row == small.row || big.col == small.col {
        // Z_ik Z_ij = q^-2 Z_ij Z_ik  (j < k), and the same along a column
        vec![(LaurentPoly::q_pow(-2), small, big)]
    } else if big.col < small.col {
        // big.row > small.row: the pair commutes
        vec![(LaurentPoly::one(), small, big)]
    } else {
        // Z_st Z_ij = Z_ij Z_st - (q^2 - q^-2) Z_it Z_sj  (i < s, j < t)
        vec![
            (LaurentPoly::one(), small, big),
            (
                LaurentPoly::from_terms([(-2, 1), (2, -1)]),
                Letter::new(small.row, big.col),
                Letter::new(big.row, small.col),
            ),
        ]
    }
}

/// Straightening engine for a fixed matrix size `n`.
///
/// The memo tables are the only mutable state; they are sharded and safe to
/// share across threads, and every entry is a pure function of its key.
pub struct QMatrix {
    n: usize,
    right_mul: DashMap<(ExpMatrix, Letter), Arc<Element>>,
    bar_cache: DashMap<ExpMatrix, Arc<Element>>,
    sigma_cache: DashMap<ExpMatrix, Arc<Element>>,
}

impl QMatrix {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "matrix size must be positive");
        Self {
            n,
            right_mul: DashMap::new(),
            bar_cache: DashMap::new(),
            sigma_cache: DashMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn one(&self) -> Element {
        Element::one(self.n)
    }

    pub fn zero(&self) -> Element {
        Element::zero(self.n)
    }

    pub fn generator(&self, row: usize, col: usize) -> Element {
        Element::generator(self.n, Letter::new(row, col))
    }

    pub fn cache_len(&self) -> usize {
        self.right_mul.len()
    }

    /// `Z^A * Z_l` in the ordered basis.
    pub fn monomial_times_letter(&self, a: &ExpMatrix, l: Letter) -> Arc<Element> {
        let key = (a.clone(), l);
        if let Some(hit) = self.right_mul.get(&key) {
            return Arc::clone(hit.value());
        }
        let result = match a.max_letter() {
            Some(m) if m > l => {
                let rest = a.remove_letter(m).expect("max letter occurs");
                let mut out = Element::zero(self.n);
                for (c, u, v) in swap_pair(m, l) {
                    let left = self.monomial_times_letter(&rest, u);
                    let full = self.times_letter(&left, v);
                    out.add_scaled(&full, &c);
                }
                out
            }
            _ => Element::monomial(a.add_letter(l)),
        };
        let result = Arc::new(result);
        self.right_mul.insert(key, Arc::clone(&result));
        result
    }

    /// `x * Z_l`.
    pub fn times_letter(&self, x: &Element, l: Letter) -> Element {
        let mut out = Element::zero(self.n);
        for (a, c) in x.terms() {
            out.add_scaled(&self.monomial_times_letter(a, l), c);
        }
        out
    }

    fn times_letters(&self, mut x: Element, letters: impl IntoIterator<Item = Letter>) -> Element {
        for l in letters {
            x = self.times_letter(&x, l);
        }
        x
    }

    fn check_n(&self, n: usize) -> Result<()> {
        if n != self.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: n,
            });
        }
        Ok(())
    }

    /// Expansion of a word in the ordered monomial basis.
    pub fn normal_order(&self, w: &Word) -> Result<Element> {
        self.check_n(w.n)?;
        let start = Element::term(ExpMatrix::zeros(self.n), w.coeff.clone());
        Ok(self.times_letters(start, w.letters.iter().copied()))
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check_n(x.n())?;
        self.check_n(y.n())?;
        let mut out = Element::zero(self.n);
        for (b, c) in y.terms() {
            let prod = self.times_letters(x.clone(), b.word());
            out.add_scaled(&prod, c);
        }
        Ok(out)
    }

    /// Product of a sequence of elements, left to right.
    pub fn product<'a, I>(&self, factors: I) -> Result<Element>
    where
        I: IntoIterator<Item = &'a Element>,
    {
        let mut acc = self.one();
        for f in factors {
            acc = self.multiply(&acc, f)?;
        }
        Ok(acc)
    }

    pub fn power(&self, x: &Element, k: u32) -> Result<Element> {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.multiply(&acc, x)?;
        }
        Ok(acc)
    }

    /// `bar(Z^A)`: the reversed letter sequence, straightened.
    pub fn bar_monomial(&self, a: &ExpMatrix) -> Arc<Element> {
        if let Some(hit) = self.bar_cache.get(a) {
            return Arc::clone(hit.value());
        }
        let result = Arc::new(self.times_letters(self.one(), a.word().into_iter().rev()));
        self.bar_cache.insert(a.clone(), Arc::clone(&result));
        result
    }

    /// The bar anti-automorphism: fixes every generator, sends `q` to `q^-1`.
    pub fn bar(&self, x: &Element) -> Element {
        let mut out = Element::zero(self.n);
        for (a, c) in x.terms() {
            out.add_scaled(&self.bar_monomial(a), &c.bar());
        }
        out
    }

    /// `sigma(Z^A)`: every letter transposed in place, then straightened.
    pub fn sigma_monomial(&self, a: &ExpMatrix) -> Arc<Element> {
        if let Some(hit) = self.sigma_cache.get(a) {
            return Arc::clone(hit.value());
        }
        let letters = a.word().into_iter().map(Letter::transpose);
        let result = Arc::new(self.times_letters(self.one(), letters));
        self.sigma_cache.insert(a.clone(), Arc::clone(&result));
        result
    }

    /// The transpose automorphism `Z_ij -> Z_ji`.
    pub fn sigma(&self, x: &Element) -> Element {
        let mut out = Element::zero(self.n);
        for (a, c) in x.terms() {
            out.add_scaled(&self.sigma_monomial(a), c);
        }
        out
    }

    /// `det_q(I, J)`: the sum over permutations `p` of
    /// `(-q^2)^{inv(p)} Z_{i_1 j_p(1)} ... Z_{i_m j_p(m)}`, with `I`, `J`
    /// sorted ascending. Indices are 0-based.
    pub fn quantum_minor(&self, rows: &[usize], cols: &[usize]) -> Result<Element> {
        let check = |set: &[usize], what: &str| -> Result<Vec<usize>> {
            if set.is_empty() {
                return Err(Error::BadIndexSet(format!("{what} index set is empty")));
            }
            let mut s = set.to_vec();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::BadIndexSet(format!("{what} index set has repeats")));
            }
            if let Some(&i) = s.iter().find(|&&i| i >= self.n) {
                return Err(Error::BadIndexSet(format!(
                    "{what} index {} out of range 1..={}",
                    i + 1,
                    self.n
                )));
            }
            Ok(s)
        };
        let rows = check(rows, "row")?;
        let cols = check(cols, "column")?;
        if rows.len() != cols.len() {
            return Err(Error::BadIndexSet(format!(
                "{} rows but {} columns",
                rows.len(),
                cols.len()
            )));
        }
        let mut out = Element::zero(self.n);
        for perm in permutations(rows.len()) {
            let inv = inversions(&perm);
            let sign = if inv % 2 == 0 { 1 } else { -1 };
            let coeff = LaurentPoly::monomial(sign, 2 * inv as i32);
            let letters = perm
                .iter()
                .enumerate()
                .map(|(k, &p)| Letter::new(rows[k], cols[p]));
            let term = self.times_letters(Element::term(ExpMatrix::zeros(self.n), coeff), letters);
            out.add_scaled(&term, &LaurentPoly::one());
        }
        Ok(out)
    }

    /// The full quantum determinant.
    pub fn det(&self) -> Element {
        let all: Vec<usize> = (0..self.n).collect();
        self.quantum_minor(&all, &all)
            .expect("full index sets are valid")
    }

    /// `det_q(t)`: rows `1..=t`, columns `n-t+1..=n` (1-based).
    pub fn det_corner(&self, t: usize) -> Result<Element> {
        if t == 0 || t > self.n {
            return Err(Error::BadIndexSet(format!(
                "t = {t} outside 1..={}",
                self.n
            )));
        }
        let rows: Vec<usize> = (0..t).collect();
        let cols: Vec<usize> = (self.n - t..self.n).collect();
        self.quantum_minor(&rows, &cols)
    }

    /// `sigma(det_q(t))`: rows `n-t+1..=n`, columns `1..=t`, computed through
    /// the transpose automorphism.
    pub fn det_corner_transposed(&self, t: usize) -> Result<Element> {
        Ok(self.sigma(&self.det_corner(t)?))
    }

    /// `det_{q,i}`: the determinant of the trailing block `i..=n` (1-based `i`).
    pub fn det_trailing(&self, i: usize) -> Result<Element> {
        if i == 0 || i > self.n {
            return Err(Error::BadIndexSet(format!(
                "i = {i} outside 1..={}",
                self.n
            )));
        }
        let idx: Vec<usize> = (i - 1..self.n).collect();
        self.quantum_minor(&idx, &idx)
    }
}

/// The commutation scalar exponent `k` with `Z_ij det_q(t) = q^k det_q(t) Z_ij`
/// predicted by the four corner regions: `0` on the off-corner blocks, `2` on
/// the top-left block, `-2` on the bottom-right block. `l` is 0-based, `t` is
/// the minor size.
pub fn region_exponent(n: usize, t: usize, l: Letter) -> i32 {
    let (i, j) = (l.row + 1, l.col + 1);
    let top = i <= t;
    let left = j <= n - t;
    match (top, left) {
        (true, true) => 2,
        (false, false) => -2,
        _ => 0,
    }
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                rec(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(m), &mut vec![false; m], &mut out);
    out
}

fn inversions(p: &[usize]) -> usize {
    (0..p.len())
        .map(|i| (i + 1..p.len()).filter(|&j| p[i] > p[j]).count())
        .sum()
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

    fn word(n: usize, letters: &[(usize, usize)]) -> Word {
        Word::new(
            n,
            letters
                .iter()
                .map(|&(i, j)| Letter::new(i - 1, j - 1))
                .collect(),
        )
        .unwrap()
    }

    fn el(n: usize, terms: &[(&str, &str)]) -> Element {
        Element::from_terms(n, terms.iter().map(|(a, c)| (m(a), p(c)))).unwrap()
    }

    #[test]
    fn normal_order_examples() {
        let alg = QMatrix::new(2);
        assert_eq!(
            alg.normal_order(&word(2, &[(1, 2), (1, 1)])).unwrap(),
            el(2, &[("1,1;0,0", "q^-2")])
        );
        assert_eq!(
            alg.normal_order(&word(2, &[(2, 2), (1, 1)])).unwrap(),
            el(2, &[("1,0;0,1", "1"), ("0,1;1,0", "-q^2 + q^-2")])
        );
        assert_eq!(
            alg.normal_order(&word(2, &[(1, 1), (1, 2), (2, 2)]))
                .unwrap(),
            el(2, &[("1,1;0,1", "1")])
        );
    }

    #[test]
    fn multiply_examples() {
        let alg = QMatrix::new(2);
        let x = el(2, &[("1,1;0,1", "q + 3")]);
        assert_eq!(alg.multiply(&x, &alg.one()).unwrap(), x);
        let z12 = alg.generator(0, 1);
        let z21 = alg.generator(1, 0);
        let anti = el(2, &[("0,1;1,0", "1")]);
        assert_eq!(alg.multiply(&z12, &z21).unwrap(), anti);
        assert_eq!(alg.multiply(&z21, &z12).unwrap(), anti);
        let z11 = alg.generator(0, 0);
        let z22 = alg.generator(1, 1);
        let comm = &alg.multiply(&z11, &z22).unwrap() - &alg.multiply(&z22, &z11).unwrap();
        assert_eq!(comm, el(2, &[("0,1;1,0", "q^2 - q^-2")]));
    }

    #[test]
    fn multiply_rejects_size_mismatch() {
        let alg = QMatrix::new(2);
        assert_eq!(
            alg.multiply(&alg.one(), &Element::one(3)),
            Err(Error::SizeMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn bar_examples() {
        let alg = QMatrix::new(2);
        let z11 = alg.generator(0, 0);
        assert_eq!(alg.bar(&z11), z11);
        assert_eq!(
            alg.bar(&el(2, &[("1,1;0,0", "1")])),
            el(2, &[("1,1;0,0", "q^-2")])
        );
        assert_eq!(
            alg.bar(&el(2, &[("1,0;0,1", "1")])),
            el(2, &[("1,0;0,1", "1"), ("0,1;1,0", "-q^2 + q^-2")])
        );
    }

    #[test]
    fn bar_leading_coefficient_matches_d_exponent() {
        let alg = QMatrix::new(2);
        let a = m("1,1;1,1");
        let barred = alg.bar(&Element::monomial(a.clone()));
        let (lead, c) = barred.leading_term().unwrap();
        assert_eq!(lead, &a);
        assert_eq!(c, &LaurentPoly::q_pow(-2 * a.d_exponent() as i32));
    }

    #[test]
    fn sigma_examples() {
        let alg = QMatrix::new(2);
        assert_eq!(alg.sigma(&alg.generator(0, 1)), alg.generator(1, 0));
        let anti = el(2, &[("0,1;1,0", "1")]);
        assert_eq!(alg.sigma(&anti), anti);
        let x = el(2, &[("2,1;0,1", "q^3 - 1"), ("1,0;1,1", "q^-1")]);
        assert_eq!(alg.sigma(&alg.sigma(&x)), x);
    }

    #[test]
    fn minor_examples() {
        let alg = QMatrix::new(2);
        assert_eq!(alg.det(), el(2, &[("1,0;0,1", "1"), ("0,1;1,0", "-q^2")]));
        assert_eq!(alg.quantum_minor(&[0], &[1]).unwrap(), alg.generator(0, 1));
        assert_eq!(QMatrix::new(1).det(), el(1, &[("1", "1")]));
        assert_eq!(alg.det_corner(1).unwrap(), alg.generator(0, 1));
        assert_eq!(alg.det_corner_transposed(1).unwrap(), alg.generator(1, 0));
        assert_eq!(alg.det_corner(2).unwrap(), alg.det());
        assert_eq!(alg.det_trailing(2).unwrap(), alg.generator(1, 1));
    }

    #[test]
    fn minor_rejects_bad_index_sets() {
        let alg = QMatrix::new(3);
        assert!(matches!(
            alg.quantum_minor(&[], &[]),
            Err(Error::BadIndexSet(_))
        ));
        assert!(matches!(
            alg.quantum_minor(&[0, 1], &[0]),
            Err(Error::BadIndexSet(_))
        ));
        assert!(matches!(
            alg.quantum_minor(&[0, 3], &[0, 1]),
            Err(Error::BadIndexSet(_))
        ));
        assert!(matches!(
            alg.quantum_minor(&[1, 1], &[0, 1]),
            Err(Error::BadIndexSet(_))
        ));
        assert!(matches!(alg.det_corner(0), Err(Error::BadIndexSet(_))));
        assert!(matches!(alg.det_corner(4), Err(Error::BadIndexSet(_))));
    }

    #[test]
    fn swap_pair_covers_all_relations() {
        let z = Letter::new;
        assert_eq!(
            swap_pair(z(0, 1), z(0, 0)),
            vec![(p("q^-2"), z(0, 0), z(0, 1))]
        );
        assert_eq!(
            swap_pair(z(1, 0), z(0, 0)),
            vec![(p("q^-2"), z(0, 0), z(1, 0))]
        );
        assert_eq!(
            swap_pair(z(1, 0), z(0, 1)),
            vec![(p("1"), z(0, 1), z(1, 0))]
        );
        assert_eq!(
            swap_pair(z(1, 1), z(0, 0)),
            vec![
                (p("1"), z(0, 0), z(1, 1)),
                (p("q^-2 - q^2"), z(0, 1), z(1, 0))
            ]
        );
    }

    #[test]
    fn region_table_n2() {
        let z = Letter::new;
        assert_eq!(region_exponent(2, 1, z(0, 0)), 2);
        assert_eq!(region_exponent(2, 1, z(1, 1)), -2);
        assert_eq!(region_exponent(2, 1, z(0, 1)), 0);
        assert_eq!(region_exponent(2, 1, z(1, 0)), 0);
        for l in [z(0, 0), z(0, 1), z(1, 0), z(1, 1)] {
            assert_eq!(region_exponent(2, 2, l), 0);
        }
    }
}
