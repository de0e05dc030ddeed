use std::collections::BTreeMap;

use proptest::prelude::*;
use qcanon::canon::CanonicalBasis;
use qcanon::uqaction::{ActionConvention, GenKind, Side, UqAction, UqGen};
use qcanon::{Element, ExpMatrix, LaurentPoly, Letter, QMatrix, Word};

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-6i32..=6, -4i64..=4), 0..5).prop_map(LaurentPoly::from_terms)
}

fn positive_part() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((1i32..=6, -4i64..=4), 0..4).prop_map(LaurentPoly::from_terms)
}

fn letters(n: usize, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(
        (0..n, 0..n).prop_map(|(i, j)| Letter::new(i, j)),
        0..=max_len,
    )
}

fn matrix(n: usize, max_entry: u32) -> impl Strategy<Value = ExpMatrix> {
    prop::collection::vec(0..=max_entry, n * n).prop_map(move |v| {
        let rows: Vec<Vec<u32>> = v.chunks(n).map(<[u32]>::to_vec).collect();
        ExpMatrix::from_rows_unchecked(&rows)
    })
}

/// A random element: a few straightened words with random coefficients.
fn element(alg: &QMatrix, parts: &[(Vec<Letter>, LaurentPoly)]) -> Element {
    let mut x = Element::zero(alg.n());
    for (w, c) in parts {
        let word = Word::with_coeff(alg.n(), w.clone(), c.clone()).unwrap();
        x.add_scaled(&alg.normal_order(&word).unwrap(), &LaurentPoly::one());
    }
    x
}

fn element_parts(n: usize) -> impl Strategy<Value = Vec<(Vec<Letter>, LaurentPoly)>> {
    prop::collection::vec((letters(n, 3), laurent()), 0..3)
}

/// Straightening by rewriting the leftmost out-of-order adjacent pair, with
/// the four defining relations written out directly:
///
/// - `Z_ik Z_ij = q^-2 Z_ij Z_ik` for `j < k`, and the same down a column;
/// - `Z_ij Z_st = Z_st Z_ij` for `i > s`, `j < t`;
/// - `Z_st Z_ij = Z_ij Z_st - (q^2 - q^-2) Z_it Z_sj` for `i < s`, `j < t`.
fn rewrite_oracle(n: usize, word: &[Letter]) -> BTreeMap<ExpMatrix, LaurentPoly> {
    let key = |l: &Letter| (l.row, l.col);
    let mut out: BTreeMap<ExpMatrix, LaurentPoly> = BTreeMap::new();
    let mut work = vec![(LaurentPoly::one(), word.to_vec())];
    while let Some((c, w)) = work.pop() {
        let Some(p) = (0..w.len().saturating_sub(1)).find(|&p| key(&w[p]) > key(&w[p + 1])) else {
            let mut a = ExpMatrix::zeros(n);
            for l in &w {
                a.set(l.row, l.col, a.get(l.row, l.col) + 1);
            }
            let slot = out.entry(a).or_insert_with(LaurentPoly::zero);
            *slot += &c;
            continue;
        };
        let (big, small) = (w[p], w[p + 1]);
        let swapped = |x: Letter, y: Letter| {
            let mut v = w.clone();
            v[p] = x;
            v[p + 1] = y;
            v
        };
        if big.row == small.row || big.col == small.col {
            work.push((&c * &LaurentPoly::q_pow(-2), swapped(small, big)));
        } else if big.row > small.row && big.col < small.col {
            work.push((c.clone(), swapped(small, big)));
        } else {
            // big = Z_st, small = Z_ij with i < s, j < t
            work.push((c.clone(), swapped(small, big)));
            let extra = Letter::new(small.row, big.col);
            let extra2 = Letter::new(big.row, small.col);
            let k = &LaurentPoly::q_pow(-2) - &LaurentPoly::q_pow(2);
            work.push((&c * &k, swapped(extra, extra2)));
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn weight_pairing(conv: &ActionConvention, side: Side, a: &ExpMatrix, i: usize) -> i32 {
    conv.weight(side, a).pair_simple_root(i) as i32
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn laurent_ring_axioms(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &a), &LaurentPoly::zero());
    }

    #[test]
    fn laurent_bar_is_an_involutive_ring_map(a in laurent(), b in laurent()) {
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        prop_assert_eq!((&a + &b).bar(), &a.bar() + &b.bar());
        prop_assert_eq!(a.bar().bar(), a);
    }

    #[test]
    fn laurent_text_round_trip(a in laurent()) {
        let back: LaurentPoly = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn split_recovers_the_positive_part(p in positive_part()) {
        let g = &p - &p.bar();
        prop_assert_eq!(g.antisymmetric_split().unwrap(), p);
    }

    #[test]
    fn normal_order_matches_rewriting_oracle(w in letters(2, 6)) {
        let alg = QMatrix::new(2);
        let x = alg.normal_order(&Word::new(2, w.clone()).unwrap()).unwrap();
        let expected: BTreeMap<_, _> = x.terms().map(|(a, c)| (a.clone(), c.clone())).collect();
        prop_assert_eq!(expected, rewrite_oracle(2, &w));
    }

    #[test]
    fn normal_order_matches_rewriting_oracle_n3(w in letters(3, 5)) {
        let alg = QMatrix::new(3);
        let x = alg.normal_order(&Word::new(3, w.clone()).unwrap()).unwrap();
        let expected: BTreeMap<_, _> = x.terms().map(|(a, c)| (a.clone(), c.clone())).collect();
        prop_assert_eq!(expected, rewrite_oracle(3, &w));
    }

    #[test]
    fn straightening_keeps_margins_and_lowers_pr(w in letters(3, 6)) {
        let alg = QMatrix::new(3);
        let word = Word::new(3, w).unwrap();
        let a = word.content();
        let x = alg.normal_order(&word).unwrap();
        for b in x.support() {
            prop_assert_eq!(b.row_sums(), a.row_sums());
            prop_assert_eq!(b.col_sums(), a.col_sums());
            for s in 1..=3 {
                for t in 1..=3 {
                    prop_assert!(b.pr(s, t) <= a.pr(s, t), "Pr({}, {s}, {t}) > Pr({})", b, a);
                }
            }
        }
    }

    #[test]
    fn bar_and_sigma(px in element_parts(3), py in element_parts(3)) {
        let alg = QMatrix::new(3);
        let x = element(&alg, &px);
        let y = element(&alg, &py);
        let xy = alg.multiply(&x, &y).unwrap();
        prop_assert_eq!(alg.bar(&alg.bar(&x)), x.clone());
        prop_assert_eq!(alg.bar(&xy), alg.multiply(&alg.bar(&y), &alg.bar(&x)).unwrap());
        prop_assert_eq!(alg.sigma(&alg.sigma(&x)), x.clone());
        prop_assert_eq!(alg.sigma(&xy), alg.multiply(&alg.sigma(&x), &alg.sigma(&y)).unwrap());
        prop_assert_eq!(alg.sigma(&alg.bar(&x)), alg.bar(&alg.sigma(&x)));
    }

    #[test]
    fn multiplication_is_associative(pa in element_parts(2), pb in element_parts(2), pc in element_parts(2)) {
        let alg = QMatrix::new(2);
        let (a, b, c) = (element(&alg, &pa), element(&alg, &pb), element(&alg, &pc));
        let left = alg.multiply(&alg.multiply(&a, &b).unwrap(), &c).unwrap();
        let right = alg.multiply(&a, &alg.multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn det_is_central(px in element_parts(3)) {
        let alg = QMatrix::new(3);
        let x = element(&alg, &px);
        let det = alg.det();
        prop_assert_eq!(alg.multiply(&det, &x).unwrap(), alg.multiply(&x, &det).unwrap());
    }

    #[test]
    fn element_json_round_trip(px in element_parts(3)) {
        let alg = QMatrix::new(3);
        let x = element(&alg, &px);
        let back: Element = serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn matrix_literal_round_trip(a in matrix(3, 5)) {
        let literal = a.rows().iter()
            .map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join(";");
        prop_assert_eq!(literal.parse::<ExpMatrix>().unwrap(), a);
    }

    #[test]
    fn basis_elements_satisfy_their_defining_conditions(a in matrix(3, 1)) {
        let cb = CanonicalBasis::new(3);
        let b = cb.basis_element(&a).unwrap();
        prop_assert_eq!(cb.algebra().bar(&b.element), b.element.clone());
        for (m, h) in &b.h {
            prop_assert!(m < &a);
            prop_assert!(h.in_q_zq());
        }
        let back = cb.express(&b.element).unwrap();
        prop_assert_eq!(back.len(), 1);
    }

    #[test]
    fn weight_grading(a in matrix(3, 2), i in 1usize..=2) {
        let alg = QMatrix::new(3);
        let conv = ActionConvention::standard();
        let act = UqAction::new(&alg, &conv);
        let x = Element::monomial(a.clone());
        for side in [Side::Left, Side::Right] {
            let k = weight_pairing(&conv, side, &a, i);
            prop_assert_eq!(act.act(side, UqGen::k(i), &x).unwrap(), x.shift(2 * k));
            prop_assert_eq!(act.act(side, UqGen::k_inv(i), &x).unwrap(), x.shift(-2 * k));
        }
    }

    #[test]
    fn leibniz_on_products(a in matrix(3, 1), b in matrix(3, 1), i in 1usize..=2, kind in 0usize..2) {
        let alg = QMatrix::new(3);
        let conv = ActionConvention::standard();
        let act = UqAction::new(&alg, &conv);
        let (x, y) = (Element::monomial(a.clone()), Element::monomial(b.clone()));
        let xy = alg.multiply(&x, &y).unwrap();
        for side in [Side::Left, Side::Right] {
            let gen = if kind == 0 { UqGen::e(i) } else { UqGen::f(i) };
            let lhs = act.act(side, gen, &xy).unwrap();
            let gx = act.act(side, gen, &x).unwrap();
            let gy = act.act(side, gen, &y).unwrap();
            let rhs = match gen.kind {
                GenKind::E => {
                    let k = weight_pairing(&conv, side, &a, i);
                    let t1 = alg.multiply(&gx, &y).unwrap();
                    let t2 = alg.multiply(&x, &gy).unwrap().shift(2 * k);
                    &t1 + &t2
                }
                _ => {
                    let k = weight_pairing(&conv, side, &b, i);
                    let t1 = alg.multiply(&x, &gy).unwrap();
                    let t2 = alg.multiply(&gx, &y).unwrap().shift(-2 * k);
                    &t1 + &t2
                }
            };
            prop_assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn split_is_unique_by_enumeration() {
    // every p in qZ[q] of degree <= 3 with coefficients in -1..=1
    let mut all = Vec::new();
    for c1 in -1..=1i64 {
        for c2 in -1..=1i64 {
            for c3 in -1..=1i64 {
                all.push(LaurentPoly::from_terms([(1, c1), (2, c2), (3, c3)]));
            }
        }
    }
    for p in &all {
        let g = p - &p.bar();
        let matches: Vec<_> = all.iter().filter(|r| &(*r - &r.bar()) == &g).collect();
        assert_eq!(matches, vec![p]);
        assert_eq!(&g.antisymmetric_split().unwrap(), p);
    }
}

#[test]
fn quantum_minors_are_bar_invariant() {
    let alg = QMatrix::new(3);
    let subsets: Vec<Vec<usize>> = vec![
        vec![0],
        vec![1],
        vec![2],
        vec![0, 1],
        vec![0, 2],
        vec![1, 2],
        vec![0, 1, 2],
    ];
    for rows in &subsets {
        for cols in subsets.iter().filter(|c| c.len() == rows.len()) {
            let m = alg.quantum_minor(rows, cols).unwrap();
            assert_eq!(alg.bar(&m), m, "rows {rows:?} cols {cols:?}");
        }
    }
}

#[test]
fn det_commutes_with_generators() {
    for n in 1..=3 {
        let alg = QMatrix::new(n);
        let det = alg.det();
        for i in 0..n {
            for j in 0..n {
                let z = alg.generator(i, j);
                assert_eq!(
                    alg.multiply(&z, &det).unwrap(),
                    alg.multiply(&det, &z).unwrap()
                );
            }
        }
    }
}
