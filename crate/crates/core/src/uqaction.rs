//! The left and right `U_q(sl_n)` actions on `O_q(M(n))`.
//!
//! On generators, `E_i` and `F_i` move one index of `Z_st` between `i` and
//! `i + 1` and `K_i` scales by `q^{2(eps_s, alpha_i)}`. Products are handled
//! by the twisted Leibniz rules, letter by letter along a word:
//!
//! - `E(xy) = E(x) y + q^{2(wt x, alpha)} x E(y)`
//! - `F(xy) = x F(y) + q^{-2(wt y, alpha)} F(x) y`
//!
//! Which index moves, and in which direction, is fixed by an
//! [`ActionConvention`]. Two are provided: [`ActionConvention::standard`]
//! and [`ActionConvention::as_printed`], the latter transcribing the printed
//! single-generator formulas literally.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::element::{Element, Word};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::matrix::{matrices_up_to_total, ExpMatrix, Letter};
use crate::qmatrix::{swap_pair, QMatrix};
use crate::slquotient::{SLElement, SLQuotient};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            _ => Err(Error::Malformed(format!(
                "unknown side '{s}', expected left or right"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GenKind {
    E,
    F,
    K,
    KInv,
}

/// A Chevalley generator with a 1-based index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UqGen {
    pub kind: GenKind,
    pub index: usize,
}

impl UqGen {
    pub fn e(i: usize) -> Self {
        Self {
            kind: GenKind::E,
            index: i,
        }
    }

    pub fn f(i: usize) -> Self {
        Self {
            kind: GenKind::F,
            index: i,
        }
    }

    pub fn k(i: usize) -> Self {
        Self {
            kind: GenKind::K,
            index: i,
        }
    }

    pub fn k_inv(i: usize) -> Self {
        Self {
            kind: GenKind::KInv,
            index: i,
        }
    }

    /// All generators of `U_q(sl_n)`.
    pub fn all(n: usize) -> Vec<UqGen> {
        (1..n)
            .flat_map(|i| [Self::e(i), Self::f(i), Self::k(i), Self::k_inv(i)])
            .collect()
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.index == 0 || self.index >= n {
            return Err(Error::BadGeneratorIndex {
                index: self.index,
                max: n.saturating_sub(1),
            });
        }
        Ok(())
    }
}

impl fmt::Display for UqGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GenKind::E => write!(f, "E{}", self.index),
            GenKind::F => write!(f, "F{}", self.index),
            GenKind::K => write!(f, "K{}", self.index),
            GenKind::KInv => write!(f, "K{}^-1", self.index),
        }
    }
}

impl FromStr for UqGen {
    type Err = Error;

    /// `E1`, `F2`, `K1`, `K1^-1` or `Kinv1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::Malformed(format!(
                "bad generator '{s}', expected e.g. E1, F2, K1, K1^-1"
            ))
        };
        let (kind, rest) = if let Some(r) = s.strip_prefix("Kinv") {
            (GenKind::KInv, r)
        } else if let Some(r) = s.strip_prefix('E') {
            (GenKind::E, r)
        } else if let Some(r) = s.strip_prefix('F') {
            (GenKind::F, r)
        } else if let Some(r) = s.strip_prefix('K') {
            match r.strip_suffix("^-1") {
                Some(r) => (GenKind::KInv, r),
                None => (GenKind::K, r),
            }
        } else {
            return Err(bad());
        };
        let index = rest.parse().map_err(|_| bad())?;
        Ok(Self { kind, index })
    }
}

/// Integer coordinates in the basis `eps_1, ..., eps_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightVector(pub Vec<i64>);

impl WeightVector {
    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// `(wt, alpha_i)` for the 1-based simple root `alpha_i = eps_i - eps_{i+1}`.
    pub fn pair_simple_root(&self, i: usize) -> i64 {
        self.0[i - 1] - self.0[i]
    }

    fn add_index(&mut self, s: usize) {
        self.0[s] += 1;
    }
}

/// `(alpha_i, alpha_j)`.
pub fn cartan(i: usize, j: usize) -> i32 {
    match i.abs_diff(j) {
        0 => 2,
        1 => -1,
        _ => 0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Row,
    Col,
}

impl Axis {
    fn of(self, l: Letter) -> usize {
        match self {
            Axis::Row => l.row,
            Axis::Col => l.col,
        }
    }

    fn with(self, l: Letter, v: usize) -> Letter {
        match self {
            Axis::Row => Letter::new(v, l.col),
            Axis::Col => Letter::new(l.row, v),
        }
    }
}

/// `X` with the moving index equal to `i + source_offset` (1-based) is sent
/// to the same letter with that index moved by `delta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Move {
    pub source_offset: i32,
    pub delta: i32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SideRule {
    /// The index that `E`, `F` move and that `K` reads.
    pub axis: Axis,
    pub e: Move,
    pub f: Move,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActionConvention {
    pub name: String,
    pub left: SideRule,
    pub right: SideRule,
}

impl ActionConvention {
    /// Left: `E_i` sends row `i + 1` to `i`, `F_i` sends row `i` to `i + 1`.
    /// Right: `E_i` sends column `i` to `i + 1`, `F_i` column `i + 1` to `i`.
    pub fn standard() -> Self {
        Self {
            name: "standard".into(),
            left: SideRule {
                axis: Axis::Row,
                e: Move {
                    source_offset: 1,
                    delta: -1,
                },
                f: Move {
                    source_offset: 0,
                    delta: 1,
                },
            },
            right: SideRule {
                axis: Axis::Col,
                e: Move {
                    source_offset: 0,
                    delta: 1,
                },
                f: Move {
                    source_offset: 1,
                    delta: -1,
                },
            },
        }
    }

    /// The printed formulas taken literally: left `E_i X_st = d_is X_{s-1,t}`,
    /// `F_i X_st = d_{i,s+1} X_{s+1,t}`; right `X_st E_i = d_{i,s+1} X_{s+1,t}`,
    /// `X_st F_i = d_is X_{s-1,t}`, with `K` reading `s` on both sides.
    pub fn as_printed() -> Self {
        Self {
            name: "as-printed".into(),
            left: SideRule {
                axis: Axis::Row,
                e: Move {
                    source_offset: 0,
                    delta: -1,
                },
                f: Move {
                    source_offset: -1,
                    delta: 1,
                },
            },
            right: SideRule {
                axis: Axis::Row,
                e: Move {
                    source_offset: -1,
                    delta: 1,
                },
                f: Move {
                    source_offset: 0,
                    delta: -1,
                },
            },
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "standard" => Ok(Self::standard()),
            "as-printed" => Ok(Self::as_printed()),
            _ => Err(Error::Malformed(format!(
                "unknown convention '{name}', expected standard or as-printed"
            ))),
        }
    }

    pub fn rule(&self, side: Side) -> &SideRule {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    /// The weight read by `K` on `side`.
    pub fn weight(&self, side: Side, a: &ExpMatrix) -> WeightVector {
        let sums = match self.rule(side).axis {
            Axis::Row => a.row_sums(),
            Axis::Col => a.col_sums(),
        };
        WeightVector(sums.into_iter().map(i64::from).collect())
    }

    fn letter_weight(&self, side: Side, letters: &[Letter], n: usize) -> WeightVector {
        let axis = self.rule(side).axis;
        let mut w = WeightVector::zero(n);
        for &l in letters {
            w.add_index(axis.of(l));
        }
        w
    }

    /// The image of one generator letter, or `None` when it is killed.
    fn move_letter(&self, side: Side, gen: UqGen, l: Letter, n: usize) -> Option<Letter> {
        let rule = self.rule(side);
        let mv = match gen.kind {
            GenKind::E => rule.e,
            GenKind::F => rule.f,
            _ => unreachable!("K acts diagonally"),
        };
        let source = gen.index as i64 + i64::from(mv.source_offset);
        let current = rule.axis.of(l) as i64 + 1;
        if current != source {
            return None;
        }
        let target = current + i64::from(mv.delta);
        (1..=n as i64)
            .contains(&target)
            .then(|| rule.axis.with(l, (target - 1) as usize))
    }
}

fn k_power(gen: UqGen, wt: &WeightVector) -> i32 {
    let p = 2 * wt.pair_simple_root(gen.index) as i32;
    match gen.kind {
        GenKind::K => p,
        GenKind::KInv => -p,
        _ => unreachable!(),
    }
}

/// The action of `U_q(sl_n)` on one side of `O_q(M(n))`.
pub struct UqAction<'a> {
    alg: &'a QMatrix,
    conv: &'a ActionConvention,
}

impl<'a> UqAction<'a> {
    pub fn new(alg: &'a QMatrix, conv: &'a ActionConvention) -> Self {
        Self { alg, conv }
    }

    fn n(&self) -> usize {
        self.alg.n()
    }

    /// The action on a word, before straightening: a sum of words.
    pub fn act_on_letters(&self, side: Side, gen: UqGen, letters: &[Letter]) -> Result<Vec<Word>> {
        gen.check(self.n())?;
        let n = self.n();
        if matches!(gen.kind, GenKind::K | GenKind::KInv) {
            let wt = self.conv.letter_weight(side, letters, n);
            let w = Word::with_coeff(n, letters.to_vec(), LaurentPoly::q_pow(k_power(gen, &wt)))?;
            return Ok(vec![w]);
        }
        let mut out = Vec::new();
        for (k, &l) in letters.iter().enumerate() {
            let Some(moved) = self.conv.move_letter(side, gen, l, n) else {
                continue;
            };
            let pairing = match gen.kind {
                GenKind::E => {
                    2 * self
                        .conv
                        .letter_weight(side, &letters[..k], n)
                        .pair_simple_root(gen.index)
                }
                _ => {
                    -2 * self
                        .conv
                        .letter_weight(side, &letters[k + 1..], n)
                        .pair_simple_root(gen.index)
                }
            };
            let mut w = letters.to_vec();
            w[k] = moved;
            out.push(Word::with_coeff(n, w, LaurentPoly::q_pow(pairing as i32))?);
        }
        Ok(out)
    }

    /// The action on an element: each monomial is acted on as its ordered
    /// word and the result straightened.
    pub fn act(&self, side: Side, gen: UqGen, x: &Element) -> Result<Element> {
        gen.check(self.n())?;
        let mut out = Element::zero(self.n());
        for (a, c) in x.terms() {
            for w in self.act_on_letters(side, gen, &a.word())? {
                out.add_scaled(&self.alg.normal_order(&w)?, c);
            }
        }
        Ok(out)
    }

    /// The action of the product `g_1 g_2 ... g_k`: on the left `g_k` acts
    /// first, on the right `g_1` does.
    pub fn act_word(&self, side: Side, gens: &[UqGen], x: &Element) -> Result<Element> {
        let mut cur = x.clone();
        let order: Box<dyn Iterator<Item = &UqGen>> = match side {
            Side::Left => Box::new(gens.iter().rev()),
            Side::Right => Box::new(gens.iter()),
        };
        for &g in order {
            cur = self.act(side, g, &cur)?;
        }
        Ok(cur)
    }

    /// The action on a formal sum of words, straightened.
    fn act_on_words(&self, side: Side, gen: UqGen, words: &[Word]) -> Result<Element> {
        let mut out = Element::zero(self.n());
        for w in words {
            for v in self.act_on_letters(side, gen, &w.letters)? {
                let v = Word {
                    coeff: &v.coeff * &w.coeff,
                    ..v
                };
                out.add_scaled(&self.alg.normal_order(&v)?, &LaurentPoly::one());
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckEntry {
    pub relation: String,
    pub generator: String,
    pub pass: bool,
}

/// Defining relations as formal sums of words equal to zero: for each pair
/// of letters `a < b`, `b a` minus its straightened form.
fn quadratic_relations(n: usize) -> Result<Vec<(String, Vec<Word>)>> {
    let mut letters = Vec::new();
    for i in 0..n {
        for j in 0..n {
            letters.push(Letter::new(i, j));
        }
    }
    let mut out = Vec::new();
    for (k, &small) in letters.iter().enumerate() {
        for &big in &letters[k + 1..] {
            let mut words = vec![Word::new(n, vec![big, small])?];
            for (c, x, y) in swap_pair(big, small) {
                words.push(Word::with_coeff(n, vec![x, y], -c)?);
            }
            out.push((format!("{big}{small}"), words));
        }
    }
    Ok(out)
}

/// `det_q - 1` as a sum of words.
fn det_relation(alg: &QMatrix) -> Result<Vec<Word>> {
    let n = alg.n();
    let det = alg.det();
    let mut words: Vec<Word> = det
        .terms()
        .map(|(a, c)| Word::with_coeff(n, a.word(), c.clone()))
        .collect::<Result<_>>()?;
    words.push(Word::with_coeff(n, Vec::new(), -LaurentPoly::one())?);
    Ok(words)
}

/// Applies every generator on both sides to both sides of every defining
/// relation of `O_q(SL(n))`, acting on unstraightened words, and checks that
/// the relation still holds afterwards.
pub fn check_relation_preservation(conv: &ActionConvention, n: usize) -> Result<Vec<CheckEntry>> {
    if n == 0 || n > 4 {
        return Err(Error::PreconditionViolation(format!(
            "n = {n} outside 1..=4"
        )));
    }
    let sl = SLQuotient::new(n);
    let alg = sl.basis().algebra();
    let action = UqAction::new(alg, conv);
    let mut relations = quadratic_relations(n)?;
    relations.push(("det".into(), det_relation(alg)?));
    let mut out = Vec::new();
    for (name, words) in &relations {
        for side in [Side::Left, Side::Right] {
            for gen in UqGen::all(n) {
                let image = action.act_on_words(side, gen, words)?;
                let pass = if name == "det" {
                    sl.normal_form(&SLElement {
                        rep: image,
                        shift: 0,
                    })?
                    .is_empty()
                } else {
                    image.is_zero()
                };
                out.push(CheckEntry {
                    relation: name.clone(),
                    generator: format!("{side} {gen}"),
                    pass,
                });
            }
        }
    }
    Ok(out)
}

/// Checks the defining relations of `U_q(sl_n)` as operators on all
/// monomials of total degree at most `degree_cap`, on each side, and that the
/// two actions commute.
pub fn check_bimodule_axioms(
    conv: &ActionConvention,
    n: usize,
    degree_cap: u32,
) -> Result<Vec<CheckEntry>> {
    if n == 0 || n > 3 || degree_cap > 3 {
        return Err(Error::PreconditionViolation(format!(
            "need n <= 3 and degree cap <= 3, got n = {n}, cap = {degree_cap}"
        )));
    }
    let alg = QMatrix::new(n);
    let action = UqAction::new(&alg, conv);
    let monomials: Vec<Element> = matrices_up_to_total(n, degree_cap)
        .into_iter()
        .map(Element::monomial)
        .collect();
    let mut out = Vec::new();
    let mut record = |relation: String, generator: String, pass: bool| {
        out.push(CheckEntry {
            relation,
            generator,
            pass,
        });
    };
    let all_hold = |f: &dyn Fn(&Element) -> Result<bool>| -> Result<bool> {
        for x in &monomials {
            if !f(x)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    for side in [Side::Left, Side::Right] {
        let act = |gens: &[UqGen], x: &Element| action.act_word(side, gens, x);
        for i in 1..n {
            let (e, k, ki) = (UqGen::e(i), UqGen::k(i), UqGen::k_inv(i));
            let pass = all_hold(&|x| Ok(act(&[k, ki], x)? == *x && act(&[ki, k], x)? == *x))?;
            record("K K^-1 = 1".into(), format!("{side} {k}"), pass);
            for j in 1..n {
                let (ej, fj) = (UqGen::e(j), UqGen::f(j));
                let c = cartan(i, j);
                let pass = all_hold(&|x| Ok(act(&[k, ej], x)? == act(&[ej, k], x)?.shift(2 * c)))?;
                record(
                    "K E = q^{2(a_i,a_j)} E K".into(),
                    format!("{side} {k} {ej}"),
                    pass,
                );
                let pass = all_hold(&|x| Ok(act(&[k, fj], x)? == act(&[fj, k], x)?.shift(-2 * c)))?;
                record(
                    "K F = q^{-2(a_i,a_j)} F K".into(),
                    format!("{side} {k} {fj}"),
                    pass,
                );
                let pass = all_hold(&|x| {
                    let lhs = &act(&[e, fj], x)? - &act(&[fj, e], x)?;
                    let rhs = if i == j {
                        let (a, _) = x.leading_term().expect("monomial");
                        let m = conv.weight(side, a).pair_simple_root(i) as i32;
                        x.scale(&LaurentPoly::quantum_integer(m))
                    } else {
                        Element::zero(n)
                    };
                    Ok(lhs == rhs)
                })?;
                record(
                    "E F - F E = d (K - K^-1)/(q^2 - q^-2)".into(),
                    format!("{side} {e} {fj}"),
                    pass,
                );
            }
        }
    }
    for g in UqGen::all(n) {
        for h in UqGen::all(n) {
            let pass = all_hold(&|x| {
                let a = action.act(Side::Right, h, &action.act(Side::Left, g, x)?)?;
                let b = action.act(Side::Left, g, &action.act(Side::Right, h, x)?)?;
                Ok(a == b)
            })?;
            record(
                "left-right commutation".into(),
                format!("left {g} right {h}"),
                pass,
            );
        }
    }
    Ok(out)
}

/// `det_q(t)` is killed by left `E_i`, `i < t`, and right `F_j`,
/// `n - t + 1 <= j <= n - 1`.
pub fn highest_weight_check(alg: &QMatrix, t: usize, conv: &ActionConvention) -> Result<bool> {
    let n = alg.n();
    let minor = alg.det_corner(t)?;
    let action = UqAction::new(alg, conv);
    for i in 1..t {
        if !action.act(Side::Left, UqGen::e(i), &minor)?.is_zero() {
            return Ok(false);
        }
    }
    for j in (n + 1 - t)..n {
        if !action.act(Side::Right, UqGen::f(j), &minor)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
