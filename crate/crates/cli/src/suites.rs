use std::collections::BTreeSet;

use qcanon::canon::verify::Side as MinorSide;
use qcanon::canon::{oracle_unique_ic, Block, CanonicalBasis, Staircase};
use qcanon::matrix::matrices_up_to_total;
use qcanon::uqaction::{check_relation_preservation, highest_weight_check, ActionConvention};
use qcanon::{Error, ExpMatrix, Letter, Result};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    DetMult,
    MinorMult,
    Transpose,
    BrokenLine,
    Ladder,
    QCommute,
    IcOracle,
    RegionCommute,
    UqRelations,
    UqHighestWeight,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::DetMult => "det-mult",
            Suite::MinorMult => "minor-mult",
            Suite::Transpose => "transpose",
            Suite::BrokenLine => "broken-line",
            Suite::Ladder => "ladder",
            Suite::QCommute => "q-commute",
            Suite::IcOracle => "ic-oracle",
            Suite::RegionCommute => "region-commute",
            Suite::UqRelations => "uq-relations",
            Suite::UqHighestWeight => "uq-highest-weight",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub input: String,
    pub pass: bool,
    pub detail: String,
}

pub struct SuiteParams {
    pub n: usize,
    pub max_total: u32,
    pub t: Option<usize>,
    pub conv: ActionConvention,
    pub seed: u64,
    pub samples: usize,
}

fn report(check: &str, input: impl ToString, pass: bool, detail: impl ToString) -> CheckReport {
    CheckReport {
        check: check.into(),
        input: input.to_string(),
        pass,
        detail: detail.to_string(),
    }
}

/// Every matrix up to the degree cap, followed by `samples` random matrices
/// one degree above it.
fn inputs(p: &SuiteParams) -> Vec<ExpMatrix> {
    let mut out = matrices_up_to_total(p.n, p.max_total);
    let mut rng = StdRng::seed_from_u64(p.seed);
    let cells = p.n * p.n;
    for _ in 0..p.samples {
        let mut a = ExpMatrix::zeros(p.n);
        for _ in 0..=p.max_total {
            let c = rng.gen_range(0..cells);
            let (i, j) = (c / p.n, c % p.n);
            a.set(i, j, a.get(i, j) + 1);
        }
        out.push(a);
    }
    out
}

fn blocks(p: &SuiteParams) -> Vec<Block> {
    let margins: BTreeSet<(Vec<u32>, Vec<u32>)> = matrices_up_to_total(p.n, p.max_total)
        .iter()
        .map(|a| (a.row_sums(), a.col_sums()))
        .collect();
    margins.iter().map(|(r, c)| Block::new(r, c)).collect()
}

fn t_range(p: &SuiteParams) -> Result<Vec<usize>> {
    match p.t {
        Some(t) if t == 0 || t > p.n => {
            Err(Error::BadIndexSet(format!("t = {t} outside 1..={}", p.n)))
        }
        Some(t) => Ok(vec![t]),
        None => Ok((1..=p.n).collect()),
    }
}

/// Runs `check` over `items` in parallel, keeping input order.
fn each<T: Sync>(
    items: &[T],
    check: impl Fn(&T) -> Result<Vec<CheckReport>> + Sync + Send,
) -> Result<Vec<CheckReport>> {
    let parts: Vec<Result<Vec<CheckReport>>> = items.par_iter().map(check).collect();
    let mut out = Vec::new();
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

pub fn run(suite: Suite, p: &SuiteParams) -> Result<Vec<CheckReport>> {
    let name = suite.name();
    let cb = CanonicalBasis::new(p.n);
    match suite {
        Suite::DetMult => each(&inputs(p), |a| {
            let pass = cb.verify_det_multiplication(a)?;
            Ok(vec![report(name, a, pass, "b(A) det_q = b(A + I)")])
        }),
        Suite::MinorMult => {
            let ts = t_range(p)?;
            each(&inputs(p), |a| {
                let mut out = Vec::new();
                for &t in &ts {
                    for side in [MinorSide::Row, MinorSide::Column] {
                        let r = cb.verify_minor_multiplication(a, t, side)?;
                        let detail = format!(
                            "t={t} {side:?}: predicted q^{}, observed {}",
                            r.predicted,
                            r.observed.map_or("none".into(), |k| format!("q^{k}"))
                        );
                        out.push(report(name, a, r.pass, detail));
                    }
                }
                Ok(out)
            })
        }
        Suite::Transpose => each(&inputs(p), |a| {
            let pass = cb.verify_transpose_symmetry(a)?;
            Ok(vec![report(name, a, pass, "sigma(b(A)) = b(A^T)")])
        }),
        Suite::BrokenLine => {
            let lines = Staircase::all(p.n);
            each(&inputs(p), |a| {
                let mut out = Vec::new();
                for line in &lines {
                    let r = cb.verify_broken_line(a, line)?;
                    let detail = format!(
                        "line {line}: q-commuting {}, factorizes {}, m = {}",
                        r.q_commuting(),
                        r.factorizes(),
                        r.predicted_m
                    );
                    out.push(report(name, a, r.pass(), detail));
                }
                Ok(out)
            })
        }
        Suite::Ladder => {
            let candidates: Vec<ExpMatrix> = inputs(p)
                .into_iter()
                .filter(|a| a.is_ladder() || a.is_striped())
                .collect();
            each(&candidates, |a| {
                let r = cb.verify_ladder_factorization(a)?;
                let detail = format!(
                    "ladder {} ({} minors, q^{:?}), striped {:?}",
                    r.is_ladder,
                    r.factors.len(),
                    r.ladder_exponent,
                    r.striped_exponent
                );
                Ok(vec![report(name, a, r.pass(), detail)])
            })
        }
        Suite::QCommute => {
            let bs = blocks(p);
            let pairs: Vec<(&Block, &Block)> = bs
                .iter()
                .flat_map(|b1| bs.iter().map(move |b2| (b1, b2)))
                .filter(|(b1, b2)| {
                    let (d1, d2): (u32, u32) = (b1.rows.iter().sum(), b2.rows.iter().sum());
                    d1 > 0 && d2 > 0 && d1 + d2 <= p.max_total
                })
                .collect();
            each(&pairs, |(b1, b2)| {
                let r = cb.verify_q_commuting_pairs(b1, b2)?;
                Ok(r.in_basis
                    .iter()
                    .map(|x| {
                        let input = format!("{} * {}", x.left, x.right);
                        let detail = format!("q^{} b({})", x.exponent, x.product);
                        report(name, input, x.symmetric, detail)
                    })
                    .collect())
            })
        }
        Suite::IcOracle => each(&blocks(p), |b| {
            let solved = cb.basis_block(&b.rows, &b.cols)?;
            let oracle = oracle_unique_ic(&cb, b)?;
            let input = format!("R={:?} C={:?}", b.rows, b.cols);
            Ok(vec![report(
                name,
                input,
                solved == oracle,
                format!("{} elements", b.len()),
            )])
        }),
        Suite::RegionCommute => {
            let ts = t_range(p)?;
            let mut triples = Vec::new();
            for &t in &ts {
                for i in 0..p.n {
                    for j in 0..p.n {
                        triples.push((t, Letter::new(i, j)));
                    }
                }
            }
            each(&triples, |&(t, l)| {
                let r = cb.verify_region_commutation(t, l)?;
                let detail = format!("predicted q^{}, observed {:?}", r.predicted, r.observed);
                Ok(vec![report(name, format!("t={t} {l}"), r.pass, detail)])
            })
        }
        Suite::UqRelations => Ok(check_relation_preservation(&p.conv, p.n)?
            .into_iter()
            .map(|e| report(name, e.relation, e.pass, e.generator))
            .collect()),
        Suite::UqHighestWeight => {
            let mut out = Vec::new();
            for t in t_range(p)? {
                let pass = highest_weight_check(cb.algebra(), t, &p.conv)?;
                out.push(report(
                    name,
                    format!("t={t}"),
                    pass,
                    format!("conv {}", p.conv.name),
                ));
            }
            Ok(out)
        }
    }
}
