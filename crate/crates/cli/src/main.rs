//! `qcanon`: compute dual canonical basis elements of `O_q(M(n))` and run
//! the verification suites from the command line.
//!
//! Exit status: 0 success, 1 usage error, 2 verification failure,
//! 3 internal inconsistency.

mod suites;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcanon::canon::CanonicalBasis;
use qcanon::slquotient::SLQuotient;
use qcanon::uqaction::{
    check_bimodule_axioms, check_relation_preservation, highest_weight_check, ActionConvention,
    Side, UqAction, UqGen,
};
use qcanon::{Element, Error, ExpMatrix};
use serde::Serialize;

use suites::{Suite, SuiteParams};

const EXIT_USAGE: u8 = 1;
const EXIT_FAILED: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qcanon",
    version,
    about = "Dual canonical basis of quantum matrices"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Worker threads for verification suites (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Conv {
    Standard,
    AsPrinted,
}

impl Conv {
    fn convention(self) -> ActionConvention {
        match self {
            Conv::Standard => ActionConvention::standard(),
            Conv::AsPrinted => ActionConvention::as_printed(),
        }
    }
}

#[derive(Args)]
struct Size {
    /// Matrix size.
    #[arg(long)]
    n: usize,
}

#[derive(Subcommand)]
enum Command {
    /// The basis element b(A).
    Basis {
        #[command(flatten)]
        size: Size,
        /// Index matrix, rows separated by ';' and entries by ','.
        #[arg(long)]
        matrix: String,
    },
    /// Every basis element in the block of A (same row and column sums).
    Block {
        #[command(flatten)]
        size: Size,
        #[arg(long)]
        matrix: String,
    },
    /// The quantum determinant.
    Det {
        #[command(flatten)]
        size: Size,
    },
    /// A quantum minor, either the corner minor det_q(t) or explicit 1-based
    /// rows and columns.
    Minor {
        #[command(flatten)]
        size: Size,
        #[arg(long, conflicts_with_all = ["rows", "cols"])]
        t: Option<usize>,
        /// With --t: the transposed corner minor sigma(det_q(t)).
        #[arg(long, requires = "t")]
        transpose: bool,
        #[arg(long, value_delimiter = ',', requires = "cols")]
        rows: Vec<usize>,
        #[arg(long, value_delimiter = ',', requires = "rows")]
        cols: Vec<usize>,
    },
    /// Product of two elements.
    Mult {
        #[command(flatten)]
        size: Size,
        /// Element: JSON, a matrix literal for Z^A, or "b:" and a matrix for b(A).
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// The bar involution.
    Bar {
        #[command(flatten)]
        size: Size,
        #[arg(long)]
        element: String,
    },
    /// The transpose automorphism.
    Sigma {
        #[command(flatten)]
        size: Size,
        #[arg(long)]
        element: String,
    },
    /// The basis element of O_q(SL(n)) indexed by A.
    SlBasis {
        #[command(flatten)]
        size: Size,
        #[arg(long)]
        matrix: String,
    },
    /// The U_q(sl_n) action.
    Uq {
        #[command(subcommand)]
        command: UqCommand,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        size: Size,
        /// Degree cap on the matrices checked.
        #[arg(long, default_value_t = 3)]
        max_total: u32,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long, value_enum, default_value_t = Conv::Standard)]
        conv: Conv,
        /// Seed for the extra random inputs requested with --samples.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random matrices of degree max-total + 1 added to the exhaustive inputs.
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum UqCommand {
    /// Act by one generator on an element.
    Act {
        #[arg(long)]
        side: String,
        /// E1, F2, K1, K1^-1, ...
        #[arg(long)]
        gen: String,
        #[arg(long, value_enum, default_value_t = Conv::Standard)]
        conv: Conv,
        /// JSON element, or with --n also a matrix literal or b:<matrix>
        #[arg(long)]
        element: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Check that every generator preserves the defining relations.
    Relations {
        #[command(flatten)]
        size: Size,
        #[arg(long, value_enum, default_value_t = Conv::Standard)]
        conv: Conv,
    },
    /// Check the U_q(sl_n) relations as operators on monomials.
    Axioms {
        #[command(flatten)]
        size: Size,
        #[arg(long, default_value_t = 2)]
        max_total: u32,
        #[arg(long, value_enum, default_value_t = Conv::Standard)]
        conv: Conv,
    },
    /// Check that det_q(t) is a highest weight vector.
    HighestWeight {
        #[command(flatten)]
        size: Size,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long, value_enum, default_value_t = Conv::Standard)]
        conv: Conv,
    },
}

enum Failure {
    Usage(String),
    Internal(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InternalInconsistency(_)
            | Error::DegreeBoundExceeded { .. }
            | Error::ExponentOverflow => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal inconsistency: {msg}");
            ExitCode::from(EXIT_INTERNAL)
        }
        Err(Failure::Verification) => ExitCode::from(EXIT_FAILED),
    }
}

fn check_n(n: usize) -> Result<usize, Failure> {
    if n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    Ok(n)
}

fn parse_matrix(n: usize, s: &str) -> Result<ExpMatrix, Failure> {
    let a: ExpMatrix = s.parse()?;
    if a.n() != n {
        return Err(Failure::Usage(format!(
            "matrix {a} is {0}x{0}, expected {n}x{n}",
            a.n()
        )));
    }
    Ok(a)
}

fn parse_element(cb: &CanonicalBasis, spec: &str) -> Result<Element, Failure> {
    let spec = spec.trim();
    let n = cb.n();
    let x = if spec.starts_with('{') {
        serde_json::from_str::<Element>(spec)
            .map_err(|e| Failure::Usage(format!("bad element JSON: {e}")))?
    } else if let Some(rest) = spec.strip_prefix("b:") {
        cb.basis_element(&parse_matrix(n, rest)?)?.element.clone()
    } else {
        Element::monomial(parse_matrix(n, spec)?)
    };
    if x.n() != n {
        return Err(Failure::Usage(format!(
            "element has n = {}, expected {n}",
            x.n()
        )));
    }
    Ok(x)
}

fn emit_json<T: Serialize + ?Sized>(value: &T) -> Outcome {
    let s = serde_json::to_string(value).map_err(|e| Failure::Internal(e.to_string()))?;
    println!("{s}");
    Ok(())
}

fn emit_element(format: Format, x: &Element) -> Outcome {
    match format {
        Format::Text => {
            println!("{x}");
            Ok(())
        }
        Format::Json => emit_json(x),
    }
}

fn run(cli: &Cli) -> Outcome {
    let format = cli.format;
    match &cli.command {
        Command::Basis { size, matrix } => {
            let cb = CanonicalBasis::new(check_n(size.n)?);
            let b = cb.basis_element(&parse_matrix(size.n, matrix)?)?;
            match format {
                Format::Text => emit_element(format, &b.element),
                Format::Json => emit_json(&*b),
            }
        }
        Command::Block { size, matrix } => {
            let cb = CanonicalBasis::new(check_n(size.n)?);
            let a = parse_matrix(size.n, matrix)?;
            let block = cb.basis_block(&a.row_sums(), &a.col_sums())?;
            match format {
                Format::Text => {
                    for b in &block {
                        println!("b({}) = {}", b.index, b.element);
                    }
                    Ok(())
                }
                Format::Json => emit_json(&block),
            }
        }
        Command::Det { size } => {
            let cb = CanonicalBasis::new(check_n(size.n)?);
            emit_element(format, &cb.algebra().det())
        }
        Command::Minor {
            size,
            t,
            transpose,
            rows,
            cols,
        } => {
            let cb = CanonicalBasis::new(check_n(size.n)?);
            let alg = cb.algebra();
            let x = match t {
                Some(t) if *transpose => alg.det_corner_transposed(*t)?,
                Some(t) => alg.det_corner(*t)?,
                None if rows.is_empty() => {
                    return Err(Failure::Usage("give --t or --rows and --cols".into()))
                }
                None => {
                    let zero_based = |v: &[usize]| -> Result<Vec<usize>, Failure> {
                        v.iter()
                            .map(|&i| {
                                i.checked_sub(1).ok_or_else(|| {
                                    Failure::Usage("row and column indices are 1-based".into())
                                })
                            })
                            .collect()
                    };
                    alg.quantum_minor(&zero_based(rows)?, &zero_based(cols)?)?
                }
            };
            emit_element(format, &x)
        }
        Command::Mult { size, left, right } => {
            let cb = CanonicalBasis::new(check_n(size.n)?);
            let x = parse_element(&cb, left)?;
            let y = parse_element(&cb, right)?;
            emit_element(format, &cb.algebra().multiply(&x, &y)?)
        }
        Command::Bar { size, element } => {
            let cb = CanonicalBasis::new(check_n(size.n)?);
            let x = parse_element(&cb, element)?;
            emit_element(format, &cb.algebra().bar(&x))
        }
        Command::Sigma { size, element } => {
            let cb = CanonicalBasis::new(check_n(size.n)?);
            let x = parse_element(&cb, element)?;
            emit_element(format, &cb.algebra().sigma(&x))
        }
        Command::SlBasis { size, matrix } => {
            let sl = SLQuotient::new(check_n(size.n)?);
            let x = sl.sl_basis_element(&parse_matrix(size.n, matrix)?)?;
            match format {
                Format::Text => {
                    println!("{x}");
                    Ok(())
                }
                Format::Json => emit_json(&x),
            }
        }
        Command::Uq { command } => run_uq(format, command),
        Command::Verify {
            suite,
            size,
            max_total,
            t,
            conv,
            seed,
            samples,
        } => {
            let params = SuiteParams {
                n: check_n(size.n)?,
                max_total: *max_total,
                t: *t,
                conv: conv.convention(),
                seed: *seed,
                samples: *samples,
            };
            let reports = suites::run(*suite, &params)?;
            let passed = reports.iter().filter(|r| r.pass).count();
            match format {
                Format::Text => {
                    let mut out = io::stdout().lock();
                    for r in &reports {
                        let status = if r.pass { "PASS" } else { "FAIL" };
                        let _ = writeln!(out, "{status} {} {}: {}", r.check, r.input, r.detail);
                    }
                    let _ = writeln!(out, "{}: {passed}/{} passed", suite.name(), reports.len());
                }
                Format::Json => emit_json(&reports)?,
            }
            if passed == reports.len() {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
    }
}

fn run_uq(format: Format, command: &UqCommand) -> Outcome {
    let entries = match command {
        UqCommand::Act {
            side,
            gen,
            conv,
            element,
            n,
        } => {
            let side: Side = side.parse()?;
            let gen: UqGen = gen.parse()?;
            let x = match n {
                Some(n) if !element.trim_start().starts_with('{') => {
                    parse_element(&CanonicalBasis::new(check_n(*n)?), element)?
                }
                _ => serde_json::from_str::<Element>(element)
                    .map_err(|e| Failure::Usage(format!("bad element JSON: {e}")))?,
            };
            if let Some(n) = n {
                if *n != x.n() {
                    return Err(Failure::Usage(format!(
                        "element has n = {}, --n is {n}",
                        x.n()
                    )));
                }
            }
            let alg = qcanon::QMatrix::new(x.n());
            let conv = conv.convention();
            let y = UqAction::new(&alg, &conv).act(side, gen, &x)?;
            return emit_element(format, &y);
        }
        UqCommand::Relations { size, conv } => {
            check_relation_preservation(&conv.convention(), check_n(size.n)?)?
        }
        UqCommand::Axioms {
            size,
            max_total,
            conv,
        } => check_bimodule_axioms(&conv.convention(), check_n(size.n)?, *max_total)?,
        UqCommand::HighestWeight { size, t, conv } => {
            let alg = qcanon::QMatrix::new(check_n(size.n)?);
            let ts: Vec<usize> = t.map_or_else(|| (1..=size.n).collect(), |t| vec![t]);
            let conv = conv.convention();
            let mut entries = Vec::new();
            for t in ts {
                entries.push(qcanon::uqaction::CheckEntry {
                    relation: format!("det_q({t}) highest weight"),
                    generator: format!("left E_i, i < {t}; right F_j, j > {}", size.n - t),
                    pass: highest_weight_check(&alg, t, &conv)?,
                });
            }
            entries
        }
    };
    match format {
        Format::Text => {
            for e in &entries {
                println!(
                    "{} {} [{}]",
                    if e.pass { "PASS" } else { "FAIL" },
                    e.relation,
                    e.generator
                );
            }
        }
        Format::Json => emit_json(&entries)?,
    }
    if entries.iter().all(|e| e.pass) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
