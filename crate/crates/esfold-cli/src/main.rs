//! Command line front end: validate, explore and fold event structure
//! documents.
//!
//! Exit codes: 0 on success (and for positive verdicts), 1 for negative
//! verdicts (invalid structure, rejected fold, distinguished pair), 2 for
//! usage or input errors, 3 when the enumeration cap is exceeded. The cap
//! defaults to 24 events and can be overridden with `ESFOLD_CAP`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use esfold::aes_fold::{fold_aes, HistoryMatch};
use esfold::fes_fold::fold_fes;
use esfold::reduce::{all_minimal_forms, enumerate_candidates, minimize, Strategy};
use esfold::semantics::aes_sem::histories;
use esfold::semantics::fes_sem::semantic_report;
use esfold::structure::EventStructure;
use esfold::{configurations, doc, dot, hp_bisimilar, GenParams};

#[derive(Parser)]
#[command(name = "esfold", version, about = "Event structure folding toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvertTarget {
    Aes,
    Fes,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    First,
    SmallestResult,
    Exhaustive,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::First => Strategy::First,
            StrategyArg::SmallestResult => Strategy::SmallestResult,
            StrategyArg::Exhaustive => Strategy::Exhaustive,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the structural axioms; with --semantic also joint
    /// executability (flow structures only).
    Validate {
        file: PathBuf,
        #[arg(long)]
        semantic: bool,
    },
    /// List every configuration, or only the maximal ones.
    Configs {
        file: PathBuf,
        #[arg(long)]
        maximal: bool,
    },
    /// Possible histories of one event (asymmetric-conflict structures;
    /// prime structures are embedded first).
    Hist { file: PathBuf, event: String },
    /// Evaluate every same-label candidate set with full diagnostics.
    Candidates {
        file: PathBuf,
        /// Largest candidate size to consider (defaults to the largest
        /// equal-label class).
        #[arg(long)]
        size: Option<usize>,
        /// Require histories to match the target set exactly instead of
        /// by containment.
        #[arg(long)]
        exact: bool,
    },
    /// Fold the given events into one; prints the folded document.
    Fold {
        file: PathBuf,
        /// Comma-separated event ids to merge.
        #[arg(long = "set", value_delimiter = ',', required = true)]
        set: Vec<String>,
        /// Apply the fold even when the gate rejects it.
        #[arg(long)]
        force: bool,
        #[arg(long)]
        exact: bool,
    },
    /// Fold to a fixed point; --all explores every fold order.
    Minimize {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "first")]
        strategy: StrategyArg,
        /// Report every irreducible form instead of a single trace.
        #[arg(long)]
        all: bool,
        /// Structure budget for the exhaustive search.
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long)]
        exact: bool,
        /// Also print the resulting document(s).
        #[arg(long)]
        emit: bool,
    },
    /// Decide history preserving bisimilarity of two documents.
    Equiv { left: PathBuf, right: PathBuf },
    /// Embed a prime structure into a more expressive variant.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: ConvertTarget,
    },
    /// Render to DOT.
    Dot { file: PathBuf },
    /// Generate a random prime structure document.
    Gen {
        #[arg(long)]
        events: usize,
        #[arg(long, default_value_t = 3)]
        labels: usize,
        #[arg(long, default_value_t = 0.3)]
        causality: f64,
        #[arg(long, default_value_t = 0.35)]
        conflict: f64,
        #[arg(long)]
        seed: u64,
    },
}

const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAPACITY: u8 = 3;

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn error_exit(err: esfold::Error) -> ExitCode {
    let code = match err {
        esfold::Error::Capacity { .. } => EXIT_CAPACITY,
        _ => EXIT_USAGE,
    };
    fail(code, err)
}

fn cap_from_env() -> Result<usize, String> {
    match std::env::var("ESFOLD_CAP") {
        Err(_) => Ok(esfold::DEFAULT_CAP),
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| format!("ESFOLD_CAP must be a positive integer, got `{v}`")),
    }
}

fn load(path: &PathBuf) -> Result<EventStructure, esfold::Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| esfold::Error::Document(format!("{}: {e}", path.display())))?;
    doc::parse(&text)
}

fn mode(exact: bool) -> HistoryMatch {
    if exact {
        HistoryMatch::Exact
    } else {
        HistoryMatch::Within
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cap = match cap_from_env() {
        Ok(c) => c,
        Err(msg) => return fail(EXIT_USAGE, msg),
    };
    match run(cli.command, cap) {
        Ok(code) => code,
        Err(err) => error_exit(err),
    }
}

fn run(command: Command, cap: usize) -> Result<ExitCode, esfold::Error> {
    match command {
        Command::Validate { file, semantic } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| esfold::Error::Document(format!("{}: {e}", file.display())))?;
            // Surface the violation report instead of the loader's error.
            match doc::parse(&text) {
                Ok(s) => {
                    let mut report = s.validate();
                    if semantic {
                        let f = s.as_fes()?;
                        report.violations.extend(semantic_report(f, cap)?.violations);
                    }
                    if report.is_valid() {
                        println!("valid");
                        Ok(ExitCode::SUCCESS)
                    } else {
                        println!("{report}");
                        Ok(ExitCode::from(EXIT_NEGATIVE))
                    }
                }
                Err(esfold::Error::Invalid(report)) => {
                    println!("{report}");
                    Ok(ExitCode::from(EXIT_NEGATIVE))
                }
                Err(other) => Err(other),
            }
        }
        Command::Configs { file, maximal } => {
            let s = load(&file)?;
            let fam = configurations(&s, cap)?;
            let list = if maximal { fam.maximal() } else { fam.iter().collect() };
            for c in list {
                println!("{{{}}}", s.set_names(c).join(","));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Hist { file, event } => {
            let s = load(&file)?;
            let aes = match &s {
                EventStructure::Aes(a) => a.clone(),
                EventStructure::Pes(p) => p.to_aes()?,
                EventStructure::Fes(_) => {
                    return Err(esfold::Error::KindMismatch {
                        expected: "aes or pes".into(),
                        got: "fes".into(),
                    })
                }
            };
            let e = aes
                .events()
                .index_of(&event)
                .ok_or(esfold::Error::UnknownEvent { event })?;
            for h in histories(&aes, e, cap)? {
                println!("{{{}}}", aes.events().set_names(h).join(","));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Candidates { file, size, exact } => {
            let s = load(&file)?;
            let plans = enumerate_candidates(&s, size, mode(exact), cap)?;
            if plans.is_empty() {
                println!("no candidates");
            }
            for plan in plans {
                print!("{}", plan.render(&s));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Fold { file, set, force, exact } => {
            let s = load(&file)?;
            let ids: Vec<&str> = set.iter().map(String::as_str).collect();
            let x = s.events().resolve(&ids)?;
            let folded = match &s {
                EventStructure::Aes(a) => {
                    let plan = esfold::is_combinable_aes(a, x, mode(exact), cap)?;
                    if !plan.combinable && !force {
                        eprint!("{}", plan.render(a));
                        return Ok(ExitCode::from(EXIT_NEGATIVE));
                    }
                    EventStructure::Aes(fold_aes(a, &plan, force)?.0)
                }
                EventStructure::Fes(f) => {
                    let plan = esfold::is_combinable_fes(f, x);
                    if !plan.combinable && !force {
                        eprint!("{}", plan.render(f));
                        return Ok(ExitCode::from(EXIT_NEGATIVE));
                    }
                    EventStructure::Fes(fold_fes(f, &plan, force)?.0)
                }
                EventStructure::Pes(_) => {
                    return Err(esfold::Error::KindMismatch {
                        expected: "aes or fes".into(),
                        got: "pes".into(),
                    })
                }
            };
            print!("{}", doc::serialize(&folded));
            Ok(ExitCode::SUCCESS)
        }
        Command::Minimize { file, strategy, all, budget, exact, emit } => {
            let s = load(&file)?;
            if all {
                let forms = all_minimal_forms(&s, budget, mode(exact), cap)?;
                println!(
                    "{} irreducible class(es){}",
                    forms.classes.len(),
                    if forms.complete { "" } else { " (budget exhausted, partial)" }
                );
                for (i, class) in forms.classes.iter().enumerate() {
                    println!("class {}: {} events", i + 1, class.structure.events().len());
                    print!("{}", class.trace.render());
                    if emit {
                        print!("{}", doc::serialize(&class.structure));
                    }
                }
            } else {
                let trace = minimize(&s, strategy.into(), mode(exact), cap)?;
                print!("{}", trace.render());
                if emit {
                    print!("{}", doc::serialize(&trace.result));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Equiv { left, right } => {
            let x = load(&left)?;
            let y = load(&right)?;
            let witness = hp_bisimilar(&x, &y, cap)?;
            print!("{}", witness.render(&x, &y));
            if witness.equivalent {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(EXIT_NEGATIVE))
            }
        }
        Command::Convert { file, to } => {
            let s = load(&file)?;
            let p = s.as_pes()?;
            let out = match to {
                ConvertTarget::Aes => EventStructure::Aes(p.to_aes()?),
                ConvertTarget::Fes => EventStructure::Fes(p.to_fes()?),
            };
            print!("{}", doc::serialize(&out));
            Ok(ExitCode::SUCCESS)
        }
        Command::Dot { file } => {
            let s = load(&file)?;
            print!("{}", dot::to_dot(&s));
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen { events, labels, causality, conflict, seed } => {
            let params = GenParams {
                event_count: events,
                label_count: labels,
                causality_density: causality,
                conflict_density: conflict,
                seed,
            };
            let p = esfold::generate_random_pes(&params, cap)?;
            print!("{}", doc::serialize(&EventStructure::Pes(p)));
            Ok(ExitCode::SUCCESS)
        }
    }
}
