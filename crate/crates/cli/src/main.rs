use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use stackspace::check::{backend_agreement, store_soundness};
use stackspace::corpus::{check_entry, load_corpus};
use stackspace::csa::{store_language, write_prefix_language};
use stackspace::deciders::{classify, is_constant_space, is_z_limited};
use stackspace::measures::{asymptotic_report, profile, rows_to_csv, sigma_u, Measure, MeasureOptions};
use stackspace::nfa::{LengthBound, Nfa};
use stackspace::oracle::Budget;
use stackspace::{parse_machine, StackMachine};

#[derive(Parser)]
#[command(
    name = "stackspace",
    version,
    about = "Space measures and deciders for stack automata"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Largest stack the oracle explores.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
    stack_cap: u64,
    /// Largest number of configurations the oracle visits.
    #[arg(long, default_value_t = 2_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    node_cap: u64,
    /// Longest input for language-level oracle queries.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    input_cap: u64,
}

impl BudgetArgs {
    fn budget(self) -> Budget {
        Budget {
            stack_cap: self.stack_cap as usize,
            node_cap: self.node_cap as usize,
            input_cap: self.input_cap as usize,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DecidedMeasure {
    Accept,
    Strong,
}

impl From<DecidedMeasure> for Measure {
    fn from(z: DecidedMeasure) -> Measure {
        match z {
            DecidedMeasure::Accept => Measure::Accept,
            DecidedMeasure::Strong => Measure::Strong,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NfaFormat {
    Edges,
    Dot,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a machine file and check its declared class.
    Validate {
        machine: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Measure one input word.
    Measure {
        machine: PathBuf,
        /// Input word; `_` or an empty string is the empty word.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// weak, accept or strong; all three when omitted.
        #[arg(long)]
        measure: Option<Measure>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        json: bool,
    },
    /// Per-length maxima and their running envelope.
    Profile {
        machine: PathBuf,
        #[arg(long)]
        measure: Measure,
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        /// Same as `--format json`.
        #[arg(long)]
        json: bool,
        /// Refuse to enumerate more words than this per length.
        #[arg(long, default_value_t = 100_000)]
        enum_budget: usize,
        /// Evaluate only the words in this file, one per line.
        #[arg(long)]
        words_file: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Export the store language of a checking machine.
    StoreLang {
        machine: PathBuf,
        #[arg(long, value_enum, default_value_t = NfaFormat::Edges)]
        format: NfaFormat,
        /// List the members up to this length instead of the automaton.
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Export the write-phase input prefix language of a checking machine.
    Lwm {
        machine: PathBuf,
        #[arg(long, value_enum, default_value_t = NfaFormat::Edges)]
        format: NfaFormat,
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether the machine is z-limited.
    DecideLimited {
        machine: PathBuf,
        #[arg(long, value_enum)]
        measure: DecidedMeasure,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether the machine runs in constant space.
    DecideConstant {
        machine: PathBuf,
        #[arg(long, value_enum)]
        measure: DecidedMeasure,
        #[arg(long)]
        json: bool,
    },
    /// Unlimited, constant or linear; both measures when none is given.
    Classify {
        machine: PathBuf,
        #[arg(long, value_enum)]
        measure: Option<DecidedMeasure>,
        #[arg(long)]
        json: bool,
    },
    /// Compare exact analyses with the brute-force oracle.
    OracleCheck {
        machine: PathBuf,
        /// Check every word up to this length.
        #[arg(long, default_value_t = 5)]
        max_len: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        json: bool,
    },
    /// Run every expectation of the bundled corpus.
    CorpusRun {
        /// Only this corpus machine.
        #[arg(long)]
        name: Option<String>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        json: bool,
    },
}

/// Errors in the user's input (exit 2) as opposed to failed checks (exit 1).
struct Usage(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.into())
    }
}

fn load(path: &Path) -> Result<StackMachine, Usage> {
    let src = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_machine(&src).with_context(|| path.display().to_string())?)
}

fn word(m: &StackMachine, text: &str) -> Result<Vec<usize>, Usage> {
    Ok(m.parse_word(text).with_context(|| format!("word `{text}`"))?)
}

fn show(m: &StackMachine, u: &[usize]) -> String {
    if u.is_empty() {
        "λ".into()
    } else {
        m.format_word(u)
    }
}

fn print_json(v: &impl serde::Serialize) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn length_bound(nfa: &Nfa) -> Value {
    match nfa.max_word_length() {
        None => Value::Null,
        Some(LengthBound::Finite(k)) => json!(k),
        Some(LengthBound::Infinite) => json!("inf"),
    }
}

fn emit_nfa(nfa: &Nfa, format: NfaFormat, max_len: Option<usize>, json: bool) -> anyhow::Result<()> {
    let render = |w: &Vec<usize>| nfa.format_word(w);
    if json || format == NfaFormat::Json {
        let mut v = json!({
            "alphabet": nfa.alphabet(),
            "states": nfa.num_states(),
            "edges": nfa.num_edges(),
            "finite": nfa.is_finite(),
            "maxLength": length_bound(nfa),
            "automaton": nfa.to_edge_list(),
        });
        if let Some(k) = max_len {
            v["words"] = json!(nfa.words_up_to(k).iter().map(render).collect::<Vec<_>>());
        }
        return print_json(&v);
    }
    match max_len {
        Some(k) => {
            for w in nfa.words_up_to(k) {
                println!("{}", if w.is_empty() { "λ".into() } else { render(&w) });
            }
        }
        None if format == NfaFormat::Dot => print!("{}", nfa.to_dot()),
        None => print!("{}", nfa.to_edge_list()),
    }
    Ok(())
}

fn run(cmd: Cmd) -> Result<ExitCode, Usage> {
    match cmd {
        Cmd::Validate { machine, json } => {
            let src = std::fs::read_to_string(&machine).with_context(|| format!("reading {}", machine.display()))?;
            match parse_machine(&src) {
                Ok(m) => {
                    if json {
                        print_json(&json!({
                            "valid": true,
                            "name": m.name(),
                            "class": m.class(),
                            "states": m.num_states(),
                            "transitions": m.transitions().len(),
                            "checking": m.is_checking(),
                        }))?;
                    } else {
                        println!(
                            "ok: {} {} ({} states, {} transitions)",
                            m.class(),
                            m.name(),
                            m.num_states(),
                            m.transitions().len()
                        );
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    if json {
                        print_json(&json!({ "valid": false, "error": e.to_string() }))?;
                    } else {
                        println!("invalid: {e}");
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }
        Cmd::Measure {
            machine,
            word: text,
            measure,
            budget,
            json,
        } => {
            let m = load(&machine)?;
            let u = word(&m, &text)?;
            let zs = measure.map_or(Measure::ALL.to_vec(), |z| vec![z]);
            let values: Vec<_> = zs.iter().map(|&z| (z, sigma_u(&m, &u, z, budget.budget()))).collect();
            if json {
                let map: serde_json::Map<String, Value> =
                    values.iter().map(|(z, v)| (z.to_string(), json!(v))).collect();
                print_json(&json!({ "machine": m.name(), "word": show(&m, &u), "values": map }))?;
            } else if values.len() == 1 {
                println!("{}", values[0].1.describe());
            } else {
                for (z, v) in values {
                    println!("{z} {}", v.describe());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Profile {
            machine,
            measure,
            n_max,
            format,
            json,
            enum_budget,
            words_file,
            budget,
        } => {
            let m = load(&machine)?;
            let words = match words_file {
                Some(p) => {
                    let text = std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
                    let list: Result<Vec<_>, _> = text
                        .lines()
                        .map(str::trim)
                        .filter(|l| !l.is_empty())
                        .map(|l| word(&m, l))
                        .collect();
                    Some(list?)
                }
                None => None,
            };
            let opts = MeasureOptions {
                budget: budget.budget(),
                enum_budget,
                words,
            };
            let rows = profile(&m, n_max, measure, &opts)?;
            if json || format == TableFormat::Json {
                let fit = asymptotic_report(&rows).ok();
                print_json(&json!({ "machine": m.name(), "measure": measure, "rows": rows, "fit": fit }))?;
            } else {
                print!("{}", rows_to_csv(&rows));
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::StoreLang {
            machine,
            format,
            max_len,
            json,
        } => {
            let m = load(&machine)?;
            emit_nfa(&store_language(&m)?, format, max_len, json)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Lwm {
            machine,
            format,
            max_len,
            json,
        } => {
            let m = load(&machine)?;
            emit_nfa(&write_prefix_language(&m)?, format, max_len, json)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::DecideLimited { machine, measure, json } => {
            let m = load(&machine)?;
            let z = Measure::from(measure);
            let l = is_z_limited(&m, z)?;
            if json {
                print_json(&json!({ "measure": z, "limited": l.limited, "evidence": l.evidence }))?;
            } else {
                println!("{}", if l.limited { "limited" } else { "unlimited" });
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::DecideConstant { machine, measure, json } => {
            let m = load(&machine)?;
            let z = Measure::from(measure);
            let c = is_constant_space(&m, z)?;
            if json {
                print_json(&json!({ "measure": z, "constant": c }))?;
            } else {
                println!("{}", if c { "constant" } else { "not-constant" });
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Classify { machine, measure, json } => {
            let m = load(&machine)?;
            let zs: Vec<Measure> = match measure {
                Some(z) => vec![z.into()],
                None => vec![Measure::Accept, Measure::Strong],
            };
            let verdicts = zs.iter().map(|&z| classify(&m, z)).collect::<Result<Vec<_>, _>>()?;
            match (json, verdicts.as_slice()) {
                (true, [one]) => print_json(one)?,
                (true, all) => print_json(&all)?,
                (false, [one]) => println!("{}", one.verdict),
                (false, all) => {
                    for v in all {
                        println!("{}: {}", v.measure, v.verdict);
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::OracleCheck {
            machine,
            max_len,
            budget,
            json,
        } => {
            let m = load(&machine)?;
            if !m.is_checking() {
                return Err(Usage(anyhow!(
                    "oracle-check compares against the exact analyses, which need a checking machine"
                )));
            }
            let b = budget.budget();
            let agreement = backend_agreement(&m, max_len, b)?;
            let store = store_soundness(&m, b)?;
            let failed = !agreement.discrepancies.is_empty() || !store.missing.is_empty();
            if json {
                print_json(
                    &json!({ "machine": m.name(), "agreement": agreement, "storeSoundness": store, "passed": !failed }),
                )?;
            } else {
                println!(
                    "{}: {} words, {} comparisons, {} uncertified, {} discrepancies",
                    m.name(),
                    agreement.words,
                    agreement.compared,
                    agreement.uncertified,
                    agreement.discrepancies.len()
                );
                for d in &agreement.discrepancies {
                    println!("  {} on {}: exact {}, oracle {}", d.what, d.word, d.analytic, d.oracle);
                }
                println!(
                    "store sample: {} words, {} outside the store language",
                    store.checked,
                    store.missing.len()
                );
                for w in &store.missing {
                    println!("  {w}");
                }
            }
            Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
        Cmd::CorpusRun { name, budget, json } => {
            let entries = load_corpus()?;
            if let Some(n) = &name {
                if !entries.iter().any(|e| &e.name == n) {
                    return Err(Usage(anyhow!("no corpus machine `{n}`")));
                }
            }
            let mut report = Vec::new();
            let mut failures = 0;
            for e in entries.iter().filter(|e| name.as_ref().is_none_or(|n| &e.name == n)) {
                let checks = check_entry(e, budget.budget());
                failures += checks.iter().filter(|c| !c.passed).count();
                if !json {
                    for c in &checks {
                        let tag = if c.passed { "PASS" } else { "FAIL" };
                        println!("{tag} {}: {} ({})", e.name, c.label, c.detail);
                    }
                }
                report.push(json!({ "name": e.name, "checks": checks }));
            }
            if json {
                print_json(&json!({ "entries": report, "failures": failures }))?;
            } else {
                println!("{failures} failed");
            }
            Ok(if failures > 0 {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
