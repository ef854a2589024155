use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use pdwa_core::encoding::Base;
use pdwa_core::engine::{
    build_mult, compile_traced, crosscheck, decide, format_assignment, mult_raw, run_corpus,
    size_report, solve, CompileOptions, CorpusConfig, CrosscheckReport, EngineKind, Fault,
};
use pdwa_core::formula::{parse, Formula};
use pdwa_core::qelim::eliminate_all_traced;

/// `println!` that reports a closed stdout instead of panicking.
macro_rules! out {
    ($($arg:tt)*) => {
        writeln!(io::stdout(), $($arg)*)?
    };
}

/// Presburger arithmetic through deterministic word automata.
#[derive(Parser)]
#[command(name = "pdwa", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Numeration base ρ ≥ 2.
    #[arg(long, global = true, env = "PDWA_BASE", default_value_t = 2)]
    base: u32,
    /// Compile directly, or eliminate quantifiers first.
    #[arg(long, global = true, value_enum, default_value_t = Engine::Automata)]
    engine: Engine,
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Minimize only the final automaton.
    #[arg(long, global = true)]
    no_minimize_steps: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Automata,
    QeThenAutomata,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a sentence: prints TRUE (exit 0) or FALSE (exit 1).
    Decide {
        /// Formula text, or @path to read it from a file.
        formula: String,
    },
    /// Build the minimal automaton of a formula.
    Build {
        formula: String,
        /// Emit Graphviz DOT.
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        /// Write the DOT or JSON artifact here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Eliminate all quantifiers.
    Qe {
        formula: String,
        /// Print the elimination trace as JSON.
        #[arg(long)]
        trace: bool,
    },
    /// Compare both engines on one formula (exit 1 on mismatch).
    Crosscheck {
        formula: String,
        /// Grid oracle covers every tuple encodable in this many letters.
        #[arg(long, default_value_t = 5)]
        max_word_len: u32,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Cross-check a seeded random corpus (exit 1 on any mismatch).
    Corpus {
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long, default_value_t = 60)]
        count: usize,
        #[arg(long, default_value_t = 5)]
        max_word_len: u32,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Size of the minimal automaton for MULT_m against the ρ^m lower bound.
    BenchMult { m: u32 },
}

fn read_formula(source: &str) -> Result<Formula> {
    let text = match source.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {path}"))?,
        None => source.to_string(),
    };
    parse(&text).map_err(|e| anyhow!("{e}"))
}

fn options(common: &Common) -> Result<CompileOptions> {
    let base = Base::new(common.base).map_err(|e| anyhow!("{e}"))?;
    Ok(CompileOptions {
        base,
        minimize_each_step: !common.no_minimize_steps,
        engine: match common.engine {
            Engine::Automata => EngineKind::Automata,
            Engine::QeThenAutomata => EngineKind::QeThenAutomata,
        },
        variable_order: None,
    })
}

/// Grid radius such that `[-r, r]` holds every value encodable in `len`
/// letters.
fn grid_radius(base: Base, len: u32) -> Result<i64> {
    if len == 0 {
        bail!("--max-word-len must be at least 1");
    }
    i64::from(base.get())
        .checked_pow(len - 1)
        .ok_or_else(|| anyhow!("--max-word-len {len} is too large"))
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    out!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn print_crosscheck(report: &CrosscheckReport) -> Result<()> {
    out!("formula: {}", report.formula);
    out!("qe: {}", report.qe_formula);
    for (engine, states) in &report.engine_sizes {
        out!("{engine}: {states} states");
    }
    for b in &report.bounds {
        out!("  {b}");
    }
    for v in &report.verdicts {
        let verdict = if v.pass { "PASS" } else { "FAIL" };
        out!("{}: {verdict} ({})", v.name, v.detail);
    }
    Ok(())
}

fn fault(inject: bool) -> Fault {
    if inject {
        Fault::FlipAccepting
    } else {
        Fault::None
    }
}

fn run(cli: Cli) -> Result<bool> {
    let common = &cli.common;
    let opts = options(common)?;
    match cli.command {
        Command::Decide { formula } => {
            let phi = read_formula(&formula)?;
            let truth = decide(&phi, &opts)?;
            if common.json {
                print_json(&json!({ "formula": phi.to_string(), "result": truth }))?;
            } else {
                out!("{}", if truth { "TRUE" } else { "FALSE" });
            }
            Ok(truth)
        }
        Command::Build {
            formula,
            dot,
            output,
        } => {
            let phi = read_formula(&formula)?;
            let compiled = compile_traced(&phi, &opts)?;
            let ledger = size_report(&phi, &opts)?;
            let artifact = if dot {
                Some(compiled.dwa.to_dot())
            } else if common.json {
                Some(serde_json::to_string_pretty(&compiled.dwa.to_json())? + "\n")
            } else {
                None
            };
            let tracks: Vec<String> = compiled.tracks.iter().map(|v| v.name.clone()).collect();
            let summary = format!(
                "states: {} (tracks: {})",
                compiled.dwa.num_states(),
                tracks.join(", ")
            );
            match (artifact, output) {
                (Some(text), Some(path)) => {
                    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
                    out!("{summary}");
                }
                (Some(text), None) => {
                    write!(io::stdout(), "{text}")?;
                    eprintln!("{summary}");
                }
                (None, _) => {
                    out!("{summary}");
                    if let Some(witness) = solve(&phi, &opts)? {
                        out!("witness: {}", format_assignment(&witness));
                    }
                    for b in &ledger.bounds {
                        out!("  {b}");
                    }
                }
            }
            Ok(true)
        }
        Command::Qe { formula, trace } => {
            let phi = read_formula(&formula)?;
            let (psi, steps) = eliminate_all_traced(&phi.rename_apart());
            if trace || common.json {
                let mut out = json!({ "formula": phi.to_string(), "result": psi.to_string() });
                if trace {
                    out["trace"] = serde_json::to_value(&steps)?;
                }
                print_json(&out)?;
            } else {
                out!("{psi}");
            }
            Ok(true)
        }
        Command::Crosscheck {
            formula,
            max_word_len,
            inject_fault,
        } => {
            let phi = read_formula(&formula)?;
            let radius = grid_radius(opts.base, max_word_len)?;
            let report = crosscheck(&phi, &opts, radius, 2, fault(inject_fault))?;
            if common.json {
                print_json(&report)?;
            } else {
                print_crosscheck(&report)?;
            }
            Ok(report.all_pass())
        }
        Command::Corpus {
            seed,
            count,
            max_word_len,
            inject_fault,
        } => {
            // each corpus formula carries its own base; the grid uses base 2
            let radius = grid_radius(Base::BINARY, max_word_len)?;
            let summary = run_corpus(&CorpusConfig {
                seed,
                count,
                grid_radius: radius,
                max_grid_vars: 3,
                fault: fault(inject_fault),
            })?;
            if common.json {
                print_json(&summary)?;
            } else {
                for e in &summary.entries {
                    let verdict = if e.pass() { "PASS" } else { "FAIL" };
                    let sizes: Vec<String> = e
                        .report
                        .engine_sizes
                        .iter()
                        .map(|(k, v)| format!("{k}={v}"))
                        .collect();
                    out!(
                        "#{:<3} {verdict} base={} {} :: {}",
                        e.id,
                        e.base.get(),
                        sizes.join(" "),
                        e.report.formula
                    );
                    for v in e.report.verdicts.iter().filter(|v| !v.pass) {
                        out!("     {}: {}", v.name, v.detail);
                    }
                }
                out!(
                    "seed {}: {}/{} passed",
                    summary.seed, summary.passed, summary.total
                );
            }
            Ok(summary.all_pass())
        }
        Command::BenchMult { m } => {
            let raw = mult_raw(m, opts.base)?.num_states();
            let minimal = build_mult(m, opts.base)?.num_states();
            let bound = u128::from(opts.base.get()).pow(m);
            let pass = minimal as u128 >= bound;
            let verdict = if pass { "PASS" } else { "FAIL" };
            if common.json {
                print_json(&json!({
                    "m": m,
                    "base": opts.base.get(),
                    "raw_states": raw,
                    "minimized_states": minimal,
                    "lower_bound": bound.to_string(),
                    "pass": pass,
                }))?;
            } else {
                out!("raw {raw}, minimized {minimal} >= {bound}: {verdict}");
            }
            Ok(pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e)
            if e
                .downcast_ref::<io::Error>()
                .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
