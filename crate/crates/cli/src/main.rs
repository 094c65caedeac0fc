//! Batch front end for the workbench: generators, proof checking,
//! checked translations, the pigeonhole prover, algebraic and 0/1-linear
//! encoders, size measurement, minimal-refutation search, and corpus runs.
//!
//! Exit codes: 0 = every verdict accepted (or search completed), 1 = any
//! reject, mismatch, or exhausted budget, 2 = usage or input error.

mod corpus;
mod proofio;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{ArgAction, Args, Parser, Subcommand};

use proofbench::calculi::{render_hilbert, render_resolution, CalculusId, Conclusion};
use proofbench::cnf::{parse_dimacs, write_dimacs};
use proofbench::encode::{
    encode_linear_system, encode_poly_system, render_linear_system, render_poly_system,
};
use proofbench::gen::{
    gen_php_cnf, gen_php_dnf, gen_tau, gen_tseitin, parse_circuit, parse_graph, PhpParams,
    TauInstance,
};
use proofbench::measure::measure_proof;
use proofbench::php::build_ef_proof_php;
use proofbench::render_formula;
use proofbench::search::{min_resolution_steps, SearchBudget, SearchError, DEFAULT_SEARCH_BUDGET};
use proofbench::sim::{translate, ProofPayload, SimError};

use crate::proofio::{
    check_payload, default_source, load_proof, verdict_string, verify_translation,
};

#[derive(Parser)]
#[command(name = "proofbench", version, about = "Propositional proof-complexity workbench")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate hard tautology-family instances.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Check a proof file and report verdict, conclusion, and sizes.
    Check(CheckArgs),
    /// Translate a checked proof into another calculus.
    Translate(TranslateArgs),
    /// Build the extended-Frege proof of the pigeonhole tautology.
    ProvePhp(ProvePhpArgs),
    /// Encode a DIMACS CNF as equations or 0/1 linear constraints.
    #[command(subcommand)]
    Encode(EncodeCmd),
    /// Report steps and symbols of a proof file.
    Measure(MeasureArgs),
    /// Exact minimal RESOLVE-step count for refuting a CNF, under a budget.
    SearchMinRes(SearchArgs),
    /// Run a job config and write a CSV report.
    Corpus(CorpusArgs),
}

#[derive(Subcommand)]
enum GenCmd {
    /// Pigeonhole principle: CNF contradiction or DNF tautology.
    Php(GenPhpArgs),
    /// Tseitin parity contradiction from a charged-graph file.
    Tseitin(GenTseitinArgs),
    /// Circuit range-avoidance tautology.
    Tau(GenTauArgs),
}

#[derive(Args)]
struct GenPhpArgs {
    /// Number of pigeons.
    #[arg(long)]
    pigeons: usize,
    /// Number of holes (default: pigeons - 1).
    #[arg(long)]
    holes: Option<usize>,
    /// Include the at-most-one-hole-per-pigeon clauses.
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    functionality: bool,
    /// cnf: DIMACS contradiction; dnf: its negation as a tautology.
    #[arg(long, value_parser = ["cnf", "dnf"], default_value = "cnf")]
    form: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenTseitinArgs {
    /// Graph file: `vertex <name>`, `edge <a> <b>`, `charge <name> <0|1>` lines.
    graph: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenTauArgs {
    /// Circuit file: `inputs <n>`, `gate <id> <OP> <args>`, `outputs ...`.
    circuit: PathBuf,
    /// Target output string as 0/1 bits, length twice the input count.
    #[arg(long)]
    target: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    proof: PathBuf,
    /// Calculus to check as: RES, RES*, ER, F, EF, SF (default: file header).
    #[arg(long)]
    system: Option<String>,
    /// Override the CNF path recorded in a refutation header.
    #[arg(long)]
    cnf: Option<PathBuf>,
}

#[derive(Args)]
struct TranslateArgs {
    proof: PathBuf,
    /// Target calculus.
    #[arg(long)]
    to: String,
    /// Source calculus (default: ER for refutation files, the header otherwise).
    #[arg(long)]
    from: Option<String>,
    /// Override the CNF path recorded in a refutation header.
    #[arg(long)]
    cnf: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ProvePhpArgs {
    /// Number of pigeons n; the proof concludes the PHP(n, n-1) tautology.
    #[arg(long)]
    pigeons: usize,
    /// Also cover the at-most-one-hole-per-pigeon clauses.
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    functionality: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum EncodeCmd {
    /// Polynomial equations over 0/1 assignments, one per clause.
    Poly(EncodeArgs),
    /// Integer-linear constraints with 0/1 bounds.
    Ilp(EncodeArgs),
}

#[derive(Args)]
struct EncodeArgs {
    cnf: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MeasureArgs {
    proof: PathBuf,
    /// Report label (default: proof file stem).
    #[arg(long)]
    label: Option<String>,
    /// Override the CNF path recorded in a refutation header.
    #[arg(long)]
    cnf: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    cnf: PathBuf,
    /// Search nodes explored before giving up.
    #[arg(long = "budget-lines", default_value_t = DEFAULT_SEARCH_BUDGET.max_nodes)]
    budget_lines: usize,
    /// Wall-clock limit in seconds.
    #[arg(long = "budget-secs", default_value_t = DEFAULT_SEARCH_BUDGET.max_secs)]
    budget_secs: u64,
}

#[derive(Args)]
struct CorpusArgs {
    config: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Concurrent jobs (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes, like other batch tools.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_system(s: &str) -> Result<CalculusId> {
    CalculusId::from_name(s)
        .ok_or_else(|| anyhow!("unknown system `{s}`; expected RES, RES*, ER, F, EF, or SF"))
}

fn read_cnf(path: &Path) -> Result<proofbench::CnfFormula> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_dimacs(&text).with_context(|| format!("parsing {}", path.display()))
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Gen(GenCmd::Php(a)) => {
            let holes = a.holes.unwrap_or_else(|| a.pigeons.saturating_sub(1));
            let params = PhpParams::new(a.pigeons, holes, a.functionality)?;
            let text = match a.form.as_str() {
                "cnf" => write_dimacs(&gen_php_cnf(params)),
                _ => format!("{}\n", render_formula(&gen_php_dnf(params))),
            };
            emit(a.output.as_deref(), &text)?;
            Ok(0)
        }
        Cmd::Gen(GenCmd::Tseitin(a)) => {
            let text = fs::read_to_string(&a.graph)
                .with_context(|| format!("reading {}", a.graph.display()))?;
            let (graph, charges) = parse_graph(&text)?;
            let cnf = gen_tseitin(&graph, &charges)?;
            emit(a.output.as_deref(), &write_dimacs(&cnf))?;
            Ok(0)
        }
        Cmd::Gen(GenCmd::Tau(a)) => {
            let text = fs::read_to_string(&a.circuit)
                .with_context(|| format!("reading {}", a.circuit.display()))?;
            let circuit = parse_circuit(&text)?;
            let instance = TauInstance::parse_target(circuit, &a.target)?;
            let formula = gen_tau(&instance);
            emit(a.output.as_deref(), &format!("{}\n", render_formula(&formula)))?;
            Ok(0)
        }
        Cmd::Check(a) => {
            let loaded = load_proof(&a.proof, a.cnf.as_deref())?;
            let system = match &a.system {
                Some(s) => parse_system(s)?,
                None => loaded.declared,
            };
            let report = check_payload(&loaded.payload, system)?;
            println!("verdict={}", verdict_string(&report.verdict));
            if let Some(c) = &report.conclusion {
                let text = match c {
                    Conclusion::EmptyClause => "EMPTY_CLAUSE".to_string(),
                    Conclusion::Formula(f) => render_formula(f),
                };
                println!("conclusion={text}");
            }
            println!("steps={}", report.steps);
            println!("symbols={}", report.symbols);
            Ok(if report.accepted() { 0 } else { 1 })
        }
        Cmd::Translate(a) => {
            let loaded = load_proof(&a.proof, a.cnf.as_deref())?;
            let to = parse_system(&a.to)?;
            let from = match &a.from {
                Some(s) => parse_system(s)?,
                None => default_source(&loaded),
            };
            let r = match translate(from, to, &loaded.payload) {
                Ok(r) => r,
                Err(e @ (SimError::SourceInvalid { .. } | SimError::ConclusionShape)) => {
                    eprintln!("{e}");
                    return Ok(1);
                }
                Err(e) => return Err(e.into()),
            };
            if let Err(msg) = verify_translation(&r) {
                eprintln!("translated proof failed verification: {msg}");
                return Ok(1);
            }
            let body = match &r.proof {
                ProofPayload::Derivation(p) => render_hilbert(p),
                ProofPayload::Refutation(p, cnf) => {
                    // The refutation format names its CNF in a sibling file,
                    // so this target needs a real output directory.
                    let out = a.output.as_deref().ok_or_else(|| {
                        anyhow!(
                            "a refutation target needs -o so the companion CNF `{}` \
                             can be written next to it",
                            p.cnf_path
                        )
                    })?;
                    let dir = out.parent().unwrap_or(Path::new("."));
                    let cnf_file = dir.join(&p.cnf_path);
                    fs::write(&cnf_file, write_dimacs(cnf))
                        .with_context(|| format!("writing {}", cnf_file.display()))?;
                    render_resolution(p, cnf)
                }
            };
            emit(
                a.output.as_deref(),
                &format!("{body}# stats {}\n", r.sidecar()),
            )?;
            Ok(0)
        }
        Cmd::ProvePhp(a) => {
            let art = build_ef_proof_php(a.pigeons, a.functionality)?;
            let text = format!("{}# stats {}\n", render_hilbert(&art.proof), art.stats_line());
            emit(a.output.as_deref(), &text)?;
            Ok(0)
        }
        Cmd::Encode(cmd) => {
            let (a, text) = match &cmd {
                EncodeCmd::Poly(a) => {
                    (a, render_poly_system(&encode_poly_system(&read_cnf(&a.cnf)?)))
                }
                EncodeCmd::Ilp(a) => {
                    (a, render_linear_system(&encode_linear_system(&read_cnf(&a.cnf)?)))
                }
            };
            emit(a.output.as_deref(), &text)?;
            Ok(0)
        }
        Cmd::Measure(a) => {
            let label = match &a.label {
                Some(l) => l.clone(),
                None => a
                    .proof
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "proof".to_string()),
            };
            let loaded = load_proof(&a.proof, a.cnf.as_deref())?;
            let report = measure_proof(&label, &loaded.payload);
            println!(
                "label={} system={} steps={} symbols={}",
                report.label,
                report.system.name(),
                report.steps,
                report.symbols
            );
            Ok(0)
        }
        Cmd::SearchMinRes(a) => {
            let cnf = read_cnf(&a.cnf)?;
            let budget = SearchBudget::new(a.budget_lines, a.budget_secs);
            match min_resolution_steps(&cnf, budget) {
                Ok(k) => {
                    println!("min_resolve_steps={k}");
                    Ok(0)
                }
                Err(SearchError::Satisfiable) => {
                    println!("satisfiable: no refutation exists");
                    Ok(1)
                }
                Err(SearchError::BudgetExceeded { lower_bound }) => {
                    println!("budget exceeded; any refutation needs at least {lower_bound} RESOLVE steps");
                    Ok(1)
                }
            }
        }
        Cmd::Corpus(a) => corpus::run_corpus(&a.config, a.jobs, a.output.as_deref()),
    }
}
