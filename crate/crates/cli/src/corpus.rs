//! Corpus runner: a line-based job config runs concurrently and becomes a
//! CSV report, one row per job. Job failures land in the verdict column;
//! the run itself always completes. Row content is deterministic given the
//! inputs, except the millis column.
//!
//! Config lines: `<label> <verb> key=value ...`, `#` comments allowed.
//! Verbs: `prove-php n=<N> [functionality=<bool>]`,
//! `check path=<proof> [system=<S>] [cnf=<path>]`,
//! `translate path=<proof> to=<S> [from=<S>] [cnf=<path>]`.
//! Paths are relative to the config file.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use rayon::prelude::*;

use proofbench::calculi::{check_frege_family, CalculusId, ProofFormatError};
use proofbench::cnf::CnfError;
use proofbench::measure::measure_proof;
use proofbench::php::build_ef_proof_php;
use proofbench::sim::{translate, SimError};

use crate::proofio::{check_payload, default_source, load_proof, verdict_string};

pub const CSV_HEADER: [&str; 6] = ["label", "system", "steps", "symbols", "verdict", "millis"];

#[derive(Debug, Clone)]
struct Row {
    label: String,
    system: String,
    steps: u64,
    symbols: u64,
    verdict: String,
    millis: u128,
}

enum JobKind {
    ProvePhp {
        n: usize,
        functionality: bool,
    },
    Check {
        path: PathBuf,
        system: Option<CalculusId>,
        cnf: Option<PathBuf>,
    },
    Translate {
        path: PathBuf,
        to: CalculusId,
        from: Option<CalculusId>,
        cnf: Option<PathBuf>,
    },
}

struct Job {
    label: String,
    /// Config-level problems become the row verdict directly.
    kind: Result<JobKind, String>,
}

pub fn run_corpus(config: &Path, jobs: Option<usize>, output: Option<&Path>) -> Result<u8> {
    let text =
        fs::read_to_string(config).with_context(|| format!("reading {}", config.display()))?;
    let base = config.parent().unwrap_or(Path::new("."));
    let specs = parse_config(&text, base);

    let threads = jobs
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
        .max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .context("building worker pool")?;
    // Jobs are pure; rows come back in config order and are written by this
    // one serialization point.
    let rows: Vec<Row> = pool.install(|| specs.par_iter().map(run_job).collect());

    let sink: Box<dyn Write> = match output {
        Some(p) => {
            Box::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)
        }
        None => Box::new(std::io::stdout()),
    };
    let mut wtr = csv::Writer::from_writer(sink);
    wtr.write_record(CSV_HEADER)?;
    for r in &rows {
        wtr.write_record([
            r.label.as_str(),
            r.system.as_str(),
            &r.steps.to_string(),
            &r.symbols.to_string(),
            r.verdict.as_str(),
            &r.millis.to_string(),
        ])?;
    }
    wtr.flush()?;

    Ok(if rows.iter().all(|r| r.verdict == "ACCEPT") {
        0
    } else {
        1
    })
}

fn parse_config(text: &str, base: &Path) -> Vec<Job> {
    let mut out = Vec::new();
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let label = tokens.next().expect("non-empty line").to_string();
        let kind = parse_kind(tokens, base);
        out.push(Job { label, kind });
    }
    out
}

fn parse_kind<'a>(
    mut tokens: impl Iterator<Item = &'a str>,
    base: &Path,
) -> Result<JobKind, String> {
    let config_err = || "ERROR(CONFIG)".to_string();
    let verb = tokens.next().ok_or_else(config_err)?;
    let mut kv: BTreeMap<&str, &str> = BTreeMap::new();
    for t in tokens {
        let (k, v) = t.split_once('=').ok_or_else(config_err)?;
        kv.insert(k, v);
    }
    let path_of = |kv: &BTreeMap<&str, &str>, key: &str| kv.get(key).map(|v| base.join(v));
    let system_of = |kv: &BTreeMap<&str, &str>, key: &str| match kv.get(key) {
        None => Ok(None),
        Some(v) => CalculusId::from_name(v).map(Some).ok_or_else(config_err),
    };
    match verb {
        "prove-php" => {
            let n = kv
                .get("n")
                .and_then(|v| v.parse().ok())
                .ok_or_else(config_err)?;
            let functionality = match kv.get("functionality") {
                None => false,
                Some(v) => v.parse().map_err(|_| config_err())?,
            };
            Ok(JobKind::ProvePhp { n, functionality })
        }
        "check" => Ok(JobKind::Check {
            path: path_of(&kv, "path").ok_or_else(config_err)?,
            system: system_of(&kv, "system")?,
            cnf: path_of(&kv, "cnf"),
        }),
        "translate" => Ok(JobKind::Translate {
            path: path_of(&kv, "path").ok_or_else(config_err)?,
            to: system_of(&kv, "to")?.ok_or_else(config_err)?,
            from: system_of(&kv, "from")?,
            cnf: path_of(&kv, "cnf"),
        }),
        _ => Err(config_err()),
    }
}

fn run_job(job: &Job) -> Row {
    let t0 = Instant::now();
    let (system, steps, symbols, verdict) = match &job.kind {
        Err(msg) => ("-".to_string(), 0, 0, msg.clone()),
        Ok(kind) => execute(kind).unwrap_or_else(|e| ("-".to_string(), 0, 0, classify(&e))),
    };
    Row {
        label: job.label.clone(),
        system,
        steps,
        symbols,
        verdict,
        millis: t0.elapsed().as_millis(),
    }
}

fn execute(kind: &JobKind) -> Result<(String, u64, u64, String)> {
    match kind {
        JobKind::ProvePhp { n, functionality } => {
            let art = build_ef_proof_php(*n, *functionality)?;
            let report = check_frege_family(&art.proof);
            Ok((
                "EF".to_string(),
                art.steps,
                art.symbols,
                verdict_string(&report.verdict),
            ))
        }
        JobKind::Check { path, system, cnf } => {
            let loaded = load_proof(path, cnf.as_deref())?;
            let system = system.unwrap_or(loaded.declared);
            let report = check_payload(&loaded.payload, system)?;
            Ok((
                system.name().to_string(),
                report.steps,
                report.symbols,
                verdict_string(&report.verdict),
            ))
        }
        JobKind::Translate {
            path,
            to,
            from,
            cnf,
        } => {
            let loaded = load_proof(path, cnf.as_deref())?;
            let from = from.unwrap_or_else(|| default_source(&loaded));
            match translate(from, *to, &loaded.payload) {
                Ok(r) => {
                    let verdict = match crate::proofio::verify_translation(&r) {
                        Ok(()) => "ACCEPT".to_string(),
                        Err(m) => m,
                    };
                    let m = measure_proof("", &r.proof);
                    Ok((to.name().to_string(), m.steps, m.symbols, verdict))
                }
                Err(SimError::SourceInvalid { line, reason }) => Ok((
                    from.name().to_string(),
                    0,
                    0,
                    format!("REJECT(line {line}: {reason})"),
                )),
                Err(e) => Ok((to.name().to_string(), 0, 0, format!("ERROR(TRANSLATE: {e})"))),
            }
        }
    }
}

fn classify(e: &anyhow::Error) -> String {
    if e.chain()
        .any(|c| c.downcast_ref::<std::io::Error>().is_some())
    {
        "ERROR(IO)".to_string()
    } else if e.chain().any(|c| {
        c.downcast_ref::<ProofFormatError>().is_some() || c.downcast_ref::<CnfError>().is_some()
    }) {
        "ERROR(FORMAT)".to_string()
    } else {
        "ERROR(RUN)".to_string()
    }
}
