//! Proof-file loading and verdict plumbing shared by the check, translate,
//! measure, and corpus verbs. The `system` header of a file decides its
//! family; refutation files name their input CNF, resolved relative to the
//! proof file unless overridden.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};

use proofbench::calculi::{
    check_extended_resolution, check_frege_family, check_resolution, parse_hilbert,
    parse_resolution, resolution_cnf_path, CalculusId, CheckReport, Conclusion, Verdict,
};
use proofbench::cnf::parse_dimacs;
use proofbench::sim::{ProofPayload, TranslationResult};

pub struct LoadedProof {
    pub payload: ProofPayload,
    /// Calculus named in the file header.
    pub declared: CalculusId,
}

pub fn load_proof(path: &Path, cnf_override: Option<&Path>) -> Result<LoadedProof> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let header = header_system(&text)
        .ok_or_else(|| anyhow!("{}: missing `system <name>` header", path.display()))?;
    match header.as_str() {
        "RES" | "ER" => {
            let rel = resolution_cnf_path(&text)?;
            let cnf_path: PathBuf = match cnf_override {
                Some(p) => p.to_path_buf(),
                None => path.parent().unwrap_or(Path::new(".")).join(&rel),
            };
            let cnf_text = fs::read_to_string(&cnf_path)
                .with_context(|| format!("reading {}", cnf_path.display()))?;
            let cnf = parse_dimacs(&cnf_text)
                .with_context(|| format!("parsing {}", cnf_path.display()))?;
            let proof = parse_resolution(&text, &cnf)?;
            let declared = if header == "ER" {
                CalculusId::Er
            } else {
                CalculusId::Res
            };
            Ok(LoadedProof {
                payload: ProofPayload::Refutation(proof, cnf),
                declared,
            })
        }
        "F" | "EF" | "SF" => {
            let proof = parse_hilbert(&text)?;
            let declared =
                CalculusId::from_name(&header).expect("variant names are calculus names");
            Ok(LoadedProof {
                payload: ProofPayload::Derivation(proof),
                declared,
            })
        }
        other => bail!("{}: unknown system `{other}`", path.display()),
    }
}

fn header_system(text: &str) -> Option<String> {
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        return line.strip_prefix("system ").map(|s| s.trim().to_string());
    }
    None
}

/// The calculus a payload translates from when none is given: refutations
/// are extended-resolution proofs (plain resolution is the zero-extension
/// case), Frege-family proofs are whatever their header declares.
pub fn default_source(loaded: &LoadedProof) -> CalculusId {
    match &loaded.payload {
        ProofPayload::Refutation(..) => CalculusId::Er,
        ProofPayload::Derivation(..) => loaded.declared,
    }
}

/// Run the checker selected by `system`; RES* is plain resolution with the
/// tree-likeness restriction. Cross-family requests are usage errors.
pub fn check_payload(payload: &ProofPayload, system: CalculusId) -> Result<CheckReport> {
    match payload {
        ProofPayload::Refutation(proof, cnf) => match system {
            CalculusId::Res => Ok(check_resolution(proof, cnf, false)),
            CalculusId::ResTree => Ok(check_resolution(proof, cnf, true)),
            CalculusId::Er => Ok(check_extended_resolution(proof, cnf)),
            other => bail!("`{}` cannot check a refutation file", other.name()),
        },
        ProofPayload::Derivation(proof) => {
            let declared = CalculusId::from_name(proof.variant.name())
                .expect("variant names are calculus names");
            if system != declared {
                bail!(
                    "file declares {}, cannot check as {}",
                    declared.name(),
                    system.name()
                );
            }
            Ok(check_frege_family(proof))
        }
    }
}

pub fn verdict_string(v: &Verdict) -> String {
    match v {
        Verdict::Accept => "ACCEPT".to_string(),
        Verdict::Reject { line, reason } => format!("REJECT(line {line}: {reason})"),
    }
}

/// Re-check a finished translation: the target proof must be accepted by
/// its own checker and establish exactly the recorded conclusion.
pub fn verify_translation(r: &TranslationResult) -> std::result::Result<(), String> {
    let report = check_payload(&r.proof, r.target).map_err(|e| e.to_string())?;
    if !report.accepted() {
        return Err(verdict_string(&report.verdict));
    }
    let preserved = match (&r.proof, &report.conclusion) {
        (ProofPayload::Derivation(_), Some(Conclusion::Formula(f))) => *f == r.conclusion,
        (ProofPayload::Refutation(_, cnf), Some(Conclusion::EmptyClause)) => {
            cnf.negation_dnf() == r.conclusion
        }
        _ => false,
    };
    if preserved {
        Ok(())
    } else {
        Err("CONCLUSION_MISMATCH".to_string())
    }
}
