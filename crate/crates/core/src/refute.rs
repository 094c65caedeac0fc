//! Resolution derivations extracted from an exhaustive semantic-tree
//! search. Branching on one atom at a time and resolving the two falsified
//! clauses at each interior node yields a tree-like, regular refutation;
//! with initial assumptions the result is a clause over the assumption
//! complements instead of the empty clause.

use std::collections::{BTreeMap, HashMap};

use crate::cnf::{Clause, CnfFormula, Literal};
use crate::formula::Atom;

use crate::calculi::{ResolutionJust, ResolutionLine, ResolutionProof, ResolutionSystem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DerivJust {
    /// Index into the premise list.
    Input(usize),
    /// Indices into the derivation's own line list; the pivot is positive
    /// in `left` and negative in `right`.
    Resolve {
        left: usize,
        right: usize,
        pivot: Atom,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivLine {
    pub clause: Clause,
    pub just: DerivJust,
}

/// A resolution derivation from a premise list; the last line is the
/// derived clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub lines: Vec<DerivLine>,
}

impl Derivation {
    pub fn conclusion(&self) -> &Clause {
        &self.lines.last().expect("nonempty derivation").clause
    }
}

struct Search<'a> {
    premises: &'a [Clause],
    lines: Vec<DerivLine>,
    input_memo: HashMap<usize, usize>,
    budget: usize,
}

enum Outcome {
    /// Index of a line falsified by the current assignment.
    Falsified(usize),
    Satisfiable,
    BudgetExceeded,
}

impl<'a> Search<'a> {
    fn input_line(&mut self, i: usize) -> usize {
        if let Some(&idx) = self.input_memo.get(&i) {
            return idx;
        }
        self.lines.push(DerivLine {
            clause: self.premises[i].clone(),
            just: DerivJust::Input(i),
        });
        let idx = self.lines.len() - 1;
        self.input_memo.insert(i, idx);
        idx
    }

    fn search(&mut self, assign: &mut BTreeMap<Atom, bool>) -> Outcome {
        if self.lines.len() > self.budget {
            return Outcome::BudgetExceeded;
        }
        // An unsatisfied premise with no unassigned literals is falsified.
        // Track the shortest live clause for the branching choice.
        let mut branch: Option<(usize, Atom)> = None;
        for (i, clause) in self.premises.iter().enumerate() {
            let mut open = 0;
            let mut satisfied = false;
            let mut candidate: Option<Atom> = None;
            for lit in clause.literals() {
                match assign.get(&lit.atom) {
                    Some(&v) if v == lit.positive => {
                        satisfied = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        open += 1;
                        candidate.get_or_insert_with(|| lit.atom.clone());
                    }
                }
            }
            if satisfied {
                continue;
            }
            if open == 0 {
                return Outcome::Falsified(self.input_line(i));
            }
            let better = match &branch {
                None => true,
                Some((best, _)) => open < *best,
            };
            if better {
                branch = Some((open, candidate.unwrap()));
            }
        }
        let atom = match branch {
            Some((_, atom)) => atom,
            // Every premise is satisfied by the current partial assignment.
            None => return Outcome::Satisfiable,
        };

        assign.insert(atom.clone(), true);
        let pos = self.search(assign);
        assign.remove(&atom);
        let pos_idx = match pos {
            Outcome::Falsified(i) => i,
            other => return other,
        };
        // If the positive branch's clause avoids the atom, it is already
        // falsified here.
        if !self.lines[pos_idx]
            .clause
            .contains(&Literal::neg(atom.clone()))
        {
            return Outcome::Falsified(pos_idx);
        }

        assign.insert(atom.clone(), false);
        let neg = self.search(assign);
        assign.remove(&atom);
        let neg_idx = match neg {
            Outcome::Falsified(i) => i,
            other => return other,
        };
        if !self.lines[neg_idx]
            .clause
            .contains(&Literal::pos(atom.clone()))
        {
            return Outcome::Falsified(neg_idx);
        }

        let resolvent = self.lines[neg_idx]
            .clause
            .resolve(&self.lines[pos_idx].clause, &atom);
        self.lines.push(DerivLine {
            clause: resolvent,
            just: DerivJust::Resolve {
                left: neg_idx,
                right: pos_idx,
                pivot: atom,
            },
        });
        Outcome::Falsified(self.lines.len() - 1)
    }
}

pub const DEFAULT_REFUTE_BUDGET: usize = 2_000_000;

/// Search for a resolution derivation from `premises` of a clause falsified
/// by `assumptions`, i.e. a subset of the assumption complements. With no
/// assumptions this is a refutation ending in the empty clause. Returns
/// `None` when the premises are satisfiable under the assumptions; errors
/// with the partial line count when the budget is exhausted.
pub fn refute_under(
    premises: &[Clause],
    assumptions: &[Literal],
    budget: usize,
) -> Result<Option<Derivation>, usize> {
    let mut assign: BTreeMap<Atom, bool> = assumptions
        .iter()
        .map(|l| (l.atom.clone(), l.positive))
        .collect();
    let mut s = Search {
        premises,
        lines: Vec::new(),
        input_memo: HashMap::new(),
        budget,
    };
    match s.search(&mut assign) {
        Outcome::Falsified(idx) => {
            let derivation = prune(s.lines, idx);
            Ok(Some(derivation))
        }
        Outcome::Satisfiable => Ok(None),
        Outcome::BudgetExceeded => Err(s.lines.len()),
    }
}

/// Refute an unsatisfiable clause set outright.
pub fn refute(premises: &[Clause]) -> Option<Derivation> {
    refute_under(premises, &[], DEFAULT_REFUTE_BUDGET).ok()?
}

/// Drop lines that do not feed into `root` and reindex.
fn prune(lines: Vec<DerivLine>, root: usize) -> Derivation {
    let mut needed = vec![false; lines.len()];
    needed[root] = true;
    for i in (0..lines.len()).rev() {
        if !needed[i] {
            continue;
        }
        if let DerivJust::Resolve { left, right, .. } = &lines[i].just {
            needed[*left] = true;
            needed[*right] = true;
        }
    }
    let mut remap = vec![usize::MAX; lines.len()];
    let mut out = Vec::new();
    for (i, line) in lines.into_iter().enumerate() {
        if !needed[i] {
            continue;
        }
        let just = match line.just {
            DerivJust::Input(k) => DerivJust::Input(k),
            DerivJust::Resolve { left, right, pivot } => DerivJust::Resolve {
                left: remap[left],
                right: remap[right],
                pivot,
            },
        };
        remap[i] = out.len();
        out.push(DerivLine {
            clause: line.clause,
            just,
        });
    }
    // The root may not be last when unused suffix lines were dropped; it is
    // by construction, since everything after root was pruned.
    Derivation { lines: out }
}

/// Package a refutation of `cnf` as a checkable proof object. The
/// derivation's premises must be exactly `cnf.clauses()`.
pub fn derivation_to_proof(
    derivation: &Derivation,
    cnf_path: &str,
) -> ResolutionProof {
    let lines = derivation
        .lines
        .iter()
        .enumerate()
        .map(|(i, line)| ResolutionLine::Clause {
            id: i as u64 + 1,
            clause: line.clause.clone(),
            just: match &line.just {
                DerivJust::Input(k) => ResolutionJust::Input(k + 1),
                DerivJust::Resolve { left, right, pivot } => ResolutionJust::Resolve {
                    left: *left as u64 + 1,
                    right: *right as u64 + 1,
                    pivot: Some(pivot.clone()),
                },
            },
        })
        .collect();
    ResolutionProof {
        system: ResolutionSystem::Res,
        cnf_path: cnf_path.to_string(),
        lines,
    }
}

/// Convenience: refute a CNF and package the result.
pub fn refute_cnf(cnf: &CnfFormula, cnf_path: &str) -> Option<ResolutionProof> {
    refute(cnf.clauses()).map(|d| derivation_to_proof(&d, cnf_path))
}
