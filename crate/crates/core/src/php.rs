//! Constructive Extended Frege proofs of the pigeonhole tautologies. The
//! induction step defines, by extension atoms, a candidate assignment for
//! PHP over one fewer pigeon from any assignment for the larger instance;
//! violating the smaller instance then forces a violation of the larger
//! one. Unrolling from the base PHP_2 up to PHP_n and re-expanding the
//! abbreviated disjunction yields a checkable proof of the generator's
//! exact DNF conclusion.

use std::collections::HashMap;

use thiserror::Error;

use crate::calculi::{HilbertJust, HilbertProof, Variant};
use crate::cnf::{Clause, Literal};
use crate::formula::{Atom, FKind, Formula};
use crate::frege::{Prover, StepRef};
use crate::gen::php_atom;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PhpProveError {
    #[error("pigeonhole induction needs at least 2 pigeons, got {0}")]
    Param(usize),
}

/// A finished EF proof of the PHP_n DNF tautology plus its measurements.
#[derive(Debug, Clone)]
pub struct PhpProofArtifacts {
    pub n: usize,
    pub proof: HilbertProof,
    pub extension_atoms: Vec<Atom>,
    pub steps: u64,
    pub symbols: u64,
}

impl PhpProofArtifacts {
    /// One-line stats sidecar.
    pub fn stats_line(&self) -> String {
        format!(
            "n={} steps={} symbols={} ext_atoms={}",
            self.n,
            self.steps,
            self.symbols,
            self.extension_atoms.len()
        )
    }
}

// --- instance bookkeeping ----------------------------------------------------

/// Structural identity of a pigeonhole clause; indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum ClauseKind {
    /// Pigeon `i` sits somewhere.
    Pigeon(usize),
    /// Pigeons `i1 < i2` do not share hole `j`.
    Hole { i1: usize, i2: usize, j: usize },
    /// Pigeon `i` does not sit in both holes `j1 < j2`.
    Func { i: usize, j1: usize, j2: usize },
}

/// One induction level: a PHP instance over `pigeons` pigeons and
/// `pigeons - 1` holes, over real atoms at the top level and extension
/// atoms below. Clause order mirrors the generator exactly, so the level-n
/// disjunction is structurally the generator's DNF.
struct Level {
    pigeons: usize,
    holes: usize,
    atoms: Vec<Vec<Atom>>,
    kinds: Vec<ClauseKind>,
    /// Negations of the clauses, in clause order; the DNF's disjuncts.
    disjuncts: Vec<Formula>,
    index: HashMap<ClauseKind, usize>,
}

impl Level {
    fn new(atoms: Vec<Vec<Atom>>, functionality: bool) -> Level {
        let pigeons = atoms.len();
        let holes = atoms[0].len();
        debug_assert_eq!(holes, (pigeons - 1).max(1));
        let mut kinds = Vec::new();
        let mut clauses: Vec<Clause> = Vec::new();
        for i in 1..=pigeons {
            kinds.push(ClauseKind::Pigeon(i));
            clauses.push(Clause::new(
                (1..=holes).map(|j| Literal::pos(atoms[i - 1][j - 1].clone())),
            ));
        }
        for j in 1..=holes {
            for i1 in 1..=pigeons {
                for i2 in (i1 + 1)..=pigeons {
                    kinds.push(ClauseKind::Hole { i1, i2, j });
                    clauses.push(Clause::new([
                        Literal::neg(atoms[i1 - 1][j - 1].clone()),
                        Literal::neg(atoms[i2 - 1][j - 1].clone()),
                    ]));
                }
            }
        }
        if functionality {
            for i in 1..=pigeons {
                for j1 in 1..=holes {
                    for j2 in (j1 + 1)..=holes {
                        kinds.push(ClauseKind::Func { i, j1, j2 });
                        clauses.push(Clause::new([
                            Literal::neg(atoms[i - 1][j1 - 1].clone()),
                            Literal::neg(atoms[i - 1][j2 - 1].clone()),
                        ]));
                    }
                }
            }
        }
        let disjuncts: Vec<Formula> = clauses.iter().map(|c| c.negation_formula()).collect();
        let index = kinds.iter().enumerate().map(|(t, &k)| (k, t)).collect();
        Level {
            pigeons,
            holes,
            atoms,
            kinds,
            disjuncts,
            index,
        }
    }

    fn atom(&self, i: usize, j: usize) -> &Atom {
        &self.atoms[i - 1][j - 1]
    }

    fn var(&self, i: usize, j: usize) -> Formula {
        Formula::var(self.atom(i, j).clone())
    }

    /// The level's full DNF: right-nested disjunction in clause order.
    fn dnf(&self) -> Formula {
        let mut acc = self.disjuncts.last().expect("nonempty clause set").clone();
        for d in self.disjuncts.iter().rev().skip(1) {
            acc = Formula::or(d.clone(), acc);
        }
        acc
    }
}

fn grid_atom(n: usize, k: usize, i: usize, j: usize) -> Atom {
    // The single-step descent (level n-1) keeps the short canonical names;
    // deeper levels disambiguate with the level number.
    let name = if k == n - 1 {
        format!("e_q_{i}_{j}")
    } else {
        format!("e_q{k}_{i}_{j}")
    };
    Atom::new(&name).expect("generated extension atom name")
}

fn suffix_atom(k: usize, t: usize) -> Atom {
    Atom::new(&format!("e_s{k}_{}", t + 1)).expect("generated extension atom name")
}

// --- small derived steps ------------------------------------------------------

fn imp_parts(p: &Prover, r: StepRef) -> (Formula, Formula) {
    p.formula(r)
        .as_implication()
        .map(|(a, b)| (a.clone(), b.clone()))
        .expect("implication-shaped step")
}

/// From `f: A -> B` and `g: B -> C` derive `A -> C`.
pub(crate) fn compose_imp(p: &mut Prover, f: StepRef, g: StepRef) -> StepRef {
    let (a, b) = imp_parts(p, f);
    let (b2, c) = imp_parts(p, g);
    debug_assert_eq!(b, b2, "compose_imp: middle formulas differ");
    let gf = p.formula(g).clone();
    let a1 = p.axiom(1, &[("P", &gf), ("Q", &a)]);
    let s = p.mp(a1, g);
    let a2 = p.axiom(2, &[("P", &a), ("Q", &b), ("R", &c)]);
    let s2 = p.mp(a2, s);
    p.mp(s2, f)
}

/// From `imp: X -> Q` and `nq: not Q` derive `not X`.
pub(crate) fn modus_tollens(p: &mut Prover, imp: StepRef, nq: StepRef) -> StepRef {
    let (x, q) = imp_parts(p, imp);
    let nqf = p.formula(nq).clone();
    debug_assert_eq!(nqf, Formula::not(q.clone()));
    let a1 = p.axiom(1, &[("P", &nqf), ("Q", &x)]);
    let s = p.mp(a1, nq);
    let a9 = p.axiom(9, &[("P", &x), ("Q", &q)]);
    let s2 = p.mp(a9, imp);
    p.mp(s2, s)
}

/// From `x: P -> T` and `y: Q -> T` derive `(P or Q) -> T`.
pub(crate) fn case_or(p: &mut Prover, x: StepRef, y: StepRef) -> StepRef {
    let (pf, t) = imp_parts(p, x);
    let (qf, t2) = imp_parts(p, y);
    debug_assert_eq!(t, t2, "case_or: consequents differ");
    let a8 = p.axiom(8, &[("P", &pf), ("Q", &qf), ("R", &t)]);
    let s = p.mp(a8, x);
    p.mp(s, y)
}

/// From `nor: not (X or Y)` derive `(not X, not Y)`.
pub(crate) fn neg_parts(p: &mut Prover, nor: StepRef) -> (StepRef, StepRef) {
    let (x, y) = match p.formula(nor).kind() {
        FKind::Not(inner) => match inner.kind() {
            FKind::Or(x, y) => (x.clone(), y.clone()),
            _ => panic!("neg_parts on non-disjunction"),
        },
        _ => panic!("neg_parts on non-negation"),
    };
    let a6 = p.axiom(6, &[("P", &x), ("Q", &y)]);
    let nx = modus_tollens(p, a6, nor);
    let a7 = p.axiom(7, &[("P", &x), ("Q", &y)]);
    let ny = modus_tollens(p, a7, nor);
    (nx, ny)
}

/// Scoped case analysis on a disjunction step: `branch` is invoked with arm
/// 0 (left disjunct hypothesis) and arm 1 (right), must return a step with
/// the same formula both times, and that formula is derived outright.
pub(crate) fn by_cases<F>(p: &mut Prover, disj: StepRef, mut branch: F) -> StepRef
where
    F: FnMut(&mut Prover, usize, StepRef) -> StepRef,
{
    let (l, r) = match p.formula(disj).kind() {
        FKind::Or(l, r) => (l.clone(), r.clone()),
        _ => panic!("by_cases on non-disjunction"),
    };
    let hl = p.begin_scope(l);
    let sl = branch(p, 0, hl);
    let il = p.end_scope(sl);
    let hr = p.begin_scope(r);
    let sr = branch(p, 1, hr);
    let ir = p.end_scope(sr);
    p.case_split(il, ir, disj)
}

/// Break a proven conjunction into its leaf conjuncts, keyed by formula.
fn split_conjunction(p: &mut Prover, step: StepRef, out: &mut HashMap<Formula, StepRef>) {
    let is_and = matches!(p.formula(step).kind(), FKind::And(..));
    if is_and {
        let l = p.and_elim_l(step);
        let r = p.and_elim_r(step);
        split_conjunction(p, l, out);
        split_conjunction(p, r, out);
    } else {
        out.insert(p.formula(step).clone(), step);
    }
}

/// Rebuild a target conjunction from proven leaves.
fn prove_conjunction(
    p: &mut Prover,
    target: &Formula,
    leaves: &HashMap<Formula, StepRef>,
) -> StepRef {
    if let Some(&s) = leaves.get(target) {
        return s;
    }
    match target.kind() {
        FKind::And(a, b) => {
            let (a, b) = (a.clone(), b.clone());
            let x = prove_conjunction(p, &a, leaves);
            let y = prove_conjunction(p, &b, leaves);
            p.and_intro(x, y)
        }
        _ => panic!("missing leaf for conjunct {target:?}"),
    }
}

// --- suffix-chain abbreviation of a level's DNF -------------------------------

/// Extension atoms `e_s<k>_<t>` abbreviating the suffixes of the level's
/// right-nested disjunction: `s_t <-> D_t or s_(t+1)`, with the last body
/// `D_(m-1) or D_m`. Keeps every line of the case analysis constant-size.
struct ChainDefs {
    s_vars: Vec<Formula>,
    /// The right disjunct of each body: `s_(t+1)` or, last, `D_m`.
    nexts: Vec<Formula>,
    defs: Vec<StepRef>,
}

struct Chain {
    /// `s_t -> (D_t or next_t)` per position.
    fwd: Vec<StepRef>,
    /// `D_t -> s_0` per disjunct: injection into the abbreviated DNF.
    inj: Vec<StepRef>,
}

fn emit_chain_defs(
    p: &mut Prover,
    lvl: &Level,
    k: usize,
    ext_atoms: &mut Vec<Atom>,
) -> ChainDefs {
    let m = lvl.disjuncts.len();
    let atoms: Vec<Atom> = (0..m - 1).map(|t| suffix_atom(k, t)).collect();
    let s_vars: Vec<Formula> = atoms.iter().map(|a| Formula::var(a.clone())).collect();
    let nexts: Vec<Formula> = (0..m - 1)
        .map(|t| {
            if t == m - 2 {
                lvl.disjuncts[m - 1].clone()
            } else {
                s_vars[t + 1].clone()
            }
        })
        .collect();
    // Emit in dependency order: each body mentions the next suffix atom,
    // which must already be defined for the freshness check.
    let mut defs = vec![None; m - 1];
    for t in (0..m - 1).rev() {
        let body = Formula::or(lvl.disjuncts[t].clone(), nexts[t].clone());
        defs[t] = Some(p.ext(atoms[t].clone(), body));
        ext_atoms.push(atoms[t].clone());
    }
    ChainDefs {
        s_vars,
        nexts,
        defs: defs.into_iter().map(|d| d.unwrap()).collect(),
    }
}

fn build_chain(p: &mut Prover, lvl: &Level, cd: ChainDefs) -> Chain {
    let m = lvl.disjuncts.len();
    let fwd: Vec<StepRef> = cd.defs.iter().map(|&d| p.and_elim_l(d)).collect();
    let bwd: Vec<StepRef> = cd.defs.iter().map(|&d| p.and_elim_r(d)).collect();
    // Upward ladder r_t : next-part at t -> s_0, giving cheap injections.
    let mut inj = Vec::with_capacity(m);
    let mut r = p.identity(&cd.s_vars[0]);
    for t in 0..m - 1 {
        let mid = compose_imp(p, bwd[t], r); // (D_t or next_t) -> s_0
        let a6 = p.axiom(6, &[("P", &lvl.disjuncts[t]), ("Q", &cd.nexts[t])]);
        inj.push(compose_imp(p, a6, mid));
        let a7 = p.axiom(7, &[("P", &lvl.disjuncts[t]), ("Q", &cd.nexts[t])]);
        r = compose_imp(p, a7, mid);
    }
    // After the loop r proves D_m -> s_0: the last body's right disjunct.
    inj.push(r);
    Chain { fwd, inj }
}

/// From per-disjunct implications `c_t : D_t -> TGT` derive `s_0 -> TGT`.
fn fold_chain(p: &mut Prover, chain: &Chain, cases: &[StepRef]) -> StepRef {
    let m = cases.len();
    let mut acc = cases[m - 1];
    for t in (0..m - 1).rev() {
        let oc = case_or(p, cases[t], acc);
        acc = compose_imp(p, chain.fwd[t], oc);
    }
    acc
}

/// Re-expand the abbreviation: `s_0 -> G` where `G` is the level's real
/// right-nested DNF. This is the one quadratic-size part of the proof:
/// every suffix of `G` must appear on its own line.
fn expand_chain(p: &mut Prover, lvl: &Level, chain: &Chain) -> StepRef {
    let m = lvl.disjuncts.len();
    let mut suffixes = vec![Formula::constant(false); m];
    suffixes[m - 1] = lvl.disjuncts[m - 1].clone();
    for t in (0..m - 1).rev() {
        suffixes[t] = Formula::or(lvl.disjuncts[t].clone(), suffixes[t + 1].clone());
    }
    // The last body is already the real suffix.
    let mut u = chain.fwd[m - 2];
    for t in (0..m - 2).rev() {
        let a6 = p.axiom(6, &[("P", &lvl.disjuncts[t]), ("Q", &suffixes[t + 1])]);
        let a7 = p.axiom(7, &[("P", &lvl.disjuncts[t]), ("Q", &suffixes[t + 1])]);
        let e2s = compose_imp(p, u, a7); // s_(t+1) -> suffix_t
        let oc = case_or(p, a6, e2s); // (D_t or s_(t+1)) -> suffix_t
        u = compose_imp(p, chain.fwd[t], oc);
    }
    u
}

/// Direct injections `D_t -> G` into a level's real DNF, for the small
/// instances proven without suffix abbreviation.
fn real_injections(p: &mut Prover, lvl: &Level) -> Vec<StepRef> {
    let m = lvl.disjuncts.len();
    let mut suffixes = vec![Formula::constant(false); m];
    suffixes[m - 1] = lvl.disjuncts[m - 1].clone();
    for t in (0..m - 1).rev() {
        suffixes[t] = Formula::or(lvl.disjuncts[t].clone(), suffixes[t + 1].clone());
    }
    let mut inj = Vec::with_capacity(m);
    let mut w = p.identity(&suffixes[0]); // suffix_0 -> G
    for t in 0..m {
        if t == m - 1 {
            inj.push(w);
        } else {
            let a6 = p.axiom(6, &[("P", &lvl.disjuncts[t]), ("Q", &suffixes[t + 1])]);
            inj.push(compose_imp(p, a6, w));
            let a7 = p.axiom(7, &[("P", &lvl.disjuncts[t]), ("Q", &suffixes[t + 1])]);
            w = compose_imp(p, a7, w);
        }
    }
    inj
}

// --- the induction step -------------------------------------------------------

/// Forward/backward halves of each grid definition at a level:
/// `q_(i,j) <-> b_(i,j) or (b_(i,K) and b_(K+1,j))` over the level above.
struct GridOps {
    fwd: Vec<Vec<StepRef>>,
    bwd: Vec<Vec<StepRef>>,
}

fn emit_grid_defs(
    p: &mut Prover,
    n: usize,
    lower: &Level,
    upper: &Level,
    ext_atoms: &mut Vec<Atom>,
) -> Vec<Vec<StepRef>> {
    let kk = lower.pigeons;
    let mut defs = Vec::with_capacity(kk);
    for i in 1..=kk {
        let mut row = Vec::with_capacity(lower.holes);
        for j in 1..=lower.holes {
            let atom = grid_atom(n, kk, i, j);
            debug_assert_eq!(&atom, lower.atom(i, j));
            let body = Formula::or(
                upper.var(i, j),
                Formula::and(upper.var(i, kk), upper.var(kk + 1, j)),
            );
            row.push(p.ext(atom.clone(), body));
            ext_atoms.push(atom);
        }
        defs.push(row);
    }
    defs
}

fn grid_ops(p: &mut Prover, defs: &[Vec<StepRef>]) -> GridOps {
    let fwd = defs
        .iter()
        .map(|row| row.iter().map(|&d| p.and_elim_l(d)).collect())
        .collect();
    let bwd = defs
        .iter()
        .map(|row| row.iter().map(|&d| p.and_elim_r(d)).collect())
        .collect();
    GridOps { fwd, bwd }
}

type Inject<'a> = dyn FnMut(&mut Prover, usize, StepRef) -> StepRef + 'a;

/// For every clause of the lower level, derive `D_t -> TGT` where `TGT` is
/// whatever the injector produces from a violated upper-level clause: a
/// falsified lower instance forces a falsified upper instance.
fn descend_cases(
    p: &mut Prover,
    lower: &Level,
    upper: &Level,
    grid: &GridOps,
    inject: &mut Inject,
) -> Vec<StepRef> {
    let kk = lower.pigeons;
    // Pre-prove the needed excluded-middle lemmas outside any scope so the
    // in-scope uses are memo hits.
    for i in 1..=kk + 1 {
        p.excluded_middle(&upper.var(i, kk));
    }
    let mut cases = Vec::with_capacity(lower.kinds.len());
    for t in 0..lower.kinds.len() {
        let hyp = p.begin_scope(lower.disjuncts[t].clone());
        let result = match lower.kinds[t] {
            ClauseKind::Pigeon(i) => pigeon_case(p, lower, upper, grid, inject, i, hyp),
            ClauseKind::Hole { i1, i2, j } => {
                let pick = move |a1: usize, a2: usize| match (a1, a2) {
                    (0, 0) => ClauseKind::Hole { i1, i2, j },
                    (0, 1) => ClauseKind::Hole { i1, i2: kk + 1, j },
                    (1, 0) => ClauseKind::Hole { i1: i2, i2: kk + 1, j },
                    _ => ClauseKind::Hole { i1, i2, j: kk },
                };
                binary_case(p, lower, upper, grid, inject, (i1, j), (i2, j), &pick, hyp)
            }
            ClauseKind::Func { i, j1, j2 } => {
                let pick = move |a1: usize, a2: usize| match (a1, a2) {
                    (0, 0) => ClauseKind::Func { i, j1, j2 },
                    (0, 1) => ClauseKind::Func { i, j1, j2: kk },
                    (1, 0) => ClauseKind::Func { i, j1: j2, j2: kk },
                    _ => ClauseKind::Func { i: kk + 1, j1, j2 },
                };
                binary_case(p, lower, upper, grid, inject, (i, j1), (i, j2), &pick, hyp)
            }
        };
        cases.push(p.end_scope(result));
    }
    cases
}

/// Violated lower pigeon clause: pigeon `i` maps nowhere at the lower
/// level. Case on where it sits above the two spare cells.
fn pigeon_case(
    p: &mut Prover,
    lower: &Level,
    upper: &Level,
    grid: &GridOps,
    inject: &mut Inject,
    i: usize,
    hyp: StepRef,
) -> StepRef {
    let kk = lower.pigeons;
    let mut leaves = HashMap::new();
    split_conjunction(p, hyp, &mut leaves);
    let mut not_direct = Vec::with_capacity(lower.holes); // not b_(i,j)
    let mut not_pair = Vec::with_capacity(lower.holes); // not (b_(i,kk) and b_(kk+1,j))
    for j in 1..=lower.holes {
        let key = Formula::not(lower.var(i, j));
        let nq = *leaves.get(&key).expect("pigeon disjunct conjunct");
        let nbody = modus_tollens(p, grid.bwd[i - 1][j - 1], nq);
        let (nb, np) = neg_parts(p, nbody);
        not_direct.push(nb);
        not_pair.push(np);
    }
    let em = p.excluded_middle(&upper.var(i, kk));
    by_cases(p, em, |p, arm, hb| {
        if arm == 1 {
            // Pigeon i also misses the spare hole: upper pigeon clause.
            let w = upper.index[&ClauseKind::Pigeon(i)];
            let mut lv = HashMap::new();
            for &s in &not_direct {
                lv.insert(p.formula(s).clone(), s);
            }
            lv.insert(p.formula(hb).clone(), hb);
            let target = upper.disjuncts[w].clone();
            let d = prove_conjunction(p, &target, &lv);
            inject(p, w, d)
        } else {
            // Pigeon i sits in the spare hole, so the displaced pigeon
            // kk+1 is shut out of every non-spare hole.
            let mut lv = HashMap::new();
            for j in 1..=lower.holes {
                let spare = upper.var(i, kk);
                let moved = upper.var(kk + 1, j);
                let a5 = p.axiom(5, &[("P", &spare), ("Q", &moved)]);
                let s = p.mp(a5, hb);
                let nb = modus_tollens(p, s, not_pair[j - 1]);
                lv.insert(p.formula(nb).clone(), nb);
            }
            let em2 = p.excluded_middle(&upper.var(kk + 1, kk));
            by_cases(p, em2, |p, arm2, hb2| {
                if arm2 == 1 {
                    let w = upper.index[&ClauseKind::Pigeon(kk + 1)];
                    let mut lv2 = lv.clone();
                    lv2.insert(p.formula(hb2).clone(), hb2);
                    let target = upper.disjuncts[w].clone();
                    let d = prove_conjunction(p, &target, &lv2);
                    inject(p, w, d)
                } else {
                    // Both i and kk+1 sit in the spare hole.
                    let w = upper.index[&ClauseKind::Hole {
                        i1: i,
                        i2: kk + 1,
                        j: kk,
                    }];
                    let mut lv2 = HashMap::new();
                    lv2.insert(p.formula(hb).clone(), hb);
                    lv2.insert(p.formula(hb2).clone(), hb2);
                    let target = upper.disjuncts[w].clone();
                    let d = prove_conjunction(p, &target, &lv2);
                    inject(p, w, d)
                }
            })
        }
    })
}

/// Violated binary lower clause (hole or functionality): both defined
/// atoms hold; unfolding each definition gives four upper-level cases,
/// every one violating the upper clause chosen by `pick`.
#[allow(clippy::too_many_arguments)]
fn binary_case(
    p: &mut Prover,
    lower: &Level,
    upper: &Level,
    grid: &GridOps,
    inject: &mut Inject,
    qa: (usize, usize),
    qb: (usize, usize),
    pick: &dyn Fn(usize, usize) -> ClauseKind,
    hyp: StepRef,
) -> StepRef {
    let mut top = HashMap::new();
    split_conjunction(p, hyp, &mut top);
    let sa = *top.get(&lower.var(qa.0, qa.1)).expect("first conjunct");
    let sb = *top.get(&lower.var(qb.0, qb.1)).expect("second conjunct");
    let body_a = p.mp(grid.fwd[qa.0 - 1][qa.1 - 1], sa);
    let body_b = p.mp(grid.fwd[qb.0 - 1][qb.1 - 1], sb);
    by_cases(p, body_a, |p, a1, h1| {
        by_cases(p, body_b, |p, a2, h2| {
            let mut lv = HashMap::new();
            split_conjunction(p, h1, &mut lv);
            split_conjunction(p, h2, &mut lv);
            let w = upper.index[&pick(a1, a2)];
            let target = upper.disjuncts[w].clone();
            let d = prove_conjunction(p, &target, &lv);
            inject(p, w, d)
        })
    })
}

/// The base case: PHP_2 over the level's two atoms, by excluded middle on
/// each. Each arm lands exactly on one of the three disjuncts.
fn base_analysis(p: &mut Prover, lvl: &Level, inject: &mut Inject) -> StepRef {
    debug_assert_eq!(lvl.pigeons, 2);
    let a1 = lvl.var(1, 1);
    let a2 = lvl.var(2, 1);
    p.excluded_middle(&a2);
    let em1 = p.excluded_middle(&a1);
    by_cases(p, em1, |p, arm, h1| {
        if arm == 1 {
            inject(p, 0, h1)
        } else {
            let em2 = p.excluded_middle(&a2);
            by_cases(p, em2, |p, arm2, h2| {
                if arm2 == 1 {
                    inject(p, 1, h2)
                } else {
                    let mut lv = HashMap::new();
                    lv.insert(p.formula(h1).clone(), h1);
                    lv.insert(p.formula(h2).clone(), h2);
                    let target = lvl.disjuncts[2].clone();
                    let d = prove_conjunction(p, &target, &lv);
                    inject(p, 2, d)
                }
            })
        }
    })
}

// --- top-level construction ---------------------------------------------------

/// Build an EF proof of the PHP_n DNF tautology (n pigeons, n-1 holes,
/// functionality clauses per flag). n = 2 is a direct derivation with no
/// extension lines; n = 3 uses exactly the two grid definitions; larger n
/// additionally abbreviate each level's disjunction with suffix atoms so
/// the case analyses stay polynomial.
pub fn build_ef_proof_php(
    n: usize,
    functionality: bool,
) -> Result<PhpProofArtifacts, PhpProveError> {
    if n < 2 {
        return Err(PhpProveError::Param(n));
    }
    let mut p = Prover::new(Variant::EF);
    let mut ext_atoms: Vec<Atom> = Vec::new();

    // Atom grids per level: real atoms at level n, extension atoms below.
    let levels: Vec<Level> = (2..=n)
        .map(|k| {
            let holes = if k == 2 && n == 2 { 1 } else { k - 1 };
            let atoms: Vec<Vec<Atom>> = (1..=k)
                .map(|i| {
                    (1..=holes)
                        .map(|j| {
                            if k == n {
                                php_atom(i, j)
                            } else {
                                grid_atom(n, k, i, j)
                            }
                        })
                        .collect()
                })
                .collect();
            Level::new(atoms, functionality)
        })
        .collect();
    let lvl = |k: usize| &levels[k - 2];

    if n == 2 {
        let inj = real_injections(&mut p, lvl(2));
        base_analysis(&mut p, lvl(2), &mut |p, w, d| p.mp(inj[w], d));
    } else if n == 3 {
        // Small enough to re-expand directly; keeps the extension count at
        // exactly the two grid definitions.
        let defs = emit_grid_defs(&mut p, n, lvl(2), lvl(3), &mut ext_atoms);
        let grid = grid_ops(&mut p, &defs);
        let inj = real_injections(&mut p, lvl(3));
        let cases = descend_cases(&mut p, lvl(2), lvl(3), &grid, &mut |p, w, d| {
            p.mp(inj[w], d)
        });
        base_analysis(&mut p, lvl(2), &mut |p, w, d| p.mp(cases[w], d));
    } else {
        // All extension definitions first: grids top-down (each level's
        // bodies mention the level above), then each level's suffix chain.
        let grid_defs: Vec<Vec<Vec<StepRef>>> = (2..n)
            .rev()
            .map(|k| emit_grid_defs(&mut p, n, lvl(k), lvl(k + 1), &mut ext_atoms))
            .collect();
        let chain_defs: Vec<ChainDefs> = (2..=n)
            .map(|k| emit_chain_defs(&mut p, lvl(k), k, &mut ext_atoms))
            .collect();

        let grids: Vec<GridOps> = grid_defs.iter().rev().map(|d| grid_ops(&mut p, d)).collect();
        let chains: Vec<Chain> = chain_defs
            .into_iter()
            .enumerate()
            .map(|(idx, cd)| build_chain(&mut p, lvl(idx + 2), cd))
            .collect();
        let chain = |k: usize| &chains[k - 2];

        let mut cur = {
            let inj = &chain(2).inj;
            base_analysis(&mut p, lvl(2), &mut |p, w, d| p.mp(inj[w], d))
        };
        for k in 2..n {
            let cases = {
                let inj = &chain(k + 1).inj;
                descend_cases(&mut p, lvl(k), lvl(k + 1), &grids[k - 2], &mut |p, w, d| {
                    p.mp(inj[w], d)
                })
            };
            let step = fold_chain(&mut p, chain(k), &cases);
            cur = p.mp(step, cur);
        }
        let expand = expand_chain(&mut p, lvl(n), chain(n));
        p.mp(expand, cur);
    }

    let proof = p.finish();
    let steps = proof.steps();
    let symbols = proof.symbols();
    debug_assert_eq!(proof.conclusion(), Some(&lvl(n).dnf()));
    Ok(PhpProofArtifacts {
        n,
        proof,
        extension_atoms: ext_atoms,
        steps,
        symbols,
    })
}

/// Count the EXT lines of a proof.
pub fn ext_line_count(proof: &HilbertProof) -> usize {
    proof
        .lines
        .iter()
        .filter(|l| matches!(l.just, HilbertJust::Ext { .. }))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculi::check_frege_family;
    use crate::formula::{brute_force_classify, Classification};
    use crate::gen::{gen_php_dnf, PhpParams};

    fn checked(n: usize, functionality: bool) -> PhpProofArtifacts {
        let art = build_ef_proof_php(n, functionality).unwrap();
        let report = check_frege_family(&art.proof);
        assert!(
            report.accepted(),
            "n={n} functionality={functionality}: {:?}",
            report.verdict
        );
        let expected = gen_php_dnf(PhpParams::standard(n, functionality).unwrap());
        assert_eq!(report.conclusion_formula().unwrap(), &expected);
        art
    }

    #[test]
    fn n2_is_direct_frege() {
        for functionality in [false, true] {
            let art = checked(2, functionality);
            assert_eq!(ext_line_count(&art.proof), 0);
            assert!(art.extension_atoms.is_empty());
        }
    }

    #[test]
    fn n3_uses_exactly_two_extensions() {
        let art = checked(3, false);
        assert_eq!(ext_line_count(&art.proof), 2);
        assert_eq!(art.extension_atoms.len(), 2);
        let names: Vec<&str> = art.extension_atoms.iter().map(|a| a.name()).collect();
        assert_eq!(names, ["e_q_1_1", "e_q_2_1"]);
    }

    #[test]
    fn extension_atoms_reserved_and_absent_from_conclusion() {
        for n in [3, 4, 5] {
            let art = checked(n, false);
            let conclusion_atoms = art.proof.conclusion().unwrap().atoms();
            for atom in &art.extension_atoms {
                assert!(atom.is_extension(), "{} lacks the e_ prefix", atom.name());
                assert!(!conclusion_atoms.contains(atom));
            }
        }
    }

    #[test]
    fn small_conclusions_are_tautologies() {
        for n in 2..=4 {
            let art = checked(n, false);
            assert_eq!(
                brute_force_classify(art.proof.conclusion().unwrap()).unwrap(),
                Classification::Tautology
            );
        }
    }

    #[test]
    fn functionality_variant_builds() {
        checked(3, true);
        checked(4, true);
    }

    #[test]
    fn sweep_accepts_and_symbols_grow() {
        let mut prev = 0;
        for n in 4..=7 {
            let art = checked(n, false);
            assert!(
                art.symbols > prev,
                "symbols not monotone at n={n}: {} <= {prev}",
                art.symbols
            );
            prev = art.symbols;
        }
    }

    #[test]
    fn small_n_rejected() {
        assert!(matches!(
            build_ef_proof_php(0, false),
            Err(PhpProveError::Param(0))
        ));
        assert!(matches!(
            build_ef_proof_php(1, true),
            Err(PhpProveError::Param(1))
        ));
    }

    #[test]
    fn mutated_conclusion_rejects() {
        let mut art = build_ef_proof_php(3, false).unwrap();
        let last = art.proof.lines.last_mut().unwrap();
        last.formula = Formula::or(last.formula.clone(), Formula::constant(false));
        assert!(!check_frege_family(&art.proof).accepted());
    }

    #[test]
    fn stats_line_format() {
        let art = build_ef_proof_php(3, false).unwrap();
        assert_eq!(
            art.stats_line(),
            format!(
                "n=3 steps={} symbols={} ext_atoms=2",
                art.steps, art.symbols
            )
        );
    }
}

#[cfg(test)]
mod slope_probe {
    use super::*;

    #[test]
    #[ignore]
    fn print_growth() {
        let mut pts = Vec::new();
        for n in 2..=12 {
            let t = std::time::Instant::now();
            let art = build_ef_proof_php(n, false).unwrap();
            let ok = crate::calculi::check_frege_family(&art.proof).accepted();
            println!(
                "{} check={} steps={} symbols={} ext={} ms={}",
                n,
                ok,
                art.steps,
                art.symbols,
                art.extension_atoms.len(),
                t.elapsed().as_millis()
            );
            if n >= 4 {
                pts.push(((n as f64).ln(), (art.symbols as f64).ln()));
            }
        }
        let k = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
        println!("least-squares log-log slope n=4..12: {slope:.3}");
    }
}
