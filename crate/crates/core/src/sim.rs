//! Polynomial simulations between the calculi: Frege proofs reinterpreted
//! under the extended variant, extended resolution refutations replayed as
//! extended Frege derivations of the matching negation DNF, extended Frege
//! derivations clausified back into extended resolution, and extension
//! axioms eliminated in favour of substitutions. Every translation checks
//! its source, preserves the conclusion exactly, and reports source and
//! target symbol counts for slope measurements.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::calculi::{
    check_extended_resolution, check_frege_family, extension_clauses, scheme_formula, CalculusId,
    HilbertJust, HilbertProof, RejectReason, ResolutionJust, ResolutionLine, ResolutionProof,
    ResolutionSystem, Variant, Verdict,
};
use crate::cnf::{Clause, CnfFormula, Literal};
use crate::formula::{Atom, FKind, Formula, Substitution};
use crate::frege::{Prover, StepRef};
use crate::php::{by_cases, case_or, compose_imp, modus_tollens, neg_parts};
use crate::refute::{refute_under, Derivation, DerivJust};

/// Budget for the small definitional refutations used when clausifying;
/// each is unit-propagation sized, so this is never reached on valid input.
const LOCAL_REFUTE_BUDGET: usize = 200_000;

/// CNF header path recorded in refutations produced by translation.
const TRANSLATED_CNF_PATH: &str = "conclusion.cnf";

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("no simulation from {0} into {1}")]
    UnsupportedPair(&'static str, &'static str),
    #[error("source proof rejected at line {line}: {reason}")]
    SourceInvalid { line: u64, reason: RejectReason },
    #[error("payload does not match the {0} source calculus")]
    PayloadMismatch(&'static str),
    #[error("conclusion is not the negation DNF of a plain CNF")]
    ConclusionShape,
    #[error("empty simulation corpus")]
    EmptyCorpus,
}

/// A source proof together with what it needs to be checked: refutations
/// carry their input CNF, Hilbert-style derivations are self-contained.
#[derive(Debug, Clone, PartialEq)]
pub enum ProofPayload {
    Refutation(ResolutionProof, CnfFormula),
    Derivation(HilbertProof),
}

impl ProofPayload {
    pub fn symbols(&self) -> u64 {
        match self {
            ProofPayload::Refutation(p, _) => p.symbols(),
            ProofPayload::Derivation(p) => p.symbols(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TranslationResult {
    pub source: CalculusId,
    pub target: CalculusId,
    pub proof: ProofPayload,
    pub source_symbols: u64,
    pub target_symbols: u64,
    /// What both proofs establish: for refutations of a CNF, the negation
    /// DNF of that CNF.
    pub conclusion: Formula,
}

impl TranslationResult {
    /// One-line sidecar recording the size change.
    pub fn sidecar(&self) -> String {
        format!(
            "source_symbols={} target_symbols={}",
            self.source_symbols, self.target_symbols
        )
    }
}

/// Translate a checked source proof into the target calculus. Supported
/// pairs: F into EF, ER into EF, EF into ER, EF into SF.
pub fn translate(
    source: CalculusId,
    target: CalculusId,
    payload: &ProofPayload,
) -> Result<TranslationResult, SimError> {
    match (source, target) {
        (CalculusId::F, CalculusId::Ef) => f_to_ef(payload),
        (CalculusId::Er, CalculusId::Ef) => er_to_ef(payload),
        (CalculusId::Ef, CalculusId::Er) => ef_to_er(payload),
        (CalculusId::Ef, CalculusId::Sf) => ef_to_sf(payload),
        _ => Err(SimError::UnsupportedPair(source.name(), target.name())),
    }
}

// --- source validation --------------------------------------------------------

fn hilbert_source<'a>(
    payload: &'a ProofPayload,
    variant: Variant,
) -> Result<&'a HilbertProof, SimError> {
    match payload {
        ProofPayload::Derivation(proof) if proof.variant == variant => {
            match check_frege_family(proof).verdict {
                Verdict::Accept => Ok(proof),
                Verdict::Reject { line, reason } => Err(SimError::SourceInvalid { line, reason }),
            }
        }
        _ => Err(SimError::PayloadMismatch(variant.name())),
    }
}

fn refutation_source(
    payload: &ProofPayload,
) -> Result<(&ResolutionProof, &CnfFormula), SimError> {
    match payload {
        // Plain resolution refutations are ER refutations without
        // extensions, so the ER source check covers both headers.
        ProofPayload::Refutation(proof, cnf) => {
            match check_extended_resolution(proof, cnf).verdict {
                Verdict::Accept => Ok((proof, cnf)),
                Verdict::Reject { line, reason } => Err(SimError::SourceInvalid { line, reason }),
            }
        }
        _ => Err(SimError::PayloadMismatch("ER")),
    }
}

// --- F into EF ----------------------------------------------------------------

/// F proofs are EF proofs verbatim; only the declared variant changes.
fn f_to_ef(payload: &ProofPayload) -> Result<TranslationResult, SimError> {
    let source = hilbert_source(payload, Variant::F)?;
    let mut proof = source.clone();
    proof.variant = Variant::EF;
    let conclusion = proof
        .conclusion()
        .expect("accepted proof is nonempty")
        .clone();
    Ok(TranslationResult {
        source: CalculusId::F,
        target: CalculusId::Ef,
        source_symbols: source.symbols(),
        target_symbols: proof.symbols(),
        conclusion,
        proof: ProofPayload::Derivation(proof),
    })
}

// --- shared implication builders ------------------------------------------------

/// `lit -> target`, where the literal occurs as a disjunct of the
/// right-nested clause formula `target`.
fn lit_implies_clause(p: &mut Prover, lit: &Literal, target: &Formula) -> StepRef {
    let f = lit.to_formula();
    if *target == f {
        return p.identity(&f);
    }
    match target.kind() {
        FKind::Or(a, b) => {
            if *a == f {
                p.axiom(6, &[("P", a), ("Q", b)])
            } else {
                let tail = lit_implies_clause(p, lit, b);
                let outer = p.axiom(7, &[("P", a), ("Q", b)]);
                compose_imp(p, tail, outer)
            }
        }
        _ => panic!("literal not a disjunct of the target clause"),
    }
}

/// `clause formula -> target`, literal by literal.
fn clause_implies(p: &mut Prover, clause: &Clause, target: &Formula) -> StepRef {
    let mut imps: Vec<StepRef> = clause
        .literals()
        .iter()
        .map(|l| lit_implies_clause(p, l, target))
        .collect();
    let mut acc = imps.pop().expect("nonempty clause");
    while let Some(imp) = imps.pop() {
        acc = case_or(p, imp, acc);
    }
    acc
}

// --- ER into EF ----------------------------------------------------------------

/// The three defining clause formulas of an extension marker, derived
/// outright from the extension axiom step `ext: q <-> (l1 or l2)`.
fn derive_marker_defs(
    p: &mut Prover,
    ext: StepRef,
    atom: &Atom,
    l1: &Literal,
    l2: &Literal,
) -> Vec<(Clause, StepRef)> {
    let fwd = p.and_elim_l(ext); // q -> (f1 or f2)
    let bwd = p.and_elim_r(ext); // (f1 or f2) -> q
    let defs = extension_clauses(atom, l1, l2);
    let qlit = Literal::pos(atom.clone());

    // {-q, l1, l2}: under q the definition unfolds, under -q inject.
    let t0 = defs[0].to_formula();
    let em_q = p.excluded_middle(&Formula::var(atom.clone()));
    let i1 = lit_implies_clause(p, l1, &t0);
    let i2 = lit_implies_clause(p, l2, &t0);
    let unfold = case_or(p, i1, i2);
    let pos_arm = compose_imp(p, fwd, unfold);
    let neg_arm = lit_implies_clause(p, &qlit.negated(), &t0);
    let both = case_or(p, pos_arm, neg_arm);
    let s0 = p.mp(both, em_q);

    // {q, -l}: under l the definition folds back to q, under -l inject.
    let one = |p: &mut Prover, lit: &Literal, other: &Literal, left: bool, clause: &Clause| {
        let t = clause.to_formula();
        let f = lit.to_formula();
        let em = p.excluded_middle(&f);
        let to_def = if left {
            p.axiom(6, &[("P", &f), ("Q", &other.to_formula())])
        } else {
            p.axiom(7, &[("P", &other.to_formula()), ("Q", &f)])
        };
        let to_q = compose_imp(p, to_def, bwd);
        let q_in = lit_implies_clause(p, &qlit, &t);
        let pos_arm = compose_imp(p, to_q, q_in);
        let neg_arm = if lit.positive {
            lit_implies_clause(p, &lit.negated(), &t)
        } else {
            // `not f` is a double negation of the complement atom.
            let inner = Formula::var(lit.atom.clone());
            let a10 = p.axiom(10, &[("P", &inner)]);
            let inj = lit_implies_clause(p, &lit.negated(), &t);
            compose_imp(p, a10, inj)
        };
        let both = case_or(p, pos_arm, neg_arm);
        p.mp(both, em)
    };
    let s1 = one(p, l1, l2, true, &defs[1]);
    let s2 = one(p, l2, l1, false, &defs[2]);

    vec![
        (defs[0].clone(), s0),
        (defs[1].clone(), s1),
        (defs[2].clone(), s2),
    ]
}

/// One resolution step inside the premise scope: from steps proving the two
/// premise clause formulas, derive the resolvent formula.
fn replay_resolve(
    p: &mut Prover,
    lc: &Clause,
    lref: StepRef,
    rc: &Clause,
    rref: StepRef,
    pivot: &Atom,
    resolvent: &Clause,
) -> StepRef {
    let target = resolvent.to_formula();
    let pv = Formula::var(pivot.clone());
    let pos_t = Formula::or(pv.clone(), target.clone());
    let neg_t = Formula::or(Formula::not(pv), target.clone());
    let li = clause_implies(p, lc, &pos_t);
    let ri = clause_implies(p, rc, &neg_t);
    let d1 = p.mp(li, lref); // pivot or target
    let d2 = p.mp(ri, rref); // (not pivot) or target
    by_cases(p, d1, |p, arm, h| {
        if arm == 0 {
            by_cases(p, d2, |p, arm2, h2| {
                if arm2 == 0 {
                    p.from_contradiction(h, h2, &target)
                } else {
                    h2
                }
            })
        } else {
            h
        }
    })
}

/// From `nref: not (clause formula)` derive the clause's negation
/// conjunction, the matching DNF disjunct.
fn demorgan_clause(p: &mut Prover, nref: StepRef, clause: &Clause) -> StepRef {
    fn flip(p: &mut Prover, s: StepRef, lit: &Literal) -> StepRef {
        // `s: not (lit formula)`; negative literals need one double
        // negation elimination to reach the complement.
        if lit.positive {
            s
        } else {
            p.dne(s)
        }
    }
    fn go(p: &mut Prover, nref: StepRef, lits: &[Literal]) -> StepRef {
        match lits {
            [] => p.axiom(11, &[]),
            [l] => flip(p, nref, l),
            [l, rest @ ..] => {
                let (nx, ny) = neg_parts(p, nref);
                let head = flip(p, nx, l);
                let tail = go(p, ny, rest);
                p.and_intro(head, tail)
            }
        }
    }
    go(p, nref, clause.literals())
}

/// Replay an extended resolution refutation of a CNF as an EF derivation of
/// the CNF's negation DNF: extension markers become extension axioms, the
/// clause lines are rederived under the hypothesis that every input clause
/// holds, and the refuted hypothesis yields the DNF disjunct by disjunct.
fn er_to_ef(payload: &ProofPayload) -> Result<TranslationResult, SimError> {
    let (res, cnf) = refutation_source(payload)?;
    let goal = cnf.negation_dnf();
    let clauses = cnf.clauses();
    // A refutation cannot exist without input clauses: extension clauses
    // alone are satisfiable.
    assert!(!clauses.is_empty(), "accepted refutation over no clauses");
    let mut p = Prover::new(Variant::EF);

    // Global pass in line order, so every definition only mentions atoms
    // already in play: extension axioms and their defining clause formulas.
    let mut def_steps: HashMap<u64, Vec<(Clause, StepRef)>> = HashMap::new();
    for line in &res.lines {
        if let ResolutionLine::ExtendMarker { id, atom, l1, l2 } = line {
            let ext = p.ext(atom.clone(), Formula::or(l1.to_formula(), l2.to_formula()));
            def_steps.insert(*id, derive_marker_defs(&mut p, ext, atom, l1, l2));
        }
    }
    for clause in clauses {
        p.excluded_middle(&clause.to_formula());
    }

    // Assume the conjunction of input clauses and replay the refutation.
    let premise = cnf.to_formula();
    let hyp = p.begin_scope(premise.clone());
    let mut input_refs: Vec<StepRef> = Vec::with_capacity(clauses.len());
    let mut cursor = hyp;
    for i in 0..clauses.len() {
        if i + 1 == clauses.len() {
            input_refs.push(cursor);
        } else {
            input_refs.push(p.and_elim_l(cursor));
            cursor = p.and_elim_r(cursor);
        }
    }

    let mut derived: HashMap<u64, (Clause, StepRef)> = HashMap::new();
    let mut last: Option<StepRef> = None;
    for line in &res.lines {
        let (id, clause, just) = match line {
            ResolutionLine::ExtendMarker { .. } => continue,
            ResolutionLine::Clause { id, clause, just } => (id, clause, just),
        };
        let step = match just {
            ResolutionJust::Input(k) => input_refs[k - 1],
            ResolutionJust::ExtendDef(marker) => {
                let defs = def_steps.get_mut(marker).expect("checked marker id");
                let pos = defs
                    .iter()
                    .position(|(c, _)| c == clause)
                    .expect("checked defining clause");
                let (_, global) = defs.remove(pos);
                p.lift(global)
            }
            ResolutionJust::Resolve { left, right, pivot } => {
                let (lc, lref) = derived.get(left).expect("checked premise id").clone();
                let (rc, rref) = derived.get(right).expect("checked premise id").clone();
                let pivot = match pivot {
                    Some(a) => a.clone(),
                    None => lc
                        .literals()
                        .iter()
                        .find(|l| {
                            l.positive
                                && rc.contains(&l.negated())
                                && lc.resolve(&rc, &l.atom) == *clause
                        })
                        .expect("checked resolvent")
                        .atom
                        .clone(),
                };
                replay_resolve(&mut p, &lc, lref, &rc, rref, &pivot, clause)
            }
        };
        derived.insert(*id, (clause.clone(), step));
        last = Some(step);
    }
    let zero = last.expect("accepted refutation is nonempty");
    let refuted = p.end_scope(zero); // premise -> 0
    let not_premise = p.neg_intro(refuted);

    // Suffix conjunctions and disjunctions of the clause list; hs[0] is the
    // premise, gs[0] the goal DNF.
    let m = clauses.len();
    let mut hs: Vec<Formula> = Vec::with_capacity(m);
    let mut gs: Vec<Formula> = Vec::with_capacity(m);
    let mut hacc = clauses[m - 1].to_formula();
    let mut gacc = clauses[m - 1].negation_formula();
    hs.push(hacc.clone());
    gs.push(gacc.clone());
    for t in (0..m - 1).rev() {
        hacc = Formula::and(clauses[t].to_formula(), hacc);
        gacc = Formula::or(clauses[t].negation_formula(), gacc);
        hs.push(hacc.clone());
        gs.push(gacc.clone());
    }
    hs.reverse();
    gs.reverse();
    debug_assert_eq!(hs[0], premise);
    debug_assert_eq!(gs[0], goal);

    // Downward induction: not hs[t] -> gs[t]. If clause t holds, the
    // remaining clauses cannot all hold; otherwise its negation conjunction
    // is the witnessing disjunct.
    let mut suffix: Option<StepRef> = None;
    for t in (0..m).rev() {
        let nh = p.begin_scope(Formula::not(hs[t].clone()));
        let s = if t + 1 == m {
            demorgan_clause(&mut p, nh, &clauses[t])
        } else {
            let cf = clauses[t].to_formula();
            let em = p.excluded_middle(&cf);
            let next = suffix.expect("inner suffix derived first");
            let neg_t = clauses[t].negation_formula();
            let gs_next = gs[t + 1].clone();
            let hs_next = hs[t + 1].clone();
            let ct = clauses[t].clone();
            by_cases(&mut p, em, |p, arm, h| {
                if arm == 0 {
                    let h2 = p.begin_scope(hs_next.clone());
                    let both = p.and_intro(h, h2);
                    let imp = p.end_scope(both); // hs[t+1] -> hs[t]
                    let nh_next = modus_tollens(p, imp, nh);
                    let g_next = p.mp(next, nh_next);
                    p.or_intro_r(&neg_t, g_next)
                } else {
                    let dm = demorgan_clause(p, h, &ct);
                    p.or_intro_l(dm, &gs_next)
                }
            })
        };
        suffix = Some(p.end_scope(s));
    }
    p.mp(suffix.expect("nonempty clause list"), not_premise);

    let proof = p.finish();
    debug_assert_eq!(proof.conclusion(), Some(&goal));
    Ok(TranslationResult {
        source: CalculusId::Er,
        target: CalculusId::Ef,
        source_symbols: res.symbols(),
        target_symbols: proof.symbols(),
        conclusion: goal,
        proof: ProofPayload::Derivation(proof),
    })
}

// --- EF into ER ----------------------------------------------------------------

/// Invert `CnfFormula::negation_dnf`: a right-nested disjunction of
/// right-nested conjunctions of complemented literals over plain atoms.
/// The round trip must reproduce `goal` exactly.
fn dnf_to_cnf(goal: &Formula) -> Option<CnfFormula> {
    let mut disjuncts: Vec<&Formula> = Vec::new();
    let mut cur = goal;
    while let FKind::Or(a, b) = cur.kind() {
        disjuncts.push(a);
        cur = b;
    }
    disjuncts.push(cur);
    let mut clauses = Vec::with_capacity(disjuncts.len());
    for d in disjuncts {
        clauses.push(conjunct_clause(d)?);
    }
    let mut atoms: BTreeSet<Atom> = BTreeSet::new();
    for c in &clauses {
        for l in c.literals() {
            if l.atom.is_extension() {
                return None;
            }
            atoms.insert(l.atom.clone());
        }
    }
    let cnf = CnfFormula::new(atoms, clauses).ok()?;
    if cnf.negation_dnf() == *goal {
        Some(cnf)
    } else {
        None
    }
}

fn conjunct_clause(d: &Formula) -> Option<Clause> {
    if *d == Formula::constant(true) {
        return Some(Clause::empty());
    }
    let mut lits = Vec::new();
    let mut cur = d;
    loop {
        match cur.kind() {
            FKind::And(a, b) => {
                lits.push(complement_to_literal(a)?);
                cur = b;
            }
            _ => {
                lits.push(complement_to_literal(cur)?);
                return Some(Clause::new(lits));
            }
        }
    }
}

fn complement_to_literal(f: &Formula) -> Option<Literal> {
    match f.kind() {
        FKind::Var(a) => Some(Literal::neg(a.clone())),
        FKind::Not(inner) => match inner.kind() {
            FKind::Var(a) => Some(Literal::pos(a.clone())),
            _ => None,
        },
        _ => None,
    }
}

/// The defined formula of an extension axiom `(and (or (not q) d) ...)`.
fn extension_definition(formula: &Formula) -> Formula {
    if let FKind::And(or1, _) = formula.kind() {
        if let FKind::Or(_, d) = or1.kind() {
            return d.clone();
        }
    }
    unreachable!("checked extension axiom has equivalence shape")
}

/// Tseitin-style clausification state for turning EF lines into extended
/// resolution: every subformula gets a defining literal, and each source
/// line contributes a unit clause for its own literal, derived by a small
/// definitional refutation over the relevant marker clauses.
struct Clausify<'a> {
    cnf: &'a CnfFormula,
    /// Atoms with a clause-level meaning: input atoms plus every extension
    /// atom introduced so far (the source's and our markers).
    known: BTreeSet<Atom>,
    lines: Vec<ResolutionLine>,
    next_id: u64,
    /// Memoized defining literal per subformula.
    lit_of: HashMap<Formula, Literal>,
    /// Defining clauses and their line ids, per extension atom.
    defs_of: HashMap<Atom, Vec<(Clause, u64)>>,
    /// Line id of each input clause, in CNF order.
    input_ids: Vec<u64>,
    taken_names: BTreeSet<String>,
    fresh_counter: usize,
    /// A literal forced true by its definition, for constants and for
    /// atoms with no clause-level meaning.
    const_lit: Option<Literal>,
}

impl<'a> Clausify<'a> {
    fn new(cnf: &'a CnfFormula, source: &HilbertProof) -> Clausify<'a> {
        let mut taken: BTreeSet<String> =
            cnf.atoms().iter().map(|a| a.name().to_string()).collect();
        for line in &source.lines {
            for a in line.formula.atoms() {
                taken.insert(a.name().to_string());
            }
        }
        let mut c = Clausify {
            cnf,
            known: cnf.atoms().iter().cloned().collect(),
            lines: Vec::new(),
            next_id: 1,
            lit_of: HashMap::new(),
            defs_of: HashMap::new(),
            input_ids: Vec::new(),
            taken_names: taken,
            fresh_counter: 0,
            const_lit: None,
        };
        for (i, clause) in cnf.clauses().iter().enumerate() {
            let id = c.emit(clause.clone(), ResolutionJust::Input(i + 1));
            c.input_ids.push(id);
        }
        c
    }

    fn emit(&mut self, clause: Clause, just: ResolutionJust) -> u64 {
        let id = self.next_id;
        self.next_id += 1;
        self.lines.push(ResolutionLine::Clause { id, clause, just });
        id
    }

    fn extend(&mut self, atom: Atom, l1: Literal, l2: Literal) {
        let id = self.next_id;
        self.next_id += 1;
        self.lines.push(ResolutionLine::ExtendMarker {
            id,
            atom: atom.clone(),
            l1: l1.clone(),
            l2: l2.clone(),
        });
        let mut defs = Vec::with_capacity(3);
        for clause in extension_clauses(&atom, &l1, &l2) {
            let cid = self.emit(clause.clone(), ResolutionJust::ExtendDef(id));
            defs.push((clause, cid));
        }
        self.known.insert(atom.clone());
        self.defs_of.insert(atom, defs);
    }

    fn fresh(&mut self) -> Atom {
        loop {
            self.fresh_counter += 1;
            let name = format!("e_d{}", self.fresh_counter);
            if self.taken_names.insert(name.clone()) {
                return Atom::new(&name).expect("generated extension name");
            }
        }
    }

    fn const_true(&mut self) -> Literal {
        if let Some(l) = &self.const_lit {
            return l.clone();
        }
        let base = self
            .cnf
            .atoms()
            .first()
            .expect("clauses are nonempty, so atoms exist")
            .clone();
        let t = self.fresh();
        self.extend(t.clone(), Literal::pos(base.clone()), Literal::neg(base));
        let lit = Literal::pos(t);
        self.const_lit = Some(lit.clone());
        lit
    }

    /// Defining literal of a subformula. Negation maps to literal sign, so
    /// only conjunctions, disjunctions and constants introduce extension
    /// atoms. Atoms with no clause-level meaning are fixed to the
    /// constant-true marker: line formulas stay tautologies under their
    /// definitions either way.
    fn lit(&mut self, f: &Formula) -> Literal {
        if let Some(l) = self.lit_of.get(f) {
            return l.clone();
        }
        let lit = match f.kind() {
            FKind::Var(a) => {
                if self.known.contains(a) {
                    Literal::pos(a.clone())
                } else {
                    self.const_true()
                }
            }
            FKind::Const(b) => {
                let t = self.const_true();
                if *b {
                    t
                } else {
                    t.negated()
                }
            }
            FKind::Not(g) => self.lit(g).negated(),
            FKind::Or(a, b) => {
                let (la, lb) = (self.lit(a), self.lit(b));
                let q = self.fresh();
                self.extend(q.clone(), la, lb);
                Literal::pos(q)
            }
            FKind::And(a, b) => {
                // q stands for the negation, so the conjunction is -q.
                let (la, lb) = (self.lit(a), self.lit(b));
                let q = self.fresh();
                self.extend(q.clone(), la.negated(), lb.negated());
                Literal::neg(q)
            }
        };
        self.lit_of.insert(f.clone(), lit.clone());
        lit
    }

    /// Defining clauses of the marker attached to this node, if any.
    fn defs_for(&self, f: &Formula, out: &mut Vec<(Clause, u64)>) {
        if let Some(lit) = self.lit_of.get(f) {
            if let Some(defs) = self.defs_of.get(&lit.atom) {
                out.extend(defs.iter().cloned());
            }
        }
    }

    /// Marker clauses along the scheme skeleton of an axiom instance;
    /// pattern variables are opaque boundaries.
    fn skeleton_defs(&mut self, pattern: &Formula, f: &Formula, out: &mut Vec<(Clause, u64)>) {
        match (pattern.kind(), f.kind()) {
            (FKind::Var(_), _) => {}
            (FKind::Const(_), _) => self.defs_for(f, out),
            (FKind::Not(pp), FKind::Not(ff)) => self.skeleton_defs(pp, ff, out),
            (FKind::And(p1, p2), FKind::And(f1, f2))
            | (FKind::Or(p1, p2), FKind::Or(f1, f2)) => {
                self.defs_for(f, out);
                self.skeleton_defs(p1, f1, out);
                self.skeleton_defs(p2, f2, out);
            }
            _ => unreachable!("accepted axiom instance matches its scheme"),
        }
    }

    /// Marker clauses along a right-nested And chain (`conj`) or Or chain.
    fn chain_defs(&mut self, f: &Formula, conj: bool, out: &mut Vec<(Clause, u64)>) {
        match f.kind() {
            FKind::And(a, b) if conj => {
                self.defs_for(f, out);
                self.chain_defs(a, conj, out);
                self.chain_defs(b, conj, out);
            }
            FKind::Or(a, b) if !conj => {
                self.defs_for(f, out);
                self.chain_defs(a, conj, out);
                self.chain_defs(b, conj, out);
            }
            _ => {}
        }
    }

    /// Derive the unit clause `{target}` from definitional premises; the
    /// premises entail it by construction, with a unit-propagation sized
    /// refutation.
    fn derive_unit(&mut self, target: &Literal, premises: &[(Clause, u64)]) -> u64 {
        let clauses: Vec<Clause> = premises.iter().map(|(c, _)| c.clone()).collect();
        let ids: Vec<u64> = premises.iter().map(|(_, id)| *id).collect();
        let derivation = refute_under(&clauses, &[target.negated()], LOCAL_REFUTE_BUDGET)
            .expect("definitional refutation within budget")
            .expect("definitional premises entail the unit");
        self.splice(&derivation, &ids)
    }

    /// Append a derivation, mapping its premise references onto existing
    /// line ids; returns the id of its conclusion.
    fn splice(&mut self, derivation: &Derivation, premise_ids: &[u64]) -> u64 {
        let mut map: Vec<u64> = Vec::with_capacity(derivation.lines.len());
        for line in &derivation.lines {
            let id = match &line.just {
                DerivJust::Input(k) => premise_ids[*k],
                DerivJust::Resolve { left, right, pivot } => self.emit(
                    line.clause.clone(),
                    ResolutionJust::Resolve {
                        left: map[*left],
                        right: map[*right],
                        pivot: Some(pivot.clone()),
                    },
                ),
            };
            map.push(id);
        }
        *map.last().expect("nonempty derivation")
    }
}

/// Clausify an EF derivation of a negation DNF into an extended resolution
/// refutation of the matching CNF: subformulas get defining extension
/// atoms, each proof line yields a unit clause for its literal, and the
/// goal's unit contradicts the per-clause units recovered from the input.
fn ef_to_er(payload: &ProofPayload) -> Result<TranslationResult, SimError> {
    let source = hilbert_source(payload, Variant::EF)?;
    let goal = source
        .conclusion()
        .expect("accepted proof is nonempty")
        .clone();
    let cnf = dnf_to_cnf(&goal).ok_or(SimError::ConclusionShape)?;

    let proof = if let Some(k) = cnf.clauses().iter().position(|c| c.is_empty()) {
        // A constant-true disjunct means the CNF already contains the
        // empty clause; cite it and stop.
        ResolutionProof {
            system: ResolutionSystem::Er,
            cnf_path: TRANSLATED_CNF_PATH.to_string(),
            lines: vec![ResolutionLine::Clause {
                id: 1,
                clause: Clause::empty(),
                just: ResolutionJust::Input(k + 1),
            }],
        }
    } else {
        let mut cl = Clausify::new(&cnf, source);
        let mut unit_of: HashMap<u64, (Literal, u64)> = HashMap::new();
        for line in &source.lines {
            if let HilbertJust::Ext { atom } = &line.just {
                // Introduce the source's own extension atom before its
                // axiom line is clausified, so it keeps its meaning.
                let body = extension_definition(&line.formula);
                let dl = cl.lit(&body);
                cl.extend(atom.clone(), dl.clone(), dl);
            }
            let target = cl.lit(&line.formula);
            let mut premises: Vec<(Clause, u64)> = Vec::new();
            match &line.just {
                HilbertJust::Ax { scheme, .. } => {
                    let pattern = scheme_formula(*scheme);
                    cl.skeleton_defs(&pattern, &line.formula, &mut premises);
                }
                HilbertJust::Mp {
                    implication,
                    antecedent,
                } => {
                    let (imp_lit, imp_id) = unit_of[implication].clone();
                    let (ante_lit, ante_id) = unit_of[antecedent].clone();
                    // The implication's top disjunction marker relates the
                    // three literals.
                    let imp_formula = source
                        .lines
                        .iter()
                        .find(|l| l.id == *implication)
                        .expect("checked premise id")
                        .formula
                        .clone();
                    cl.defs_for(&imp_formula, &mut premises);
                    premises.push((Clause::new([imp_lit]), imp_id));
                    premises.push((Clause::new([ante_lit]), ante_id));
                }
                HilbertJust::Ext { atom } => {
                    premises.extend(cl.defs_of[atom].iter().cloned());
                    if let FKind::And(or1, or2) = line.formula.kind() {
                        cl.defs_for(&line.formula, &mut premises);
                        cl.defs_for(or1, &mut premises);
                        cl.defs_for(or2, &mut premises);
                    }
                }
                HilbertJust::Sub { .. } => unreachable!("EF proofs have no substitution lines"),
            }
            let id = cl.derive_unit(&target, &premises);
            unit_of.insert(line.id, (target, id));
        }

        // Per input clause: its failure literal, from the clause itself and
        // the disjunct's conjunction markers.
        let mut disjunct_units: Vec<(Literal, u64)> = Vec::new();
        for (t, clause) in cnf.clauses().iter().enumerate() {
            let d = clause.negation_formula();
            let dl = cl.lit(&d);
            let mut premises = vec![(clause.clone(), cl.input_ids[t])];
            cl.chain_defs(&d, true, &mut premises);
            let unit = dl.negated();
            let id = cl.derive_unit(&unit, &premises);
            disjunct_units.push((unit, id));
        }

        // The goal's unit says some disjunct holds; the per-clause units
        // say none does.
        let goal_line = source.lines.last().expect("nonempty proof").id;
        let (goal_lit, goal_id) = unit_of[&goal_line].clone();
        let mut premises: Vec<(Clause, u64)> = Vec::new();
        cl.chain_defs(&goal, false, &mut premises);
        premises.push((Clause::new([goal_lit]), goal_id));
        for (lit, id) in disjunct_units {
            premises.push((Clause::new([lit]), id));
        }
        let clauses: Vec<Clause> = premises.iter().map(|(c, _)| c.clone()).collect();
        let ids: Vec<u64> = premises.iter().map(|(_, id)| *id).collect();
        let derivation = refute_under(&clauses, &[], LOCAL_REFUTE_BUDGET)
            .expect("definitional refutation within budget")
            .expect("goal and disjunct units are contradictory");
        cl.splice(&derivation, &ids);

        ResolutionProof {
            system: ResolutionSystem::Er,
            cnf_path: TRANSLATED_CNF_PATH.to_string(),
            lines: cl.lines,
        }
    };

    debug_assert!(check_extended_resolution(&proof, &cnf).accepted());
    Ok(TranslationResult {
        source: CalculusId::Ef,
        target: CalculusId::Er,
        source_symbols: source.symbols(),
        target_symbols: proof.symbols(),
        conclusion: goal,
        proof: ProofPayload::Refutation(proof, cnf),
    })
}

// --- EF into SF ----------------------------------------------------------------

/// Eliminate extension axioms in favour of substitutions: replay the source
/// under the hypothesis that every extension equivalence holds, then
/// discharge the equivalences innermost first. Substituting the defined
/// formula for its atom turns each hypothesis into `d <-> d`, which is
/// provable outright, and leaves the rest untouched since extension atoms
/// are fresh.
fn ef_to_sf(payload: &ProofPayload) -> Result<TranslationResult, SimError> {
    let source = hilbert_source(payload, Variant::EF)?;
    let goal = source
        .conclusion()
        .expect("accepted proof is nonempty")
        .clone();

    let exts: Vec<(Atom, Formula)> = source
        .lines
        .iter()
        .filter_map(|l| match &l.just {
            HilbertJust::Ext { atom } => {
                Some((atom.clone(), extension_definition(&l.formula)))
            }
            _ => None,
        })
        .collect();

    let proof = if exts.is_empty() {
        let mut proof = source.clone();
        proof.variant = Variant::SF;
        proof
    } else {
        let hfs: Vec<Formula> = source
            .lines
            .iter()
            .filter(|l| matches!(l.just, HilbertJust::Ext { .. }))
            .map(|l| l.formula.clone())
            .collect();
        let e = hfs.len();
        // chains[j] = H_0 and (H_1 and (... and H_j)).
        let mut chains: Vec<Formula> = Vec::with_capacity(e);
        for j in 0..e {
            let mut acc = hfs[j].clone();
            for i in (0..j).rev() {
                acc = Formula::and(hfs[i].clone(), acc);
            }
            chains.push(acc);
        }

        let mut p = Prover::new(Variant::SF);
        let hyp = p.begin_scope(chains[e - 1].clone());
        let mut hrefs: Vec<StepRef> = Vec::with_capacity(e);
        let mut cursor = hyp;
        for j in 0..e {
            if j + 1 == e {
                hrefs.push(cursor);
            } else {
                hrefs.push(p.and_elim_l(cursor));
                cursor = p.and_elim_r(cursor);
            }
        }
        let mut by_id: HashMap<u64, StepRef> = HashMap::new();
        let mut ext_seen = 0usize;
        let mut last: Option<StepRef> = None;
        for line in &source.lines {
            let step = match &line.just {
                HilbertJust::Ax { scheme, subst } => p.axiom_subst(*scheme, subst.clone()),
                HilbertJust::Mp {
                    implication,
                    antecedent,
                } => {
                    let i = by_id[implication];
                    let a = by_id[antecedent];
                    p.mp(i, a)
                }
                HilbertJust::Ext { .. } => {
                    let r = hrefs[ext_seen];
                    ext_seen += 1;
                    r
                }
                HilbertJust::Sub { .. } => unreachable!("EF proofs have no substitution lines"),
            };
            by_id.insert(line.id, step);
            last = Some(step);
        }
        let last = last.expect("nonempty proof");
        let mut cur = p.end_scope(last); // chains[e-1] -> goal

        for j in (0..e).rev() {
            let (atom, body) = &exts[j];
            let subst: Substitution = [(atom.clone(), body.clone())].into_iter().collect();
            let subbed = p.sub(cur, subst);
            // The substituted hypothesis is `body <-> body`.
            let half = p.identity(body);
            let triv = p.and_intro(half, half);
            if j == 0 {
                cur = p.mp(subbed, triv);
            } else {
                let h2 = p.begin_scope(chains[j - 1].clone());
                let mut parts: Vec<StepRef> = Vec::with_capacity(j);
                let mut cursor = h2;
                for i in 0..j {
                    if i + 1 == j {
                        parts.push(cursor);
                    } else {
                        parts.push(p.and_elim_l(cursor));
                        cursor = p.and_elim_r(cursor);
                    }
                }
                let mut acc = p.and_intro(parts[j - 1], triv);
                for i in (0..j - 1).rev() {
                    acc = p.and_intro(parts[i], acc);
                }
                let g = p.mp(subbed, acc);
                cur = p.end_scope(g); // chains[j-1] -> goal
            }
        }
        p.finish()
    };

    debug_assert_eq!(proof.conclusion(), Some(&goal));
    Ok(TranslationResult {
        source: CalculusId::Ef,
        target: CalculusId::Sf,
        source_symbols: source.symbols(),
        target_symbols: proof.symbols(),
        conclusion: goal,
        proof: ProofPayload::Derivation(proof),
    })
}

// --- corpus reports -------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationPoint {
    pub label: String,
    pub source_symbols: u64,
    pub target_symbols: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub source: CalculusId,
    pub target: CalculusId,
    pub points: Vec<SimulationPoint>,
    /// Least-squares slope of log target size against log source size.
    pub slope: f64,
}

/// Translate every corpus entry and fit the size growth.
pub fn simulation_report(
    source: CalculusId,
    target: CalculusId,
    corpus: &[(String, ProofPayload)],
) -> Result<SimulationReport, SimError> {
    if corpus.is_empty() {
        return Err(SimError::EmptyCorpus);
    }
    let mut points = Vec::with_capacity(corpus.len());
    for (label, payload) in corpus {
        let r = translate(source, target, payload)?;
        points.push(SimulationPoint {
            label: label.clone(),
            source_symbols: r.source_symbols,
            target_symbols: r.target_symbols,
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.source_symbols as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.target_symbols as f64).collect();
    let slope = log_log_slope(&xs, &ys);
    Ok(SimulationReport {
        source,
        target,
        points,
        slope,
    })
}

/// Least-squares slope of `ln y` against `ln x`; 0 when `x` has no spread.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}
