//! Propositional formulas over the DeMorgan language (constants 0 and 1,
//! connectives not/and/or), their s-expression text format, evaluation,
//! substitution, scheme matching and the brute-force classification oracle.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

/// Default cap on atom counts for exhaustive enumeration (2^24 assignments).
pub const DEFAULT_ATOM_LIMIT: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("reserved atom name `{name}` at byte {offset}: the `e_` prefix is for extension atoms")]
    ReservedName { offset: usize, name: String },
    #[error("invalid atom name `{0}`")]
    BadAtomName(String),
    #[error("assignment is missing atom `{0}`")]
    MissingAtom(String),
    #[error("formula has {atoms} atoms, above the enumeration limit {limit}")]
    TooManyAtoms { atoms: usize, limit: usize },
}

/// A propositional variable. Ordinary atoms match `[a-z][a-z0-9_]*`; names
/// beginning with `e_` are reserved for extension atoms introduced by EXT
/// and EXTEND proof steps.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(Rc<str>);

impl Atom {
    pub fn new(name: &str) -> Result<Atom, FormulaError> {
        if !valid_atom_name(name) {
            return Err(FormulaError::BadAtomName(name.to_string()));
        }
        Ok(Atom(Rc::from(name)))
    }

    /// A scheme pattern variable (uppercase-convention name such as `P`).
    pub fn pattern(name: &str) -> Result<Atom, FormulaError> {
        let mut chars = name.chars();
        let ok = matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(FormulaError::BadAtomName(name.to_string()));
        }
        Ok(Atom(Rc::from(name)))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// Reserved extension-atom namespace.
    pub fn is_extension(&self) -> bool {
        self.0.starts_with("e_")
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn valid_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

/// A formula node. And/Or are strictly binary; n-ary surface syntax is
/// right-nested by the parser.
#[derive(Debug)]
pub enum FKind {
    Const(bool),
    Var(Atom),
    Not(Formula),
    And(Formula, Formula),
    Or(Formula, Formula),
}

struct Inner {
    kind: FKind,
    /// Node count of the tree rooted here (the symbol count).
    size: u64,
    hash: u64,
}

/// An immutable, cheaply clonable formula tree. Structural equality with a
/// pointer-equality fast path; subtrees are shared freely.
#[derive(Clone)]
pub struct Formula(Rc<Inner>);

fn mix(h: u64, v: u64) -> u64 {
    // FNV-style combine; only needs to be a decent structural hash.
    (h ^ v).wrapping_mul(0x100000001b3).rotate_left(5)
}

impl Formula {
    fn build(kind: FKind) -> Formula {
        let (size, hash) = match &kind {
            FKind::Const(b) => (1, mix(0x9e3779b97f4a7c15, *b as u64)),
            FKind::Var(a) => {
                let mut h = 0xcbf29ce484222325u64;
                for byte in a.name().bytes() {
                    h = mix(h, byte as u64);
                }
                (1, mix(h, 2))
            }
            FKind::Not(f) => (f.size() + 1, mix(f.hash(), 3)),
            FKind::And(l, r) => (l.size() + r.size() + 1, mix(mix(l.hash(), r.hash()), 4)),
            FKind::Or(l, r) => (l.size() + r.size() + 1, mix(mix(l.hash(), r.hash()), 5)),
        };
        Formula(Rc::new(Inner { kind, size, hash }))
    }

    pub fn constant(value: bool) -> Formula {
        Formula::build(FKind::Const(value))
    }

    pub fn var(atom: Atom) -> Formula {
        Formula::build(FKind::Var(atom))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::build(FKind::Not(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::build(FKind::And(l, r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::build(FKind::Or(l, r))
    }

    /// `a -> b` is parser-level sugar for `(or (not a) b)`.
    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::or(Formula::not(a), b)
    }

    /// `a <-> b` expands to `(and (imp a b) (imp b a))`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(
            Formula::imp(a.clone(), b.clone()),
            Formula::imp(b, a),
        )
    }

    pub fn kind(&self) -> &FKind {
        &self.0.kind
    }

    /// Number of nodes in the tree; the workbench's symbol count.
    pub fn size(&self) -> u64 {
        self.0.size
    }

    fn hash(&self) -> u64 {
        self.0.hash
    }

    /// Destructure `(or (not a) b)`, the stored shape of an implication.
    pub fn as_implication(&self) -> Option<(&Formula, &Formula)> {
        if let FKind::Or(l, r) = self.kind() {
            if let FKind::Not(a) = l.kind() {
                return Some((a, r));
            }
        }
        None
    }

    /// All atoms occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self.kind() {
            FKind::Const(_) => {}
            FKind::Var(a) => {
                out.insert(a.clone());
            }
            FKind::Not(f) => f.collect_atoms(out),
            FKind::And(l, r) | FKind::Or(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    pub fn contains_atom(&self, atom: &Atom) -> bool {
        match self.kind() {
            FKind::Const(_) => false,
            FKind::Var(a) => a == atom,
            FKind::Not(f) => f.contains_atom(atom),
            FKind::And(l, r) | FKind::Or(l, r) => l.contains_atom(atom) || r.contains_atom(atom),
        }
    }

    /// Negation normal form with double negations removed and negated
    /// constants folded; used for the DNF-vs-CNF structural comparison.
    pub fn demorgan_nnf(&self) -> Formula {
        match self.kind() {
            FKind::Const(_) | FKind::Var(_) => self.clone(),
            FKind::And(l, r) => Formula::and(l.demorgan_nnf(), r.demorgan_nnf()),
            FKind::Or(l, r) => Formula::or(l.demorgan_nnf(), r.demorgan_nnf()),
            FKind::Not(f) => match f.kind() {
                FKind::Const(b) => Formula::constant(!b),
                FKind::Var(_) => self.clone(),
                FKind::Not(g) => g.demorgan_nnf(),
                FKind::And(l, r) => Formula::or(
                    Formula::not(l.clone()).demorgan_nnf(),
                    Formula::not(r.clone()).demorgan_nnf(),
                ),
                FKind::Or(l, r) => Formula::and(
                    Formula::not(l.clone()).demorgan_nnf(),
                    Formula::not(r.clone()).demorgan_nnf(),
                ),
            },
        }
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Formula) -> bool {
        if Rc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        if self.hash() != other.hash() || self.size() != other.size() {
            return false;
        }
        match (self.kind(), other.kind()) {
            (FKind::Const(a), FKind::Const(b)) => a == b,
            (FKind::Var(a), FKind::Var(b)) => a == b,
            (FKind::Not(a), FKind::Not(b)) => a == b,
            (FKind::And(a, b), FKind::And(c, d)) => a == c && b == d,
            (FKind::Or(a, b), FKind::Or(c, d)) => a == c && b == d,
            _ => false,
        }
    }
}

impl Eq for Formula {}

impl std::hash::Hash for Formula {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_formula(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_formula(self))
    }
}

/// A total map from atoms to truth values.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<Atom, bool>);

impl Assignment {
    pub fn new() -> Assignment {
        Assignment(BTreeMap::new())
    }

    pub fn set(&mut self, atom: Atom, value: bool) {
        self.0.insert(atom, value);
    }

    pub fn get(&self, atom: &Atom) -> Option<bool> {
        self.0.get(atom).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, bool)> {
        self.0.iter().map(|(a, v)| (a, *v))
    }
}

impl FromIterator<(Atom, bool)> for Assignment {
    fn from_iter<T: IntoIterator<Item = (Atom, bool)>>(iter: T) -> Assignment {
        Assignment(iter.into_iter().collect())
    }
}

/// Standard Boolean semantics; errors if the assignment is partial.
pub fn evaluate(f: &Formula, a: &Assignment) -> Result<bool, FormulaError> {
    match f.kind() {
        FKind::Const(b) => Ok(*b),
        FKind::Var(atom) => a
            .get(atom)
            .ok_or_else(|| FormulaError::MissingAtom(atom.name().to_string())),
        FKind::Not(g) => Ok(!evaluate(g, a)?),
        FKind::And(l, r) => Ok(evaluate(l, a)? && evaluate(r, a)?),
        FKind::Or(l, r) => Ok(evaluate(l, a)? || evaluate(r, a)?),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Tautology,
    SatisfiableNotTautology,
    Unsatisfiable,
}

/// Formula compiled against a fixed atom order for fast mask-based evaluation.
enum Compiled {
    Const(bool),
    Var(usize),
    Not(Box<Compiled>),
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
}

fn compile(f: &Formula, index: &BTreeMap<Atom, usize>) -> Compiled {
    match f.kind() {
        FKind::Const(b) => Compiled::Const(*b),
        FKind::Var(a) => Compiled::Var(index[a]),
        FKind::Not(g) => Compiled::Not(Box::new(compile(g, index))),
        FKind::And(l, r) => Compiled::And(Box::new(compile(l, index)), Box::new(compile(r, index))),
        FKind::Or(l, r) => Compiled::Or(Box::new(compile(l, index)), Box::new(compile(r, index))),
    }
}

fn eval_mask(c: &Compiled, mask: u64) -> bool {
    match c {
        Compiled::Const(b) => *b,
        Compiled::Var(i) => mask & (1u64 << i) != 0,
        Compiled::Not(g) => !eval_mask(g, mask),
        Compiled::And(l, r) => eval_mask(l, mask) && eval_mask(r, mask),
        Compiled::Or(l, r) => eval_mask(l, mask) || eval_mask(r, mask),
    }
}

pub fn brute_force_classify(f: &Formula) -> Result<Classification, FormulaError> {
    brute_force_classify_with_limit(f, DEFAULT_ATOM_LIMIT)
}

/// Classification by exhaustive enumeration of all assignments.
pub fn brute_force_classify_with_limit(
    f: &Formula,
    limit: usize,
) -> Result<Classification, FormulaError> {
    let atoms = f.atoms();
    if atoms.len() > limit {
        return Err(FormulaError::TooManyAtoms {
            atoms: atoms.len(),
            limit,
        });
    }
    let index: BTreeMap<Atom, usize> = atoms.into_iter().zip(0..).collect();
    let compiled = compile(f, &index);
    let total: u64 = 1u64 << index.len();
    let mut any_true = false;
    let mut any_false = false;
    for mask in 0..total {
        if eval_mask(&compiled, mask) {
            any_true = true;
        } else {
            any_false = true;
        }
        if any_true && any_false {
            return Ok(Classification::SatisfiableNotTautology);
        }
    }
    Ok(if any_true {
        Classification::Tautology
    } else {
        Classification::Unsatisfiable
    })
}

/// A finite, simultaneously applied map from atoms to formulas.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution(BTreeMap<Atom, Formula>);

impl Substitution {
    pub fn new() -> Substitution {
        Substitution(BTreeMap::new())
    }

    pub fn bind(&mut self, atom: Atom, f: Formula) {
        self.0.insert(atom, f);
    }

    pub fn get(&self, atom: &Atom) -> Option<&Formula> {
        self.0.get(atom)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, &Formula)> {
        self.0.iter()
    }

    /// `self` then `after`, as a single simultaneous substitution: each
    /// binding of `self` has `after` applied to its image, and bindings of
    /// `after` on atoms untouched by `self` are kept.
    pub fn compose(&self, after: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (a, f) in self.iter() {
            out.bind(a.clone(), apply_substitution(f, after));
        }
        for (a, f) in after.iter() {
            if self.get(a).is_none() {
                out.bind(a.clone(), f.clone());
            }
        }
        out
    }
}

impl FromIterator<(Atom, Formula)> for Substitution {
    fn from_iter<T: IntoIterator<Item = (Atom, Formula)>>(iter: T) -> Substitution {
        Substitution(iter.into_iter().collect())
    }
}

/// Simultaneous replacement of mapped atoms; unmapped atoms are unchanged.
pub fn apply_substitution(f: &Formula, s: &Substitution) -> Formula {
    match f.kind() {
        FKind::Const(_) => f.clone(),
        FKind::Var(a) => s.get(a).cloned().unwrap_or_else(|| f.clone()),
        FKind::Not(g) => Formula::not(apply_substitution(g, s)),
        FKind::And(l, r) => Formula::and(apply_substitution(l, s), apply_substitution(r, s)),
        FKind::Or(l, r) => Formula::or(apply_substitution(l, s), apply_substitution(r, s)),
    }
}

/// Nonlinear first-order matching of a scheme pattern against a formula.
/// Every atom of the pattern is a pattern variable; repeated variables must
/// bind identical subformulas. Returns the unique witnessing substitution.
pub fn match_scheme(pattern: &Formula, f: &Formula) -> Option<Substitution> {
    let mut s = Substitution::new();
    if match_into(pattern, f, &mut s) {
        Some(s)
    } else {
        None
    }
}

fn match_into(pattern: &Formula, f: &Formula, s: &mut Substitution) -> bool {
    match (pattern.kind(), f.kind()) {
        (FKind::Const(a), FKind::Const(b)) => a == b,
        (FKind::Var(v), _) => match s.get(v) {
            Some(bound) => bound == f,
            None => {
                s.bind(v.clone(), f.clone());
                true
            }
        },
        (FKind::Not(p), FKind::Not(g)) => match_into(p, g, s),
        (FKind::And(p1, p2), FKind::And(g1, g2)) => {
            match_into(p1, g1, s) && match_into(p2, g2, s)
        }
        (FKind::Or(p1, p2), FKind::Or(g1, g2)) => match_into(p1, g1, s) && match_into(p2, g2, s),
        _ => false,
    }
}

// --- text format -----------------------------------------------------------

/// Canonical binary s-expression; never emits `imp`/`iff` or n-ary forms,
/// so `parse_formula(render_formula(f)) == f`.
pub fn render_formula(f: &Formula) -> String {
    let mut out = String::new();
    render_into(f, &mut out);
    out
}

fn render_into(f: &Formula, out: &mut String) {
    match f.kind() {
        FKind::Const(false) => out.push('0'),
        FKind::Const(true) => out.push('1'),
        FKind::Var(a) => out.push_str(a.name()),
        FKind::Not(g) => {
            out.push_str("(not ");
            render_into(g, out);
            out.push(')');
        }
        FKind::And(l, r) => {
            out.push_str("(and ");
            render_into(l, out);
            out.push(' ');
            render_into(r, out);
            out.push(')');
        }
        FKind::Or(l, r) => {
            out.push_str("(or ");
            render_into(l, out);
            out.push(' ');
            render_into(r, out);
            out.push(')');
        }
    }
}

/// Parse a formula, rejecting reserved `e_` atoms (user-facing inputs).
pub fn parse_formula(text: &str) -> Result<Formula, FormulaError> {
    Parser::new(text, false).parse_complete()
}

/// Parse a formula, permitting extension atoms (proof-file contexts).
pub fn parse_formula_allow_reserved(text: &str) -> Result<Formula, FormulaError> {
    Parser::new(text, true).parse_complete()
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    allow_reserved: bool,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, allow_reserved: bool) -> Parser<'a> {
        Parser {
            text,
            bytes: text.as_bytes(),
            pos: 0,
            allow_reserved,
        }
    }

    fn err<T>(&self, message: &str) -> Result<T, FormulaError> {
        Err(FormulaError::Parse {
            offset: self.pos,
            message: message.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn parse_complete(mut self) -> Result<Formula, FormulaError> {
        let f = self.parse_formula()?;
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return self.err("trailing input after formula");
        }
        Ok(f)
    }

    fn word(&mut self) -> Result<&'a str, FormulaError> {
        let start = self.pos;
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b.is_ascii_whitespace() || b == b'(' || b == b')' {
                break;
            }
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a token");
        }
        Ok(&self.text[start..self.pos])
    }

    fn parse_formula(&mut self) -> Result<Formula, FormulaError> {
        self.skip_ws();
        if self.pos >= self.bytes.len() {
            return self.err("unexpected end of input");
        }
        if self.bytes[self.pos] == b'(' {
            self.pos += 1;
            self.skip_ws();
            let head_offset = self.pos;
            let head = self.word()?;
            let f = match head {
                "not" => {
                    let inner = self.parse_formula()?;
                    Formula::not(inner)
                }
                "and" | "or" => {
                    let mut args = Vec::new();
                    loop {
                        self.skip_ws();
                        if self.pos < self.bytes.len() && self.bytes[self.pos] == b')' {
                            break;
                        }
                        args.push(self.parse_formula()?);
                    }
                    if args.len() < 2 {
                        self.pos = head_offset;
                        return self.err("and/or need at least two arguments");
                    }
                    // n-ary surface form right-nests.
                    let mut it = args.into_iter().rev();
                    let mut acc = it.next().unwrap();
                    for f in it {
                        acc = if head == "and" {
                            Formula::and(f, acc)
                        } else {
                            Formula::or(f, acc)
                        };
                    }
                    acc
                }
                "imp" => {
                    let a = self.parse_formula()?;
                    let b = self.parse_formula()?;
                    Formula::imp(a, b)
                }
                "iff" => {
                    let a = self.parse_formula()?;
                    let b = self.parse_formula()?;
                    Formula::iff(a, b)
                }
                _ => {
                    self.pos = head_offset;
                    return self.err("expected one of not/and/or/imp/iff");
                }
            };
            self.skip_ws();
            if self.pos >= self.bytes.len() || self.bytes[self.pos] != b')' {
                return self.err("expected `)`");
            }
            self.pos += 1;
            Ok(f)
        } else {
            let offset = self.pos;
            let word = self.word()?;
            match word {
                "0" => Ok(Formula::constant(false)),
                "1" => Ok(Formula::constant(true)),
                name => {
                    if !valid_atom_name(name) {
                        self.pos = offset;
                        return self.err("invalid atom name");
                    }
                    if !self.allow_reserved && name.starts_with("e_") {
                        return Err(FormulaError::ReservedName {
                            offset,
                            name: name.to_string(),
                        });
                    }
                    Ok(Formula::var(Atom::new(name).expect("validated")))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(name: &str) -> Atom {
        Atom::new(name).unwrap()
    }

    fn var(name: &str) -> Formula {
        Formula::var(atom(name))
    }

    #[test]
    fn parse_basic() {
        let f = parse_formula("(or p (not q))").unwrap();
        assert_eq!(f, Formula::or(var("p"), Formula::not(var("q"))));
    }

    #[test]
    fn parse_nary_right_nests() {
        let f = parse_formula("(and a b c)").unwrap();
        assert_eq!(f, Formula::and(var("a"), Formula::and(var("b"), var("c"))));
    }

    #[test]
    fn parse_unbalanced_is_error() {
        match parse_formula("(or p") {
            Err(FormulaError::Parse { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_reserved_atoms() {
        assert!(matches!(
            parse_formula("(or e_q p)"),
            Err(FormulaError::ReservedName { .. })
        ));
        assert!(parse_formula_allow_reserved("(or e_q p)").is_ok());
    }

    #[test]
    fn parse_sugar() {
        assert_eq!(
            parse_formula("(imp a b)").unwrap(),
            Formula::or(Formula::not(var("a")), var("b"))
        );
        let iff = parse_formula("(iff a b)").unwrap();
        assert_eq!(iff, Formula::iff(var("a"), var("b")));
    }

    #[test]
    fn render_basic() {
        assert_eq!(
            render_formula(&Formula::or(var("p"), Formula::not(var("q")))),
            "(or p (not q))"
        );
        assert_eq!(
            render_formula(&Formula::and(var("a"), Formula::and(var("b"), var("c")))),
            "(and a (and b c))"
        );
        assert_eq!(render_formula(&Formula::constant(true)), "1");
    }

    #[test]
    fn evaluate_basic() {
        let f = parse_formula("(or p (not q))").unwrap();
        let a: Assignment = [(atom("p"), false), (atom("q"), true)].into_iter().collect();
        assert_eq!(evaluate(&f, &a), Ok(false));

        let lem = parse_formula("(or p (not p))").unwrap();
        let a: Assignment = [(atom("p"), false)].into_iter().collect();
        assert_eq!(evaluate(&lem, &a), Ok(true));

        assert_eq!(evaluate(&Formula::constant(false), &Assignment::new()), Ok(false));
        assert!(matches!(
            evaluate(&f, &Assignment::new()),
            Err(FormulaError::MissingAtom(_))
        ));
    }

    #[test]
    fn classify_basic() {
        let lem = parse_formula("(or p (not p))").unwrap();
        assert_eq!(brute_force_classify(&lem), Ok(Classification::Tautology));
        assert_eq!(
            brute_force_classify(&Formula::constant(false)),
            Ok(Classification::Unsatisfiable)
        );
        let p = parse_formula("p").unwrap();
        assert_eq!(
            brute_force_classify(&p),
            Ok(Classification::SatisfiableNotTautology)
        );
    }

    #[test]
    fn classify_limit() {
        let mut f = var("a0");
        for i in 1..=24 {
            f = Formula::or(f, var(&format!("a{i}")));
        }
        assert!(matches!(
            brute_force_classify(&f),
            Err(FormulaError::TooManyAtoms { atoms: 25, limit: 24 })
        ));
    }

    #[test]
    fn substitution_is_simultaneous() {
        let f = parse_formula("(and p q)").unwrap();
        let s: Substitution = [(atom("p"), var("q")), (atom("q"), var("p"))]
            .into_iter()
            .collect();
        assert_eq!(apply_substitution(&f, &s), parse_formula("(and q p)").unwrap());
        assert_eq!(apply_substitution(&f, &Substitution::new()), f);
    }

    #[test]
    fn substitution_instance_example() {
        let b = parse_formula("(or p (not p))").unwrap();
        let s: Substitution = [(atom("p"), parse_formula("(and q r)").unwrap())]
            .into_iter()
            .collect();
        assert_eq!(
            apply_substitution(&b, &s),
            parse_formula("(or (and q r) (not (and q r)))").unwrap()
        );
    }

    #[test]
    fn match_scheme_basic() {
        let pat = Formula::imp(
            Formula::var(Atom::pattern("P").unwrap()),
            Formula::imp(
                Formula::var(Atom::pattern("Q").unwrap()),
                Formula::var(Atom::pattern("P").unwrap()),
            ),
        );
        let f = parse_formula("(imp p (imp q p))").unwrap();
        let s = match_scheme(&pat, &f).unwrap();
        assert_eq!(s.get(&Atom::pattern("P").unwrap()), Some(&var("p")));
        assert_eq!(s.get(&Atom::pattern("Q").unwrap()), Some(&var("q")));

        // Nonlinear: P must repeat.
        let f2 = parse_formula("(imp p (imp q r))").unwrap();
        assert!(match_scheme(&pat, &f2).is_none());
    }

    #[test]
    fn match_scheme_compound_binding() {
        let p = Formula::var(Atom::pattern("P").unwrap());
        let q = Formula::var(Atom::pattern("Q").unwrap());
        let pat = Formula::imp(Formula::and(p.clone(), q), p);
        let f = parse_formula("(imp (and (or a b) c) (or a b))").unwrap();
        let s = match_scheme(&pat, &f).unwrap();
        assert_eq!(
            s.get(&Atom::pattern("P").unwrap()),
            Some(&parse_formula("(or a b)").unwrap())
        );
        assert_eq!(apply_substitution(&pat, &s), f);
    }

    #[test]
    fn demorgan_nnf_pushes_negations() {
        let f = parse_formula("(not (and p (or q (not r))))").unwrap();
        assert_eq!(
            f.demorgan_nnf(),
            parse_formula("(or (not p) (and (not q) r))").unwrap()
        );
    }
}
