//! Boolean circuits with twice as many outputs as inputs, their exact
//! range by enumeration, and the range-avoidance formula: a DNF-shaped
//! formula that is a tautology exactly when the target string is outside
//! the circuit's range.

use std::collections::{BTreeMap, BTreeSet};

use crate::cnf::{Clause, Literal};
use crate::formula::{Atom, Formula};

use super::GenError;

pub const DEFAULT_INPUT_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateOp {
    And,
    Or,
    Not,
    Xor,
    Const0,
    Const1,
}

impl GateOp {
    pub fn arity(&self) -> usize {
        match self {
            GateOp::Not => 1,
            GateOp::Const0 | GateOp::Const1 => 0,
            _ => 2,
        }
    }

    fn parse(s: &str) -> Option<GateOp> {
        Some(match s {
            "AND" => GateOp::And,
            "OR" => GateOp::Or,
            "NOT" => GateOp::Not,
            "XOR" => GateOp::Xor,
            "CONST0" => GateOp::Const0,
            "CONST1" => GateOp::Const1,
            _ => return None,
        })
    }

    fn name(&self) -> &'static str {
        match self {
            GateOp::And => "AND",
            GateOp::Or => "OR",
            GateOp::Not => "NOT",
            GateOp::Xor => "XOR",
            GateOp::Const0 => "CONST0",
            GateOp::Const1 => "CONST1",
        }
    }
}

/// A wire: either input `x<k>` (1-based) or the output of an earlier gate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Wire {
    Input(usize),
    Gate(String),
}

impl Wire {
    fn parse(token: &str, inputs: usize, gates: &BTreeMap<String, usize>) -> Option<Wire> {
        if let Some(rest) = token.strip_prefix('x') {
            if let Ok(k) = rest.parse::<usize>() {
                if k >= 1 && k <= inputs {
                    return Some(Wire::Input(k));
                }
                return None;
            }
        }
        if gates.contains_key(token) {
            return Some(Wire::Gate(token.to_string()));
        }
        None
    }

    fn render(&self) -> String {
        match self {
            Wire::Input(k) => format!("x{k}"),
            Wire::Gate(id) => id.clone(),
        }
    }

    /// Input `k` is atom `x_<k>`; gate `g` is atom `y_<g>`.
    pub fn atom(&self) -> Atom {
        match self {
            Wire::Input(k) => Atom::new(&format!("x_{k}")).expect("valid generated name"),
            Wire::Gate(id) => Atom::new(&format!("y_{id}")).expect("validated gate id"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub id: String,
    pub op: GateOp,
    pub args: Vec<Wire>,
}

/// Gates in topological order; exactly `2 * inputs` outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    inputs: usize,
    gates: Vec<Gate>,
    outputs: Vec<Wire>,
}

fn valid_gate_id(id: &str) -> bool {
    let mut chars = id.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl Circuit {
    pub fn new(inputs: usize, gates: Vec<Gate>, outputs: Vec<Wire>) -> Result<Circuit, GenError> {
        if inputs == 0 {
            return Err(GenError::Param("circuit needs at least one input".into()));
        }
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        for (pos, gate) in gates.iter().enumerate() {
            if !valid_gate_id(&gate.id) {
                return Err(GenError::Param(format!("invalid gate id `{}`", gate.id)));
            }
            if seen.contains_key(&gate.id) {
                return Err(GenError::Param(format!("duplicate gate id `{}`", gate.id)));
            }
            if gate.args.len() != gate.op.arity() {
                return Err(GenError::Param(format!(
                    "gate `{}`: {} takes {} operand(s), got {}",
                    gate.id,
                    gate.op.name(),
                    gate.op.arity(),
                    gate.args.len()
                )));
            }
            for arg in &gate.args {
                match arg {
                    Wire::Input(k) => {
                        if *k == 0 || *k > inputs {
                            return Err(GenError::Param(format!(
                                "gate `{}` references input x{k} out of range",
                                gate.id
                            )));
                        }
                    }
                    Wire::Gate(id) => {
                        // Topological order: operands are earlier gates only.
                        if !seen.contains_key(id) {
                            return Err(GenError::Param(format!(
                                "gate `{}` references `{}` which is not an earlier gate",
                                gate.id, id
                            )));
                        }
                    }
                }
            }
            seen.insert(gate.id.clone(), pos);
        }
        if outputs.len() != 2 * inputs {
            return Err(GenError::Param(format!(
                "expected {} outputs (twice the inputs), got {}",
                2 * inputs,
                outputs.len()
            )));
        }
        for out in &outputs {
            match out {
                Wire::Input(k) if *k == 0 || *k > inputs => {
                    return Err(GenError::Param(format!("output x{k} out of range")));
                }
                Wire::Gate(id) if !seen.contains_key(id) => {
                    return Err(GenError::Param(format!("output references unknown gate `{id}`")));
                }
                _ => {}
            }
        }
        Ok(Circuit {
            inputs,
            gates,
            outputs,
        })
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[Wire] {
        &self.outputs
    }

    fn eval_gates(&self, input_mask: u32) -> BTreeMap<&str, bool> {
        let mut values: BTreeMap<&str, bool> = BTreeMap::new();
        let wire = |values: &BTreeMap<&str, bool>, w: &Wire| -> bool {
            match w {
                Wire::Input(k) => (input_mask >> (k - 1)) & 1 == 1,
                Wire::Gate(id) => values[id.as_str()],
            }
        };
        for gate in &self.gates {
            let v = match gate.op {
                GateOp::And => wire(&values, &gate.args[0]) && wire(&values, &gate.args[1]),
                GateOp::Or => wire(&values, &gate.args[0]) || wire(&values, &gate.args[1]),
                GateOp::Not => !wire(&values, &gate.args[0]),
                GateOp::Xor => wire(&values, &gate.args[0]) != wire(&values, &gate.args[1]),
                GateOp::Const0 => false,
                GateOp::Const1 => true,
            };
            values.insert(gate.id.as_str(), v);
        }
        values
    }

    /// Evaluate on an input mask (bit k-1 is input xk), returning the
    /// output bit string.
    pub fn evaluate(&self, input_mask: u32) -> String {
        let values = self.eval_gates(input_mask);
        self.outputs
            .iter()
            .map(|w| {
                let v = match w {
                    Wire::Input(k) => (input_mask >> (k - 1)) & 1 == 1,
                    Wire::Gate(id) => values[id.as_str()],
                };
                if v {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    }
}

/// Exact range of the circuit by enumerating all inputs.
pub fn circuit_range(circuit: &Circuit) -> Result<BTreeSet<String>, GenError> {
    circuit_range_with_limit(circuit, DEFAULT_INPUT_LIMIT)
}

pub fn circuit_range_with_limit(
    circuit: &Circuit,
    limit: usize,
) -> Result<BTreeSet<String>, GenError> {
    if circuit.inputs() > limit {
        return Err(GenError::TooManyInputs {
            inputs: circuit.inputs(),
            limit,
        });
    }
    let mut range = BTreeSet::new();
    for mask in 0u32..(1 << circuit.inputs()) {
        range.insert(circuit.evaluate(mask));
    }
    Ok(range)
}

/// A circuit together with a target output string of length `2 * inputs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauInstance {
    pub circuit: Circuit,
    pub target: Vec<bool>,
}

impl TauInstance {
    pub fn new(circuit: Circuit, target: Vec<bool>) -> Result<TauInstance, GenError> {
        if target.len() != 2 * circuit.inputs() {
            return Err(GenError::Param(format!(
                "target has {} bits, circuit outputs {}",
                target.len(),
                2 * circuit.inputs()
            )));
        }
        Ok(TauInstance { circuit, target })
    }

    pub fn parse_target(circuit: Circuit, bits: &str) -> Result<TauInstance, GenError> {
        let mut target = Vec::with_capacity(bits.len());
        for c in bits.chars() {
            match c {
                '0' => target.push(false),
                '1' => target.push(true),
                other => {
                    return Err(GenError::Param(format!(
                        "target must be a 0/1 string, found `{other}`"
                    )))
                }
            }
        }
        TauInstance::new(circuit, target)
    }
}

/// Tseitin-style gate-consistency clauses: each has at most 3 literals.
pub fn gate_clauses(gate: &Gate) -> Vec<Clause> {
    let y = Literal::pos(Wire::Gate(gate.id.clone()).atom());
    let ny = y.negated();
    let arg = |i: usize| Literal::pos(gate.args[i].atom());
    let narg = |i: usize| Literal::neg(gate.args[i].atom());
    match gate.op {
        GateOp::And => vec![
            Clause::new([ny.clone(), arg(0)]),
            Clause::new([ny, arg(1)]),
            Clause::new([y, narg(0), narg(1)]),
        ],
        GateOp::Or => vec![
            Clause::new([y.clone(), narg(0)]),
            Clause::new([y, narg(1)]),
            Clause::new([ny, arg(0), arg(1)]),
        ],
        GateOp::Not => vec![Clause::new([ny, narg(0)]), Clause::new([y, arg(0)])],
        GateOp::Xor => vec![
            Clause::new([ny.clone(), arg(0), arg(1)]),
            Clause::new([ny, narg(0), narg(1)]),
            Clause::new([y.clone(), arg(0), narg(1)]),
            Clause::new([y, narg(0), arg(1)]),
        ],
        GateOp::Const0 => vec![Clause::new([ny])],
        GateOp::Const1 => vec![Clause::new([y])],
    }
}

/// The range-avoidance formula: the disjunction, over all gate-consistency
/// clauses, of their negations, disjoined with one mismatch literal per
/// output position. A tautology iff the target is outside the range.
pub fn gen_tau(instance: &TauInstance) -> Formula {
    let mut disjuncts: Vec<Formula> = Vec::new();
    for gate in instance.circuit.gates() {
        for clause in gate_clauses(gate) {
            disjuncts.push(clause.negation_formula());
        }
    }
    for (wire, &bit) in instance.circuit.outputs().iter().zip(&instance.target) {
        let atom_formula = Formula::var(wire.atom());
        disjuncts.push(if bit {
            Formula::not(atom_formula)
        } else {
            atom_formula
        });
    }
    let mut it = disjuncts.into_iter().rev();
    let mut acc = it.next().expect("at least the output disjuncts exist");
    for d in it {
        acc = Formula::or(d, acc);
    }
    acc
}

// --- text format -----------------------------------------------------------

/// Line-based format: `inputs <n>`, `gate <id> <OP> <arg> [<arg>]` in
/// topological order, then `outputs <id> ... <id>` with exactly 2n ids.
pub fn parse_circuit(text: &str) -> Result<Circuit, GenError> {
    let mut inputs: Option<usize> = None;
    let mut gates: Vec<Gate> = Vec::new();
    let mut gate_index: BTreeMap<String, usize> = BTreeMap::new();
    let mut outputs: Option<Vec<Wire>> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| GenError::Format {
            line: lineno + 1,
            message,
        };
        let parts: Vec<&str> = line.split_whitespace().collect();
        match parts.as_slice() {
            ["inputs", n] => {
                inputs = Some(n.parse().map_err(|_| err("bad input count".into()))?);
            }
            ["gate", id, op, rest @ ..] => {
                let n = inputs.ok_or_else(|| err("gate before inputs line".into()))?;
                let op = GateOp::parse(op)
                    .ok_or_else(|| err(format!("unknown gate op `{op}`")))?;
                let mut args = Vec::with_capacity(rest.len());
                for tok in rest {
                    let wire = Wire::parse(tok, n, &gate_index)
                        .ok_or_else(|| err(format!("unknown operand `{tok}`")))?;
                    args.push(wire);
                }
                gate_index.insert(id.to_string(), gates.len());
                gates.push(Gate {
                    id: id.to_string(),
                    op,
                    args,
                });
            }
            ["outputs", rest @ ..] => {
                let n = inputs.ok_or_else(|| err("outputs before inputs line".into()))?;
                let mut wires = Vec::with_capacity(rest.len());
                for tok in rest {
                    let wire = Wire::parse(tok, n, &gate_index)
                        .ok_or_else(|| err(format!("unknown output `{tok}`")))?;
                    wires.push(wire);
                }
                outputs = Some(wires);
            }
            _ => return Err(err(format!("unrecognized line `{line}`"))),
        }
    }
    let inputs = inputs.ok_or(GenError::Format {
        line: 0,
        message: "missing inputs line".to_string(),
    })?;
    let outputs = outputs.ok_or(GenError::Format {
        line: 0,
        message: "missing outputs line".to_string(),
    })?;
    Circuit::new(inputs, gates, outputs)
}

pub fn render_circuit(circuit: &Circuit) -> String {
    let mut out = format!("inputs {}\n", circuit.inputs());
    for gate in circuit.gates() {
        out.push_str(&format!("gate {} {}", gate.id, gate.op.name()));
        for arg in &gate.args {
            out.push(' ');
            out.push_str(&arg.render());
        }
        out.push('\n');
    }
    out.push_str("outputs");
    for w in circuit.outputs() {
        out.push(' ');
        out.push_str(&w.render());
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{brute_force_classify, Classification};

    fn identity_pair_circuit() -> Circuit {
        // One input, outputs (x1, x1).
        Circuit::new(1, vec![], vec![Wire::Input(1), Wire::Input(1)]).unwrap()
    }

    #[test]
    fn range_of_identity_pair() {
        let c = identity_pair_circuit();
        let range = circuit_range(&c).unwrap();
        assert_eq!(
            range,
            ["00".to_string(), "11".to_string()].into_iter().collect()
        );
    }

    #[test]
    fn range_of_constants() {
        let c = Circuit::new(
            1,
            vec![
                Gate {
                    id: "g0".into(),
                    op: GateOp::Const0,
                    args: vec![],
                },
                Gate {
                    id: "g1".into(),
                    op: GateOp::Const1,
                    args: vec![],
                },
            ],
            vec![Wire::Gate("g0".into()), Wire::Gate("g1".into())],
        )
        .unwrap();
        assert_eq!(
            circuit_range(&c).unwrap(),
            ["01".to_string()].into_iter().collect()
        );
    }

    #[test]
    fn range_with_and_gate() {
        let c = Circuit::new(
            2,
            vec![Gate {
                id: "g".into(),
                op: GateOp::And,
                args: vec![Wire::Input(1), Wire::Input(2)],
            }],
            vec![
                Wire::Gate("g".into()),
                Wire::Gate("g".into()),
                Wire::Input(1),
                Wire::Input(2),
            ],
        )
        .unwrap();
        let range = circuit_range(&c).unwrap();
        // Output order: (g, g, x1, x2).
        assert_eq!(range.len(), 4);
        assert!(range.contains("0000"));
        assert!(range.contains("0010"));
        assert!(range.contains("0001"));
        assert!(range.contains("1111"));
    }

    #[test]
    fn tau_tautology_iff_outside_range() {
        let c = identity_pair_circuit();
        let outside = TauInstance::parse_target(c.clone(), "01").unwrap();
        assert_eq!(
            brute_force_classify(&gen_tau(&outside)).unwrap(),
            Classification::Tautology
        );
        let inside = TauInstance::parse_target(c, "11").unwrap();
        assert_eq!(
            brute_force_classify(&gen_tau(&inside)).unwrap(),
            Classification::SatisfiableNotTautology
        );
    }

    #[test]
    fn tau_constant_circuit_in_range() {
        let c = Circuit::new(
            1,
            vec![Gate {
                id: "g0".into(),
                op: GateOp::Const0,
                args: vec![],
            }],
            vec![Wire::Gate("g0".into()), Wire::Gate("g0".into())],
        )
        .unwrap();
        let t = TauInstance::parse_target(c, "00").unwrap();
        assert_ne!(
            brute_force_classify(&gen_tau(&t)).unwrap(),
            Classification::Tautology
        );
    }

    #[test]
    fn circuit_format_round_trip() {
        let text = "inputs 2\ngate g AND x1 x2\ngate h NOT g\noutputs g h x1 x2\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(render_circuit(&c), text);
    }

    #[test]
    fn bad_circuits_rejected() {
        assert!(parse_circuit("inputs 1\noutputs x1\n").is_err()); // 1 output, need 2
        assert!(parse_circuit("inputs 1\ngate g AND x1\noutputs x1 x1\n").is_err()); // arity
        assert!(parse_circuit("inputs 1\ngate g NOT h\ngate h NOT x1\noutputs g h\n").is_err());
        // forward ref
    }
}
