//! Tseitin parity formulas: one atom per graph edge, and for each vertex
//! the clauses forcing the XOR of its incident edges to equal its charge.
//! Unsatisfiable exactly when the total charge is odd.

use std::collections::BTreeMap;

use crate::cnf::{Clause, CnfFormula, Literal};
use crate::formula::Atom;

use super::GenError;

pub const DEFAULT_DEGREE_LIMIT: usize = 6;

/// Undirected multigraph; parallel edges allowed, self-loops forbidden.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertices: Vec<String>, edges: Vec<(String, String)>) -> Result<Graph, GenError> {
        let index: BTreeMap<&str, usize> = vertices
            .iter()
            .map(|v| v.as_str())
            .zip(0..)
            .collect();
        if index.len() != vertices.len() {
            return Err(GenError::Param("duplicate vertex name".to_string()));
        }
        let mut resolved = Vec::with_capacity(edges.len());
        for (a, b) in &edges {
            let ia = *index
                .get(a.as_str())
                .ok_or_else(|| GenError::Param(format!("edge references unknown vertex `{a}`")))?;
            let ib = *index
                .get(b.as_str())
                .ok_or_else(|| GenError::Param(format!("edge references unknown vertex `{b}`")))?;
            if ia == ib {
                return Err(GenError::Param(format!("self-loop at vertex `{a}`")));
            }
            resolved.push((ia, ib));
        }
        Ok(Graph {
            vertices,
            edges: resolved,
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }
}

/// A total 0/1 charge on the vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargeVector(BTreeMap<String, bool>);

impl ChargeVector {
    pub fn new(charges: impl IntoIterator<Item = (String, bool)>) -> ChargeVector {
        ChargeVector(charges.into_iter().collect())
    }

    pub fn get(&self, vertex: &str) -> Option<bool> {
        self.0.get(vertex).copied()
    }

    pub fn total_parity(&self) -> bool {
        self.0.values().filter(|&&b| b).count() % 2 == 1
    }
}

/// Edge `k` (1-based) is atom `x_<k>`.
fn edge_atom(k: usize) -> Atom {
    Atom::new(&format!("x_{k}")).expect("valid generated name")
}

pub fn gen_tseitin(graph: &Graph, charges: &ChargeVector) -> Result<CnfFormula, GenError> {
    gen_tseitin_with_limit(graph, charges, DEFAULT_DEGREE_LIMIT)
}

pub fn gen_tseitin_with_limit(
    graph: &Graph,
    charges: &ChargeVector,
    degree_limit: usize,
) -> Result<CnfFormula, GenError> {
    let atoms: Vec<Atom> = (1..=graph.edges().len()).map(edge_atom).collect();
    let mut clauses = Vec::new();
    for (v, name) in graph.vertices().iter().enumerate() {
        let charge = charges
            .get(name)
            .ok_or_else(|| GenError::Param(format!("no charge for vertex `{name}`")))?;
        let incident: Vec<usize> = graph
            .edges()
            .iter()
            .enumerate()
            .filter(|&(_, &(a, b))| a == v || b == v)
            .map(|(k, _)| k)
            .collect();
        let d = incident.len();
        if d > degree_limit {
            return Err(GenError::DegreeLimit {
                vertex: name.clone(),
                degree: d,
                limit: degree_limit,
            });
        }
        if d == 0 {
            if charge {
                // Empty XOR cannot be 1.
                clauses.push(Clause::empty());
            }
            continue;
        }
        // Forbid every sign pattern whose parity differs from the charge:
        // 2^(d-1) clauses.
        for pattern in 0u32..(1 << d) {
            let parity = (pattern.count_ones() % 2) == 1;
            if parity == charge {
                continue;
            }
            clauses.push(Clause::new(incident.iter().enumerate().map(|(bit, &k)| {
                let atom = atoms[k].clone();
                if (pattern >> bit) & 1 == 1 {
                    // Pattern sets the edge true; forbid with a negative literal.
                    Literal::neg(atom)
                } else {
                    Literal::pos(atom)
                }
            })));
        }
    }
    Ok(CnfFormula::new(atoms, clauses).expect("generated atoms are declared"))
}

// --- text format -----------------------------------------------------------

/// Line-based format: `vertex <name>`, `edge <name> <name>`,
/// `charge <name> <0|1>`.
pub fn parse_graph(text: &str) -> Result<(Graph, ChargeVector), GenError> {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut charges = Vec::new();
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
            ["vertex", name] => vertices.push(name.to_string()),
            ["edge", a, b] => edges.push((a.to_string(), b.to_string())),
            ["charge", name, bit] => {
                let value = match *bit {
                    "0" => false,
                    "1" => true,
                    other => return Err(err(format!("charge must be 0 or 1, got `{other}`"))),
                };
                charges.push((name.to_string(), value));
            }
            _ => return Err(err(format!("unrecognized line `{line}`"))),
        }
    }
    let graph = Graph::new(vertices, edges)?;
    Ok((graph, ChargeVector::new(charges)))
}

pub fn render_graph(graph: &Graph, charges: &ChargeVector) -> String {
    let mut out = String::new();
    for v in graph.vertices() {
        out.push_str(&format!("vertex {v}\n"));
    }
    for &(a, b) in graph.edges() {
        out.push_str(&format!(
            "edge {} {}\n",
            graph.vertices()[a],
            graph.vertices()[b]
        ));
    }
    for v in graph.vertices() {
        if let Some(c) = charges.get(v) {
            out.push_str(&format!("charge {} {}\n", v, c as u8));
        }
    }
    out
}
