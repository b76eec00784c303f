//! The circuit model: an acyclic digraph over an ordered vertex sequence with a
//! gate label on every vertex.
//!
//! Gates are `and`, `or` (in-degree 2, out-degree 1), `not` (1, 1), `fork`
//! (1, 2), `in(i)` (0, at most 1) and `out(j)` (1, 0). Each `in(i)`, `i` in
//! `1..=m`, and each `out(j)`, `j` in `1..=n`, labels exactly one vertex. The
//! size of a circuit is `|V| + |E|`.
//!
//! Input vertices may be dangling (out-degree 0); several of the padding
//! constructions add inputs that are connected to nothing. Edges form a
//! sequence, so a fork may feed both operands of one gate.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::bits::BitString;
use crate::table::FunctionTable;

/// Vertex label. Input and output indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gate {
    And,
    Or,
    Not,
    Fork,
    Input(usize),
    Output(usize),
}

impl Gate {
    /// Required in-degree.
    pub fn in_degree(self) -> usize {
        match self {
            Gate::And | Gate::Or => 2,
            Gate::Not | Gate::Fork | Gate::Output(_) => 1,
            Gate::Input(_) => 0,
        }
    }

    /// Allowed out-degrees as an inclusive range.
    pub fn out_degree(self) -> (usize, usize) {
        match self {
            Gate::And | Gate::Or | Gate::Not => (1, 1),
            Gate::Fork => (2, 2),
            Gate::Input(_) => (0, 1),
            Gate::Output(_) => (0, 0),
        }
    }

    pub fn is_internal(self) -> bool {
        matches!(self, Gate::And | Gate::Or | Gate::Not | Gate::Fork)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::And => f.write_str("and"),
            Gate::Or => f.write_str("or"),
            Gate::Not => f.write_str("not"),
            Gate::Fork => f.write_str("fork"),
            Gate::Input(i) => write!(f, "in{i}"),
            Gate::Output(j) => write!(f, "out{j}"),
        }
    }
}

/// Upper bound on the number of bits enumerated by exhaustive checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cap(pub usize);

impl Cap {
    pub const DEFAULT: usize = 16;
    pub const ENV_VAR: &'static str = "CIRCUIT_FORGE_CAP";

    /// Reads `CIRCUIT_FORGE_CAP`, falling back to the default when unset or unparsable.
    pub fn from_env() -> Cap {
        std::env::var(Self::ENV_VAR)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Cap)
            .unwrap_or_default()
    }

    pub fn check(self, what: &'static str, value: usize) -> Result<(), CircuitError> {
        if value > self.0 {
            Err(CircuitError::TooLarge {
                what,
                value,
                cap: self.0,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Cap {
    fn default() -> Self {
        Cap(Self::DEFAULT)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("arity mismatch: expected {expected} input bits, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("{what} = {value} exceeds the brute-force cap {cap}")]
    TooLarge {
        what: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("invalid circuit: {0}")]
    Invalid(ValidationReport),
    #[error("a circuit needs at least one input and one output")]
    Empty,
}

/// A single broken rule of the circuit definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyInterface { inputs: usize, outputs: usize },
    EdgeOutOfRange { edge: usize },
    SelfLoop { edge: usize },
    InDegree { vertex: usize, gate: Gate, found: usize },
    OutDegree { vertex: usize, gate: Gate, found: usize },
    LabelOutOfRange { vertex: usize, gate: Gate },
    DuplicateLabel { vertex: usize, gate: Gate },
    MissingLabel { gate: Gate },
    Cycle { vertices: Vec<usize> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyInterface { inputs, outputs } => {
                write!(f, "circuit has {inputs} inputs and {outputs} outputs; both must be positive")
            }
            Violation::EdgeOutOfRange { edge } => write!(f, "edge {edge} references a missing vertex"),
            Violation::SelfLoop { edge } => write!(f, "edge {edge} is a self-loop"),
            Violation::InDegree { vertex, gate, found } => write!(
                f,
                "vertex {vertex} ({gate}) has in-degree {found}, expected {}",
                gate.in_degree()
            ),
            Violation::OutDegree { vertex, gate, found } => {
                let (lo, hi) = gate.out_degree();
                if lo == hi {
                    write!(f, "vertex {vertex} ({gate}) has out-degree {found}, expected {lo}")
                } else {
                    write!(f, "vertex {vertex} ({gate}) has out-degree {found}, expected {lo}..={hi}")
                }
            }
            Violation::LabelOutOfRange { vertex, gate } => {
                write!(f, "vertex {vertex} has label {gate} outside the declared interface")
            }
            Violation::DuplicateLabel { vertex, gate } => {
                write!(f, "vertex {vertex} repeats label {gate}")
            }
            Violation::MissingLabel { gate } => write!(f, "no vertex carries label {gate}"),
            Violation::Cycle { vertices } => write!(f, "vertices {vertices:?} lie on or behind a cycle"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("ok");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A boolean circuit. Vertex ids are positions in the vertex sequence.
///
/// Construction through [`Circuit::new`] validates; [`Circuit::from_parts`]
/// does not, so that malformed netlists can be inspected with
/// [`Circuit::validate`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    inputs: usize,
    outputs: usize,
    gates: Vec<Gate>,
    edges: Vec<(usize, usize)>,
}

impl Circuit {
    pub fn new(inputs: usize, outputs: usize, gates: Vec<Gate>, edges: Vec<(usize, usize)>) -> Result<Circuit, CircuitError> {
        let c = Self::from_parts(inputs, outputs, gates, edges);
        let report = c.validate();
        if report.is_ok() {
            Ok(c)
        } else {
            Err(CircuitError::Invalid(report))
        }
    }

    pub fn from_parts(inputs: usize, outputs: usize, gates: Vec<Gate>, edges: Vec<(usize, usize)>) -> Circuit {
        Circuit {
            inputs,
            outputs,
            gates,
            edges,
        }
    }

    /// `m` disjoint wires `in(i) -> out(i)`; vertices are `in1..inm, out1..outm`.
    pub fn identity(m: usize) -> Result<Circuit, CircuitError> {
        if m == 0 {
            return Err(CircuitError::Empty);
        }
        let gates = (1..=m).map(Gate::Input).chain((1..=m).map(Gate::Output)).collect();
        let edges = (0..m).map(|i| (i, m + i)).collect();
        Ok(Circuit::from_parts(m, m, gates, edges))
    }

    /// Number of input vertices `m`.
    pub fn inputs(&self) -> usize {
        self.inputs
    }

    /// Number of output vertices `n`.
    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.gates.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `|V| + |E|`.
    pub fn size(&self) -> usize {
        self.gates.len() + self.edges.len()
    }

    pub fn into_parts(self) -> (usize, usize, Vec<Gate>, Vec<(usize, usize)>) {
        (self.inputs, self.outputs, self.gates, self.edges)
    }

    /// Vertex carrying `gate`, if any.
    pub fn find(&self, gate: Gate) -> Option<usize> {
        self.gates.iter().position(|&g| g == gate)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let nv = self.gates.len();

        if self.inputs == 0 || self.outputs == 0 {
            violations.push(Violation::EmptyInterface {
                inputs: self.inputs,
                outputs: self.outputs,
            });
        }

        let mut indeg = vec![0usize; nv];
        let mut outdeg = vec![0usize; nv];
        let mut good_edges = Vec::with_capacity(self.edges.len());
        for (k, &(s, d)) in self.edges.iter().enumerate() {
            if s >= nv || d >= nv {
                violations.push(Violation::EdgeOutOfRange { edge: k });
                continue;
            }
            if s == d {
                violations.push(Violation::SelfLoop { edge: k });
            }
            outdeg[s] += 1;
            indeg[d] += 1;
            good_edges.push((s, d));
        }

        let mut in_seen = vec![false; self.inputs + 1];
        let mut out_seen = vec![false; self.outputs + 1];
        for (v, &gate) in self.gates.iter().enumerate() {
            let label_slot = match gate {
                Gate::Input(i) if (1..=self.inputs).contains(&i) => Some(&mut in_seen[i]),
                Gate::Output(j) if (1..=self.outputs).contains(&j) => Some(&mut out_seen[j]),
                Gate::Input(_) | Gate::Output(_) => {
                    violations.push(Violation::LabelOutOfRange { vertex: v, gate });
                    None
                }
                _ => None,
            };
            if let Some(slot) = label_slot {
                if *slot {
                    violations.push(Violation::DuplicateLabel { vertex: v, gate });
                }
                *slot = true;
            }
            if indeg[v] != gate.in_degree() {
                violations.push(Violation::InDegree {
                    vertex: v,
                    gate,
                    found: indeg[v],
                });
            }
            let (lo, hi) = gate.out_degree();
            if outdeg[v] < lo || outdeg[v] > hi {
                violations.push(Violation::OutDegree {
                    vertex: v,
                    gate,
                    found: outdeg[v],
                });
            }
        }
        for (i, seen) in in_seen.iter().enumerate().skip(1) {
            if !seen {
                violations.push(Violation::MissingLabel { gate: Gate::Input(i) });
            }
        }
        for (j, seen) in out_seen.iter().enumerate().skip(1) {
            if !seen {
                violations.push(Violation::MissingLabel { gate: Gate::Output(j) });
            }
        }

        let (order, _) = stable_topological_order(nv, &good_edges);
        if order.len() < nv {
            let placed: HashSet<usize> = order.into_iter().collect();
            violations.push(Violation::Cycle {
                vertices: (0..nv).filter(|v| !placed.contains(v)).collect(),
            });
        }

        ValidationReport { violations }
    }

    /// Compiles the circuit into an evaluation schedule. Fails on invalid circuits.
    pub fn evaluator(&self) -> Result<Evaluator<'_>, CircuitError> {
        let report = self.validate();
        if !report.is_ok() {
            return Err(CircuitError::Invalid(report));
        }
        let (order, preds) = stable_topological_order(self.gates.len(), &self.edges);
        Ok(Evaluator {
            circuit: self,
            order,
            preds,
        })
    }

    /// `C(x)`.
    pub fn evaluate(&self, x: &BitString) -> Result<BitString, CircuitError> {
        self.evaluator()?.eval(x)
    }

    /// The total table of `C(.)`; requires `m <= cap`.
    pub fn function_table(&self, cap: Cap) -> Result<FunctionTable, CircuitError> {
        cap.check("input count", self.inputs)?;
        let ev = self.evaluator()?;
        let table = FunctionTable::from_entries(
            self.inputs,
            self.outputs,
            BitString::all(self.inputs).map(|x| {
                let y = ev.eval_unchecked(&x);
                (x, y)
            }),
        )
        .expect("evaluation respects arities");
        Ok(table)
    }

    /// `im(C)`; requires `m <= cap`.
    pub fn image(&self, cap: Cap) -> Result<BTreeSet<BitString>, CircuitError> {
        cap.check("input count", self.inputs)?;
        let ev = self.evaluator()?;
        Ok(BitString::all(self.inputs).map(|x| ev.eval_unchecked(&x)).collect())
    }

    pub fn is_injective(&self, cap: Cap) -> Result<bool, CircuitError> {
        cap.check("input count", self.inputs)?;
        Ok(self.image(cap)?.len() as u64 == 1u64 << self.inputs)
    }

    pub fn is_surjective(&self, cap: Cap) -> Result<bool, CircuitError> {
        cap.check("input count", self.inputs)?;
        cap.check("output count", self.outputs)?;
        Ok(self.image(cap)?.len() as u64 == 1u64 << self.outputs)
    }

    /// `C(.) = id`; false whenever `m != n`.
    pub fn is_identity(&self, cap: Cap) -> Result<bool, CircuitError> {
        cap.check("input count", self.inputs)?;
        let ev = self.evaluator()?;
        if self.inputs != self.outputs {
            return Ok(false);
        }
        Ok(BitString::all(self.inputs).all(|x| ev.eval_unchecked(&x) == x))
    }
}

impl fmt::Debug for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Circuit[{}->{}; ", self.inputs, self.outputs)?;
        for (v, g) in self.gates.iter().enumerate() {
            write!(f, "{v}:{g} ")?;
        }
        f.write_str("|")?;
        for (s, d) in &self.edges {
            write!(f, " {s}>{d}")?;
        }
        f.write_str("]")
    }
}

/// Kahn's algorithm, always releasing the smallest ready vertex id first.
///
/// Returns the order (shorter than `nv` when there is a cycle) and, for each
/// vertex, its predecessors in edge-sequence order.
fn stable_topological_order(nv: usize, edges: &[(usize, usize)]) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut succ = vec![Vec::new(); nv];
    let mut preds = vec![Vec::new(); nv];
    let mut indeg = vec![0usize; nv];
    for &(s, d) in edges {
        succ[s].push(d);
        preds[d].push(s);
        indeg[d] += 1;
    }
    let mut ready: BinaryHeap<Reverse<usize>> = (0..nv).filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(nv);
    while let Some(Reverse(v)) = ready.pop() {
        order.push(v);
        for &w in &succ[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.push(Reverse(w));
            }
        }
    }
    (order, preds)
}

/// A validated circuit with a fixed topological schedule.
pub struct Evaluator<'a> {
    circuit: &'a Circuit,
    order: Vec<usize>,
    preds: Vec<Vec<usize>>,
}

impl Evaluator<'_> {
    pub fn circuit(&self) -> &Circuit {
        self.circuit
    }

    pub fn eval(&self, x: &BitString) -> Result<BitString, CircuitError> {
        if x.len() != self.circuit.inputs {
            return Err(CircuitError::Arity {
                expected: self.circuit.inputs,
                got: x.len(),
            });
        }
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: &BitString) -> BitString {
        let gates = &self.circuit.gates;
        let mut value = vec![false; gates.len()];
        let mut out = vec![false; self.circuit.outputs];
        for &v in &self.order {
            let p = &self.preds[v];
            value[v] = match gates[v] {
                Gate::Input(i) => x.bits()[i - 1],
                Gate::And => value[p[0]] & value[p[1]],
                Gate::Or => value[p[0]] | value[p[1]],
                Gate::Not => !value[p[0]],
                Gate::Fork => value[p[0]],
                Gate::Output(j) => {
                    out[j - 1] = value[p[0]];
                    value[p[0]]
                }
            };
        }
        BitString::from(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    fn not_circuit() -> Circuit {
        Circuit::new(1, 1, vec![Gate::Input(1), Gate::Not, Gate::Output(1)], vec![(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn identity_is_valid_and_sized() {
        let c = Circuit::identity(1).unwrap();
        assert!(c.validate().is_ok());
        assert_eq!((c.vertex_count(), c.edge_count(), c.size()), (2, 1, 3));
        assert_eq!(Circuit::identity(3).unwrap().size(), 9);
        assert_eq!(Circuit::identity(0), Err(CircuitError::Empty));
        assert_eq!(Circuit::identity(4).unwrap().evaluate(&bits("1010")).unwrap(), bits("1010"));
        assert_eq!(Circuit::identity(2).unwrap().evaluate(&bits("10")).unwrap(), bits("10"));
    }

    #[test]
    fn not_gate() {
        let c = not_circuit();
        assert_eq!(c.size(), 5);
        assert_eq!(c.evaluate(&bits("1")).unwrap(), bits("0"));
        let t = c.function_table(Cap::default()).unwrap();
        assert_eq!(t.get(&bits("0")), Some(&bits("1")));
        assert_eq!(t.get(&bits("1")), Some(&bits("0")));
    }

    #[test]
    fn arity_error() {
        assert_eq!(
            not_circuit().evaluate(&bits("10")),
            Err(CircuitError::Arity { expected: 1, got: 2 })
        );
    }

    #[test]
    fn and_with_one_input_is_flagged_at_that_vertex() {
        let c = Circuit::from_parts(1, 1, vec![Gate::Input(1), Gate::And, Gate::Output(1)], vec![(0, 1), (1, 2)]);
        let r = c.validate();
        assert_eq!(
            r.violations,
            vec![Violation::InDegree {
                vertex: 1,
                gate: Gate::And,
                found: 1
            }]
        );
    }

    #[test]
    fn cycle_is_flagged() {
        // in1 -> or <-> fork -> out; all degrees are fine, only the loop is wrong.
        let c = Circuit::from_parts(
            1,
            1,
            vec![Gate::Input(1), Gate::Or, Gate::Fork, Gate::Output(1)],
            vec![(0, 1), (1, 2), (2, 1), (2, 3)],
        );
        let r = c.validate();
        assert_eq!(r.violations, vec![Violation::Cycle { vertices: vec![1, 2, 3] }]);
        assert!(matches!(c.evaluate(&bits("0")), Err(CircuitError::Invalid(_))));
    }

    #[test]
    fn labels_must_be_a_bijection() {
        let c = Circuit::from_parts(2, 1, vec![Gate::Input(1), Gate::Input(1), Gate::Output(1)], vec![(0, 2)]);
        let v = c.validate().violations;
        assert!(v.contains(&Violation::DuplicateLabel {
            vertex: 1,
            gate: Gate::Input(1)
        }));
        assert!(v.contains(&Violation::MissingLabel { gate: Gate::Input(2) }));
        let c = Circuit::from_parts(1, 1, vec![Gate::Input(1), Gate::Output(2)], vec![(0, 1)]);
        assert!(c.validate().violations.contains(&Violation::LabelOutOfRange {
            vertex: 1,
            gate: Gate::Output(2)
        }));
    }

    #[test]
    fn dangling_inputs_are_legal() {
        let c = Circuit::new(2, 1, vec![Gate::Input(1), Gate::Input(2), Gate::Output(1)], vec![(1, 2)]).unwrap();
        assert_eq!(c.evaluate(&bits("01")).unwrap(), bits("1"));
        assert_eq!(c.size(), 4);
    }

    #[test]
    fn parallel_edges_feed_both_operands() {
        // x & x through one fork
        let c = Circuit::new(
            1,
            1,
            vec![Gate::Input(1), Gate::Fork, Gate::And, Gate::Output(1)],
            vec![(0, 1), (1, 2), (1, 2), (2, 3)],
        )
        .unwrap();
        assert_eq!(c.evaluate(&bits("1")).unwrap(), bits("1"));
        assert_eq!(c.size(), 8);
    }

    #[test]
    fn property_checks() {
        let cap = Cap::default();
        let id = Circuit::identity(2).unwrap();
        assert!(id.is_injective(cap).unwrap() && id.is_surjective(cap).unwrap() && id.is_identity(cap).unwrap());
        assert_eq!(id.image(cap).unwrap().len(), 4);

        // x1 & !x1
        let zero = Circuit::new(
            1,
            1,
            vec![Gate::Input(1), Gate::Fork, Gate::Not, Gate::And, Gate::Output(1)],
            vec![(0, 1), (1, 2), (1, 3), (2, 3), (3, 4)],
        )
        .unwrap();
        assert_eq!(zero.image(cap).unwrap(), BTreeSet::from([bits("0")]));
        assert!(!zero.is_injective(cap).unwrap());
        assert!(!zero.is_surjective(cap).unwrap());
        assert!(!zero.is_identity(cap).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let id = Circuit::identity(3).unwrap();
        assert_eq!(
            id.function_table(Cap(2)),
            Err(CircuitError::TooLarge {
                what: "input count",
                value: 3,
                cap: 2
            })
        );
    }
}
