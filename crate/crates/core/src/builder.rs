//! Wire-level circuit construction with automatic fan-out.
//!
//! Gates consume [`Wire`] handles and a wire may be used any number of times.
//! When a wire has `r > 1` uses, [`CircuitBuilder::build`] inserts a left-deep
//! chain of `r - 1` fork gates: fork `k` feeds use `k` and fork `k + 1`, and the
//! last fork feeds the final two uses. Uses are served in reservation order;
//! the plain gate methods reserve their operands when called.
//!
//! Vertex order of the result: the nodes in creation order, each followed
//! directly by its fork chain, then the output vertices.

use thiserror::Error;

use crate::circuit::{Circuit, Gate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Wire(usize);

/// A reserved use of a wire. Reserving fixes the use's position in the fork
/// chain independently of when the consuming gate is created.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Operand {
    wire: usize,
    slot: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("gate node {0} is never used")]
    Unused(usize),
    #[error("circuit has no outputs")]
    NoOutputs,
}

#[derive(Debug)]
struct Node {
    gate: Gate,
    operands: Vec<Operand>,
    uses: usize,
}

#[derive(Debug)]
pub struct CircuitBuilder {
    inputs: usize,
    nodes: Vec<Node>,
    outputs: Vec<Operand>,
}

impl CircuitBuilder {
    /// A builder with `inputs` input wires, available through [`CircuitBuilder::input`].
    pub fn new(inputs: usize) -> Self {
        let nodes = (1..=inputs)
            .map(|i| Node {
                gate: Gate::Input(i),
                operands: Vec::new(),
                uses: 0,
            })
            .collect();
        CircuitBuilder {
            inputs,
            nodes,
            outputs: Vec::new(),
        }
    }

    /// Wire of input `i` (1-based).
    pub fn input(&self, i: usize) -> Wire {
        assert!((1..=self.inputs).contains(&i), "input {i} out of range");
        Wire(i - 1)
    }

    /// Reserves the next use of `w`.
    pub fn reserve(&mut self, w: Wire) -> Operand {
        let node = &mut self.nodes[w.0];
        node.uses += 1;
        Operand {
            wire: w.0,
            slot: node.uses - 1,
        }
    }

    /// Adds an internal gate over previously reserved operands.
    ///
    /// Panics if `gate` is not internal or the operand count is wrong.
    pub fn gate_reserved(&mut self, gate: Gate, operands: Vec<Operand>) -> Wire {
        assert!(gate.is_internal() && operands.len() == gate.in_degree());
        self.nodes.push(Node { gate, operands, uses: 0 });
        Wire(self.nodes.len() - 1)
    }

    fn gate(&mut self, gate: Gate, operands: &[Wire]) -> Wire {
        let ops = operands.iter().map(|&w| self.reserve(w)).collect();
        self.gate_reserved(gate, ops)
    }

    pub fn and(&mut self, a: Wire, b: Wire) -> Wire {
        self.gate(Gate::And, &[a, b])
    }

    pub fn or(&mut self, a: Wire, b: Wire) -> Wire {
        self.gate(Gate::Or, &[a, b])
    }

    pub fn not(&mut self, a: Wire) -> Wire {
        self.gate(Gate::Not, &[a])
    }

    /// Constant 0 as `x1 & !x1`, tapping input 1.
    pub fn zero(&mut self) -> Wire {
        let x = self.input(1);
        let nx = self.not(x);
        self.and(x, nx)
    }

    /// Constant 1 as `!(x1 & !x1)`.
    pub fn one(&mut self) -> Wire {
        let z = self.zero();
        self.not(z)
    }

    /// Declares the next output.
    pub fn output(&mut self, w: Wire) {
        let op = self.reserve(w);
        self.outputs.push(op);
    }

    /// Number of fork gates `build` will insert.
    pub fn fork_count(&self) -> usize {
        self.nodes.iter().map(|n| n.uses.saturating_sub(1)).sum()
    }

    pub fn build(self) -> Result<Circuit, BuildError> {
        if self.outputs.is_empty() {
            return Err(BuildError::NoOutputs);
        }
        for (k, node) in self.nodes.iter().enumerate() {
            if node.uses == 0 && node.gate.is_internal() {
                return Err(BuildError::Unused(k));
            }
        }

        // Vertex layout and, per node, the vertex serving each of its uses.
        let mut gates = Vec::new();
        let mut preds: Vec<Vec<usize>> = Vec::new();
        let mut serve: Vec<Vec<usize>> = Vec::with_capacity(self.nodes.len());
        let take = |serve: &Vec<Vec<usize>>, op: Operand| serve[op.wire][op.slot];

        for node in &self.nodes {
            let v = gates.len();
            gates.push(node.gate);
            let ops: Vec<usize> = node.operands.iter().map(|&op| take(&serve, op)).collect();
            preds.push(ops);

            let r = node.uses;
            let mut served = Vec::with_capacity(r);
            if r <= 1 {
                served.resize(r, v);
            } else {
                let mut parent = v;
                for k in 0..r - 1 {
                    let f = gates.len();
                    gates.push(Gate::Fork);
                    preds.push(vec![parent]);
                    served.push(f);
                    if k == r - 2 {
                        served.push(f);
                    }
                    parent = f;
                }
            }
            serve.push(served);
        }
        for (j, &op) in self.outputs.iter().enumerate() {
            gates.push(Gate::Output(j + 1));
            preds.push(vec![take(&serve, op)]);
        }

        let edges = preds
            .iter()
            .enumerate()
            .flat_map(|(v, ps)| ps.iter().map(move |&p| (p, v)))
            .collect();
        let circuit = Circuit::from_parts(self.inputs, self.outputs.len(), gates, edges);
        debug_assert!(circuit.validate().is_ok(), "{}", circuit.validate());
        Ok(circuit)
    }
}
