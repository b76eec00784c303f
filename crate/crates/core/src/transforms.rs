//! Circuit surgeries that pad the interface while keeping the original function
//! visible on the original coordinates, the two normalization pipelines built
//! from them, and the transfer of inverse tables across each padding step.
//!
//! New inputs and outputs are always appended after the existing ones.

use thiserror::Error;

use crate::bits::BitString;
use crate::circuit::{Cap, Circuit, CircuitError, Gate};
use crate::table::FunctionTable;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("table is {got_m}->{got_n} bits, padding step expects {want_m}->{want_n}")]
    Arity {
        want_m: usize,
        want_n: usize,
        got_m: usize,
        got_n: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PaddingKind {
    /// `j` new inputs, each wired straight to a new output.
    IdentityWires(usize),
    /// `k` new inputs with no outgoing edge.
    DanglingInputs(usize),
    /// `k` new outputs fixed to 0, derived from input 1. `tap_connected`
    /// records whether input 1 already had an outgoing edge.
    ConstantZeroOutputs { count: usize, tap_connected: bool },
}

/// One padding step applied to a circuit with `original_m` inputs and
/// `original_n` outputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PaddingRecord {
    pub kind: PaddingKind,
    pub original_m: usize,
    pub original_n: usize,
}

impl PaddingRecord {
    /// Interface of the padded circuit.
    pub fn padded_arity(&self) -> (usize, usize) {
        let (m, n) = (self.original_m, self.original_n);
        match self.kind {
            PaddingKind::IdentityWires(j) => (m + j, n + j),
            PaddingKind::DanglingInputs(k) => (m + k, n),
            PaddingKind::ConstantZeroOutputs { count, .. } => (m, n + count),
        }
    }

    /// `size(padded) - size(original)`.
    pub fn size_delta(&self) -> usize {
        match self.kind {
            PaddingKind::IdentityWires(j) => 3 * j,
            PaddingKind::DanglingInputs(k) => k,
            PaddingKind::ConstantZeroOutputs { count: 0, .. } => 0,
            // Core: fork, not, and plus four edges, and one more fork and edge
            // when the tap already feeds something. Each zero then costs an
            // output vertex and its edge, every zero past the first a fork and its edge.
            PaddingKind::ConstantZeroOutputs { count, tap_connected } => {
                let core = if tap_connected { 9 } else { 7 };
                core + 4 * count - 2
            }
        }
    }

    /// Restricts an inverse table of the padded circuit to one of the original.
    ///
    /// Inverses are preserved: if `table` is a semi-inverse of the padded
    /// circuit, the result is a semi-inverse of the original.
    pub fn transfer_down(&self, table: &FunctionTable) -> Result<FunctionTable, TransformError> {
        let (pm, pn) = self.padded_arity();
        self.check_table(table, pn, pm)?;
        let (m, n) = (self.original_m, self.original_n);
        let mut out = FunctionTable::empty(n, m);
        for y in BitString::all(n) {
            let x = match self.kind {
                PaddingKind::IdentityWires(j) => table.get(&y.concat(&BitString::zeros(j))).map(|x| x.prefix(m)),
                PaddingKind::DanglingInputs(_) => table.get(&y).map(|x| x.prefix(m)),
                PaddingKind::ConstantZeroOutputs { count, .. } => table.get(&y.concat(&BitString::zeros(count))).cloned(),
            };
            if let Some(x) = x {
                out.insert(y, x).expect("lengths fixed above");
            }
        }
        Ok(out)
    }

    /// Extends an inverse table of the original circuit to the padded one.
    ///
    /// The result is a semi-inverse of the padded circuit exactly when `table`
    /// is a semi-inverse of the original.
    pub fn lift(&self, table: &FunctionTable) -> Result<FunctionTable, TransformError> {
        let (m, n) = (self.original_m, self.original_n);
        self.check_table(table, n, m)?;
        let (pm, pn) = self.padded_arity();
        let mut out = FunctionTable::empty(pn, pm);
        for (y, x) in table.iter() {
            match self.kind {
                PaddingKind::IdentityWires(j) => {
                    for z in BitString::all(j) {
                        out.insert(y.concat(&z), x.concat(&z)).expect("lengths fixed above");
                    }
                }
                PaddingKind::DanglingInputs(k) => {
                    out.insert(y.clone(), x.concat(&BitString::zeros(k))).expect("lengths fixed above");
                }
                PaddingKind::ConstantZeroOutputs { count, .. } => {
                    for w in BitString::all(count) {
                        out.insert(y.concat(&w), x.clone()).expect("lengths fixed above");
                    }
                }
            }
        }
        Ok(out)
    }

    fn check_table(&self, table: &FunctionTable, want_m: usize, want_n: usize) -> Result<(), TransformError> {
        if (table.domain_len(), table.codomain_len()) != (want_m, want_n) {
            return Err(TransformError::Arity {
                want_m,
                want_n,
                got_m: table.domain_len(),
                got_n: table.codomain_len(),
            });
        }
        Ok(())
    }
}

/// Applies [`PaddingRecord::transfer_down`] for a pipeline, last step first.
pub fn transfer_down_chain(table: &FunctionTable, records: &[PaddingRecord]) -> Result<FunctionTable, TransformError> {
    records.iter().rev().try_fold(table.clone(), |t, r| r.transfer_down(&t))
}

/// Applies [`PaddingRecord::lift`] for a pipeline, first step first.
pub fn lift_chain(table: &FunctionTable, records: &[PaddingRecord]) -> Result<FunctionTable, TransformError> {
    records.iter().try_fold(table.clone(), |t, r| r.lift(&t))
}

fn checked(c: &Circuit) -> Result<(), CircuitError> {
    let report = c.validate();
    if report.is_ok() {
        Ok(())
    } else {
        Err(CircuitError::Invalid(report))
    }
}

/// Appends `j` identity wires: `in(m+i) -> out(n+i)` for `i = 1..j`.
pub fn add_identity_wires(c: &Circuit, j: usize) -> Result<(Circuit, PaddingRecord), CircuitError> {
    checked(c)?;
    let (m, n, mut gates, mut edges) = c.clone().into_parts();
    for i in 1..=j {
        let v = gates.len();
        gates.push(Gate::Input(m + i));
        gates.push(Gate::Output(n + i));
        edges.push((v, v + 1));
    }
    let record = PaddingRecord {
        kind: PaddingKind::IdentityWires(j),
        original_m: m,
        original_n: n,
    };
    Ok((Circuit::from_parts(m + j, n + j, gates, edges), record))
}

/// Appends `k` inputs that feed nothing.
pub fn add_dangling_inputs(c: &Circuit, k: usize) -> Result<(Circuit, PaddingRecord), CircuitError> {
    checked(c)?;
    let (m, n, mut gates, edges) = c.clone().into_parts();
    gates.extend((1..=k).map(|i| Gate::Input(m + i)));
    let record = PaddingRecord {
        kind: PaddingKind::DanglingInputs(k),
        original_m: m,
        original_n: n,
    };
    Ok((Circuit::from_parts(m + k, n, gates, edges), record))
}

/// Appends `k` outputs that are constantly 0.
///
/// Input 1 is copied by a fork (only when it already feeds a vertex `w`, whose
/// edge is rerouted through that fork) and a second fork feeding `x1 & !x1`.
/// The zero then fans out through a left-deep fork chain.
pub fn add_zero_outputs(c: &Circuit, k: usize) -> Result<(Circuit, PaddingRecord), CircuitError> {
    checked(c)?;
    let (m, n, mut gates, mut edges) = c.clone().into_parts();
    let tap = c.find(Gate::Input(1)).expect("valid circuits have input 1");
    let tap_edge = edges.iter().position(|&(s, _)| s == tap);
    let record = PaddingRecord {
        kind: PaddingKind::ConstantZeroOutputs {
            count: k,
            tap_connected: tap_edge.is_some(),
        },
        original_m: m,
        original_n: n,
    };
    if k == 0 {
        return Ok((Circuit::from_parts(m, n, gates, edges), record));
    }

    let zero = tap_zero(&mut gates, &mut edges, tap);
    for (i, src) in fan_out(&mut gates, &mut edges, zero, k).into_iter().enumerate() {
        gates.push(Gate::Output(n + i + 1));
        edges.push((src, gates.len() - 1));
    }
    Ok((Circuit::from_parts(m, n + k, gates, edges), record))
}

/// Appends `x & !x` computed from a copy of vertex `tap` and returns the `and`
/// vertex. An existing out-edge of `tap` is rerouted through a new fork.
pub(crate) fn tap_zero(gates: &mut Vec<Gate>, edges: &mut Vec<(usize, usize)>, tap: usize) -> usize {
    let mut push = |g: Gate| {
        gates.push(g);
        gates.len() - 1
    };
    let source = match edges.iter().position(|&(s, _)| s == tap) {
        Some(e) => {
            let f1 = push(Gate::Fork);
            edges[e].0 = f1;
            edges.push((tap, f1));
            f1
        }
        None => tap,
    };
    let f2 = push(Gate::Fork);
    let not = push(Gate::Not);
    let and = push(Gate::And);
    edges.extend([(source, f2), (f2, and), (f2, not), (not, and)]);
    and
}

/// Appends a left-deep chain of `k - 1` forks below `src` and returns the `k`
/// vertices that feed its consumers, in order. `k >= 1`.
pub(crate) fn fan_out(gates: &mut Vec<Gate>, edges: &mut Vec<(usize, usize)>, src: usize, k: usize) -> Vec<usize> {
    assert!(k >= 1);
    let mut feeders = Vec::with_capacity(k);
    let mut parent = src;
    for i in 0..k - 1 {
        gates.push(Gate::Fork);
        let f = gates.len() - 1;
        edges.push((parent, f));
        feeders.push(f);
        if i == k - 2 {
            feeders.push(f);
        }
        parent = f;
    }
    if k == 1 {
        feeders.push(src);
    }
    feeders
}

/// Pads the smaller side so that `m = n`. `None` record when already equal.
pub fn equalize_io(c: &Circuit) -> Result<(Circuit, Option<PaddingRecord>), CircuitError> {
    let (m, n) = (c.inputs(), c.outputs());
    if m < n {
        let (c1, r) = add_dangling_inputs(c, n - m)?;
        Ok((c1, Some(r)))
    } else if m > n {
        let (c1, r) = add_zero_outputs(c, m - n)?;
        Ok((c1, Some(r)))
    } else {
        checked(c)?;
        Ok((c.clone(), None))
    }
}

/// Output of [`normalize_surjective`].
#[derive(Clone, Debug)]
pub struct SurjectiveNormalization {
    /// `C` plus `size(C)` identity wires.
    pub c1: Circuit,
    /// `C1` plus `2 n1 - m1 + 1` dangling inputs.
    pub c2: Circuit,
    pub records: [PaddingRecord; 2],
}

/// Brings `C` into the shape `2n < m <= size <= 6n` without changing whether
/// it is surjective.
pub fn normalize_surjective(c: &Circuit) -> Result<SurjectiveNormalization, CircuitError> {
    let (c1, r1) = add_identity_wires(c, c.size())?;
    let k = 2 * c1.outputs() + 1 - c1.inputs();
    let (c2, r2) = add_dangling_inputs(&c1, k)?;
    Ok(SurjectiveNormalization {
        c1,
        c2,
        records: [r1, r2],
    })
}

/// Equalizes the interface, then adds `size` identity wires.
pub fn normalize_lengthpreserving(c: &Circuit) -> Result<(Circuit, Vec<PaddingRecord>), CircuitError> {
    let (c1, r1) = equalize_io(c)?;
    let (c2, r2) = add_identity_wires(&c1, c1.size())?;
    Ok((c2, r1.into_iter().chain([r2]).collect()))
}

/// The function of `padded` read on its first `m` inputs and first `n`
/// outputs, with the remaining inputs fixed to zero.
pub fn restrict_to_original(padded: &Circuit, m: usize, n: usize, cap: Cap) -> Result<FunctionTable, CircuitError> {
    cap.check("input count", m)?;
    let ev = padded.evaluator()?;
    let pad = BitString::zeros(padded.inputs() - m);
    let entries = BitString::all(m).map(|x| {
        let y = ev.eval(&x.concat(&pad)).expect("arity matches").prefix(n);
        (x, y)
    });
    Ok(FunctionTable::from_entries(m, n, entries).expect("lengths fixed above"))
}
