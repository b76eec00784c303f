//! Universal evaluation on `(code, input)` pairs, its length-preserving
//! restriction, hardwiring of input prefixes, and the interleaving of
//! surjective circuits into one length-equality preserving function.

use std::fmt;

use thiserror::Error;

use crate::bits::BitString;
use crate::circuit::{Cap, Circuit, CircuitError, Gate};
use crate::codec::{ev, parse_code};
use crate::transforms::{fan_out, tap_zero};

/// `(c, x) ↦ (c, ev(c, x))`.
pub fn ev_circ(c: &BitString, x: &BitString) -> (BitString, BitString) {
    (c.clone(), ev(c, x))
}

/// Result of [`ev_o_detailed`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvoOutcome {
    pub code: BitString,
    pub value: BitString,
    /// Whether the evaluation branch was taken.
    pub fired: bool,
}

/// The length bound `12 m log2(2m)` on codes accepted by `ev_o`.
pub fn evo_code_bound(m: usize) -> f64 {
    12.0 * m as f64 * (2.0 * m as f64).log2()
}

/// `ev_o(c, x)`: `(c, C(x))` when `c = code(C)`, `|c| <= 12 m log2(2m)` and
/// `|x| = m = n` for `C`; `(c, x)` otherwise.
pub fn ev_o_detailed(c: &BitString, x: &BitString) -> EvoOutcome {
    if let Ok(circuit) = parse_code(c) {
        let m = circuit.inputs();
        if m == circuit.outputs() && x.len() == m && c.len() as f64 <= evo_code_bound(m) {
            let value = circuit.evaluate(x).expect("parsed codes are valid circuits");
            return EvoOutcome {
                code: c.clone(),
                value,
                fired: true,
            };
        }
    }
    EvoOutcome {
        code: c.clone(),
        value: x.clone(),
        fired: false,
    }
}

/// `ev_o(c, x)`; always `|c| + |x|` bits in total.
pub fn ev_o(c: &BitString, x: &BitString) -> (BitString, BitString) {
    let o = ev_o_detailed(c, x);
    (o.code, o.value)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HardwireError {
    #[error("prefix of {prefix} bits is longer than the {inputs} circuit inputs")]
    PrefixTooLong { prefix: usize, inputs: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// A circuit with some inputs fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hardwired {
    /// At least one input remains.
    Circuit(Circuit),
    /// Every input was fixed. The gate set has no constant sources, so the
    /// result is kept as the output tuple itself.
    Constant(BitString),
}

impl Hardwired {
    pub fn inputs(&self) -> usize {
        match self {
            Hardwired::Circuit(c) => c.inputs(),
            Hardwired::Constant(_) => 0,
        }
    }

    pub fn evaluate(&self, x: &BitString) -> Result<BitString, CircuitError> {
        match self {
            Hardwired::Circuit(c) => c.evaluate(x),
            Hardwired::Constant(y) if x.is_empty() => Ok(y.clone()),
            Hardwired::Constant(_) => Err(CircuitError::Arity { expected: 0, got: x.len() }),
        }
    }

    pub fn into_circuit(self) -> Option<Circuit> {
        match self {
            Hardwired::Circuit(c) => Some(c),
            Hardwired::Constant(_) => None,
        }
    }
}

/// The circuit `x ↦ E(prefix · x)` on the last `m - |prefix|` inputs of `E`.
///
/// Each fixed input that fed a vertex is replaced by a copy of `x & !x`
/// (negated for 1) built from the first remaining input.
pub fn hardwire(e: &Circuit, prefix: &BitString) -> Result<Hardwired, HardwireError> {
    let report = e.validate();
    if !report.is_ok() {
        return Err(CircuitError::Invalid(report).into());
    }
    let (m, k) = (e.inputs(), prefix.len());
    if k > m {
        return Err(HardwireError::PrefixTooLong { prefix: k, inputs: m });
    }
    if k == m {
        return Ok(Hardwired::Constant(e.evaluate(prefix)?));
    }

    let (_, n, mut gates, mut edges) = e.clone().into_parts();
    let fixed: Vec<(usize, bool)> = edges
        .iter()
        .enumerate()
        .filter_map(|(idx, &(s, _))| match gates[s] {
            Gate::Input(i) if i <= k => Some((idx, prefix.bits()[i - 1])),
            _ => None,
        })
        .collect();
    if !fixed.is_empty() {
        let tap = e.find(Gate::Input(k + 1)).expect("valid circuits have every input");
        let zero = tap_zero(&mut gates, &mut edges, tap);
        let feeders = fan_out(&mut gates, &mut edges, zero, fixed.len());
        for (&(idx, bit), src) in fixed.iter().zip(feeders) {
            let src = if bit {
                gates.push(Gate::Not);
                edges.push((src, gates.len() - 1));
                gates.len() - 1
            } else {
                src
            };
            edges[idx].0 = src;
        }
    }

    // Drop the fixed input vertices and renumber the rest.
    let mut new_id = vec![usize::MAX; gates.len()];
    let mut kept = Vec::with_capacity(gates.len());
    for (v, &g) in gates.iter().enumerate() {
        match g {
            Gate::Input(i) if i <= k => {}
            Gate::Input(i) => {
                new_id[v] = kept.len();
                kept.push(Gate::Input(i - k));
            }
            g => {
                new_id[v] = kept.len();
                kept.push(g);
            }
        }
    }
    let edges = edges.into_iter().map(|(s, d)| (new_id[s], new_id[d])).collect();
    let c = Circuit::from_parts(m - k, n, kept, edges);
    debug_assert!(c.validate().is_ok(), "{}", c.validate());
    Ok(Hardwired::Circuit(c))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("a family needs at least one circuit")]
    Empty,
    #[error("member {member} is not surjective")]
    NotSurjective { member: usize },
    #[error("member {member} violates {inequality} ({detail})")]
    Inequality {
        member: usize,
        inequality: &'static str,
        detail: String,
    },
    #[error("member {member}: {source}")]
    Circuit { member: usize, source: CircuitError },
}

/// `(m_k, n_k, size_k)` of one member.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MemberShape {
    pub m: usize,
    pub n: usize,
    pub size: usize,
}

impl fmt::Display for MemberShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m = {}, n = {}, size = {}", self.m, self.n, self.size)
    }
}

/// A validated sequence `C_1, ..., C_K` of surjective circuits whose shapes
/// grow fast enough to interleave them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterleavedFamily {
    circuits: Vec<Circuit>,
    shapes: Vec<MemberShape>,
}

fn inequality(member: usize, holds: bool, inequality: &'static str, detail: String) -> Result<(), FamilyError> {
    if holds {
        Ok(())
    } else {
        Err(FamilyError::Inequality {
            member,
            inequality,
            detail,
        })
    }
}

/// Validates a family. Members are numbered from 1 in errors.
///
/// Each member must be surjective with `2n < m <= size < 6n`; consecutive
/// members need `size_{k+1} > size_k`, `n_{k+1} > 1 + n_k`, `m_{k+1} > 2 m_k`
/// and `m_{k+1} - m_k > n_{k+1} - n_k > 1`.
pub fn interleave_family(circuits: Vec<Circuit>, cap: Cap) -> Result<InterleavedFamily, FamilyError> {
    if circuits.is_empty() {
        return Err(FamilyError::Empty);
    }
    let mut shapes = Vec::with_capacity(circuits.len());
    for (idx, c) in circuits.iter().enumerate() {
        let member = idx + 1;
        let s = MemberShape {
            m: c.inputs(),
            n: c.outputs(),
            size: c.size(),
        };
        inequality(member, 2 * s.n < s.m, "2n < m", s.to_string())?;
        inequality(member, s.m <= s.size, "m <= size", s.to_string())?;
        inequality(member, s.size < 6 * s.n, "size < 6n", s.to_string())?;
        let surjective = c
            .is_surjective(cap)
            .map_err(|source| FamilyError::Circuit { member, source })?;
        if !surjective {
            return Err(FamilyError::NotSurjective { member });
        }
        shapes.push(s);
    }
    for (idx, w) in shapes.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let member = idx + 2;
        let detail = format!("{a} then {b}");
        inequality(member, b.size > a.size, "size_{k+1} > size_k", detail.clone())?;
        inequality(member, b.n > 1 + a.n, "n_{k+1} > 1 + n_k", detail.clone())?;
        inequality(member, b.m > 2 * a.m, "m_{k+1} > 2 m_k", detail.clone())?;
        inequality(member, b.m - a.m > b.n - a.n, "m_{k+1} - m_k > n_{k+1} - n_k", detail.clone())?;
        inequality(member, b.n - a.n > 1, "n_{k+1} - n_k > 1", detail)?;
    }
    Ok(InterleavedFamily { circuits, shapes })
}

impl InterleavedFamily {
    pub fn circuits(&self) -> &[Circuit] {
        &self.circuits
    }

    pub fn shapes(&self) -> &[MemberShape] {
        &self.shapes
    }

    /// Output length for inputs of length `len`.
    pub fn output_len(&self, len: usize) -> usize {
        match self.locate(len) {
            Band::Below | Band::Above => len,
            Band::Member(k) => self.shapes[k].n,
            Band::Projection(k, i) => {
                let (a, b) = (self.shapes[k], self.shapes[k + 1]);
                if i < b.n - a.n {
                    a.n + i
                } else {
                    b.n - 1
                }
            }
        }
    }

    /// `F(x)`: `C_k(x)` when `|x| = m_k`; between `m_k` and `m_{k+1}` the
    /// prefix of length [`InterleavedFamily::output_len`]; identity below
    /// `m_1` and above `m_K`.
    pub fn eval(&self, x: &BitString) -> BitString {
        match self.locate(x.len()) {
            Band::Below | Band::Above => x.clone(),
            Band::Member(k) => self.circuits[k].evaluate(x).expect("arity matches the member"),
            Band::Projection(..) => x.prefix(self.output_len(x.len())),
        }
    }

    fn locate(&self, len: usize) -> Band {
        let first = self.shapes[0].m;
        if len < first {
            return Band::Below;
        }
        let k = self.shapes.partition_point(|s| s.m <= len) - 1;
        if len == self.shapes[k].m {
            Band::Member(k)
        } else if k + 1 == self.shapes.len() {
            Band::Above
        } else {
            Band::Projection(k, len - self.shapes[k].m)
        }
    }
}

enum Band {
    Below,
    Member(usize),
    /// Strictly between `m_k` and `m_{k+1}`, at offset `i` above `m_k`.
    Projection(usize, usize),
    Above,
}

/// `F(x)` for a validated family.
pub fn eval_interleaved(family: &InterleavedFamily, x: &BitString) -> BitString {
    family.eval(x)
}

/// One line of a family manifest: `member <path> <m> <n> <size>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: String,
    pub shape: MemberShape,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("manifest line {line}: {message}")]
pub struct ManifestError {
    pub line: usize,
    pub message: String,
}

/// Parses a manifest; blank lines and `#` comments are ignored.
pub fn parse_manifest(text: &str) -> Result<Vec<ManifestEntry>, ManifestError> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: &str| ManifestError {
            line: i + 1,
            message: message.to_string(),
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [tag, path, m, n, size] = fields[..] else {
            return Err(err("expected `member <path> <m> <n> <size>`"));
        };
        if tag != "member" {
            return Err(err("expected `member`"));
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| err("counts must be non-negative integers"));
        entries.push(ManifestEntry {
            path: path.to_string(),
            shape: MemberShape {
                m: num(m)?,
                n: num(n)?,
                size: num(size)?,
            },
        });
    }
    Ok(entries)
}

pub fn write_manifest(entries: &[ManifestEntry]) -> String {
    entries
        .iter()
        .map(|e| format!("member {} {} {} {}\n", e.path, e.shape.m, e.shape.n, e.shape.size))
        .collect()
}

/// `in(1..n) -> out(1..n)` with `m - n` further inputs left dangling.
pub fn projection_circuit(m: usize, n: usize) -> Result<Circuit, CircuitError> {
    if n == 0 || m < n {
        return Err(CircuitError::Empty);
    }
    let mut gates: Vec<Gate> = (1..=m).map(Gate::Input).collect();
    gates.extend((1..=n).map(Gate::Output));
    let edges = (0..n).map(|j| (j, m + j)).collect();
    Circuit::new(m, n, gates, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::codec::encode;
    use crate::transforms::normalize_lengthpreserving;

    fn not_circuit() -> Circuit {
        Circuit::new(1, 1, vec![Gate::Input(1), Gate::Not, Gate::Output(1)], vec![(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn ev_circ_cases() {
        let c = encode(&not_circuit());
        assert_eq!(ev_circ(&c, &bits("1")), (c.clone(), bits("0")));
        let junk = bits("0101");
        assert_eq!(ev_circ(&junk, &bits("11")), (junk.clone(), bits("11")));
    }

    #[test]
    fn ev_o_passes_not_through() {
        // |code(NOT)| = 54 > 12 * 1 * log2(2) = 12.
        let c = encode(&not_circuit());
        let o = ev_o_detailed(&c, &bits("1"));
        assert!(!o.fired);
        assert_eq!(ev_o(&c, &bits("1")), (c, bits("1")));
    }

    #[test]
    fn ev_o_bound_is_out_of_reach_for_square_circuits() {
        // Codes of m -> m circuits carry at least 2m vertices and m edges.
        for m in 1..200 {
            let w = crate::codec::ceil_log2(2 * m);
            let g = crate::codec::ceil_log2(4 + 2 * m);
            let least = 2 * (2 * m * (w + g) + m * (2 + 2 * w));
            assert!(least as f64 > evo_code_bound(m), "m = {m}");
        }
        let (c2, _) = normalize_lengthpreserving(&not_circuit()).unwrap();
        let code = encode(&c2);
        assert!(code.len() as f64 > evo_code_bound(c2.inputs()));
        assert!(!ev_o_detailed(&code, &BitString::zeros(c2.inputs())).fired);
    }

    #[test]
    fn hardwire_identity_prefix() {
        let id2 = Circuit::identity(2).unwrap();
        let h = hardwire(&id2, &bits("1")).unwrap();
        let c = h.clone().into_circuit().unwrap();
        assert!(c.validate().is_ok());
        assert_eq!(c.inputs(), 1);
        for x in BitString::all(1) {
            assert_eq!(h.evaluate(&x).unwrap(), bits("1").concat(&x));
        }
    }

    #[test]
    fn hardwire_everything_or_nothing() {
        let c = not_circuit();
        assert_eq!(hardwire(&c, &BitString::new()).unwrap(), Hardwired::Circuit(c.clone()));
        let h = hardwire(&c, &bits("0")).unwrap();
        assert_eq!(h, Hardwired::Constant(bits("1")));
        assert_eq!(h.evaluate(&BitString::new()).unwrap(), bits("1"));
        assert!(h.evaluate(&bits("0")).is_err());
        assert_eq!(
            hardwire(&c, &bits("00")),
            Err(HardwireError::PrefixTooLong { prefix: 2, inputs: 1 })
        );
    }

    #[test]
    fn hardwire_into_connected_tap() {
        // (x1 & x2, x3) with x1 = 1, x2 = 0 fixed.
        let c = Circuit::new(
            3,
            2,
            vec![
                Gate::Input(1),
                Gate::Input(2),
                Gate::Input(3),
                Gate::And,
                Gate::Output(1),
                Gate::Output(2),
            ],
            vec![(0, 3), (1, 3), (3, 4), (2, 5)],
        )
        .unwrap();
        for p in BitString::all(2) {
            let h = hardwire(&c, &p).unwrap().into_circuit().unwrap();
            assert!(h.validate().is_ok(), "{}", h.validate());
            for x in BitString::all(1) {
                assert_eq!(h.evaluate(&x).unwrap(), c.evaluate(&p.concat(&x)).unwrap());
            }
        }
    }

    fn toy_family() -> InterleavedFamily {
        let members = vec![projection_circuit(3, 1).unwrap(), projection_circuit(7, 3).unwrap()];
        interleave_family(members, Cap::default()).unwrap()
    }

    #[test]
    fn toy_family_shapes() {
        let fam = toy_family();
        assert_eq!(
            fam.shapes(),
            &[MemberShape { m: 3, n: 1, size: 5 }, MemberShape { m: 7, n: 3, size: 13 }]
        );
        let lens: Vec<usize> = (0..=10).map(|l| fam.output_len(l)).collect();
        assert_eq!(lens, [0, 1, 2, 1, 2, 2, 2, 3, 8, 9, 10]);
        assert_eq!(eval_interleaved(&fam, &bits("10110")), bits("10"));
        assert_eq!(eval_interleaved(&fam, &bits("1011")), bits("10"));
        assert_eq!(eval_interleaved(&fam, &bits("101")), bits("1"));
    }

    #[test]
    fn family_guards() {
        let err = interleave_family(
            vec![projection_circuit(3, 1).unwrap(), projection_circuit(5, 3).unwrap()],
            Cap::default(),
        )
        .unwrap_err();
        assert!(matches!(err, FamilyError::Inequality { member: 2, inequality: "2n < m", .. }), "{err}");
        let err = interleave_family(
            vec![projection_circuit(7, 3).unwrap(), projection_circuit(13, 6).unwrap()],
            Cap::default(),
        )
        .unwrap_err();
        assert!(
            matches!(err, FamilyError::Inequality { member: 2, inequality: "m_{k+1} > 2 m_k", .. }),
            "{err}"
        );
        assert_eq!(interleave_family(vec![], Cap::default()), Err(FamilyError::Empty));
    }

    #[test]
    fn manifest_round_trip() {
        let text = "# toy\nmember a.circ 3 1 5\nmember b.circ 7 3 13\n";
        let entries = parse_manifest(text).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(write_manifest(&entries), "member a.circ 3 1 5\nmember b.circ 7 3 13\n");
        assert_eq!(parse_manifest("member a.circ 3 1").unwrap_err().line, 1);
    }
}
