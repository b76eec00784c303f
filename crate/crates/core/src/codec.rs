//! Bit-exact circuit codes, the total decoder and the universal evaluator.
//!
//! A code is first written over the letters `a, b, c, d` and then mapped to
//! bits as `00, 01, 10, 11`. With `w = ⌈log2 |V|⌉` and `g = ⌈log2(4 + m + n)⌉`:
//!
//! * each vertex, in sequence order, is its id in `w` letters over `{a, b}`
//!   followed by its gate index in `g` letters over `{c, d}`;
//! * each edge, in sequence order, is `src c dst d` with ids over `{a, b}`.
//!
//! Ids and gate indices are big-endian binary (`a`/`c` = 0, `b`/`d` = 1).
//! Gate indices: `and` 0, `or` 1, `not` 2, `fork` 3, `in(i)` `3 + i`,
//! `out(j)` `3 + m + j`.

use std::fmt;

use thiserror::Error;

use crate::bits::BitString;
use crate::circuit::{Circuit, Gate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    A,
    B,
    C,
    D,
}

impl Symbol {
    fn from_pair(hi: bool, lo: bool) -> Symbol {
        match (hi, lo) {
            (false, false) => Symbol::A,
            (false, true) => Symbol::B,
            (true, false) => Symbol::C,
            (true, true) => Symbol::D,
        }
    }

    fn pair(self) -> [bool; 2] {
        match self {
            Symbol::A => [false, false],
            Symbol::B => [false, true],
            Symbol::C => [true, false],
            Symbol::D => [true, true],
        }
    }

    fn is_id(self) -> bool {
        matches!(self, Symbol::A | Symbol::B)
    }

    /// The binary digit carried by the symbol within its alphabet half.
    fn digit(self) -> usize {
        matches!(self, Symbol::B | Symbol::D) as usize
    }
}

/// A word over `{a, b, c, d}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QuaternaryString(Vec<Symbol>);

impl QuaternaryString {
    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn to_bits(&self) -> BitString {
        self.0.iter().flat_map(|s| s.pair()).collect()
    }

    /// `None` for odd-length input.
    pub fn from_bits(bits: &BitString) -> Option<QuaternaryString> {
        if !bits.len().is_multiple_of(2) {
            return None;
        }
        Some(QuaternaryString(
            bits.bits().chunks(2).map(|p| Symbol::from_pair(p[0], p[1])).collect(),
        ))
    }

    fn push_number(&mut self, value: usize, width: usize, zero: Symbol, one: Symbol) {
        for k in (0..width).rev() {
            self.0.push(if (value >> k) & 1 == 1 { one } else { zero });
        }
    }
}

impl fmt::Display for QuaternaryString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                Symbol::A => "a",
                Symbol::B => "b",
                Symbol::C => "c",
                Symbol::D => "d",
            })?;
        }
        Ok(())
    }
}

/// `⌈log2 x⌉` for `x >= 1`.
pub fn ceil_log2(x: usize) -> usize {
    assert!(x >= 1);
    (usize::BITS - (x - 1).leading_zeros()) as usize
}

/// Code length in bits of a circuit with the given counts.
pub fn code_len(vertices: usize, edges: usize, m: usize, n: usize) -> usize {
    let w = ceil_log2(vertices);
    let g = ceil_log2(4 + m + n);
    2 * (vertices * (w + g) + edges * (2 + 2 * w))
}

fn gate_index(gate: Gate, m: usize) -> usize {
    match gate {
        Gate::And => 0,
        Gate::Or => 1,
        Gate::Not => 2,
        Gate::Fork => 3,
        Gate::Input(i) => 3 + i,
        Gate::Output(j) => 3 + m + j,
    }
}

/// The letter form of `code(C)`.
pub fn encode_quaternary(c: &Circuit) -> QuaternaryString {
    let w = ceil_log2(c.vertex_count());
    let g = ceil_log2(4 + c.inputs() + c.outputs());
    let mut q = QuaternaryString(Vec::with_capacity(code_len(c.vertex_count(), c.edge_count(), c.inputs(), c.outputs()) / 2));
    for (v, &gate) in c.gates().iter().enumerate() {
        q.push_number(v, w, Symbol::A, Symbol::B);
        q.push_number(gate_index(gate, c.inputs()), g, Symbol::C, Symbol::D);
    }
    for &(s, d) in c.edges() {
        q.push_number(s, w, Symbol::A, Symbol::B);
        q.0.push(Symbol::C);
        q.push_number(d, w, Symbol::A, Symbol::B);
        q.0.push(Symbol::D);
    }
    q
}

/// `code(C)`. The circuit should be valid; codes of invalid circuits are
/// rejected by [`parse_code`].
pub fn encode(c: &Circuit) -> BitString {
    encode_quaternary(c).to_bits()
}

/// Why a bit string is not a code.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("odd bit length")]
    OddLength,
    #[error("empty code")]
    Empty,
    #[error("malformed at symbol {0}: {1}")]
    Malformed(usize, &'static str),
    #[error("decoded structure is not a valid circuit")]
    Invalid,
    #[error("re-encoding does not reproduce the input")]
    NotCanonical,
}

struct Reader<'a> {
    s: &'a [Symbol],
    pos: usize,
}

impl Reader<'_> {
    fn at_end(&self) -> bool {
        self.pos == self.s.len()
    }

    fn run(&self, id: bool) -> usize {
        self.s[self.pos..].iter().take_while(|s| s.is_id() == id).count()
    }

    fn number(&mut self, width: usize, id: bool) -> Result<usize, CodeError> {
        if self.run(id) < width {
            return Err(CodeError::Malformed(self.pos, "short field"));
        }
        let v = self.s[self.pos..self.pos + width].iter().fold(0, |acc, s| acc * 2 + s.digit());
        self.pos += width;
        Ok(v)
    }

    fn expect(&mut self, sym: Symbol) -> Result<(), CodeError> {
        if self.s.get(self.pos) != Some(&sym) {
            return Err(CodeError::Malformed(self.pos, "missing edge delimiter"));
        }
        self.pos += 1;
        Ok(())
    }
}

/// Strict decoding: succeeds exactly on the image of [`encode`] over valid circuits.
pub fn parse_code(c: &BitString) -> Result<Circuit, CodeError> {
    let q = QuaternaryString::from_bits(c).ok_or(CodeError::OddLength)?;
    let s = q.symbols();
    if s.is_empty() {
        return Err(CodeError::Empty);
    }
    let mut r = Reader { s, pos: 0 };
    let w = r.run(true);
    if w == 0 {
        return Err(CodeError::Malformed(0, "no leading id"));
    }

    // Vertex section: a label run of length 1 can only be an edge's `c`.
    let mut g = None;
    let mut labels = Vec::new();
    while !r.at_end() {
        let save = r.pos;
        let id = r.number(w, true)?;
        let len = r.run(false);
        if len <= 1 || g.is_some_and(|g| g != len) {
            r.pos = save;
            break;
        }
        if id != labels.len() {
            return Err(CodeError::Malformed(save, "vertex ids out of order"));
        }
        g = Some(len);
        labels.push(r.number(len, false)?);
    }
    let nv = labels.len();
    if nv == 0 {
        return Err(CodeError::Malformed(0, "no vertices"));
    }

    let mut edges = Vec::new();
    while !r.at_end() {
        let src = r.number(w, true)?;
        r.expect(Symbol::C)?;
        let dst = r.number(w, true)?;
        r.expect(Symbol::D)?;
        if src >= nv || dst >= nv {
            return Err(CodeError::Malformed(r.pos, "edge endpoint out of range"));
        }
        edges.push((src, dst));
    }

    // Interface labels are in(1..m) then out(1..n); inputs are the ones without incoming edges.
    let mut has_pred = vec![false; nv];
    for &(_, d) in &edges {
        has_pred[d] = true;
    }
    let m = (0..nv).filter(|&v| labels[v] >= 4 && !has_pred[v]).count();
    let n = labels.iter().filter(|&&l| l >= 4).count() - m;
    let gates = labels
        .iter()
        .map(|&l| match l {
            0 => Some(Gate::And),
            1 => Some(Gate::Or),
            2 => Some(Gate::Not),
            3 => Some(Gate::Fork),
            l if l <= 3 + m => Some(Gate::Input(l - 3)),
            l if l <= 3 + m + n => Some(Gate::Output(l - 3 - m)),
            _ => None,
        })
        .collect::<Option<Vec<_>>>()
        .ok_or(CodeError::Invalid)?;
    let circuit = Circuit::from_parts(m, n, gates, edges);
    if !circuit.validate().is_ok() {
        return Err(CodeError::Invalid);
    }
    if encode(&circuit) != *c {
        return Err(CodeError::NotCanonical);
    }
    Ok(circuit)
}

/// Whether `c` is `code(C)` for some circuit `C`.
pub fn is_code(c: &BitString) -> bool {
    parse_code(c).is_ok()
}

/// Where a decoded circuit came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodeOrigin {
    /// The input was a code.
    Code,
    /// Not a code; the largest identity circuit whose code fits.
    LargestIdentity,
    /// Not a code and shorter than every identity code; `identity_circuit(1)`.
    Undersized,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub circuit: Circuit,
    pub origin: DecodeOrigin,
}

/// Length of `code(identity_circuit(m))`.
pub fn identity_code_len(m: usize) -> usize {
    code_len(2 * m, m, m, m)
}

/// Total decoding with its provenance.
pub fn decode_detailed(c: &BitString) -> Decoded {
    if let Ok(circuit) = parse_code(c) {
        return Decoded {
            circuit,
            origin: DecodeOrigin::Code,
        };
    }
    if identity_code_len(1) > c.len() {
        return Decoded {
            circuit: Circuit::identity(1).expect("m >= 1"),
            origin: DecodeOrigin::Undersized,
        };
    }
    let mut m = 1;
    while identity_code_len(m + 1) <= c.len() {
        m += 1;
    }
    Decoded {
        circuit: Circuit::identity(m).expect("m >= 1"),
        origin: DecodeOrigin::LargestIdentity,
    }
}

/// `decode(c)`: total, and `decode(code(C)) = C`.
pub fn decode(c: &BitString) -> Circuit {
    decode_detailed(c).circuit
}

/// `ev(c, x)`: `decode(c)(x)` when the arity matches, otherwise `x`.
pub fn ev(c: &BitString, x: &BitString) -> BitString {
    let circuit = decode(c);
    if x.len() == circuit.inputs() {
        circuit.evaluate(x).expect("decoded circuits are valid")
    } else {
        x.clone()
    }
}

#[derive(Debug, Error)]
pub enum CcodeError {
    #[error("file shorter than its 4-byte header")]
    MissingHeader,
    #[error("header announces {bits} bits but the payload holds {available}")]
    Truncated { bits: usize, available: usize },
}

/// `.ccode` bytes: a 32-bit big-endian bit count, then the bits packed
/// big-endian and zero-padded to a whole byte.
pub fn to_ccode(c: &BitString) -> Vec<u8> {
    let len = u32::try_from(c.len()).expect("code length fits the header");
    let mut out = len.to_be_bytes().to_vec();
    for chunk in c.bits().chunks(8) {
        let byte = chunk.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | ((b as u8) << (7 - i)));
        out.push(byte);
    }
    out
}

pub fn from_ccode(bytes: &[u8]) -> Result<BitString, CcodeError> {
    let (header, payload) = bytes.split_at_checked(4).ok_or(CcodeError::MissingHeader)?;
    let bits = u32::from_be_bytes(header.try_into().expect("4 bytes")) as usize;
    if payload.len() * 8 < bits {
        return Err(CcodeError::Truncated {
            bits,
            available: payload.len() * 8,
        });
    }
    Ok((0..bits).map(|i| (payload[i / 8] >> (7 - i % 8)) & 1 == 1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    fn not_circuit() -> Circuit {
        Circuit::new(1, 1, vec![Gate::Input(1), Gate::Not, Gate::Output(1)], vec![(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn ceil_log2_values() {
        let got: Vec<usize> = (1..=9).map(ceil_log2).collect();
        assert_eq!(got, [0, 1, 2, 2, 3, 3, 3, 3, 4]);
    }

    #[test]
    fn identity_code() {
        let c = Circuit::identity(1).unwrap();
        // Vertices a dcc (in1 = 4) and b dcd (out1 = 5), then the edge a c b d.
        assert_eq!(encode_quaternary(&c).to_string(), "adccbdcdacbd");
        assert_eq!(encode(&c).len(), 24);
        assert_eq!(identity_code_len(1), 24);
    }

    #[test]
    fn not_code_length() {
        assert_eq!(encode(&not_circuit()).len(), 54);
        assert_eq!(code_len(3, 2, 1, 1), 54);
    }

    #[test]
    fn round_trip() {
        for c in [Circuit::identity(1).unwrap(), Circuit::identity(3).unwrap(), not_circuit()] {
            let code = encode(&c);
            assert!(is_code(&code));
            assert_eq!(decode(&code), c);
            assert_eq!(decode_detailed(&code).origin, DecodeOrigin::Code);
        }
    }

    #[test]
    fn non_codes() {
        assert!(!is_code(&BitString::zeros(10)));
        assert_eq!(parse_code(&BitString::zeros(3)), Err(CodeError::OddLength));
        let d = decode_detailed(&BitString::new());
        assert_eq!((d.circuit, d.origin), (Circuit::identity(1).unwrap(), DecodeOrigin::Undersized));
        let d = decode_detailed(&BitString::zeros(24));
        assert_eq!((d.circuit, d.origin), (Circuit::identity(1).unwrap(), DecodeOrigin::LargestIdentity));
        let big = identity_code_len(3);
        assert_eq!(decode(&BitString::zeros(big)), Circuit::identity(3).unwrap());
        assert_eq!(decode(&BitString::zeros(big - 2)), Circuit::identity(2).unwrap());
    }

    #[test]
    fn rejects_out_of_order_ids() {
        // Vertex ids must appear as 0, 1, 2, ...
        let mut q = encode_quaternary(&Circuit::identity(1).unwrap()).0;
        q.swap(0, 4);
        let c = QuaternaryString(q).to_bits();
        assert!(!is_code(&c));
    }

    #[test]
    fn evaluator() {
        let not = encode(&not_circuit());
        assert_eq!(ev(&not, &bits("1")), bits("0"));
        let id2 = encode(&Circuit::identity(2).unwrap());
        assert_eq!(ev(&id2, &bits("101")), bits("101"));
        assert_eq!(ev(&BitString::zeros(24), &bits("1")), bits("1"));
    }

    #[test]
    fn ccode_bytes() {
        let code = encode(&not_circuit());
        let bytes = to_ccode(&code);
        assert_eq!(&bytes[..4], &[0, 0, 0, 54]);
        assert_eq!(bytes.len(), 4 + 7);
        assert_eq!(from_ccode(&bytes).unwrap(), code);
        assert!(matches!(from_ccode(&bytes[..6]), Err(CcodeError::Truncated { bits: 54, available: 16 })));
        assert!(matches!(from_ccode(&[0, 1]), Err(CcodeError::MissingHeader)));
    }
}
