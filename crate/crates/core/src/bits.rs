//! Finite bitstrings over `{0,1}`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A finite sequence of bits. Ordering is lexicographic, which for strings of
/// equal length coincides with the big-endian numeric order.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString(Vec<bool>);

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid bit character {found:?} at position {position}")]
pub struct BitParseError {
    pub position: usize,
    pub found: char,
}

impl BitString {
    pub fn new() -> Self {
        BitString(Vec::new())
    }

    pub fn zeros(len: usize) -> Self {
        BitString(vec![false; len])
    }

    pub fn ones(len: usize) -> Self {
        BitString(vec![true; len])
    }

    /// The `len`-bit big-endian representation of `value`.
    ///
    /// Bits of `value` above position `len` are ignored.
    pub fn from_index(value: u64, len: usize) -> Self {
        BitString(
            (0..len)
                .rev()
                .map(|k| k < 64 && (value >> k) & 1 == 1)
                .collect(),
        )
    }

    /// Big-endian numeric value. Only meaningful for strings of at most 64 bits.
    pub fn to_index(&self) -> u64 {
        self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    /// All strings of length `len` in lexicographic order.
    pub fn all(len: usize) -> impl Iterator<Item = BitString> {
        assert!(len < 64, "cannot enumerate {{0,1}}^{len}");
        (0..1u64 << len).map(move |v| BitString::from_index(v, len))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.0.get(i).copied()
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = Vec::with_capacity(self.len() + other.len());
        bits.extend_from_slice(&self.0);
        bits.extend_from_slice(&other.0);
        BitString(bits)
    }

    /// The first `k` bits (or the whole string if it is shorter).
    pub fn prefix(&self, k: usize) -> BitString {
        BitString(self.0[..k.min(self.len())].to_vec())
    }

    /// Bits `k..`, empty when `k >= len`.
    pub fn suffix_from(&self, k: usize) -> BitString {
        BitString(self.0[k.min(self.len())..].to_vec())
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.0
    }
}

impl From<Vec<bool>> for BitString {
    fn from(bits: Vec<bool>) -> Self {
        BitString(bits)
    }
}

impl From<&[bool]> for BitString {
    fn from(bits: &[bool]) -> Self {
        BitString(bits.to_vec())
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitString(iter.into_iter().collect())
    }
}

impl FromStr for BitString {
    type Err = BitParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .enumerate()
            .map(|(position, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                found => Err(BitParseError { position, found }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// Shorthand for tests and examples: `bits("0110")`.
///
/// Panics on characters other than `0` and `1`.
pub fn bits(s: &str) -> BitString {
    s.parse().expect("literal bitstring")
}
