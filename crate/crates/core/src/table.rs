//! Explicit, possibly partial, functions between `{0,1}^m` and `{0,1}^n`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::bits::BitString;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TableError {
    #[error("key {key} has length {got}, table domain length is {expected}")]
    KeyLength {
        key: BitString,
        expected: usize,
        got: usize,
    },
    #[error("value {value} has length {got}, table codomain length is {expected}")]
    ValueLength {
        value: BitString,
        expected: usize,
        got: usize,
    },
}

/// A partial function `F: {0,1}^m -> {0,1}^n` given by its graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FunctionTable {
    domain_len: usize,
    codomain_len: usize,
    entries: BTreeMap<BitString, BitString>,
}

impl FunctionTable {
    /// The nowhere-defined function.
    pub fn empty(domain_len: usize, codomain_len: usize) -> Self {
        FunctionTable {
            domain_len,
            codomain_len,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_entries<I>(domain_len: usize, codomain_len: usize, entries: I) -> Result<Self, TableError>
    where
        I: IntoIterator<Item = (BitString, BitString)>,
    {
        let mut table = Self::empty(domain_len, codomain_len);
        for (x, y) in entries {
            table.insert(x, y)?;
        }
        Ok(table)
    }

    /// Total table built from a function on `{0,1}^m`.
    pub fn from_fn(domain_len: usize, codomain_len: usize, f: impl Fn(&BitString) -> BitString) -> Result<Self, TableError> {
        Self::from_entries(
            domain_len,
            codomain_len,
            BitString::all(domain_len).map(|x| {
                let y = f(&x);
                (x, y)
            }),
        )
    }

    pub fn identity(len: usize) -> Self {
        Self::from_fn(len, len, |x| x.clone()).expect("identity is well formed")
    }

    pub fn insert(&mut self, x: BitString, y: BitString) -> Result<Option<BitString>, TableError> {
        if x.len() != self.domain_len {
            return Err(TableError::KeyLength {
                expected: self.domain_len,
                got: x.len(),
                key: x,
            });
        }
        if y.len() != self.codomain_len {
            return Err(TableError::ValueLength {
                expected: self.codomain_len,
                got: y.len(),
                value: y,
            });
        }
        Ok(self.entries.insert(x, y))
    }

    pub fn domain_len(&self) -> usize {
        self.domain_len
    }

    pub fn codomain_len(&self) -> usize {
        self.codomain_len
    }

    pub fn get(&self, x: &BitString) -> Option<&BitString> {
        self.entries.get(x)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BitString, &BitString)> {
        self.entries.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &BitString> {
        self.entries.keys()
    }

    pub fn image(&self) -> BTreeSet<BitString> {
        self.entries.values().cloned().collect()
    }

    /// Defined on all of `{0,1}^m`.
    pub fn is_total(&self) -> bool {
        // Keys are length-checked and distinct, so counting suffices.
        self.domain_len < 64 && self.entries.len() as u64 == 1u64 << self.domain_len
    }

    /// Injective on its domain.
    pub fn is_injective(&self) -> bool {
        self.image().len() == self.entries.len()
    }

    /// Image equals `{0,1}^n`.
    pub fn is_surjective(&self) -> bool {
        self.codomain_len < 64 && self.image().len() as u64 == 1u64 << self.codomain_len
    }

    /// `other ∘ self` as partial functions: defined at `x` iff `self(x)` is
    /// defined and lies in the domain of `other`.
    ///
    /// Returns `None` when the arities do not compose.
    pub fn then(&self, other: &FunctionTable) -> Option<FunctionTable> {
        if self.codomain_len != other.domain_len {
            return None;
        }
        let entries = self
            .entries
            .iter()
            .filter_map(|(x, y)| other.get(y).map(|z| (x.clone(), z.clone())))
            .collect();
        Some(FunctionTable {
            domain_len: self.domain_len,
            codomain_len: other.codomain_len,
            entries,
        })
    }

    /// Restriction to the keys in `set`.
    pub fn restrict(&self, set: &BTreeSet<BitString>) -> FunctionTable {
        FunctionTable {
            domain_len: self.domain_len,
            codomain_len: self.codomain_len,
            entries: self
                .entries
                .iter()
                .filter(|(x, _)| set.contains(*x))
                .map(|(x, y)| (x.clone(), y.clone()))
                .collect(),
        }
    }
}

impl fmt::Debug for FunctionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FunctionTable[{}->{}]", self.domain_len, self.codomain_len)?;
        f.debug_map().entries(self.entries.iter()).finish()
    }
}

/// One `x y` pair per line, in key order.
impl fmt::Display for FunctionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, y) in &self.entries {
            writeln!(f, "{x} {y}")?;
        }
        Ok(())
    }
}
