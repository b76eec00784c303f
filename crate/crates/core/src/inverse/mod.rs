//! Semi-, mutual and right inverses of partial functions, given as tables.
//!
//! `F'` is a semi-inverse of `F` when `F ∘ F' ∘ F = F`, a mutual inverse when
//! additionally `F' ∘ F ∘ F' = F'`, and a right inverse when `F ∘ F' = id` on
//! the whole codomain. Composition is of partial functions throughout.
//!
//! The submodules enumerate small circuits and search them for the smallest
//! circuit computing a semi-inverse.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::bits::BitString;
use crate::circuit::CircuitError;
use crate::table::FunctionTable;

mod enumerate;
mod search;

pub use enumerate::{canonical_form, canonical_id, enumerate_circuits, CanonicalKey, MAX_ENUMERATION_SIZE};
pub use search::{hardness_profile, min_inverse_circuit, HardnessProfile, InverseSearch, ProfileRecord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InverseError {
    #[error("arities do not compose: F is {f_m}->{f_n} bits, F' is {g_m}->{g_n} bits")]
    Arity {
        f_m: usize,
        f_n: usize,
        g_m: usize,
        g_n: usize,
    },
    #[error("F' is not a semi-inverse of F")]
    NotSemiInverse,
    #[error("F is nowhere defined")]
    EmptyFunction,
    #[error("interface {m}->{n} is outside enumeration limits (need m, n >= 1)")]
    Interface { m: usize, n: usize },
    #[error("size bound {size} exceeds the enumeration limit {limit}")]
    SizeLimit { size: usize, limit: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InverseKind {
    Semi,
    Mutual,
    Right,
}

/// Which semi-inverse [`canonical_semi_inverse`] builds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Defined everywhere; points outside `im(F)` map to `0^m`.
    Total,
    /// Defined exactly on `im(F)`.
    InjectiveOnImage,
}

fn check_arity(f: &FunctionTable, g: &FunctionTable) -> Result<(), InverseError> {
    if g.domain_len() != f.codomain_len() || g.codomain_len() != f.domain_len() {
        return Err(InverseError::Arity {
            f_m: f.domain_len(),
            f_n: f.codomain_len(),
            g_m: g.domain_len(),
            g_n: g.codomain_len(),
        });
    }
    Ok(())
}

fn compose3(a: &FunctionTable, b: &FunctionTable, c: &FunctionTable) -> FunctionTable {
    a.then(b).and_then(|ab| ab.then(c)).expect("arity checked")
}

/// `F ∘ F' ∘ F = F`, computed by composing tables.
pub fn is_semi_inverse(f: &FunctionTable, g: &FunctionTable) -> Result<bool, InverseError> {
    check_arity(f, g)?;
    Ok(compose3(f, g, f) == *f)
}

/// `(F ∘ F')` restricted to `im(F)` is the identity on `im(F)`; equivalent to
/// [`is_semi_inverse`].
pub fn is_semi_inverse_on_image(f: &FunctionTable, g: &FunctionTable) -> Result<bool, InverseError> {
    check_arity(f, g)?;
    let image = f.image();
    let round = g.then(f).expect("arity checked").restrict(&image);
    let identity = FunctionTable::from_entries(f.codomain_len(), f.codomain_len(), image.into_iter().map(|y| (y.clone(), y)))
        .expect("image strings have codomain length");
    Ok(round == identity)
}

/// Semi-inverse with `F' ∘ F ∘ F' = F'`.
pub fn is_mutual_inverse(f: &FunctionTable, g: &FunctionTable) -> Result<bool, InverseError> {
    Ok(is_semi_inverse(f, g)? && compose3(g, f, g) == *g)
}

/// `F ∘ F' = id` on all of `{0,1}^n`.
pub fn is_right_inverse(f: &FunctionTable, g: &FunctionTable) -> Result<bool, InverseError> {
    check_arity(f, g)?;
    Ok(g.then(f).expect("arity checked") == FunctionTable::identity(f.codomain_len()))
}

/// Dispatches on `kind`.
pub fn is_inverse(kind: InverseKind, f: &FunctionTable, g: &FunctionTable) -> Result<bool, InverseError> {
    match kind {
        InverseKind::Semi => is_semi_inverse(f, g),
        InverseKind::Mutual => is_mutual_inverse(f, g),
        InverseKind::Right => is_right_inverse(f, g),
    }
}

/// The semi-inverse sending each `y ∈ im(F)` to its lexicographically least preimage.
pub fn canonical_semi_inverse(f: &FunctionTable, variant: Variant) -> Result<FunctionTable, InverseError> {
    if f.is_empty() {
        return Err(InverseError::EmptyFunction);
    }
    let mut least: BTreeMap<&BitString, &BitString> = BTreeMap::new();
    for (x, y) in f.iter() {
        least.entry(y).or_insert(x);
    }
    let mut g = FunctionTable::empty(f.codomain_len(), f.domain_len());
    for (y, x) in least {
        g.insert(y.clone(), x.clone()).expect("lengths follow f");
    }
    if variant == Variant::Total {
        for y in BitString::all(f.codomain_len()) {
            if g.get(&y).is_none() {
                g.insert(y, BitString::zeros(f.domain_len())).expect("lengths follow f");
            }
        }
    }
    Ok(g)
}

/// `F' ∘ F ∘ F'`, a mutual inverse of `F` whenever `F'` is a semi-inverse.
pub fn mutualize(f: &FunctionTable, g: &FunctionTable) -> Result<FunctionTable, InverseError> {
    if !is_semi_inverse(f, g)? {
        return Err(InverseError::NotSemiInverse);
    }
    Ok(compose3(g, f, g))
}
