//! Boolean circuits at desk scale: the circuit model and its exhaustive
//! semantics, formula compilation, the tautology and `∀∃` reduction gadgets,
//! padding and normalization surgeries, a bit-exact circuit codec with a total
//! decoder and universal evaluator, inverse semantics on function tables with
//! exhaustive minimal-inverse search, and the length-preserving evaluation and
//! interleaving combinators built on top.

pub mod bits;
pub mod builder;
pub mod circuit;
pub mod codec;
pub mod evo;
pub mod formula;
pub mod gadgets;
pub mod inverse;
pub mod netlist;
pub mod table;
pub mod transforms;

pub use bits::BitString;
pub use circuit::{Cap, Circuit, CircuitError, Gate, ValidationReport, Violation};
pub use formula::Formula;
pub use table::FunctionTable;
