//! Decision procedures for Presburger arithmetic: compilation of formulas
//! into deterministic word automata over ρ's-complement encodings, and
//! quantifier elimination for cross-validation.

pub mod atoms;
pub mod automaton;
pub mod bounds;
pub mod encoding;
pub mod engine;
pub mod formula;
pub mod qelim;

mod util;
