//! Decision procedure and proof toolkit for the real-valued modal logic K(A).
//!
//! Validity is decided by building a complete labelled tableau and checking the
//! linear systems of its branches with exact Fourier–Motzkin elimination.
//! Invalid formulas come with a finite Kripke countermodel; valid sequents of the
//! modal-multiplicative fragment get cut-free sequent proofs. Łukasiewicz modal
//! formulas are decided through an embedding into K(A) with a constant.

pub mod formula;
pub mod gen;
pub mod kripke;
pub mod linarith;
pub mod luk;
pub mod multiset;
pub mod parse;
pub mod rat;
pub mod sequent;
pub mod tableau;

pub use formula::{formula_interpretation, Dialect, DialectError, Formula, LFormula, Sequent};
pub use kripke::Model;
pub use linarith::{Assignment, FarkasCertificate, LinVar, LinearInequation, LinearSystem, Solution};
pub use parse::{parse, parse_formula, parse_lformula, parse_sequent, ParseError, Parsed};
pub use rat::Q;
pub use sequent::{Derivation, Rule};
pub use tableau::{decide, decide_sequent, Mode, Verdict};
