//! Shared fixtures for the benchmarks.

use kamp::gen::{self, FormulaConfig};
use kamp::{parse_formula, parse_sequent, Derivation, Dialect, Formula, Sequent};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn ka(text: &str) -> Formula {
    parse_formula(text, Dialect::KA).expect("fixture parses")
}

/// Formulas decided in serial mode.
pub const FORMULAS: [(&str, &str); 4] = [
    ("seriality", "[]p -> <>p"),
    ("box_or", "[](p \\/ q) -> ([]p \\/ []q)"),
    ("game_invalid", "<>[](q -> p) -> ([]<>q -> <>[]p)"),
    ("game_valid", "<>[](q -> p) -> ([][]q -> <>[]p)"),
];

/// Sequents handed to proof search.
pub const SEQUENTS: [(&str, &str); 3] = [
    ("doubled_box", "|- [](p & p) -> ([]p & []p)"),
    ("k_axiom", "[]p, [](p -> q) |- []q"),
    ("refuted", "[]q, []p |- []p & []p"),
];

pub fn sequent(text: &str) -> Sequent {
    parse_sequent(text, Dialect::KA).expect("fixture parses")
}

/// Deterministic derivations containing cuts.
pub fn cut_derivations(n: usize) -> Vec<Derivation> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let cfg = FormulaConfig::new(&["p", "q"], 4, 1);
    (0..n).map(|_| gen::random_cut_composition(&mut rng, &cfg, 3)).collect()
}
