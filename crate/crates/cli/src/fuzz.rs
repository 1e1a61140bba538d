//! Seeded property suites. Output depends only on the suite, seed and
//! iteration count.

use anyhow::Result;
use clap::ValueEnum;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kamp::gen::{self, FormulaConfig};
use kamp::kripke::random_model;
use kamp::linarith::check_certificate;
use kamp::luk::{eval_luk_all, paired_model, translate_star};
use kamp::rat::q;
use kamp::sequent::{check_derivation, eliminate_cuts, prove, ProofResult, RuleSet};
use kamp::{decide, formula_interpretation, Dialect, Formula, Mode, Verdict};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Valid verdicts survive random serial models; countermodels refute.
    Soundness,
    /// Proof search succeeds exactly on valid sequents.
    Agreement,
    /// Cut elimination keeps the conclusion and removes every cut.
    Cut,
    /// The K(Ł) embedding lowers every value by exactly 1.
    Shift,
}

const MODELS_PER_VALID: u64 = 50;

type Decider = fn(&Formula) -> Result<Verdict, String>;

fn serial(f: &Formula) -> Result<Verdict, String> {
    decide(f, Dialect::KA, Mode::Serial).map_err(|e| format!("{f}: {e}"))
}

fn soundness(rng: &mut ChaCha8Rng, decider: Decider) -> Result<(), String> {
    let cfg = FormulaConfig::new(&["p", "q", "r"], 10, 2);
    let f = gen::random_formula(rng, &cfg);
    match decider(&f)? {
        Verdict::Valid { certificates } => {
            if certificates.iter().any(|c| check_certificate(&c.system, &c.certificate) != Ok(true)) {
                return Err(format!("{f}: certificate rejected"));
            }
            for j in 0..MODELS_PER_VALID {
                let m = random_model(1 + (j % 4) as usize, &cfg.vars, 0.5, 5, rng.gen(), true);
                if m.eval_all(&f).map_err(|e| e.to_string())?.iter().any(|x| x.is_negative()) {
                    return Err(format!("VALID {f} is negative in {}", m.to_json_string()));
                }
            }
        }
        Verdict::Invalid { countermodel, .. } => {
            let x = countermodel.eval(&f, "w1").map_err(|e| e.to_string())?;
            if !x.is_negative() {
                return Err(format!("countermodel for {f} gives {x}"));
            }
        }
    }
    Ok(())
}

fn agreement(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let s = gen::random_sequent(rng, &FormulaConfig::new(&["p", "q"], 5, 2), 3);
    let valid = decide(&formula_interpretation(&s), Dialect::KA, Mode::Serial).map_err(|e| e.to_string())?.is_valid();
    match prove(&s).map_err(|e| format!("{s}: {e}"))? {
        ProofResult::Proved(d) if valid => {
            check_derivation(&d, &RuleSet::primitive_cut_free()).map_err(|e| format!("{s}: {e}"))?;
            Ok(())
        }
        ProofResult::Invalid(_) if !valid => Ok(()),
        _ => Err(format!("{s}: proof search and tableau disagree")),
    }
}

fn cut(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let d = gen::random_cut_composition(rng, &FormulaConfig::new(&["p", "q"], 4, 1), 3);
    let out = eliminate_cuts(&d).map_err(|e| format!("{}: {e}", d.conclusion))?;
    if out.conclusion != d.conclusion {
        return Err(format!("{} became {}", d.conclusion, out.conclusion));
    }
    check_derivation(&out, &RuleSet::primitive_cut_free()).map_err(|e| format!("{}: {e}", d.conclusion))
}

fn shift(rng: &mut ChaCha8Rng, i: usize) -> Result<(), String> {
    let m = gen::random_luk_model(rng, 1 + i % 4, &["p", "q"], 0.4);
    let f = gen::random_lformula(rng, &["p", "q"], 3, 8);
    let star = paired_model(&m).eval_all(&translate_star(&f)).map_err(|e| e.to_string())?;
    let direct = eval_luk_all(&m, &f).map_err(|e| e.to_string())?;
    for (w, (a, b)) in m.worlds().iter().zip(star.iter().zip(&direct)) {
        if *a != b - q(1) {
            return Err(format!("{f} at {w}: {a} is not {b} - 1"));
        }
    }
    Ok(())
}

fn name(s: Suite) -> &'static str {
    match s {
        Suite::Soundness => "soundness",
        Suite::Agreement => "agreement",
        Suite::Cut => "cut",
        Suite::Shift => "shift",
    }
}

pub fn run(suite: Suite, iters: usize, seed: u64) -> Result<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..iters {
        let r = match suite {
            Suite::Soundness => soundness(&mut rng, serial),
            Suite::Agreement => agreement(&mut rng),
            Suite::Cut => cut(&mut rng),
            Suite::Shift => shift(&mut rng, i),
        };
        if let Err(case) = r {
            println!("suite {}: trial {i} failed: {case}", name(suite));
            return Ok(1);
        }
    }
    println!("suite {}: {iters} trials, seed {seed}, 0 violations", name(suite));
    Ok(0)
}
