//! Seeded generators for formulas, sequents, models and derivations.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::formula::{Formula, LFormula, Sequent};
use crate::luk::LukModel;
use crate::rat::q2;
use crate::sequent::{prove, Derivation, ProofResult, Rule};

#[derive(Debug, Clone)]
pub struct FormulaConfig {
    pub vars: Vec<String>,
    pub max_complexity: usize,
    pub max_depth: usize,
    /// Allow `∧` and `∨`.
    pub lattice: bool,
    /// Allow the constant `c`.
    pub constant: bool,
}

impl FormulaConfig {
    pub fn new(vars: &[&str], max_complexity: usize, max_depth: usize) -> FormulaConfig {
        FormulaConfig {
            vars: vars.iter().map(|v| v.to_string()).collect(),
            max_complexity,
            max_depth,
            lattice: true,
            constant: false,
        }
    }

    pub fn multiplicative(mut self) -> FormulaConfig {
        self.lattice = false;
        self
    }
}

/// A formula with complexity at most `max_complexity` and modal depth at most
/// `max_depth`.
pub fn random_formula<R: Rng>(rng: &mut R, cfg: &FormulaConfig) -> Formula {
    let budget = rng.gen_range(0..=cfg.max_complexity);
    grow(rng, cfg, budget, cfg.max_depth)
}

fn grow<R: Rng>(rng: &mut R, cfg: &FormulaConfig, budget: usize, depth: usize) -> Formula {
    if budget == 0 {
        return Formula::var(cfg.vars.choose(rng).expect("at least one variable"));
    }
    let mut ops = vec!["imp", "imp", "fuse", "zero"];
    if cfg.lattice {
        ops.extend(["meet", "join"]);
    }
    if cfg.constant {
        ops.push("c");
    }
    if depth > 0 {
        ops.extend(["box", "box"]);
    }
    match *ops.choose(rng).expect("nonempty") {
        "zero" => Formula::Zero,
        "c" => Formula::ConstC,
        "box" => Formula::boxed(grow(rng, cfg, budget - 1, depth - 1)),
        op => {
            let left = rng.gen_range(0..budget);
            let a = grow(rng, cfg, left, depth);
            let b = grow(rng, cfg, budget - 1 - left, depth);
            match op {
                "imp" => Formula::imp(a, b),
                "fuse" => Formula::fuse(a, b),
                "meet" => Formula::meet(a, b),
                _ => Formula::join(a, b),
            }
        }
    }
}

/// Rewrites that keep the value of a formula at every world.
fn equivalent<R: Rng>(rng: &mut R, f: &Formula) -> Formula {
    let choice = rng.gen_range(0..6);
    match (choice, f) {
        (0, _) => Formula::neg(Formula::neg(f.clone())),
        (1, _) => Formula::fuse(f.clone(), Formula::Zero),
        (2, Formula::Impl(a, b)) => Formula::imp(Formula::neg((**b).clone()), Formula::neg((**a).clone())),
        (3, Formula::Fuse(a, b)) => Formula::fuse((**b).clone(), (**a).clone()),
        (4, Formula::Box(a)) => Formula::boxed(equivalent(rng, a)),
        (5, Formula::Impl(a, b)) => match &**b {
            Formula::Impl(c, d) => Formula::imp(Formula::fuse((**a).clone(), (**c).clone()), (**d).clone()),
            _ => Formula::neg(Formula::fuse((**a).clone(), Formula::neg((**b).clone()))),
        },
        _ => Formula::neg(Formula::neg(f.clone())),
    }
}

/// Rewrites whose result is never smaller than the input.
fn weaker<R: Rng>(rng: &mut R, f: &Formula) -> Formula {
    match f {
        Formula::Fuse(a, b) if a.is_box() && b.is_box() && rng.gen_bool(0.7) => {
            let (Formula::Box(x), Formula::Box(y)) = (&**a, &**b) else { unreachable!() };
            Formula::boxed(Formula::fuse((**x).clone(), (**y).clone()))
        }
        _ => equivalent(rng, f),
    }
}

/// A modal-multiplicative sequent. About half are built from a side and a
/// rewritten copy of it, so a good share is valid.
pub fn random_sequent<R: Rng>(rng: &mut R, cfg: &FormulaConfig, max_side: usize) -> Sequent {
    let cfg = cfg.clone().multiplicative();
    let side = |rng: &mut R| -> Vec<Formula> {
        let n = rng.gen_range(0..=max_side);
        (0..n).map(|_| random_formula(rng, &cfg)).collect()
    };
    if rng.gen_bool(0.5) {
        return Sequent::new(side(rng), side(rng));
    }
    let ant = side(rng);
    let mut suc: Vec<Formula> = ant.iter().map(|f| weaker(rng, f)).collect();
    if rng.gen_bool(0.3) && !suc.is_empty() {
        let i = rng.gen_range(0..suc.len());
        suc[i] = random_formula(rng, &cfg);
    }
    suc.shuffle(rng);
    Sequent::new(ant, suc)
}

pub fn random_lformula<R: Rng>(rng: &mut R, vars: &[&str], max_depth: usize, max_complexity: usize) -> LFormula {
    fn go<R: Rng>(rng: &mut R, vars: &[&str], budget: usize, depth: usize) -> LFormula {
        if budget == 0 {
            return LFormula::var(vars.choose(rng).expect("at least one variable"));
        }
        let pick = rng.gen_range(0..if depth > 0 { 4 } else { 3 });
        match pick {
            0 => LFormula::neg(go(rng, vars, budget - 1, depth)),
            3 => LFormula::boxed(go(rng, vars, budget - 1, depth - 1)),
            _ => {
                let left = rng.gen_range(0..budget);
                LFormula::imp(go(rng, vars, left, depth), go(rng, vars, budget - 1 - left, depth))
            }
        }
    }
    let budget = rng.gen_range(0..=max_complexity);
    go(rng, vars, budget, max_depth)
}

/// Worlds `w1..wn`, every variable set at every world to a value in `[0,1]`
/// with denominator 1, 2, 3, 4 or 6.
pub fn random_luk_model<R: Rng>(rng: &mut R, n_worlds: usize, vars: &[&str], density: f64) -> LukModel {
    let names: Vec<String> = (1..=n_worlds).map(|i| format!("w{i}")).collect();
    let mut m = LukModel::new(&names);
    for a in &names {
        for b in &names {
            if rng.gen_bool(density) {
                m.add_edge(a, b).expect("worlds exist");
            }
        }
    }
    for w in &names {
        for p in vars {
            let d: i64 = *[1, 2, 3, 4, 6].choose(rng).expect("nonempty");
            m.set(p, w, q2(rng.gen_range(0..=d), d)).expect("value in range");
        }
    }
    m
}

/// The axiom schemas of the modal-multiplicative axiom system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schema {
    B,
    C,
    I,
    A,
    K,
    D(usize),
}

impl std::fmt::Display for Schema {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Schema::D(n) => write!(f, "D{n}"),
            other => write!(f, "{other:?}"),
        }
    }
}

impl Schema {
    pub fn arity(self) -> usize {
        match self {
            Schema::B | Schema::C => 3,
            Schema::A | Schema::K => 2,
            Schema::I | Schema::D(_) => 1,
        }
    }

    /// The instance with bodies `φ, ψ, χ` taken from `args` in order.
    pub fn instance(self, args: &[Formula]) -> Formula {
        let a = |i: usize| args[i].clone();
        let imp = Formula::imp;
        match self {
            Schema::B => imp(imp(a(0), a(1)), imp(imp(a(1), a(2)), imp(a(0), a(2)))),
            Schema::C => imp(imp(a(0), imp(a(1), a(2))), imp(a(1), imp(a(0), a(2)))),
            Schema::I => imp(a(0), a(0)),
            Schema::A => imp(imp(imp(a(0), a(1)), a(1)), a(0)),
            Schema::K => imp(Formula::boxed(imp(a(0), a(1))), imp(Formula::boxed(a(0)), Formula::boxed(a(1)))),
            Schema::D(n) => imp(Formula::boxed(Formula::times(n, a(0))), Formula::times(n, Formula::boxed(a(0)))),
        }
    }
}

pub const SCHEMAS: [Schema; 8] =
    [Schema::B, Schema::C, Schema::I, Schema::A, Schema::K, Schema::D(2), Schema::D(3), Schema::D(4)];

/// Every instance of every schema with bodies drawn from `bodies`.
pub fn axiom_instances(bodies: &[Formula]) -> Vec<(Schema, Formula)> {
    let mut out = Vec::new();
    for s in SCHEMAS {
        let mut idx = vec![0usize; s.arity()];
        loop {
            let args: Vec<Formula> = idx.iter().map(|&i| bodies[i].clone()).collect();
            out.push((s, s.instance(&args)));
            let Some(pos) = idx.iter().rposition(|&i| i + 1 < bodies.len()) else { break };
            idx[pos] += 1;
            for j in &mut idx[pos + 1..] {
                *j = 0;
            }
        }
    }
    out
}

fn proof_of(s: &Sequent) -> Option<Derivation> {
    match prove(s).ok()? {
        ProofResult::Proved(d) => Some(d),
        ProofResult::Invalid(_) => None,
    }
}

/// A derivation with between 1 and `max_cuts` cuts, built around a valid
/// random sequent by cutting its formulas against proved equivalents and
/// occasionally mixing in a second proof.
pub fn random_cut_composition<R: Rng>(rng: &mut R, cfg: &FormulaConfig, max_cuts: usize) -> Derivation {
    let mut d = loop {
        let s = random_sequent(rng, cfg, 2);
        if s.formulas().next().is_none() {
            continue;
        }
        if let Some(d) = proof_of(&s) {
            break d;
        }
    };
    let cuts = rng.gen_range(1..=max_cuts.max(1));
    for _ in 0..cuts {
        if rng.gen_bool(0.25) {
            let other = Sequent::new(vec![], vec![Formula::imp(random_formula(rng, &cfg.clone().multiplicative()), Formula::Zero)]);
            let other = Sequent::new(other.suc.clone(), other.suc);
            if let Some(e) = proof_of(&other) {
                d = Derivation::mix(d, e);
            }
        }
        let s = &d.conclusion;
        let on_right = !s.suc.is_empty() && (s.ant.is_empty() || rng.gen_bool(0.5));
        let side = if on_right { &s.suc } else { &s.ant };
        let phi = side.choose(rng).expect("nonempty side").clone();
        let t = equivalent(rng, &phi);
        d = if on_right {
            let e = proof_of(&Sequent::new(vec![phi.clone()], vec![t])).expect("rewrites are equivalences");
            let conclusion = Sequent::new(
                s.ant.clone(),
                crate::multiset::union(&crate::multiset::remove_one(&s.suc, &phi).expect("present"), &e.conclusion.suc),
            );
            Derivation { conclusion, rule: Rule::Cut { formula: phi }, premises: vec![e, d] }
        } else {
            let e = proof_of(&Sequent::new(vec![t], vec![phi.clone()])).expect("rewrites are equivalences");
            let conclusion = Sequent::new(
                crate::multiset::union(&crate::multiset::remove_one(&s.ant, &phi).expect("present"), &e.conclusion.ant),
                s.suc.clone(),
            );
            Derivation { conclusion, rule: Rule::Cut { formula: phi }, premises: vec![d, e] }
        };
    }
    d
}
