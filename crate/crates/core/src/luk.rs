//! Łukasiewicz modal logic K(Ł) and its embedding into K(A^c).

use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::formula::{Dialect, Formula, LFormula};
use crate::kripke::{Model, ModelError};
use crate::rat::{self, Q};
use crate::tableau::{self, BranchCertificate, Mode, TableauError, Verdict};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LukError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("value {value} of {var} at {world} is outside [0,1]")]
    Range { var: String, world: String, value: String },
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error("countermodel has c = 0")]
    ZeroConstant,
    #[error("mapped countermodel gives {0} at w1")]
    Countermodel(String),
}

/// A Kripke model whose valuation lives in `[0,1]`; unset entries read as 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LukModel {
    frame: Model,
}

fn in_unit(x: &Q) -> bool {
    !x.is_negative() && *x <= Q::one()
}

impl LukModel {
    pub fn new<S: AsRef<str>>(worlds: &[S]) -> LukModel {
        LukModel { frame: Model::new(worlds) }
    }

    /// Wrap a model whose values are all in `[0,1]`. A `c` value is dropped.
    pub fn from_model(m: Model) -> Result<LukModel, LukError> {
        let mut frame = m;
        frame.set_c(None);
        for w in frame.worlds() {
            for p in frame.variables() {
                let v = frame.value(&p, w)?;
                if !in_unit(&v) {
                    return Err(LukError::Range { var: p, world: w.clone(), value: rat::to_text(&v) });
                }
            }
        }
        Ok(LukModel { frame })
    }

    pub fn add_edge(&mut self, from: &str, to: &str) -> Result<(), LukError> {
        Ok(self.frame.add_edge(from, to)?)
    }

    pub fn set(&mut self, var: &str, world: &str, value: Q) -> Result<(), LukError> {
        if !in_unit(&value) {
            return Err(LukError::Range { var: var.into(), world: world.into(), value: rat::to_text(&value) });
        }
        Ok(self.frame.set(var, world, value)?)
    }

    pub fn value(&self, var: &str, world: &str) -> Result<Q, ModelError> {
        self.frame.value(var, world)
    }

    pub fn worlds(&self) -> &[String] {
        self.frame.worlds()
    }

    pub fn relation(&self) -> Vec<(String, String)> {
        self.frame.relation()
    }

    /// The underlying frame and valuation, read as a real-valued model.
    pub fn as_model(&self) -> &Model {
        &self.frame
    }

    pub fn to_json(&self) -> Value {
        self.frame.to_json()
    }

    pub fn to_json_string(&self) -> String {
        self.frame.to_json_string()
    }

    pub fn from_json_str(text: &str) -> Result<LukModel, LukError> {
        let m = Model::from_json_str(text)?;
        if m.cvalue().is_some() {
            return Err(ModelError::Format("K(Ł) models have no `c`".into()).into());
        }
        LukModel::from_model(m)
    }
}

/// Values of `f` at every world.
pub fn eval_luk_all(m: &LukModel, f: &LFormula) -> Result<Vec<Q>, ModelError> {
    let worlds = m.worlds();
    let index: HashMap<&str, usize> = worlds.iter().enumerate().map(|(i, w)| (w.as_str(), i)).collect();
    let succ: Vec<Vec<usize>> = worlds
        .iter()
        .map(|w| m.frame.successors(w).map(|s| s.iter().map(|v| index[v]).collect()))
        .collect::<Result<_, _>>()?;
    go(m, f, &succ)
}

fn go(m: &LukModel, f: &LFormula, succ: &[Vec<usize>]) -> Result<Vec<Q>, ModelError> {
    Ok(match f {
        LFormula::LVar(p) => m.worlds().iter().map(|w| m.value(p, w)).collect::<Result<_, _>>()?,
        LFormula::LNeg(a) => go(m, a, succ)?.into_iter().map(|x| Q::one() - x).collect(),
        LFormula::LImpl(a, b) => {
            let (a, b) = (go(m, a, succ)?, go(m, b, succ)?);
            a.iter().zip(b).map(|(x, y)| (Q::one() - x + y).min(Q::one())).collect()
        }
        LFormula::LBox(a) => {
            let a = go(m, a, succ)?;
            succ.iter().map(|s| s.iter().map(|&j| a[j].clone()).min().unwrap_or_else(Q::one)).collect()
        }
    })
}

pub fn eval_luk(m: &LukModel, f: &LFormula, w: &str) -> Result<Q, ModelError> {
    let i = m.worlds().iter().position(|x| x == w).ok_or_else(|| ModelError::UnknownWorld(w.into()))?;
    Ok(eval_luk_all(m, f)?.swap_remove(i))
}

/// `c ∧ ¬c`
pub fn bottom() -> Formula {
    Formula::meet(Formula::ConstC, Formula::neg(Formula::ConstC))
}

pub fn translate_star(f: &LFormula) -> Formula {
    match f {
        LFormula::LVar(p) => Formula::join(Formula::meet(Formula::var(p), Formula::Zero), bottom()),
        LFormula::LNeg(a) => Formula::imp(translate_star(a), bottom()),
        LFormula::LImpl(a, b) => Formula::meet(Formula::imp(translate_star(a), translate_star(b)), Formula::Zero),
        LFormula::LBox(a) => Formula::boxed(translate_star(a)),
    }
}

/// Same frame, every value lowered by 1, and `c = −1`. Covers the variables
/// `m` mentions; others read 0 in both models.
pub fn paired_model(m: &LukModel) -> Model {
    let mut out = m.frame.clone();
    let vars = m.frame.variables();
    for w in m.worlds() {
        for p in &vars {
            let v = m.value(p, w).expect("world exists") - Q::one();
            out.set(p, w, v).expect("world exists");
        }
    }
    out.set_c(Some(-Q::one()));
    out
}

/// A K(A^c) model scaled to `|c| = 1`, then `v ↦ max(min(v + 1, 1), 0)`.
pub fn luk_from_countermodel(m: &Model, vars: &BTreeSet<String>) -> Result<LukModel, LukError> {
    let c = m.cvalue().cloned().unwrap_or_else(Q::zero);
    if c.is_zero() {
        return Err(LukError::ZeroConstant);
    }
    let m = m.scaled(&(Q::one() / c.abs()));
    let mut out = LukModel::new(m.worlds());
    for (a, b) in m.relation() {
        out.add_edge(&a, &b)?;
    }
    for w in m.worlds() {
        for p in vars {
            let v = (m.value(p, w)? + Q::one()).min(Q::one()).max(Q::zero());
            out.set(p, w, v)?;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub enum LukVerdict {
    /// `φ*` closed every branch of the general-mode K(A^c) tableau. Marked
    /// experimental: completeness of that mode is not established.
    Valid { certificates: Vec<BranchCertificate> },
    /// A K(Ł) model with `φ` below 1 at `w1`, re-checked by [`eval_luk`].
    Invalid { countermodel: LukModel, value: Q },
}

impl LukVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, LukVerdict::Valid { .. })
    }
}

fn lvars(f: &LFormula, out: &mut BTreeSet<String>) {
    match f {
        LFormula::LVar(p) => {
            out.insert(p.clone());
        }
        LFormula::LNeg(a) | LFormula::LBox(a) => lvars(a, out),
        LFormula::LImpl(a, b) => {
            lvars(a, out);
            lvars(b, out);
        }
    }
}

pub fn decide_luk(f: &LFormula) -> Result<LukVerdict, LukError> {
    match tableau::decide(&translate_star(f), Dialect::KAc, Mode::General)? {
        Verdict::Valid { certificates } => Ok(LukVerdict::Valid { certificates }),
        Verdict::Invalid { countermodel, .. } => {
            let mut vars = BTreeSet::new();
            lvars(f, &mut vars);
            let lm = luk_from_countermodel(&countermodel, &vars)?;
            let value = eval_luk(&lm, f, "w1")?;
            if value >= Q::one() {
                return Err(LukError::Countermodel(rat::to_text(&value)));
            }
            Ok(LukVerdict::Invalid { countermodel: lm, value })
        }
    }
}
