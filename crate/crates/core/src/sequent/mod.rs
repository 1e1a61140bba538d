//! Sequent derivations for the modal-multiplicative fragment.
//!
//! Derivations are plain trees. Derived rules (negation, `□_{k,n}`,
//! cancellation) are first-class nodes; [`expand`] rewrites them into the
//! primitive rules. `&` and `0̄` are native connectives here, so their rules
//! count as primitive.

mod admissible;
mod check;
mod expand;
mod json;
mod partition;
mod prove;

use std::collections::BTreeSet;
use std::fmt;

use crate::formula::{Formula, Sequent};
use crate::multiset;
use crate::tableau::TableauError;

pub use admissible::{admissible_mix, admissible_scale, cancel, eliminate_cuts, invert, to_restricted};
pub use check::{check_derivation, RuleViolation};
pub use expand::{expand, expand_box_kn};
pub use json::{derivation_from_json, derivation_from_str, derivation_to_json, derivation_to_string};
pub use partition::{extract_partition, Partition, PartitionResult};
pub use prove::{prove, ProofResult};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rule {
    Id,
    Cut { formula: Formula },
    Mix,
    Sc { n: usize },
    ImplLeft { principal: Formula },
    ImplRight { principal: Formula },
    BoxN { n: usize },
    FuseLeft { principal: Formula },
    FuseRight { principal: Formula },
    ZeroLeft,
    ZeroRight,
    /// `principal` is the negation `φ → 0̄` itself.
    NegLeft { principal: Formula },
    NegRight { principal: Formula },
    BoxKN { k: usize, n: usize, context: Vec<Formula> },
    Can { formula: Formula },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleKind {
    Id,
    Cut,
    Mix,
    Sc,
    ImplLeft,
    ImplRight,
    BoxN,
    FuseLeft,
    FuseRight,
    ZeroLeft,
    ZeroRight,
    NegLeft,
    NegRight,
    BoxKN,
    Can,
}

impl Rule {
    pub fn kind(&self) -> RuleKind {
        match self {
            Rule::Id => RuleKind::Id,
            Rule::Cut { .. } => RuleKind::Cut,
            Rule::Mix => RuleKind::Mix,
            Rule::Sc { .. } => RuleKind::Sc,
            Rule::ImplLeft { .. } => RuleKind::ImplLeft,
            Rule::ImplRight { .. } => RuleKind::ImplRight,
            Rule::BoxN { .. } => RuleKind::BoxN,
            Rule::FuseLeft { .. } => RuleKind::FuseLeft,
            Rule::FuseRight { .. } => RuleKind::FuseRight,
            Rule::ZeroLeft => RuleKind::ZeroLeft,
            Rule::ZeroRight => RuleKind::ZeroRight,
            Rule::NegLeft { .. } => RuleKind::NegLeft,
            Rule::NegRight { .. } => RuleKind::NegRight,
            Rule::BoxKN { .. } => RuleKind::BoxKN,
            Rule::Can { .. } => RuleKind::Can,
        }
    }

    /// Rule id with its numeric parameters, as used in proof files.
    pub fn id(&self) -> String {
        match self {
            Rule::Id => "id".into(),
            Rule::Cut { .. } => "cut".into(),
            Rule::Mix => "mix".into(),
            Rule::Sc { n } => format!("sc({n})"),
            Rule::ImplLeft { .. } => "impl_left".into(),
            Rule::ImplRight { .. } => "impl_right".into(),
            Rule::BoxN { n } => format!("box({n})"),
            Rule::FuseLeft { .. } => "fuse_left".into(),
            Rule::FuseRight { .. } => "fuse_right".into(),
            Rule::ZeroLeft => "zero_left".into(),
            Rule::ZeroRight => "zero_right".into(),
            Rule::NegLeft { .. } => "neg_left".into(),
            Rule::NegRight { .. } => "neg_right".into(),
            Rule::BoxKN { k, n, .. } => format!("box_kn({k},{n})"),
            Rule::Can { .. } => "can".into(),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// A set of permitted rule kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSet(pub BTreeSet<RuleKind>);

impl RuleSet {
    fn of(kinds: &[RuleKind]) -> RuleSet {
        RuleSet(kinds.iter().copied().collect())
    }

    pub fn all() -> RuleSet {
        use RuleKind::*;
        RuleSet::of(&[Id, Cut, Mix, Sc, ImplLeft, ImplRight, BoxN, FuseLeft, FuseRight, ZeroLeft, ZeroRight, NegLeft, NegRight, BoxKN, Can])
    }

    /// Everything except `CUT` and the cancellation rule that expands to it.
    pub fn cut_free() -> RuleSet {
        let mut s = RuleSet::all();
        s.0.remove(&RuleKind::Cut);
        s.0.remove(&RuleKind::Can);
        s
    }

    pub fn primitive() -> RuleSet {
        use RuleKind::*;
        RuleSet::of(&[Id, Cut, Mix, Sc, ImplLeft, ImplRight, BoxN, FuseLeft, FuseRight, ZeroLeft, ZeroRight])
    }

    pub fn primitive_cut_free() -> RuleSet {
        let mut s = RuleSet::primitive();
        s.0.remove(&RuleKind::Cut);
        s
    }

    /// Identity, the single-premise logical rules and `□_{k,n}`.
    pub fn restricted() -> RuleSet {
        use RuleKind::*;
        RuleSet::of(&[Id, ImplLeft, ImplRight, FuseLeft, FuseRight, ZeroLeft, ZeroRight, BoxKN])
    }

    pub fn allows(&self, k: RuleKind) -> bool {
        self.0.contains(&k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub conclusion: Sequent,
    pub rule: Rule,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn id(s: Sequent) -> Derivation {
        Derivation { conclusion: s, rule: Rule::Id, premises: vec![] }
    }

    pub fn id_of(side: Vec<Formula>) -> Derivation {
        Derivation::id(Sequent::new(side.clone(), side))
    }

    pub fn empty() -> Derivation {
        Derivation::id(Sequent::empty())
    }

    pub fn mix(a: Derivation, b: Derivation) -> Derivation {
        Derivation { conclusion: a.conclusion.union(&b.conclusion), rule: Rule::Mix, premises: vec![a, b] }
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Derivation::height).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn count(&self, kind: RuleKind) -> usize {
        usize::from(self.rule.kind() == kind) + self.premises.iter().map(|p| p.count(kind)).sum::<usize>()
    }

    pub fn rule_kinds(&self) -> BTreeSet<RuleKind> {
        let mut out = BTreeSet::from([self.rule.kind()]);
        for p in &self.premises {
            out.extend(p.rule_kinds());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SequentError {
    #[error(transparent)]
    Violation(#[from] RuleViolation),
    #[error("outside the modal-multiplicative fragment: {0}")]
    Fragment(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error("proof file: {0}")]
    Format(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub(crate) fn internal<T>(msg: impl Into<String>) -> Result<T, SequentError> {
    Err(SequentError::Internal(msg.into()))
}

/// Formulas a rule for `f` adds on the left and on the right of its premise,
/// when `f` is principal on the given side. `None` for atoms and boxes.
pub(crate) fn components(f: &Formula, left: bool) -> Option<(Vec<Formula>, Vec<Formula>)> {
    let c = |a: &std::sync::Arc<Formula>| (**a).clone();
    Some(match (f, left) {
        (Formula::Impl(a, b), true) => (vec![c(b)], vec![c(a)]),
        (Formula::Impl(a, b), false) => (vec![c(a)], vec![c(b)]),
        (Formula::Fuse(a, b), true) => (vec![c(a), c(b)], vec![]),
        (Formula::Fuse(a, b), false) => (vec![], vec![c(a), c(b)]),
        (Formula::Zero, _) => (vec![], vec![]),
        _ => return None,
    })
}

/// Immediate subformulas that replace a decomposed formula on its own side
/// and the opposite side; used to keep a shared context consistent.
pub(crate) fn all_components(f: &Formula) -> Vec<Formula> {
    match f {
        Formula::Impl(a, b) | Formula::Fuse(a, b) => vec![(**a).clone(), (**b).clone()],
        _ => vec![],
    }
}

pub(crate) fn is_decomposable(f: &Formula) -> bool {
    matches!(f, Formula::Impl(..) | Formula::Fuse(..) | Formula::Zero)
}

pub(crate) fn logical_rule(f: &Formula, left: bool) -> Rule {
    let principal = f.clone();
    match (f, left) {
        (Formula::Impl(..), true) => Rule::ImplLeft { principal },
        (Formula::Impl(..), false) => Rule::ImplRight { principal },
        (Formula::Fuse(..), true) => Rule::FuseLeft { principal },
        (Formula::Fuse(..), false) => Rule::FuseRight { principal },
        (Formula::Zero, true) => Rule::ZeroLeft,
        (Formula::Zero, false) => Rule::ZeroRight,
        _ => unreachable!("atoms and boxes have no logical rule"),
    }
}

/// Principal formula and side of a single-premise logical rule.
pub(crate) fn principal_of(r: &Rule) -> Option<(Formula, bool)> {
    match r {
        Rule::ImplLeft { principal } | Rule::FuseLeft { principal } => Some((principal.clone(), true)),
        Rule::ImplRight { principal } | Rule::FuseRight { principal } => Some((principal.clone(), false)),
        Rule::ZeroLeft => Some((Formula::Zero, true)),
        Rule::ZeroRight => Some((Formula::Zero, false)),
        _ => None,
    }
}

/// The premise of the logical rule for `f` on `left` with conclusion `s`.
pub(crate) fn premise_of(s: &Sequent, f: &Formula, left: bool) -> Option<Sequent> {
    let (add_l, add_r) = components(f, left)?;
    let (ant, suc) = if left {
        (multiset::remove_one(&s.ant, f)?, s.suc.clone())
    } else {
        (s.ant.clone(), multiset::remove_one(&s.suc, f)?)
    };
    Some(Sequent::new(multiset::union(&ant, &add_l), multiset::union(&suc, &add_r)))
}

/// The conclusion of the logical rule for `f` on `left` with premise `s`.
pub(crate) fn conclusion_of(s: &Sequent, f: &Formula, left: bool) -> Option<Sequent> {
    let (add_l, add_r) = components(f, left)?;
    let mut ant = multiset::sub(&s.ant, &add_l)?;
    let mut suc = multiset::sub(&s.suc, &add_r)?;
    if left {
        ant.push(f.clone());
    } else {
        suc.push(f.clone());
    }
    Some(Sequent::new(ant, suc))
}

/// Apply the logical rule for `f` on `left` below `d`.
pub(crate) fn apply(f: &Formula, left: bool, d: Derivation) -> Result<Derivation, SequentError> {
    match conclusion_of(&d.conclusion, f, left) {
        Some(conclusion) => Ok(Derivation { conclusion, rule: logical_rule(f, left), premises: vec![d] }),
        None => internal(format!("cannot apply the rule for {f} below {}", d.conclusion)),
    }
}

/// Conclusion of `□_{k,n}` from its premises and context.
pub(crate) fn box_kn_conclusion(context: &[Formula], premises: &[Derivation], k: usize) -> Result<Sequent, String> {
    if k == 0 {
        return Err("box_kn needs k >= 1".into());
    }
    let Some((first, rest)) = premises.split_first() else {
        return Err("box_kn needs a premise for the leftover multiset".into());
    };
    if !first.conclusion.suc.is_empty() {
        return Err("box_kn premise 0 must have an empty succedent".into());
    }
    let mut pooled = first.conclusion.ant.clone();
    let mut targets = Vec::new();
    for (i, p) in rest.iter().enumerate() {
        let s = &p.conclusion.suc;
        if s.len() != k || s.iter().any(|x| *x != s[0]) {
            return Err(format!("box_kn premise {} must have exactly {k} copies of one formula on the right", i + 1));
        }
        targets.push(Formula::boxed(s[0].clone()));
        pooled.extend(p.conclusion.ant.iter().cloned());
    }
    let counts = multiset::counts(&pooled);
    let mut gamma = Vec::new();
    for (f, c) in counts {
        if c % k != 0 {
            return Err(format!("premise antecedents do not split into {k} copies of one multiset ({f} occurs {c} times)"));
        }
        gamma.extend(std::iter::repeat_n(Formula::boxed(f), c / k));
    }
    let ant = multiset::union(context, &gamma);
    let suc = multiset::union(&targets, context);
    Ok(Sequent::new(ant, suc))
}

pub(crate) fn box_kn(k: usize, context: Vec<Formula>, premises: Vec<Derivation>) -> Result<Derivation, SequentError> {
    let conclusion = box_kn_conclusion(&context, &premises, k).map_err(SequentError::Internal)?;
    let n = premises.len() - 1;
    Ok(Derivation { conclusion, rule: Rule::BoxKN { k, n, context }, premises })
}

#[cfg(test)]
mod tests;
