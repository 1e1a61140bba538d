use super::{Derivation, Rule, SequentError};
use crate::formula::{Formula, Sequent};
use crate::multiset;

/// Rewrite every derived node into primitive rules, bottom-up.
pub fn expand(d: &Derivation) -> Result<Derivation, SequentError> {
    let premises = d.premises.iter().map(expand).collect::<Result<Vec<_>, _>>()?;
    let s = &d.conclusion;
    match &d.rule {
        Rule::BoxKN { k, context, .. } => expand_box_kn(*k, context, premises),
        Rule::NegLeft { principal } => {
            let [p] = one(premises)?;
            let zero = Derivation {
                conclusion: Sequent::new(multiset::union(&p.conclusion.ant, &[Formula::Zero]), p.conclusion.suc.clone()),
                rule: Rule::ZeroLeft,
                premises: vec![p],
            };
            Ok(Derivation { conclusion: s.clone(), rule: Rule::ImplLeft { principal: principal.clone() }, premises: vec![zero] })
        }
        Rule::NegRight { principal } => {
            let [p] = one(premises)?;
            let zero = Derivation {
                conclusion: Sequent::new(p.conclusion.ant.clone(), multiset::union(&p.conclusion.suc, &[Formula::Zero])),
                rule: Rule::ZeroRight,
                premises: vec![p],
            };
            Ok(Derivation { conclusion: s.clone(), rule: Rule::ImplRight { principal: principal.clone() }, premises: vec![zero] })
        }
        Rule::Can { formula } => {
            let [p] = one(premises)?;
            let loop_f = Formula::imp(formula.clone(), formula.clone());
            let left = Derivation {
                conclusion: Sequent::new(vec![loop_f.clone()], vec![]),
                rule: Rule::ImplLeft { principal: loop_f.clone() },
                premises: vec![Derivation::id_of(vec![formula.clone()])],
            };
            let right = Derivation {
                conclusion: Sequent::new(s.ant.clone(), multiset::union(std::slice::from_ref(&loop_f), &s.suc)),
                rule: Rule::ImplRight { principal: loop_f.clone() },
                premises: vec![p],
            };
            Ok(Derivation { conclusion: s.clone(), rule: Rule::Cut { formula: loop_f }, premises: vec![left, right] })
        }
        rule => Ok(Derivation { conclusion: s.clone(), rule: rule.clone(), premises }),
    }
}

fn one(premises: Vec<Derivation>) -> Result<[Derivation; 1], SequentError> {
    premises.try_into().map_err(|_| SequentError::Shape("expected one premise".into()))
}

/// `□_{k,n}` as `MIX(ID Δ, SC_k(MIX(□_0, MIX(□_k, …))))`. The `ID` and `SC`
/// steps are left out when `Δ` is empty or `k = 1`; so is the `□_0` branch
/// when `Γ_0` is empty and some target exists.
pub fn expand_box_kn(k: usize, context: &[Formula], premises: Vec<Derivation>) -> Result<Derivation, SequentError> {
    let want = super::box_kn_conclusion(context, &premises, k).map_err(SequentError::Shape)?;
    let mut it = premises.into_iter();
    let p0 = it.next().ok_or_else(|| SequentError::Shape("box_kn needs premise 0".into()))?;
    let boxed = |p: Derivation, n: usize| Derivation {
        conclusion: Sequent::new(
            p.conclusion.ant.iter().cloned().map(Formula::boxed).collect(),
            p.conclusion.suc.iter().cloned().map(Formula::boxed).collect(),
        ),
        rule: Rule::BoxN { n },
        premises: vec![p],
    };
    let mut parts: Vec<Derivation> = it.map(|p| boxed(p, k)).collect();
    if !p0.conclusion.ant.is_empty() || parts.is_empty() {
        parts.insert(0, boxed(p0, 0));
    }
    let mut acc = parts.pop().expect("at least one part");
    while let Some(p) = parts.pop() {
        acc = Derivation::mix(p, acc);
    }
    if k > 1 {
        let conclusion = Sequent::new(
            multiset::sub(&want.ant, context).expect("context on the left"),
            multiset::sub(&want.suc, context).expect("context on the right"),
        );
        acc = Derivation { conclusion, rule: Rule::Sc { n: k }, premises: vec![acc] };
    }
    if !context.is_empty() {
        acc = Derivation::mix(Derivation::id_of(context.to_vec()), acc);
    }
    Ok(acc)
}
