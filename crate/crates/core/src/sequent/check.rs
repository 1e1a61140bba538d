use std::fmt;

use super::{box_kn_conclusion, premise_of, Derivation, Rule, RuleSet};
use crate::formula::{Formula, Sequent};
use crate::multiset;

/// The first node (in pre-order) that breaks its rule. `path` lists premise
/// indices from the root.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct RuleViolation {
    pub path: Vec<usize>,
    pub reason: String,
}

impl fmt::Display for RuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        write!(f, "rule violation at [{}]: {}", path.join("."), self.reason)
    }
}

pub fn check_derivation(d: &Derivation, allow: &RuleSet) -> Result<(), RuleViolation> {
    let mut path = Vec::new();
    walk(d, allow, &mut path)
}

fn walk(d: &Derivation, allow: &RuleSet, path: &mut Vec<usize>) -> Result<(), RuleViolation> {
    if let Err(reason) = node(d, allow) {
        return Err(RuleViolation { path: path.clone(), reason });
    }
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        walk(p, allow, path)?;
        path.pop();
    }
    Ok(())
}

fn same(a: &Sequent, b: &Sequent) -> bool {
    a == b
}

fn arity(d: &Derivation, n: usize) -> Result<(), String> {
    if d.premises.len() == n {
        Ok(())
    } else {
        Err(format!("{} expects {n} premise(s), found {}", d.rule, d.premises.len()))
    }
}

fn expect(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn node(d: &Derivation, allow: &RuleSet) -> Result<(), String> {
    if !allow.allows(d.rule.kind()) {
        return Err(format!("rule {} is not permitted here", d.rule));
    }
    if let Some(f) = d.conclusion.formulas().find(|f| !f.is_multiplicative()) {
        return Err(format!("{f} is outside the modal-multiplicative fragment"));
    }
    let s = &d.conclusion;
    let mismatch = |want: &Sequent| format!("conclusion {s} does not follow; expected {want}");
    match &d.rule {
        Rule::Id => {
            arity(d, 0)?;
            expect(multiset::eq(&s.ant, &s.suc), || format!("{s} is not an identity"))
        }
        Rule::Mix => {
            arity(d, 2)?;
            let want = d.premises[0].conclusion.union(&d.premises[1].conclusion);
            expect(same(s, &want), || mismatch(&want))
        }
        Rule::Cut { formula } => {
            arity(d, 2)?;
            let (a, b) = (&d.premises[0].conclusion, &d.premises[1].conclusion);
            let left = multiset::remove_one(&a.ant, formula)
                .ok_or_else(|| format!("cut formula {formula} missing on the left of {a}"))?;
            let right = multiset::remove_one(&b.suc, formula)
                .ok_or_else(|| format!("cut formula {formula} missing on the right of {b}"))?;
            let want = Sequent::new(left, a.suc.clone()).union(&Sequent::new(b.ant.clone(), right));
            expect(same(s, &want), || mismatch(&want))
        }
        Rule::Sc { n } => {
            arity(d, 1)?;
            expect(*n >= 2, || "sc needs n >= 2".into())?;
            let p = &d.premises[0].conclusion;
            expect(same(p, &s.scale(*n)), || format!("premise {p} is not {n} copies of {s}"))
        }
        Rule::ImplLeft { principal } | Rule::ImplRight { principal } => {
            arity(d, 1)?;
            expect(matches!(principal, Formula::Impl(..)), || format!("{principal} is not an implication"))?;
            logical(d, principal, matches!(d.rule, Rule::ImplLeft { .. }))
        }
        Rule::FuseLeft { principal } | Rule::FuseRight { principal } => {
            arity(d, 1)?;
            expect(matches!(principal, Formula::Fuse(..)), || format!("{principal} is not a fusion"))?;
            logical(d, principal, matches!(d.rule, Rule::FuseLeft { .. }))
        }
        Rule::ZeroLeft | Rule::ZeroRight => {
            arity(d, 1)?;
            logical(d, &Formula::Zero, matches!(d.rule, Rule::ZeroLeft))
        }
        Rule::NegLeft { principal } | Rule::NegRight { principal } => {
            arity(d, 1)?;
            let Formula::Impl(a, z) = principal else {
                return Err(format!("{principal} is not a negation"));
            };
            expect(**z == Formula::Zero, || format!("{principal} is not a negation"))?;
            let left = matches!(d.rule, Rule::NegLeft { .. });
            let removed = if left { multiset::remove_one(&s.ant, principal) } else { multiset::remove_one(&s.suc, principal) }
                .ok_or_else(|| format!("{principal} does not occur in {s}"))?;
            let want = if left {
                Sequent::new(removed, multiset::union(&s.suc, &[(**a).clone()]))
            } else {
                Sequent::new(multiset::union(&s.ant, &[(**a).clone()]), removed)
            };
            let p = &d.premises[0].conclusion;
            expect(same(p, &want), || format!("premise {p} should be {want}"))
        }
        Rule::BoxN { n } => {
            arity(d, 1)?;
            let p = &d.premises[0].conclusion;
            expect(p.suc.len() == *n && p.suc.iter().all(|x| *x == p.suc[0]), || {
                format!("premise {p} must have {n} copies of one formula on the right")
            })?;
            let want = Sequent::new(
                p.ant.iter().cloned().map(Formula::boxed).collect(),
                p.suc.iter().cloned().map(Formula::boxed).collect(),
            );
            expect(same(s, &want), || mismatch(&want))
        }
        Rule::BoxKN { k, n, context } => {
            arity(d, n + 1)?;
            let want = box_kn_conclusion(context, &d.premises, *k)?;
            expect(same(s, &want), || mismatch(&want))
        }
        Rule::Can { formula } => {
            arity(d, 1)?;
            let one = Sequent::new(vec![formula.clone()], vec![formula.clone()]);
            let want = s.union(&one);
            let p = &d.premises[0].conclusion;
            expect(same(p, &want), || format!("premise {p} should be {want}"))
        }
    }
}

fn logical(d: &Derivation, principal: &Formula, left: bool) -> Result<(), String> {
    let s = &d.conclusion;
    let want = premise_of(s, principal, left).ok_or_else(|| {
        format!("{principal} does not occur on the {} of {s}", if left { "left" } else { "right" })
    })?;
    let p = &d.premises[0].conclusion;
    expect(same(p, &want), || format!("premise {p} should be {want}"))
}
