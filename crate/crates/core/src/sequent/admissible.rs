//! Constructive invertibility, admissibility of `MIX` and `SC_n`, and
//! cancellation over restricted derivations, and cut-elimination built on them.
//!
//! Restricted derivations use only `ID`, the single-premise logical rules and
//! `□_{k,n}`.

use super::{all_components, apply, box_kn, internal, is_decomposable, premise_of, principal_of, Derivation, Rule, SequentError};
use crate::formula::{Formula, Sequent};
use crate::multiset;

fn shape<T>(msg: impl Into<String>) -> Result<T, SequentError> {
    Err(SequentError::Shape(msg.into()))
}

/// A derivation of `d`'s conclusion with one occurrence of `chi` on the given
/// side replaced by the premise of its rule.
pub fn invert(d: &Derivation, chi: &Formula, left: bool) -> Result<Derivation, SequentError> {
    if !is_decomposable(chi) {
        return shape(format!("{chi} has no invertible rule"));
    }
    if premise_of(&d.conclusion, chi, left).is_none() {
        return shape(format!("{chi} does not occur in {}", d.conclusion));
    }
    match &d.rule {
        Rule::Id => {
            let target = premise_of(&d.conclusion, chi, left).expect("checked above");
            match premise_of(&target, chi, !left) {
                Some(top) => apply(chi, !left, Derivation::id(top)),
                None => internal("identity lost its other copy"),
            }
        }
        r => match principal_of(r) {
            Some((f, side)) if f == *chi && side == left => Ok(d.premises[0].clone()),
            Some((f, side)) => {
                let inner = invert(&d.premises[0], chi, left)?;
                apply(&f, side, inner)
            }
            None => match r {
                Rule::BoxKN { k, context, .. } => {
                    let Some(rest) = multiset::remove_one(context, chi) else {
                        return internal(format!("{chi} is not in the box_kn context"));
                    };
                    let context = multiset::union(&rest, &all_components(chi));
                    apply(chi, !left, box_kn(*k, context, d.premises.clone())?)
                }
                _ => shape(format!("invert expects a restricted derivation, found {r}")),
            },
        },
    }
}

/// `n` copies of the conclusion of `d`, re-derived.
fn scale_up(d: &Derivation, n: usize) -> Result<Derivation, SequentError> {
    admissible_mix(d, &Derivation::empty(), n, 0)
}

/// A restricted derivation of `rΓ, sΠ ⇒ sΣ, rΔ` from ones of `Γ ⇒ Δ` and `Π ⇒ Σ`.
pub fn admissible_mix(d1: &Derivation, d2: &Derivation, r: usize, s: usize) -> Result<Derivation, SequentError> {
    let empty = Derivation::empty();
    let d1 = if r == 0 { &empty } else { d1 };
    let d2 = if s == 0 { &empty } else { d2 };
    if let Some((f, side)) = principal_of(&d1.rule) {
        let mut acc = admissible_mix(&d1.premises[0], d2, r, s)?;
        for _ in 0..r {
            acc = apply(&f, side, acc)?;
        }
        return Ok(acc);
    }
    if let Some((f, side)) = principal_of(&d2.rule) {
        let mut acc = admissible_mix(d1, &d2.premises[0], r, s)?;
        for _ in 0..s {
            acc = apply(&f, side, acc)?;
        }
        return Ok(acc);
    }
    match (&d1.rule, &d2.rule) {
        (Rule::Id, Rule::Id) => Ok(Derivation::id(d1.conclusion.scale(r).union(&d2.conclusion.scale(s)))),
        (Rule::BoxKN { .. }, Rule::Id) => box_with_id(d1, r, &d2.conclusion.ant, s),
        (Rule::Id, Rule::BoxKN { .. }) => box_with_id(d2, s, &d1.conclusion.ant, r),
        (Rule::BoxKN { k, context: om, .. }, Rule::BoxKN { k: l, context: th, .. }) => {
            let (k, l) = (*k, *l);
            let mut premises = vec![admissible_mix(&d1.premises[0], &d2.premises[0], r * l, s * k)?];
            let ps: Vec<Derivation> = d1.premises[1..].iter().map(|p| scale_up(p, l)).collect::<Result<_, _>>()?;
            let qs: Vec<Derivation> = d2.premises[1..].iter().map(|q| scale_up(q, k)).collect::<Result<_, _>>()?;
            for _ in 0..r {
                premises.extend(ps.iter().cloned());
            }
            for _ in 0..s {
                premises.extend(qs.iter().cloned());
            }
            let context = multiset::union(&multiset::scale(om, r), &multiset::scale(th, s));
            box_kn(k * l, context, premises)
        }
        (a, b) => shape(format!("admissible_mix expects restricted derivations, found {a} and {b}")),
    }
}

/// `r` copies of a `□_{k,n}` conclusion next to `s` copies of the identity on `pi`.
fn box_with_id(d: &Derivation, r: usize, pi: &[Formula], s: usize) -> Result<Derivation, SequentError> {
    let Rule::BoxKN { k, context, .. } = &d.rule else { unreachable!() };
    let mut premises = vec![scale_up(&d.premises[0], r)?];
    for _ in 0..r {
        premises.extend(d.premises[1..].iter().cloned());
    }
    let context = multiset::union(&multiset::scale(context, r), &multiset::scale(pi, s));
    box_kn(*k, context, premises)
}

fn divide(xs: &[Formula], n: usize) -> Option<Vec<Formula>> {
    let mut out = Vec::new();
    for (f, c) in multiset::counts(xs) {
        if c % n != 0 {
            return None;
        }
        out.extend(std::iter::repeat_n(f, c / n));
    }
    Some(out)
}

/// First decomposable formula, scanning the antecedent before the succedent.
fn first_decomposable(s: &Sequent) -> Option<(Formula, bool)> {
    s.ant
        .iter()
        .find(|f| is_decomposable(f))
        .map(|f| (f.clone(), true))
        .or_else(|| s.suc.iter().find(|f| is_decomposable(f)).map(|f| (f.clone(), false)))
}

fn box_body(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Box(b) => Some(b),
        _ => None,
    }
}

/// A restricted derivation of `Γ ⇒ Δ` from one of `nΓ ⇒ nΔ`.
pub fn admissible_scale(d: &Derivation, n: usize) -> Result<Derivation, SequentError> {
    if n == 0 {
        return shape("cannot scale by 0");
    }
    if n == 1 {
        return Ok(d.clone());
    }
    let s = &d.conclusion;
    let (Some(ant), Some(suc)) = (divide(&s.ant, n), divide(&s.suc, n)) else {
        return shape(format!("{s} is not {n} copies of a sequent"));
    };
    let t = Sequent::new(ant, suc);
    if let Some((chi, left)) = first_decomposable(&t) {
        let mut cur = d.clone();
        for _ in 0..n {
            cur = invert(&cur, &chi, left)?;
        }
        return apply(&chi, left, admissible_scale(&cur, n)?);
    }
    if multiset::eq(&t.ant, &t.suc) {
        return Ok(Derivation::id(t));
    }
    let Rule::BoxKN { k, context, .. } = &d.rule else {
        return shape(format!("expected box_kn below {s}, found {}", d.rule));
    };
    let k = *k;
    let (ctx_boxes, ctx_rest): (Vec<Formula>, Vec<Formula>) = context.iter().cloned().partition(Formula::is_box);
    let Some(pi) = divide(&ctx_rest, n) else {
        return internal("box_kn context is not divisible");
    };
    let mut targets: Vec<(Formula, Derivation)> =
        d.premises[1..].iter().map(|p| (p.conclusion.suc[0].clone(), p.clone())).collect();
    for b in &ctx_boxes {
        let body = box_body(b).expect("partitioned on boxes").clone();
        targets.push((body.clone(), Derivation::id_of(vec![body; k])));
    }
    let mut premises = vec![d.premises[0].clone()];
    for f in &t.suc {
        let Some(body) = box_body(f) else { continue };
        let mut acc: Option<Derivation> = None;
        for _ in 0..n {
            let Some(pos) = targets.iter().position(|(b, _)| b == body) else {
                return internal(format!("not enough premises for []{body}"));
            };
            let (_, p) = targets.remove(pos);
            acc = Some(match acc {
                None => p,
                Some(a) => admissible_mix(&a, &p, 1, 1)?,
            });
        }
        premises.push(acc.expect("n >= 2"));
    }
    if !targets.is_empty() {
        return internal("unassigned box_kn premises while scaling");
    }
    box_kn(k * n, pi, premises)
}

/// A restricted derivation of `Γ ⇒ Δ` from one of `Γ, φ ⇒ φ, Δ`.
pub fn cancel(d: &Derivation, phi: &Formula) -> Result<Derivation, SequentError> {
    let s = &d.conclusion;
    let (Some(ant), Some(suc)) = (multiset::remove_one(&s.ant, phi), multiset::remove_one(&s.suc, phi)) else {
        return shape(format!("{phi} does not occur on both sides of {s}"));
    };
    let t = Sequent::new(ant, suc);
    if multiset::eq(&t.ant, &t.suc) {
        return Ok(Derivation::id(t));
    }
    if is_decomposable(phi) {
        let mut cur = invert(&invert(d, phi, true)?, phi, false)?;
        for c in all_components(phi) {
            debug_assert!(c.complexity() < phi.complexity());
            cur = cancel(&cur, &c)?;
        }
        return Ok(cur);
    }
    if let Some((chi, left)) = first_decomposable(&t) {
        let inner = cancel(&invert(d, &chi, left)?, phi)?;
        return apply(&chi, left, inner);
    }
    let Rule::BoxKN { k, context, .. } = &d.rule else {
        return shape(format!("expected box_kn below {s}, found {}", d.rule));
    };
    if let Some(rest) = multiset::remove_one(context, phi) {
        return box_kn(*k, rest, d.premises.clone());
    }
    let Some(chi) = box_body(phi) else {
        return internal(format!("variable {phi} outside the box_kn context"));
    };
    cancel_box(d, *k, context, chi)
}

fn cancel_times(d: Derivation, chi: &Formula, times: usize) -> Result<Derivation, SequentError> {
    (0..times).try_fold(d, |acc, _| cancel(&acc, chi))
}

/// `□χ` is both a left box and a target of the final `□_{k,n}`.
fn cancel_box(d: &Derivation, k: usize, context: &[Formula], chi: &Formula) -> Result<Derivation, SequentError> {
    let ps = &d.premises;
    let Some(t) = (1..ps.len()).find(|&i| ps[i].conclusion.suc[0] == *chi) else {
        return internal(format!("no premise targets {chi}"));
    };
    let mut ks = vec![0usize; ps.len()];
    let mut remaining = k;
    let order = std::iter::once(t).chain((0..ps.len()).filter(|&i| i != t));
    for i in order {
        let take = multiset::count(&ps[i].conclusion.ant, chi).min(remaining);
        ks[i] = take;
        remaining -= take;
    }
    if remaining > 0 {
        return internal(format!("premises hold fewer than {k} copies of {chi}"));
    }
    let ct = cancel_times(ps[t].clone(), chi, ks[t])?;
    let others = (0..ps.len()).filter(|&i| i != t);
    if ks[t] == k {
        let mut premises = vec![admissible_mix(&ps[0], &ct, 1, 1)?];
        premises.extend(others.filter(|&i| i != 0).map(|i| ps[i].clone()));
        return box_kn(k, context.to_vec(), premises);
    }
    let rest = k - ks[t];
    let mut premises = Vec::new();
    for i in others {
        let mixed = admissible_mix(&ct, &ps[i], ks[i], rest)?;
        premises.push(cancel_times(mixed, chi, rest * ks[i])?);
    }
    box_kn(rest * k, context.to_vec(), premises)
}

/// A restricted derivation with the same conclusion as a cut-free one.
pub fn to_restricted(d: &Derivation) -> Result<Derivation, SequentError> {
    let tr = |i: usize| to_restricted(&d.premises[i]);
    match &d.rule {
        Rule::Id => Ok(d.clone()),
        Rule::ImplLeft { .. } | Rule::ImplRight { .. } | Rule::FuseLeft { .. } | Rule::FuseRight { .. } | Rule::ZeroLeft | Rule::ZeroRight => {
            Ok(Derivation { conclusion: d.conclusion.clone(), rule: d.rule.clone(), premises: vec![tr(0)?] })
        }
        Rule::NegLeft { principal } => apply(principal, true, apply(&Formula::Zero, true, tr(0)?)?),
        Rule::NegRight { principal } => apply(principal, false, apply(&Formula::Zero, false, tr(0)?)?),
        Rule::Mix => admissible_mix(&tr(0)?, &tr(1)?, 1, 1),
        Rule::Sc { n } => admissible_scale(&tr(0)?, *n),
        Rule::BoxN { n: 0 } => box_kn(1, vec![], vec![tr(0)?]),
        Rule::BoxN { n } => {
            let p = tr(0)?;
            let mut premises = vec![Derivation::empty()];
            premises.extend(std::iter::repeat_n(p, *n));
            box_kn(*n, vec![], premises)
        }
        Rule::BoxKN { k, context, .. } => {
            let premises = (0..d.premises.len()).map(tr).collect::<Result<Vec<_>, _>>()?;
            box_kn(*k, context.clone(), premises)
        }
        Rule::Can { formula } => cancel(&tr(0)?, formula),
        Rule::Cut { .. } => shape("to_restricted expects a cut-free derivation"),
    }
}

/// Remove every `CUT` (and cancellation) node, uppermost first. The result
/// uses primitive rules only.
pub fn eliminate_cuts(d: &Derivation) -> Result<Derivation, SequentError> {
    super::expand(&eliminate(d)?)
}

fn eliminate(d: &Derivation) -> Result<Derivation, SequentError> {
    let premises = d.premises.iter().map(eliminate).collect::<Result<Vec<_>, _>>()?;
    match &d.rule {
        Rule::Cut { formula } => {
            let joined = admissible_mix(&to_restricted(&premises[0])?, &to_restricted(&premises[1])?, 1, 1)?;
            cancel(&joined, formula)
        }
        Rule::Can { formula } => cancel(&to_restricted(&premises[0])?, formula),
        rule => Ok(Derivation { conclusion: d.conclusion.clone(), rule: rule.clone(), premises }),
    }
}
