use super::*;
use crate::formula::{formula_interpretation, Dialect};
use crate::parse::{parse_formula, parse_sequent};
use crate::tableau::{decide_sequent, Mode};

fn f(text: &str) -> Formula {
    parse_formula(text, Dialect::KA).unwrap()
}

fn s(text: &str) -> Sequent {
    parse_sequent(text, Dialect::KA).unwrap()
}

fn node(conclusion: &str, rule: Rule, premises: Vec<Derivation>) -> Derivation {
    Derivation { conclusion: s(conclusion), rule, premises }
}

/// `⇒ □(p&p) → (□p & □p)` by hand.
fn doubled_box() -> Derivation {
    let id = node("p, p |- p, p", Rule::Id, vec![]);
    let fl = node("p & p |- p, p", Rule::FuseLeft { principal: f("p & p") }, vec![id]);
    let bx = node("[](p & p) |- []p, []p", Rule::BoxN { n: 2 }, vec![fl]);
    let fr = node("[](p & p) |- []p & []p", Rule::FuseRight { principal: f("[]p & []p") }, vec![bx]);
    node("|- [](p & p) -> []p & []p", Rule::ImplRight { principal: f("[](p & p) -> []p & []p") }, vec![fr])
}

fn proved(text: &str) -> Derivation {
    match prove(&s(text)).unwrap() {
        ProofResult::Proved(d) => d,
        ProofResult::Invalid(m) => panic!("{text} refuted by {}", m.to_json_string()),
    }
}

fn assert_sound(d: &Derivation, rules: &RuleSet) {
    check_derivation(d, rules).unwrap();
    assert!(decide_sequent(&d.conclusion, Dialect::KA, Mode::Serial).unwrap().is_valid());
}

#[test]
fn doubled_box_checks() {
    let d = doubled_box();
    check_derivation(&d, &RuleSet::primitive_cut_free()).unwrap();
    assert_eq!(d.height(), 5);
}

#[test]
fn permuted_identity() {
    check_derivation(&node("p, q |- q, p", Rule::Id, vec![]), &RuleSet::primitive()).unwrap();
    let e = check_derivation(&node("p, q |- q", Rule::Id, vec![]), &RuleSet::primitive()).unwrap_err();
    assert!(e.path.is_empty());
}

#[test]
fn bad_mix_is_located() {
    let a = node("p |- p", Rule::Id, vec![]);
    let b = node("q |- q", Rule::Id, vec![]);
    let good = Derivation::mix(a.clone(), b.clone());
    check_derivation(&good, &RuleSet::primitive()).unwrap();
    let bad = node("p, q |- p", Rule::Mix, vec![a, b]);
    let root = node("p, q |- p, 0", Rule::ZeroRight, vec![bad]);
    let e = check_derivation(&root, &RuleSet::primitive()).unwrap_err();
    assert_eq!(e.path, vec![0]);
    assert!(e.to_string().starts_with("rule violation at [0]"), "{e}");
}

#[test]
fn cut_is_refused_when_cut_free() {
    let cut = node(
        "p |- p",
        Rule::Cut { formula: f("p") },
        vec![node("p |- p", Rule::Id, vec![]), node("p |- p", Rule::Id, vec![])],
    );
    check_derivation(&cut, &RuleSet::primitive()).unwrap();
    assert!(check_derivation(&cut, &RuleSet::primitive_cut_free()).is_err());
}

#[test]
fn box_kn_single_target() {
    let d = expand_box_kn(1, &[], vec![Derivation::empty(), node("p |- p", Rule::Id, vec![])]).unwrap();
    assert_eq!(d.rule, Rule::BoxN { n: 1 });
    assert_eq!(d.conclusion, s("[]p |- []p"));
}

#[test]
fn box_kn_leftover_only() {
    let p0 = node("p, p -> 0 |-", Rule::ImplLeft { principal: f("p -> 0") }, vec![node("p, 0 |- p", Rule::ZeroLeft, vec![node("p |- p", Rule::Id, vec![])])]);
    let d = expand_box_kn(1, &[], vec![p0]).unwrap();
    assert_eq!(d.rule, Rule::BoxN { n: 0 });
    assert_eq!(d.conclusion, s("[]p, [](p -> 0) |-"));
    check_derivation(&d, &RuleSet::primitive()).unwrap();
}

#[test]
fn box_kn_doubled() {
    let fl = || node("p & p |- p, p", Rule::FuseLeft { principal: f("p & p") }, vec![node("p, p |- p, p", Rule::Id, vec![])]);
    let d = expand_box_kn(2, &[f("q")], vec![Derivation::empty(), fl(), fl()]).unwrap();
    assert_eq!(d.conclusion, s("q, [](p & p) |- []p, []p, q"));
    assert_eq!(d.rule, Rule::Mix);
    assert_eq!(d.premises[1].rule, Rule::Sc { n: 2 });
    check_derivation(&d, &RuleSet::primitive()).unwrap();
}

#[test]
fn box_kn_shape_error() {
    let e = expand_box_kn(2, &[], vec![Derivation::empty(), node("p |- p", Rule::Id, vec![])]).unwrap_err();
    assert!(matches!(e, SequentError::Shape(_)));
}

fn partition(text: &str) -> Partition {
    match extract_partition(&s(text)).unwrap() {
        PartitionResult::Valid(p) => p,
        PartitionResult::NotValid(_) => panic!("{text} has no partition"),
    }
}

#[test]
fn partition_loop() {
    let p = partition("|- [](p -> p)");
    assert_eq!(p.k, 1);
    assert_eq!(p.parts, vec![vec![], vec![]]);
    for ob in p.obligations() {
        assert!(decide_sequent(&ob, Dialect::KA, Mode::Serial).unwrap().is_valid());
    }
}

#[test]
fn partition_seriality() {
    let p = partition("[]p, [](p -> 0) |-");
    assert_eq!(p.k, 1);
    assert!(crate::multiset::eq(&p.parts[0], &[f("p"), f("p -> 0")]));
}

#[test]
fn partition_refutes() {
    let PartitionResult::NotValid(m) = extract_partition(&s("[]p |- []q")).unwrap() else {
        panic!("expected a countermodel");
    };
    let v = m.eval(&formula_interpretation(&s("[]p |- []q")), "w1").unwrap();
    assert!(v < crate::rat::q(0));
}

#[test]
fn partition_repeated_target() {
    let p = partition("[](p & p) |- []p, []p");
    assert_eq!(p.k, 2);
    assert_eq!(p.parts[0], vec![]);
    assert_eq!(p.parts[1], vec![f("p & p")]);
    assert_eq!(p.parts[2], vec![f("p & p")]);
}

#[test]
fn partition_shared_box() {
    let p = partition("[]q, [](q -> 0), []p |- []p");
    assert_eq!(p.k, 1);
    assert!(crate::multiset::eq(&p.parts[0], &[f("q"), f("q -> 0")]));
    assert_eq!(p.parts[1], vec![f("p")]);
}

#[test]
fn partition_shape() {
    assert!(matches!(extract_partition(&s("p |- []p")), Err(SequentError::Shape(_))));
}

#[test]
fn prove_doubled_box() {
    let d = proved("|- [](p & p) -> []p & []p");
    assert_eq!(d.conclusion, doubled_box().conclusion);
    assert_sound(&d, &RuleSet::primitive_cut_free());
}

#[test]
fn prove_identity() {
    assert_eq!(proved("p |- p"), node("p |- p", Rule::Id, vec![]));
}

#[test]
fn prove_rejects_lattice() {
    assert!(matches!(prove(&s("|- [](p \\/ q)")), Err(SequentError::Fragment(_))));
}

#[test]
fn prove_modal_examples() {
    for text in [
        "|- <>[](q -> p) -> ([][]q -> <>[]p)",
        "|- []p -> <>p",
        "|- [](p -> q) -> ([]p -> []q)",
        "|- []0",
        "[]p, []q |- [](p & q)",
        "[]p & []p |- [](p & p)",
        "|- [](p & p & p) -> []p & []p & []p",
        "[][]p, [](q -> 0) |- [](q -> []p & []0)",
    ] {
        assert_sound(&proved(text), &RuleSet::primitive_cut_free());
    }
}

#[test]
fn prove_refutes() {
    for text in ["|- p", "[]p |- []q", "|- []p -> p", "p |- p & p", "|- [](p & p) -> []p"] {
        let ProofResult::Invalid(m) = prove(&s(text)).unwrap() else {
            panic!("{text} should be invalid");
        };
        let v = m.eval(&formula_interpretation(&s(text)), "w1").unwrap();
        assert!(v < crate::rat::q(0), "{text}: {v}");
    }
}

#[test]
fn json_round_trip() {
    let d = proved("|- [](p & p) -> []p & []p");
    let text = derivation_to_string(&d);
    assert!(text.ends_with("}\n"));
    assert_eq!(derivation_from_str(&text).unwrap(), d);
    let kn = box_kn(1, vec![f("q")], vec![Derivation::empty(), node("p |- p", Rule::Id, vec![])]).unwrap();
    assert_eq!(derivation_from_str(&derivation_to_string(&kn)).unwrap(), kn);
    assert!(derivation_to_json(&kn)["rule"] == "box_kn(1,1)");
}

#[test]
fn json_errors() {
    for text in ["[]", "{\"rule\": \"id\"}", "{\"rule\": \"warp\", \"conclusion\": \"|-\"}", "{\"rule\": \"sc(x)\", \"conclusion\": \"|-\"}", "nope"] {
        assert!(matches!(derivation_from_str(text), Err(SequentError::Format(_))), "{text}");
    }
}

fn restricted(d: &Derivation) -> Derivation {
    let r = to_restricted(d).unwrap();
    assert_eq!(r.conclusion, d.conclusion);
    check_derivation(&r, &RuleSet::restricted()).unwrap();
    r
}

#[test]
fn restrict_identity_and_mix() {
    let id = node("p |- p", Rule::Id, vec![]);
    assert_eq!(restricted(&id), id);
    let m = Derivation::mix(id, node("q |- q", Rule::Id, vec![]));
    assert_eq!(restricted(&m), node("p, q |- q, p", Rule::Id, vec![]));
    restricted(&doubled_box());
}

#[test]
fn mix_weights() {
    let a = restricted(&doubled_box());
    let b = node("q |- q", Rule::Id, vec![]);
    let d = admissible_mix(&a, &b, 0, 2).unwrap();
    assert_eq!(d.conclusion, s("q, q |- q, q"));
    let d = admissible_mix(&a, &b, 2, 1).unwrap();
    assert_eq!(d.conclusion, a.conclusion.scale(2).union(&b.conclusion));
    check_derivation(&d, &RuleSet::restricted()).unwrap();
}

#[test]
fn mix_two_box_nodes() {
    let a = restricted(&proved("[]p |- []p"));
    let b = restricted(&proved("[](q & q) |- []q, []q"));
    let d = admissible_mix(&a, &b, 1, 1).unwrap();
    assert!(matches!(d.rule, Rule::BoxKN { n: 3, .. }), "{}", d.rule);
    check_derivation(&d, &RuleSet::restricted()).unwrap();
}

#[test]
fn scale_down() {
    let d = admissible_scale(&node("p, p |- p, p", Rule::Id, vec![]), 2).unwrap();
    assert_eq!(d, node("p |- p", Rule::Id, vec![]));
    let twice = restricted(&proved("|- p -> p, p -> p"));
    let d = admissible_scale(&twice, 2).unwrap();
    assert_eq!(d.conclusion, s("|- p -> p"));
    check_derivation(&d, &RuleSet::restricted()).unwrap();
    let boxes = restricted(&proved("[]p, []p, []q, []q |- []p & []q, []p & []q"));
    let d = admissible_scale(&boxes, 2).unwrap();
    assert_eq!(d.conclusion, s("[]p, []q |- []p & []q"));
    check_derivation(&d, &RuleSet::restricted()).unwrap();
}

#[test]
fn cancel_formulas() {
    let d = restricted(&proved("p -> q, q -> r, p |- r"));
    for phi in ["q", "p -> q", "[](q & p)"] {
        let both = admissible_mix(&d, &Derivation::id_of(vec![f(phi)]), 1, 1).unwrap();
        let c = cancel(&both, &f(phi)).unwrap();
        assert_eq!(c.conclusion, d.conclusion);
        check_derivation(&c, &RuleSet::restricted()).unwrap();
    }
    let boxed = restricted(&proved("[](p -> q), []p |- []q"));
    let both = admissible_mix(&boxed, &restricted(&proved("[]q |- [](q & 0)")), 1, 1).unwrap();
    let c = cancel(&both, &f("[]q")).unwrap();
    assert_eq!(c.conclusion, s("[](p -> q), []p |- [](q & 0)"));
    check_derivation(&c, &RuleSet::restricted()).unwrap();
}

#[test]
fn cuts_are_eliminated() {
    let trivial = node(
        "p |- p",
        Rule::Cut { formula: f("p") },
        vec![node("p |- p", Rule::Id, vec![]), node("p |- p", Rule::Id, vec![])],
    );
    let d = eliminate_cuts(&trivial).unwrap();
    assert_eq!(d, node("p |- p", Rule::Id, vec![]));

    let left = proved("[]p |- [](q -> p & q)");
    let right = proved("[](q -> p & q), []q |- [](p & q)");
    let cut = Derivation {
        conclusion: s("[]p, []q |- [](p & q)"),
        rule: Rule::Cut { formula: f("[](q -> p & q)") },
        premises: vec![right, left],
    };
    check_derivation(&cut, &RuleSet::primitive()).unwrap();
    let d = eliminate_cuts(&cut).unwrap();
    assert_eq!(d.conclusion, cut.conclusion);
    check_derivation(&d, &RuleSet::primitive_cut_free()).unwrap();
}

#[test]
fn can_expands_to_cut() {
    let p = node("p, p -> 0 |- p -> 0, p", Rule::Id, vec![]);
    let can = node("p |- p", Rule::Can { formula: f("p -> 0") }, vec![p]);
    check_derivation(&can, &RuleSet::all()).unwrap();
    let e = expand(&can).unwrap();
    assert_eq!(e.rule, Rule::Cut { formula: f("(p -> 0) -> p -> 0") });
    check_derivation(&e, &RuleSet::primitive()).unwrap();
    assert_eq!(eliminate_cuts(&can).unwrap(), node("p |- p", Rule::Id, vec![]));
}
