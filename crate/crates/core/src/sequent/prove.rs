use super::{apply, box_kn, expand, extract_partition, internal, is_decomposable, premise_of, Derivation, PartitionResult, SequentError};
use crate::formula::{Formula, Sequent};
use crate::kripke::Model;
use crate::multiset;
use crate::rat::q;

#[derive(Debug, Clone, PartialEq)]
pub enum ProofResult {
    /// A cut-free derivation in primitive rules.
    Proved(Derivation),
    Invalid(Model),
}

/// Search for a derivation of `s`, or a countermodel to it.
pub fn prove(s: &Sequent) -> Result<ProofResult, SequentError> {
    if let Some(f) = s.formulas().find(|f| !f.is_multiplicative()) {
        return Err(SequentError::Fragment(f.to_string()));
    }
    Ok(match search(s)? {
        ProofResult::Proved(d) => ProofResult::Proved(expand(&d)?),
        invalid => invalid,
    })
}

fn search(s: &Sequent) -> Result<ProofResult, SequentError> {
    let next = s
        .ant
        .iter()
        .find(|f| is_decomposable(f))
        .map(|f| (f.clone(), true))
        .or_else(|| s.suc.iter().find(|f| is_decomposable(f)).map(|f| (f.clone(), false)));
    if let Some((chi, left)) = next {
        let premise = premise_of(s, &chi, left).expect("formula occurs");
        return Ok(match search(&premise)? {
            ProofResult::Proved(d) => ProofResult::Proved(apply(&chi, left, d)?),
            invalid => invalid,
        });
    }
    let (boxes_l, pi): (Vec<Formula>, Vec<Formula>) = s.ant.iter().cloned().partition(Formula::is_box);
    let (boxes_r, sigma): (Vec<Formula>, Vec<Formula>) = s.suc.iter().cloned().partition(Formula::is_box);
    if !multiset::eq(&pi, &sigma) {
        return Ok(ProofResult::Invalid(one_world(&pi, &sigma)));
    }
    if boxes_l.is_empty() && boxes_r.is_empty() {
        return Ok(ProofResult::Proved(Derivation::id(s.clone())));
    }
    let part = match extract_partition(&Sequent::new(boxes_l, boxes_r))? {
        PartitionResult::NotValid(m) => return Ok(ProofResult::Invalid(m)),
        PartitionResult::Valid(p) => p,
    };
    let mut premises = Vec::new();
    for ob in part.obligations() {
        match search(&ob)? {
            ProofResult::Proved(d) => premises.push(d),
            ProofResult::Invalid(_) => return internal(format!("partition obligation {ob} is not valid")),
        }
    }
    Ok(ProofResult::Proved(box_kn(part.k, pi, premises)?))
}

/// One irreflexive world; a variable is 1 where it occurs more often on the
/// left, −1 where it occurs more often on the right.
fn one_world(pi: &[Formula], sigma: &[Formula]) -> Model {
    let mut m = Model::new(&["w1"]);
    let vars: std::collections::BTreeSet<&Formula> = pi.iter().chain(sigma).collect();
    for v in vars {
        let (l, r) = (multiset::count(pi, v), multiset::count(sigma, v));
        if let Formula::Var(p) = v {
            if l != r {
                m.set(p, "w1", q(if l > r { 1 } else { -1 })).expect("world exists");
            }
        }
    }
    m
}
