use num_traits::ToPrimitive;
use num_integer::Integer;

use super::{internal, SequentError};
use crate::formula::{Dialect, Formula, Sequent};
use crate::kripke::Model;
use crate::linarith::{self, Solution};
use crate::multiset;
use crate::tableau::{self, InequationOrigin, Mode, TableauOrigin};

/// `kΓ = Γ_0 ⊎ Γ_1 ⊎ … ⊎ Γ_m` for a valid `□Γ ⇒ □ψ_1, …, □ψ_m`, such that
/// `Γ_0 ⇒` and each `Γ_i ⇒ k[ψ_i]` are valid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub k: usize,
    /// `ψ_1, …, ψ_m` in the order of the input succedent.
    pub targets: Vec<Formula>,
    /// `Γ_0, Γ_1, …, Γ_m`.
    pub parts: Vec<Vec<Formula>>,
}

impl Partition {
    /// The sequents the parts have to prove: `Γ_0 ⇒` first, then `Γ_i ⇒ k[ψ_i]`.
    pub fn obligations(&self) -> Vec<Sequent> {
        let mut out = vec![Sequent::new(self.parts[0].clone(), vec![])];
        for (t, part) in self.targets.iter().zip(&self.parts[1..]) {
            out.push(Sequent::new(part.clone(), vec![t.clone(); self.k]));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PartitionResult {
    Valid(Partition),
    NotValid(Model),
}

fn bodies(xs: &[Formula]) -> Option<Vec<Formula>> {
    xs.iter()
        .map(|f| match f {
            Formula::Box(b) => Some((**b).clone()),
            _ => None,
        })
        .collect()
}

fn to_usize(x: &num_bigint::BigUint) -> Result<usize, SequentError> {
    x.to_usize().ok_or_else(|| SequentError::Internal("certificate multiplier too large".into()))
}

/// Read a partition off the certificate of the sequent tableau for `□Γ ⇒ □ψ̄`.
///
/// Boxes occurring on both sides are paired off first; each such target gets
/// `k` copies of its own body. When a target repeats `m` times, its share is
/// spread over the copies after scaling everything by the lcm of the
/// repetition counts.
pub fn extract_partition(boxseq: &Sequent) -> Result<PartitionResult, SequentError> {
    if let Some(f) = boxseq.formulas().find(|f| !f.is_multiplicative()) {
        return Err(SequentError::Fragment(f.to_string()));
    }
    let (Some(left), Some(right)) = (bodies(&boxseq.ant), bodies(&boxseq.suc)) else {
        return Err(SequentError::Shape(format!("{boxseq} is not of the form []G |- []p1, ..., []pm")));
    };
    let mut rest_left = left.clone();
    let mut stripped = vec![false; right.len()];
    for (i, b) in right.iter().enumerate() {
        if let Some(r) = multiset::remove_one(&rest_left, b) {
            rest_left = r;
            stripped[i] = true;
        }
    }
    let rest_right: Vec<Formula> = right.iter().zip(&stripped).filter(|(_, s)| !**s).map(|(b, _)| b.clone()).collect();

    let (k, shares, mult) = if rest_left.is_empty() && rest_right.is_empty() {
        (1, Shares::default(), 1)
    } else {
        let seq = Sequent::new(
            rest_left.iter().cloned().map(Formula::boxed).collect(),
            rest_right.iter().cloned().map(Formula::boxed).collect(),
        );
        let t = tableau::build_complete_tableau(&TableauOrigin::Sequent(seq), Mode::Serial, Dialect::KA)?;
        let [branch] = t.branches.as_slice() else {
            return internal("a multiplicative tableau has a single branch");
        };
        let (sys, rows) = tableau::branch_system(branch);
        let cert = match linarith::solve(&sys) {
            Solution::Unsat(c) => c,
            Solution::Sat(a) => {
                return Ok(PartitionResult::NotValid(tableau::induce_model(branch, &a, Dialect::KA)?));
            }
        };
        let mut k = 0usize;
        let mut shares = Shares::default();
        for (row, &at) in rows.iter().enumerate() {
            let lambda = to_usize(&cert.get(row))?;
            match &branch.inequations[at].origin {
                InequationOrigin::Root => k += lambda,
                InequationOrigin::BoxLeft { label: 1, body, target } => {
                    shares.add(*target, body, lambda);
                }
                InequationOrigin::BoxRight { label: 1, body, target } => shares.witness(body, *target),
                _ => {}
            }
        }
        for at in &branch.inequations {
            if let InequationOrigin::BoxRight { label: 1, body, target } = &at.origin {
                shares.witness(body, *target);
            }
        }
        if k == 0 {
            return internal("certificate does not use the root inequation");
        }
        let mult = rest_right
            .iter()
            .map(|b| multiset::count(&rest_right, b))
            .fold(1usize, |acc, m| acc.lcm(&m));
        (k, shares, mult)
    };

    let big_k = k * mult;
    let mut parts = vec![multiset::scale(&shares.part(2), mult)];
    for (b, s) in right.iter().zip(&stripped) {
        if *s {
            parts.push(vec![b.clone(); big_k]);
        } else {
            let m = multiset::count(&rest_right, b);
            let label = shares.witness_of(b).ok_or_else(|| SequentError::Internal(format!("no witness for []{b}")))?;
            parts.push(multiset::scale(&shares.part(label), mult / m));
        }
    }
    let pooled: Vec<Formula> = parts.iter().flatten().cloned().collect();
    if !multiset::eq(&pooled, &multiset::scale(&left, big_k)) {
        return internal("partition does not add up");
    }
    Ok(PartitionResult::Valid(Partition { k: big_k, targets: right, parts }))
}

/// Multiplier of `φ^y ≥ x_{□φ}` per successor `y`, and the witness label of
/// each right box.
#[derive(Default)]
struct Shares {
    by_label: Vec<(usize, Formula, usize)>,
    witnesses: Vec<(Formula, usize)>,
}

impl Shares {
    fn add(&mut self, label: usize, body: &Formula, lambda: usize) {
        self.by_label.push((label, body.clone(), lambda));
    }

    fn witness(&mut self, body: &Formula, label: usize) {
        if !self.witnesses.iter().any(|(b, _)| b == body) {
            self.witnesses.push((body.clone(), label));
        }
    }

    fn witness_of(&self, body: &Formula) -> Option<usize> {
        self.witnesses.iter().find(|(b, _)| b == body).map(|(_, l)| *l)
    }

    fn part(&self, label: usize) -> Vec<Formula> {
        let mut out = Vec::new();
        for (l, b, lambda) in &self.by_label {
            if *l == label {
                out.extend(std::iter::repeat_n(b.clone(), *lambda));
            }
        }
        out
    }
}
