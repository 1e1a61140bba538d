//! Exact feasibility of homogeneous strict/non-strict linear systems.
//!
//! Fourier–Motzkin elimination over rationals. Every derived row remembers the
//! non-negative combination of input rows it came from, so a contradiction
//! `0 > 0` unwinds into a Farkas certificate over the original inequations.
//! Feasible systems get a witness by back-substitution through the stages.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::formula::Formula;
use crate::rat::Q;

/// A variable of a branch system. The derived order (kind, label, name) is the
/// elimination order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LinVar {
    Atom { label: usize, name: String },
    Box { label: usize, body: Formula },
    C,
}

impl LinVar {
    pub fn atom(name: &str, label: usize) -> LinVar {
        LinVar::Atom { label, name: name.to_string() }
    }

    pub fn boxed(body: Formula, label: usize) -> LinVar {
        LinVar::Box { label, body }
    }
}

impl fmt::Display for LinVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinVar::Atom { label, name } => write!(f, "{name}^{label}"),
            LinVar::Box { label, body } => write!(f, "x{{[]{body}}}^{label}"),
            LinVar::C => f.write_str("c"),
        }
    }
}

pub type LinSum = BTreeMap<LinVar, u64>;

/// `lhs > rhs` or `lhs >= rhs` between formal sums with positive coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearInequation {
    pub lhs: LinSum,
    pub rhs: LinSum,
    pub strict: bool,
}

impl LinearInequation {
    pub fn new(lhs: &[(LinVar, u64)], rhs: &[(LinVar, u64)], strict: bool) -> LinearInequation {
        let collect = |xs: &[(LinVar, u64)]| {
            let mut m = LinSum::new();
            for (v, c) in xs {
                if *c > 0 {
                    *m.entry(v.clone()).or_insert(0) += c;
                }
            }
            m
        };
        LinearInequation { lhs: collect(lhs), rhs: collect(rhs), strict }
    }

    pub fn vars(&self) -> impl Iterator<Item = &LinVar> {
        self.lhs.keys().chain(self.rhs.keys())
    }

    pub fn holds(&self, a: &Assignment) -> bool {
        let side = |s: &LinSum| s.iter().fold(Q::zero(), |acc, (v, c)| acc + a.get(v) * Q::from_integer(BigInt::from(*c)));
        let (l, r) = (side(&self.lhs), side(&self.rhs));
        if self.strict {
            l > r
        } else {
            l >= r
        }
    }
}

fn write_sum(f: &mut fmt::Formatter<'_>, s: &LinSum) -> fmt::Result {
    if s.is_empty() {
        return f.write_str("0");
    }
    for (i, (v, c)) in s.iter().enumerate() {
        if i > 0 {
            f.write_str(" + ")?;
        }
        if *c == 1 {
            write!(f, "{v}")?;
        } else {
            write!(f, "{c} {v}")?;
        }
    }
    Ok(())
}

impl fmt::Display for LinearInequation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(f, &self.lhs)?;
        f.write_str(if self.strict { " > " } else { " >= " })?;
        write_sum(f, &self.rhs)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinearSystem {
    pub inequations: Vec<LinearInequation>,
}

impl LinearSystem {
    pub fn new(inequations: Vec<LinearInequation>) -> LinearSystem {
        LinearSystem { inequations }
    }

    pub fn len(&self) -> usize {
        self.inequations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inequations.is_empty()
    }

    pub fn vars(&self) -> Vec<LinVar> {
        let mut vs: Vec<LinVar> = self.inequations.iter().flat_map(|i| i.vars().cloned()).collect();
        vs.sort();
        vs.dedup();
        vs
    }
}

impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, ineq) in self.inequations.iter().enumerate() {
            writeln!(f, "{i}: {ineq}")?;
        }
        Ok(())
    }
}

/// Natural multipliers, keyed by inequation index; zero entries are omitted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub multipliers: BTreeMap<usize, BigUint>,
}

impl FarkasCertificate {
    pub fn from_counts(counts: &[u64]) -> FarkasCertificate {
        let multipliers = counts
            .iter()
            .enumerate()
            .filter(|(_, c)| **c > 0)
            .map(|(i, c)| (i, BigUint::from(*c)))
            .collect();
        FarkasCertificate { multipliers }
    }

    pub fn get(&self, index: usize) -> BigUint {
        self.multipliers.get(&index).cloned().unwrap_or_default()
    }
}

impl fmt::Display for FarkasCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.multipliers.iter().map(|(i, m)| format!("{i}:{m}")).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    pub values: BTreeMap<LinVar, Q>,
}

impl Assignment {
    pub fn get(&self, v: &LinVar) -> Q {
        self.values.get(v).cloned().unwrap_or_else(Q::zero)
    }

    pub fn set(&mut self, v: LinVar, x: Q) {
        self.values.insert(v, x);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Sat(Assignment),
    Unsat(FarkasCertificate),
}

impl Solution {
    pub fn is_sat(&self) -> bool {
        matches!(self, Solution::Sat(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("multiplier index {index} out of range for a system of {len} inequations")]
pub struct IndexError {
    pub index: usize,
    pub len: usize,
}

/// `Σ coeffs·v ▷ 0`, together with the combination of input rows it came from.
#[derive(Debug, Clone)]
struct Row {
    coeffs: BTreeMap<LinVar, Q>,
    strict: bool,
    prov: BTreeMap<usize, Q>,
}

impl Row {
    fn from_inequation(i: usize, ineq: &LinearInequation) -> Row {
        let mut coeffs: BTreeMap<LinVar, Q> = BTreeMap::new();
        for (v, c) in &ineq.lhs {
            *coeffs.entry(v.clone()).or_insert_with(Q::zero) += Q::from_integer(BigInt::from(*c));
        }
        for (v, c) in &ineq.rhs {
            *coeffs.entry(v.clone()).or_insert_with(Q::zero) -= Q::from_integer(BigInt::from(*c));
        }
        coeffs.retain(|_, c| !c.is_zero());
        let prov = BTreeMap::from([(i, Q::one())]);
        let mut row = Row { coeffs, strict: ineq.strict, prov };
        row.normalize();
        row
    }

    /// Scale to a primitive integer vector (positive factor only).
    fn normalize(&mut self) {
        if self.coeffs.is_empty() {
            return;
        }
        let mut l = BigInt::one();
        for c in self.coeffs.values() {
            l = l.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.coeffs.values() {
            g = g.gcd(&(c.numer() * (&l / c.denom())));
        }
        let factor = Q::new(l, g);
        if factor.is_one() {
            return;
        }
        for c in self.coeffs.values_mut() {
            *c = &*c * &factor;
        }
        for p in self.prov.values_mut() {
            *p = &*p * &factor;
        }
    }

    fn combine(p: &Row, n: &Row, v: &LinVar) -> Row {
        let a = p.coeffs[v].clone();
        let b = -n.coeffs[v].clone();
        let mut coeffs = BTreeMap::new();
        for (var, c) in &p.coeffs {
            *coeffs.entry(var.clone()).or_insert_with(Q::zero) += c * &b;
        }
        for (var, c) in &n.coeffs {
            *coeffs.entry(var.clone()).or_insert_with(Q::zero) += c * &a;
        }
        coeffs.retain(|_, c: &mut Q| !c.is_zero());
        let mut prov = BTreeMap::new();
        for (i, m) in &p.prov {
            *prov.entry(*i).or_insert_with(Q::zero) += m * &b;
        }
        for (i, m) in &n.prov {
            *prov.entry(*i).or_insert_with(Q::zero) += m * &a;
        }
        let mut row = Row { coeffs, strict: p.strict || n.strict, prov };
        row.normalize();
        row
    }
}

/// Rows keyed by their (normalized) coefficient vector; a strict row replaces
/// a non-strict one with the same left-hand side.
#[derive(Default)]
struct RowSet {
    rows: Vec<Row>,
    index: BTreeMap<Vec<(LinVar, Q)>, usize>,
}

impl RowSet {
    fn insert(&mut self, row: Row) {
        let key: Vec<(LinVar, Q)> = row.coeffs.iter().map(|(v, c)| (v.clone(), c.clone())).collect();
        match self.index.get(&key) {
            Some(&at) => {
                if row.strict && !self.rows[at].strict {
                    self.rows[at] = row;
                }
            }
            None => {
                self.index.insert(key, self.rows.len());
                self.rows.push(row);
            }
        }
    }
}

enum Step {
    Rows(Vec<Row>),
    Contradiction(BTreeMap<usize, Q>),
}

fn certificate_from(prov: &BTreeMap<usize, Q>) -> FarkasCertificate {
    let mut l = BigInt::one();
    for m in prov.values() {
        l = l.lcm(m.denom());
    }
    let ints: Vec<(usize, BigInt)> = prov
        .iter()
        .filter(|(_, m)| !m.is_zero())
        .map(|(i, m)| (*i, m.numer() * (&l / m.denom())))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, (_, x)| g.gcd(x));
    let multipliers = ints
        .into_iter()
        .map(|(i, x)| {
            let x = x / &g;
            debug_assert!(x.sign() == Sign::Plus);
            (i, x.to_biguint().expect("multipliers are non-negative"))
        })
        .collect();
    FarkasCertificate { multipliers }
}

fn eliminate(rows: Vec<Row>, v: &LinVar) -> Step {
    let (with, without): (Vec<Row>, Vec<Row>) = rows.into_iter().partition(|r| r.coeffs.contains_key(v));
    let mut next = RowSet::default();
    for r in without {
        next.insert(r);
    }
    let (pos, neg): (Vec<&Row>, Vec<&Row>) = with.iter().partition(|r| r.coeffs[v].is_positive());
    for p in &pos {
        for n in &neg {
            let row = Row::combine(p, n, v);
            if row.coeffs.is_empty() {
                if row.strict {
                    return Step::Contradiction(row.prov);
                }
                continue;
            }
            next.insert(row);
        }
    }
    Step::Rows(next.rows)
}

/// Choose a value for `v` given values for every later variable.
fn pick(v: &LinVar, rows: &[Row], a: &Assignment) -> Q {
    let mut lower: Option<(Q, bool)> = None;
    let mut upper: Option<(Q, bool)> = None;
    for r in rows {
        let cv = &r.coeffs[v];
        let rest = r
            .coeffs
            .iter()
            .filter(|(w, _)| *w != v)
            .fold(Q::zero(), |acc, (w, c)| acc + c * a.get(w));
        let bound = -rest / cv;
        if cv.is_positive() {
            // v ▷ bound
            let tighter = match &lower {
                None => true,
                Some((b, s)) => bound > *b || (bound == *b && r.strict && !s),
            };
            if tighter {
                lower = Some((bound, r.strict));
            }
        } else {
            // v ◁ bound
            let tighter = match &upper {
                None => true,
                Some((b, s)) => bound < *b || (bound == *b && r.strict && !s),
            };
            if tighter {
                upper = Some((bound, r.strict));
            }
        }
    }
    match (lower, upper) {
        (Some((lo, _)), Some((hi, _))) => (lo + hi) / Q::from_integer(BigInt::from(2)),
        (Some((lo, _)), None) => lo + Q::one(),
        (None, Some((hi, _))) => hi - Q::one(),
        (None, None) => Q::zero(),
    }
}

/// Decide feasibility over ℚ (equivalently ℝ) of a system of inequations.
pub fn solve(sys: &LinearSystem) -> Solution {
    let mut rows = Vec::new();
    for (i, ineq) in sys.inequations.iter().enumerate() {
        let row = Row::from_inequation(i, ineq);
        if row.coeffs.is_empty() {
            if row.strict {
                return Solution::Unsat(certificate_from(&row.prov));
            }
            continue;
        }
        rows.push(row);
    }
    let vars = sys.vars();
    let mut stages: Vec<(LinVar, Vec<Row>)> = Vec::new();
    for v in &vars {
        let here: Vec<Row> = rows.iter().filter(|r| r.coeffs.contains_key(v)).cloned().collect();
        stages.push((v.clone(), here));
        match eliminate(rows, v) {
            Step::Rows(next) => rows = next,
            Step::Contradiction(prov) => return Solution::Unsat(certificate_from(&prov)),
        }
    }
    debug_assert!(rows.is_empty());
    let mut a = Assignment::default();
    for (v, here) in stages.iter().rev() {
        let x = pick(v, here, &a);
        a.set(v.clone(), x);
    }
    debug_assert!(check_assignment(sys, &a));
    Solution::Sat(a)
}

pub fn check_certificate(sys: &LinearSystem, cert: &FarkasCertificate) -> Result<bool, IndexError> {
    let len = sys.inequations.len();
    if let Some((&index, _)) = cert.multipliers.iter().find(|(i, _)| **i >= len) {
        return Err(IndexError { index, len });
    }
    let mut lhs: BTreeMap<&LinVar, BigUint> = BTreeMap::new();
    let mut rhs: BTreeMap<&LinVar, BigUint> = BTreeMap::new();
    let mut strict_used = false;
    for (&i, m) in &cert.multipliers {
        if m.is_zero() {
            continue;
        }
        let ineq = &sys.inequations[i];
        strict_used |= ineq.strict;
        for (v, c) in &ineq.lhs {
            *lhs.entry(v).or_default() += m * BigUint::from(*c);
        }
        for (v, c) in &ineq.rhs {
            *rhs.entry(v).or_default() += m * BigUint::from(*c);
        }
    }
    Ok(strict_used && lhs == rhs)
}

pub fn check_assignment(sys: &LinearSystem, a: &Assignment) -> bool {
    sys.inequations.iter().all(|i| i.holds(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::q;

    fn v(name: &str) -> LinVar {
        LinVar::atom(name, 1)
    }

    fn ineq(lhs: &[&str], rhs: &[&str], strict: bool) -> LinearInequation {
        let side = |xs: &[&str]| xs.iter().map(|n| (v(n), 1)).collect::<Vec<_>>();
        LinearInequation::new(&side(lhs), &side(rhs), strict)
    }

    fn seriality() -> LinearSystem {
        LinearSystem::new(vec![ineq(&["x", "y"], &[], true), ineq(&["z"], &["x"], false), ineq(&[], &["z", "y"], false)])
    }

    #[test]
    fn seriality_system_is_unsat_with_unit_multipliers() {
        match solve(&seriality()) {
            Solution::Unsat(cert) => {
                assert_eq!(cert, FarkasCertificate::from_counts(&[1, 1, 1]));
                assert_eq!(check_certificate(&seriality(), &cert), Ok(true));
            }
            other => panic!("expected unsat, got {other:?}"),
        }
    }

    #[test]
    fn certificate_checks() {
        let sys = seriality();
        assert_eq!(check_certificate(&sys, &FarkasCertificate::from_counts(&[1, 1, 0])), Ok(false));
        let refl = LinearSystem::new(vec![ineq(&["x"], &["x"], false)]);
        assert_eq!(check_certificate(&refl, &FarkasCertificate::from_counts(&[1])), Ok(false));
        let bad = FarkasCertificate::from_counts(&[0, 0, 0, 1]);
        assert_eq!(check_certificate(&sys, &bad), Err(IndexError { index: 3, len: 3 }));
    }

    #[test]
    fn empty_system_is_sat() {
        assert_eq!(solve(&LinearSystem::default()), Solution::Sat(Assignment::default()));
    }

    #[test]
    fn strict_zero_is_unsat() {
        let sys = LinearSystem::new(vec![ineq(&[], &[], true)]);
        assert_eq!(solve(&sys), Solution::Unsat(FarkasCertificate::from_counts(&[1])));
        let sys = LinearSystem::new(vec![ineq(&["p"], &["p"], true)]);
        assert!(!solve(&sys).is_sat());
    }

    #[test]
    fn assignment_checks() {
        let sys = LinearSystem::new(vec![ineq(&["x"], &[], true)]);
        let mut a = Assignment::default();
        a.set(v("x"), q(1));
        assert!(check_assignment(&sys, &a));
        a.set(v("x"), q(0));
        assert!(!check_assignment(&sys, &a));
    }

    #[test]
    fn witness_takes_midpoints_and_offsets() {
        // x > 0, 4 >= x expressed homogeneously needs a unit; use x > y, z >= x.
        let sys = LinearSystem::new(vec![ineq(&["x"], &["y"], true), ineq(&["z"], &["x"], false)]);
        match solve(&sys) {
            Solution::Sat(a) => assert!(check_assignment(&sys, &a)),
            other => panic!("expected sat, got {other:?}"),
        }
    }

    #[test]
    fn display_is_stable() {
        let sys = seriality();
        assert_eq!(sys.to_string(), "0: x^1 + y^1 > 0\n1: z^1 >= x^1\n2: 0 >= y^1 + z^1\n");
    }
}
