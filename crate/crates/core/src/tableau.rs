//! Complete labelled tableaux with simultaneous box rules, compiled to linear
//! systems.
//!
//! A branch is refuted when the inequations over atoms, box variables and `c`
//! have no solution. An open branch plus a solution induces a countermodel.

use std::collections::BTreeSet;
use std::fmt;

use crate::formula::{formula_interpretation, Dialect, DialectError, Formula, Sequent};
use crate::kripke::{Model, ModelError};
use crate::linarith::{self, Assignment, FarkasCertificate, LinVar, LinearInequation, LinearSystem, Solution};
use crate::rat::Q;
use num_traits::{Signed, Zero};

/// Default cap on the number of labels a single branch may introduce.
pub const DEFAULT_MAX_LABELS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Every world with a box gets a successor.
    Serial,
    /// Additionally explores dead-end worlds, where every box is 0.
    General,
}

impl Mode {
    pub fn default_for(dialect: Dialect) -> Mode {
        match dialect {
            Dialect::KA => Mode::Serial,
            Dialect::KAc | Dialect::KL => Mode::General,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Serial => "serial",
            Mode::General => "general",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableauError {
    #[error(transparent)]
    Dialect(#[from] DialectError),
    #[error("tableau exceeded the label limit of {0} (set KAMP_MAX_LABELS to raise it)")]
    LabelLimit(usize),
    #[error("assignment does not satisfy the branch system")]
    AssignmentMismatch,
    #[error("internal: induced model does not refute the origin (value {0})")]
    CountermodelCheck(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A labelled formula `φ^i`, or the box variable `x_{□φ}^i` standing for `(□φ)^i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Item {
    F(Formula, usize),
    X(Formula, usize),
}

impl Item {
    pub fn label(&self) -> usize {
        match self {
            Item::F(_, l) | Item::X(_, l) => *l,
        }
    }

    fn decomposable(&self) -> Option<&Formula> {
        match self {
            Item::F(f @ (Formula::Zero | Formula::Impl(..) | Formula::Fuse(..) | Formula::Meet(..) | Formula::Join(..)), _) => {
                Some(f)
            }
            _ => None,
        }
    }

    fn boxed_at(&self, i: usize) -> Option<&Formula> {
        match self {
            Item::F(Formula::Box(b), l) if *l == i => Some(b),
            _ => None,
        }
    }

    /// The system variable this item denotes, if it is reduced.
    pub fn lin_var(&self) -> Option<LinVar> {
        match self {
            Item::F(Formula::Var(p), l) => Some(LinVar::atom(p, *l)),
            Item::F(Formula::ConstC, _) => Some(LinVar::C),
            Item::X(b, l) => Some(LinVar::boxed(b.clone(), *l)),
            Item::F(..) => None,
        }
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::F(g @ (Formula::Var(_) | Formula::Zero | Formula::ConstC), l) => write!(f, "{g}^{l}"),
            Item::F(g, l) => write!(f, "({g})^{l}"),
            Item::X(b, l) => write!(f, "x{{[]{b}}}^{l}"),
        }
    }
}

/// Which rule family an inequation descends from, through single-conclusion
/// steps. Partition extraction reads multipliers off these tags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InequationOrigin {
    Root,
    BoxRight { label: usize, body: Formula, target: usize },
    BoxLeft { label: usize, body: Formula, target: usize },
    DeadEnd { label: usize, body: Formula },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequation {
    pub lhs: Vec<Item>,
    pub rhs: Vec<Item>,
    pub strict: bool,
    pub active: bool,
    pub origin: InequationOrigin,
}

impl Inequation {
    fn new(lhs: Vec<Item>, rhs: Vec<Item>, strict: bool, origin: InequationOrigin) -> Inequation {
        Inequation { lhs, rhs, strict, active: true, origin }
    }

    pub fn is_reduced(&self) -> bool {
        self.lhs.iter().chain(&self.rhs).all(|it| it.lin_var().is_some())
    }

    pub fn to_linear(&self) -> Option<LinearInequation> {
        let side = |xs: &[Item]| xs.iter().map(|it| it.lin_var().map(|v| (v, 1))).collect::<Option<Vec<_>>>();
        Some(LinearInequation::new(&side(&self.lhs)?, &side(&self.rhs)?, self.strict))
    }
}

fn write_items(f: &mut fmt::Formatter<'_>, xs: &[Item]) -> fmt::Result {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    write!(f, "[{}]", parts.join(", "))
}

impl fmt::Display for Inequation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_items(f, &self.lhs)?;
        f.write_str(if self.strict { " > " } else { " >= " })?;
        write_items(f, &self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub inequations: Vec<Inequation>,
    pub relations: Vec<(usize, usize)>,
    pub next_label: usize,
    log: Vec<String>,
}

impl Branch {
    fn start(root: Inequation) -> Branch {
        let log = vec![root.to_string(), "r12".to_string()];
        Branch { inequations: vec![root], relations: vec![(1, 2)], next_label: 3, log }
    }

    /// Empty branch: no inequations, no relations.
    pub fn empty() -> Branch {
        Branch { inequations: Vec::new(), relations: Vec::new(), next_label: 2, log: Vec::new() }
    }

    pub fn labels(&self) -> BTreeSet<usize> {
        let mut out: BTreeSet<usize> = self.relations.iter().flat_map(|(a, b)| [*a, *b]).collect();
        for i in &self.inequations {
            out.extend(i.lhs.iter().chain(&i.rhs).map(Item::label));
        }
        out
    }

    pub fn lines(&self) -> &[String] {
        &self.log
    }

    fn push(&mut self, ineq: Inequation) {
        self.log.push(ineq.to_string());
        self.inequations.push(ineq);
    }

    fn relate(&mut self, i: usize, j: usize) {
        self.log.push(format!("r{i}{j}"));
        self.relations.push((i, j));
    }

    /// Retire inequation `at` and add its conclusion with the same origin.
    fn replace(&mut self, at: usize, lhs: Vec<Item>, rhs: Vec<Item>) {
        self.inequations[at].active = false;
        let (strict, origin) = (self.inequations[at].strict, self.inequations[at].origin.clone());
        self.push(Inequation::new(lhs, rhs, strict, origin));
    }

    fn fresh(&mut self, max_labels: usize) -> Result<usize, TableauError> {
        let j = self.next_label;
        if j > max_labels {
            return Err(TableauError::LabelLimit(max_labels));
        }
        self.next_label += 1;
        Ok(j)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableauOrigin {
    Formula(Formula),
    Sequent(Sequent),
}

impl TableauOrigin {
    /// The formula whose value at `w1` a countermodel makes negative.
    pub fn formula(&self) -> Formula {
        match self {
            TableauOrigin::Formula(f) => f.clone(),
            TableauOrigin::Sequent(s) => formula_interpretation(s),
        }
    }

    fn root(&self) -> Inequation {
        match self {
            TableauOrigin::Formula(f) => Inequation::new(vec![], vec![Item::F(f.clone(), 1)], true, InequationOrigin::Root),
            TableauOrigin::Sequent(s) => {
                let side = |xs: &[Formula]| xs.iter().map(|f| Item::F(f.clone(), 1)).collect();
                Inequation::new(side(&s.ant), side(&s.suc), true, InequationOrigin::Root)
            }
        }
    }

    fn check_dialect(&self, dialect: Dialect) -> Result<(), DialectError> {
        match self {
            TableauOrigin::Formula(f) => f.check_dialect(dialect),
            TableauOrigin::Sequent(s) => s.formulas().try_for_each(|f| f.check_dialect(dialect)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Tableau {
    pub branches: Vec<Branch>,
    pub origin: TableauOrigin,
    pub mode: Mode,
    pub dialect: Dialect,
}

impl Tableau {
    /// Numbered lines of every leaf branch.
    pub fn trace(&self) -> String {
        let mut out = String::new();
        for (k, b) in self.branches.iter().enumerate() {
            out.push_str(&format!("branch {}:\n", k + 1));
            for (n, line) in b.lines().iter().enumerate() {
                out.push_str(&format!("{:>4}: {line}\n", n + 1));
            }
        }
        out
    }
}

enum Step {
    Done,
    Progress,
    Split(Branch),
}

struct Builder {
    mode: Mode,
    max_labels: usize,
}

impl Builder {
    fn run(&self, mut b: Branch, out: &mut Vec<Branch>) -> Result<(), TableauError> {
        loop {
            loop {
                match decompose_once(&mut b) {
                    Step::Done => break,
                    Step::Progress => {}
                    Step::Split(other) => {
                        self.run(b, out)?;
                        return self.run(other, out);
                    }
                }
            }
            let Some(i) = min_box_label(&b) else {
                out.push(b);
                return Ok(());
            };
            if self.mode == Mode::General {
                let dead = dead_end(b.clone(), i);
                box_round(&mut b, i, self.max_labels)?;
                self.run(b, out)?;
                return self.run(dead, out);
            }
            box_round(&mut b, i, self.max_labels)?;
        }
    }
}

/// Apply one propositional rule to the first active inequation that has a
/// decomposable formula, choosing the least complex formula (left side
/// first on ties).
fn decompose_once(b: &mut Branch) -> Step {
    let mut target = None;
    for (at, ineq) in b.inequations.iter().enumerate() {
        if !ineq.active {
            continue;
        }
        let mut best: Option<(usize, bool, usize)> = None;
        for (left, side) in [(true, &ineq.lhs), (false, &ineq.rhs)] {
            for (k, it) in side.iter().enumerate() {
                if let Some(f) = it.decomposable() {
                    let c = f.complexity();
                    if best.is_none_or(|(bc, _, _)| c < bc) {
                        best = Some((c, left, k));
                    }
                }
            }
        }
        if let Some((_, left, k)) = best {
            target = Some((at, left, k));
            break;
        }
    }
    let Some((at, left, k)) = target else {
        return Step::Done;
    };
    let ineq = &b.inequations[at];
    let (mut lhs, mut rhs) = (ineq.lhs.clone(), ineq.rhs.clone());
    let item = if left { lhs.remove(k) } else { rhs.remove(k) };
    let Item::F(f, l) = item else { unreachable!("only labelled formulas decompose") };
    let at_l = |g: &Formula| Item::F(g.clone(), l);
    match (&f, left) {
        (Formula::Zero, _) => b.replace(at, lhs, rhs),
        (Formula::Fuse(x, y), true) => {
            lhs.extend([at_l(x), at_l(y)]);
            b.replace(at, lhs, rhs);
        }
        (Formula::Fuse(x, y), false) => {
            rhs.extend([at_l(x), at_l(y)]);
            b.replace(at, lhs, rhs);
        }
        (Formula::Impl(x, y), true) => {
            lhs.push(at_l(y));
            rhs.push(at_l(x));
            b.replace(at, lhs, rhs);
        }
        (Formula::Impl(x, y), false) => {
            lhs.push(at_l(x));
            rhs.push(at_l(y));
            b.replace(at, lhs, rhs);
        }
        // Both conclusions on the same branch.
        (Formula::Join(x, y), false) | (Formula::Meet(x, y), true) => {
            let side = |g: &Formula| {
                let (mut l2, mut r2) = (lhs.clone(), rhs.clone());
                if left { l2.push(at_l(g)) } else { r2.push(at_l(g)) }
                (l2, r2)
            };
            let ((l1, r1), (l2, r2)) = (side(x), side(y));
            b.replace(at, l1, r1);
            let (strict, origin) = (b.inequations[at].strict, b.inequations[at].origin.clone());
            b.push(Inequation::new(l2, r2, strict, origin));
        }
        // One conclusion per branch.
        (Formula::Join(x, y), true) | (Formula::Meet(x, y), false) => {
            let side = |g: &Formula| {
                let (mut l2, mut r2) = (lhs.clone(), rhs.clone());
                if left { l2.push(at_l(g)) } else { r2.push(at_l(g)) }
                (l2, r2)
            };
            let mut other = b.clone();
            let (l1, r1) = side(x);
            b.replace(at, l1, r1);
            let (l2, r2) = side(y);
            other.replace(at, l2, r2);
            return Step::Split(other);
        }
        _ => unreachable!("atoms and boxes are not decomposed here"),
    }
    Step::Progress
}

fn min_box_label(b: &Branch) -> Option<usize> {
    b.inequations
        .iter()
        .filter(|i| i.active)
        .flat_map(|i| i.lhs.iter().chain(&i.rhs))
        .filter_map(|it| match it {
            Item::F(Formula::Box(_), l) => Some(*l),
            _ => None,
        })
        .min()
}

/// Distinct bodies of `(□ψ)^i` on one side of active inequations, in order.
fn box_bodies(b: &Branch, i: usize, left: bool) -> Vec<Formula> {
    let mut out: Vec<Formula> = Vec::new();
    for ineq in b.inequations.iter().filter(|x| x.active) {
        let side = if left { &ineq.lhs } else { &ineq.rhs };
        for body in side.iter().filter_map(|it| it.boxed_at(i)) {
            if !out.contains(body) {
                out.push(body.clone());
            }
        }
    }
    out
}

/// Replace `(□ψ)^i` by `x_{□ψ}^i` on the chosen sides of every active inequation.
fn substitute(b: &mut Branch, i: usize, body: &Formula, left: bool, right: bool) {
    let hit = |it: &Item| it.boxed_at(i) == Some(body);
    let swap = |xs: &[Item]| -> Vec<Item> {
        xs.iter().map(|it| if hit(it) { Item::X(body.clone(), i) } else { it.clone() }).collect()
    };
    let n = b.inequations.len();
    for at in 0..n {
        let ineq = &b.inequations[at];
        let touches = ineq.active && ((left && ineq.lhs.iter().any(hit)) || (right && ineq.rhs.iter().any(hit)));
        if touches {
            let lhs = if left { swap(&ineq.lhs) } else { ineq.lhs.clone() };
            let rhs = if right { swap(&ineq.rhs) } else { ineq.rhs.clone() };
            b.replace(at, lhs, rhs);
        }
    }
}

fn box_round(b: &mut Branch, i: usize, max_labels: usize) -> Result<(), TableauError> {
    if i != 1 {
        let j = b.fresh(max_labels)?;
        b.relate(i, j);
    }
    for body in box_bodies(b, i, false) {
        let j = b.fresh(max_labels)?;
        b.push(Inequation::new(
            vec![Item::X(body.clone(), i)],
            vec![Item::F(body.clone(), j)],
            false,
            InequationOrigin::BoxRight { label: i, body: body.clone(), target: j },
        ));
        b.relate(i, j);
        substitute(b, i, &body, false, true);
    }
    let succ: Vec<usize> = b.relations.iter().filter(|(a, _)| *a == i).map(|(_, t)| *t).collect();
    for body in box_bodies(b, i, true) {
        for &j in &succ {
            b.push(Inequation::new(
                vec![Item::F(body.clone(), j)],
                vec![Item::X(body.clone(), i)],
                false,
                InequationOrigin::BoxLeft { label: i, body: body.clone(), target: j },
            ));
        }
        substitute(b, i, &body, true, false);
    }
    Ok(())
}

/// The alternative where world `i` has no successors and every box there is 0.
fn dead_end(mut b: Branch, i: usize) -> Branch {
    b.log.push(format!("no successors of {i}"));
    b.relations.retain(|(a, _)| *a != i);
    let mut bodies = box_bodies(&b, i, true);
    for body in box_bodies(&b, i, false) {
        if !bodies.contains(&body) {
            bodies.push(body);
        }
    }
    for body in bodies {
        let x = Item::X(body.clone(), i);
        let origin = InequationOrigin::DeadEnd { label: i, body: body.clone() };
        b.push(Inequation::new(vec![x.clone()], vec![], false, origin.clone()));
        b.push(Inequation::new(vec![], vec![x], false, origin));
        substitute(&mut b, i, &body, true, true);
    }
    b
}

pub fn build_complete_tableau(origin: &TableauOrigin, mode: Mode, dialect: Dialect) -> Result<Tableau, TableauError> {
    build_with_limit(origin, mode, dialect, max_labels_from_env())
}

pub fn build_with_limit(origin: &TableauOrigin, mode: Mode, dialect: Dialect, max_labels: usize) -> Result<Tableau, TableauError> {
    origin.check_dialect(dialect)?;
    let mut branches = Vec::new();
    Builder { mode, max_labels }.run(Branch::start(origin.root()), &mut branches)?;
    Ok(Tableau { branches, origin: origin.clone(), mode, dialect })
}

pub fn max_labels_from_env() -> usize {
    std::env::var("KAMP_MAX_LABELS").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_MAX_LABELS)
}

/// Linear system of the reduced inequations, with the branch index of each row.
pub fn branch_system(b: &Branch) -> (LinearSystem, Vec<usize>) {
    let mut rows = Vec::new();
    let mut index = Vec::new();
    for (at, ineq) in b.inequations.iter().enumerate() {
        if let Some(lin) = ineq.to_linear() {
            rows.push(lin);
            index.push(at);
        }
    }
    (LinearSystem::new(rows), index)
}

/// Exhaustive `→`, `&` and `0̄` decomposition followed by box-variable
/// substitution; lattice connectives are left in place.
pub fn reduced_form(i: &Inequation) -> Inequation {
    fn split(item: Item, left: bool, lhs: &mut Vec<Item>, rhs: &mut Vec<Item>) {
        match item {
            Item::F(Formula::Zero, _) => {}
            Item::F(Formula::Fuse(a, b), l) => {
                split(Item::F((*a).clone(), l), left, lhs, rhs);
                split(Item::F((*b).clone(), l), left, lhs, rhs);
            }
            Item::F(Formula::Impl(a, b), l) => {
                split(Item::F((*b).clone(), l), left, lhs, rhs);
                split(Item::F((*a).clone(), l), !left, lhs, rhs);
            }
            Item::F(Formula::Box(a), l) => {
                let x = Item::X((*a).clone(), l);
                if left { lhs.push(x) } else { rhs.push(x) }
            }
            other => {
                if left { lhs.push(other) } else { rhs.push(other) }
            }
        }
    }
    let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
    for it in &i.lhs {
        split(it.clone(), true, &mut lhs, &mut rhs);
    }
    for it in &i.rhs {
        split(it.clone(), false, &mut lhs, &mut rhs);
    }
    Inequation { lhs, rhs, strict: i.strict, active: i.active, origin: i.origin.clone() }
}

/// Worlds `w_i` for the labels on the branch, relations from its `r` atoms,
/// atoms valued by the assignment.
pub fn induce_model(b: &Branch, a: &Assignment, dialect: Dialect) -> Result<Model, TableauError> {
    let (sys, _) = branch_system(b);
    if !linarith::check_assignment(&sys, a) {
        return Err(TableauError::AssignmentMismatch);
    }
    let labels = b.labels();
    let names: Vec<String> = labels.iter().map(|l| format!("w{l}")).collect();
    let mut m = Model::new(&names);
    for (x, y) in &b.relations {
        m.add_edge(&format!("w{x}"), &format!("w{y}"))?;
    }
    for v in sys.vars() {
        if let LinVar::Atom { label, name } = &v {
            m.set(name, &format!("w{label}"), a.get(&v))?;
        }
    }
    if dialect == Dialect::KAc {
        m.set_c(Some(a.values.get(&LinVar::C).cloned().unwrap_or_else(Q::zero)));
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchCertificate {
    pub system: LinearSystem,
    pub certificate: FarkasCertificate,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Valid { certificates: Vec<BranchCertificate> },
    Invalid { branch_index: usize, assignment: Assignment, countermodel: Model },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid { .. })
    }
}

/// Decide a finished tableau branch by branch; the first open branch wins.
pub fn decide_tableau(t: &Tableau) -> Result<Verdict, TableauError> {
    let mut certificates = Vec::new();
    for (k, b) in t.branches.iter().enumerate() {
        let (system, _) = branch_system(b);
        match linarith::solve(&system) {
            Solution::Unsat(certificate) => certificates.push(BranchCertificate { system, certificate }),
            Solution::Sat(assignment) => {
                let countermodel = induce_model(b, &assignment, t.dialect)?;
                let value = countermodel.eval(&t.origin.formula(), "w1")?;
                if !value.is_negative() {
                    return Err(TableauError::CountermodelCheck(crate::rat::to_text(&value)));
                }
                return Ok(Verdict::Invalid { branch_index: k, assignment, countermodel });
            }
        }
    }
    Ok(Verdict::Valid { certificates })
}

pub fn decide(f: &Formula, dialect: Dialect, mode: Mode) -> Result<Verdict, TableauError> {
    decide_tableau(&build_complete_tableau(&TableauOrigin::Formula(f.clone()), mode, dialect)?)
}

/// Validity of `Γ ⇒ Δ`, i.e. of `ΣΔ − ΣΓ ≥ 0` at every world.
pub fn decide_sequent(s: &Sequent, dialect: Dialect, mode: Mode) -> Result<Verdict, TableauError> {
    decide_tableau(&build_complete_tableau(&TableauOrigin::Sequent(s.clone()), mode, dialect)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_formula;
    use crate::rat::q;

    fn ka(s: &str) -> Formula {
        parse_formula(s, Dialect::KA).unwrap()
    }

    fn build(s: &str) -> Tableau {
        build_complete_tableau(&TableauOrigin::Formula(ka(s)), Mode::Serial, Dialect::KA).unwrap()
    }

    #[test]
    fn seriality_has_three_row_system() {
        let t = build("[]p -> <>p");
        assert_eq!(t.branches.len(), 1);
        let (sys, _) = branch_system(&t.branches[0]);
        assert_eq!(sys.len(), 3);
        let x = LinVar::boxed(ka("p"), 1);
        let y = LinVar::boxed(ka("~p"), 1);
        let z = LinVar::atom("p", 2);
        let expect = LinearSystem::new(vec![
            LinearInequation::new(&[(x.clone(), 1), (y.clone(), 1)], &[], true),
            LinearInequation::new(&[(z.clone(), 1)], &[(x, 1)], false),
            LinearInequation::new(&[], &[(z, 1), (y, 1)], false),
        ]);
        let mut got: Vec<String> = sys.inequations.iter().map(|i| i.to_string()).collect();
        let mut want: Vec<String> = expect.inequations.iter().map(|i| i.to_string()).collect();
        got.sort();
        want.sort();
        assert_eq!(got, want);
        assert!(decide(&ka("[]p -> <>p"), Dialect::KA, Mode::Serial).unwrap().is_valid());
    }

    #[test]
    fn identity_reduces_to_strict_reflexivity() {
        let t = build("p -> p");
        assert_eq!(t.branches.len(), 1);
        let (sys, _) = branch_system(&t.branches[0]);
        assert_eq!(sys.to_string(), "0: p^1 > p^1\n");
    }

    #[test]
    fn box_or_is_refuted_on_four_worlds() {
        let f = ka("[](p \\/ q) -> ([]p \\/ []q)");
        let t = build("[](p \\/ q) -> ([]p \\/ []q)");
        assert_eq!(t.branches.len(), 8);
        match decide(&f, Dialect::KA, Mode::Serial).unwrap() {
            Verdict::Invalid { countermodel, .. } => {
                assert_eq!(countermodel.worlds(), ["w1", "w2", "w3", "w4"]);
                let rel: Vec<(String, String)> = countermodel.relation();
                let want: Vec<(String, String)> =
                    ["w2", "w3", "w4"].iter().map(|w| ("w1".to_string(), w.to_string())).collect();
                assert_eq!(rel, want);
                assert!(countermodel.eval(&f, "w1").unwrap().is_negative());
            }
            v => panic!("expected invalid, got {v:?}"),
        }
    }

    #[test]
    fn forced_assignment_induces_model() {
        let f = ka("[](p \\/ q) -> ([]p \\/ []q)");
        let t = build("[](p \\/ q) -> ([]p \\/ []q)");
        let mut a = Assignment::default();
        for (p, w, v) in [("p", 2, 3), ("p", 3, 0), ("p", 4, 3), ("q", 2, 0), ("q", 3, 3), ("q", 4, 0)] {
            a.set(LinVar::atom(p, w), q(v));
        }
        a.set(LinVar::boxed(ka("p \\/ q"), 1), q(3));
        a.set(LinVar::boxed(ka("p"), 1), q(0));
        a.set(LinVar::boxed(ka("q"), 1), q(0));
        let open: Vec<&Branch> =
            t.branches.iter().filter(|b| linarith::check_assignment(&branch_system(b).0, &a)).collect();
        assert!(!open.is_empty());
        let m = induce_model(open[0], &a, Dialect::KA).unwrap();
        assert_eq!(m.eval(&f, "w1").unwrap(), q(-3));
        assert_eq!(m.value("p", "w3").unwrap(), q(0));
        assert_eq!(m.value("q", "w3").unwrap(), q(3));
    }

    #[test]
    fn constant_separates_serial_and_general() {
        let f = parse_formula("c -> []c", Dialect::KAc).unwrap();
        assert!(decide(&f, Dialect::KAc, Mode::Serial).unwrap().is_valid());
        match decide(&f, Dialect::KAc, Mode::General).unwrap() {
            Verdict::Invalid { countermodel, .. } => {
                assert!(countermodel.successors("w1").unwrap().is_empty());
                assert!(countermodel.cvalue().unwrap().is_positive());
            }
            v => panic!("expected invalid, got {v:?}"),
        }
    }

    #[test]
    fn game_consequence_is_valid() {
        assert!(decide(&ka("<>[](q -> p) -> ([][]q -> <>[]p)"), Dialect::KA, Mode::Serial).unwrap().is_valid());
    }

    #[test]
    fn reduced_forms() {
        let p1 = Item::F(ka("p"), 1);
        let i = Inequation::new(vec![Item::F(ka("p -> q"), 1)], vec![], true, InequationOrigin::Root);
        let r = reduced_form(&i);
        assert_eq!((r.lhs, r.rhs), (vec![Item::F(ka("q"), 1)], vec![p1.clone()]));
        let i = Inequation::new(vec![Item::F(ka("[]s"), 1)], vec![Item::F(ka("t"), 2)], false, InequationOrigin::Root);
        assert_eq!(reduced_form(&i).lhs, vec![Item::X(ka("s"), 1)]);
        let i = Inequation::new(vec![Item::F(ka("(p -> q) -> r"), 1)], vec![], true, InequationOrigin::Root);
        let r = reduced_form(&i);
        assert_eq!(r.lhs, vec![Item::F(ka("r"), 1), p1]);
        assert_eq!(r.rhs, vec![Item::F(ka("q"), 1)]);
    }

    #[test]
    fn empty_branch_and_empty_sequent() {
        assert!(branch_system(&Branch::empty()).0.is_empty());
        let m = induce_model(&Branch::empty(), &Assignment::default(), Dialect::KA).unwrap();
        assert!(m.worlds().is_empty());
        assert!(decide_sequent(&Sequent::empty(), Dialect::KA, Mode::Serial).unwrap().is_valid());
    }

    #[test]
    fn label_limit_is_enforced() {
        let origin = TableauOrigin::Formula(ka("[][][]p -> [][]q"));
        assert_eq!(
            build_with_limit(&origin, Mode::Serial, Dialect::KA, 3).unwrap_err(),
            TableauError::LabelLimit(3)
        );
    }

    #[test]
    fn trace_lists_numbered_lines() {
        let t = build("[]p -> <>p");
        let tr = t.trace();
        assert!(tr.starts_with("branch 1:\n   1: [] > "));
        assert!(tr.contains("   2: r12\n"));
    }
}
