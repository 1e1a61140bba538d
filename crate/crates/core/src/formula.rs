//! Formula syntax for K(A), K(A^c) and K(Ł), with structural measures.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::multiset;

/// Which formula language a piece of text or a tree belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dialect {
    KA,
    KAc,
    KL,
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dialect::KA => "ka",
            Dialect::KAc => "kac",
            Dialect::KL => "kl",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("dialect error: {0}")]
pub struct DialectError(pub String);

/// K(A) / K(A^c) formula. Negation, diamond and scalar multiples are not nodes;
/// the constructors below expand them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    Zero,
    ConstC,
    Impl(Arc<Formula>, Arc<Formula>),
    Fuse(Arc<Formula>, Arc<Formula>),
    Meet(Arc<Formula>, Arc<Formula>),
    Join(Arc<Formula>, Arc<Formula>),
    Box(Arc<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(name.to_string())
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Impl(Arc::new(a), Arc::new(b))
    }

    pub fn fuse(a: Formula, b: Formula) -> Formula {
        Formula::Fuse(Arc::new(a), Arc::new(b))
    }

    pub fn meet(a: Formula, b: Formula) -> Formula {
        Formula::Meet(Arc::new(a), Arc::new(b))
    }

    pub fn join(a: Formula, b: Formula) -> Formula {
        Formula::Join(Arc::new(a), Arc::new(b))
    }

    pub fn boxed(a: Formula) -> Formula {
        Formula::Box(Arc::new(a))
    }

    /// `¬a := a → 0̄`
    pub fn neg(a: Formula) -> Formula {
        Formula::imp(a, Formula::Zero)
    }

    /// `◇a := ¬□¬a`
    pub fn diamond(a: Formula) -> Formula {
        Formula::neg(Formula::boxed(Formula::neg(a)))
    }

    /// `0a := 0̄`, `1a := a`, `(n+1)a := a & na`
    pub fn times(n: usize, a: Formula) -> Formula {
        (0..n).fold(Formula::Zero, |acc, i| {
            if i == 0 {
                a.clone()
            } else {
                Formula::fuse(a.clone(), acc)
            }
        })
    }

    /// Left fold of `&`; the empty fusion is `0̄`.
    pub fn fuse_all(items: &[Formula]) -> Formula {
        let mut it = items.iter();
        match it.next() {
            None => Formula::Zero,
            Some(first) => it.fold(first.clone(), |acc, f| Formula::fuse(acc, f.clone())),
        }
    }

    /// Number of connective occurrences; `0̄` and `c` count as 0-ary connectives.
    pub fn complexity(&self) -> usize {
        match self {
            Formula::Var(_) => 0,
            Formula::Zero | Formula::ConstC => 1,
            Formula::Impl(a, b) | Formula::Fuse(a, b) | Formula::Meet(a, b) | Formula::Join(a, b) => {
                1 + a.complexity() + b.complexity()
            }
            Formula::Box(a) => 1 + a.complexity(),
        }
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Zero | Formula::ConstC => 0,
            Formula::Impl(a, b) | Formula::Fuse(a, b) | Formula::Meet(a, b) | Formula::Join(a, b) => {
                a.modal_depth().max(b.modal_depth())
            }
            Formula::Box(a) => 1 + a.modal_depth(),
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(p) => {
                out.insert(p.clone());
            }
            Formula::Zero | Formula::ConstC => {}
            Formula::Impl(a, b) | Formula::Fuse(a, b) | Formula::Meet(a, b) | Formula::Join(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::Box(a) => a.collect_vars(out),
        }
    }

    pub fn contains_const(&self) -> bool {
        match self {
            Formula::ConstC => true,
            Formula::Var(_) | Formula::Zero => false,
            Formula::Impl(a, b) | Formula::Fuse(a, b) | Formula::Meet(a, b) | Formula::Join(a, b) => {
                a.contains_const() || b.contains_const()
            }
            Formula::Box(a) => a.contains_const(),
        }
    }

    /// No lattice connectives and no constant: the fragment the sequent
    /// calculus handles. `&` and `0̄` are kept as nodes.
    pub fn is_multiplicative(&self) -> bool {
        match self {
            Formula::Var(_) | Formula::Zero => true,
            Formula::ConstC | Formula::Meet(..) | Formula::Join(..) => false,
            Formula::Impl(a, b) | Formula::Fuse(a, b) => a.is_multiplicative() && b.is_multiplicative(),
            Formula::Box(a) => a.is_multiplicative(),
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Var(_))
    }

    pub fn is_box(&self) -> bool {
        matches!(self, Formula::Box(_))
    }

    pub fn check_dialect(&self, dialect: Dialect) -> Result<(), DialectError> {
        match dialect {
            Dialect::KAc => Ok(()),
            Dialect::KA if self.contains_const() => {
                Err(DialectError("constant `c` is only available in kac".into()))
            }
            Dialect::KA => Ok(()),
            Dialect::KL => Err(DialectError("kl formulas use the Łukasiewicz syntax".into())),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(p) => f.write_str(p),
            Formula::Zero => f.write_str("0"),
            Formula::ConstC => f.write_str("c"),
            Formula::Impl(a, b) if **b == Formula::Zero => {
                if let Formula::Box(inner) = &**a {
                    if let Formula::Impl(x, z) = &**inner {
                        if **z == Formula::Zero {
                            return write!(f, "<>{x}");
                        }
                    }
                }
                write!(f, "~{a}")
            }
            Formula::Impl(a, b) => write!(f, "({a} -> {b})"),
            Formula::Fuse(a, b) => write!(f, "({a} & {b})"),
            Formula::Meet(a, b) => write!(f, "({a} /\\ {b})"),
            Formula::Join(a, b) => write!(f, "({a} \\/ {b})"),
            Formula::Box(a) => write!(f, "[]{a}"),
        }
    }
}

/// K(Ł) formula over the primitive connectives `∼`, `⊃` and `□`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LFormula {
    LVar(String),
    LNeg(Arc<LFormula>),
    LImpl(Arc<LFormula>, Arc<LFormula>),
    LBox(Arc<LFormula>),
}

impl LFormula {
    pub fn var(name: &str) -> LFormula {
        LFormula::LVar(name.to_string())
    }

    pub fn neg(a: LFormula) -> LFormula {
        LFormula::LNeg(Arc::new(a))
    }

    pub fn imp(a: LFormula, b: LFormula) -> LFormula {
        LFormula::LImpl(Arc::new(a), Arc::new(b))
    }

    pub fn boxed(a: LFormula) -> LFormula {
        LFormula::LBox(Arc::new(a))
    }

    /// `a ⊕ b := ∼a ⊃ b`
    pub fn oplus(a: LFormula, b: LFormula) -> LFormula {
        LFormula::imp(LFormula::neg(a), b)
    }

    /// `a ⊙ b := ∼(∼a ⊕ ∼b)`
    pub fn otimes(a: LFormula, b: LFormula) -> LFormula {
        LFormula::neg(LFormula::oplus(LFormula::neg(a), LFormula::neg(b)))
    }

    /// `a ∨ b := (a ⊃ b) ⊃ b`
    pub fn join(a: LFormula, b: LFormula) -> LFormula {
        LFormula::imp(LFormula::imp(a, b.clone()), b)
    }

    /// `a ∧ b := ∼(∼a ∨ ∼b)`
    pub fn meet(a: LFormula, b: LFormula) -> LFormula {
        LFormula::neg(LFormula::join(LFormula::neg(a), LFormula::neg(b)))
    }

    /// `◇a := ∼□∼a`
    pub fn diamond(a: LFormula) -> LFormula {
        LFormula::neg(LFormula::boxed(LFormula::neg(a)))
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            LFormula::LVar(_) => 0,
            LFormula::LNeg(a) => a.modal_depth(),
            LFormula::LImpl(a, b) => a.modal_depth().max(b.modal_depth()),
            LFormula::LBox(a) => 1 + a.modal_depth(),
        }
    }

    pub fn complexity(&self) -> usize {
        match self {
            LFormula::LVar(_) => 0,
            LFormula::LNeg(a) | LFormula::LBox(a) => 1 + a.complexity(),
            LFormula::LImpl(a, b) => 1 + a.complexity() + b.complexity(),
        }
    }
}

impl fmt::Display for LFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LFormula::LVar(p) => f.write_str(p),
            LFormula::LNeg(a) => {
                if let LFormula::LBox(inner) = &**a {
                    if let LFormula::LNeg(x) = &**inner {
                        return write!(f, "<>{x}");
                    }
                }
                write!(f, "!{a}")
            }
            LFormula::LImpl(a, b) => write!(f, "({a} => {b})"),
            LFormula::LBox(a) => write!(f, "[]{a}"),
        }
    }
}

/// A pair of formula multisets. Equality ignores order.
#[derive(Debug, Clone, Default)]
pub struct Sequent {
    pub ant: Vec<Formula>,
    pub suc: Vec<Formula>,
}

impl Sequent {
    pub fn new(ant: Vec<Formula>, suc: Vec<Formula>) -> Sequent {
        Sequent { ant, suc }
    }

    pub fn empty() -> Sequent {
        Sequent::default()
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.ant.iter().chain(self.suc.iter())
    }

    pub fn is_multiplicative(&self) -> bool {
        self.formulas().all(Formula::is_multiplicative)
    }

    pub fn complexity(&self) -> usize {
        self.formulas().map(Formula::complexity).sum()
    }

    pub fn modal_depth(&self) -> usize {
        self.formulas().map(Formula::modal_depth).max().unwrap_or(0)
    }

    /// `n` copies of each side.
    pub fn scale(&self, n: usize) -> Sequent {
        Sequent::new(multiset::scale(&self.ant, n), multiset::scale(&self.suc, n))
    }

    /// Side-wise multiset union.
    pub fn union(&self, other: &Sequent) -> Sequent {
        Sequent::new(multiset::union(&self.ant, &other.ant), multiset::union(&self.suc, &other.suc))
    }

    /// Canonical form: both sides sorted.
    pub fn sorted(&self) -> Sequent {
        let mut s = self.clone();
        s.ant.sort();
        s.suc.sort();
        s
    }
}

impl PartialEq for Sequent {
    fn eq(&self, other: &Sequent) -> bool {
        multiset::eq(&self.ant, &other.ant) && multiset::eq(&self.suc, &other.suc)
    }
}

impl Eq for Sequent {}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |xs: &[Formula]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let (a, s) = (side(&self.ant), side(&self.suc));
        match (a.is_empty(), s.is_empty()) {
            (true, true) => f.write_str("|-"),
            (true, false) => write!(f, "|- {s}"),
            (false, true) => write!(f, "{a} |-"),
            (false, false) => write!(f, "{a} |- {s}"),
        }
    }
}

/// `(φ1 & … & φn) → (ψ1 & … & ψm)`, folding each side left to right.
pub fn formula_interpretation(s: &Sequent) -> Formula {
    Formula::imp(Formula::fuse_all(&s.ant), Formula::fuse_all(&s.suc))
}
