use num_bigint::BigInt;

use crate::model::{Signature, VarId};
use crate::Rational;

/// `V=v` or `V≠v`, with `val` an index into `Ran(V)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: VarId,
    pub val: usize,
    pub negated: bool,
}

impl Literal {
    pub fn eq(var: VarId, val: usize) -> Self {
        Literal { var, val, negated: false }
    }

    pub fn ne(var: VarId, val: usize) -> Self {
        Literal { var, val, negated: true }
    }

    pub fn holds(&self, values: &[usize]) -> bool {
        (values[self.var] == self.val) != self.negated
    }

    pub fn dual(&self) -> Self {
        Literal { negated: !self.negated, ..*self }
    }
}

/// Antecedent of a counterfactual as written; it may be inconsistent.
pub type Intervention = Vec<(VarId, usize)>;

/// The flat layer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CoFormula {
    Lit(Literal),
    And(Box<CoFormula>, Box<CoFormula>),
    /// Tensor disjunction.
    Or(Box<CoFormula>, Box<CoFormula>),
    /// Selective implication `α ⊃ β`.
    Implies(Box<CoFormula>, Box<CoFormula>),
    /// Counterfactual `[X:=x] α`.
    Cf(Intervention, Box<CoFormula>),
}

impl CoFormula {
    pub fn lit(var: VarId, val: usize) -> Self {
        CoFormula::Lit(Literal::eq(var, val))
    }

    pub fn neq(var: VarId, val: usize) -> Self {
        CoFormula::Lit(Literal::ne(var, val))
    }

    pub fn and(a: CoFormula, b: CoFormula) -> Self {
        CoFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: CoFormula, b: CoFormula) -> Self {
        CoFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: CoFormula, b: CoFormula) -> Self {
        CoFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn cf(iv: Intervention, a: CoFormula) -> Self {
        CoFormula::Cf(iv, Box::new(a))
    }

    /// `⊤ := X=x ∨ X≠x` on the first variable and its first value.
    pub fn top(_sig: &Signature) -> Self {
        CoFormula::or(CoFormula::lit(0, 0), CoFormula::neq(0, 0))
    }

    /// `⊥ := X=x ∧ X≠x` on the first variable and its first value.
    pub fn bottom(_sig: &Signature) -> Self {
        CoFormula::and(CoFormula::lit(0, 0), CoFormula::neq(0, 0))
    }

    /// Left-nested conjunction; `⊤` when empty.
    pub fn conj(items: impl IntoIterator<Item = CoFormula>, sig: &Signature) -> Self {
        items.into_iter().reduce(CoFormula::and).unwrap_or_else(|| CoFormula::top(sig))
    }

    /// Left-nested tensor disjunction; `⊥` when empty.
    pub fn disj(items: impl IntoIterator<Item = CoFormula>, sig: &Signature) -> Self {
        items.into_iter().reduce(CoFormula::or).unwrap_or_else(|| CoFormula::bottom(sig))
    }

    pub fn contains_implies(&self) -> bool {
        match self {
            CoFormula::Lit(_) => false,
            CoFormula::Implies(..) => true,
            CoFormula::And(a, b) | CoFormula::Or(a, b) => a.contains_implies() || b.contains_implies(),
            CoFormula::Cf(_, a) => a.contains_implies(),
        }
    }

    pub fn contains_cf(&self) -> bool {
        match self {
            CoFormula::Lit(_) => false,
            CoFormula::Cf(..) => true,
            CoFormula::And(a, b) | CoFormula::Or(a, b) | CoFormula::Implies(a, b) => {
                a.contains_cf() || b.contains_cf()
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            CoFormula::Lit(_) => 0,
            CoFormula::And(a, b) | CoFormula::Or(a, b) | CoFormula::Implies(a, b) => 1 + a.depth().max(b.depth()),
            CoFormula::Cf(_, a) => 1 + a.depth(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cmp {
    Ge,
    Gt,
    Le,
    Lt,
    Eq,
    Ne,
}

impl Cmp {
    pub fn holds<T: Ord>(self, a: &T, b: &T) -> bool {
        match self {
            Cmp::Ge => a >= b,
            Cmp::Gt => a > b,
            Cmp::Le => a <= b,
            Cmp::Lt => a < b,
            Cmp::Eq => a == b,
            Cmp::Ne => a != b,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Ge => ">=",
            Cmp::Gt => ">",
            Cmp::Le => "<=",
            Cmp::Lt => "<",
            Cmp::Eq => "==",
            Cmp::Ne => "!=",
        }
    }
}

/// `Pr(arg)` or `Pr(arg | given)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProbTerm {
    pub arg: CoFormula,
    pub given: Option<CoFormula>,
}

impl ProbTerm {
    pub fn new(arg: CoFormula) -> Self {
        ProbTerm { arg, given: None }
    }

    pub fn given(arg: CoFormula, given: CoFormula) -> Self {
        ProbTerm { arg, given: Some(given) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Bound {
    Const(Rational),
    Term(ProbTerm),
}

/// Evaluation atom `Pr(α) ▷ ε`, comparison atom `Pr(α) ▷ Pr(β)`, or one of their
/// conditional forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProbAtom {
    pub lhs: ProbTerm,
    pub cmp: Cmp,
    pub rhs: Bound,
}

impl ProbAtom {
    pub fn is_conditional(&self) -> bool {
        self.lhs.given.is_some() || matches!(&self.rhs, Bound::Term(t) if t.given.is_some())
    }

    pub fn is_comparison(&self) -> bool {
        matches!(self.rhs, Bound::Term(_))
    }

    /// Conditional comparison whose two sides are conditioned differently.
    pub fn is_mixed(&self) -> bool {
        match &self.rhs {
            Bound::Term(t) => self.lhs.given != t.given,
            Bound::Const(_) => false,
        }
    }

    pub fn co_parts(&self) -> impl Iterator<Item = &CoFormula> {
        let rhs = match &self.rhs {
            Bound::Term(t) => Some(t),
            Bound::Const(_) => None,
        };
        std::iter::once(&self.lhs)
            .chain(rhs)
            .flat_map(|t| std::iter::once(&t.arg).chain(t.given.as_ref()))
    }
}

/// The probabilistic layer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PcoFormula {
    Lit(Literal),
    Prob(ProbAtom),
    And(Box<PcoFormula>, Box<PcoFormula>),
    /// Global disjunction `⊔`.
    GOr(Box<PcoFormula>, Box<PcoFormula>),
    Implies(CoFormula, Box<PcoFormula>),
    Cf(Intervention, Box<PcoFormula>),
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

impl PcoFormula {
    pub fn and(a: PcoFormula, b: PcoFormula) -> Self {
        PcoFormula::And(Box::new(a), Box::new(b))
    }

    pub fn gor(a: PcoFormula, b: PcoFormula) -> Self {
        PcoFormula::GOr(Box::new(a), Box::new(b))
    }

    pub fn implies(a: CoFormula, b: PcoFormula) -> Self {
        PcoFormula::Implies(a, Box::new(b))
    }

    pub fn cf(iv: Intervention, b: PcoFormula) -> Self {
        PcoFormula::Cf(iv, Box::new(b))
    }

    pub fn eval_atom(arg: CoFormula, cmp: Cmp, eps: Rational) -> Self {
        PcoFormula::Prob(ProbAtom { lhs: ProbTerm::new(arg), cmp, rhs: Bound::Const(eps) })
    }

    pub fn compare(a: CoFormula, cmp: Cmp, b: CoFormula) -> Self {
        PcoFormula::Prob(ProbAtom { lhs: ProbTerm::new(a), cmp, rhs: Bound::Term(ProbTerm::new(b)) })
    }

    /// `Pr(X=x) ≥ 0`, true on every model.
    pub fn top(_sig: &Signature) -> Self {
        Self::eval_atom(CoFormula::lit(0, 0), Cmp::Ge, rat(0, 1))
    }

    /// `X=x ∧ X≠x`, true exactly on empty models.
    pub fn bottom(_sig: &Signature) -> Self {
        PcoFormula::and(PcoFormula::Lit(Literal::eq(0, 0)), PcoFormula::Lit(Literal::ne(0, 0)))
    }

    pub fn conj(items: impl IntoIterator<Item = PcoFormula>, sig: &Signature) -> Self {
        items.into_iter().reduce(PcoFormula::and).unwrap_or_else(|| PcoFormula::top(sig))
    }

    pub fn gdisj(items: impl IntoIterator<Item = PcoFormula>, sig: &Signature) -> Self {
        items.into_iter().reduce(PcoFormula::gor).unwrap_or_else(|| PcoFormula::bottom(sig))
    }

    pub fn depth(&self) -> usize {
        match self {
            PcoFormula::Lit(_) | PcoFormula::Prob(_) => 0,
            PcoFormula::And(a, b) | PcoFormula::GOr(a, b) => 1 + a.depth().max(b.depth()),
            PcoFormula::Implies(_, b) | PcoFormula::Cf(_, b) => 1 + b.depth(),
        }
    }
}

/// A parsed formula: pure CO, or PCO with CO embedded in antecedents and `Pr` arguments.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Co(CoFormula),
    Pco(PcoFormula),
}

impl From<CoFormula> for Formula {
    fn from(f: CoFormula) -> Self {
        Formula::Co(f)
    }
}

impl From<PcoFormula> for Formula {
    fn from(f: PcoFormula) -> Self {
        Formula::Pco(f)
    }
}

impl Formula {
    pub fn as_co(&self) -> Option<&CoFormula> {
        match self {
            Formula::Co(a) => Some(a),
            Formula::Pco(_) => None,
        }
    }

    /// The formula as a PCO formula; a CO formula `α` becomes `Pr(α) ≥ 1`, which agrees
    /// with it on every model by flatness and the empty-multiteam convention.
    pub fn to_pco(&self) -> PcoFormula {
        match self {
            Formula::Pco(p) => p.clone(),
            Formula::Co(a) => PcoFormula::eval_atom(a.clone(), Cmp::Ge, rat(1, 1)),
        }
    }
}
