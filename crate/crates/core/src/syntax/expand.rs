use num_traits::One;

use crate::model::Signature;
use crate::syntax::ast::{Bound, Cmp, CoFormula, Formula, PcoFormula, ProbAtom, ProbTerm};
use crate::Rational;

/// `α^d`: holds on a multiteam iff every row refutes `α`.
///
/// De Morgan on literal/`and`/`or` trees; `α ⊃ ⊥` when `α` contains `⊃` or `□→`.
pub fn dual(a: &CoFormula, sig: &Signature) -> CoFormula {
    if a.contains_implies() || a.contains_cf() {
        return CoFormula::implies(a.clone(), CoFormula::bottom(sig));
    }
    de_morgan(a)
}

fn de_morgan(a: &CoFormula) -> CoFormula {
    match a {
        CoFormula::Lit(l) => CoFormula::Lit(l.dual()),
        CoFormula::And(x, y) => CoFormula::or(de_morgan(x), de_morgan(y)),
        CoFormula::Or(x, y) => CoFormula::and(de_morgan(x), de_morgan(y)),
        CoFormula::Implies(..) | CoFormula::Cf(..) => unreachable!("checked by dual"),
    }
}

fn eval_core(a: &CoFormula, cmp: Cmp, eps: &Rational, sig: &Signature) -> PcoFormula {
    let one_minus = Rational::one() - eps;
    match cmp {
        Cmp::Ge | Cmp::Gt => PcoFormula::eval_atom(a.clone(), cmp, eps.clone()),
        Cmp::Le => PcoFormula::eval_atom(dual(a, sig), Cmp::Ge, one_minus),
        Cmp::Lt => PcoFormula::eval_atom(dual(a, sig), Cmp::Gt, one_minus),
        Cmp::Eq => PcoFormula::and(eval_core(a, Cmp::Ge, eps, sig), eval_core(a, Cmp::Le, eps, sig)),
        Cmp::Ne => PcoFormula::gor(eval_core(a, Cmp::Gt, eps, sig), eval_core(a, Cmp::Lt, eps, sig)),
    }
}

fn compare_core(a: &CoFormula, cmp: Cmp, b: &CoFormula) -> PcoFormula {
    match cmp {
        Cmp::Ge | Cmp::Gt => PcoFormula::compare(a.clone(), cmp, b.clone()),
        Cmp::Le => PcoFormula::compare(b.clone(), Cmp::Ge, a.clone()),
        Cmp::Lt => PcoFormula::compare(b.clone(), Cmp::Gt, a.clone()),
        Cmp::Eq => PcoFormula::and(compare_core(a, Cmp::Ge, b), compare_core(b, Cmp::Ge, a)),
        Cmp::Ne => PcoFormula::gor(compare_core(a, Cmp::Gt, b), compare_core(b, Cmp::Gt, a)),
    }
}

/// Rewrites a conditional atom whose sides share their condition as `γ ⊃ ...`; with
/// `core` set, also reduces `≤ < == !=` to `≥ >`.
fn atom(p: &ProbAtom, core: bool, sig: &Signature) -> PcoFormula {
    let body = |given: &Option<CoFormula>, inner: PcoFormula| match given {
        Some(g) => PcoFormula::implies(g.clone(), inner),
        None => inner,
    };
    let plain = |a: &CoFormula, rhs: Bound| PcoFormula::Prob(ProbAtom { lhs: ProbTerm::new(a.clone()), cmp: p.cmp, rhs });
    match &p.rhs {
        Bound::Const(eps) => {
            let inner = if core { eval_core(&p.lhs.arg, p.cmp, eps, sig) } else { plain(&p.lhs.arg, p.rhs.clone()) };
            body(&p.lhs.given, inner)
        }
        Bound::Term(t) if t.given == p.lhs.given => {
            let inner = if core {
                compare_core(&p.lhs.arg, p.cmp, &t.arg)
            } else {
                plain(&p.lhs.arg, Bound::Term(ProbTerm::new(t.arg.clone())))
            };
            body(&p.lhs.given, inner)
        }
        Bound::Term(_) => PcoFormula::Prob(p.clone()),
    }
}

fn walk(f: &PcoFormula, core: bool, sig: &Signature) -> PcoFormula {
    match f {
        PcoFormula::Lit(_) => f.clone(),
        PcoFormula::Prob(p) => atom(p, core, sig),
        PcoFormula::And(a, b) => PcoFormula::and(walk(a, core, sig), walk(b, core, sig)),
        PcoFormula::GOr(a, b) => PcoFormula::gor(walk(a, core, sig), walk(b, core, sig)),
        PcoFormula::Implies(a, b) => PcoFormula::implies(a.clone(), walk(b, core, sig)),
        PcoFormula::Cf(iv, b) => PcoFormula::cf(iv.clone(), walk(b, core, sig)),
    }
}

/// Core syntax: only `≥`, `>`, `∧`, `⊔`, `⊃`, `□→`. Mixed-condition comparisons stay.
pub fn expand_abbreviations(f: &Formula, sig: &Signature) -> Formula {
    match f {
        Formula::Co(_) => f.clone(),
        Formula::Pco(p) => Formula::Pco(walk(p, true, sig)),
    }
}

/// Only the conditional atoms: `Pr(α|γ) ▷ ε` and same-condition comparisons become
/// `γ ⊃ ...`; comparison symbols are kept.
pub fn expand_conditionals(f: &Formula, sig: &Signature) -> Formula {
    match f {
        Formula::Co(_) => f.clone(),
        Formula::Pco(p) => Formula::Pco(walk(p, false, sig)),
    }
}
