use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{FunctionComponent, Signature};
use crate::rewrite::relativize;
use crate::semantics::row_sat;
use crate::syntax::{contains_cf, expand_conditionals, Bound, Cmp, CoFormula, Formula, FragmentLabel, PcoFormula, ProbAtom};
use crate::{Ineq, ProbSet, Rational};

use super::ineq::{IneqCmp, IneqSystem};

struct Extractor<'a> {
    sig: &'a Signature,
    laws: FunctionComponent,
    n: usize,
}

fn indicator(mask: impl Iterator<Item = bool>) -> Vec<Rational> {
    mask.map(|b| if b { Rational::one() } else { Rational::zero() }).collect()
}

/// `coeffs ◁ b` for every comparison symbol, as a probability set.
fn relation(coeffs: Vec<Rational>, cmp: Cmp, b: Rational) -> ProbSet {
    let one = |c| Ineq::new(coeffs.clone(), c, b.clone()).canonical();
    let n = coeffs.len();
    let systems = match cmp {
        Cmp::Ge => vec![vec![one(IneqCmp::Ge)]],
        Cmp::Gt => vec![vec![one(IneqCmp::Gt)]],
        Cmp::Le => vec![vec![one(IneqCmp::Le)]],
        Cmp::Lt => vec![vec![one(IneqCmp::Lt)]],
        Cmp::Eq => vec![vec![one(IneqCmp::Ge), one(IneqCmp::Le)]],
        Cmp::Ne => vec![vec![one(IneqCmp::Gt)], vec![one(IneqCmp::Lt)]],
    };
    ProbSet { n, systems: systems.into_iter().map(IneqSystem::new).collect() }
}

impl Extractor<'_> {
    fn sat(&self, alpha: &CoFormula) -> Vec<bool> {
        (0..self.n).map(|i| row_sat(&self.laws, 0, &self.sig.state(i), alpha)).collect()
    }

    /// Points at which the rows in `ctx` form an empty multiteam.
    fn vanishing(&self, ctx: &[bool]) -> ProbSet {
        ProbSet::single(Ineq::new(indicator(ctx.iter().copied()), IneqCmp::Le, Rational::zero()))
    }

    fn atom(&self, p: &ProbAtom, ctx: &[bool]) -> Result<ProbSet> {
        if p.is_conditional() {
            return Err(Error::WrongFragment { expected: FragmentLabel::Pco.name().into(), found: FragmentLabel::Extended });
        }
        let full = ctx.iter().all(|&b| b);
        let a = self.sat(&p.lhs.arg);
        let set = match &p.rhs {
            Bound::Const(b) => {
                if full {
                    relation(indicator(a.into_iter()), p.cmp, b.clone())
                } else {
                    let one_minus = Rational::one() - b;
                    let coeffs = ctx
                        .iter()
                        .zip(&a)
                        .map(|(&c, &x)| match (c, x) {
                            (false, _) => Rational::zero(),
                            (true, true) => one_minus.clone(),
                            (true, false) => -b.clone(),
                        })
                        .collect();
                    relation(coeffs, p.cmp, Rational::zero())
                }
            }
            Bound::Term(t) => {
                let bsat = self.sat(&t.arg);
                let coeffs = (0..self.n)
                    .map(|i| {
                        let x = i64::from(ctx[i] && a[i]) - i64::from(ctx[i] && bsat[i]);
                        Rational::from_integer(BigInt::from(x))
                    })
                    .collect();
                relation(coeffs, p.cmp, Rational::zero())
            }
        };
        if full {
            Ok(set)
        } else {
            self.vanishing(ctx).union(&set)
        }
    }

    fn walk(&self, f: &PcoFormula, ctx: &[bool]) -> Result<ProbSet> {
        match f {
            PcoFormula::Lit(l) => {
                let lit = CoFormula::Lit(*l);
                let sat = self.sat(&lit);
                if ctx.iter().all(|&b| b) {
                    Ok(ProbSet::single(Ineq::new(indicator(sat.into_iter()), IneqCmp::Ge, Rational::one())))
                } else {
                    let off = ctx.iter().zip(&sat).map(|(&c, &s)| c && !s);
                    Ok(ProbSet::single(Ineq::new(indicator(off), IneqCmp::Le, Rational::zero())))
                }
            }
            PcoFormula::Prob(p) => self.atom(p, ctx),
            PcoFormula::And(a, b) => self.walk(a, ctx)?.intersect(&self.walk(b, ctx)?),
            PcoFormula::GOr(a, b) => self.walk(a, ctx)?.union(&self.walk(b, ctx)?),
            PcoFormula::Implies(a, b) => {
                let inner: Vec<bool> = ctx.iter().zip(self.sat(a)).map(|(&c, s)| c && s).collect();
                self.walk(b, &inner)
            }
            PcoFormula::Cf(..) => Err(Error::LawsRequired),
        }
    }
}

/// The set of probability vectors of nonempty models satisfying `f`, over the states of
/// `sig` in enumeration order.
///
/// Formulas with counterfactuals are relativized to `laws` first.
pub fn extract(f: &Formula, sig: &Signature, laws: Option<&FunctionComponent>) -> Result<ProbSet> {
    let n = sig.num_states();
    let (body, laws) = if contains_cf(f) {
        let laws = laws.ok_or(Error::LawsRequired)?;
        (relativize(f, laws, sig)?, laws.clone())
    } else {
        (f.to_pco(), FunctionComponent::empty())
    };
    let body = match expand_conditionals(&Formula::Pco(body), sig) {
        Formula::Pco(p) => p,
        Formula::Co(_) => unreachable!("expansion keeps the level"),
    };
    let ex = Extractor { sig, laws, n };
    ex.walk(&body, &vec![true; n])
}

/// `Σ ε_i` over the 1-based indices `idx`, compared against `b`.
pub fn sum_ineq(n: usize, idx: &[usize], cmp: IneqCmp, b: Rational) -> Ineq {
    let coeffs = (1..=n).map(|i| if idx.contains(&i) { Ratio::one() } else { Ratio::zero() }).collect();
    Ineq::new(coeffs, cmp, b)
}
