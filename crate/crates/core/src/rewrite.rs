//! Equivalence-preserving rewrites: `⊃`-normal form, pushing `□→` into probability
//! statements, relativization to a fixed law system, and characteristic formulas.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::model::{all_function_components, intervention_mask, Assignment, FunctionComponent, Guard, Multiteam, Signature, VarId};
use crate::semantics::row_sat;
use crate::syntax::{
    classify_fragment, rat, Bound, Cmp, CoFormula, Formula, FragmentLabel, Intervention, Literal, PcoFormula, ProbAtom, ProbTerm,
};
use crate::Rational;

/// `α̂_s`: the conjunction `X₁=s(X₁) ∧ … ∧ Xₘ=s(Xₘ)`.
pub fn state_formula(s: &Assignment, sig: &Signature) -> CoFormula {
    CoFormula::conj(s.values().iter().enumerate().map(|(v, &x)| CoFormula::lit(v, x)), sig)
}

/// `⋁ α̂_s` over the states `s` with `({s}, F) ⊨ α`; `⊥` when there are none.
pub fn state_disjunction(alpha: &CoFormula, laws: &FunctionComponent, sig: &Signature) -> CoFormula {
    let states = sig.enumerate_assignments().filter(|s| row_sat(laws, 0, s, alpha));
    CoFormula::disj(states.map(|s| state_formula(&s, sig)).collect::<Vec<_>>(), sig)
}

/// Reads a CO formula at the PCO level, keeping `∧`, `⊃` and `□→` as connectives.
///
/// CO formulas are flat, so this agrees with `Pr(α) ≥ 1`; only tensor disjunctions are
/// wrapped that way.
pub fn lift_co(a: &CoFormula) -> PcoFormula {
    match a {
        CoFormula::Lit(l) => PcoFormula::Lit(*l),
        CoFormula::And(x, y) => PcoFormula::and(lift_co(x), lift_co(y)),
        CoFormula::Implies(x, y) => PcoFormula::implies((**x).clone(), lift_co(y)),
        CoFormula::Cf(iv, b) => PcoFormula::cf(iv.clone(), lift_co(b)),
        CoFormula::Or(..) => PcoFormula::eval_atom(a.clone(), Cmp::Ge, rat(1, 1)),
    }
}

fn as_pco(f: &Formula) -> PcoFormula {
    match f {
        Formula::Co(a) => lift_co(a),
        Formula::Pco(p) => p.clone(),
    }
}

fn require(f: &Formula, max: FragmentLabel) -> Result<()> {
    let found = classify_fragment(f);
    if found.le(max) {
        Ok(())
    } else {
        Err(Error::WrongFragment { expected: max.name().to_string(), found })
    }
}

fn sure(lit: Literal) -> PcoFormula {
    PcoFormula::eval_atom(CoFormula::Lit(lit), Cmp::Ge, rat(1, 1))
}

fn nf(f: &PcoFormula) -> PcoFormula {
    match f {
        PcoFormula::Lit(_) | PcoFormula::Prob(_) => f.clone(),
        PcoFormula::And(a, b) => PcoFormula::and(nf(a), nf(b)),
        PcoFormula::GOr(a, b) => PcoFormula::gor(nf(a), nf(b)),
        PcoFormula::Implies(a, b) => distribute(a.clone(), &nf(b)),
        PcoFormula::Cf(iv, b) => PcoFormula::cf(iv.clone(), nf(b)),
    }
}

fn distribute(a: CoFormula, g: &PcoFormula) -> PcoFormula {
    match g {
        PcoFormula::Lit(l) => PcoFormula::implies(a, sure(*l)),
        PcoFormula::Prob(_) | PcoFormula::Cf(..) => PcoFormula::implies(a, g.clone()),
        PcoFormula::And(x, y) => PcoFormula::and(distribute(a.clone(), x), distribute(a, y)),
        PcoFormula::GOr(x, y) => PcoFormula::gor(distribute(a.clone(), x), distribute(a, y)),
        PcoFormula::Implies(b, h) => distribute(CoFormula::and(a, b.clone()), h),
    }
}

/// Normal form in which every consequent of a PCO-level `⊃` is a probabilistic atom.
pub fn supset_normal_form(f: &Formula) -> Result<Formula> {
    require(f, FragmentLabel::PSupset)?;
    Ok(Formula::Pco(nf(&as_pco(f))))
}

/// `[X:=x]([Y:=y]χ)` as one intervention: entries of `outer` on variables not set by
/// `inner`, followed by `inner`.
fn merge(outer: &[(VarId, usize)], inner: &[(VarId, usize)]) -> Intervention {
    let mut out: Intervention = outer.iter().filter(|(v, _)| !inner.iter().any(|(u, _)| u == v)).copied().collect();
    out.extend_from_slice(inner);
    out
}

fn merge_co(ctx: &[(VarId, usize)], a: &CoFormula) -> CoFormula {
    match a {
        CoFormula::Cf(iv, body) => CoFormula::cf(merge(ctx, iv), (**body).clone()),
        _ => CoFormula::cf(ctx.to_vec(), a.clone()),
    }
}

fn merge_term(ctx: &[(VarId, usize)], t: &ProbTerm) -> ProbTerm {
    ProbTerm { arg: merge_co(ctx, &t.arg), given: t.given.as_ref().map(|g| merge_co(ctx, g)) }
}

fn push(f: &PcoFormula, ctx: &[(VarId, usize)], sig: &Signature) -> PcoFormula {
    match f {
        PcoFormula::Cf(iv, b) => {
            if intervention_mask(iv).is_none() {
                return PcoFormula::top(sig);
            }
            push(b, &merge(ctx, iv), sig)
        }
        PcoFormula::And(a, b) => PcoFormula::and(push(a, ctx, sig), push(b, ctx, sig)),
        PcoFormula::GOr(a, b) => PcoFormula::gor(push(a, ctx, sig), push(b, ctx, sig)),
        _ if ctx.is_empty() => match f {
            PcoFormula::Implies(a, b) => PcoFormula::implies(a.clone(), push(b, ctx, sig)),
            _ => f.clone(),
        },
        PcoFormula::Lit(l) => PcoFormula::eval_atom(CoFormula::cf(ctx.to_vec(), CoFormula::Lit(*l)), Cmp::Ge, rat(1, 1)),
        PcoFormula::Implies(a, b) => PcoFormula::implies(merge_co(ctx, a), push(b, ctx, sig)),
        PcoFormula::Prob(p) => PcoFormula::Prob(ProbAtom {
            lhs: merge_term(ctx, &p.lhs),
            cmp: p.cmp,
            rhs: match &p.rhs {
                Bound::Const(c) => Bound::Const(c.clone()),
                Bound::Term(t) => Bound::Term(merge_term(ctx, t)),
            },
        }),
    }
}

/// Moves every PCO-level `□→` into the CO arguments of probability statements.
pub fn push_boxright(f: &Formula, sig: &Signature) -> Result<Formula> {
    require(f, FragmentLabel::PBoxRight)?;
    Ok(Formula::Pco(push(&as_pco(f), &[], sig)))
}

fn relativize_term(t: &ProbTerm, laws: &FunctionComponent, sig: &Signature) -> ProbTerm {
    ProbTerm {
        arg: state_disjunction(&t.arg, laws, sig),
        given: t.given.as_ref().map(|g| state_disjunction(g, laws, sig)),
    }
}

fn replace(f: &PcoFormula, laws: &FunctionComponent, sig: &Signature) -> PcoFormula {
    match f {
        PcoFormula::Lit(_) => f.clone(),
        PcoFormula::Prob(p) => PcoFormula::Prob(ProbAtom {
            lhs: relativize_term(&p.lhs, laws, sig),
            cmp: p.cmp,
            rhs: match &p.rhs {
                Bound::Const(c) => Bound::Const(c.clone()),
                Bound::Term(t) => Bound::Term(relativize_term(t, laws, sig)),
            },
        }),
        PcoFormula::And(a, b) => PcoFormula::and(replace(a, laws, sig), replace(b, laws, sig)),
        PcoFormula::GOr(a, b) => PcoFormula::gor(replace(a, laws, sig), replace(b, laws, sig)),
        PcoFormula::Implies(a, b) => {
            let ante = if a.contains_cf() { state_disjunction(a, laws, sig) } else { a.clone() };
            PcoFormula::implies(ante, replace(b, laws, sig))
        }
        PcoFormula::Cf(..) => unreachable!("pushed before replacement"),
    }
}

/// `φ^F`: a `□→`-free formula equivalent to `φ` on every model with law system `laws`.
pub fn relativize(f: &Formula, laws: &FunctionComponent, sig: &Signature) -> Result<PcoFormula> {
    if !laws.is_acyclic() {
        let names = laws.cyclic_vars().into_iter().map(|v| sig.var_name(v).to_string()).collect::<Vec<_>>();
        return Err(Error::InvalidModel(vec![format!("laws are cyclic on {}", names.join(", "))]));
    }
    if laws.laws().iter().any(|l| l.var() >= sig.num_vars()) {
        return Err(Error::SignatureMismatch);
    }
    Ok(replace(&push(&as_pco(f), &[], sig), laws, sig))
}

fn others(v: VarId, sig: &Signature) -> Vec<VarId> {
    (0..sig.num_vars()).filter(|&u| u != v).collect()
}

/// All interventions `W_V := w` on the variables other than `v`.
fn interventions_off(v: VarId, sig: &Signature) -> Vec<Intervention> {
    let mut out = vec![Vec::new()];
    for u in others(v, sig) {
        out = out
            .into_iter()
            .flat_map(|iv: Intervention| {
                (0..sig.range_len(u)).map(move |x| {
                    let mut iv = iv.clone();
                    iv.push((u, x));
                    iv
                })
            })
            .collect();
    }
    out
}

fn characteristic(laws: &FunctionComponent, sig: &Signature, xi: impl Fn(VarId, usize, Intervention) -> PcoFormula) -> PcoFormula {
    let mut parts = Vec::new();
    for v in 0..sig.num_vars() {
        match laws.law(v) {
            Some(law) => {
                for iv in interventions_off(v, sig) {
                    let mut values = vec![0; sig.num_vars()];
                    for &(u, x) in &iv {
                        values[u] = x;
                    }
                    let out = law.eval(&values);
                    parts.push(PcoFormula::cf(iv, PcoFormula::Lit(Literal::eq(v, out))));
                }
            }
            None if sig.num_vars() > 1 => {
                for iv in interventions_off(v, sig) {
                    for x in 0..sig.range_len(v) {
                        parts.push(xi(v, x, iv.clone()));
                    }
                }
            }
            None => {}
        }
    }
    PcoFormula::conj(parts, sig)
}

/// `Φ^F`: holds on a nonempty model iff its law system is `laws`.
pub fn characteristic_phi(laws: &FunctionComponent, sig: &Signature) -> PcoFormula {
    characteristic(laws, sig, |v, x, iv| {
        PcoFormula::implies(CoFormula::lit(v, x), PcoFormula::cf(iv, PcoFormula::Lit(Literal::eq(v, x))))
    })
}

/// `Ψ^F`: `Φ^F` with each `V=v ⊃ β` written as `Pr(V≠v ∨ β) = 1`.
pub fn characteristic_psi(laws: &FunctionComponent, sig: &Signature) -> PcoFormula {
    characteristic(laws, sig, |v, x, iv| {
        let body = CoFormula::or(CoFormula::neq(v, x), CoFormula::cf(iv, CoFormula::lit(v, x)));
        PcoFormula::eval_atom(body, Cmp::Eq, rat(1, 1))
    })
}

/// `Θ`: holds on a model iff its multiteam is a rescaling of `team`.
pub fn characteristic_theta(team: &Multiteam, sig: &Signature) -> Result<PcoFormula> {
    if team.is_empty() {
        return Err(Error::EmptyMultiteam);
    }
    let n = BigInt::from(team.size());
    let mut parts: Vec<PcoFormula> = team
        .iter()
        .map(|(s, c)| PcoFormula::eval_atom(state_formula(s, sig), Cmp::Eq, Rational::new(BigInt::from(c), n.clone())))
        .collect();
    let all = CoFormula::disj(team.support().map(|s| state_formula(s, sig)).collect::<Vec<_>>(), sig);
    parts.push(PcoFormula::eval_atom(all, Cmp::Eq, rat(1, 1)));
    Ok(PcoFormula::conj(parts, sig))
}

/// One `(F, φ^F)` pair per acyclic law system of the signature.
pub fn pco_decompose(f: &Formula, sig: &Signature, guard: &Guard) -> Result<Vec<(FunctionComponent, PcoFormula)>> {
    all_function_components(sig, guard)?
        .into_iter()
        .map(|laws| relativize(f, &laws, sig).map(|g| (laws, g)))
        .collect()
}

/// `⊔_F (Ψ^F ∧ φ^F)`, equivalent to the decomposed formula on nonempty models.
pub fn reconstruct(parts: &[(FunctionComponent, PcoFormula)], sig: &Signature) -> PcoFormula {
    PcoFormula::gdisj(
        parts.iter().map(|(laws, g)| PcoFormula::and(characteristic_psi(laws, sig), g.clone())),
        sig,
    )
}
