use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::Signature;
use crate::rewrite::state_formula;
use crate::syntax::{Cmp, CoFormula, PcoFormula};
use crate::{Ineq, Rational};

use super::ineq::{classify_ineq, IneqClass, IneqCmp, LinIneq, ProbabilitySet, Scalar};

fn cmp_of(c: IneqCmp) -> Cmp {
    match c {
        IneqCmp::Le => Cmp::Le,
        IneqCmp::Ge => Cmp::Ge,
        IneqCmp::Lt => Cmp::Lt,
        IneqCmp::Gt => Cmp::Gt,
    }
}

fn states(idx: &[usize], sig: &Signature) -> CoFormula {
    CoFormula::disj(idx.iter().map(|&i| state_formula(&sig.state(i), sig)).collect::<Vec<_>>(), sig)
}

fn truth(b: bool, sig: &Signature) -> PcoFormula {
    if b {
        PcoFormula::top(sig)
    } else {
        PcoFormula::bottom(sig)
    }
}

/// `Pr(⋁_A α̂) ◁ b`, with bounds outside `[0, 1]` decided outright.
fn monic(a: &[usize], cmp: IneqCmp, b: Rational, sig: &Signature) -> PcoFormula {
    let (zero, one) = (Rational::zero(), Rational::one());
    if b < zero || b > one {
        // every probability lies strictly on one side of b
        return truth(cmp.holds(&zero, &b), sig);
    }
    PcoFormula::eval_atom(states(a, sig), cmp_of(cmp), b)
}

fn homogeneous(e: &Ineq, target: IneqClass, sig: &Signature) -> Result<PcoFormula> {
    let h: Vec<Rational> = e.coeffs.iter().map(|a| a - &e.bound).collect();
    let pos: Vec<usize> = (0..h.len()).filter(|&i| h[i].is_positive()).collect();
    let neg: Vec<usize> = (0..h.len()).filter(|&i| h[i].is_negative()).collect();
    let zero_lhs_holds = e.cmp.holds(&Rational::zero(), &Rational::zero());
    match (pos.is_empty(), neg.is_empty()) {
        (true, true) => return Ok(truth(zero_lhs_holds, sig)),
        (false, true) | (true, false) => {
            // lhs has a fixed sign and vanishes iff no mass sits on the support
            let (support, cmp) = if neg.is_empty() { (&pos, e.cmp) } else { (&neg, e.cmp.mirror()) };
            return Ok(match cmp {
                IneqCmp::Ge => PcoFormula::top(sig),
                IneqCmp::Lt => PcoFormula::bottom(sig),
                IneqCmp::Gt => PcoFormula::eval_atom(states(support, sig), Cmp::Gt, Rational::zero()),
                IneqCmp::Le => PcoFormula::eval_atom(states(support, sig), Cmp::Le, Rational::zero()),
            });
        }
        (false, false) => {}
    }
    let p = &h[pos[0]];
    let n = &h[neg[0]];
    if pos.iter().any(|&i| &h[i] != p) || neg.iter().any(|&i| &h[i] != n) {
        return Err(Error::NotDefinable(format!("`{e}` has more than two distinct nonzero homogeneous coefficients")));
    }
    if p == &-n.clone() {
        return Ok(PcoFormula::compare(states(&pos, sig), cmp_of(e.cmp), states(&neg, sig)));
    }
    let c = -n / (p - n);
    if pos.len() + neg.len() == h.len() {
        return Ok(PcoFormula::eval_atom(states(&pos, sig), cmp_of(e.cmp), c));
    }
    if target < IneqClass::SignedBinary {
        return Err(Error::NotDefinable(format!("`{e}` needs a selective implication")));
    }
    let mut both: Vec<usize> = pos.iter().chain(&neg).copied().collect();
    both.sort_unstable();
    let conditioned = PcoFormula::implies(states(&both, sig), PcoFormula::eval_atom(states(&pos, sig), cmp_of(e.cmp), c));
    Ok(if e.cmp.is_strict() {
        PcoFormula::and(conditioned, PcoFormula::eval_atom(states(&both, sig), Cmp::Gt, Rational::zero()))
    } else {
        conditioned
    })
}

fn synth_ineq(e: &Ineq, target: IneqClass, sig: &Signature) -> Result<PcoFormula> {
    let e = e.canonical();
    let class = classify_ineq(&e);
    if class > target {
        return Err(Error::ClassExceedsTarget { found: class.name().into(), target: target.name().into() });
    }
    if class == IneqClass::Monic {
        let ones: Vec<usize> = (0..e.dim()).filter(|&i| !e.coeffs[i].is_zero()).collect();
        let negative = ones.first().is_some_and(|&i| e.coeffs[i].is_negative());
        return Ok(if negative {
            monic(&ones, e.cmp.mirror(), -e.bound.clone(), sig)
        } else {
            monic(&ones, e.cmp, e.bound.clone(), sig)
        });
    }
    homogeneous(&e, target, sig)
}

/// A formula whose nonempty models are exactly those with probability vector in `set`.
///
/// The states of `sig`, in enumeration order, name the coordinates. `MONIC` targets yield
/// `P⁻` formulas, `SIGNED_MONIC` targets `P` formulas and `SIGNED_BINARY` targets `P(⊃)`
/// formulas.
pub fn synth<T: Scalar>(set: &ProbabilitySet<T>, target: IneqClass, sig: &Signature) -> Result<PcoFormula> {
    if target == IneqClass::General {
        return Err(Error::Invalid("synthesis targets MONIC, SIGNED_MONIC or SIGNED_BINARY".into()));
    }
    if set.n != sig.num_states() {
        return Err(Error::Dimension { expected: sig.num_states(), found: set.n });
    }
    let set = set.to_big();
    let mut branches = Vec::with_capacity(set.systems.len());
    for system in &set.systems {
        let parts = system.ineqs.iter().map(|e| synth_ineq(e, target, sig)).collect::<Result<Vec<_>>>()?;
        branches.push(PcoFormula::conj(parts, sig));
    }
    Ok(PcoFormula::gdisj(branches, sig))
}

/// Convenience for a single inequality.
pub fn synth_one<T: Scalar>(e: &LinIneq<T>, target: IneqClass, sig: &Signature) -> Result<PcoFormula> {
    synth(&ProbabilitySet::single(e.clone()), target, sig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{print_pco, rat};

    fn states3() -> Signature {
        Signature::int_ranges(&[("S", &[1, 2, 3])]).unwrap()
    }

    fn text(coeffs: &[i64], cmp: IneqCmp, b: Rational, target: IneqClass, sig: &Signature) -> Result<String> {
        synth_one(&Ineq::from_ints(coeffs, cmp, b), target, sig).map(|f| print_pco(&f, sig))
    }

    #[test]
    fn single_monic() {
        let s = Signature::int_ranges(&[("S", &[1, 2])]).unwrap();
        assert_eq!(text(&[1, 0], IneqCmp::Ge, rat(1, 2), IneqClass::Monic, &s).unwrap(), "Pr(S=1) >= 1/2");
        assert_eq!(text(&[1, 0], IneqCmp::Ge, rat(3, 2), IneqClass::Monic, &s).unwrap(), "S=1 and S!=1");
        assert_eq!(text(&[-1, -1], IneqCmp::Le, rat(-1, 2), IneqClass::Monic, &s).unwrap(), "Pr((S=1 or S=2)) >= 1/2");
    }

    #[test]
    fn comparison_from_signed_monic() {
        let s = states3();
        assert_eq!(text(&[1, -1, 0], IneqCmp::Le, rat(0, 1), IneqClass::SignedMonic, &s).unwrap(), "Pr(S=1) <= Pr(S=2)");
    }

    #[test]
    fn selective_implication_from_signed_binary() {
        let s = states3();
        assert_eq!(
            text(&[-1, 2, 0], IneqCmp::Le, rat(0, 1), IneqClass::SignedBinary, &s).unwrap(),
            "(S=1 or S=2) => Pr(S=2) <= 1/3"
        );
        assert!(matches!(
            text(&[-1, 2, 0], IneqCmp::Le, rat(0, 1), IneqClass::SignedMonic, &s),
            Err(Error::ClassExceedsTarget { .. })
        ));
    }

    #[test]
    fn class_too_high() {
        let s = states3();
        assert!(matches!(text(&[1, -1, 0], IneqCmp::Le, rat(0, 1), IneqClass::Monic, &s), Err(Error::ClassExceedsTarget { .. })));
    }

    #[test]
    fn nonzero_bound_with_three_levels_is_rejected() {
        let s = states3();
        assert!(matches!(
            text(&[1, -1, 0], IneqCmp::Le, rat(1, 2), IneqClass::SignedMonic, &s),
            Err(Error::NotDefinable(_))
        ));
    }
}
