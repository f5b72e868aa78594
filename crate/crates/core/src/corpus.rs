//! Seeded random formulas and inequality systems for property tests and the CLI.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{IneqClass, IneqCmp, IneqSystem, LinIneq};
use crate::model::Signature;
use crate::syntax::{rat, Bound, Cmp, CoFormula, FragmentLabel, Intervention, Literal, PcoFormula, ProbAtom, ProbTerm};
use crate::{ProbSet, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Which CO connectives a generator may use beyond literals, `∧` and `∨`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CoShape {
    pub implies: bool,
    pub cf: bool,
}

impl CoShape {
    pub const FULL: CoShape = CoShape { implies: true, cf: true };
    pub const PLAIN: CoShape = CoShape { implies: false, cf: false };
}

pub fn random_literal<R: Rng>(rng: &mut R, sig: &Signature) -> Literal {
    let v = rng.gen_range(0..sig.num_vars());
    let x = rng.gen_range(0..sig.range_len(v));
    if rng.gen_bool(0.3) {
        Literal::ne(v, x)
    } else {
        Literal::eq(v, x)
    }
}

/// One or two assignments; occasionally the same variable twice with different values.
pub fn random_intervention<R: Rng>(rng: &mut R, sig: &Signature) -> Intervention {
    let mut vars: Vec<usize> = (0..sig.num_vars()).collect();
    vars.shuffle(rng);
    let k = rng.gen_range(1..=vars.len().min(2));
    let mut iv: Intervention = vars[..k].iter().map(|&v| (v, rng.gen_range(0..sig.range_len(v)))).collect();
    if rng.gen_bool(0.05) && sig.range_len(iv[0].0) > 1 {
        let (v, x) = iv[0];
        iv.push((v, (x + 1) % sig.range_len(v)));
    }
    iv
}

pub fn random_co<R: Rng>(rng: &mut R, sig: &Signature, depth: usize, shape: CoShape) -> CoFormula {
    if depth == 0 || rng.gen_bool(0.25) {
        return CoFormula::Lit(random_literal(rng, sig));
    }
    let mut options = vec![0, 1];
    if shape.implies {
        options.push(2);
    }
    if shape.cf {
        options.push(3);
    }
    match *options.choose(rng).expect("nonempty") {
        0 => CoFormula::and(random_co(rng, sig, depth - 1, shape), random_co(rng, sig, depth - 1, shape)),
        1 => CoFormula::or(random_co(rng, sig, depth - 1, shape), random_co(rng, sig, depth - 1, shape)),
        2 => CoFormula::implies(random_co(rng, sig, depth - 1, shape), random_co(rng, sig, depth - 1, shape)),
        _ => CoFormula::cf(random_intervention(rng, sig), random_co(rng, sig, depth - 1, shape)),
    }
}

/// A rational in `[0, 1]` with denominator at most 6.
pub fn random_probability<R: Rng>(rng: &mut R) -> Rational {
    let d = rng.gen_range(1..=6);
    rat(rng.gen_range(0..=d), d)
}

fn random_cmp<R: Rng>(rng: &mut R) -> Cmp {
    *[Cmp::Ge, Cmp::Gt, Cmp::Le, Cmp::Lt, Cmp::Eq, Cmp::Ne].choose(rng).expect("nonempty")
}

fn shape_of(frag: FragmentLabel) -> CoShape {
    CoShape {
        implies: matches!(frag, FragmentLabel::PSupset | FragmentLabel::Pco | FragmentLabel::Extended),
        cf: matches!(frag, FragmentLabel::PBoxRight | FragmentLabel::Pco | FragmentLabel::Extended),
    }
}

fn random_atom<R: Rng>(rng: &mut R, sig: &Signature, frag: FragmentLabel) -> PcoFormula {
    let shape = shape_of(frag);
    let arg = random_co(rng, sig, 2, shape);
    let comparisons = frag != FragmentLabel::PMinus;
    if frag == FragmentLabel::Extended && rng.gen_bool(0.3) {
        let g = random_co(rng, sig, 1, shape);
        let lhs = ProbTerm::given(arg, g);
        let rhs = if rng.gen_bool(0.5) {
            Bound::Const(random_probability(rng))
        } else {
            let d = random_co(rng, sig, 1, shape);
            Bound::Term(ProbTerm::given(random_co(rng, sig, 2, shape), d))
        };
        return PcoFormula::Prob(ProbAtom { lhs, cmp: random_cmp(rng), rhs });
    }
    if comparisons && rng.gen_bool(0.4) {
        PcoFormula::compare(arg, random_cmp(rng), random_co(rng, sig, 2, shape))
    } else {
        PcoFormula::eval_atom(arg, random_cmp(rng), random_probability(rng))
    }
}

/// A random PCO formula whose fragment is at most `frag`.
pub fn random_pco<R: Rng>(rng: &mut R, sig: &Signature, depth: usize, frag: FragmentLabel) -> PcoFormula {
    if depth == 0 || rng.gen_bool(0.2) {
        return if rng.gen_bool(0.15) {
            PcoFormula::Lit(random_literal(rng, sig))
        } else {
            random_atom(rng, sig, frag)
        };
    }
    let shape = shape_of(frag);
    let mut options = vec![0, 1];
    if shape.implies {
        options.push(2);
    }
    if shape.cf {
        options.push(3);
    }
    match *options.choose(rng).expect("nonempty") {
        0 => PcoFormula::and(random_pco(rng, sig, depth - 1, frag), random_pco(rng, sig, depth - 1, frag)),
        1 => PcoFormula::gor(random_pco(rng, sig, depth - 1, frag), random_pco(rng, sig, depth - 1, frag)),
        2 => PcoFormula::implies(random_co(rng, sig, 1, shape), random_pco(rng, sig, depth - 1, frag)),
        _ => PcoFormula::cf(random_intervention(rng, sig), random_pco(rng, sig, depth - 1, frag)),
    }
}

fn random_bound<R: Rng>(rng: &mut R) -> Rational {
    let d = rng.gen_range(1..=6);
    rat(rng.gen_range(-2 * d..=2 * d), d)
}

/// A random inequality over `n` coordinates whose class is at most `class`.
pub fn random_ineq<R: Rng>(rng: &mut R, n: usize, class: IneqClass) -> LinIneq<BigInt> {
    let coeffs: Vec<i64> = match class {
        IneqClass::Monic => {
            let sign = if rng.gen_bool(0.2) { -1 } else { 1 };
            (0..n).map(|_| sign * i64::from(rng.gen_bool(0.5))).collect()
        }
        IneqClass::SignedMonic => (0..n).map(|_| rng.gen_range(-1..=1)).collect(),
        IneqClass::SignedBinary => {
            let neg = rng.gen_range(-5..=0);
            let pos = rng.gen_range(0..=5);
            (0..n).map(|_| *[neg, pos, 0].choose(rng).expect("nonempty")).collect()
        }
        IneqClass::General => (0..n).map(|_| rng.gen_range(-5..=5)).collect(),
    };
    let cmp = *[IneqCmp::Le, IneqCmp::Ge, IneqCmp::Lt, IneqCmp::Gt].choose(rng).expect("nonempty");
    let bound = if class == IneqClass::Monic { rat(rng.gen_range(-1..=7), 6) } else { random_bound(rng) };
    LinIneq::from_ints(&coeffs, cmp, bound)
}

/// One or two systems of one or two inequalities, each of class at most `class`.
pub fn random_set<R: Rng>(rng: &mut R, n: usize, class: IneqClass) -> ProbSet {
    let systems = (0..rng.gen_range(1..=2))
        .map(|_| IneqSystem::new((0..rng.gen_range(1..=2)).map(|_| random_ineq(rng, n, class)).collect()))
        .collect();
    ProbSet { n, systems }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{classify_fragment, print_pco, Formula};

    #[test]
    fn generated_formulas_stay_in_fragment() {
        let sig = Signature::binary(&["X", "Y"]).unwrap();
        let mut r = rng(7);
        for frag in [
            FragmentLabel::PMinus,
            FragmentLabel::P,
            FragmentLabel::PSupset,
            FragmentLabel::PBoxRight,
            FragmentLabel::Pco,
            FragmentLabel::Extended,
        ] {
            for _ in 0..100 {
                let f = Formula::Pco(random_pco(&mut r, &sig, 3, frag));
                assert!(classify_fragment(&f).le(frag), "{frag}: {}", f.display(&sig));
            }
        }
    }

    #[test]
    fn same_seed_same_formula() {
        let sig = Signature::binary(&["X", "Y"]).unwrap();
        let a = random_pco(&mut rng(3), &sig, 3, FragmentLabel::Pco);
        let b = random_pco(&mut rng(3), &sig, 3, FragmentLabel::Pco);
        assert_eq!(print_pco(&a, &sig), print_pco(&b, &sig));
    }

    #[test]
    fn generated_inequalities_respect_class() {
        let mut r = rng(11);
        for class in [IneqClass::Monic, IneqClass::SignedMonic, IneqClass::SignedBinary] {
            for _ in 0..200 {
                assert!(random_ineq(&mut r, 3, class).class() <= class);
            }
        }
    }
}
