use std::sync::{Arc, OnceLock};

use cml_core::atoms::{expand_atom, AtomKind};
use cml_core::corpus::{random_co, random_ineq, random_pco, random_set, rng, CoShape};
use cml_core::geometry::{eliminate_variable, extract, grid_points, synth, IneqClass};
use cml_core::model::{all_function_components, enumerate_models, CausalMultiteam, Guard, LawMode, Signature};
use cml_core::oracle::{check_set_agreement, equiv};
use cml_core::rewrite::{push_boxright, supset_normal_form};
use cml_core::semantics::{eval, holds, EvalConfig};
use cml_core::syntax::{classify_fragment, parse, print, CoFormula, Formula, FragmentLabel};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn xy() -> Arc<Signature> {
    static SIG: OnceLock<Arc<Signature>> = OnceLock::new();
    SIG.get_or_init(|| Arc::new(Signature::binary(&["X", "Y"]).unwrap())).clone()
}

fn states3() -> Arc<Signature> {
    static SIG: OnceLock<Arc<Signature>> = OnceLock::new();
    SIG.get_or_init(|| Arc::new(Signature::int_ranges(&[("S", &[1, 2, 3])]).unwrap())).clone()
}

fn xy_models() -> &'static [CausalMultiteam] {
    static MODELS: OnceLock<Vec<CausalMultiteam>> = OnceLock::new();
    MODELS.get_or_init(|| enumerate_models(&xy(), 3, &LawMode::AllLaws, &Guard::default()).unwrap().collect())
}

fn pco(seed: u64, frag: FragmentLabel) -> Formula {
    Formula::Pco(random_pco(&mut rng(seed), &xy(), 3, frag))
}

fn co(seed: u64) -> CoFormula {
    random_co(&mut rng(seed), &xy(), 3, CoShape::FULL)
}

fn any_fragment() -> impl Strategy<Value = FragmentLabel> {
    prop_oneof![
        Just(FragmentLabel::PMinus),
        Just(FragmentLabel::P),
        Just(FragmentLabel::PSupset),
        Just(FragmentLabel::PBoxRight),
        Just(FragmentLabel::Pco),
        Just(FragmentLabel::Extended),
    ]
}

fn low_class() -> impl Strategy<Value = IneqClass> {
    prop_oneof![Just(IneqClass::Monic), Just(IneqClass::SignedMonic), Just(IneqClass::SignedBinary)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printing_is_a_fixed_point_of_parsing(seed in any::<u64>(), frag in any_fragment()) {
        let sig = xy();
        let f = pco(seed, frag);
        let text = print(&f, &sig);
        let again = parse(&text, &sig).unwrap();
        prop_assert_eq!(print(&again, &sig), text);
        prop_assert_eq!(classify_fragment(&again), classify_fragment(&f));
    }

    #[test]
    fn rewrites_are_idempotent(seed in any::<u64>()) {
        let sig = xy();
        let nf = supset_normal_form(&pco(seed, FragmentLabel::PSupset)).unwrap();
        prop_assert_eq!(print(&supset_normal_form(&nf).unwrap(), &sig), print(&nf, &sig));
        let pushed = push_boxright(&pco(seed, FragmentLabel::PBoxRight), &sig).unwrap();
        prop_assert_eq!(print(&push_boxright(&pushed, &sig).unwrap(), &sig), print(&pushed, &sig));
    }

    #[test]
    fn empty_models_satisfy_everything(seed in any::<u64>(), frag in any_fragment()) {
        let f = pco(seed, frag);
        for t in xy_models().iter().filter(|t| t.is_empty()) {
            prop_assert!(holds(t, &f));
        }
    }

    #[test]
    fn rescaling_preserves_verdicts(seed in any::<u64>(), k in 2u64..6, frag in any_fragment()) {
        let f = pco(seed, frag);
        for t in xy_models() {
            prop_assert_eq!(holds(t, &f), holds(&t.scale(k), &f));
        }
    }

    #[test]
    fn laws_do_not_matter_without_counterfactuals(seed in any::<u64>()) {
        let sig = xy();
        let f = pco(seed, FragmentLabel::PSupset);
        let laws = all_function_components(&sig, &Guard::default()).unwrap();
        for t in xy_models() {
            let v = holds(t, &f);
            for fc in &laws {
                if let Ok(u) = CausalMultiteam::checked(sig.clone(), fc.clone(), t.team().clone()) {
                    prop_assert_eq!(holds(&u, &f), v);
                }
            }
        }
    }

    #[test]
    fn intervention_preserves_size(seed in any::<u64>()) {
        let sig = xy();
        let iv = cml_core::corpus::random_intervention(&mut rng(seed), &sig);
        for t in xy_models() {
            if let Ok(u) = t.intervene(&iv) {
                prop_assert_eq!(u.size(), t.size());
                prop_assert!(u.validate().is_empty());
            }
        }
    }

    #[test]
    fn observation_composes(a in any::<u64>(), b in any::<u64>()) {
        let sig = xy();
        let alpha = random_co(&mut rng(a), &sig, 3, CoShape { implies: true, cf: false });
        let beta = random_co(&mut rng(b), &sig, 3, CoShape { implies: true, cf: false });
        let both = CoFormula::and(alpha.clone(), beta.clone());
        for t in xy_models() {
            let (twice, once) = (t.observe(&alpha).observe(&beta), t.observe(&both));
            prop_assert_eq!(twice.team(), once.team());
        }
    }

    #[test]
    fn rowwise_and_split_search_agree(seed in any::<u64>()) {
        let f = Formula::Co(co(seed));
        let split = EvalConfig::split_search();
        for t in xy_models() {
            prop_assert_eq!(eval(t, &f, &EvalConfig::default()).unwrap(), eval(t, &f, &split).unwrap());
        }
    }

    #[test]
    fn extraction_agrees_with_evaluation(seed in any::<u64>(), frag in prop_oneof![
        Just(FragmentLabel::PMinus), Just(FragmentLabel::P), Just(FragmentLabel::PSupset)
    ]) {
        let sig = xy();
        let f = pco(seed, frag);
        let set = extract(&f, &sig, None).unwrap();
        let cex = check_set_agreement(&f, &set, &sig, 4, &LawMode::NoLaws, &Guard::default()).unwrap();
        prop_assert!(cex.is_none(), "{}", cex.unwrap());
    }

    #[test]
    fn counterexamples_reproduce(a in any::<u64>(), b in any::<u64>()) {
        let sig = xy();
        let (f, g) = (pco(a, FragmentLabel::Pco), pco(b, FragmentLabel::Pco));
        if let Some(c) = equiv(&f, &g, &sig, 3, &LawMode::AllLaws, &Guard::default()).unwrap() {
            prop_assert!(c.model.validate().is_empty());
            prop_assert_eq!(holds(&c.model, &f), c.left);
            prop_assert_eq!(Some(holds(&c.model, &g)), c.right);
            prop_assert_ne!(c.right, Some(c.left));
        }
    }

    #[test]
    fn synthesis_round_trips(seed in any::<u64>(), class in low_class()) {
        let sig = states3();
        let set = random_set(&mut rng(seed), 3, class);
        // sets with three homogeneous levels have no formula; those are counted by the acceptance run
        if let Ok(f) = synth(&set, class, &sig) {
            let f = Formula::Pco(f);
            let frag = match class {
                IneqClass::Monic => FragmentLabel::PMinus,
                IneqClass::SignedMonic => FragmentLabel::P,
                _ => FragmentLabel::PSupset,
            };
            prop_assert!(classify_fragment(&f).le(frag));
            let cex = check_set_agreement(&f, &set, &sig, 4, &LawMode::NoLaws, &Guard::default()).unwrap();
            prop_assert!(cex.is_none(), "{}", cex.unwrap());
            let back = extract(&f, &sig, None).unwrap();
            for p in grid_points::<BigInt>(3, 4) {
                prop_assert_eq!(back.member(&p).unwrap(), set.member(&p).unwrap());
            }
        }
    }

    #[test]
    fn monic_sets_are_always_synthesizable(seed in any::<u64>()) {
        let set = random_set(&mut rng(seed), 3, IneqClass::Monic);
        prop_assert!(synth(&set, IneqClass::Monic, &states3()).is_ok());
    }

    #[test]
    fn set_algebra_keeps_low_classes(a in any::<u64>(), b in any::<u64>(), signed in any::<bool>()) {
        let class = if signed { IneqClass::SignedMonic } else { IneqClass::Monic };
        let s = random_set(&mut rng(a), 3, class);
        let t = random_set(&mut rng(b), 3, class);
        prop_assert!(s.union(&t).unwrap().class() <= class);
        prop_assert!(s.intersect(&t).unwrap().class() <= class);
        prop_assert!(s.complement().class() <= class);
        for p in grid_points::<BigInt>(3, 4) {
            let (x, y) = (s.member(&p).unwrap(), t.member(&p).unwrap());
            prop_assert_eq!(s.union(&t).unwrap().member(&p).unwrap(), x || y);
            prop_assert_eq!(s.intersect(&t).unwrap().member(&p).unwrap(), x && y);
            prop_assert_eq!(s.complement().member(&p).unwrap(), !x);
        }
    }

    #[test]
    fn eliminating_a_coordinate_keeps_the_points(seed in any::<u64>(), idx in 0usize..4) {
        let e = random_ineq(&mut rng(seed), 4, IneqClass::General);
        prop_assume!(!e.coeffs[idx].is_zero());
        let f = eliminate_variable(&e, idx).unwrap();
        prop_assert!(f.coeffs[idx].is_zero());
        for p in grid_points::<BigInt>(4, 5) {
            prop_assert_eq!(e.holds(&p), f.holds(&p));
        }
    }

    #[test]
    fn probability_vectors_sum_to_one(i in 0usize..1000) {
        let ms = xy_models();
        let t = &ms[i % ms.len()];
        prop_assert!(t.validate().is_empty());
        if !t.is_empty() {
            let p = t.probability_vector().unwrap();
            prop_assert!(p.iter().sum::<cml_core::Rational>().is_one());
        }
    }

    #[test]
    fn rescaling_is_an_equivalence(i in 0usize..1000, j in 0usize..1000, k in 0usize..1000) {
        let ms = xy_models();
        let (a, b, c) = (&ms[i % ms.len()], &ms[j % ms.len()], &ms[k % ms.len()]);
        prop_assert!(a.is_rescaling(a).unwrap());
        prop_assert_eq!(a.is_rescaling(b).unwrap(), b.is_rescaling(a).unwrap());
        if a.is_rescaling(b).unwrap() && b.is_rescaling(c).unwrap() {
            prop_assert!(a.is_rescaling(c).unwrap());
        }
    }
}

#[test]
fn dependence_ignores_rescaling_and_laws() {
    let sig = xy();
    let dep = Formula::Pco(expand_atom(AtomKind::Dep, &[0], &[1], &[], &sig).unwrap());
    let laws = all_function_components(&sig, &Guard::default()).unwrap();
    for t in xy_models() {
        let v = holds(t, &dep);
        assert_eq!(holds(&t.scale(3), &dep), v);
        for fc in &laws {
            if let Ok(u) = CausalMultiteam::checked(sig.clone(), fc.clone(), t.team().clone()) {
                assert_eq!(holds(&u, &dep), v);
            }
        }
    }
}

#[test]
fn self_dependence_matches_conditional_independence() {
    let sig = xy();
    let dep = Formula::Pco(expand_atom(AtomKind::Dep, &[0], &[1], &[], &sig).unwrap());
    let ci = Formula::Pco(expand_atom(AtomKind::CondIndep, &[1], &[1], &[0], &sig).unwrap());
    assert_eq!(equiv(&dep, &ci, &sig, 4, &LawMode::AllLaws, &Guard::default()).unwrap(), None);
}

#[test]
fn grid_points_lie_on_the_simplex() {
    let pts = grid_points::<BigInt>(3, 4);
    assert!(pts.iter().all(|p| cml_core::geometry::in_simplex(p)));
    assert!(pts.iter().any(|p| p[0] == num_rational::Ratio::new(BigInt::from(1), BigInt::from(4))));
}
