//! Acceptance run: one PASS/FAIL line per criterion, then a summary.
//!
//! Failures exit nonzero only with `CML_ACCEPTANCE_STRICT=1`, so the rest of the workspace
//! suite still runs after a failing criterion. Pass criterion numbers as arguments to run a subset.

use std::sync::Arc;
use std::time::Instant;

use cml_core::atoms::{direct_check, expand_atom, AtomKind};
use cml_core::corpus::{random_co, random_pco, random_set, rng, CoShape};
use cml_core::geometry::{conic_discriminant, extract, grid_points, synth, IneqClass, IneqCmp};
use cml_core::model::io::worked_example;
use cml_core::model::{all_function_components, enumerate_models, Assignment, CausalMultiteam, Guard, LawMode, Multiteam, Signature};
use cml_core::oracle::{check_set_agreement, equiv};
use cml_core::rewrite::{characteristic_phi, characteristic_psi, push_boxright, relativize, supset_normal_form};
use cml_core::semantics::{eval, eval_co, eval_ct, holds, EvalConfig};
use cml_core::syntax::{parse, parse_co, rat, Formula, FragmentLabel};
use cml_core::{Ineq, ProbSet, Rational};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

/// Exact rationals throughout; every criterion below demands exact agreement.
const TOLERANCE: i64 = 0;

const FLAT_FORMULAS: usize = 500;
const FLAT_MAX_SIZE: usize = 5;
const CO_DEPTH: usize = 4;
const EMPTY_FORMULAS: usize = 500;
const SCALE_FACTORS: [u64; 3] = [2, 3, 5];
const SCALE_MAX_SIZE: usize = 3;
const REWRITE_FORMULAS: usize = 200;
const REWRITE_MAX_SIZE: usize = 4;
const PHI_MAX_SIZE: usize = 3;
const EXTRACT_FORMULAS: usize = 200;
const EXTRACT_MAX_SIZE: usize = 6;
const WITNESS_MAX_DEN: u64 = 8;
const SYNTH_SETS: usize = 100;
const SYNTH_MAX_SIZE: usize = 6;
const DISCRIMINANT_SAMPLES: usize = 50;
const ATOM_MAX_SIZE: usize = 5;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn xy() -> Arc<Signature> {
    Arc::new(Signature::binary(&["X", "Y"]).unwrap())
}

fn models(sig: &Arc<Signature>, max_size: usize, mode: &LawMode) -> Vec<CausalMultiteam> {
    enumerate_models(sig, max_size, mode, &Guard::default()).unwrap().collect()
}

fn c01_worked_example() -> Verdict {
    let t = worked_example();
    let sig = t.signature().clone();
    let z3 = parse_co("Z=3", &sig).unwrap();
    let before = t.probability(&z3).unwrap();
    let y = sig.var_index("Y").unwrap();
    let y1 = sig.value_index_text(y, "1").unwrap();
    let after = t.intervene(&[(y, y1)]).unwrap().probability(&z3).unwrap();
    let pass = before == rat(1, 3) && after == rat(1, 2);
    verdict(pass, format!("P(Z=3) = {before}, after do(Y=1) = {after}"))
}

fn co_corpus(sig: &Signature) -> Vec<cml_core::syntax::CoFormula> {
    let mut r = rng(2);
    (0..FLAT_FORMULAS).map(|_| random_co(&mut r, sig, CO_DEPTH, CoShape::FULL)).collect()
}

fn c02_flatness() -> Verdict {
    let sig = xy();
    let ms = models(&sig, FLAT_MAX_SIZE, &LawMode::AllLaws);
    let split = EvalConfig::split_search();
    let rowwise = EvalConfig::default();
    let (mut checks, mut bad) = (0usize, 0usize);
    for a in co_corpus(&sig) {
        for t in &ms {
            checks += 1;
            if eval_co(t, &a, &rowwise).unwrap() != eval_co(t, &a, &split).unwrap() {
                bad += 1;
            }
        }
    }
    verdict(bad == 0, format!("{checks} checks over {} models, {bad} disagreements", ms.len()))
}

fn c03_transfer() -> Verdict {
    let sig = xy();
    let ms = models(&sig, FLAT_MAX_SIZE, &LawMode::AllLaws);
    let cfg = EvalConfig::default();
    let (mut checks, mut bad) = (0usize, 0usize);
    for a in co_corpus(&sig) {
        for t in &ms {
            checks += 1;
            if eval_co(t, &a, &cfg).unwrap() != eval_ct(t, &a, &cfg).unwrap() {
                bad += 1;
            }
        }
    }
    verdict(bad == 0, format!("{checks} checks, {bad} disagreements"))
}

fn c04_empty_and_rescaling() -> Verdict {
    let sig = xy();
    let empties = models(&sig, 0, &LawMode::AllLaws);
    let ms = models(&sig, SCALE_MAX_SIZE, &LawMode::AllLaws);
    let mut r = rng(4);
    let (mut empty_bad, mut scale_bad) = (0usize, 0usize);
    for _ in 0..EMPTY_FORMULAS {
        let f = Formula::Pco(random_pco(&mut r, &sig, 3, FragmentLabel::Pco));
        empty_bad += empties.iter().filter(|t| !holds(t, &f)).count();
        for t in &ms {
            let v = holds(t, &f);
            scale_bad += SCALE_FACTORS.iter().filter(|&&k| holds(&t.scale(k), &f) != v).count();
        }
    }
    verdict(
        empty_bad == 0 && scale_bad == 0,
        format!("{EMPTY_FORMULAS} formulas: {empty_bad} empty-model failures, {scale_bad} rescaling changes"),
    )
}

fn c05_rewrites() -> Verdict {
    let sig = xy();
    let guard = Guard::default();
    let mut r = rng(5);
    let mut report = Vec::new();
    let mut all_ok = true;

    let mut bad = 0;
    for _ in 0..REWRITE_FORMULAS {
        let f = Formula::Pco(random_pco(&mut r, &sig, 3, FragmentLabel::PSupset));
        let g = supset_normal_form(&f).unwrap();
        bad += usize::from(equiv(&f, &g, &sig, REWRITE_MAX_SIZE, &LawMode::AllLaws, &guard).unwrap().is_some());
    }
    all_ok &= bad == 0;
    report.push(format!("supset-nf {bad}"));

    let mut bad = 0;
    for _ in 0..REWRITE_FORMULAS {
        let f = Formula::Pco(random_pco(&mut r, &sig, 3, FragmentLabel::PBoxRight));
        let g = push_boxright(&f, &sig).unwrap();
        bad += usize::from(equiv(&f, &g, &sig, REWRITE_MAX_SIZE, &LawMode::AllLaws, &guard).unwrap().is_some());
    }
    all_ok &= bad == 0;
    report.push(format!("push-box {bad}"));

    let laws = all_function_components(&sig, &guard).unwrap();
    let mut bad = 0;
    for _ in 0..REWRITE_FORMULAS {
        let f = Formula::Pco(random_pco(&mut r, &sig, 3, FragmentLabel::Pco));
        for fc in &laws {
            let g = Formula::Pco(relativize(&f, fc, &sig).unwrap());
            let mode = LawMode::FixedLaws(fc.clone());
            bad += usize::from(equiv(&f, &g, &sig, REWRITE_MAX_SIZE, &mode, &guard).unwrap().is_some());
        }
    }
    all_ok &= bad == 0;
    report.push(format!("relativize {bad} (over {} law systems)", laws.len()));
    verdict(all_ok, format!("counterexamples: {}", report.join(", ")))
}

fn c06_characteristic() -> Verdict {
    let sig = xy();
    let guard = Guard::default();
    let laws = all_function_components(&sig, &guard).unwrap();
    let ms = models(&sig, PHI_MAX_SIZE, &LawMode::AllLaws);
    let (mut bad, mut psi_bad) = (0usize, 0usize);
    for fc in &laws {
        let phi = Formula::Pco(characteristic_phi(fc, &sig));
        let psi = Formula::Pco(characteristic_psi(fc, &sig));
        for t in ms.iter().filter(|t| !t.is_empty()) {
            bad += usize::from(holds(t, &phi) != (t.laws() == fc));
        }
        psi_bad += usize::from(equiv(&phi, &psi, &sig, PHI_MAX_SIZE, &LawMode::AllLaws, &guard).unwrap().is_some());
    }
    verdict(bad == 0 && psi_bad == 0, format!("{} law systems: {bad} misidentified models, {psi_bad} psi/phi mismatches", laws.len()))
}

fn c07_extraction() -> Verdict {
    let sig = xy();
    let guard = Guard::default();
    let mut r = rng(7);
    let mut all_ok = true;
    let mut report = Vec::new();
    for (frag, class) in [
        (FragmentLabel::PMinus, IneqClass::Monic),
        (FragmentLabel::P, IneqClass::SignedMonic),
        (FragmentLabel::PSupset, IneqClass::SignedBinary),
    ] {
        let (mut cex, mut over) = (0usize, 0usize);
        for _ in 0..EXTRACT_FORMULAS {
            let f = Formula::Pco(random_pco(&mut r, &sig, 3, frag));
            let set = extract(&f, &sig, None).unwrap();
            over += usize::from(set.class() > class);
            cex += usize::from(check_set_agreement(&f, &set, &sig, EXTRACT_MAX_SIZE, &LawMode::NoLaws, &guard).unwrap().is_some());
        }
        all_ok &= cex == 0 && over == 0;
        report.push(format!("{frag}: {cex} counterexamples, {over} above {class}"));
    }
    verdict(all_ok, report.join("; "))
}

fn c08_witness() -> Verdict {
    let mut bad = 0usize;
    let mut points = 0usize;
    for n in [3usize, 4] {
        let values: Vec<i64> = (1..=n as i64).collect();
        let sig = Signature::int_ranges(&[("S", &values)]).unwrap();
        let f = parse("(S=1 or S=2 or S=3) => Pr(S=1 or S=2) <= 1/3", &sig).unwrap();
        let set = extract(&f, &sig, None).unwrap();
        let mut coeffs = vec![rat(2, 1), rat(2, 1), rat(-1, 1)];
        coeffs.resize(n, Rational::zero());
        let target = ProbSet::single(Ineq::new(coeffs, IneqCmp::Le, Rational::zero()));
        for p in grid_points::<BigInt>(n, WITNESS_MAX_DEN) {
            points += 1;
            bad += usize::from(set.member(&p).unwrap() != target.member(&p).unwrap());
        }
    }
    verdict(bad == 0, format!("{points} grid points over 3 and 4 states, {bad} disagreements"))
}

fn c09_synthesis() -> Verdict {
    let sig = Arc::new(Signature::int_ranges(&[("S", &[1, 2, 3])]).unwrap());
    let ms = models(&sig, SYNTH_MAX_SIZE, &LawMode::NoLaws);
    let grid = grid_points::<BigInt>(3, SYNTH_MAX_SIZE as u64);
    let mut r = rng(9);
    let mut all_ok = true;
    let mut report = Vec::new();
    for class in [IneqClass::Monic, IneqClass::SignedMonic, IneqClass::SignedBinary] {
        let (mut ok, mut undefinable, mut wrong) = (0usize, 0usize, 0usize);
        for _ in 0..SYNTH_SETS {
            let set = random_set(&mut r, 3, class);
            let f = match synth(&set, class, &sig) {
                Ok(f) => Formula::Pco(f),
                Err(_) => {
                    undefinable += 1;
                    continue;
                }
            };
            let agrees = ms.iter().all(|t| {
                let v = holds(t, &f);
                if t.is_empty() {
                    v
                } else {
                    v == set.member(&t.probability_vector().unwrap()).unwrap()
                }
            });
            let back = extract(&f, &sig, None).unwrap();
            let round_trip = grid.iter().all(|p| back.member(p).unwrap() == set.member(p).unwrap());
            if agrees && round_trip {
                ok += 1;
            } else {
                wrong += 1;
            }
        }
        all_ok &= ok == SYNTH_SETS;
        report.push(format!("{class} {ok}/{SYNTH_SETS} ({undefinable} not synthesizable, {wrong} wrong)"));
    }
    verdict(all_ok, report.join("; "))
}

fn c10_discriminant() -> Verdict {
    let mut r = rng(10);
    let mut deltas = vec![rat(1, 2)];
    while deltas.len() < DISCRIMINANT_SAMPLES {
        let d = r.gen_range(2..=1000i64);
        deltas.push(rat(r.gen_range(1..d), d));
    }
    let bad = deltas.iter().filter(|d| conic_discriminant(*d).unwrap() != -(*d * rat(2, 1))).count();
    let half = conic_discriminant(&rat(1, 2)).unwrap();
    verdict(bad == 0 && half == rat(-1, 1), format!("{} samples, {bad} mismatches, delta=1/2 gives {half}", deltas.len()))
}

type AtomCase = (AtomKind, &'static [&'static str], &'static [usize], &'static [usize], &'static [usize]);

fn c11_atoms() -> Verdict {
    let mut all_ok = true;
    let mut report = Vec::new();
    let cases: [AtomCase; 4] = [
        (AtomKind::Dep, &["X", "Y"], &[0], &[1], &[]),
        (AtomKind::Mi, &["X", "Y"], &[0], &[1], &[]),
        (AtomKind::Indep, &["X", "Y"], &[0], &[1], &[]),
        (AtomKind::CondIndep, &["X", "Y", "Z"], &[0], &[1], &[2]),
    ];
    for (kind, names, xs, ys, zs) in cases {
        let sig = Arc::new(Signature::binary(names).unwrap());
        let f = Formula::Pco(expand_atom(kind, xs, ys, zs, &sig).unwrap());
        let ms = models(&sig, ATOM_MAX_SIZE, &LawMode::AllLaws);
        let bad = ms.iter().filter(|t| holds(t, &f) != direct_check(kind, xs, ys, zs, t)).count();
        all_ok &= bad == 0;
        report.push(format!("{kind:?} {bad}/{}", ms.len()));
    }
    verdict(all_ok, format!("disagreements: {}", report.join(", ")))
}

fn c12_non_flatness() -> Verdict {
    let sig = Arc::new(Signature::binary(&["X"]).unwrap());
    let f = parse("Pr(X=1) >= 1/2", &sig).unwrap();
    let team = Multiteam::from_rows([(Assignment(vec![0]), 1), (Assignment(vec![1]), 1)]);
    let t = CausalMultiteam::checked(sig.clone(), Default::default(), team).unwrap();
    let single = t.with_team(Multiteam::from_rows([(Assignment(vec![0]), 1)]));
    let cfg = EvalConfig::default();
    let pass = eval(&t, &f, &cfg).unwrap() && !eval(&single, &f, &cfg).unwrap();
    verdict(pass, "Pr(X=1) >= 1/2 holds on {X=0, X=1} and fails on its row {X=0}")
}

type Criterion = fn() -> Verdict;

fn main() {
    let criteria: [(&str, Criterion); 12] = [
        ("worked example", c01_worked_example),
        ("flatness", c02_flatness),
        ("transfer to causal teams", c03_transfer),
        ("empty multiteam and rescaling", c04_empty_and_rescaling),
        ("rewrite soundness", c05_rewrites),
        ("characteristic formulas", c06_characteristic),
        ("extractor agreement", c07_extraction),
        ("signed-binary witness", c08_witness),
        ("synthesizer round trip", c09_synthesis),
        ("conic discriminant", c10_discriminant),
        ("dependence and independence atoms", c11_atoms),
        ("non-flatness witness", c12_non_flatness),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (mut failed, mut ran) = (0, 0);
    println!("acceptance (tolerance {TOLERANCE}: exact rational arithmetic)");
    for (i, (name, run)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let v = run();
        let status = if v.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!v.pass);
        println!("{status} {:>2} {name} [{:.1}s]: {}", i + 1, start.elapsed().as_secs_f64(), v.detail);
    }
    println!("summary: {}/{ran} criteria passed", ran - failed);
    if failed > 0 && std::env::var("CML_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
