//! Dependence, marginal identity and (conditional) independence as formula macros,
//! with direct combinatorial checks to compare them against.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{CausalMultiteam, Signature, Value, VarId};
use crate::syntax::{Bound, Cmp, CoFormula, Literal, PcoFormula, ProbAtom, ProbTerm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AtomKind {
    /// `dep(X;Y)`: `X` functionally determines `Y`.
    Dep,
    /// `X ≈ Y`: equal marginal distributions.
    Mi,
    /// `X ⫫ Y`
    Indep,
    /// `X ⫫_Z Y`
    CondIndep,
}

impl AtomKind {
    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "dep" => Some(AtomKind::Dep),
            "mi" => Some(AtomKind::Mi),
            "indep" => Some(AtomKind::Indep),
            "cindep" => Some(AtomKind::CondIndep),
            _ => None,
        }
    }
}

fn tuples(sig: &Signature, vars: &[VarId]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &v in vars {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..sig.range_len(v)).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

fn lits(vars: &[VarId], vals: &[usize]) -> Vec<Literal> {
    vars.iter().zip(vals).map(|(&v, &x)| Literal::eq(v, x)).collect()
}

fn co_conj(ls: &[Literal], sig: &Signature) -> CoFormula {
    CoFormula::conj(ls.iter().map(|l| CoFormula::Lit(*l)), sig)
}

fn eq_atom(lhs: ProbTerm, rhs: ProbTerm) -> PcoFormula {
    PcoFormula::Prob(ProbAtom { lhs, cmp: Cmp::Eq, rhs: Bound::Term(rhs) })
}

fn check_tuple(sig: &Signature, vars: &[VarId], what: &str) -> Result<()> {
    if vars.is_empty() {
        return Err(Error::Invalid(format!("{what} tuple is empty")));
    }
    if let Some(&v) = vars.iter().find(|&&v| v >= sig.num_vars()) {
        return Err(Error::Invalid(format!("variable index {v} is outside the signature")));
    }
    Ok(())
}

/// Value tuple of `vars` as written values, used to match `Ran(X)` against `Ran(Y)`.
fn value_tuple(sig: &Signature, vars: &[VarId], idx: &[usize]) -> Vec<Value> {
    vars.iter().zip(idx).map(|(&v, &x)| sig.value(v, x).clone()).collect()
}

fn index_tuple(sig: &Signature, vars: &[VarId], vals: &[Value]) -> Option<Vec<usize>> {
    vars.iter().zip(vals).map(|(&v, x)| sig.value_index(v, x)).collect()
}

pub fn expand_atom(kind: AtomKind, xs: &[VarId], ys: &[VarId], zs: &[VarId], sig: &Signature) -> Result<PcoFormula> {
    check_tuple(sig, xs, "first")?;
    check_tuple(sig, ys, "second")?;
    let mut parts = Vec::new();
    match kind {
        AtomKind::Dep => {
            for x in tuples(sig, xs) {
                let ante = co_conj(&lits(xs, &x), sig);
                let options = tuples(sig, ys).into_iter().map(|y| {
                    let cons = lits(ys, &y).into_iter().map(PcoFormula::Lit);
                    PcoFormula::implies(ante.clone(), PcoFormula::conj(cons, sig))
                });
                parts.push(PcoFormula::gdisj(options, sig));
            }
        }
        AtomKind::Mi => {
            if xs.len() != ys.len() {
                return Err(Error::Invalid("marginal identity needs tuples of equal length".into()));
            }
            let mut values: Vec<Vec<Value>> = tuples(sig, xs).iter().map(|t| value_tuple(sig, xs, t)).collect();
            for t in tuples(sig, ys) {
                let vt = value_tuple(sig, ys, &t);
                if !values.contains(&vt) {
                    values.push(vt);
                }
            }
            let side = |vars: &[VarId], vt: &[Value]| match index_tuple(sig, vars, vt) {
                Some(idx) => ProbTerm::new(co_conj(&lits(vars, &idx), sig)),
                None => ProbTerm::new(CoFormula::bottom(sig)),
            };
            for vt in values {
                parts.push(eq_atom(side(xs, &vt), side(ys, &vt)));
            }
        }
        AtomKind::Indep => {
            for x in tuples(sig, xs) {
                let xf = co_conj(&lits(xs, &x), sig);
                for y in tuples(sig, ys) {
                    let yf = co_conj(&lits(ys, &y), sig);
                    parts.push(eq_atom(ProbTerm::new(xf.clone()), ProbTerm::given(xf.clone(), yf)));
                }
            }
        }
        AtomKind::CondIndep => {
            check_tuple(sig, zs, "condition")?;
            for x in tuples(sig, xs) {
                let xf = co_conj(&lits(xs, &x), sig);
                for y in tuples(sig, ys) {
                    for z in tuples(sig, zs) {
                        let zf = co_conj(&lits(zs, &z), sig);
                        let mut yz = lits(ys, &y);
                        yz.extend(lits(zs, &z));
                        parts.push(eq_atom(
                            ProbTerm::given(xf.clone(), zf),
                            ProbTerm::given(xf.clone(), co_conj(&yz, sig)),
                        ));
                    }
                }
            }
        }
    }
    Ok(PcoFormula::conj(parts, sig))
}

fn project(values: &[usize], vars: &[VarId]) -> Vec<usize> {
    vars.iter().map(|&v| values[v]).collect()
}

fn counts(t: &CausalMultiteam, vars: &[VarId]) -> BTreeMap<Vec<usize>, u64> {
    let mut out = BTreeMap::new();
    for (s, c) in t.rows() {
        *out.entry(project(&s.0, vars)).or_insert(0) += c;
    }
    out
}

/// Ground-truth check of the atom on `t` from row counts.
pub fn direct_check(kind: AtomKind, xs: &[VarId], ys: &[VarId], zs: &[VarId], t: &CausalMultiteam) -> bool {
    if t.is_empty() {
        return true;
    }
    let sig = t.signature();
    match kind {
        AtomKind::Dep => {
            let mut seen: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
            t.rows().all(|(s, _)| {
                let y = project(&s.0, ys);
                seen.entry(project(&s.0, xs)).or_insert_with(|| y.clone()) == &y
            })
        }
        AtomKind::Mi => {
            let by_value = |vars: &[VarId]| -> BTreeMap<Vec<Value>, u64> {
                counts(t, vars).into_iter().map(|(k, c)| (value_tuple(sig, vars, &k), c)).collect()
            };
            by_value(xs) == by_value(ys)
        }
        AtomKind::Indep => {
            let n = t.size() as u128;
            let cx = counts(t, xs);
            let cy = counts(t, ys);
            let both: Vec<VarId> = xs.iter().chain(ys).copied().collect();
            let cxy = counts(t, &both);
            cx.iter().all(|(x, &a)| {
                cy.iter().all(|(y, &b)| {
                    let key: Vec<usize> = x.iter().chain(y).copied().collect();
                    let joint = cxy.get(&key).copied().unwrap_or(0) as u128;
                    joint * n == a as u128 * b as u128
                })
            })
        }
        AtomKind::CondIndep => {
            let cz = counts(t, zs);
            let with = |vars: &[VarId]| -> BTreeMap<Vec<usize>, u64> {
                let all: Vec<VarId> = vars.iter().chain(zs).copied().collect();
                counts(t, &all)
            };
            let cxz = with(xs);
            let cyz = with(ys);
            let both: Vec<VarId> = xs.iter().chain(ys).copied().collect();
            let cxyz = with(&both);
            cz.iter().all(|(z, &nz)| {
                let slice = |m: &BTreeMap<Vec<usize>, u64>| -> Vec<(Vec<usize>, u64)> {
                    m.iter()
                        .filter(|(k, _)| k.ends_with(z))
                        .map(|(k, &c)| (k[..k.len() - z.len()].to_vec(), c))
                        .collect()
                };
                let sx = slice(&cxz);
                let sy = slice(&cyz);
                sx.iter().all(|(x, a)| {
                    sy.iter().all(|(y, b)| {
                        let key: Vec<usize> = x.iter().chain(y).chain(z).copied().collect();
                        let joint = cxyz.get(&key).copied().unwrap_or(0) as u128;
                        joint * nz as u128 == *a as u128 * *b as u128
                    })
                })
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::model::{Assignment, FunctionComponent, Multiteam};
    use crate::semantics::holds;
    use crate::syntax::{print_pco, Formula};

    fn model(rows: &[([usize; 2], u64)]) -> CausalMultiteam {
        let sig = Arc::new(Signature::binary(&["X", "Y"]).unwrap());
        let team = Multiteam::from_rows(rows.iter().map(|(s, c)| (Assignment(s.to_vec()), *c)));
        CausalMultiteam::new(sig, FunctionComponent::empty(), team)
    }

    #[test]
    fn dependence_macro_text() {
        let sig = Signature::binary(&["X", "Y"]).unwrap();
        let f = expand_atom(AtomKind::Dep, &[0], &[1], &[], &sig).unwrap();
        assert_eq!(
            print_pco(&f, &sig),
            "((X=0 => Y=0) gor (X=0 => Y=1)) and ((X=1 => Y=0) gor (X=1 => Y=1))"
        );
    }

    #[test]
    fn direct_dependence() {
        assert!(direct_check(AtomKind::Dep, &[0], &[1], &[], &model(&[([0, 0], 2), ([1, 1], 1)])));
        assert!(!direct_check(AtomKind::Dep, &[0], &[1], &[], &model(&[([0, 0], 1), ([0, 1], 1)])));
    }

    #[test]
    fn marginal_identity_on_swapped_rows() {
        let t = model(&[([0, 1], 1), ([1, 0], 1)]);
        let f = expand_atom(AtomKind::Mi, &[0], &[1], &[], t.signature()).unwrap();
        assert!(holds(&t, &Formula::Pco(f)));
        assert!(direct_check(AtomKind::Mi, &[0], &[1], &[], &t));
    }

    #[test]
    fn independence_of_product_and_diagonal() {
        let product = model(&[([0, 0], 1), ([0, 1], 1), ([1, 0], 1), ([1, 1], 1)]);
        let diagonal = model(&[([0, 0], 1), ([1, 1], 1)]);
        let f = Formula::Pco(expand_atom(AtomKind::Indep, &[0], &[1], &[], product.signature()).unwrap());
        assert!(holds(&product, &f));
        assert!(!holds(&diagonal, &f));
        assert!(direct_check(AtomKind::Indep, &[0], &[1], &[], &product));
        assert!(!direct_check(AtomKind::Indep, &[0], &[1], &[], &diagonal));
    }

    #[test]
    fn marginal_identity_across_different_ranges() {
        let sig = Arc::new(Signature::int_ranges(&[("X", &[0, 1]), ("Y", &[1, 2])]).unwrap());
        let team = Multiteam::from_rows([(Assignment(vec![1, 0]), 1)]);
        let t = CausalMultiteam::new(sig.clone(), FunctionComponent::empty(), team);
        let f = expand_atom(AtomKind::Mi, &[0], &[1], &[], &sig).unwrap();
        assert!(holds(&t, &Formula::Pco(f.clone())));
        let team = Multiteam::from_rows([(Assignment(vec![0, 0]), 1)]);
        let u = t.with_team(team);
        assert!(!holds(&u, &Formula::Pco(f)));
        assert!(!direct_check(AtomKind::Mi, &[0], &[1], &[], &u));
    }
}
