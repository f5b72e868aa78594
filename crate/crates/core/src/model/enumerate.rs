use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::laws::table_len;
use crate::model::{Assignment, CausalMultiteam, FunctionComponent, Multiteam, Signature, VarId};

/// Which function components an enumeration ranges over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LawMode {
    /// Every member of `F_σ`.
    AllLaws,
    FixedLaws(FunctionComponent),
    /// Only the empty component (all variables exogenous).
    NoLaws,
}

/// Limits that keep exhaustive enumeration at desk scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guard {
    pub max_states: usize,
    pub max_law_candidates: usize,
}

impl Default for Guard {
    fn default() -> Self {
        Guard { max_states: 64, max_law_candidates: 1_000_000 }
    }
}

impl Guard {
    pub const ENV_VAR: &'static str = "CML_MAX_STATES";

    /// Default guard with `max_states` taken from `CML_MAX_STATES` when it is set.
    pub fn from_env() -> Result<Self> {
        let mut g = Guard::default();
        if let Ok(v) = std::env::var(Self::ENV_VAR) {
            g.max_states = v
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("{} must be a non-negative integer", Self::ENV_VAR)))?;
        }
        Ok(g)
    }

    pub fn check_states(&self, sig: &Signature) -> Result<()> {
        if sig.num_states() > self.max_states {
            return Err(Error::Guard(format!(
                "signature has {} states, limit is {}",
                sig.num_states(),
                self.max_states
            )));
        }
        Ok(())
    }
}

fn non_constant_tables(len: usize, radix: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; len];
    loop {
        if cur.windows(2).any(|w| w[0] != w[1]) {
            out.push(cur.clone());
        }
        let mut i = len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < radix {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// `F_σ`: every acyclic component of non-constant maximal tables, ordered by endogenous
/// set (as a bitmask) and then lexicographically by tables.
pub fn all_function_components(sig: &Signature, guard: &Guard) -> Result<Vec<FunctionComponent>> {
    guard.check_states(sig)?;
    let k = sig.num_vars();
    if k >= 20 {
        return Err(Error::Guard(format!("{k} variables give too many endogenous sets")));
    }
    let mut per_var: Vec<Option<Vec<Vec<usize>>>> = vec![None; k];
    let mut out = vec![FunctionComponent::empty()];
    let mut budget = guard.max_law_candidates;
    for mask in 1u64..(1 << k) {
        let vars: Vec<VarId> = (0..k).filter(|v| mask & (1 << v) != 0).collect();
        let mut combos: usize = 1;
        for &v in &vars {
            if per_var[v].is_none() {
                let len = table_len(sig, v).filter(|&l| l <= 24).ok_or_else(|| {
                    Error::Guard(format!("law tables for `{}` are too large to enumerate", sig.var_name(v)))
                })?;
                let count = (sig.range_len(v) as u128).pow(len as u32);
                if count > guard.max_law_candidates as u128 {
                    return Err(Error::Guard(format!("too many candidate laws for `{}`", sig.var_name(v))));
                }
                per_var[v] = Some(non_constant_tables(len, sig.range_len(v)));
            }
            let n = per_var[v].as_ref().map_or(0, Vec::len);
            combos = combos.saturating_mul(n);
        }
        if combos > budget {
            return Err(Error::Guard("too many candidate function components".into()));
        }
        budget -= combos;
        let lists: Vec<&Vec<Vec<usize>>> = vars.iter().map(|&v| per_var[v].as_ref().unwrap()).collect();
        if lists.iter().any(|l| l.is_empty()) {
            continue;
        }
        let mut pick = vec![0; vars.len()];
        loop {
            let tables: Vec<(VarId, Vec<usize>)> =
                vars.iter().zip(&pick).zip(&lists).map(|((&v, &i), l)| (v, l[i].clone())).collect();
            let fc = FunctionComponent::new(sig, tables)?;
            if fc.is_acyclic() {
                out.push(fc);
            }
            let mut i = vars.len();
            let mut done = true;
            while i > 0 {
                i -= 1;
                pick[i] += 1;
                if pick[i] < lists[i].len() {
                    done = false;
                    break;
                }
                pick[i] = 0;
            }
            if done {
                break;
            }
        }
    }
    Ok(out)
}

/// States compatible with every law of `laws`, in enumeration order.
pub fn compatible_states(sig: &Signature, laws: &FunctionComponent) -> Vec<Assignment> {
    sig.enumerate_assignments().filter(|s| laws.compatible(0, s)).collect()
}

/// Multisets over `0..m` of size `0..=max`, as nondecreasing index lists, by size then
/// lexicographically.
#[derive(Clone, Debug)]
pub struct Multisets {
    m: usize,
    max: usize,
    cur: Option<Vec<usize>>,
}

impl Multisets {
    pub fn new(m: usize, max: usize) -> Self {
        Multisets { m, max, cur: Some(Vec::new()) }
    }
}

impl Iterator for Multisets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.take()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if next[i] + 1 < self.m {
                let v = next[i] + 1;
                for x in &mut next[i..] {
                    *x = v;
                }
                advanced = true;
                break;
            }
        }
        if advanced {
            self.cur = Some(next);
        } else if k < self.max && self.m > 0 {
            self.cur = Some(vec![0; k + 1]);
        }
        Some(out)
    }
}

/// Stream of every valid causal multiteam with `|T⁻| ≤ max_size` whose laws match `mode`.
pub struct ModelIter {
    sig: Arc<Signature>,
    laws: Vec<FunctionComponent>,
    law_idx: usize,
    states: Vec<Assignment>,
    multisets: Multisets,
    max_size: usize,
}

impl ModelIter {
    fn load(&mut self) {
        let laws = &self.laws[self.law_idx];
        self.states = compatible_states(&self.sig, laws);
        self.multisets = Multisets::new(self.states.len(), self.max_size);
    }

    pub fn law_choices(&self) -> &[FunctionComponent] {
        &self.laws
    }
}

impl Iterator for ModelIter {
    type Item = CausalMultiteam;

    fn next(&mut self) -> Option<CausalMultiteam> {
        loop {
            if self.law_idx >= self.laws.len() {
                return None;
            }
            if let Some(ms) = self.multisets.next() {
                let team = Multiteam::from_rows(ms.into_iter().map(|i| (self.states[i].clone(), 1)));
                return Some(CausalMultiteam::new(self.sig.clone(), self.laws[self.law_idx].clone(), team));
            }
            self.law_idx += 1;
            if self.law_idx < self.laws.len() {
                self.load();
            }
        }
    }
}

pub fn enumerate_models(
    sig: &Arc<Signature>,
    max_size: usize,
    mode: &LawMode,
    guard: &Guard,
) -> Result<ModelIter> {
    guard.check_states(sig)?;
    let laws = match mode {
        LawMode::AllLaws => all_function_components(sig, guard)?,
        LawMode::NoLaws => vec![FunctionComponent::empty()],
        LawMode::FixedLaws(f) => {
            let probe = CausalMultiteam::new(sig.clone(), f.clone(), Multiteam::new());
            let violations = probe.validate();
            if !violations.is_empty() {
                return Err(Error::InvalidModel(violations.iter().map(|v| v.to_string()).collect()));
            }
            vec![f.clone()]
        }
    };
    let mut it = ModelIter {
        sig: sig.clone(),
        laws,
        law_idx: 0,
        states: Vec::new(),
        multisets: Multisets::new(0, 0),
        max_size,
    };
    it.load();
    Ok(it)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_binary_variable_gives_six_models() {
        let sig = Arc::new(Signature::binary(&["X"]).unwrap());
        let models: Vec<_> = enumerate_models(&sig, 2, &LawMode::NoLaws, &Guard::default()).unwrap().collect();
        let shapes: Vec<Vec<(usize, u64)>> = models
            .iter()
            .map(|m| m.rows().map(|(s, c)| (s.0[0], c)).collect())
            .collect();
        assert_eq!(
            shapes,
            vec![vec![], vec![(0, 1)], vec![(1, 1)], vec![(0, 2)], vec![(0, 1), (1, 1)], vec![(1, 2)]]
        );
    }

    #[test]
    fn two_binary_variables_have_five_components() {
        let sig = Signature::binary(&["X", "Y"]).unwrap();
        let all = all_function_components(&sig, &Guard::default()).unwrap();
        assert_eq!(all.len(), 5);
        assert!(all[0].is_empty());
        assert!(all.iter().all(|f| f.laws().iter().all(|l| !l.is_constant())));
    }

    #[test]
    fn size_zero_gives_one_empty_model_per_law() {
        let sig = Arc::new(Signature::binary(&["X", "Y"]).unwrap());
        let models: Vec<_> = enumerate_models(&sig, 0, &LawMode::AllLaws, &Guard::default()).unwrap().collect();
        assert_eq!(models.len(), 5);
        assert!(models.iter().all(|m| m.is_empty()));
    }

    #[test]
    fn enumerated_models_validate() {
        let sig = Arc::new(Signature::binary(&["X", "Y", "Z"]).unwrap());
        let guard = Guard::default();
        let mut count = 0;
        for m in enumerate_models(&sig, 2, &LawMode::AllLaws, &guard).unwrap() {
            assert!(m.validate().is_empty());
            count += 1;
        }
        assert!(count > 0);
    }

    #[test]
    fn guard_rejects_large_signatures() {
        let sig = Arc::new(Signature::binary(&["A", "B", "C", "D", "E", "F", "G"]).unwrap());
        let err = enumerate_models(&sig, 1, &LawMode::NoLaws, &Guard::default()).err().unwrap();
        assert!(err.is_guard());
    }

    #[test]
    fn multiset_counts_match_binomials() {
        // multisets of size k over m items: C(m+k-1, k)
        let total: usize = Multisets::new(4, 3).count();
        assert_eq!(total, 1 + 4 + 10 + 20);
    }
}
