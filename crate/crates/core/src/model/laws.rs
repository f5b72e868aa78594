use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::signature::{Assignment, Signature, VarId};

/// Structural equation for one endogenous variable.
///
/// The table is indexed by the values of all *other* variables (the tuple `W_V`) in
/// signature order, as a mixed-radix number.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Law {
    var: VarId,
    table: Vec<usize>,
    strides: Vec<usize>,
    parents: u64,
}

impl Law {
    pub fn var(&self) -> VarId {
        self.var
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// Output for an assignment; the value of `var` itself is ignored.
    pub fn eval(&self, values: &[usize]) -> usize {
        let idx: usize = values.iter().zip(&self.strides).map(|(x, st)| x * st).sum();
        self.table[idx]
    }

    pub fn parent_mask(&self) -> u64 {
        self.parents
    }

    pub fn is_constant(&self) -> bool {
        self.table.windows(2).all(|w| w[0] == w[1])
    }
}

fn arg_strides(sig: &Signature, v: VarId) -> (Vec<usize>, usize) {
    let mut strides = vec![0; sig.num_vars()];
    let mut acc = 1usize;
    for u in (0..sig.num_vars()).rev() {
        if u != v {
            strides[u] = acc;
            acc *= sig.range_len(u);
        }
    }
    (strides, acc)
}

/// Number of entries of a maximal table for `v`, or `None` on overflow.
pub fn table_len(sig: &Signature, v: VarId) -> Option<usize> {
    (0..sig.num_vars())
        .filter(|&u| u != v)
        .try_fold(1usize, |acc, u| acc.checked_mul(sig.range_len(u)))
}

fn compute_parents(sig: &Signature, v: VarId, table: &[usize], strides: &[usize]) -> u64 {
    let mut mask = 0u64;
    for (u, &st) in strides.iter().enumerate().take(sig.num_vars()) {
        if u == v {
            continue;
        }
        let r = sig.range_len(u);
        let varies = (0..table.len()).any(|i| (i / st) % r + 1 < r && table[i] != table[i + st]);
        if varies {
            mask |= 1 << u;
        }
    }
    mask
}

/// A function component `F`: one law per endogenous variable, kept sorted by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FunctionComponent {
    laws: Vec<Law>,
    topo: Option<Vec<VarId>>,
}

impl FunctionComponent {
    pub fn empty() -> Self {
        FunctionComponent { laws: Vec::new(), topo: Some(Vec::new()) }
    }

    /// Builds a component from maximal tables. Structural problems (bad lengths, values
    /// out of range, duplicates) are errors; constant tables and cycles are left for
    /// [`crate::model::CausalMultiteam::validate`] to report.
    pub fn new(sig: &Signature, tables: Vec<(VarId, Vec<usize>)>) -> Result<Self> {
        let mut laws: Vec<Law> = Vec::with_capacity(tables.len());
        for (v, table) in tables {
            if v >= sig.num_vars() {
                return Err(Error::Invalid(format!("law for unknown variable index {v}")));
            }
            if laws.iter().any(|l| l.var == v) {
                return Err(Error::Invalid(format!("two laws for `{}`", sig.var_name(v))));
            }
            let (strides, len) = arg_strides(sig, v);
            if table.len() != len {
                return Err(Error::Invalid(format!(
                    "law for `{}` has {} entries, expected {len}",
                    sig.var_name(v),
                    table.len()
                )));
            }
            if table.iter().any(|&x| x >= sig.range_len(v)) {
                return Err(Error::Invalid(format!("law for `{}` leaves its range", sig.var_name(v))));
            }
            let parents = compute_parents(sig, v, &table, &strides);
            laws.push(Law { var: v, table, strides, parents });
        }
        laws.sort_by_key(|l| l.var);
        let topo = topo_order(&laws);
        Ok(FunctionComponent { laws, topo })
    }

    /// Builds a single law by evaluating `f` on every assignment (the value of `v` is
    /// passed as 0 and must not be read).
    pub fn with_law(self, sig: &Signature, v: VarId, f: impl Fn(&[usize]) -> usize) -> Result<Self> {
        let (strides, len) = arg_strides(sig, v);
        let mut table = vec![0; len];
        for s in sig.enumerate_assignments() {
            if s.0[v] != 0 {
                continue;
            }
            let idx: usize = s.0.iter().zip(&strides).map(|(x, st)| x * st).sum();
            table[idx] = f(&s.0);
        }
        let mut tables: Vec<(VarId, Vec<usize>)> =
            self.laws.into_iter().map(|l| (l.var, l.table)).collect();
        tables.push((v, table));
        Self::new(sig, tables)
    }

    pub fn laws(&self) -> &[Law] {
        &self.laws
    }

    pub fn law(&self, v: VarId) -> Option<&Law> {
        self.laws.iter().find(|l| l.var == v)
    }

    pub fn is_endogenous(&self, v: VarId) -> bool {
        self.law(v).is_some()
    }

    pub fn endogenous(&self) -> impl Iterator<Item = VarId> + '_ {
        self.laws.iter().map(|l| l.var)
    }

    pub fn endogenous_mask(&self) -> u64 {
        self.laws.iter().fold(0, |m, l| m | (1 << l.var))
    }

    pub fn is_empty(&self) -> bool {
        self.laws.is_empty()
    }

    /// `PA_V`: the arguments of `F_V` that are not dummies.
    pub fn parents(&self, sig: &Signature, v: VarId) -> Result<BTreeSet<VarId>> {
        let law = self
            .law(v)
            .ok_or_else(|| Error::NotEndogenous(sig.var_name(v).to_string()))?;
        Ok((0..sig.num_vars()).filter(|u| law.parents & (1 << u) != 0).collect())
    }

    /// Endogenous variables in a topological order of the parent graph; `None` if cyclic.
    pub fn topo_order(&self) -> Option<&[VarId]> {
        self.topo.as_deref()
    }

    pub fn is_acyclic(&self) -> bool {
        self.topo.is_some()
    }

    /// Variables on a cycle of the parent graph.
    pub fn cyclic_vars(&self) -> Vec<VarId> {
        if self.topo.is_some() {
            return Vec::new();
        }
        let mut remaining: Vec<&Law> = self.laws.iter().collect();
        loop {
            let mask = remaining.iter().fold(0u64, |m, l| m | (1 << l.var));
            let before = remaining.len();
            let snapshot = remaining.clone();
            remaining.retain(|l| {
                l.parents & mask != 0 && snapshot.iter().any(|o| o.parents & (1 << l.var) != 0)
            });
            if remaining.len() == before {
                return remaining.iter().map(|l| l.var).collect();
            }
        }
    }

    /// `F` restricted to the complement of `removed` (a variable bitmask).
    pub fn restrict(&self, removed: u64) -> Self {
        let laws: Vec<Law> = self
            .laws
            .iter()
            .filter(|l| removed & (1 << l.var) == 0)
            .cloned()
            .collect();
        let topo = self
            .topo
            .as_ref()
            .map(|t| t.iter().copied().filter(|v| removed & (1 << v) == 0).collect());
        FunctionComponent { laws, topo }
    }

    /// `s^F_{X=x}` for consistent `iv`, skipping laws of variables in `removed`.
    pub fn intervene_row(&self, removed: u64, s: &Assignment, iv: &[(VarId, usize)]) -> Assignment {
        let mut out = s.clone();
        let mut fixed = removed;
        for &(v, x) in iv {
            out.0[v] = x;
            fixed |= 1 << v;
        }
        if let Some(topo) = &self.topo {
            for &v in topo {
                if fixed & (1 << v) == 0 {
                    let law = self.law(v).expect("topological order lists endogenous variables");
                    out.0[v] = law.eval(&out.0);
                }
            }
        }
        out
    }

    /// True if every active law agrees with `s`.
    pub fn compatible(&self, removed: u64, s: &Assignment) -> bool {
        self.laws
            .iter()
            .filter(|l| removed & (1 << l.var) == 0)
            .all(|l| l.eval(&s.0) == s.0[l.var])
    }

    /// Human-readable table rows `(W_V values) -> value`.
    pub fn describe(&self, sig: &Signature) -> String {
        let mut parts = Vec::new();
        for law in &self.laws {
            let parents: Vec<&str> = (0..sig.num_vars())
                .filter(|u| law.parents & (1 << u) != 0)
                .map(|u| sig.var_name(u))
                .collect();
            parts.push(format!("{}({})", sig.var_name(law.var), parents.join(",")));
        }
        format!("{{{}}}", parts.join(", "))
    }
}

fn topo_order(laws: &[Law]) -> Option<Vec<VarId>> {
    let endo = laws.iter().fold(0u64, |m, l| m | (1 << l.var));
    let mut done = 0u64;
    let mut order = Vec::with_capacity(laws.len());
    while order.len() < laws.len() {
        let next = laws
            .iter()
            .find(|l| done & (1 << l.var) == 0 && (l.parents & endo) & !done == 0)?;
        done |= 1 << next.var;
        order.push(next.var);
    }
    Some(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_sig() -> Signature {
        Signature::int_ranges(&[("X", &[0, 1, 2]), ("Y", &[1, 2, 3]), ("Z", &[1, 2, 3, 4, 5])]).unwrap()
    }

    #[test]
    fn sum_law_has_both_parents() {
        let sig = example_sig();
        // value index of X is the value itself; Y's index is value-1; Z's index is value-1
        let f = FunctionComponent::empty()
            .with_law(&sig, 2, |s| s[0] + (s[1] + 1) - 1)
            .unwrap();
        assert_eq!(f.parents(&sig, 2).unwrap(), BTreeSet::from([0, 1]));
    }

    #[test]
    fn dummy_argument_is_not_a_parent() {
        let sig = example_sig();
        let f = FunctionComponent::empty().with_law(&sig, 1, |s| s[0]).unwrap();
        assert_eq!(f.parents(&sig, 1).unwrap(), BTreeSet::from([0]));
        assert!(f.parents(&sig, 0).is_err());
    }

    #[test]
    fn detects_two_cycle() {
        let sig = Signature::binary(&["X", "Y"]).unwrap();
        let f = FunctionComponent::empty()
            .with_law(&sig, 0, |s| s[1])
            .unwrap()
            .with_law(&sig, 1, |s| s[0])
            .unwrap();
        assert!(!f.is_acyclic());
        assert_eq!(f.cyclic_vars(), vec![0, 1]);
    }

    #[test]
    fn cycle_detection_ignores_tails() {
        let sig = Signature::binary(&["X", "Y", "Z"]).unwrap();
        let f = FunctionComponent::empty()
            .with_law(&sig, 0, |s| s[1])
            .unwrap()
            .with_law(&sig, 1, |s| s[0])
            .unwrap()
            .with_law(&sig, 2, |s| s[0])
            .unwrap();
        assert_eq!(f.cyclic_vars(), vec![0, 1]);
    }

    #[test]
    fn intervention_recomputes_descendants() {
        let sig = Signature::binary(&["X", "Y", "Z"]).unwrap();
        let f = FunctionComponent::empty()
            .with_law(&sig, 1, |s| s[0])
            .unwrap()
            .with_law(&sig, 2, |s| 1 - s[1])
            .unwrap();
        let s = Assignment(vec![0, 0, 1]);
        assert_eq!(f.intervene_row(0, &s, &[(0, 1)]), Assignment(vec![1, 1, 0]));
        assert_eq!(f.intervene_row(0, &s, &[(1, 1)]), Assignment(vec![0, 1, 0]));
        assert_eq!(f.intervene_row(1 << 1, &s, &[(0, 1)]), Assignment(vec![1, 0, 1]));
    }
}
