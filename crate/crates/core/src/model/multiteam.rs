use std::collections::BTreeMap;

use crate::model::signature::Assignment;

/// A finite multiset of assignments, stored as positive counts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multiteam {
    rows: BTreeMap<Assignment, u64>,
}

impl Multiteam {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rows(rows: impl IntoIterator<Item = (Assignment, u64)>) -> Self {
        let mut t = Self::new();
        for (s, c) in rows {
            t.insert(s, c);
        }
        t
    }

    /// Adds `count` copies of `s`; a zero count is ignored.
    pub fn insert(&mut self, s: Assignment, count: u64) {
        if count > 0 {
            *self.rows.entry(s).or_insert(0) += count;
        }
    }

    /// `|T⁻|`
    pub fn size(&self) -> u64 {
        self.rows.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn count(&self, s: &Assignment) -> u64 {
        self.rows.get(s).copied().unwrap_or(0)
    }

    pub fn support_len(&self) -> usize {
        self.rows.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Assignment, u64)> {
        self.rows.iter().map(|(s, &c)| (s, c))
    }

    pub fn support(&self) -> impl Iterator<Item = &Assignment> {
        self.rows.keys()
    }

    pub fn filter(&self, mut keep: impl FnMut(&Assignment) -> bool) -> Self {
        Multiteam {
            rows: self.rows.iter().filter(|(s, _)| keep(s)).map(|(s, &c)| (s.clone(), c)).collect(),
        }
    }

    pub fn map(&self, mut f: impl FnMut(&Assignment) -> Assignment) -> Self {
        Self::from_rows(self.rows.iter().map(|(s, &c)| (f(s), c)))
    }

    /// Every count multiplied by `k`.
    pub fn scale(&self, k: u64) -> Self {
        Self::from_rows(self.rows.iter().map(|(s, &c)| (s.clone(), c * k)))
    }

    pub fn is_submultiteam_of(&self, other: &Multiteam) -> bool {
        self.rows.iter().all(|(s, &c)| other.count(s) >= c)
    }
}
