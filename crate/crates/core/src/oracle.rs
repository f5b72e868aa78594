//! Exhaustive certification of equivalences and formula/probability-set agreement over
//! every model up to a size bound.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{ProbabilitySet, Scalar};
use crate::model::{enumerate_models, io::model_to_json, CausalMultiteam, Guard, LawMode, Signature};
use crate::semantics::{eval, EvalConfig};
use crate::syntax::{contains_cf, Formula};

/// A model on which two verdicts disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub model: CausalMultiteam,
    /// Position of the model in enumeration order.
    pub index: usize,
    pub left: bool,
    /// `None` for an empty model in set agreement, where only the formula is checked.
    pub right: Option<bool>,
}

impl Counterexample {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "model": model_to_json(&self.model),
            "index": self.index,
            "left": self.left,
            "right": self.right,
        })
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = self.model.signature();
        let rows: Vec<String> =
            self.model.rows().map(|(s, c)| format!("{}:{c}", sig.format_assignment(s))).collect();
        write!(f, "{{{}}} laws [{}]: ", rows.join(", "), self.model.laws().describe(sig))?;
        match self.right {
            Some(r) => write!(f, "{} vs {}", self.left, r),
            None => write!(f, "formula is {} on the empty model", self.left),
        }
    }
}

fn check_mode(fs: &[&Formula], mode: &LawMode) -> Result<()> {
    if matches!(mode, LawMode::NoLaws) && fs.iter().any(|f| contains_cf(f)) {
        return Err(Error::Invalid("counterfactual formulas must be checked with all laws or fixed laws".into()));
    }
    Ok(())
}

fn first_disagreement(
    models: Vec<CausalMultiteam>,
    check: impl Fn(&CausalMultiteam) -> Result<Option<(bool, Option<bool>)>> + Sync,
) -> Result<Option<Counterexample>> {
    let found = models.into_par_iter().enumerate().find_map_first(|(index, model)| match check(&model) {
        Ok(None) => None,
        Ok(Some((left, right))) => Some(Ok(Counterexample { model, index, left, right })),
        Err(e) => Some(Err(e)),
    });
    found.transpose()
}

/// The first model (in enumeration order) where `f` and `g` disagree, or `None`.
pub fn equiv(
    f: &Formula,
    g: &Formula,
    sig: &Arc<Signature>,
    max_size: usize,
    mode: &LawMode,
    guard: &Guard,
) -> Result<Option<Counterexample>> {
    check_mode(&[f, g], mode)?;
    let cfg = EvalConfig::default();
    let models: Vec<_> = enumerate_models(sig, max_size, mode, guard)?.collect();
    let cex = first_disagreement(models, |t| {
        let (a, b) = (eval(t, f, &cfg)?, eval(t, g, &cfg)?);
        Ok((a != b).then_some((a, Some(b))))
    })?;
    if let Some(c) = &cex {
        assert_ne!(Some(eval(&c.model, f, &cfg)?), c.right, "counterexample does not reproduce");
    }
    Ok(cex)
}

/// The first model where `f` disagrees with membership of the model's probability vector
/// in `set`; empty models must satisfy `f`.
pub fn check_set_agreement<T: Scalar>(
    f: &Formula,
    set: &ProbabilitySet<T>,
    sig: &Arc<Signature>,
    max_size: usize,
    mode: &LawMode,
    guard: &Guard,
) -> Result<Option<Counterexample>> {
    check_mode(&[f], mode)?;
    if set.n != sig.num_states() {
        return Err(Error::Dimension { expected: sig.num_states(), found: set.n });
    }
    let set = set.to_big();
    let cfg = EvalConfig::default();
    let models: Vec<_> = enumerate_models(sig, max_size, mode, guard)?.collect();
    let verdicts = |t: &CausalMultiteam| -> Result<(bool, Option<bool>)> {
        let v = eval(t, f, &cfg)?;
        if t.is_empty() {
            return Ok((v, None));
        }
        Ok((v, Some(set.member(&t.probability_vector()?)?)))
    };
    let cex = first_disagreement(models, |t| {
        let (v, m) = verdicts(t)?;
        let bad = match m {
            Some(m) => v != m,
            None => !v,
        };
        Ok(bad.then_some((v, m)))
    })?;
    if let Some(c) = &cex {
        assert_eq!(verdicts(&c.model)?, (c.left, c.right), "counterexample does not reproduce");
    }
    Ok(cex)
}
