//! Satisfaction for CO, PCO and conditional atoms over causal multiteams, plus the
//! set-based causal-team semantics with the lax tensor.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::model::{intervention_mask, Assignment, CausalMultiteam, FunctionComponent, Multiteam, Signature};
use crate::syntax::{print_co, print_pco, Bound, CoFormula, Formula, Intervention, PcoFormula, ProbAtom, ProbTerm};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoStrategy {
    /// Check each row as a singleton; sound because CO is flat.
    Rowwise,
    /// Search count-splits for every tensor disjunction.
    SplitSearch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalConfig {
    pub co_strategy: CoStrategy,
    /// Largest `|T⁻|` (or support, for [`eval_ct`]) that split search accepts.
    pub split_bound: u64,
    /// Condition the right side of `Pr(α|γ) ▷ Pr(β|δ)` on `γ` instead of `δ`.
    pub literal_conditioning: bool,
    /// Record a trace of visited subformulas.
    pub trace: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { co_strategy: CoStrategy::Rowwise, split_bound: 12, literal_conditioning: false, trace: false }
    }
}

impl EvalConfig {
    pub fn split_search() -> Self {
        EvalConfig { co_strategy: CoStrategy::SplitSearch, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub depth: usize,
    pub formula: String,
    pub size: u64,
    pub verdict: bool,
}

/// `({s}, F) ⊨ α` where `F` is `laws` without the variables in `removed`.
pub fn row_sat(laws: &FunctionComponent, removed: u64, s: &Assignment, alpha: &CoFormula) -> bool {
    match alpha {
        CoFormula::Lit(l) => l.holds(&s.0),
        CoFormula::And(a, b) => row_sat(laws, removed, s, a) && row_sat(laws, removed, s, b),
        CoFormula::Or(a, b) => row_sat(laws, removed, s, a) || row_sat(laws, removed, s, b),
        CoFormula::Implies(a, b) => !row_sat(laws, removed, s, a) || row_sat(laws, removed, s, b),
        CoFormula::Cf(iv, body) => match intervention_mask(iv) {
            None => true,
            Some(mask) => {
                let image = laws.intervene_row(removed, s, iv);
                row_sat(laws, removed | mask, &image, body)
            }
        },
    }
}

fn intervene_team(laws: &FunctionComponent, removed: u64, team: &Multiteam, iv: &[(usize, usize)]) -> Multiteam {
    team.map(|s| laws.intervene_row(removed, s, iv))
}

fn ratio(num: u64, den: u64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

struct Evaluator<'f, 'm> {
    sig: &'m Signature,
    laws: &'m FunctionComponent,
    cfg: EvalConfig,
    observed: HashMap<(u64, Multiteam, &'f CoFormula), Multiteam>,
    intervened: HashMap<(u64, Multiteam, &'f Intervention), Multiteam>,
    trace: Vec<TraceEntry>,
    depth: usize,
}

impl<'f, 'm> Evaluator<'f, 'm> {
    fn new(t: &'m CausalMultiteam, cfg: EvalConfig) -> Self {
        Evaluator {
            sig: t.signature(),
            laws: t.laws(),
            cfg,
            observed: HashMap::new(),
            intervened: HashMap::new(),
            trace: Vec::new(),
            depth: 0,
        }
    }

    fn observe(&mut self, team: &Multiteam, removed: u64, alpha: &'f CoFormula) -> Multiteam {
        let key = (removed, team.clone(), alpha);
        if let Some(hit) = self.observed.get(&key) {
            return hit.clone();
        }
        let laws = self.laws;
        let out = team.filter(|s| row_sat(laws, removed, s, alpha));
        self.observed.insert(key, out.clone());
        out
    }

    fn intervene(&mut self, team: &Multiteam, removed: u64, iv: &'f Intervention) -> Multiteam {
        let key = (removed, team.clone(), iv);
        if let Some(hit) = self.intervened.get(&key) {
            return hit.clone();
        }
        let out = intervene_team(self.laws, removed, team, iv);
        self.intervened.insert(key, out.clone());
        out
    }

    fn record(&mut self, text: impl FnOnce() -> String, size: u64, verdict: bool) {
        if self.cfg.trace {
            self.trace.push(TraceEntry { depth: self.depth, formula: text(), size, verdict });
        }
    }

    fn co(&mut self, team: &Multiteam, removed: u64, alpha: &'f CoFormula) -> Result<bool> {
        let verdict = match self.cfg.co_strategy {
            CoStrategy::Rowwise => team.support().all(|s| row_sat(self.laws, removed, s, alpha)),
            CoStrategy::SplitSearch => {
                if team.size() > self.cfg.split_bound {
                    return Err(Error::Guard(format!(
                        "split search needs |T| <= {}, got {}",
                        self.cfg.split_bound,
                        team.size()
                    )));
                }
                self.split(team, removed, alpha)
            }
        };
        let sig = self.sig;
        self.record(|| print_co(alpha, sig), team.size(), verdict);
        Ok(verdict)
    }

    fn split(&mut self, team: &Multiteam, removed: u64, alpha: &'f CoFormula) -> bool {
        if team.is_empty() {
            return true;
        }
        match alpha {
            CoFormula::Lit(l) => team.support().all(|s| l.holds(&s.0)),
            CoFormula::And(a, b) => self.split(team, removed, a) && self.split(team, removed, b),
            CoFormula::Or(a, b) => {
                let rows: Vec<(&Assignment, u64)> = team.iter().collect();
                let mut take = vec![0u64; rows.len()];
                loop {
                    let left = Multiteam::from_rows(rows.iter().zip(&take).map(|((s, _), &k)| ((*s).clone(), k)));
                    let right =
                        Multiteam::from_rows(rows.iter().zip(&take).map(|((s, c), &k)| ((*s).clone(), c - k)));
                    if self.split(&left, removed, a) && self.split(&right, removed, b) {
                        return true;
                    }
                    let mut i = 0;
                    loop {
                        if i == rows.len() {
                            return false;
                        }
                        take[i] += 1;
                        if take[i] <= rows[i].1 {
                            break;
                        }
                        take[i] = 0;
                        i += 1;
                    }
                }
            }
            CoFormula::Implies(a, b) => {
                let kept: Vec<(Assignment, u64)> = team
                    .iter()
                    .filter(|(s, _)| {
                        let single = Multiteam::from_rows([((*s).clone(), 1)]);
                        self.split(&single, removed, a)
                    })
                    .map(|(s, c)| (s.clone(), c))
                    .collect();
                self.split(&Multiteam::from_rows(kept), removed, b)
            }
            CoFormula::Cf(iv, body) => match intervention_mask(iv) {
                None => true,
                Some(mask) => {
                    let image = self.intervene(team, removed, iv);
                    self.split(&image, removed | mask, body)
                }
            },
        }
    }

    fn probability(&mut self, team: &Multiteam, removed: u64, alpha: &'f CoFormula) -> Rational {
        let hits = self.observe(team, removed, alpha).size();
        ratio(hits, team.size())
    }

    /// Probability of a term, or `None` if its conditioning multiteam is empty.
    fn term(&mut self, team: &Multiteam, removed: u64, t: &'f ProbTerm) -> Option<Rational> {
        match &t.given {
            None => Some(self.probability(team, removed, &t.arg)),
            Some(g) => {
                let sub = self.observe(team, removed, g);
                if sub.is_empty() {
                    None
                } else {
                    Some(self.probability(&sub, removed, &t.arg))
                }
            }
        }
    }

    fn atom(&mut self, team: &Multiteam, removed: u64, a: &'f ProbAtom) -> bool {
        if team.is_empty() {
            return true;
        }
        let Some(p) = self.term(team, removed, &a.lhs) else { return true };
        let q = match &a.rhs {
            Bound::Const(eps) => eps.clone(),
            Bound::Term(t) => {
                let delta = t.given.as_ref().map(|d| self.observe(team, removed, d));
                if delta.as_ref().is_some_and(Multiteam::is_empty) {
                    return true;
                }
                let sub = if self.cfg.literal_conditioning {
                    match &a.lhs.given {
                        Some(g) => self.observe(team, removed, g),
                        None => team.clone(),
                    }
                } else {
                    delta.unwrap_or_else(|| team.clone())
                };
                self.probability(&sub, removed, &t.arg)
            }
        };
        a.cmp.holds(&p, &q)
    }

    fn pco(&mut self, team: &Multiteam, removed: u64, phi: &'f PcoFormula) -> Result<bool> {
        self.depth += 1;
        let verdict = match phi {
            PcoFormula::Lit(l) => team.support().all(|s| l.holds(&s.0)),
            PcoFormula::Prob(a) => self.atom(team, removed, a),
            PcoFormula::And(a, b) => self.pco(team, removed, a)? && self.pco(team, removed, b)?,
            PcoFormula::GOr(a, b) => self.pco(team, removed, a)? || self.pco(team, removed, b)?,
            PcoFormula::Implies(a, b) => {
                let sub = self.observe(team, removed, a);
                self.pco(&sub, removed, b)?
            }
            PcoFormula::Cf(iv, b) => match intervention_mask(iv) {
                None => true,
                Some(mask) => {
                    let image = self.intervene(team, removed, iv);
                    self.pco(&image, removed | mask, b)?
                }
            },
        };
        self.depth -= 1;
        let sig = self.sig;
        self.record(|| print_pco(phi, sig), team.size(), verdict);
        Ok(verdict)
    }
}

pub fn eval_co(t: &CausalMultiteam, alpha: &CoFormula, cfg: &EvalConfig) -> Result<bool> {
    Evaluator::new(t, *cfg).co(t.team(), 0, alpha)
}

pub fn eval_pco(t: &CausalMultiteam, phi: &PcoFormula, cfg: &EvalConfig) -> Result<bool> {
    Evaluator::new(t, *cfg).pco(t.team(), 0, phi)
}

pub fn eval(t: &CausalMultiteam, f: &Formula, cfg: &EvalConfig) -> Result<bool> {
    match f {
        Formula::Co(a) => eval_co(t, a, cfg),
        Formula::Pco(p) => eval_pco(t, p, cfg),
    }
}

/// Rowwise/default evaluation; infallible for the default configuration.
pub fn holds(t: &CausalMultiteam, f: &Formula) -> bool {
    eval(t, f, &EvalConfig::default()).expect("rowwise evaluation cannot fail")
}

/// Evaluates with tracing on and returns the visited subformulas, innermost first.
pub fn eval_traced(t: &CausalMultiteam, f: &Formula, cfg: &EvalConfig) -> Result<(bool, Vec<TraceEntry>)> {
    let cfg = EvalConfig { trace: true, ..*cfg };
    let mut ev = Evaluator::new(t, cfg);
    let verdict = match f {
        Formula::Co(a) => ev.co(t.team(), 0, a)?,
        Formula::Pco(p) => ev.pco(t.team(), 0, p)?,
    };
    Ok((verdict, ev.trace))
}

fn ct(laws: &FunctionComponent, removed: u64, team: &BTreeSet<Assignment>, alpha: &CoFormula) -> bool {
    if team.is_empty() {
        return true;
    }
    match alpha {
        CoFormula::Lit(l) => team.iter().all(|s| l.holds(&s.0)),
        CoFormula::And(a, b) => ct(laws, removed, team, a) && ct(laws, removed, team, b),
        CoFormula::Or(a, b) => {
            let rows: Vec<&Assignment> = team.iter().collect();
            let total = 3usize.pow(rows.len() as u32);
            (0..total).any(|mut code| {
                let mut left = BTreeSet::new();
                let mut right = BTreeSet::new();
                for s in &rows {
                    match code % 3 {
                        0 => {
                            left.insert((*s).clone());
                        }
                        1 => {
                            right.insert((*s).clone());
                        }
                        _ => {
                            left.insert((*s).clone());
                            right.insert((*s).clone());
                        }
                    }
                    code /= 3;
                }
                ct(laws, removed, &left, a) && ct(laws, removed, &right, b)
            })
        }
        CoFormula::Implies(a, b) => {
            let kept: BTreeSet<Assignment> = team
                .iter()
                .filter(|s| ct(laws, removed, &BTreeSet::from([(*s).clone()]), a))
                .cloned()
                .collect();
            ct(laws, removed, &kept, b)
        }
        CoFormula::Cf(iv, body) => match intervention_mask(iv) {
            None => true,
            Some(mask) => {
                let image: BTreeSet<Assignment> = team.iter().map(|s| laws.intervene_row(removed, s, iv)).collect();
                ct(laws, removed | mask, &image, body)
            }
        },
    }
}

/// Causal-team semantics on the support `Team(T)`: sets instead of multisets, and a
/// tensor whose two subteams may overlap.
pub fn eval_ct(t: &CausalMultiteam, alpha: &CoFormula, cfg: &EvalConfig) -> Result<bool> {
    let team: BTreeSet<Assignment> = t.team().support().cloned().collect();
    if team.len() as u64 > cfg.split_bound {
        return Err(Error::Guard(format!(
            "causal-team evaluation needs a support of at most {}, got {}",
            cfg.split_bound,
            team.len()
        )));
    }
    Ok(ct(t.laws(), 0, &team, alpha))
}
