use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::model::laws::FunctionComponent;
use crate::model::multiteam::Multiteam;
use crate::model::signature::{Assignment, Signature, VarId};
use crate::semantics::row_sat;
use crate::syntax::CoFormula;
use crate::Rational;

/// Probability vector `p̄_T`, indexed by the signature's state enumeration.
pub type ProbabilityVector = Vec<Rational>;

/// A reason a causal multiteam is not valid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Range { row: String },
    ConstantLaw { var: String },
    Cycle { vars: Vec<String> },
    Compatibility { row: String, var: String },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Range { row } => write!(f, "row {row} is out of range"),
            Violation::ConstantLaw { var } => write!(f, "law for `{var}` is constant"),
            Violation::Cycle { vars } => write!(f, "parent graph has a cycle through {}", vars.join(", ")),
            Violation::Compatibility { row, var } => {
                write!(f, "row {row} is not compatible with the law for `{var}`")
            }
        }
    }
}

/// A multiteam together with a function component, the pair `(T⁻, F)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CausalMultiteam {
    sig: Arc<Signature>,
    laws: FunctionComponent,
    team: Multiteam,
}

impl CausalMultiteam {
    /// Pairs the parts without checking them; see [`CausalMultiteam::validate`].
    pub fn new(sig: Arc<Signature>, laws: FunctionComponent, team: Multiteam) -> Self {
        CausalMultiteam { sig, laws, team }
    }

    /// Pairs the parts and rejects them with the list of violations if invalid.
    pub fn checked(sig: Arc<Signature>, laws: FunctionComponent, team: Multiteam) -> Result<Self> {
        let t = Self::new(sig, laws, team);
        let violations = t.validate();
        if violations.is_empty() {
            Ok(t)
        } else {
            Err(Error::InvalidModel(violations.iter().map(|v| v.to_string()).collect()))
        }
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn laws(&self) -> &FunctionComponent {
        &self.laws
    }

    pub fn team(&self) -> &Multiteam {
        &self.team
    }

    pub fn size(&self) -> u64 {
        self.team.size()
    }

    pub fn is_empty(&self) -> bool {
        self.team.is_empty()
    }

    pub fn with_team(&self, team: Multiteam) -> Self {
        CausalMultiteam { sig: self.sig.clone(), laws: self.laws.clone(), team }
    }

    pub fn scale(&self, k: u64) -> Self {
        self.with_team(self.team.scale(k))
    }

    pub fn validate(&self) -> Vec<Violation> {
        let sig = &self.sig;
        let mut out = Vec::new();
        for s in self.team.support() {
            if !sig.check_assignment(s) {
                out.push(Violation::Range { row: format!("{:?}", s.0) });
            }
        }
        for law in self.laws.laws() {
            if law.is_constant() {
                out.push(Violation::ConstantLaw { var: sig.var_name(law.var()).to_string() });
            }
        }
        let cyc = self.laws.cyclic_vars();
        if !cyc.is_empty() {
            out.push(Violation::Cycle { vars: cyc.iter().map(|&v| sig.var_name(v).to_string()).collect() });
        }
        if !out.is_empty() {
            return out;
        }
        for s in self.team.support() {
            for law in self.laws.laws() {
                if law.eval(&s.0) != s.0[law.var()] {
                    out.push(Violation::Compatibility {
                        row: sig.format_assignment(s),
                        var: sig.var_name(law.var()).to_string(),
                    });
                }
            }
        }
        out
    }

    /// `T^α`: the rows whose singleton satisfies `alpha`.
    pub fn observe(&self, alpha: &CoFormula) -> Self {
        self.with_team(self.team.filter(|s| row_sat(&self.laws, 0, s, alpha)))
    }

    /// `T_{X=x}`: rows mapped through the intervention, laws restricted to `V∖X`.
    pub fn intervene(&self, iv: &[(VarId, usize)]) -> Result<Self> {
        let removed = intervention_mask(iv).ok_or(Error::InconsistentIntervention)?;
        let team = self.team.map(|s| self.laws.intervene_row(0, s, iv));
        Ok(CausalMultiteam { sig: self.sig.clone(), laws: self.laws.restrict(removed), team })
    }

    /// `P_T(α)` as an exact rational.
    pub fn probability(&self, alpha: &CoFormula) -> Result<Rational> {
        if self.is_empty() {
            return Err(Error::EmptyMultiteam);
        }
        let hits: u64 = self
            .team
            .iter()
            .filter(|(s, _)| row_sat(&self.laws, 0, s, alpha))
            .map(|(_, c)| c)
            .sum();
        Ok(Rational::new(BigInt::from(hits), BigInt::from(self.size())))
    }

    pub fn probability_vector(&self) -> Result<ProbabilityVector> {
        if self.is_empty() {
            return Err(Error::EmptyMultiteam);
        }
        let total = BigInt::from(self.size());
        let mut out = vec![Rational::from_integer(BigInt::from(0)); self.sig.num_states()];
        for (s, c) in self.team.iter() {
            out[self.sig.state_index(s)] = Rational::new(BigInt::from(c), total.clone());
        }
        Ok(out)
    }

    /// `S ∼ T`: equal laws and equal probability vectors, or both empty.
    pub fn is_rescaling(&self, other: &CausalMultiteam) -> Result<bool> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch);
        }
        if self.laws != other.laws {
            return Ok(false);
        }
        match (self.is_empty(), other.is_empty()) {
            (true, true) => Ok(true),
            (false, false) => Ok(self.probability_vector()? == other.probability_vector()?),
            _ => Ok(false),
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = (&Assignment, u64)> {
        self.team.iter()
    }
}

/// Bitmask of intervened variables, or `None` if some variable gets two values.
pub fn intervention_mask(iv: &[(VarId, usize)]) -> Option<u64> {
    let mut mask = 0u64;
    for (i, &(v, x)) in iv.iter().enumerate() {
        if iv[..i].iter().any(|&(u, y)| u == v && y != x) {
            return None;
        }
        mask |= 1 << v;
    }
    Some(mask)
}
