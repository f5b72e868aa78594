use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::ineq::{IneqCmp, IneqSystem, LinIneq, ProbabilitySet, Scalar};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IneqJson {
    pub coeffs: Vec<String>,
    pub cmp: String,
    pub b: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemJson {
    pub ineqs: Vec<IneqJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProbabilitySetJson {
    pub n: usize,
    pub systems: Vec<SystemJson>,
}

fn rational<T: Scalar>(s: &str) -> Result<Ratio<T>> {
    let s = s.trim();
    if let Ok(r) = Ratio::from_str(s) {
        return Ok(r);
    }
    // decimals such as "0.25"
    let (int, frac) = s.split_once('.').ok_or_else(|| Error::Invalid(format!("not a rational: `{s}`")))?;
    let digits = format!("{int}{frac}");
    let num = T::from_str(&digits).map_err(|_| Error::Invalid(format!("not a rational: `{s}`")))?;
    let den = (0..frac.len()).try_fold(T::one(), |acc, _| T::from_u8(10).map(|ten| acc * ten));
    let den = den.ok_or_else(|| Error::Invalid(format!("not a rational: `{s}`")))?;
    Ok(Ratio::new(num, den))
}

impl ProbabilitySetJson {
    pub fn to_set<T: Scalar>(&self) -> Result<ProbabilitySet<T>> {
        let mut systems = Vec::with_capacity(self.systems.len());
        for s in &self.systems {
            let mut ineqs = Vec::with_capacity(s.ineqs.len());
            for e in &s.ineqs {
                let cmp = IneqCmp::from_symbol(e.cmp.trim()).ok_or_else(|| Error::Invalid(format!("unknown comparison `{}`", e.cmp)))?;
                let coeffs = e.coeffs.iter().map(|c| rational(c)).collect::<Result<Vec<_>>>()?;
                ineqs.push(LinIneq::new(coeffs, cmp, rational(&e.b)?));
            }
            systems.push(IneqSystem::new(ineqs));
        }
        ProbabilitySet::new(self.n, systems)
    }

    pub fn from_set<T: Scalar>(set: &ProbabilitySet<T>) -> Self {
        ProbabilitySetJson {
            n: set.n,
            systems: set
                .systems
                .iter()
                .map(|s| SystemJson {
                    ineqs: s
                        .ineqs
                        .iter()
                        .map(|e| IneqJson {
                            coeffs: e.coeffs.iter().map(|c| c.to_string()).collect(),
                            cmp: e.cmp.symbol().into(),
                            b: e.bound.to_string(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

pub fn set_from_json<T: Scalar>(text: &str) -> Result<ProbabilitySet<T>> {
    let raw: ProbabilitySetJson = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("inequality file: {e}")))?;
    raw.to_set()
}

pub fn set_to_json<T: Scalar>(set: &ProbabilitySet<T>) -> serde_json::Value {
    serde_json::to_value(ProbabilitySetJson::from_set(set)).expect("plain data serializes")
}
