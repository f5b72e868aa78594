//! JSON model and signature files.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Assignment, CausalMultiteam, FunctionComponent, Multiteam, Signature, Value, VarId};

/// The bundled example table: six rows over `X`, `Y`, `Z` with `F_Y(X) = X+1` and
/// `F_Z(X,Y) = X+Y`.
pub const WORKED_EXAMPLE_JSON: &str = include_str!("../../data/worked_example.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SignatureJson {
    pub order: Vec<String>,
    pub ranges: BTreeMap<String, Vec<Value>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RowJson {
    pub values: BTreeMap<String, Value>,
    pub count: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntryJson {
    #[serde(rename = "in")]
    pub input: BTreeMap<String, Value>,
    pub out: Value,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FunctionJson {
    pub args: Vec<String>,
    pub table: Vec<EntryJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelJson {
    pub signature: SignatureJson,
    #[serde(default)]
    pub rows: Vec<RowJson>,
    #[serde(default)]
    pub functions: BTreeMap<String, FunctionJson>,
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Invalid(format!("malformed JSON: {e}"))
}

impl SignatureJson {
    pub fn to_signature(&self) -> Result<Signature> {
        let mut vars = Vec::new();
        for name in &self.order {
            let range = self
                .ranges
                .get(name)
                .ok_or_else(|| Error::Signature(format!("no range for `{name}`")))?;
            vars.push((name.clone(), range.clone()));
        }
        if let Some(extra) = self.ranges.keys().find(|k| !self.order.contains(k)) {
            return Err(Error::Signature(format!("range given for undeclared variable `{extra}`")));
        }
        Signature::new(vars)
    }

    pub fn from_signature(sig: &Signature) -> Self {
        SignatureJson {
            order: sig.var_names().to_vec(),
            ranges: (0..sig.num_vars())
                .map(|v| (sig.var_name(v).to_string(), sig.range(v).to_vec()))
                .collect(),
        }
    }
}

/// Reads a signature from either a bare signature object or a model file.
pub fn signature_from_json(text: &str) -> Result<Signature> {
    let raw: serde_json::Value = serde_json::from_str(text).map_err(json_err)?;
    let sig = raw.get("signature").cloned().unwrap_or(raw);
    let sj: SignatureJson = serde_json::from_value(sig).map_err(json_err)?;
    sj.to_signature()
}

fn value_index(sig: &Signature, var: &str, value: &Value) -> Result<(VarId, usize)> {
    let v = sig.var_index(var).ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
    let i = sig.value_index(v, value).ok_or_else(|| Error::UnknownValue {
        var: var.to_string(),
        value: value.to_string(),
    })?;
    Ok((v, i))
}

fn law_from_json(sig: &Signature, var: &str, fj: &FunctionJson) -> Result<(VarId, Vec<usize>)> {
    let v = sig.var_index(var).ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
    let mut args = Vec::new();
    for a in &fj.args {
        let u = sig.var_index(a).ok_or_else(|| Error::UnknownVariable(a.clone()))?;
        if u == v || args.contains(&u) {
            return Err(Error::Invalid(format!("bad argument list for `{var}`")));
        }
        args.push(u);
    }
    let radix: Vec<usize> = args.iter().map(|&u| sig.range_len(u)).collect();
    let size: usize = radix.iter().product();
    let mut small: Vec<Option<usize>> = vec![None; size];
    for entry in &fj.table {
        if entry.input.len() != args.len() {
            return Err(Error::Invalid(format!("table entry for `{var}` must list exactly its arguments")));
        }
        let mut idx = 0;
        for (k, &u) in args.iter().enumerate() {
            let val = entry
                .input
                .get(sig.var_name(u))
                .ok_or_else(|| Error::Invalid(format!("table entry for `{var}` misses `{}`", sig.var_name(u))))?;
            let (_, i) = value_index(sig, sig.var_name(u), val)?;
            idx = idx * radix[k] + i;
        }
        let (_, out) = value_index(sig, var, &entry.out)?;
        if small[idx].replace(out).is_some() {
            return Err(Error::Invalid(format!("duplicate table entry for `{var}`")));
        }
    }
    if small.iter().any(Option::is_none) {
        return Err(Error::Invalid(format!("table for `{var}` is not total")));
    }
    let small: Vec<usize> = small.into_iter().map(Option::unwrap).collect();
    let fc = FunctionComponent::empty().with_law(sig, v, |s| {
        let idx = args.iter().zip(&radix).fold(0, |acc, (&u, &r)| acc * r + s[u]);
        small[idx]
    })?;
    Ok((v, fc.law(v).expect("law was just built").table().to_vec()))
}

impl ModelJson {
    pub fn to_model(&self) -> Result<CausalMultiteam> {
        let sig = Arc::new(self.signature.to_signature()?);
        let mut tables = Vec::new();
        for (var, fj) in &self.functions {
            tables.push(law_from_json(&sig, var, fj)?);
        }
        let laws = FunctionComponent::new(&sig, tables)?;
        let mut team = Multiteam::new();
        for row in &self.rows {
            if row.count == 0 {
                return Err(Error::Invalid("row counts must be positive".into()));
            }
            let mut s = vec![usize::MAX; sig.num_vars()];
            for (var, val) in &row.values {
                let (v, i) = value_index(&sig, var, val)?;
                s[v] = i;
            }
            if let Some(v) = s.iter().position(|&x| x == usize::MAX) {
                return Err(Error::Invalid(format!("row misses a value for `{}`", sig.var_name(v))));
            }
            team.insert(Assignment(s), row.count);
        }
        CausalMultiteam::checked(sig, laws, team)
    }

    pub fn from_model(t: &CausalMultiteam) -> Self {
        let sig = t.signature();
        let rows = t
            .rows()
            .map(|(s, c)| RowJson {
                values: s
                    .0
                    .iter()
                    .enumerate()
                    .map(|(v, &x)| (sig.var_name(v).to_string(), sig.value(v, x).clone()))
                    .collect(),
                count: c,
            })
            .collect();
        let mut functions = BTreeMap::new();
        for law in t.laws().laws() {
            let parents: Vec<VarId> =
                (0..sig.num_vars()).filter(|u| law.parent_mask() & (1 << u) != 0).collect();
            let mut table = Vec::new();
            let size: usize = parents.iter().map(|&u| sig.range_len(u)).product();
            for mut idx in 0..size {
                let mut full = vec![0; sig.num_vars()];
                let mut input = BTreeMap::new();
                for &u in parents.iter().rev() {
                    full[u] = idx % sig.range_len(u);
                    idx /= sig.range_len(u);
                }
                for &u in &parents {
                    input.insert(sig.var_name(u).to_string(), sig.value(u, full[u]).clone());
                }
                let out = sig.value(law.var(), law.eval(&full)).clone();
                table.push(EntryJson { input, out });
            }
            functions.insert(
                sig.var_name(law.var()).to_string(),
                FunctionJson { args: parents.iter().map(|&u| sig.var_name(u).to_string()).collect(), table },
            );
        }
        ModelJson { signature: SignatureJson::from_signature(sig), rows, functions }
    }
}

pub fn model_from_json(text: &str) -> Result<CausalMultiteam> {
    let mj: ModelJson = serde_json::from_str(text).map_err(json_err)?;
    mj.to_model()
}

pub fn model_to_json(t: &CausalMultiteam) -> serde_json::Value {
    serde_json::to_value(ModelJson::from_model(t)).expect("model serializes")
}

pub fn worked_example() -> CausalMultiteam {
    model_from_json(WORKED_EXAMPLE_JSON).expect("bundled example is valid")
}
