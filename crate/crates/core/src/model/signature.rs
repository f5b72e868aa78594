use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a variable in its signature's order.
pub type VarId = usize;

/// Upper bound on the number of variables; variable sets are packed into a `u64`.
pub const MAX_VARS: usize = 64;

const RESERVED: &[&str] = &["and", "or", "gor", "Pr", "dep", "indep", "mi"];

/// A range value as it appears in model files.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Str(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Str(s) => f.write_str(s),
        }
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_string())
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A total assignment, stored as one value index per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(pub Vec<usize>);

impl Assignment {
    pub fn get(&self, v: VarId) -> usize {
        self.0[v]
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }
}

/// Ordered variables with ordered finite ranges.
///
/// The state enumeration `s_1, ..., s_n` is lexicographic: the first variable is the
/// most significant digit and values follow their declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    names: Vec<String>,
    ranges: Vec<Vec<Value>>,
    strides: Vec<usize>,
    num_states: usize,
}

impl Signature {
    pub fn new<S: Into<String>>(vars: Vec<(S, Vec<Value>)>) -> Result<Self> {
        let mut names = Vec::with_capacity(vars.len());
        let mut ranges = Vec::with_capacity(vars.len());
        for (name, range) in vars {
            let name = name.into();
            if !is_identifier(&name) || RESERVED.contains(&name.as_str()) {
                return Err(Error::Signature(format!("`{name}` is not a usable variable name")));
            }
            if names.contains(&name) {
                return Err(Error::Signature(format!("duplicate variable `{name}`")));
            }
            if range.is_empty() {
                return Err(Error::Signature(format!("range of `{name}` is empty")));
            }
            for (i, v) in range.iter().enumerate() {
                if let Value::Str(s) = v {
                    if !is_identifier(s) {
                        return Err(Error::Signature(format!(
                            "value `{s}` of `{name}` must be an integer or identifier"
                        )));
                    }
                }
                if range[..i].contains(v) {
                    return Err(Error::Signature(format!("duplicate value `{v}` in range of `{name}`")));
                }
            }
            names.push(name);
            ranges.push(range);
        }
        if names.len() > MAX_VARS {
            return Err(Error::Signature(format!("at most {MAX_VARS} variables are supported")));
        }
        let mut strides = vec![0; ranges.len()];
        let mut acc: usize = 1;
        for v in (0..ranges.len()).rev() {
            strides[v] = acc;
            acc = acc
                .checked_mul(ranges[v].len())
                .ok_or_else(|| Error::Signature("state space too large".into()))?;
        }
        Ok(Signature { names, ranges, strides, num_states: acc })
    }

    /// Variables with range `{0, 1}`.
    pub fn binary(names: &[&str]) -> Result<Self> {
        Self::new(
            names
                .iter()
                .map(|n| (n.to_string(), vec![Value::Int(0), Value::Int(1)]))
                .collect(),
        )
    }

    /// Variables with integer ranges.
    pub fn int_ranges(vars: &[(&str, &[i64])]) -> Result<Self> {
        Self::new(
            vars.iter()
                .map(|(n, r)| (n.to_string(), r.iter().map(|&v| Value::Int(v)).collect()))
                .collect(),
        )
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn var_name(&self, v: VarId) -> &str {
        &self.names[v]
    }

    pub fn var_names(&self) -> &[String] {
        &self.names
    }

    pub fn var_index(&self, name: &str) -> Option<VarId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn range(&self, v: VarId) -> &[Value] {
        &self.ranges[v]
    }

    pub fn range_len(&self, v: VarId) -> usize {
        self.ranges[v].len()
    }

    pub fn value(&self, v: VarId, idx: usize) -> &Value {
        &self.ranges[v][idx]
    }

    pub fn value_index(&self, v: VarId, value: &Value) -> Option<usize> {
        self.ranges[v].iter().position(|x| x == value)
    }

    /// Looks a value up by its printed form.
    pub fn value_index_text(&self, v: VarId, text: &str) -> Option<usize> {
        self.ranges[v].iter().position(|x| x.to_string() == text)
    }

    pub fn lookup(&self, var: &str, value: &str) -> Result<(VarId, usize)> {
        let v = self.var_index(var).ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
        let i = self.value_index_text(v, value).ok_or_else(|| Error::UnknownValue {
            var: var.to_string(),
            value: value.to_string(),
        })?;
        Ok((v, i))
    }

    /// `n = |B_σ|`.
    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn state_index(&self, s: &Assignment) -> usize {
        s.0.iter().zip(&self.strides).map(|(x, st)| x * st).sum()
    }

    pub fn state(&self, mut idx: usize) -> Assignment {
        let mut out = vec![0; self.num_vars()];
        for (slot, &st) in out.iter_mut().zip(&self.strides) {
            *slot = idx / st;
            idx %= st;
        }
        Assignment(out)
    }

    pub fn enumerate_assignments(&self) -> impl Iterator<Item = Assignment> + '_ {
        (0..self.num_states).map(move |i| self.state(i))
    }

    pub fn check_assignment(&self, s: &Assignment) -> bool {
        s.0.len() == self.num_vars() && s.0.iter().enumerate().all(|(v, &x)| x < self.range_len(v))
    }

    pub fn format_assignment(&self, s: &Assignment) -> String {
        let parts: Vec<String> = s
            .0
            .iter()
            .enumerate()
            .map(|(v, &x)| format!("{}={}", self.names[v], self.ranges[v][x]))
            .collect();
        format!("({})", parts.join(","))
    }
}
