use std::collections::BTreeSet;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, One, Signed, Zero};

use crate::error::{Error, Result};

/// Integer type underlying the exact rational scalars `Ratio<T>`.
pub trait Scalar:
    Integer + Signed + Clone + Hash + fmt::Debug + fmt::Display + FromStr + FromPrimitive + Into<BigInt> + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Integer + Signed + Clone + Hash + fmt::Debug + fmt::Display + FromStr + FromPrimitive + Into<BigInt> + Send + Sync + 'static
{
}

pub(crate) fn to_big<T: Scalar>(r: &Ratio<T>) -> Ratio<BigInt> {
    Ratio::new(r.numer().clone().into(), r.denom().clone().into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IneqCmp {
    Le,
    Ge,
    Lt,
    Gt,
}

impl IneqCmp {
    pub fn holds<T: Ord>(self, a: &T, b: &T) -> bool {
        match self {
            IneqCmp::Le => a <= b,
            IneqCmp::Ge => a >= b,
            IneqCmp::Lt => a < b,
            IneqCmp::Gt => a > b,
        }
    }

    /// The comparison defining the complement.
    pub fn negate(self) -> Self {
        match self {
            IneqCmp::Le => IneqCmp::Gt,
            IneqCmp::Ge => IneqCmp::Lt,
            IneqCmp::Lt => IneqCmp::Ge,
            IneqCmp::Gt => IneqCmp::Le,
        }
    }

    /// The comparison after multiplying both sides by `-1`.
    pub fn mirror(self) -> Self {
        match self {
            IneqCmp::Le => IneqCmp::Ge,
            IneqCmp::Ge => IneqCmp::Le,
            IneqCmp::Lt => IneqCmp::Gt,
            IneqCmp::Gt => IneqCmp::Lt,
        }
    }

    pub fn is_strict(self) -> bool {
        matches!(self, IneqCmp::Lt | IneqCmp::Gt)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            IneqCmp::Le => "<=",
            IneqCmp::Ge => ">=",
            IneqCmp::Lt => "<",
            IneqCmp::Gt => ">",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s {
            "<=" => Some(IneqCmp::Le),
            ">=" => Some(IneqCmp::Ge),
            "<" => Some(IneqCmp::Lt),
            ">" => Some(IneqCmp::Gt),
            _ => None,
        }
    }
}

/// Least of the nested inequality classes containing a canonical inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IneqClass {
    Monic,
    SignedMonic,
    SignedBinary,
    General,
}

impl IneqClass {
    pub fn name(self) -> &'static str {
        match self {
            IneqClass::Monic => "MONIC",
            IneqClass::SignedMonic => "SIGNED_MONIC",
            IneqClass::SignedBinary => "SIGNED_BINARY",
            IneqClass::General => "GENERAL",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "monic" => Some(IneqClass::Monic),
            "signed-monic" => Some(IneqClass::SignedMonic),
            "signed-binary" => Some(IneqClass::SignedBinary),
            "general" => Some(IneqClass::General),
            _ => None,
        }
    }
}

impl fmt::Display for IneqClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `a₁ε₁ + … + aₙεₙ ◁ b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinIneq<T: Scalar> {
    pub coeffs: Vec<Ratio<T>>,
    pub cmp: IneqCmp,
    pub bound: Ratio<T>,
}

impl<T: Scalar> LinIneq<T> {
    pub fn new(coeffs: Vec<Ratio<T>>, cmp: IneqCmp, bound: Ratio<T>) -> Self {
        LinIneq { coeffs, cmp, bound }
    }

    /// Integer coefficients given as plain integers.
    pub fn from_ints(coeffs: &[i64], cmp: IneqCmp, bound: Ratio<T>) -> Self {
        let coeffs = coeffs.iter().map(|&a| Ratio::from_integer(T::from_i64(a).expect("coefficient fits the scalar"))).collect();
        LinIneq { coeffs, cmp, bound }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Integer coefficients with gcd 1; the bound is scaled alongside and stays rational.
    pub fn canonical(&self) -> Self {
        let lcm = self.coeffs.iter().fold(T::one(), |acc, a| acc.lcm(a.denom()));
        let ints: Vec<T> = self.coeffs.iter().map(|a| (a * Ratio::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(T::zero(), |acc, a| acc.gcd(a));
        let g = if g.is_zero() { T::one() } else { g };
        LinIneq {
            coeffs: ints.into_iter().map(|a| Ratio::from_integer(a / g.clone())).collect(),
            cmp: self.cmp,
            bound: &self.bound * Ratio::new(lcm, g),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self == &self.canonical()
    }

    pub fn lhs(&self, p: &[Ratio<T>]) -> Ratio<T> {
        self.coeffs.iter().zip(p).fold(Ratio::zero(), |acc, (a, x)| acc + a * x)
    }

    pub fn holds(&self, p: &[Ratio<T>]) -> bool {
        self.cmp.holds(&self.lhs(p), &self.bound)
    }

    pub fn negate(&self) -> Self {
        LinIneq { coeffs: self.coeffs.clone(), cmp: self.cmp.negate(), bound: self.bound.clone() }
    }

    pub fn class(&self) -> IneqClass {
        classify_ineq(self)
    }
}

impl<T: Scalar> fmt::Display for LinIneq<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            match (first, a.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            let mag = a.abs();
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "e{}", i + 1)?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " {} {}", self.cmp.symbol(), self.bound)
    }
}

/// Class of the canonical form of `e`.
pub fn classify_ineq<T: Scalar>(e: &LinIneq<T>) -> IneqClass {
    let c = e.canonical();
    let nonzero: Vec<&Ratio<T>> = c.coeffs.iter().filter(|a| !a.is_zero()).collect();
    if nonzero.iter().all(|a| a.is_one()) || nonzero.iter().all(|a| (-*a).is_one()) {
        return IneqClass::Monic;
    }
    if nonzero.iter().all(|a| a.abs().is_one()) {
        return IneqClass::SignedMonic;
    }
    let pos: BTreeSet<&Ratio<T>> = nonzero.iter().copied().filter(|a| a.is_positive()).collect();
    let neg: BTreeSet<&Ratio<T>> = nonzero.iter().copied().filter(|a| a.is_negative()).collect();
    if pos.len() <= 1 && neg.len() <= 1 {
        IneqClass::SignedBinary
    } else {
        IneqClass::General
    }
}

/// Substitutes `ε_idx = 1 − Σ_{m≠idx} ε_m`; the result defines the same subset of the simplex.
pub fn eliminate_variable<T: Scalar>(e: &LinIneq<T>, idx: usize) -> Result<LinIneq<T>> {
    if idx >= e.dim() {
        return Err(Error::Dimension { expected: e.dim(), found: idx + 1 });
    }
    let pivot = e.coeffs[idx].clone();
    if pivot.is_zero() {
        return Err(Error::ZeroCoefficient(idx));
    }
    let coeffs = e.coeffs.iter().enumerate().map(|(m, a)| if m == idx { Ratio::zero() } else { a - &pivot }).collect();
    Ok(LinIneq::new(coeffs, e.cmp, &e.bound - &pivot).canonical())
}

/// Conjunction of inequalities; the empty system is the whole simplex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IneqSystem<T: Scalar> {
    pub ineqs: Vec<LinIneq<T>>,
}

impl<T: Scalar> IneqSystem<T> {
    pub fn new(ineqs: Vec<LinIneq<T>>) -> Self {
        IneqSystem { ineqs }
    }

    pub fn whole() -> Self {
        IneqSystem { ineqs: Vec::new() }
    }

    pub fn holds(&self, p: &[Ratio<T>]) -> bool {
        self.ineqs.iter().all(|e| e.holds(p))
    }

    pub fn class(&self) -> IneqClass {
        self.ineqs.iter().map(classify_ineq).max().unwrap_or(IneqClass::Monic)
    }
}

/// Finite union of inequality systems, read inside the simplex `Δ^{n−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProbabilitySet<T: Scalar> {
    pub n: usize,
    pub systems: Vec<IneqSystem<T>>,
}

impl<T: Scalar> ProbabilitySet<T> {
    pub fn new(n: usize, systems: Vec<IneqSystem<T>>) -> Result<Self> {
        for e in systems.iter().flat_map(|s| &s.ineqs) {
            if e.dim() != n {
                return Err(Error::Dimension { expected: n, found: e.dim() });
            }
        }
        Ok(ProbabilitySet { n, systems })
    }

    pub fn empty(n: usize) -> Self {
        ProbabilitySet { n, systems: Vec::new() }
    }

    pub fn whole(n: usize) -> Self {
        ProbabilitySet { n, systems: vec![IneqSystem::whole()] }
    }

    pub fn single(e: LinIneq<T>) -> Self {
        ProbabilitySet { n: e.dim(), systems: vec![IneqSystem::new(vec![e])] }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::Dimension { expected: self.n, found: other.n })
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut systems = self.systems.clone();
        systems.extend(other.systems.iter().cloned());
        Ok(ProbabilitySet { n: self.n, systems })
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut systems = Vec::with_capacity(self.systems.len() * other.systems.len());
        for a in &self.systems {
            for b in &other.systems {
                let mut ineqs = a.ineqs.clone();
                ineqs.extend(b.ineqs.iter().cloned());
                systems.push(IneqSystem::new(ineqs));
            }
        }
        Ok(ProbabilitySet { n: self.n, systems })
    }

    /// Complement in the simplex; each system becomes a union of single flipped inequalities.
    pub fn complement(&self) -> Self {
        self.systems.iter().fold(ProbabilitySet::whole(self.n), |acc, s| {
            let flipped = ProbabilitySet {
                n: self.n,
                systems: s.ineqs.iter().map(|e| IneqSystem::new(vec![e.negate()])).collect(),
            };
            acc.intersect(&flipped).expect("same dimension")
        })
    }

    /// Exact membership; points off the simplex are never members.
    pub fn member(&self, p: &[Ratio<T>]) -> Result<bool> {
        if p.len() != self.n {
            return Err(Error::Dimension { expected: self.n, found: p.len() });
        }
        if !in_simplex(p) {
            return Ok(false);
        }
        Ok(self.systems.iter().any(|s| s.holds(p)))
    }

    pub fn class(&self) -> IneqClass {
        self.systems.iter().map(IneqSystem::class).max().unwrap_or(IneqClass::Monic)
    }

    pub fn canonical(&self) -> Self {
        ProbabilitySet {
            n: self.n,
            systems: self.systems.iter().map(|s| IneqSystem::new(s.ineqs.iter().map(LinIneq::canonical).collect())).collect(),
        }
    }

    pub fn to_big(&self) -> ProbabilitySet<BigInt> {
        let ineq = |e: &LinIneq<T>| LinIneq::new(e.coeffs.iter().map(to_big).collect(), e.cmp, to_big(&e.bound));
        ProbabilitySet {
            n: self.n,
            systems: self.systems.iter().map(|s| IneqSystem::new(s.ineqs.iter().map(ineq).collect())).collect(),
        }
    }

    /// Drops systems with no point on the grid of denominators up to `max_den`.
    ///
    /// Heuristic: a system can be nonempty yet miss every grid point.
    pub fn prune_empty_branches(&self, max_den: u64) -> Self {
        let grid = grid_points::<T>(self.n, max_den);
        ProbabilitySet {
            n: self.n,
            systems: self.systems.iter().filter(|s| grid.iter().any(|p| s.holds(p))).cloned().collect(),
        }
    }
}

pub fn in_simplex<T: Scalar>(p: &[Ratio<T>]) -> bool {
    p.iter().all(|x| !x.is_negative()) && p.iter().fold(Ratio::zero(), |acc: Ratio<T>, x| acc + x).is_one()
}

/// Every point of `Δ^{n−1}` whose coordinates have denominators at most `max_den`, sorted.
///
/// These are exactly the probability vectors of nonempty multiteams of size at most `max_den`.
pub fn grid_points<T: Scalar>(n: usize, max_den: u64) -> Vec<Vec<Ratio<T>>> {
    let mut out = BTreeSet::new();
    if n == 0 {
        return Vec::new();
    }
    for d in 1..=max_den {
        let den = T::from_u64(d).expect("denominator fits the scalar");
        let mut parts = vec![0u64; n];
        compositions(d, 0, &mut parts, &mut |c| {
            out.insert(c.iter().map(|&k| Ratio::new(T::from_u64(k).expect("fits"), den.clone())).collect::<Vec<_>>());
        });
    }
    out.into_iter().collect()
}

fn compositions(left: u64, i: usize, parts: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
    if i + 1 == parts.len() {
        parts[i] = left;
        f(parts);
        return;
    }
    for k in 0..=left {
        parts[i] = k;
        compositions(left - k, i + 1, parts, f);
    }
}
