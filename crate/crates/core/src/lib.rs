//! Causal multiteam semantics for probabilistic and causal team logics.
//!
//! The crate covers models ([`model`]), formulas ([`syntax`]), evaluation
//! ([`semantics`]), syntactic rewrites ([`rewrite`]), the correspondence between
//! formulas and finite unions of linear inequality systems ([`geometry`]), derived
//! atoms ([`atoms`]) and brute-force equivalence checking ([`oracle`]).

pub mod atoms;
pub mod corpus;
pub mod error;
pub mod geometry;
pub mod model;
pub mod oracle;
pub mod rewrite;
pub mod semantics;
pub mod syntax;

pub use error::{Error, Result};

pub type Rational = num_rational::BigRational;
pub type Ineq = geometry::LinIneq<num_bigint::BigInt>;
pub type System = geometry::IneqSystem<num_bigint::BigInt>;
pub type ProbSet = geometry::ProbabilitySet<num_bigint::BigInt>;
