//! Finite unions of linear inequality systems over the probability simplex, and the
//! translations between them and formulas.
//!
//! Coordinates are the states of a signature in enumeration order, so `ε_i` is the
//! probability of the `i`-th state (1-based in printed inequalities).

mod discriminant;
mod extract;
mod ineq;
mod io;
mod synth;

pub use discriminant::{conic_determinant, conic_discriminant};
pub use extract::{extract, sum_ineq};
pub use ineq::{
    classify_ineq, eliminate_variable, grid_points, in_simplex, IneqClass, IneqCmp, IneqSystem, LinIneq, ProbabilitySet, Scalar,
};
pub use io::{set_from_json, set_to_json, IneqJson, ProbabilitySetJson, SystemJson};
pub use synth::{synth, synth_one};
