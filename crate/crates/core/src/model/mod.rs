//! Signatures, multiteams, function components and causal multiteams.

mod causal;
mod enumerate;
pub mod io;
mod laws;
mod multiteam;
mod signature;

pub use causal::{intervention_mask, CausalMultiteam, ProbabilityVector, Violation};
pub use enumerate::{all_function_components, compatible_states, enumerate_models, Guard, LawMode, ModelIter, Multisets};
pub use laws::{table_len, FunctionComponent, Law};
pub use multiteam::Multiteam;
pub use signature::{Assignment, Signature, Value, VarId, MAX_VARS};
