//! Argument construction: premises, strict and defeasible steps, and
//! reasoning-by-cases steps over extended theories.

mod derived;
mod generate;
mod store;

pub use derived::{dagger, hat, sub_prime, validate_argument};
pub use generate::{
    candidate_conclusions, generate_arguments, generate_with_candidates, Arguments, GenConfig,
    Generation,
};
pub use store::{ArgId, ArgNode, ArgStore, Step, StepKind};
