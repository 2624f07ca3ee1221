//! Structured argumentation with reasoning by cases.
//!
//! A theory of defeasible rules and facts is turned into arguments
//! ([`arguments`]), an attack graph over base and hypothetical arguments
//! ([`attack`]), and Dung extensions ([`semantics`]).

pub mod arguments;
pub mod attack;
pub mod baselines;
pub mod error;
pub mod logic;
pub mod postulates;
pub mod semantics;
pub mod theory;

pub use arguments::{generate_arguments, ArgId, Arguments, GenConfig};
pub use attack::{build_saf, Origin, Saf};
pub use error::{Error, Result};
pub use logic::{entails, is_consistent, parse_formula, Formula};
pub use semantics::{Extension, Mode, Semantics};
pub use theory::{parse_theory, ArgTheory, DefeasibleRule};
