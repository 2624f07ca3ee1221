//! The two comparison formalisms: disjunctive default logic and argument
//! construction over rules closed under the generalized OR rule.

pub mod ddl;
pub mod gor;

pub use ddl::{
    ddl_extensions, ddl_skeptical, parse_ddl, DdlExtension, DdlTheory, DisjunctiveDefault,
};
pub use gor::{gor_arguments, gor_closure, gor_saf, gor_theory, GorClosure, DEFAULT_GOR_BOUND};
