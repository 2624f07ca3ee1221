//! Propositional formulas, their concrete syntax, and classical entailment.

mod formula;
mod models;
mod oracle;
mod parse;
mod sat;

pub use formula::{negation_complement, top_disjuncts, Formula};
pub use models::{ModelSet, TruthTable, MAX_TABLE_ATOMS};
pub use oracle::{Meaning, Oracle};
pub use parse::parse_formula;
pub use sat::{entails, is_consistent, satisfiable};
