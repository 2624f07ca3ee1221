#![allow(dead_code)]

use casewise_core::{parse_formula, parse_theory, ArgTheory, Formula, GenConfig};

pub fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

pub fn data_path(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn data(name: &str) -> ArgTheory {
    parse_theory(&std::fs::read_to_string(data_path(&format!("{name}.theory"))).unwrap()).unwrap()
}

/// Budgets of the random corpus.
pub fn corpus_config() -> GenConfig {
    GenConfig {
        max_rule_applications: 6,
        max_arguments: 3000,
        ..GenConfig::default()
    }
}
