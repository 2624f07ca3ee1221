mod common;

use std::collections::BTreeSet;

use casewise_core::baselines::{
    ddl_extensions, ddl_skeptical, gor_arguments, gor_closure, gor_saf, parse_ddl, DdlTheory,
    DEFAULT_GOR_BOUND,
};
use casewise_core::semantics::consequences;
use casewise_core::{Error, Formula, GenConfig, Mode, Semantics};
use common::{data, data_path, f};

fn ddl(name: &str) -> DdlTheory {
    parse_ddl(&std::fs::read_to_string(data_path(&format!("{name}.ddl"))).unwrap()).unwrap()
}

fn fingerprints(t: &DdlTheory) -> Vec<BTreeSet<String>> {
    ddl_extensions(t)
        .iter()
        .map(|e| e.fingerprint_strings())
        .collect()
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn has_rule(rules: &[casewise_core::DefeasibleRule], body: &str, head: &str) -> bool {
    rules
        .iter()
        .any(|r| r.body == [f(body)] && r.head == f(head))
}

#[test]
fn ddl_disjunctive_fact() {
    let t = ddl("disjunctive_fact");
    assert_eq!(fingerprints(&t), [set(&["p", "r"]), set(&["q", "r"])]);
    assert!(ddl_skeptical(&t, &f("r")));
    assert!(!ddl_skeptical(&t, &f("p")));
}

#[test]
fn ddl_broken_arm() {
    let t = ddl("broken_arm");
    assert_eq!(fingerprints(&t), [set(&["!r", "l", "w"]), set(&["r", "w"])]);
    assert!(!ddl_skeptical(&t, &f("l")));
    assert!(ddl_skeptical(&t, &f("w")));
}

#[test]
fn ddl_cases_attack_both_translations() {
    let expected = [
        set(&["!s", "p", "q", "t"]),
        set(&["!s", "p", "r", "t", "v"]),
        set(&["p", "q", "s", "t", "v"]),
    ];
    for name in ["cases_attack", "cases_attack_alt"] {
        let t = ddl(name);
        assert_eq!(fingerprints(&t), expected, "{name}");
        assert!(!ddl_skeptical(&t, &f("v")));
        assert!(!ddl_skeptical(&t, &f("!s")));
    }
}

#[test]
fn ddl_edge_cases() {
    assert_eq!(ddl_extensions(&parse_ddl("").unwrap()).len(), 1);
    let blocked = parse_ddl("fact p\n: !p / q\n").unwrap();
    assert_eq!(fingerprints(&blocked), [set(&["p"])]);
    let open = parse_ddl("fact p\n: q / q\n").unwrap();
    assert_eq!(fingerprints(&open), [set(&["p", "q"])]);
    let t = parse_ddl(": q / !q\n").unwrap();
    assert!(ddl_extensions(&t).is_empty());
    let t = parse_ddl(" : p & q / p ; q # normal enough\n").unwrap();
    assert_eq!(t.defaults[0].prerequisite, Formula::Top);
    assert_eq!(t.defaults[0].to_string(), "T : p & q / p ; q");
}

#[test]
fn ddl_parse_errors_carry_lines() {
    for (text, line) in [
        ("fact p\np q\n", 2),
        ("p : q\n", 1),
        ("\n\np : q / \n", 3),
        ("fact \n", 1),
    ] {
        match parse_ddl(text) {
            Err(Error::Syntax(e)) => assert_eq!(e.line, line, "{text:?}: {e}"),
            other => panic!("{text:?}: {other:?}"),
        }
    }
}

#[test]
fn or_closure_of_shared_heads() {
    let closed = gor_closure(data("disjunctive_fact").defeasible(), DEFAULT_GOR_BOUND);
    // Disjunctions keep growing, so the closure only stops at the bound.
    assert!(closed.truncated);
    assert!(has_rule(&closed.rules, "p | q", "r"));
    assert!(has_rule(&closed.rules, "p | q", "r | r"));
}

#[test]
fn gor_closure_of_split_chains() {
    let closed = gor_closure(data("split_chains").defeasible(), DEFAULT_GOR_BOUND);
    assert!(has_rule(&closed.rules, "q | r", "s | u"));
    assert!(has_rule(&closed.rules, "s | u", "v | v"));
    assert!(has_rule(&closed.rules, "s | u", "v"));
    assert!(gor_closure(&[], DEFAULT_GOR_BOUND).rules.is_empty());
    let small = gor_closure(data("split_chains").defeasible(), 3);
    assert!(small.truncated);
    assert_eq!(small.rules.len(), 5 + 3);
}

#[test]
fn gor_pipeline_derives_v() {
    let cfg = GenConfig::default();
    let args = gor_arguments(&data("split_chains"), &cfg, DEFAULT_GOR_BOUND);
    assert!(args
        .find("<<<<<p> => q | r> => s | u> => v | v> -> v>")
        .is_some());
    assert!(args.extensions().is_empty());

    let at = data("cases_attack");
    let saf = gor_saf(&at, &cfg, DEFAULT_GOR_BOUND);
    let a3 = saf
        .find("<<<<<p> => q | r> => s | v> => v | v> -> v>")
        .unwrap();
    assert!(saf.attackers(a3).is_empty());
    assert!(saf
        .find("<<<<p> => q | r> => s | v>, <<t> => !s> -> v>")
        .is_some());
    for sem in [
        Semantics::Grounded,
        Semantics::Complete,
        Semantics::Preferred,
    ] {
        assert!(
            consequences(&saf, sem, Mode::Intersect)
                .unwrap()
                .contains(&f("v")),
            "{sem}"
        );
    }
}
