mod common;

use casewise_core::arguments::candidate_conclusions;
use casewise_core::postulates::random_theory;
use casewise_core::theory::{print_theory, validate};
use casewise_core::{parse_theory, Error, Formula};
use common::{data, f};
use proptest::prelude::*;

#[test]
fn shipped_theories_are_valid() {
    for name in [
        "rbc_chains",
        "self_defeat",
        "cases_attack",
        "cases_attack_not_r",
        "cases_mutual",
        "disjunctive_fact",
        "broken_arm",
        "split_chains",
    ] {
        let report = validate(&data(name));
        assert!(report.valid, "{name}: {:?}", report.errors);
    }
}

#[test]
fn cases_attack_shape() {
    let at = data("cases_attack");
    assert_eq!(at.facts(), &[f("p"), f("t")]);
    let rules: Vec<String> = at
        .defeasible()
        .iter()
        .map(|r| format!("{}: {r}", r.id))
        .collect();
    assert_eq!(
        rules,
        [
            "d1: p => q | r",
            "d2: q => s",
            "d3: s => v",
            "d4: r => v",
            "d5: t => !s"
        ]
    );
}

#[test]
fn extension_keeps_base_facts() {
    let at = data("cases_attack");
    let q = at.extend(f("q")).unwrap();
    assert_eq!(q.effective_facts(), vec![f("p"), f("t"), f("q")]);
    assert!(at.is_base());
    assert!(!q.is_base());
    assert_eq!(q.base(), at);
    assert!(matches!(at.extend(f("p")), Err(Error::HypothesisIsFact(_))));
    let qr = q.extend(f("r")).unwrap();
    assert_eq!(qr.hypotheses(), &[f("q"), f("r")]);
}

#[test]
fn union_renames_clashing_ids() {
    let a = parse_theory("facts:\n p\ndefeasible:\n p => q\n").unwrap();
    let b = parse_theory("facts:\n x\ndefeasible:\n x => y\n").unwrap();
    let u = a.union(&b);
    let ids: Vec<&str> = u.defeasible().iter().map(|r| &*r.id).collect();
    assert_eq!(ids, ["d1", "d1'"]);
    assert_eq!(u.facts(), &[f("p"), f("x")]);
}

#[test]
fn candidate_examples() {
    let arm = data("broken_arm");
    let c = candidate_conclusions(&arm);
    for s in [
        "l", "r", "l | r", "w", "!r", "!l", "!w", "!(l | r)", "!!r", "T",
    ] {
        assert!(c.contains(&f(s)), "missing {s}");
    }
    let single = parse_theory("facts:\n p\n").unwrap();
    assert_eq!(
        candidate_conclusions(&single),
        vec![Formula::Top, f("p"), f("!p")]
    );
    let cases = candidate_conclusions(&data("cases_attack"));
    assert!(cases.contains(&f("!s")) && cases.contains(&f("v")));
}

proptest! {
    #[test]
    fn printed_theories_parse_back(seed in 0u64..10_000, atoms in 1usize..=6, rules in 0usize..=6) {
        let at = random_theory(seed, atoms, rules, 0.3);
        prop_assert_eq!(parse_theory(&print_theory(&at)).unwrap(), at);
    }
}
