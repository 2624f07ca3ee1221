mod common;

use casewise_core::attack::{EdgeKind, Origin};
use casewise_core::logic::negation_complement;
use casewise_core::postulates::random_theory;
use casewise_core::{build_saf, GenConfig, Saf};
use common::{corpus_config, data};
use proptest::prelude::*;

const ONE_WAY_A1: &str = "<<<p> => q | r>, [<<<q> => s> => v>], [<<r> => v>] ~> v>";
const ONE_WAY_A2: &str = "<<t> => !s>";
const MUTUAL_A1: &str = "<<<p> => q | r>, [<<<<q> => s1> => s2> => v>], [<<r> => v>] ~> v>";

fn node(saf: &Saf, notation: &str) -> usize {
    saf.find(notation)
        .unwrap_or_else(|| panic!("no node {notation}"))
}

/// Attack relation recomputed pairwise from the definitions.
fn oracle_attacks(saf: &Saf, a: usize, t: usize) -> bool {
    let store = saf.arguments().store();
    let target = store.get(saf.nodes()[t].arg);
    let mut reach: Vec<_> = target.sub().to_vec();
    for (c, _) in target.hsub() {
        reach.extend_from_slice(store.get(*c).sub());
    }
    reach.into_iter().any(|c| {
        let Some(cn) = saf.node(c) else { return false };
        let same_context = match &saf.nodes()[a].origin {
            Origin::Base => true,
            o => *o == saf.nodes()[cn].origin,
        };
        store.get(c).is_defeasible_topped()
            && negation_complement(saf.conc(a), store.conc(c))
            && same_context
    })
}

#[test]
fn case_attack_is_one_way() {
    let saf = build_saf(&data("cases_attack"), &GenConfig::default());
    let (a1, a2) = (node(&saf, ONE_WAY_A1), node(&saf, ONE_WAY_A2));
    assert!(saf.is_base(a1) && saf.is_base(a2));
    assert!(saf.attacks(a2, a1));
    assert!(!saf.attacks(a1, a2));
    assert!(!saf.directly_attacks(a2, a1));
    let qs = node(&saf, "<<q> => s>");
    assert_eq!(saf.nodes()[qs].origin, Origin::Hypothetical(common::f("q")));
    assert!(saf.directly_attacks(a2, qs));
    assert!(!saf.attacks(qs, a2));
}

#[test]
fn longer_case_chain_attacks_both_ways() {
    let saf = build_saf(&data("cases_mutual"), &GenConfig::default());
    let qs1 = node(&saf, "<<q> => s1>");
    let a2 = node(&saf, "<<q> => !s1>");
    let a1 = node(&saf, MUTUAL_A1);
    assert!(saf.directly_attacks(qs1, a2));
    assert!(saf.directly_attacks(a2, qs1));
    assert!(saf.attacks(a2, a1));
    assert!(!saf.directly_attacks(a2, a1));
}

#[test]
fn edge_listing_agrees_with_attackers() {
    let saf = build_saf(&data("cases_attack"), &GenConfig::default());
    let edges = saf.edges();
    assert_eq!(edges.len(), saf.edge_count());
    assert!(edges
        .windows(2)
        .all(|w| (w[0].attacker, w[0].target) < (w[1].attacker, w[1].target)));
    for e in &edges {
        assert!(saf.attacks(e.attacker, e.target));
        assert_eq!(
            e.kind == EdgeKind::Direct,
            saf.directly_attacks(e.attacker, e.target)
        );
    }
    assert_eq!(saf.edge_list().lines().count(), edges.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn attacks_match_the_pairwise_definition(seed in 0u64..1000) {
        let cfg = GenConfig { max_rule_applications: 4, ..corpus_config() };
        let saf = build_saf(&random_theory(seed, 4, 4, 0.4), &cfg);
        prop_assume!(saf.len() <= 400);
        for t in 0..saf.len() {
            let expected: Vec<usize> = (0..saf.len()).filter(|&a| oracle_attacks(&saf, a, t)).collect();
            prop_assert_eq!(saf.attackers(t), &expected[..], "target {}", saf.render(t));
        }
        for e in saf.edges() {
            if e.kind == EdgeKind::Direct && !saf.is_base(e.attacker) {
                prop_assert_eq!(&saf.nodes()[e.attacker].origin, &saf.nodes()[e.target].origin);
            }
        }
    }
}
