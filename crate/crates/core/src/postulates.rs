//! Executable rationality postulates over complete extensions, the
//! properties of the strict "hat" argument, and a random theory generator.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arguments::{dagger, hat, sub_prime, ArgId, GenConfig, Step};
use crate::attack::{build_saf, Origin, Saf};
use crate::error::{Error, Result};
use crate::logic::{negation_complement, Formula, Meaning};
use crate::semantics::{consequences, Extension, Mode, Semantics};
use crate::theory::{ArgTheory, DefeasibleRule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A counterexample exists only in the bounded argument universe.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Default)]
pub struct Counterexample {
    /// Members of the offending extension.
    pub extension: Vec<usize>,
    /// Nodes involved, in rendered form.
    pub arguments: Vec<String>,
    pub formulas: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PostulateReport {
    pub postulate: String,
    pub status: Status,
    pub detail: String,
    pub counterexample: Option<Counterexample>,
}

impl PostulateReport {
    fn pass(postulate: &str, detail: impl Into<String>) -> PostulateReport {
        PostulateReport {
            postulate: postulate.into(),
            status: Status::Pass,
            detail: detail.into(),
            counterexample: None,
        }
    }

    fn with(
        postulate: &str,
        status: Status,
        detail: impl Into<String>,
        cx: Counterexample,
    ) -> PostulateReport {
        PostulateReport {
            postulate: postulate.into(),
            status,
            detail: detail.into(),
            counterexample: Some(cx),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn counterexample(
    saf: &Saf,
    e: &Extension,
    nodes: &[ArgId],
    formulas: &[Formula],
) -> Counterexample {
    Counterexample {
        extension: e.members.clone(),
        arguments: nodes.iter().map(|&a| saf.arguments().render(a)).collect(),
        formulas: formulas.iter().map(|f| f.to_string()).collect(),
    }
}

/// Sub(A) and Sub'(A) of every member lie in the extension.
pub fn check_subargument_closure(saf: &mut Saf, e: &Extension) -> PostulateReport {
    const NAME: &str = "subargument closure";
    for &m in &e.members {
        let arg = saf.nodes()[m].arg;
        let plain = saf.arguments().store().get(arg).sub().to_vec();
        let strong = sub_prime(saf.arguments_mut(), arg);
        for (which, subs) in [("Sub", plain), ("Sub'", strong)] {
            for s in subs {
                let inside = saf.node(s).is_some_and(|n| e.contains(n));
                if !inside {
                    let detail = format!("{which} of a member is missing from the extension");
                    return PostulateReport::with(
                        NAME,
                        Status::Fail,
                        detail,
                        counterexample(saf, e, &[arg, s], &[]),
                    );
                }
            }
        }
    }
    PostulateReport::pass(
        NAME,
        format!("{} members closed under Sub and Sub'", e.members.len()),
    )
}

/// For base members with distinct conclusions, at most
/// `max_strict_premises` of them, and a candidate conclusion they minimally
/// entail, the strict argument over them exists and is in the extension.
pub fn check_strict_closure(saf: &Saf, e: &Extension) -> PostulateReport {
    const NAME: &str = "closure under strict rules";
    let args = saf.arguments();
    let store = args.store();
    let oracle = args.oracle();
    let cfg = args.config();
    let k = cfg.max_strict_premises;

    let mut by_conc: Vec<(Formula, Vec<usize>)> = Vec::new();
    let mut index: HashMap<Formula, usize> = HashMap::new();
    for &m in &e.members {
        if !saf.is_base(m) {
            continue;
        }
        let conc = saf.conc(m).clone();
        let i = *index.entry(conc.clone()).or_insert_with(|| {
            by_conc.push((conc, Vec::new()));
            by_conc.len() - 1
        });
        by_conc[i].1.push(m);
    }
    let meanings: Vec<Meaning> = by_conc.iter().map(|(f, _)| oracle.meaning(f)).collect();
    let live: Vec<usize> = (0..by_conc.len())
        .filter(|&i| !oracle.entails_meaning(&[], &meanings[i]))
        .collect();
    let goals: Vec<(Formula, Meaning)> = args
        .candidates()
        .iter()
        .map(|c| (c.clone(), oracle.meaning(c)))
        .collect();

    let mut cache: HashMap<Vec<usize>, Arc<Vec<bool>>> = HashMap::new();
    let mut entailed = |set: &[usize]| -> Arc<Vec<bool>> {
        if let Some(hit) = cache.get(set) {
            return hit.clone();
        }
        let parts: Vec<&Meaning> = set.iter().map(|&i| &meanings[i]).collect();
        let premise = oracle.conjoin(&parts);
        let bits: Arc<Vec<bool>> = Arc::new(
            goals
                .iter()
                .map(|(_, g)| oracle.entails_meaning(&[&premise], g))
                .collect(),
        );
        cache.insert(set.to_vec(), bits.clone());
        bits
    };

    let mut checked = 0usize;
    let mut guarded = 0usize;
    let mut inconclusive: Option<PostulateReport> = None;
    for size in 1..=k.min(live.len()) {
        let mut pos: Vec<usize> = (0..size).collect();
        loop {
            let set: Vec<usize> = pos.iter().map(|&i| live[i]).collect();
            let full = entailed(&set);
            let mut minimal: Vec<bool> = full.to_vec();
            for skip in 0..set.len() {
                let smaller: Vec<usize> = set
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &c)| c)
                    .collect();
                let below = entailed(&smaller);
                for (m, b) in minimal.iter_mut().zip(below.iter()) {
                    *m &= !b;
                }
            }
            for (g, _) in minimal.iter().enumerate().filter(|(_, &m)| m) {
                let goal = &goals[g].0;
                let mut families: Vec<Vec<(u32, ArgId)>> = Vec::with_capacity(set.len());
                for &i in &set {
                    let mut family = Vec::new();
                    for &m in &by_conc[i].1 {
                        let arg = saf.nodes()[m].arg;
                        let node = store.get(arg);
                        // A sub-argument already carries the goal; it must be in the extension.
                        if let Some(y) = node.sub().iter().copied().find(|&s| store.conc(s) == goal)
                        {
                            guarded += 1;
                            if !saf.node(y).is_some_and(|n| e.contains(n)) {
                                let detail = "sub-argument with the entailed conclusion is not in the extension";
                                return PostulateReport::with(
                                    NAME,
                                    Status::Fail,
                                    detail,
                                    counterexample(saf, e, &[y], std::slice::from_ref(goal)),
                                );
                            }
                        } else {
                            family.push((node.rule_applications(), arg));
                        }
                    }
                    family.sort();
                    families.push(family);
                }
                let mut walk = TupleWalk {
                    saf,
                    e,
                    goal,
                    families: &families,
                    max: cfg.max_rule_applications,
                    checked: 0,
                    over_budget: None,
                };
                if let Err(report) = walk.run(0, 1, &mut Vec::new()) {
                    return report;
                }
                checked += walk.checked;
                if let Some(children) = walk.over_budget {
                    let detail = "strict argument over members lies beyond the rule budget";
                    inconclusive.get_or_insert_with(|| {
                        PostulateReport::with(
                            NAME,
                            Status::Inconclusive,
                            detail,
                            counterexample(saf, e, &children, std::slice::from_ref(goal)),
                        )
                    });
                }
            }
            if !advance(&mut pos, live.len()) {
                break;
            }
        }
    }
    if let Some(report) = inconclusive {
        return report;
    }
    PostulateReport::pass(
        NAME,
        format!(
            "{checked} strict consequences checked, {guarded} already carried by a sub-argument"
        ),
    )
}

/// Depth-first walk over tuples of realizers, one per premise conclusion,
/// cheapest first.
struct TupleWalk<'a> {
    saf: &'a Saf,
    e: &'a Extension,
    goal: &'a Formula,
    families: &'a [Vec<(u32, ArgId)>],
    max: u32,
    checked: usize,
    over_budget: Option<Vec<ArgId>>,
}

impl TupleWalk<'_> {
    #[allow(clippy::result_large_err)]
    fn run(
        &mut self,
        depth: usize,
        cost: u32,
        chosen: &mut Vec<ArgId>,
    ) -> std::result::Result<(), PostulateReport> {
        const NAME: &str = "closure under strict rules";
        let saf = self.saf;
        if depth == self.families.len() {
            self.checked += 1;
            let store = saf.arguments().store();
            let mut sorted = chosen.clone();
            sorted.sort();
            let found = store
                .lookup(&Step::Strict(sorted), self.goal)
                .and_then(|id| saf.node(id).map(|n| (id, n)));
            return match found {
                Some((_, n)) if self.e.contains(n) => Ok(()),
                Some((id, _)) => {
                    let mut involved = chosen.clone();
                    involved.push(id);
                    let detail = "strict consequence of members is not in the extension";
                    Err(PostulateReport::with(
                        NAME,
                        Status::Fail,
                        detail,
                        counterexample(saf, self.e, &involved, std::slice::from_ref(self.goal)),
                    ))
                }
                None if saf.arguments().cap_hit() => {
                    self.over_budget.get_or_insert_with(|| chosen.clone());
                    Ok(())
                }
                None => {
                    let detail = "strict argument over members was never generated";
                    Err(PostulateReport::with(
                        NAME,
                        Status::Fail,
                        detail,
                        counterexample(saf, self.e, chosen, std::slice::from_ref(self.goal)),
                    ))
                }
            };
        }
        let rest: u32 = self.families[depth + 1..]
            .iter()
            .filter_map(|f| f.first().map(|&(c, _)| c))
            .sum();
        for &(c, arg) in &self.families[depth] {
            if cost + c + rest > self.max {
                if self.over_budget.is_none() {
                    let mut witness = chosen.clone();
                    witness.push(arg);
                    witness.extend(
                        self.families[depth + 1..]
                            .iter()
                            .filter_map(|f| f.first().map(|&(_, a)| a)),
                    );
                    self.over_budget = Some(witness);
                }
                break;
            }
            chosen.push(arg);
            self.run(depth + 1, cost + c, chosen)?;
            chosen.pop();
        }
        Ok(())
    }
}

fn advance(pos: &mut [usize], n: usize) -> bool {
    let k = pos.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if pos[i] < n - (k - i) {
            pos[i] += 1;
            for j in i + 1..k {
                pos[j] = pos[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The conclusions of the base members are jointly consistent.
pub fn check_consistency(saf: &Saf, e: &Extension) -> PostulateReport {
    const NAME: &str = "consistency";
    let oracle = saf.arguments().oracle();
    let concs: BTreeSet<Formula> = e
        .members
        .iter()
        .filter(|&&m| saf.is_base(m))
        .map(|&m| saf.conc(m).clone())
        .collect();
    let concs: Vec<Formula> = concs.into_iter().collect();
    let refs: Vec<&Formula> = concs.iter().collect();
    if oracle.is_consistent(&refs) {
        return PostulateReport::pass(NAME, format!("{} base conclusions consistent", concs.len()));
    }
    // Deletion-based minimal inconsistent core.
    let mut core = concs.clone();
    let mut i = 0;
    while i < core.len() {
        let without: Vec<&Formula> = core
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, f)| f)
            .collect();
        if !oracle.is_consistent(&without) {
            core.remove(i);
        } else {
            i += 1;
        }
    }
    let witnesses: Vec<ArgId> = core
        .iter()
        .filter_map(|f| {
            e.members
                .iter()
                .find(|&&m| saf.is_base(m) && saf.conc(m) == f)
        })
        .map(|&m| saf.nodes()[m].arg)
        .collect();
    let args = saf.arguments();
    let bounded = core.len() > args.config().max_strict_premises + 1 || args.is_truncated();
    let status = if bounded {
        Status::Inconclusive
    } else {
        Status::Fail
    };
    let detail = format!("inconsistent core of {} conclusions", core.len());
    PostulateReport::with(
        NAME,
        status,
        detail,
        counterexample(saf, e, &witnesses, &core),
    )
}

/// The three properties relating a member to its hat argument: equal
/// attackers, equivalent commitments, and acceptability alongside the
/// extension.
pub fn check_hat(saf: &mut Saf, e: &Extension) -> PostulateReport {
    const NAME: &str = "hat argument";
    for &m in &e.members {
        let arg = saf.nodes()[m].arg;
        let h = hat(saf.arguments_mut(), arg);
        let saf_ref: &Saf = saf;
        let mine = saf_ref.attackers(m).to_vec();
        let theirs = saf_ref.attackers_of(h);
        if mine != theirs {
            let detail = "argument and hat argument have different attackers";
            return PostulateReport::with(
                NAME,
                Status::Fail,
                detail,
                counterexample(saf_ref, e, &[arg, h], &[]),
            );
        }
        let args = saf_ref.arguments();
        if !args
            .oracle()
            .equivalent(&dagger(args, arg), &dagger(args, h))
        {
            let detail = "commitments of argument and hat argument differ";
            return PostulateReport::with(
                NAME,
                Status::Fail,
                detail,
                counterexample(saf_ref, e, &[arg, h], &[]),
            );
        }
        let defended = theirs
            .iter()
            .all(|&a| e.members.iter().any(|&d| saf_ref.attacks(d, a)));
        let attacked_by_e = theirs.iter().any(|&a| e.contains(a));
        let attacks_e = hat_attacks_member(saf_ref, h, &saf_ref.nodes()[m].origin, e);
        if !defended || attacked_by_e || attacks_e {
            let detail = "hat argument is not acceptable with respect to the extension";
            return PostulateReport::with(
                NAME,
                Status::Fail,
                detail,
                counterexample(saf_ref, e, &[arg, h], &[]),
            );
        }
    }
    PostulateReport::pass(NAME, format!("{} members checked", e.members.len()))
}

fn hat_attacks_member(saf: &Saf, h: ArgId, origin: &Origin, e: &Extension) -> bool {
    let store = saf.arguments().store();
    let conc = store.conc(h);
    e.members.iter().any(|&m| {
        saf.closure(saf.nodes()[m].arg).into_iter().any(|c| {
            let node = store.get(c);
            node.is_defeasible_topped()
                && negation_complement(conc, &node.conc)
                && saf
                    .node(c)
                    .is_some_and(|n| *origin == Origin::Base || saf.nodes()[n].origin == *origin)
        })
    })
}

/// Runs every per-extension check.
pub fn check_all(saf: &mut Saf, e: &Extension) -> Vec<PostulateReport> {
    vec![
        check_subargument_closure(saf, e),
        check_strict_closure(saf, e),
        check_consistency(saf, e),
        check_hat(saf, e),
    ]
}

/// Consequences of `at1` coincide with the consequences of the union with
/// an atom-disjoint `at2`, restricted to formulas over the atoms of `at1`.
pub fn check_non_interference(
    at1: &ArgTheory,
    at2: &ArgTheory,
    sem: Semantics,
    mode: Mode,
    cfg: &GenConfig,
) -> Result<PostulateReport> {
    const NAME: &str = "non-interference";
    let atoms1 = at1.atoms();
    let shared: Vec<String> = atoms1
        .intersection(&at2.atoms())
        .map(|a| a.to_string())
        .collect();
    if !shared.is_empty() {
        return Err(Error::OverlappingAtoms(shared.join(", ")));
    }
    let union = at1.union(at2);
    let own = |f: &Formula| f.atoms().iter().all(|a| atoms1.contains(a));
    let alone: BTreeSet<Formula> = consequences(&build_saf(at1, cfg), sem, mode)?
        .into_iter()
        .filter(own)
        .collect();
    let joint: BTreeSet<Formula> = consequences(&build_saf(&union, cfg), sem, mode)?
        .into_iter()
        .filter(own)
        .collect();
    if alone == joint {
        return Ok(PostulateReport::pass(
            NAME,
            format!("{} consequences agree under {sem}/{mode}", alone.len()),
        ));
    }
    let diff: Vec<String> = alone
        .symmetric_difference(&joint)
        .map(|f| f.to_string())
        .collect();
    Ok(PostulateReport::with(
        NAME,
        Status::Fail,
        format!("consequences differ under {sem}/{mode}"),
        Counterexample {
            extension: Vec::new(),
            arguments: Vec::new(),
            formulas: diff,
        },
    ))
}

fn atom_name(i: usize) -> String {
    const NAMES: &[&str] = &["p", "q", "r", "s", "t", "u", "v", "w"];
    match NAMES.get(i) {
        Some(n) => n.to_string(),
        None => format!("x{i}"),
    }
}

/// A reproducible random theory: literal bodies of length one or two,
/// heads that are literals or (with probability `p_disjunctive_head`)
/// disjunctions of two literals, and a consistent set of facts.
pub fn random_theory(
    seed: u64,
    n_atoms: usize,
    n_rules: usize,
    p_disjunctive_head: f64,
) -> ArgTheory {
    let n_atoms = n_atoms.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let literal = |rng: &mut ChaCha8Rng| {
        let a = Formula::atom(&atom_name(rng.gen_range(0..n_atoms)));
        if rng.gen_bool(0.3) {
            a.negate()
        } else {
            a
        }
    };
    let disjunction = |rng: &mut ChaCha8Rng| {
        let a = literal(rng);
        let mut b = literal(rng);
        while n_atoms > 1 && b.atoms() == a.atoms() {
            b = literal(rng);
        }
        Formula::or(a, b)
    };
    let mut rules = Vec::with_capacity(n_rules);
    for i in 0..n_rules {
        let body: Vec<Formula> = (0..rng.gen_range(1..=2))
            .map(|_| literal(&mut rng))
            .collect();
        let head = if rng.gen_bool(p_disjunctive_head) {
            disjunction(&mut rng)
        } else {
            literal(&mut rng)
        };
        rules.push(DefeasibleRule::new(&format!("d{}", i + 1), body, head));
    }
    loop {
        let mut facts: Vec<Formula> = (0..rng.gen_range(1..=3))
            .map(|_| literal(&mut rng))
            .collect();
        if rng.gen_bool(0.5) {
            facts.push(disjunction(&mut rng));
        }
        if crate::logic::is_consistent(&facts) {
            return ArgTheory::new(rules, facts);
        }
    }
}
