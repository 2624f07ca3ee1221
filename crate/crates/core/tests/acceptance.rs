//! One PASS/FAIL line per acceptance criterion. Exits nonzero when any fails.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::time::Instant;

use casewise_core::baselines::{
    ddl_extensions, ddl_skeptical, gor_saf, parse_ddl, DdlTheory, DEFAULT_GOR_BOUND,
};
use casewise_core::postulates::{
    check_consistency, check_hat, check_strict_closure, check_subargument_closure, random_theory,
    PostulateReport, Status,
};
use casewise_core::semantics::{
    complete, complete_sets, consequences, grounded, grounded_set, preferred, preferred_sets,
    Framework, DEFAULT_STEP_CAP,
};
use casewise_core::{
    build_saf, generate_arguments, is_consistent, GenConfig, Mode, Saf, Semantics,
};
use common::{corpus_config, data, data_path, f};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const SEMANTICS: [Semantics; 3] = [
    Semantics::Grounded,
    Semantics::Complete,
    Semantics::Preferred,
];
const MODES: [Mode; 2] = [Mode::Forall, Mode::Intersect];

fn node(saf: &Saf, notation: &str) -> Result<usize, String> {
    saf.find(notation)
        .ok_or_else(|| format!("no node {notation}"))
}

fn case_chains() -> Outcome {
    let args = generate_arguments(&data("rbc_chains"), &GenConfig::default());
    let a1 = "<<T> => p | q>";
    let a2 = "<<<T> => p | q>, [<<<<p> => p1> => p2> => r>], [<<<q> => q1> => r>] ~> r>";
    let a3 = "<<<T> => p | q>, [<<p> => p1>], [<<q> => q1>] ~> p1 | q1>";
    for a in [a1, a2, a3] {
        ensure!(args.find(a).is_some(), "{a} not generated");
    }
    let (a2, a3) = (args.find(a2).unwrap(), args.find(a3).unwrap());
    ensure!(
        args.store().conc(a2) == &f("r"),
        "A2 concludes {}",
        args.store().conc(a2)
    );
    ensure!(
        args.store().conc(a3) == &f("p1 | q1"),
        "A3 concludes {}",
        args.store().conc(a3)
    );
    let hsub: BTreeSet<(String, String)> = args
        .store()
        .get(a2)
        .hsub()
        .iter()
        .map(|(c, h)| (args.render(*c), h.to_string()))
        .collect();
    let expected: BTreeSet<(String, String)> = [
        ("<<<<p> => p1> => p2> => r>", "p"),
        ("<<<q> => q1> => r>", "q"),
    ]
    .iter()
    .map(|(a, h)| (a.to_string(), h.to_string()))
    .collect();
    ensure!(hsub == expected, "HSub(A2) = {hsub:?}");
    Ok("A1, A2, A3 generated; HSub(A2) matches".into())
}

fn self_defeat() -> Outcome {
    let at = data("self_defeat");
    let saf = build_saf(&at, &GenConfig::default());
    let args = saf.arguments();
    for a in [
        "<<<T> => p> => !p>",
        "<<<<T> => p> => !p>, <<T> => p> -> !s>",
    ] {
        let id = args.store().find(a).ok_or(format!("{a} not built"))?;
        ensure!(
            !is_consistent(&[casewise_core::arguments::dagger(args, id)]),
            "{a} has a consistent dagger"
        );
        ensure!(
            !args.consistent().contains(&id) && saf.node(id).is_none(),
            "{a} kept in Arg"
        );
    }
    node(&saf, "<<T> => s>")?;
    for sem in SEMANTICS {
        for mode in MODES {
            let c = consequences(&saf, sem, mode).map_err(|e| e.to_string())?;
            ensure!(c.contains(&f("s")), "s missing under {sem}/{mode}");
        }
    }
    Ok("A1, A2 inconsistent and filtered; A3 kept; s under every semantics and mode".into())
}

fn one_way_attack() -> Outcome {
    let saf = build_saf(&data("cases_attack"), &GenConfig::default());
    let a1 = node(
        &saf,
        "<<<p> => q | r>, [<<<q> => s> => v>], [<<r> => v>] ~> v>",
    )?;
    let a2 = node(&saf, "<<t> => !s>")?;
    ensure!(saf.attacks(a2, a1), "A2 does not attack A1");
    ensure!(!saf.attacks(a1, a2), "A1 attacks A2");
    let c = consequences(&saf, Semantics::Complete, Mode::Forall).map_err(|e| e.to_string())?;
    ensure!(c.contains(&f("!s")), "!s not skeptical");
    ensure!(!c.contains(&f("v")), "v skeptical");
    Ok("A2 attacks A1 only; complete/forall has !s and not v".into())
}

fn mutual_attack() -> Outcome {
    let saf = build_saf(&data("cases_mutual"), &GenConfig::default());
    let qs1 = node(&saf, "<<q> => s1>")?;
    let a2 = node(&saf, "<<q> => !s1>")?;
    let a1 = node(
        &saf,
        "<<<p> => q | r>, [<<<<q> => s1> => s2> => v>], [<<r> => v>] ~> v>",
    )?;
    ensure!(
        saf.directly_attacks(qs1, a2) && saf.directly_attacks(a2, qs1),
        "no mutual direct attack"
    );
    ensure!(saf.attacks(a2, a1), "A2 does not attack A1");
    Ok("<<q> => s1> and A2 attack each other directly; A2 attacks A1".into())
}

fn disjunctive_facts() -> Outcome {
    let saf = build_saf(&data("disjunctive_fact"), &GenConfig::default());
    for sem in SEMANTICS {
        for mode in MODES {
            let c = consequences(&saf, sem, mode).map_err(|e| e.to_string())?;
            ensure!(c.contains(&f("r")), "disjunctive fact: r missing under {sem}/{mode}");
        }
    }
    let arm = build_saf(&data("broken_arm"), &GenConfig::default());
    let c = consequences(&arm, Semantics::Complete, Mode::Forall).map_err(|e| e.to_string())?;
    ensure!(c.contains(&f("l")), "broken arm: l missing");
    Ok("disjunctive fact gives r everywhere; broken arm gives l".into())
}

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

fn default_logic() -> Outcome {
    let d1 = ddl("disjunctive_fact");
    ensure!(
        fingerprints(&d1) == [set(&["p", "r"]), set(&["q", "r"])],
        "disjunctive_fact: {:?}",
        fingerprints(&d1)
    );
    ensure!(ddl_skeptical(&d1, &f("r")), "disjunctive_fact: r not skeptical");
    let arm = ddl("broken_arm");
    ensure!(
        fingerprints(&arm) == [set(&["!r", "l", "w"]), set(&["r", "w"])],
        "arm: {:?}",
        fingerprints(&arm)
    );
    ensure!(!ddl_skeptical(&arm, &f("l")), "arm: l skeptical");
    let expected = [
        set(&["!s", "p", "q", "t"]),
        set(&["!s", "p", "r", "t", "v"]),
        set(&["p", "q", "s", "t", "v"]),
    ];
    for name in ["cases_attack", "cases_attack_alt"] {
        let t = ddl(name);
        ensure!(
            fingerprints(&t) == expected,
            "{name}: {:?}",
            fingerprints(&t)
        );
        ensure!(!ddl_skeptical(&t, &f("v")), "{name}: v skeptical");
    }
    Ok("disjunctive_fact, broken_arm and cases_attack extensions match".into())
}

fn generalized_or() -> Outcome {
    let cfg = GenConfig::default();
    let a3 = "<<<<<p> => q | r> => s | v> => v | v> -> v>";
    let saf = gor_saf(&data("cases_attack"), &cfg, DEFAULT_GOR_BOUND);
    let n = node(&saf, a3)?;
    ensure!(saf.attackers(n).is_empty(), "A3 attacked");

    let not_r = data("cases_attack_not_r");
    let gor = gor_saf(&not_r, &cfg, DEFAULT_GOR_BOUND);
    let n = node(&gor, a3)?;
    ensure!(gor.attackers(n).is_empty(), "A3 attacked once !r holds");
    let g = consequences(&gor, Semantics::Complete, Mode::Forall).map_err(|e| e.to_string())?;
    ensure!(g.contains(&f("v")), "gOR pipeline lost v with !r");

    let main = build_saf(&not_r, &cfg);
    let m = consequences(&main, Semantics::Complete, Mode::Forall).map_err(|e| e.to_string())?;
    ensure!(!m.contains(&f("v")), "main engine derives v with !r");
    Ok("A3 built and unattacked; with !r gOR keeps v, the main engine does not".into())
}

#[derive(Default)]
struct Tally {
    checked: usize,
    inconclusive: Vec<String>,
    failures: Vec<String>,
}

impl Tally {
    fn record(&mut self, seed: u64, r: PostulateReport) {
        self.checked += 1;
        match r.status {
            Status::Pass => {}
            Status::Inconclusive => self
                .inconclusive
                .push(format!("seed {seed}: {} ({})", r.postulate, r.detail)),
            Status::Fail => self
                .failures
                .push(format!("seed {seed}: {} ({})", r.postulate, r.detail)),
        }
    }

    fn outcome(&self, what: &str) -> Outcome {
        ensure!(
            self.failures.is_empty(),
            "{} failures, first: {}",
            self.failures.len(),
            self.failures[0]
        );
        let mut line = format!(
            "{} {what} checks, 0 failures, {} inconclusive",
            self.checked,
            self.inconclusive.len()
        );
        if let Some(first) = self.inconclusive.first() {
            line.push_str(&format!(" (first: {first})"));
        }
        Ok(line)
    }
}

/// Criteria 8, 9 and the corpus half of 11 share one pass over the corpus.
struct Corpus {
    postulates: Tally,
    hat: Tally,
    invariants: Vec<String>,
    extensions: usize,
}

fn corpus() -> Corpus {
    let cfg = corpus_config();
    let mut c = Corpus {
        postulates: Tally::default(),
        hat: Tally::default(),
        invariants: Vec::new(),
        extensions: 0,
    };
    for seed in 0..200 {
        let mut saf = build_saf(&random_theory(seed, 6, 6, 0.3), &cfg);
        let exts = match complete(&saf) {
            Ok(e) => e,
            Err(e) => {
                c.invariants.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        let sets: Vec<Vec<usize>> = exts.iter().map(|e| e.members.clone()).collect();
        let grd = grounded(&saf).members;
        let prf: Vec<Vec<usize>> = preferred(&saf)
            .unwrap()
            .into_iter()
            .map(|e| e.members)
            .collect();
        let attackers: Vec<Vec<usize>> =
            (0..saf.len()).map(|n| saf.attackers(n).to_vec()).collect();
        if let Err(e) = invariants(&attackers, &grd, &sets, &prf) {
            c.invariants.push(format!("seed {seed}: {e}"));
        }
        for e in &exts {
            c.extensions += 1;
            c.postulates
                .record(seed, check_subargument_closure(&mut saf, e));
            c.postulates.record(seed, check_strict_closure(&saf, e));
            c.postulates.record(seed, check_consistency(&saf, e));
            c.hat.record(seed, check_hat(&mut saf, e));
        }
    }
    c
}

/// Conflict-freeness, defense and completeness recomputed from attacker lists.
fn is_complete(attackers: &[Vec<usize>], set: &[usize]) -> bool {
    let member: HashSet<usize> = set.iter().copied().collect();
    let conflict_free = set
        .iter()
        .all(|&x| attackers[x].iter().all(|y| !member.contains(y)));
    let defended = |x: usize| {
        attackers[x]
            .iter()
            .all(|&y| attackers[y].iter().any(|d| member.contains(d)))
    };
    conflict_free && (0..attackers.len()).all(|x| member.contains(&x) == defended(x))
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

fn invariants(
    attackers: &[Vec<usize>],
    grd: &[usize],
    cmp: &[Vec<usize>],
    prf: &[Vec<usize>],
) -> Result<(), String> {
    ensure!(!cmp.is_empty(), "no complete extension");
    for s in cmp.iter().chain(prf).chain(std::iter::once(&grd.to_vec())) {
        ensure!(is_complete(attackers, s), "{s:?} is not complete");
    }
    ensure!(
        cmp.iter().all(|s| is_subset(grd, s)),
        "grounded not below every complete extension"
    );
    ensure!(cmp.contains(&grd.to_vec()), "grounded is not complete");
    ensure!(
        cmp.iter().filter(|s| s.len() == grd.len()).count() == 1,
        "least complete extension not unique"
    );
    let maximal: BTreeSet<Vec<usize>> = cmp
        .iter()
        .filter(|s| !cmp.iter().any(|t| t.len() > s.len() && is_subset(s, t)))
        .cloned()
        .collect();
    ensure!(
        maximal == prf.iter().cloned().collect(),
        "preferred differ from maximal complete"
    );
    Ok(())
}

fn brute_complete(attackers: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = attackers.len();
    let mut out: Vec<Vec<usize>> = (0u32..1 << n)
        .map(|mask| {
            (0..n)
                .filter(|&i| mask & (1 << i) != 0)
                .collect::<Vec<usize>>()
        })
        .filter(|s| is_complete(attackers, s))
        .collect();
    out.sort();
    out
}

fn random_frameworks() -> Vec<Vec<Vec<usize>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..100)
        .map(|_| {
            let n = rng.gen_range(1..=8);
            let density = rng.gen_range(0.05..0.45);
            (0..n)
                .map(|_| (0..n).filter(|_| rng.gen_bool(density)).collect())
                .collect()
        })
        .collect()
}

fn oracle_equivalence() -> Outcome {
    for (i, attackers) in random_frameworks().iter().enumerate() {
        let af = Framework::new(attackers.clone());
        let brute = brute_complete(attackers);
        let cmp = complete_sets(&af, DEFAULT_STEP_CAP).map_err(|e| e.to_string())?;
        ensure!(cmp == brute, "framework {i}: complete {cmp:?} vs {brute:?}");
        let least = brute.iter().min_by_key(|s| s.len()).unwrap();
        ensure!(&grounded_set(&af) == least, "framework {i}: grounded");
        let mut maximal: Vec<Vec<usize>> = brute
            .iter()
            .filter(|s| !brute.iter().any(|t| t.len() > s.len() && is_subset(s, t)))
            .cloned()
            .collect();
        maximal.sort();
        let prf = preferred_sets(&af, DEFAULT_STEP_CAP).map_err(|e| e.to_string())?;
        ensure!(prf == maximal, "framework {i}: preferred");
    }
    Ok("100 frameworks, labelling equals subset enumeration".into())
}

fn structural(corpus: &Corpus) -> Outcome {
    ensure!(corpus.invariants.is_empty(), "{}", corpus.invariants[0]);
    for (i, attackers) in random_frameworks().iter().enumerate() {
        let af = Framework::new(attackers.clone());
        let cmp = complete_sets(&af, DEFAULT_STEP_CAP).map_err(|e| e.to_string())?;
        let prf = preferred_sets(&af, DEFAULT_STEP_CAP).map_err(|e| e.to_string())?;
        invariants(attackers, &grounded_set(&af), &cmp, &prf)
            .map_err(|e| format!("framework {i}: {e}"))?;
    }
    Ok(format!(
        "{} corpus extensions and 100 frameworks re-verified",
        corpus.extensions
    ))
}

fn main() {
    let start = Instant::now();
    let mut failed = 0;
    let mut report = |n: usize, name: &str, outcome: Outcome| match &outcome {
        Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail}"),
        Err(detail) => {
            failed += 1;
            println!("criterion {n:>2} FAIL  {name}: {detail}");
        }
    };
    report(1, "case chain arguments", case_chains());
    report(2, "inconsistent arguments filtered", self_defeat());
    report(3, "one-way case attack", one_way_attack());
    report(4, "mutual case attack", mutual_attack());
    report(5, "disjunctive facts", disjunctive_facts());
    report(6, "disjunctive default logic", default_logic());
    report(7, "generalized OR contrast", generalized_or());
    let corpus = corpus();
    report(8, "postulate suite", corpus.postulates.outcome("postulate"));
    report(9, "hat properties", corpus.hat.outcome("hat"));
    report(10, "semantics oracle", oracle_equivalence());
    report(11, "structural invariants", structural(&corpus));
    println!("acceptance finished in {:.1?}", start.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
