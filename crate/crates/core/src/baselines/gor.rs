//! Closing single-premise defeasible rules under the generalized OR rule,
//! and building arguments over the closed rule set without reasoning by
//! cases.

use std::collections::HashSet;

use crate::arguments::{candidate_conclusions, generate_with_candidates, Arguments, GenConfig};
use crate::attack::Saf;
use crate::logic::Formula;
use crate::theory::{ArgTheory, DefeasibleRule};

/// Default bound on rules added by [`gor_closure`].
pub const DEFAULT_GOR_BOUND: usize = 128;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GorClosure {
    /// The input rules followed by the derived ones.
    pub rules: Vec<DefeasibleRule>,
    /// Derived rules were dropped once `bound` was reached.
    pub truncated: bool,
}

/// From `a => x` and `b => y` derives `a | b => x | y`; equal heads also give
/// the plain OR rule `a | b => x`. Reflexive rules `f => f` for every body and head formula
/// take part as premises but are not returned themselves. Rules are combined
/// pairwise in rounds until nothing new appears or `bound` derived rules
/// exist. Rules whose body is not a single formula are copied unchanged.
pub fn gor_closure(rules: &[DefeasibleRule], bound: usize) -> GorClosure {
    let single: Vec<&DefeasibleRule> = rules.iter().filter(|r| r.body.len() == 1).collect();
    let mut seen: HashSet<(Formula, Formula)> = single
        .iter()
        .map(|r| (r.body[0].clone(), r.head.clone()))
        .collect();
    // (id, body, head, reflexive seed)
    let mut pool: Vec<(String, Formula, Formula, bool)> = single
        .iter()
        .map(|r| (r.id.to_string(), r.body[0].clone(), r.head.clone(), false))
        .collect();
    let mut reflexive = Vec::new();
    for r in &single {
        for f in [&r.body[0], &r.head] {
            if seen.insert((f.clone(), f.clone())) {
                reflexive.push((format!("ref({f})"), f.clone(), f.clone(), true));
            }
        }
    }
    pool.extend(reflexive);

    let mut derived: Vec<DefeasibleRule> = Vec::new();
    let mut truncated = false;
    let mut done = 0;
    'rounds: while done < pool.len() {
        let frontier = pool.len();
        let mut fresh = Vec::new();
        for j in done..frontier {
            for i in 0..j {
                let (a, b) = (&pool[i], &pool[j]);
                if a.3 && b.3 {
                    continue;
                }
                let body = Formula::or(a.1.clone(), b.1.clone());
                let mut heads = vec![Formula::or(a.2.clone(), b.2.clone())];
                if a.2 == b.2 {
                    heads.push(a.2.clone());
                }
                for head in heads {
                    if !seen.insert((body.clone(), head.clone())) {
                        continue;
                    }
                    if derived.len() == bound {
                        truncated = true;
                        break 'rounds;
                    }
                    let id = format!("gor({},{})", a.0, b.0);
                    derived.push(DefeasibleRule::new(&id, vec![body.clone()], head.clone()));
                    fresh.push((id, body.clone(), head, false));
                }
            }
        }
        done = frontier;
        pool.extend(fresh);
    }
    let mut out: Vec<DefeasibleRule> = rules.to_vec();
    out.extend(derived);
    GorClosure {
        rules: out,
        truncated,
    }
}

/// The theory with its rules closed under gOR.
pub fn gor_theory(at: &ArgTheory, bound: usize) -> (ArgTheory, bool) {
    let closure = gor_closure(at.defeasible(), bound);
    (
        ArgTheory::new(closure.rules, at.facts().to_vec()),
        closure.truncated,
    )
}

/// Arguments over the gOR-closed theory with reasoning by cases disabled.
/// Strict steps aim at the candidate conclusions of the original theory, so
/// derived rules fire only on bodies that some argument concludes verbatim.
pub fn gor_arguments(at: &ArgTheory, cfg: &GenConfig, bound: usize) -> Arguments {
    let (closed, _) = gor_theory(at, bound);
    let cfg = GenConfig {
        rbc_enabled: false,
        ..cfg.clone()
    };
    generate_with_candidates(&closed, &cfg, candidate_conclusions(at))
}

/// The framework of the gOR pipeline. Without reasoning by cases there are
/// no hypothetical arguments.
pub fn gor_saf(at: &ArgTheory, cfg: &GenConfig, bound: usize) -> Saf {
    Saf::new(gor_arguments(at, cfg, bound))
}
