use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use serde::Serialize;

use super::store::{ArgId, ArgStore, Step};
use crate::logic::{top_disjuncts, Formula, Meaning, Oracle};
use crate::theory::ArgTheory;

/// Finitization knobs for argument generation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenConfig {
    /// Upper bound on strict and defeasible rule applications per argument.
    pub max_rule_applications: u32,
    /// Upper bound on the number of premise arguments of a strict step.
    pub max_strict_premises: usize,
    /// Drop rbc arguments whose trigger already yields a smaller disjunction.
    pub minimal_disjunctions: bool,
    pub rbc_enabled: bool,
    /// Hard cap on arguments per generated theory.
    pub max_arguments: usize,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig {
            max_rule_applications: 12,
            max_strict_premises: 3,
            minimal_disjunctions: true,
            rbc_enabled: true,
            max_arguments: 250_000,
        }
    }
}

/// Candidate conclusions of strict steps: subformulas of everything in the
/// theory, their negations, top-level disjuncts, and `T`.
pub fn candidate_conclusions(at: &ArgTheory) -> Vec<Formula> {
    let mut base = BTreeSet::new();
    let mut visit = |f: &Formula| {
        for s in f.subformulas() {
            base.insert(s.clone());
        }
    };
    for f in at.effective_facts() {
        visit(&f);
    }
    for r in at.defeasible() {
        for b in &r.body {
            visit(b);
        }
        visit(&r.head);
    }
    let mut out: BTreeSet<Formula> = base.iter().map(Formula::negate).collect();
    out.extend(base);
    let disjuncts: Vec<Formula> = out.iter().flat_map(top_disjuncts).collect();
    out.extend(disjuncts);
    out.insert(Formula::Top);
    out.into_iter().collect()
}

/// Arguments generated for one theory (a base theory or one extension).
#[derive(Debug, Clone, Default)]
pub struct Generation {
    pub hypothesis: Option<Formula>,
    /// Every generated argument, consistent or not, in construction order.
    pub members: Vec<ArgId>,
    member_set: HashSet<ArgId>,
    pub budget_hit: bool,
    pub cap_hit: bool,
}

impl Generation {
    pub fn contains(&self, id: ArgId) -> bool {
        self.member_set.contains(&id)
    }
}

/// The argument universe of a theory: its own arguments plus the arguments
/// of every extension built for a case of an rbc argument.
#[derive(Debug)]
pub struct Arguments {
    theory: ArgTheory,
    config: GenConfig,
    pub(crate) store: ArgStore,
    pub(crate) oracle: Oracle,
    candidates: Arc<Vec<Formula>>,
    candidate_meanings: Arc<Vec<Meaning>>,
    base: Generation,
    extended: BTreeMap<Formula, Generation>,
}

/// Generates the arguments of `at`. For a base theory with rbc enabled this
/// also builds the extension for every case that occurs.
pub fn generate_arguments(at: &ArgTheory, cfg: &GenConfig) -> Arguments {
    generate_with_candidates(at, cfg, candidate_conclusions(at))
}

/// As [`generate_arguments`], with strict steps aimed at the given
/// conclusions instead of the theory's own candidates.
pub fn generate_with_candidates(
    at: &ArgTheory,
    cfg: &GenConfig,
    candidates: Vec<Formula>,
) -> Arguments {
    let oracle = Oracle::new(&at.atoms());
    let candidate_meanings = candidates.iter().map(|c| oracle.meaning(c)).collect();
    let mut args = Arguments {
        theory: at.clone(),
        config: cfg.clone(),
        store: ArgStore::new(),
        oracle,
        candidates: Arc::new(candidates),
        candidate_meanings: Arc::new(candidate_meanings),
        base: Generation::default(),
        extended: BTreeMap::new(),
    };
    let rbc = cfg.rbc_enabled && at.is_base();
    args.base = args.run(at.clone(), rbc);
    args
}

impl Arguments {
    pub fn theory(&self) -> &ArgTheory {
        &self.theory
    }

    pub fn config(&self) -> &GenConfig {
        &self.config
    }

    pub fn store(&self) -> &ArgStore {
        &self.store
    }

    pub fn oracle(&self) -> &Oracle {
        &self.oracle
    }

    pub fn candidates(&self) -> &[Formula] {
        &self.candidates
    }

    pub fn base(&self) -> &Generation {
        &self.base
    }

    /// Extensions generated so far, keyed by hypothesis.
    pub fn extensions(&self) -> &BTreeMap<Formula, Generation> {
        &self.extended
    }

    /// Arg⊥ of the theory.
    pub fn all(&self) -> &[ArgId] {
        &self.base.members
    }

    /// Arg of the theory: the consistent members.
    pub fn consistent(&self) -> Vec<ArgId> {
        self.base
            .members
            .iter()
            .copied()
            .filter(|&a| self.store.get(a).is_consistent())
            .collect()
    }

    pub fn inconsistent(&self) -> Vec<ArgId> {
        self.base
            .members
            .iter()
            .copied()
            .filter(|&a| !self.store.get(a).is_consistent())
            .collect()
    }

    pub fn is_truncated(&self) -> bool {
        self.generations().any(|g| g.budget_hit || g.cap_hit)
    }

    pub fn cap_hit(&self) -> bool {
        self.generations().any(|g| g.cap_hit)
    }

    fn generations(&self) -> impl Iterator<Item = &Generation> {
        std::iter::once(&self.base).chain(self.extended.values())
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for g in self.generations() {
            let place = match &g.hypothesis {
                None => "base theory".to_string(),
                Some(h) => format!("extension by `{h}`"),
            };
            if g.budget_hit {
                out.push(format!(
                    "{place}: rule-application budget of {} excluded some arguments",
                    self.config.max_rule_applications
                ));
            }
            if g.cap_hit {
                out.push(format!(
                    "{place}: stopped at {} arguments",
                    self.config.max_arguments
                ));
            }
        }
        out
    }

    pub fn render(&self, id: ArgId) -> String {
        self.store.render(id)
    }

    /// Looks up a generated argument of the theory by its bracket notation.
    pub fn find(&self, notation: &str) -> Option<ArgId> {
        self.base
            .members
            .iter()
            .copied()
            .find(|&a| self.store.render(a) == notation)
    }

    /// The generation for hypothesis `phi`, built on first use with rbc
    /// disabled. `None` when `phi` is already a premise of the base theory.
    pub fn extension(&mut self, phi: &Formula) -> Option<&Generation> {
        if self.theory.premises().contains(phi) {
            return None;
        }
        if !self.extended.contains_key(phi) {
            let ext = self
                .theory
                .extend(phi.clone())
                .expect("hypothesis is not a fact");
            let mut generation = self.run(ext, false);
            generation.hypothesis = Some(phi.clone());
            self.extended.insert(phi.clone(), generation);
        }
        self.extended.get(phi)
    }

    fn run(&mut self, at: ArgTheory, rbc: bool) -> Generation {
        let mut sat = Saturator::new(
            at,
            self.config.clone(),
            self.candidates.clone(),
            self.candidate_meanings.clone(),
        );
        sat.seed(&mut self.store, &self.oracle);
        sat.saturate(&mut self.store, &self.oracle);
        if rbc && !sat.gen.cap_hit {
            let built = self.build_rbc(&mut sat);
            for id in built {
                sat.add(id, &self.store, &self.oracle);
            }
            sat.saturate(&mut self.store, &self.oracle);
        }
        sat.gen
    }

    fn build_rbc(&mut self, sat: &mut Saturator) -> Vec<ArgId> {
        let phase_one: Vec<ArgId> = sat
            .gen
            .members
            .iter()
            .copied()
            .filter(|&a| self.store.get(a).is_consistent())
            .collect();
        let triggers: Vec<ArgId> = phase_one
            .iter()
            .copied()
            .filter(|&a| top_disjuncts(self.store.conc(a)).len() >= 2)
            .collect();
        let max = self.config.max_rule_applications;
        let mut built = Vec::new();
        for trigger in triggers {
            if self.config.minimal_disjunctions && !self.minimal_trigger(trigger) {
                continue;
            }
            let cases = top_disjuncts(self.store.conc(trigger));
            let mut families = Vec::with_capacity(cases.len());
            for case in &cases {
                let family: Vec<ArgId> = match self.extension(case) {
                    Some(g) => g.members.clone(),
                    None => phase_one.clone(),
                };
                let mut family: Vec<(u32, ArgId)> = family
                    .into_iter()
                    .filter(|&a| self.store.get(a).is_consistent())
                    .map(|a| (self.store.get(a).rule_applications(), a))
                    .collect();
                family.sort();
                families.push(family);
            }
            let spent = self.store.get(trigger).rule_applications();
            let mut chosen = Vec::with_capacity(cases.len());
            let mut combos = Vec::new();
            let pruned = choose_cases(&families, spent, max, &mut chosen, &mut combos);
            sat.gen.budget_hit |= pruned;
            for combo in combos {
                let mut concs: Vec<Formula> = Vec::new();
                for &c in &combo {
                    let f = self.store.conc(c);
                    if !concs.contains(f) {
                        concs.push(f.clone());
                    }
                }
                let conc = Formula::or_all(concs).expect("at least two cases");
                let step = Step::Rbc {
                    trigger,
                    cases: cases.iter().cloned().zip(combo).collect(),
                };
                let (id, _) = self.store.intern(step, conc, &self.oracle);
                built.push(id);
                if sat.gen.members.len() + built.len() >= self.config.max_arguments {
                    sat.gen.cap_hit = true;
                    return built;
                }
            }
        }
        built
    }

    /// No proper nonempty subset of the cases is already entailed by the
    /// conclusions the trigger was built from. Premise triggers always pass.
    fn minimal_trigger(&self, trigger: ArgId) -> bool {
        let node = self.store.get(trigger);
        let children = match &node.step {
            Step::Premise | Step::Rbc { .. } => return true,
            Step::Strict(c) | Step::Defeasible { children: c, .. } => c,
        };
        let premises: Vec<&Formula> = children.iter().map(|&c| self.store.conc(c)).collect();
        let cases = top_disjuncts(&node.conc);
        let n = cases.len();
        (1..(1u64 << n) - 1).all(|mask| {
            let subset: Vec<Formula> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| cases[i].clone())
                .collect();
            let goal = Formula::or_all(subset).unwrap();
            !self.oracle.entails(&premises, &goal)
        })
    }
}

/// Depth-first product of case families under the rule budget. Families are
/// sorted by cost, so a branch stops at the first unaffordable member.
/// Returns whether anything was cut by the budget.
fn choose_cases(
    families: &[Vec<(u32, ArgId)>],
    spent: u32,
    max: u32,
    chosen: &mut Vec<ArgId>,
    out: &mut Vec<Vec<ArgId>>,
) -> bool {
    let depth = chosen.len();
    if depth == families.len() {
        out.push(chosen.clone());
        return false;
    }
    let mut pruned = false;
    for &(cost, id) in &families[depth] {
        if spent + cost > max {
            pruned = true;
            break;
        }
        chosen.push(id);
        pruned |= choose_cases(families, spent + cost, max, chosen, out);
        chosen.pop();
    }
    pruned
}

/// Semi-naive saturation of premises, strict steps and defeasible steps for
/// one theory.
struct Saturator {
    theory: ArgTheory,
    cfg: GenConfig,
    candidates: Arc<Vec<Formula>>,
    candidate_meanings: Arc<Vec<Meaning>>,
    gen: Generation,
    pool: Pool,
    round: u32,
}

type Bits = Vec<u64>;

/// A strict step pattern at the level of conclusions: the conclusions in
/// `concs` jointly and minimally entail each candidate in `goals`.
#[derive(Clone, Debug)]
struct Schema {
    concs: Vec<usize>,
    goals: Vec<usize>,
}

#[derive(Default)]
struct Pool {
    concs: Vec<Formula>,
    meanings: Vec<Meaning>,
    index: HashMap<Formula, usize>,
    /// Extendable members per conclusion with the round they arrived in.
    realizers: Vec<Vec<(ArgId, u32)>>,
    /// Valid conclusions are never needed in a minimal premise set.
    valid: Vec<bool>,
    entailed: HashMap<Vec<usize>, Arc<Bits>>,
    schemas: Vec<Schema>,
    by_conc: Vec<Vec<usize>>,
}

#[derive(Default)]
struct Fresh {
    ids: Vec<ArgId>,
    seen: HashSet<ArgId>,
}

/// Per conclusion: members before the previous round, and all members up to
/// the end of the previous round.
#[derive(Clone, Copy)]
struct Marks {
    old: usize,
    all: usize,
}

impl Saturator {
    fn new(
        theory: ArgTheory,
        cfg: GenConfig,
        candidates: Arc<Vec<Formula>>,
        candidate_meanings: Arc<Vec<Meaning>>,
    ) -> Saturator {
        Saturator {
            theory,
            cfg,
            candidates,
            candidate_meanings,
            gen: Generation::default(),
            pool: Pool::default(),
            round: 1,
        }
    }

    fn seed(&mut self, store: &mut ArgStore, oracle: &Oracle) {
        for p in self.theory.premises() {
            let (id, _) = store.intern(Step::Premise, p, oracle);
            self.add(id, store, oracle);
        }
    }

    /// Records a member. New extendable members become available as children
    /// from the next round on.
    fn add(&mut self, id: ArgId, store: &ArgStore, oracle: &Oracle) -> bool {
        if self.gen.cap_hit || !self.gen.member_set.insert(id) {
            return false;
        }
        self.gen.members.push(id);
        if self.gen.members.len() >= self.cfg.max_arguments {
            self.gen.cap_hit = true;
        }
        let node = store.get(id);
        if node.is_extendable() {
            let round = self.round - 1;
            let idx = match self.pool.index.get(&node.conc) {
                Some(&i) => i,
                None => self.register(node.conc.clone(), oracle),
            };
            self.pool.realizers[idx].push((id, round));
        }
        true
    }

    /// Adds a conclusion and every strict schema it completes with the
    /// conclusions already known.
    fn register(&mut self, conc: Formula, oracle: &Oracle) -> usize {
        let idx = self.pool.concs.len();
        let meaning = oracle.meaning(&conc);
        let valid = oracle.entails_meaning(&[], &meaning);
        self.pool.concs.push(conc.clone());
        self.pool.meanings.push(meaning);
        self.pool.index.insert(conc, idx);
        self.pool.realizers.push(Vec::new());
        self.pool.valid.push(valid);
        self.pool.by_conc.push(Vec::new());
        if valid {
            return idx;
        }
        let others: Vec<usize> = (0..idx).filter(|&c| !self.pool.valid[c]).collect();
        for size in 1..=self.cfg.max_strict_premises {
            let rest = size - 1;
            if rest > others.len() {
                break;
            }
            let mut pos: Vec<usize> = (0..rest).collect();
            loop {
                let mut set: Vec<usize> = pos.iter().map(|&i| others[i]).collect();
                set.push(idx);
                let goals = self.minimal_consequences(&set, oracle);
                if !goals.is_empty() {
                    let schema = self.pool.schemas.len();
                    for &c in &set {
                        self.pool.by_conc[c].push(schema);
                    }
                    self.pool.schemas.push(Schema { concs: set, goals });
                }
                if rest == 0 || !next_combination(&mut pos, others.len()) {
                    break;
                }
            }
        }
        idx
    }

    fn marks(&self) -> Vec<Marks> {
        let delta = self.round - 1;
        self.pool
            .realizers
            .iter()
            .map(|list| Marks {
                old: list.iter().take_while(|(_, r)| *r < delta).count(),
                all: list.iter().take_while(|(_, r)| *r <= delta).count(),
            })
            .collect()
    }

    fn saturate(&mut self, store: &mut ArgStore, oracle: &Oracle) {
        loop {
            let marks = self.marks();
            if marks.iter().all(|m| m.old == m.all) || self.gen.cap_hit {
                return;
            }
            let mut fresh = Fresh::default();
            self.defeasible_round(store, oracle, &marks, &mut fresh);
            self.strict_round(store, oracle, &marks, &mut fresh);
            self.round += 1;
            for id in fresh.ids {
                self.add(id, store, oracle);
            }
        }
    }

    fn over_cap(&self, fresh: &Fresh) -> bool {
        self.gen.members.len() + fresh.ids.len() >= self.cfg.max_arguments
    }

    fn slots_for(&self, concs: &[usize], marks: &[Marks]) -> Vec<(Vec<ArgId>, Marks)> {
        concs
            .iter()
            .map(|&c| {
                let m = marks[c];
                (
                    self.pool.realizers[c][..m.all]
                        .iter()
                        .map(|(a, _)| *a)
                        .collect(),
                    m,
                )
            })
            .collect()
    }

    fn defeasible_round(
        &mut self,
        store: &mut ArgStore,
        oracle: &Oracle,
        marks: &[Marks],
        fresh: &mut Fresh,
    ) {
        let rules = self.theory.defeasible().to_vec();
        for rule in &rules {
            let mut concs = Vec::with_capacity(rule.body.len());
            for b in &rule.body {
                match self.pool.index.get(b) {
                    Some(&c) if c < marks.len() && marks[c].all > 0 => concs.push(c),
                    _ => break,
                }
            }
            if concs.len() < rule.body.len() {
                continue;
            }
            let slots = self.slots_for(&concs, marks);
            for_each_new_combo(&slots, &mut |children| {
                if self.over_cap(fresh) {
                    self.gen.cap_hit = true;
                    return false;
                }
                let mut cost = 1;
                for &c in children {
                    let node = store.get(c);
                    if node.rules().contains(&rule.id) {
                        return true;
                    }
                    cost += node.rule_applications();
                }
                if cost > self.cfg.max_rule_applications {
                    self.gen.budget_hit = true;
                    return true;
                }
                let step = Step::Defeasible {
                    rule: rule.id.clone(),
                    children: children.to_vec(),
                };
                let (id, _) = store.intern(step, rule.head.clone(), oracle);
                if !self.gen.member_set.contains(&id) && fresh.seen.insert(id) {
                    fresh.ids.push(id);
                }
                true
            });
        }
    }

    fn strict_round(
        &mut self,
        store: &mut ArgStore,
        oracle: &Oracle,
        marks: &[Marks],
        fresh: &mut Fresh,
    ) {
        let mut touched = vec![false; self.pool.schemas.len()];
        for (c, m) in marks.iter().enumerate() {
            if m.all > m.old {
                for &s in &self.pool.by_conc[c] {
                    touched[s] = true;
                }
            }
        }
        for (s, _) in touched.iter().enumerate().filter(|(_, &t)| t) {
            let schema = self.pool.schemas[s].clone();
            let slots = self.slots_for(&schema.concs, marks);
            for goal in schema.goals {
                if self.gen.cap_hit {
                    return;
                }
                let goal = self.candidates[goal].clone();
                for_each_new_combo(&slots, &mut |children| {
                    if self.over_cap(fresh) {
                        self.gen.cap_hit = true;
                        return false;
                    }
                    let mut cost = 1;
                    for &c in children {
                        let node = store.get(c);
                        if node.sub().iter().any(|&s| store.conc(s) == &goal) {
                            return true;
                        }
                        cost += node.rule_applications();
                    }
                    if cost > self.cfg.max_rule_applications {
                        self.gen.budget_hit = true;
                        return true;
                    }
                    let (id, _) =
                        store.intern(Step::Strict(children.to_vec()), goal.clone(), oracle);
                    if !self.gen.member_set.contains(&id) && fresh.seen.insert(id) {
                        fresh.ids.push(id);
                    }
                    true
                });
            }
        }
    }

    /// Candidates entailed by the conclusions in `set` but by no proper
    /// subset of it (the empty set included).
    fn minimal_consequences(&mut self, set: &[usize], oracle: &Oracle) -> Vec<usize> {
        let mut out = (*self.entailed(set, oracle)).clone();
        for skip in 0..set.len() {
            let smaller: Vec<usize> = set
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &c)| c)
                .collect();
            let below = self.entailed(&smaller, oracle);
            let mut any = false;
            for (w, b) in out.iter_mut().zip(below.iter()) {
                *w &= !b;
                any |= *w != 0;
            }
            if !any {
                return Vec::new();
            }
        }
        ones(&out)
    }

    /// Candidates entailed by a set of conclusions. Sets below the premise
    /// bound are cached, since they recur as subsets of larger sets.
    fn entailed(&mut self, set: &[usize], oracle: &Oracle) -> Arc<Bits> {
        if let Some(hit) = self.pool.entailed.get(set) {
            return hit.clone();
        }
        let parts: Vec<&Meaning> = set.iter().map(|&c| &self.pool.meanings[c]).collect();
        let premise = oracle.conjoin(&parts);
        let mut bits = vec![0u64; self.candidates.len().div_ceil(64)];
        for (i, goal) in self.candidate_meanings.iter().enumerate() {
            if oracle.entails_meaning(&[&premise], goal) {
                bits[i / 64] |= 1 << (i % 64);
            }
        }
        let bits = Arc::new(bits);
        if set.len() < self.cfg.max_strict_premises {
            self.pool.entailed.insert(set.to_vec(), bits.clone());
        }
        bits
    }
}

fn ones(bits: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (w, &word) in bits.iter().enumerate() {
        let mut word = word;
        while word != 0 {
            let b = word.trailing_zeros() as usize;
            out.push(w * 64 + b);
            word &= word - 1;
        }
    }
    out
}

/// Advances a strictly increasing index tuple over `0..n`.
fn next_combination(pos: &mut [usize], n: usize) -> bool {
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

/// Visits every tuple (one member per slot) that uses at least one member
/// from the latest round. Slots before the pivot take old members only, so
/// each tuple is visited once. The callback returns false to stop.
fn for_each_new_combo(slots: &[(Vec<ArgId>, Marks)], f: &mut dyn FnMut(&[ArgId]) -> bool) {
    let k = slots.len();
    let mut tuple = vec![ArgId(0); k];
    for pivot in 0..k {
        let ranges: Vec<(usize, usize)> = (0..k)
            .map(|i| {
                let m = slots[i].1;
                match i.cmp(&pivot) {
                    std::cmp::Ordering::Less => (0, m.old),
                    std::cmp::Ordering::Equal => (m.old, m.all),
                    std::cmp::Ordering::Greater => (0, m.all),
                }
            })
            .collect();
        if ranges.iter().any(|(lo, hi)| lo >= hi) {
            continue;
        }
        let mut idx: Vec<usize> = ranges.iter().map(|r| r.0).collect();
        'odometer: loop {
            for i in 0..k {
                tuple[i] = slots[i].0[idx[i]];
            }
            if !f(&tuple) {
                return;
            }
            let mut i = k;
            loop {
                if i == 0 {
                    break 'odometer;
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < ranges[i].1 {
                    break;
                }
                idx[i] = ranges[i].0;
            }
        }
    }
}
