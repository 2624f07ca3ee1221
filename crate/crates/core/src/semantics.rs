//! Dung semantics over an abstract attack graph, and the two skeptical
//! consequence relations over a structured framework.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::attack::Saf;
use crate::error::{Error, Result};
use crate::logic::Formula;

/// Default bound on labelling steps during complete-extension search.
pub const DEFAULT_STEP_CAP: usize = 1_000_000;

/// An abstract framework given by the attackers of each node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Framework {
    attackers: Vec<Vec<usize>>,
    targets: Vec<Vec<usize>>,
}

impl Framework {
    pub fn new(mut attackers: Vec<Vec<usize>>) -> Framework {
        let mut targets = vec![Vec::new(); attackers.len()];
        for (t, list) in attackers.iter_mut().enumerate() {
            list.sort();
            list.dedup();
            for &a in list.iter() {
                targets[a].push(t);
            }
        }
        Framework { attackers, targets }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Framework {
        let mut attackers = vec![Vec::new(); n];
        for &(a, t) in edges {
            attackers[t].push(a);
        }
        Framework::new(attackers)
    }

    pub fn len(&self) -> usize {
        self.attackers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attackers.is_empty()
    }

    pub fn attackers(&self, node: usize) -> &[usize] {
        &self.attackers[node]
    }

    pub fn targets(&self, node: usize) -> &[usize] {
        &self.targets[node]
    }

    pub fn attacks(&self, a: usize, b: usize) -> bool {
        self.attackers[b].binary_search(&a).is_ok()
    }

    pub fn is_conflict_free(&self, set: &[usize]) -> bool {
        set.iter()
            .all(|&b| set.iter().all(|&a| !self.attacks(a, b)))
    }

    /// Whether `set` attacks every attacker of `node`.
    pub fn defends(&self, set: &[usize], node: usize) -> bool {
        self.attackers[node]
            .iter()
            .all(|&a| set.iter().any(|&d| self.attacks(d, a)))
    }

    /// Conflict-free and containing exactly the nodes it defends.
    pub fn is_complete(&self, set: &[usize]) -> bool {
        self.is_conflict_free(set)
            && (0..self.len()).all(|n| self.defends(set, n) == set.binary_search(&n).is_ok())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    Grounded,
    Complete,
    Preferred,
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::Grounded => "grounded",
            Semantics::Complete => "complete",
            Semantics::Preferred => "preferred",
        })
    }
}

impl FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Semantics, String> {
        match s {
            "grounded" | "grd" => Ok(Semantics::Grounded),
            "complete" | "cmp" => Ok(Semantics::Complete),
            "preferred" | "prf" => Ok(Semantics::Preferred),
            _ => Err(format!("unknown semantics `{s}`")),
        }
    }
}

/// How extensions are combined into consequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Every extension has a base argument for the formula.
    Forall,
    /// Some base argument in the intersection of all extensions concludes it.
    Intersect,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Forall => "forall",
            Mode::Intersect => "intersect",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Mode, String> {
        match s {
            "forall" => Ok(Mode::Forall),
            "intersect" => Ok(Mode::Intersect),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Extension {
    /// Sorted node indices.
    pub members: Vec<usize>,
    pub semantics: Semantics,
}

impl Extension {
    pub fn contains(&self, node: usize) -> bool {
        self.members.binary_search(&node).is_ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Label {
    In,
    Out,
}

/// Least fixpoint of the defense operator.
pub fn grounded_set(af: &Framework) -> Vec<usize> {
    let labels = grounded_labels(af);
    (0..af.len())
        .filter(|&n| labels[n] == Some(Label::In))
        .collect()
}

fn grounded_labels(af: &Framework) -> Vec<Option<Label>> {
    let n = af.len();
    let mut labels = vec![None; n];
    let mut out_attackers = vec![0usize; n];
    let mut queue: Vec<usize> = (0..n).filter(|&x| af.attackers(x).is_empty()).collect();
    while let Some(x) = queue.pop() {
        if labels[x].is_some() {
            continue;
        }
        labels[x] = Some(Label::In);
        for &t in af.targets(x) {
            if labels[t].is_none() {
                labels[t] = Some(Label::Out);
                for &u in af.targets(t) {
                    out_attackers[u] += 1;
                    if labels[u].is_none() && out_attackers[u] == af.attackers(u).len() {
                        queue.push(u);
                    }
                }
            }
        }
    }
    labels
}

/// All complete extensions, sorted. Each node keeps the set of labels it may
/// still take; choices are propagated through counters over the attackers'
/// label sets. Exceeding `cap` branching steps is an error rather than a
/// partial answer.
pub fn complete_sets(af: &Framework, cap: usize) -> Result<Vec<Vec<usize>>> {
    let (class_of, quotient) = quotient(af);
    let mut search = Labelling::new(&quotient, cap);
    let all: Vec<usize> = (0..quotient.len()).collect();
    let mut found = BTreeSet::new();
    if search.propagate(all) {
        search.branch(&mut found)?;
    }
    let mut out: Vec<Vec<usize>> = found
        .into_iter()
        .map(|classes: Vec<usize>| {
            (0..af.len())
                .filter(|&x| classes.binary_search(&class_of[x]).is_ok())
                .collect()
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Nodes with the same attackers take the same label in every complete
/// labelling, so they can be merged. Repeats until no two classes share
/// their attackers.
fn quotient(af: &Framework) -> (Vec<usize>, Framework) {
    let mut class_of: Vec<usize> = (0..af.len()).collect();
    let mut current = af.clone();
    loop {
        let mut ids: HashMap<&[usize], usize> = HashMap::new();
        let merged: Vec<usize> = (0..current.len())
            .map(|x| {
                let next = ids.len();
                *ids.entry(current.attackers(x)).or_insert(next)
            })
            .collect();
        let n = ids.len();
        if n == current.len() {
            return (class_of, current);
        }
        let mut attackers = vec![Vec::new(); n];
        for x in 0..current.len() {
            if attackers[merged[x]].is_empty() {
                attackers[merged[x]] = current.attackers(x).iter().map(|&a| merged[a]).collect();
            }
        }
        for c in class_of.iter_mut() {
            *c = merged[*c];
        }
        current = Framework::new(attackers);
    }
}

const IN: u8 = 1;
const OUT: u8 = 2;
const UNDEC: u8 = 4;
const ANY: u8 = IN | OUT | UNDEC;

/// Counts over the attackers of one node.
#[derive(Clone, Copy, Default)]
struct Counts {
    may_in: u32,
    cannot_out: u32,
    must_in: u32,
    may_not_out: u32,
    not_must_out: u32,
}

impl Counts {
    fn apply(&mut self, dom: u8, sign: i32) {
        let bump = |c: &mut u32, cond: bool| {
            if cond {
                *c = (*c as i32 + sign) as u32;
            }
        };
        bump(&mut self.may_in, dom & IN != 0);
        bump(&mut self.cannot_out, dom & OUT == 0);
        bump(&mut self.must_in, dom == IN);
        bump(&mut self.may_not_out, dom & (IN | UNDEC) != 0);
        bump(&mut self.not_must_out, dom != OUT);
    }
}

struct Labelling<'a> {
    af: &'a Framework,
    dom: Vec<u8>,
    counts: Vec<Counts>,
    trail: Vec<(usize, u8)>,
    steps: usize,
    cap: usize,
}

impl<'a> Labelling<'a> {
    fn new(af: &'a Framework, cap: usize) -> Labelling<'a> {
        let n = af.len();
        let mut counts = vec![Counts::default(); n];
        for (x, c) in counts.iter_mut().enumerate() {
            for _ in af.attackers(x) {
                c.apply(ANY, 1);
            }
        }
        Labelling {
            af,
            dom: vec![ANY; n],
            counts,
            trail: Vec::new(),
            steps: 0,
            cap,
        }
    }

    fn set(&mut self, x: usize, new: u8, queue: &mut Vec<usize>) {
        let old = self.dom[x];
        self.trail.push((x, old));
        self.dom[x] = new;
        for &t in self.af.targets(x) {
            self.counts[t].apply(old, -1);
            self.counts[t].apply(new, 1);
            queue.push(t);
        }
        queue.push(x);
    }

    fn restrict(&mut self, x: usize, mask: u8, queue: &mut Vec<usize>) -> bool {
        let new = self.dom[x] & mask;
        if new == self.dom[x] {
            return true;
        }
        if new == 0 {
            return false;
        }
        self.set(x, new, queue);
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (x, old) = self.trail.pop().expect("trail above mark");
            let cur = self.dom[x];
            for &t in self.af.targets(x) {
                self.counts[t].apply(cur, -1);
                self.counts[t].apply(old, 1);
            }
            self.dom[x] = old;
        }
    }

    fn propagate(&mut self, mut queue: Vec<usize>) -> bool {
        while let Some(x) = queue.pop() {
            let c = self.counts[x];
            let mut allowed = 0;
            if c.cannot_out == 0 {
                allowed |= IN;
            }
            if c.may_in > 0 {
                allowed |= OUT;
            }
            if c.must_in == 0 && c.may_not_out > 0 {
                allowed |= UNDEC;
            }
            if !self.restrict(x, allowed, &mut queue) {
                return false;
            }
            let dom = self.dom[x];
            let af = self.af;
            if dom == IN && c.not_must_out > 0 {
                for &a in af.attackers(x) {
                    if !self.restrict(a, OUT, &mut queue) {
                        return false;
                    }
                }
            }
            if dom & OUT == 0 && c.may_in > 0 {
                for &a in af.attackers(x) {
                    if !self.restrict(a, OUT | UNDEC, &mut queue) {
                        return false;
                    }
                }
            }
            if dom == OUT && c.may_in == 1 && c.must_in == 0 {
                let a = *af
                    .attackers(x)
                    .iter()
                    .find(|&&a| self.dom[a] & IN != 0)
                    .expect("counted");
                if !self.restrict(a, IN, &mut queue) {
                    return false;
                }
            }
            if dom & IN == 0 && c.may_not_out == 1 && c.cannot_out == 0 {
                let a = *af
                    .attackers(x)
                    .iter()
                    .find(|&&a| self.dom[a] & (IN | UNDEC) != 0)
                    .expect("counted");
                if !self.restrict(a, IN | UNDEC, &mut queue) {
                    return false;
                }
            }
        }
        true
    }

    fn branch(&mut self, found: &mut BTreeSet<Vec<usize>>) -> Result<()> {
        let Some(x) = (0..self.dom.len()).find(|&x| self.dom[x].count_ones() > 1) else {
            if self.is_labelling() {
                found.insert((0..self.dom.len()).filter(|&x| self.dom[x] == IN).collect());
            }
            return Ok(());
        };
        for label in [IN, OUT, UNDEC] {
            if self.dom[x] & label == 0 {
                continue;
            }
            self.steps += 1;
            if self.steps > self.cap {
                return Err(Error::EnumerationCap { cap: self.cap });
            }
            let mark = self.trail.len();
            let mut queue = Vec::new();
            self.set(x, label, &mut queue);
            if self.propagate(queue) {
                self.branch(found)?;
            }
            self.undo(mark);
        }
        Ok(())
    }

    fn is_labelling(&self) -> bool {
        (0..self.dom.len()).all(|x| {
            let att = self.af.attackers(x);
            let any_in = att.iter().any(|&a| self.dom[a] == IN);
            let all_out = att.iter().all(|&a| self.dom[a] == OUT);
            match self.dom[x] {
                IN => all_out,
                OUT => any_in,
                _ => !any_in && !all_out,
            }
        })
    }
}

/// The maximal sets among complete ones.
pub fn preferred_sets(af: &Framework, cap: usize) -> Result<Vec<Vec<usize>>> {
    let complete = complete_sets(af, cap)?;
    Ok(maximal(&complete))
}

fn maximal(sets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    sets.iter()
        .filter(|s| !sets.iter().any(|t| t.len() > s.len() && is_subset(s, t)))
        .cloned()
        .collect()
}

/// Both slices sorted.
pub fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
    }
    true
}

pub fn sets(af: &Framework, sem: Semantics, cap: usize) -> Result<Vec<Vec<usize>>> {
    match sem {
        Semantics::Grounded => Ok(vec![grounded_set(af)]),
        Semantics::Complete => complete_sets(af, cap),
        Semantics::Preferred => preferred_sets(af, cap),
    }
}

pub fn grounded(saf: &Saf) -> Extension {
    Extension {
        members: grounded_set(&saf.framework()),
        semantics: Semantics::Grounded,
    }
}

pub fn complete(saf: &Saf) -> Result<Vec<Extension>> {
    extensions(saf, Semantics::Complete)
}

pub fn preferred(saf: &Saf) -> Result<Vec<Extension>> {
    extensions(saf, Semantics::Preferred)
}

pub fn extensions(saf: &Saf, sem: Semantics) -> Result<Vec<Extension>> {
    extensions_with_cap(saf, sem, DEFAULT_STEP_CAP)
}

pub fn extensions_with_cap(saf: &Saf, sem: Semantics, cap: usize) -> Result<Vec<Extension>> {
    Ok(sets(&saf.framework(), sem, cap)?
        .into_iter()
        .map(|members| Extension {
            members,
            semantics: sem,
        })
        .collect())
}

/// Conclusions derivable under `sem` and `mode`. Hypothetical arguments
/// never contribute.
pub fn consequences(saf: &Saf, sem: Semantics, mode: Mode) -> Result<BTreeSet<Formula>> {
    let exts = extensions(saf, sem)?;
    Ok(consequences_of(saf, &exts, mode))
}

pub fn consequences_of(saf: &Saf, exts: &[Extension], mode: Mode) -> BTreeSet<Formula> {
    let base_concs = |members: &[usize]| -> BTreeSet<Formula> {
        members
            .iter()
            .filter(|&&n| saf.is_base(n))
            .map(|&n| saf.conc(n).clone())
            .collect()
    };
    match mode {
        Mode::Forall => {
            let mut iter = exts.iter();
            let Some(first) = iter.next() else {
                return BTreeSet::new();
            };
            let mut acc = base_concs(&first.members);
            for e in iter {
                let here = base_concs(&e.members);
                acc.retain(|f| here.contains(f));
            }
            acc
        }
        Mode::Intersect => base_concs(&intersection(exts)),
    }
}

/// Nodes in every extension.
pub fn intersection(exts: &[Extension]) -> Vec<usize> {
    let Some(first) = exts.first() else {
        return Vec::new();
    };
    first
        .members
        .iter()
        .copied()
        .filter(|&n| exts.iter().all(|e| e.contains(n)))
        .collect()
}

pub fn entails_query(saf: &Saf, sem: Semantics, mode: Mode, phi: &Formula) -> Result<bool> {
    Ok(consequences(saf, sem, mode)?.contains(phi))
}

/// Base nodes concluding `phi`, one list per extension for `Forall` and a
/// single list (the common members) for `Intersect`.
pub fn witnesses(saf: &Saf, exts: &[Extension], mode: Mode, phi: &Formula) -> Vec<Vec<usize>> {
    let pick = |members: &[usize]| -> Vec<usize> {
        members
            .iter()
            .copied()
            .filter(|&n| saf.is_base(n) && saf.conc(n) == phi)
            .collect()
    };
    match mode {
        Mode::Forall => exts.iter().map(|e| pick(&e.members)).collect(),
        Mode::Intersect => vec![pick(&intersection(exts))],
    }
}
