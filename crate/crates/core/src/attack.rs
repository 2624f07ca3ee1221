//! Hypothetical arguments, the attack relation and the argumentation
//! framework built from a theory.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::arguments::{generate_arguments, ArgId, Arguments, GenConfig};
use crate::logic::{negation_complement, Formula};
use crate::semantics::Framework;
use crate::theory::ArgTheory;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Origin {
    Base,
    Hypothetical(Formula),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Base => f.write_str("base"),
            Origin::Hypothetical(h) => write!(f, "hypothetical({h})"),
        }
    }
}

impl Serialize for Origin {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Origin::Base => s.serialize_none(),
            Origin::Hypothetical(h) => s.serialize_str(&h.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SafNode {
    pub arg: ArgId,
    pub origin: Origin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Direct,
    Lifted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub attacker: usize,
    pub target: usize,
    pub kind: EdgeKind,
}

/// For every case hypothesis used by a consistent argument of the theory,
/// the consistent arguments of the extended theory that the theory itself
/// does not have. Hypotheses that are already premises contribute nothing.
pub fn hypothetical_arguments(args: &mut Arguments) -> BTreeMap<Formula, Vec<ArgId>> {
    let consistent = args.consistent();
    let mut hyps = BTreeSet::new();
    for &a in &consistent {
        for (_, h) in args.store().get(a).hsub() {
            hyps.insert(h.clone());
        }
    }
    let mut out = BTreeMap::new();
    for h in hyps {
        let Some(generation) = args.extension(&h) else {
            continue;
        };
        let members = generation.members.clone();
        let fresh: Vec<ArgId> = members
            .into_iter()
            .filter(|&a| args.store().get(a).is_consistent() && !args.base().contains(a))
            .collect();
        out.insert(h, fresh);
    }
    out
}

/// The argumentation framework of a theory: consistent arguments of the
/// theory and its hypothetical arguments, with the lifted attack relation.
#[derive(Debug)]
pub struct Saf {
    args: Arguments,
    nodes: Vec<SafNode>,
    node_of: HashMap<ArgId, usize>,
    by_conc: HashMap<Formula, Vec<usize>>,
    attackers: Vec<Vec<usize>>,
}

pub fn build_saf(at: &ArgTheory, cfg: &GenConfig) -> Saf {
    Saf::new(generate_arguments(at, cfg))
}

impl Saf {
    pub fn new(mut args: Arguments) -> Saf {
        let harg = hypothetical_arguments(&mut args);
        let mut nodes: Vec<SafNode> = args
            .consistent()
            .into_iter()
            .map(|arg| SafNode {
                arg,
                origin: Origin::Base,
            })
            .collect();
        let mut node_of: HashMap<ArgId, usize> =
            nodes.iter().enumerate().map(|(i, n)| (n.arg, i)).collect();
        for (h, members) in harg {
            for arg in members {
                if let std::collections::hash_map::Entry::Vacant(e) = node_of.entry(arg) {
                    e.insert(nodes.len());
                    nodes.push(SafNode {
                        arg,
                        origin: Origin::Hypothetical(h.clone()),
                    });
                }
            }
        }
        let mut by_conc: HashMap<Formula, Vec<usize>> = HashMap::new();
        for (i, n) in nodes.iter().enumerate() {
            by_conc
                .entry(args.store().conc(n.arg).clone())
                .or_default()
                .push(i);
        }
        let mut saf = Saf {
            args,
            nodes,
            node_of,
            by_conc,
            attackers: Vec::new(),
        };
        let mut direct: HashMap<ArgId, Vec<usize>> = HashMap::new();
        let mut attackers = Vec::with_capacity(saf.nodes.len());
        for target in 0..saf.nodes.len() {
            let mut all: Vec<usize> = Vec::new();
            for c in saf.closure(saf.nodes[target].arg) {
                all.extend_from_slice(direct.entry(c).or_insert_with(|| saf.direct_attackers(c)));
            }
            all.sort_unstable();
            all.dedup();
            attackers.push(all);
        }
        saf.attackers = attackers;
        saf
    }

    pub fn arguments(&self) -> &Arguments {
        &self.args
    }

    pub fn arguments_mut(&mut self) -> &mut Arguments {
        &mut self.args
    }

    pub fn nodes(&self) -> &[SafNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.attackers.iter().map(Vec::len).sum()
    }

    /// Every attack, ordered by attacker and then target.
    pub fn edges(&self) -> Vec<Edge> {
        let mut edges: Vec<Edge> = Vec::with_capacity(self.edge_count());
        for (target, list) in self.attackers.iter().enumerate() {
            for &attacker in list {
                let kind = if self.directly_attacks(attacker, target) {
                    EdgeKind::Direct
                } else {
                    EdgeKind::Lifted
                };
                edges.push(Edge {
                    attacker,
                    target,
                    kind,
                });
            }
        }
        edges.sort_by_key(|e| (e.attacker, e.target));
        edges
    }

    pub fn node(&self, arg: ArgId) -> Option<usize> {
        self.node_of.get(&arg).copied()
    }

    pub fn conc(&self, node: usize) -> &Formula {
        self.args.store().conc(self.nodes[node].arg)
    }

    pub fn render(&self, node: usize) -> String {
        self.args.render(self.nodes[node].arg)
    }

    /// Looks up a node by bracket notation.
    pub fn find(&self, notation: &str) -> Option<usize> {
        (0..self.nodes.len()).find(|&i| self.render(i) == notation)
    }

    pub fn is_base(&self, node: usize) -> bool {
        self.nodes[node].origin == Origin::Base
    }

    /// Attackers of a node, sorted.
    pub fn attackers(&self, node: usize) -> &[usize] {
        &self.attackers[node]
    }

    pub fn attacks(&self, attacker: usize, target: usize) -> bool {
        self.attackers[target].binary_search(&attacker).is_ok()
    }

    pub fn directly_attacks(&self, attacker: usize, target: usize) -> bool {
        self.directly_attacks_arg(attacker, self.nodes[target].arg)
    }

    fn directly_attacks_arg(&self, attacker: usize, target: ArgId) -> bool {
        let t = self.args.store().get(target);
        if !t.is_defeasible_topped() || !negation_complement(self.conc(attacker), &t.conc) {
            return false;
        }
        let Some(context) = self.node(target).map(|n| &self.nodes[n].origin) else {
            return false;
        };
        match &self.nodes[attacker].origin {
            Origin::Base => true,
            origin => origin == context,
        }
    }

    /// Nodes that directly attack the argument `c`, which must itself be a
    /// node for anything to attack it directly.
    fn direct_attackers(&self, c: ArgId) -> Vec<usize> {
        let node = self.args.store().get(c);
        if !node.is_defeasible_topped() || self.node(c).is_none() {
            return Vec::new();
        }
        let mut opposite = vec![Formula::negate(&node.conc)];
        if let Some(inner) = node.conc.negated() {
            opposite.push(inner.clone());
        }
        let mut out: Vec<usize> = opposite
            .iter()
            .filter_map(|f| self.by_conc.get(f))
            .flatten()
            .copied()
            .filter(|&a| self.directly_attacks_arg(a, c))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Everything an attack on `arg` may land on: its sub-arguments and the
    /// sub-arguments of its case arguments.
    pub fn closure(&self, arg: ArgId) -> Vec<ArgId> {
        let store = self.args.store();
        let node = store.get(arg);
        let mut out: Vec<ArgId> = node.sub().to_vec();
        for (c, _) in node.hsub() {
            out.extend_from_slice(store.get(*c).sub());
        }
        out.sort();
        out.dedup();
        out
    }

    /// Attackers of any interned argument, node or not, under the lifted
    /// relation.
    pub fn attackers_of(&self, arg: ArgId) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .closure(arg)
            .into_iter()
            .flat_map(|c| self.direct_attackers(c))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn framework(&self) -> Framework {
        Framework::new(self.attackers.clone())
    }

    /// One `attacker -> target` line per edge, using node indices.
    pub fn edge_list(&self) -> String {
        let mut out = String::new();
        for e in self.edges() {
            out.push_str(&format!("{} -> {}\n", e.attacker, e.target));
        }
        out
    }
}
