use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::logic::{Formula, Meaning, Oracle};

/// Index of an interned argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ArgId(pub u32);

impl ArgId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// The last construction step of an argument.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Premise,
    /// Children are kept sorted, so premise order is not significant.
    Strict(Vec<ArgId>),
    Defeasible {
        rule: Arc<str>,
        children: Vec<ArgId>,
    },
    /// A reasoning-by-cases step: a trigger with a disjunctive conclusion and
    /// one case argument per disjunct, built under that disjunct as an extra
    /// fact.
    Rbc {
        trigger: ArgId,
        cases: Vec<(Formula, ArgId)>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Premise,
    Strict,
    Defeasible,
    Rbc,
}

#[derive(Debug)]
pub struct ArgNode {
    pub step: Step,
    pub conc: Formula,
    sub: Vec<ArgId>,
    hsub: Vec<(ArgId, Formula)>,
    rule_apps: u32,
    rules: Vec<Arc<str>>,
    dagger: Meaning,
    consistent: bool,
    extendable: bool,
}

impl ArgNode {
    pub fn kind(&self) -> StepKind {
        match self.step {
            Step::Premise => StepKind::Premise,
            Step::Strict(_) => StepKind::Strict,
            Step::Defeasible { .. } => StepKind::Defeasible,
            Step::Rbc { .. } => StepKind::Rbc,
        }
    }

    /// Sub-arguments including the argument itself, sorted by id.
    pub fn sub(&self) -> &[ArgId] {
        &self.sub
    }

    /// Hypothetical sub-arguments: case arguments paired with their case.
    pub fn hsub(&self) -> &[(ArgId, Formula)] {
        &self.hsub
    }

    pub fn rule_applications(&self) -> u32 {
        self.rule_apps
    }

    /// Defeasible rules used anywhere in the argument, sorted.
    pub fn rules(&self) -> &[Arc<str>] {
        &self.rules
    }

    pub fn dagger_meaning(&self) -> &Meaning {
        &self.dagger
    }

    pub fn is_consistent(&self) -> bool {
        self.consistent
    }

    /// Whether the argument may be used as a child. An inconsistent
    /// defeasible or rbc step over consistent children is extended once, so
    /// its immediate consumers are still recorded; nothing else inconsistent
    /// is built upon.
    pub fn is_extendable(&self) -> bool {
        self.extendable
    }

    pub fn is_defeasible_topped(&self) -> bool {
        matches!(self.step, Step::Defeasible { .. })
    }

    /// Immediate sub-arguments (the trigger for an rbc step; cases excluded).
    pub fn children(&self) -> Vec<ArgId> {
        match &self.step {
            Step::Premise => Vec::new(),
            Step::Strict(c) | Step::Defeasible { children: c, .. } => c.clone(),
            Step::Rbc { trigger, .. } => vec![*trigger],
        }
    }

    pub fn contains_rbc(&self) -> bool {
        !self.hsub.is_empty()
    }
}

/// Arena of structurally deduplicated arguments.
///
/// Arguments built under different theories (a base theory and its
/// extensions) live in one store, so structural identity is id identity.
#[derive(Debug, Default)]
pub struct ArgStore {
    nodes: Vec<ArgNode>,
    index: HashMap<(Step, Formula), ArgId>,
}

impl ArgStore {
    pub fn new() -> ArgStore {
        ArgStore::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn get(&self, id: ArgId) -> &ArgNode {
        &self.nodes[id.index()]
    }

    pub fn conc(&self, id: ArgId) -> &Formula {
        &self.nodes[id.index()].conc
    }

    pub fn lookup(&self, step: &Step, conc: &Formula) -> Option<ArgId> {
        self.index.get(&(step.clone(), conc.clone())).copied()
    }

    /// Interns an argument, computing its cached data. Returns the id and
    /// whether it was new. Strict children are sorted here.
    pub fn intern(&mut self, mut step: Step, conc: Formula, oracle: &Oracle) -> (ArgId, bool) {
        if let Step::Strict(children) = &mut step {
            children.sort();
            children.dedup();
        }
        let key = (step, conc);
        if let Some(&id) = self.index.get(&key) {
            return (id, false);
        }
        let (step, conc) = key;
        let id = ArgId(self.nodes.len() as u32);
        let node = self.build(id, step.clone(), conc.clone(), oracle);
        self.nodes.push(node);
        self.index.insert((step, conc), id);
        (id, true)
    }

    fn build(&self, id: ArgId, step: Step, conc: Formula, oracle: &Oracle) -> ArgNode {
        let conc_meaning = oracle.meaning(&conc);
        let mut sub = vec![id];
        let mut hsub = Vec::new();
        let mut rules: Vec<Arc<str>> = Vec::new();
        let mut rule_apps = 0;
        let dagger;
        let mut children_consistent = true;
        match &step {
            Step::Premise => {
                dagger = conc_meaning;
            }
            Step::Strict(children) | Step::Defeasible { children, .. } => {
                rule_apps = 1;
                let mut parts = vec![&conc_meaning];
                for &c in children {
                    let child = self.get(c);
                    sub.extend_from_slice(&child.sub);
                    hsub.extend(child.hsub.iter().cloned());
                    rules.extend(child.rules.iter().cloned());
                    rule_apps += child.rule_apps;
                    children_consistent &= child.consistent;
                    parts.push(&child.dagger);
                }
                if let Step::Defeasible { rule, .. } = &step {
                    rules.push(rule.clone());
                }
                dagger = oracle.conjoin(&parts);
            }
            Step::Rbc { trigger, cases } => {
                let t = self.get(*trigger);
                sub.extend_from_slice(&t.sub);
                hsub.extend(t.hsub.iter().cloned());
                rules.extend(t.rules.iter().cloned());
                rule_apps += t.rule_apps;
                children_consistent &= t.consistent;
                let mut case_daggers = Vec::new();
                for (hyp, c) in cases {
                    let case = self.get(*c);
                    hsub.push((*c, hyp.clone()));
                    rules.extend(case.rules.iter().cloned());
                    rule_apps += case.rule_apps;
                    case_daggers.push(&case.dagger);
                }
                let alternatives = oracle.disjoin(&case_daggers);
                dagger = oracle.conjoin(&[&conc_meaning, &t.dagger, &alternatives]);
            }
        }
        sub.sort();
        sub.dedup();
        hsub.sort();
        hsub.dedup();
        rules.sort();
        rules.dedup();
        let consistent = oracle.consistent_meaning(&[&dagger]);
        let extendable = consistent || (children_consistent && !matches!(step, Step::Strict(_)));
        ArgNode {
            step,
            conc,
            sub,
            hsub,
            rule_apps,
            rules,
            dagger,
            consistent,
            extendable,
        }
    }

    /// Bracket notation: `<p>`, `<A, B -> f>`, `<A => f>`, `<T, [C1], [C2] ~> f>`.
    /// Strict children are printed in lexicographic order of their own
    /// notation, so the text is independent of interning order.
    pub fn render(&self, id: ArgId) -> String {
        let mut out = String::new();
        self.render_into(id, &mut out);
        out
    }

    fn render_into(&self, id: ArgId, out: &mut String) {
        let node = self.get(id);
        match &node.step {
            Step::Premise => {
                let _ = write!(out, "<{}>", node.conc);
            }
            Step::Strict(children) => {
                let mut parts: Vec<String> = children.iter().map(|&c| self.render(c)).collect();
                parts.sort();
                let _ = write!(out, "<{} -> {}>", parts.join(", "), node.conc);
            }
            Step::Defeasible { children, .. } => {
                let parts: Vec<String> = children.iter().map(|&c| self.render(c)).collect();
                let _ = write!(out, "<{} => {}>", parts.join(", "), node.conc);
            }
            Step::Rbc { trigger, cases } => {
                out.push('<');
                self.render_into(*trigger, out);
                for (_, c) in cases {
                    out.push_str(", [");
                    self.render_into(*c, out);
                    out.push(']');
                }
                let _ = write!(out, " ~> {}>", node.conc);
            }
        }
    }

    /// Finds an argument by its rendered notation.
    pub fn find(&self, notation: &str) -> Option<ArgId> {
        (0..self.nodes.len() as u32)
            .map(ArgId)
            .find(|&id| self.render(id) == notation)
    }
}
