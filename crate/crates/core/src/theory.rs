//! Argumentation theories: defeasible rules over a consistent knowledge base.
//!
//! Strict rules are never stored. Every classically valid inference counts
//! as a strict rule, and the argument engine realizes them through the
//! entailment oracle.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result, SyntaxError};
use crate::logic::{is_consistent, parse_formula, Formula};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DefeasibleRule {
    pub id: Arc<str>,
    /// Never empty; an empty body is stored as `[T]`.
    pub body: Vec<Formula>,
    pub head: Formula,
}

impl DefeasibleRule {
    pub fn new(id: &str, body: Vec<Formula>, head: Formula) -> DefeasibleRule {
        let body = if body.is_empty() {
            vec![Formula::Top]
        } else {
            body
        };
        DefeasibleRule {
            id: Arc::from(id),
            body,
            head,
        }
    }
}

impl fmt::Display for DefeasibleRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.body.iter().map(|b| b.to_string()).collect();
        write!(f, "{} => {}", body.join(", "), self.head)
    }
}

/// A pair of defeasible rules and facts, optionally extended by hypotheses.
///
/// Facts and rules are shared between a theory and its extensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArgTheory {
    defeasible: Arc<Vec<DefeasibleRule>>,
    facts: Arc<Vec<Formula>>,
    hypotheses: Vec<Formula>,
}

impl ArgTheory {
    /// Duplicate facts are dropped; first occurrence order is kept.
    pub fn new(defeasible: Vec<DefeasibleRule>, facts: Vec<Formula>) -> ArgTheory {
        let mut seen = HashSet::new();
        let facts = facts
            .into_iter()
            .filter(|f| seen.insert(f.clone()))
            .collect();
        ArgTheory {
            defeasible: Arc::new(defeasible),
            facts: Arc::new(facts),
            hypotheses: Vec::new(),
        }
    }

    pub fn defeasible(&self) -> &[DefeasibleRule] {
        &self.defeasible
    }

    pub fn facts(&self) -> &[Formula] {
        &self.facts
    }

    pub fn hypotheses(&self) -> &[Formula] {
        &self.hypotheses
    }

    pub fn is_base(&self) -> bool {
        self.hypotheses.is_empty()
    }

    /// The base theory this one extends (itself when already a base).
    pub fn base(&self) -> ArgTheory {
        ArgTheory {
            defeasible: self.defeasible.clone(),
            facts: self.facts.clone(),
            hypotheses: Vec::new(),
        }
    }

    /// Facts followed by hypotheses.
    pub fn effective_facts(&self) -> Vec<Formula> {
        self.facts
            .iter()
            .chain(self.hypotheses.iter())
            .cloned()
            .collect()
    }

    /// Effective facts plus the always-available `T`.
    pub fn premises(&self) -> Vec<Formula> {
        let mut out = self.effective_facts();
        if !out.contains(&Formula::Top) {
            out.push(Formula::Top);
        }
        out
    }

    pub fn rule(&self, id: &str) -> Option<&DefeasibleRule> {
        self.defeasible.iter().find(|r| &*r.id == id)
    }

    pub fn atoms(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        for f in self.facts.iter().chain(self.hypotheses.iter()) {
            f.collect_atoms(&mut out);
        }
        for r in self.defeasible.iter() {
            for b in &r.body {
                b.collect_atoms(&mut out);
            }
            r.head.collect_atoms(&mut out);
        }
        out
    }

    /// Adds a hypothesis to the knowledge base without touching `self`.
    pub fn extend(&self, hypothesis: Formula) -> Result<ArgTheory> {
        if self.facts.contains(&hypothesis) {
            return Err(Error::HypothesisIsFact(hypothesis));
        }
        let mut out = self.clone();
        if !out.hypotheses.contains(&hypothesis) {
            out.hypotheses.push(hypothesis);
        }
        Ok(out)
    }

    /// Rules and facts of both theories. Rule ids of `other` that clash with
    /// ids in `self` get a `'` suffix.
    pub fn union(&self, other: &ArgTheory) -> ArgTheory {
        let mut rules: Vec<DefeasibleRule> = self.defeasible.to_vec();
        let mut ids: HashSet<Arc<str>> = rules.iter().map(|r| r.id.clone()).collect();
        for r in other.defeasible.iter() {
            let mut r = r.clone();
            while ids.contains(&r.id) {
                r.id = Arc::from(format!("{}'", r.id));
            }
            ids.insert(r.id.clone());
            rules.push(r);
        }
        let facts = self
            .facts
            .iter()
            .chain(other.facts.iter())
            .cloned()
            .collect();
        ArgTheory::new(rules, facts)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

/// Checks knowledge-base consistency (base theories only) and warns about
/// atoms in rule bodies that no fact, hypothesis or rule head mentions.
pub fn validate(at: &ArgTheory) -> ValidationReport {
    let mut errors = Vec::new();
    if at.is_base() && !is_consistent(at.facts()) {
        errors.push("inconsistent knowledge base".to_string());
    }
    let mut produced = BTreeSet::new();
    for f in at.effective_facts() {
        f.collect_atoms(&mut produced);
    }
    for r in at.defeasible() {
        r.head.collect_atoms(&mut produced);
    }
    let mut warnings = Vec::new();
    let mut reported = BTreeSet::new();
    for r in at.defeasible() {
        for b in &r.body {
            for atom in b.atoms() {
                if !produced.contains(&atom) && reported.insert(atom.clone()) {
                    warnings.push(format!(
                        "unused atom `{atom}`: only occurs in rule bodies (first in rule {})",
                        r.id
                    ));
                }
            }
        }
    }
    ValidationReport {
        valid: errors.is_empty(),
        errors,
        warnings,
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Facts,
    Defeasible,
    Hypotheses,
}

/// Parses the line-oriented theory format:
///
/// ```text
/// # comment
/// facts:
///   p
/// defeasible:
///   p => q | r
///   named: q, p => s
///   => t
/// ```
///
/// Unnamed rules get ids `d1, d2, ...` by position. An optional
/// `hypotheses:` section records extension formulas.
pub fn parse_theory(text: &str) -> Result<ArgTheory> {
    let mut section = Section::None;
    let mut facts = Vec::new();
    let mut hypotheses = Vec::new();
    let mut rules: Vec<DefeasibleRule> = Vec::new();
    let mut ids = HashSet::new();
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        match trimmed {
            "facts:" => {
                section = Section::Facts;
                continue;
            }
            "defeasible:" => {
                section = Section::Defeasible;
                continue;
            }
            "hypotheses:" => {
                section = Section::Hypotheses;
                continue;
            }
            _ => {}
        }
        let offset = content.len() - content.trim_start().len();
        match section {
            Section::None => {
                return Err(SyntaxError::new(
                    offset + 1,
                    "expected a `facts:` or `defeasible:` header",
                )
                .at_line(line_no, 0)
                .into())
            }
            Section::Facts | Section::Hypotheses => {
                let f = parse_formula(trimmed).map_err(|e| e.at_line(line_no, offset))?;
                if section == Section::Facts {
                    facts.push(f);
                } else {
                    hypotheses.push(f);
                }
            }
            Section::Defeasible => {
                let rule = parse_rule(trimmed, rules.len() + 1, line_no, offset)?;
                if !ids.insert(rule.id.clone()) {
                    return Err(Error::DuplicateRule {
                        id: rule.id.to_string(),
                        line: line_no,
                    });
                }
                rules.push(rule);
            }
        }
    }
    let mut at = ArgTheory::new(rules, facts);
    for h in hypotheses {
        at = at.extend(h)?;
    }
    Ok(at)
}

fn parse_rule(
    line: &str,
    position: usize,
    line_no: usize,
    offset: usize,
) -> Result<DefeasibleRule> {
    let (id, rest, rest_offset) = match line.split_once(':') {
        Some((name, rest)) => {
            let name = name.trim();
            let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(
                    SyntaxError::new(offset + 1, format!("invalid rule name `{name}`"))
                        .at_line(line_no, 0)
                        .into(),
                );
            }
            (name.to_string(), rest, offset + line.len() - rest.len())
        }
        None => (format!("d{position}"), line, offset),
    };
    let Some((body, head)) = rest.split_once("=>") else {
        return Err(
            SyntaxError::new(rest_offset + 1, "expected `=>` in defeasible rule")
                .at_line(line_no, 0)
                .into(),
        );
    };
    let head_offset = rest_offset + body.len() + 2;
    let head = parse_formula(head).map_err(|e| e.at_line(line_no, head_offset))?;
    let mut premises = Vec::new();
    if !body.trim().is_empty() {
        let mut col = rest_offset;
        for part in body.split(',') {
            premises.push(parse_formula(part).map_err(|e| e.at_line(line_no, col))?);
            col += part.len() + 1;
        }
    }
    Ok(DefeasibleRule::new(&id, premises, head))
}

/// Prints a theory in the format read by [`parse_theory`], with explicit
/// rule ids.
pub fn print_theory(at: &ArgTheory) -> String {
    let mut out = String::from("facts:\n");
    for f in at.facts() {
        out.push_str(&format!("  {f}\n"));
    }
    out.push_str("defeasible:\n");
    for r in at.defeasible() {
        out.push_str(&format!("  {}: {r}\n", r.id));
    }
    if !at.hypotheses().is_empty() {
        out.push_str("hypotheses:\n");
        for h in at.hypotheses() {
            out.push_str(&format!("  {h}\n"));
        }
    }
    out
}
