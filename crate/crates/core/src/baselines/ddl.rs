//! Disjunctive default logic with Reiter-style extensions.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Result, SyntaxError};
use crate::logic::{entails, parse_formula, Formula};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjunctiveDefault {
    pub prerequisite: Formula,
    pub justifications: Vec<Formula>,
    /// Never empty.
    pub consequents: Vec<Formula>,
}

impl fmt::Display for DisjunctiveDefault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let just: Vec<String> = self.justifications.iter().map(|j| j.to_string()).collect();
        let cons: Vec<String> = self.consequents.iter().map(|c| c.to_string()).collect();
        write!(
            f,
            "{} : {} / {}",
            self.prerequisite,
            just.join(", "),
            cons.join(" ; ")
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DdlTheory {
    pub defaults: Vec<DisjunctiveDefault>,
    pub vocabulary: BTreeSet<Arc<str>>,
}

/// One extension, given by the consequents that generate it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DdlExtension {
    #[serde(serialize_with = "as_strings")]
    pub generators: Vec<Formula>,
    /// Vocabulary literals the extension contains.
    #[serde(serialize_with = "as_strings")]
    pub fingerprint: Vec<Formula>,
}

fn as_strings<S: serde::Serializer>(fs: &[Formula], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(fs.iter().map(|f| f.to_string()))
}

impl DdlExtension {
    pub fn entails(&self, phi: &Formula) -> bool {
        entails(&self.generators, phi)
    }

    pub fn fingerprint_strings(&self) -> BTreeSet<String> {
        self.fingerprint.iter().map(|f| f.to_string()).collect()
    }
}

/// Reads one default per line:
///
/// ```text
/// # comment
/// fact p | q          # same as `T : / p | q`
/// fact l ; r          # two consequents
/// p : r / r
///  : q & r / q ; r    # empty prerequisite is T
/// ```
pub fn parse_ddl(text: &str) -> Result<DdlTheory> {
    let mut defaults = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let offset = content.len() - content.trim_start().len();
        let fail = |col: usize, msg: &str| SyntaxError::new(col, msg).at_line(line_no, 0);
        let default = if let Some(rest) = trimmed.strip_prefix("fact ") {
            let consequents = formula_list(rest, ';', line_no, offset + 5)?;
            if consequents.is_empty() {
                return Err(fail(offset + 1, "fact without a formula").into());
            }
            DisjunctiveDefault {
                prerequisite: Formula::Top,
                justifications: Vec::new(),
                consequents,
            }
        } else {
            let Some((prereq, rest)) = trimmed.split_once(':') else {
                return Err(fail(
                    offset + 1,
                    "expected `prerequisite : justifications / consequents`",
                )
                .into());
            };
            let Some((just, cons)) = rest.split_once('/') else {
                return Err(fail(
                    offset + prereq.len() + 2,
                    "expected `/` before the consequents",
                )
                .into());
            };
            let prerequisite = if prereq.trim().is_empty() {
                Formula::Top
            } else {
                parse_formula(prereq).map_err(|e| e.at_line(line_no, offset))?
            };
            let just_offset = offset + prereq.len() + 1;
            let justifications = formula_list(just, ',', line_no, just_offset)?;
            let consequents = formula_list(cons, ';', line_no, just_offset + just.len() + 1)?;
            if consequents.is_empty() {
                return Err(
                    fail(just_offset + just.len() + 2, "default without consequents").into(),
                );
            }
            DisjunctiveDefault {
                prerequisite,
                justifications,
                consequents,
            }
        };
        defaults.push(default);
    }
    Ok(DdlTheory::new(defaults))
}

fn formula_list(text: &str, sep: char, line_no: usize, offset: usize) -> Result<Vec<Formula>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut col = offset;
    for part in text.split(sep) {
        out.push(parse_formula(part).map_err(|e| e.at_line(line_no, col))?);
        col += part.len() + 1;
    }
    Ok(out)
}

impl DdlTheory {
    pub fn new(defaults: Vec<DisjunctiveDefault>) -> DdlTheory {
        let mut vocabulary = BTreeSet::new();
        for d in &defaults {
            for f in std::iter::once(&d.prerequisite)
                .chain(&d.justifications)
                .chain(&d.consequents)
            {
                vocabulary.extend(f.atoms());
            }
        }
        DdlTheory {
            defaults,
            vocabulary,
        }
    }

    fn literals(&self) -> Vec<Formula> {
        self.vocabulary
            .iter()
            .flat_map(|a| {
                let atom = Formula::atom(a);
                let neg = atom.negate();
                [atom, neg]
            })
            .collect()
    }
}

/// Per default: the index of the chosen consequent, or `None`.
type Selection = Vec<Option<usize>>;

/// Whether the justifications of `d` are compatible with `candidate`.
fn justified(d: &DisjunctiveDefault, candidate: &[Formula]) -> bool {
    d.justifications
        .iter()
        .all(|j| !entails(candidate, &j.negate()))
}

/// The least set obtained by applying, in rounds, every selected default
/// whose prerequisite already follows and whose justifications are
/// compatible with `candidate`. Returns the generators and whether every
/// selected default was applied.
fn least_fixpoint(t: &DdlTheory, sel: &Selection, candidate: &[Formula]) -> (Vec<Formula>, bool) {
    let mut applied = vec![false; t.defaults.len()];
    let mut generators: Vec<Formula> = Vec::new();
    loop {
        let mut changed = false;
        for (i, d) in t.defaults.iter().enumerate() {
            let Some(c) = sel[i] else { continue };
            if applied[i] || !entails(&generators, &d.prerequisite) || !justified(d, candidate) {
                continue;
            }
            applied[i] = true;
            generators.push(d.consequents[c].clone());
            changed = true;
        }
        if !changed {
            break;
        }
    }
    let complete = sel.iter().zip(&applied).all(|(s, a)| s.is_none() || *a);
    (generators, complete)
}

/// Every default applicable in `set` (with justifications checked against
/// `candidate`) has a consequent in `set`.
fn closed(t: &DdlTheory, set: &[Formula], candidate: &[Formula]) -> bool {
    t.defaults.iter().all(|d| {
        !entails(set, &d.prerequisite)
            || !justified(d, candidate)
            || d.consequents.iter().any(|c| entails(set, c))
    })
}

fn equivalent_sets(a: &[Formula], b: &[Formula]) -> bool {
    b.iter().all(|f| entails(a, f)) && a.iter().all(|f| entails(b, f))
}

fn selections(t: &DdlTheory) -> Vec<Selection> {
    let mut out: Vec<Selection> = vec![Vec::new()];
    for d in &t.defaults {
        let mut next = Vec::with_capacity(out.len() * (d.consequents.len() + 1));
        for s in &out {
            for choice in std::iter::once(None).chain((0..d.consequents.len()).map(Some)) {
                let mut s = s.clone();
                s.push(choice);
                next.push(s);
            }
        }
        out = next;
    }
    out
}

/// All extensions, deduplicated up to logical equivalence and ordered by
/// fingerprint. A candidate is the theory of one consequent per selected
/// default; it is an extension when the selected defaults rebuild it from
/// nothing, it is closed under every applicable default, and no other
/// selection rebuilds a strictly weaker closed set.
pub fn ddl_extensions(t: &DdlTheory) -> Vec<DdlExtension> {
    let all = selections(t);
    let literals = t.literals();
    let mut found: Vec<DdlExtension> = Vec::new();
    for sel in &all {
        let candidate: Vec<Formula> = sel
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.map(|c| t.defaults[i].consequents[c].clone()))
            .collect();
        let (generators, complete) = least_fixpoint(t, sel, &candidate);
        if !complete || !closed(t, &generators, &candidate) {
            continue;
        }
        if found
            .iter()
            .any(|e| equivalent_sets(&e.generators, &generators))
        {
            continue;
        }
        let weaker = all.iter().any(|other| {
            let (g, _) = least_fixpoint(t, other, &candidate);
            closed(t, &g, &candidate)
                && g.iter().all(|f| entails(&generators, f))
                && !generators.iter().all(|f| entails(&g, f))
        });
        if weaker {
            continue;
        }
        let fingerprint = literals
            .iter()
            .filter(|l| entails(&generators, l))
            .cloned()
            .collect();
        found.push(DdlExtension {
            generators,
            fingerprint,
        });
    }
    found.sort_by_key(|a| a.fingerprint_strings());
    found
}

/// `phi` follows from every extension.
pub fn ddl_skeptical(t: &DdlTheory, phi: &Formula) -> bool {
    ddl_extensions(t).iter().all(|e| e.entails(phi))
}
