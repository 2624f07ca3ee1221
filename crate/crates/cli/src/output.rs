//! Text and JSON renderings of command results.

use std::collections::BTreeSet;

use casewise_core::attack::EdgeKind;
use casewise_core::baselines::{DdlExtension, GorClosure};
use casewise_core::postulates::PostulateReport;
use casewise_core::{ArgTheory, Extension, Formula, Mode, Origin, Saf, Semantics};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Collects one command's output.
pub struct Emit {
    format: Format,
    out: String,
}

macro_rules! say {
    ($emit:expr, $($arg:tt)*) => {{
        use std::fmt::Write as _;
        let _ = writeln!($emit.out, $($arg)*);
    }};
}

#[derive(Serialize)]
struct ArgumentRow<'a> {
    node: usize,
    origin: &'a Origin,
    kind: casewise_core::arguments::StepKind,
    conclusion: String,
    notation: String,
    rule_applications: u32,
}

#[derive(Serialize)]
struct ExtensionRow {
    members: Vec<usize>,
    arguments: Vec<String>,
    conclusions: Vec<String>,
}

#[derive(Serialize)]
struct ReportRow<'a> {
    extension: usize,
    #[serde(flatten)]
    report: &'a PostulateReport,
}

fn is_literal(f: &Formula) -> bool {
    matches!(f, Formula::Atom(_)) || matches!(f.negated(), Some(Formula::Atom(_)))
}

fn strings<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> Vec<String> {
    fs.into_iter().map(|f| f.to_string()).collect()
}

fn verdict_json(verdict: Option<&(Formula, bool)>) -> serde_json::Value {
    match verdict {
        Some((phi, holds)) => json!({ "formula": phi.to_string(), "skeptical": holds }),
        None => serde_json::Value::Null,
    }
}

impl Emit {
    pub fn new(format: Format) -> Emit {
        Emit {
            format,
            out: String::new(),
        }
    }

    pub fn into_output(self) -> String {
        self.out
    }

    fn json(&mut self, value: serde_json::Value) {
        say!(
            self,
            "{}",
            serde_json::to_string_pretty(&value).expect("plain JSON values serialize")
        );
    }

    fn rows(saf: &Saf) -> Vec<ArgumentRow<'_>> {
        saf.nodes()
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let node = saf.arguments().store().get(n.arg);
                ArgumentRow {
                    node: i,
                    origin: &n.origin,
                    kind: node.kind(),
                    conclusion: node.conc.to_string(),
                    notation: saf.render(i),
                    rule_applications: node.rule_applications(),
                }
            })
            .collect()
    }

    pub fn arguments(&mut self, saf: &Saf) {
        match self.format {
            Format::Json => self.json(json!({
                "command": "arguments",
                "config": saf.arguments().config(),
                "truncated": saf.arguments().is_truncated(),
                "arguments": Emit::rows(saf),
            })),
            Format::Text => {
                for row in Emit::rows(saf) {
                    match row.origin {
                        Origin::Base => say!(self, "{:>4}  {}", row.node, row.notation),
                        Origin::Hypothetical(h) => {
                            say!(self, "{:>4}  {}  [under {h}]", row.node, row.notation)
                        }
                    }
                }
            }
        }
    }

    pub fn attacks(&mut self, saf: &Saf) {
        match self.format {
            Format::Json => {
                let notations: Vec<String> = (0..saf.len()).map(|i| saf.render(i)).collect();
                self.json(
                    json!({ "command": "attacks", "arguments": notations, "edges": saf.edges() }),
                );
            }
            Format::Text => {
                for e in saf.edges() {
                    let tag = if e.kind == EdgeKind::Direct {
                        ""
                    } else {
                        "  (lifted)"
                    };
                    say!(self, "{} -> {}{tag}", e.attacker, e.target);
                }
            }
        }
    }

    pub fn extensions(&mut self, saf: &Saf, sem: Semantics, exts: &[Extension]) {
        let rows: Vec<ExtensionRow> = exts
            .iter()
            .map(|e| {
                let concs: BTreeSet<&Formula> = e
                    .members
                    .iter()
                    .filter(|&&n| saf.is_base(n))
                    .map(|&n| saf.conc(n))
                    .collect();
                ExtensionRow {
                    members: e.members.clone(),
                    arguments: e.members.iter().map(|&n| saf.render(n)).collect(),
                    conclusions: strings(concs),
                }
            })
            .collect();
        match self.format {
            Format::Json => {
                self.json(json!({ "command": "extensions", "semantics": sem, "extensions": rows }))
            }
            Format::Text => {
                say!(self, "{} {sem} extension(s)", rows.len());
                for (i, row) in rows.iter().enumerate() {
                    say!(self, "extension {}: {:?}", i + 1, row.members);
                    for (n, a) in row.members.iter().zip(&row.arguments) {
                        say!(self, "  {n:>4}  {a}");
                    }
                }
            }
        }
    }

    pub fn query(
        &mut self,
        saf: &Saf,
        phi: &Formula,
        sem: Semantics,
        mode: Mode,
        verdict: bool,
        wit: &[Vec<usize>],
    ) {
        let witnesses: Vec<Vec<String>> = wit
            .iter()
            .map(|w| w.iter().map(|&n| saf.render(n)).collect())
            .collect();
        match self.format {
            Format::Json => self.json(json!({
                "command": "query",
                "formula": phi.to_string(),
                "semantics": sem,
                "mode": mode,
                "verdict": verdict,
                "witnesses": witnesses,
            })),
            Format::Text => {
                say!(self, "{verdict}");
                for (i, w) in witnesses.iter().enumerate() {
                    say!(self, "extension {}: {} witness(es)", i + 1, w.len());
                    for a in w {
                        say!(self, "  {a}");
                    }
                }
            }
        }
    }

    pub fn postulates(&mut self, reports: &[Vec<PostulateReport>]) {
        match self.format {
            Format::Json => {
                let rows: Vec<ReportRow> = reports
                    .iter()
                    .enumerate()
                    .flat_map(|(i, rs)| {
                        rs.iter().map(move |r| ReportRow {
                            extension: i,
                            report: r,
                        })
                    })
                    .collect();
                self.json(json!({ "command": "postulates", "reports": rows }));
            }
            Format::Text => {
                for (i, rs) in reports.iter().enumerate() {
                    for r in rs {
                        let status = serde_json::to_value(r.status).expect("status serializes");
                        say!(
                            self,
                            "extension {}: {:<13} {}  {}",
                            i + 1,
                            status.as_str().unwrap_or("?"),
                            r.postulate,
                            r.detail
                        );
                    }
                }
            }
        }
    }

    pub fn ddl(&mut self, exts: &[DdlExtension], verdict: Option<&(Formula, bool)>) {
        match self.format {
            Format::Json => {
                self.json(json!({ "command": "baseline-ddl", "extensions": exts, "query": verdict_json(verdict) }))
            }
            Format::Text => {
                say!(self, "{} extension(s)", exts.len());
                for e in exts {
                    say!(self, "  Cn({{{}}})", strings(&e.generators).join(", "));
                }
                if let Some((phi, holds)) = verdict {
                    say!(self, "{phi}: {}", if *holds { "skeptical" } else { "not skeptical" });
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn gor(
        &mut self,
        at: &ArgTheory,
        closure: &GorClosure,
        saf: &Saf,
        sem: Semantics,
        mode: Mode,
        concs: &BTreeSet<Formula>,
        verdict: Option<&(Formula, bool)>,
    ) {
        let derived = &closure.rules[at.defeasible().len()..];
        let literals = strings(concs.iter().filter(|f| is_literal(f)));
        match self.format {
            Format::Json => {
                let rules: Vec<serde_json::Value> = derived
                    .iter()
                    .map(|r| json!({ "id": &*r.id, "body": strings(&r.body), "head": r.head.to_string() }))
                    .collect();
                self.json(json!({
                    "command": "baseline-gor",
                    "truncated": closure.truncated,
                    "derived_rules": rules,
                    "arguments": saf.len(),
                    "semantics": sem,
                    "mode": mode,
                    "literal_consequences": literals,
                    "query": verdict_json(verdict),
                }));
            }
            Format::Text => {
                say!(
                    self,
                    "{} derived rule(s), {} argument(s)",
                    derived.len(),
                    saf.len()
                );
                say!(
                    self,
                    "literal consequences ({sem}, {mode}): {}",
                    literals.join(", ")
                );
                if let Some((phi, holds)) = verdict {
                    say!(
                        self,
                        "{phi}: {}",
                        if *holds { "skeptical" } else { "not skeptical" }
                    );
                }
            }
        }
    }
}
