use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// A propositional formula.
///
/// Equality is purely syntactic: `!!p` and `p` are different values, and so
/// are `(p | q) | r` and `p | (q | r)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    Bottom,
    Atom(Arc<str>),
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Implies(Arc<Formula>, Arc<Formula>),
    Equiv(Arc<Formula>, Arc<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Arc::from(name))
    }

    pub fn negate(&self) -> Formula {
        Formula::Not(Arc::new(self.clone()))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Arc::new(a), Arc::new(b))
    }

    pub fn equiv(a: Formula, b: Formula) -> Formula {
        Formula::Equiv(Arc::new(a), Arc::new(b))
    }

    /// Left fold with `&`. Returns `None` for an empty iterator.
    pub fn and_all<I: IntoIterator<Item = Formula>>(items: I) -> Option<Formula> {
        items.into_iter().reduce(Formula::and)
    }

    /// Left fold with `|`. Returns `None` for an empty iterator.
    pub fn or_all<I: IntoIterator<Item = Formula>>(items: I) -> Option<Formula> {
        items.into_iter().reduce(Formula::or)
    }

    /// The operand if this is a negation.
    pub fn negated(&self) -> Option<&Formula> {
        match self {
            Formula::Not(inner) => Some(inner),
            _ => None,
        }
    }

    pub fn is_or(&self) -> bool {
        matches!(self, Formula::Or(..))
    }

    /// Immediate children, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Top | Formula::Bottom | Formula::Atom(_) => Vec::new(),
            Formula::Not(a) => vec![a],
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Equiv(a, b) => {
                vec![a, b]
            }
        }
    }

    /// All subformulas including `self`, in pre-order.
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            out.push(f);
            for c in f.children().into_iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    pub fn atoms(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms(&self, out: &mut BTreeSet<Arc<str>>) {
        match self {
            Formula::Atom(name) => {
                out.insert(name.clone());
            }
            other => {
                for c in other.children() {
                    c.collect_atoms(out);
                }
            }
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }
}

/// Flattens nested top-level disjunctions into the list of cases, left to
/// right. A formula without a top-level `|` is its own single case.
pub fn top_disjuncts(f: &Formula) -> Vec<Formula> {
    let mut out = Vec::new();
    fn walk(f: &Formula, out: &mut Vec<Formula>) {
        match f {
            Formula::Or(a, b) => {
                walk(a, out);
                walk(b, out);
            }
            other => out.push(other.clone()),
        }
    }
    walk(f, &mut out);
    out
}

/// Syntactic contradictoriness: one formula is literally the negation of the
/// other.
pub fn negation_complement(a: &Formula, b: &Formula) -> bool {
    a.negated() == Some(b) || b.negated() == Some(a)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

fn is_binary(f: &Formula) -> bool {
    matches!(
        f,
        Formula::And(..) | Formula::Or(..) | Formula::Implies(..) | Formula::Equiv(..)
    )
}

fn write_operand(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if is_binary(f) {
        write!(out, "(")?;
        write_formula(f, out)?;
        write!(out, ")")
    } else {
        write_formula(f, out)
    }
}

// `&` and `|` chains are printed flat when they nest to the left, which is
// exactly how the parser associates them.
fn write_chain(f: &Formula, op: &str, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let (left, right) = match f {
        Formula::And(a, b) | Formula::Or(a, b) => (a, b),
        _ => unreachable!(),
    };
    if std::mem::discriminant(left.as_ref()) == std::mem::discriminant(f) {
        write_chain(left, op, out)?;
    } else {
        write_operand(left, out)?;
    }
    write!(out, " {op} ")?;
    write_operand(right, out)
}

fn write_formula(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match f {
        Formula::Top => write!(out, "T"),
        Formula::Bottom => write!(out, "F"),
        Formula::Atom(name) => write!(out, "{name}"),
        Formula::Not(inner) => {
            write!(out, "!")?;
            write_operand(inner, out)
        }
        Formula::And(..) => write_chain(f, "&", out),
        Formula::Or(..) => write_chain(f, "|", out),
        Formula::Implies(a, b) => {
            write_operand(a, out)?;
            write!(out, " -> ")?;
            write_operand(b, out)
        }
        Formula::Equiv(a, b) => {
            write_operand(a, out)?;
            write!(out, " <-> ")?;
            write_operand(b, out)
        }
    }
}
