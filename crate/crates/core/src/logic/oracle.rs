use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::models::{ModelSet, TruthTable};
use super::{sat, Formula};

/// A formula paired with its model set when the universe is small enough to
/// materialize one.
#[derive(Clone, Debug)]
pub struct Meaning {
    pub formula: Formula,
    models: Option<Arc<ModelSet>>,
}

/// Memoizing entailment oracle over a fixed atom universe.
///
/// Small universes are decided on materialized model sets; anything else
/// goes to the DPLL solver. Both paths are exact.
#[derive(Debug)]
pub struct Oracle {
    table: Option<TruthTable>,
    meanings: RefCell<HashMap<Formula, Meaning>>,
}

impl Oracle {
    pub fn new(atoms: &BTreeSet<Arc<str>>) -> Oracle {
        Oracle {
            table: TruthTable::new(atoms),
            meanings: RefCell::new(HashMap::new()),
        }
    }

    /// Forces the solver path regardless of universe size.
    pub fn solver_only() -> Oracle {
        Oracle {
            table: None,
            meanings: RefCell::new(HashMap::new()),
        }
    }

    pub fn uses_models(&self) -> bool {
        self.table.is_some()
    }

    pub fn meaning(&self, f: &Formula) -> Meaning {
        if let Some(m) = self.meanings.borrow().get(f) {
            return m.clone();
        }
        let models = match &self.table {
            Some(t) if t.covers(f) => Some(Arc::new(t.models(f))),
            _ => None,
        };
        let m = Meaning {
            formula: f.clone(),
            models,
        };
        self.meanings.borrow_mut().insert(f.clone(), m.clone());
        m
    }

    fn fold(
        &self,
        items: &[&Meaning],
        unit: Formula,
        join: fn(Formula, Formula) -> Formula,
        start: impl Fn(&TruthTable) -> ModelSet,
        combine: fn(&mut ModelSet, &ModelSet),
    ) -> Meaning {
        let formula = items
            .iter()
            .map(|m| m.formula.clone())
            .reduce(join)
            .unwrap_or(unit);
        let models = match &self.table {
            Some(t) if items.iter().all(|m| m.models.is_some()) => {
                let mut acc = start(t);
                for m in items {
                    combine(&mut acc, m.models.as_ref().unwrap());
                }
                Some(Arc::new(acc))
            }
            _ => None,
        };
        Meaning { formula, models }
    }

    /// Left-folded conjunction.
    pub fn conjoin(&self, items: &[&Meaning]) -> Meaning {
        self.fold(
            items,
            Formula::Top,
            Formula::and,
            TruthTable::all,
            ModelSet::intersect_with,
        )
    }

    /// Left-folded disjunction.
    pub fn disjoin(&self, items: &[&Meaning]) -> Meaning {
        self.fold(
            items,
            Formula::Bottom,
            Formula::or,
            TruthTable::empty,
            ModelSet::union_with,
        )
    }

    pub fn entails_meaning(&self, premises: &[&Meaning], goal: &Meaning) -> bool {
        if let (Some(t), Some(g)) = (&self.table, &goal.models) {
            if premises.iter().all(|m| m.models.is_some()) {
                let mut acc = t.all();
                for m in premises {
                    acc.intersect_with(m.models.as_ref().unwrap());
                }
                return acc.is_subset(g);
            }
        }
        sat::entails(premises.iter().map(|m| &m.formula), &goal.formula)
    }

    pub fn consistent_meaning(&self, items: &[&Meaning]) -> bool {
        if let Some(t) = &self.table {
            if items.iter().all(|m| m.models.is_some()) {
                let mut acc = t.all();
                for m in items {
                    acc.intersect_with(m.models.as_ref().unwrap());
                }
                return !acc.is_empty();
            }
        }
        sat::is_consistent(items.iter().map(|m| &m.formula))
    }

    pub fn entails(&self, premises: &[&Formula], goal: &Formula) -> bool {
        let ps: Vec<Meaning> = premises.iter().map(|f| self.meaning(f)).collect();
        let refs: Vec<&Meaning> = ps.iter().collect();
        self.entails_meaning(&refs, &self.meaning(goal))
    }

    pub fn is_consistent(&self, formulas: &[&Formula]) -> bool {
        let ps: Vec<Meaning> = formulas.iter().map(|f| self.meaning(f)).collect();
        let refs: Vec<&Meaning> = ps.iter().collect();
        self.consistent_meaning(&refs)
    }

    pub fn equivalent(&self, a: &Formula, b: &Formula) -> bool {
        self.entails(&[a], b) && self.entails(&[b], a)
    }
}
