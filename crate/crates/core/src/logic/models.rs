use std::collections::BTreeSet;
use std::sync::Arc;

use super::Formula;

/// Largest atom universe for which model sets are materialized.
pub const MAX_TABLE_ATOMS: usize = 16;

/// The set of valuations (over a fixed, ordered atom universe) satisfying a
/// formula, stored as a bit vector indexed by valuation number.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModelSet {
    words: Box<[u64]>,
}

impl ModelSet {
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &ModelSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersect_with(&mut self, other: &ModelSet) {
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &ModelSet) {
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a |= b;
        }
    }

    /// Number of satisfying valuations.
    pub fn count(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }
}

/// Evaluates formulas to [`ModelSet`]s over a fixed atom universe.
#[derive(Clone, Debug)]
pub struct TruthTable {
    atoms: Vec<Arc<str>>,
    words: usize,
    // Bits past the last valuation are kept clear so complements stay exact.
    tail_mask: u64,
}

impl TruthTable {
    /// Returns `None` when the universe exceeds [`MAX_TABLE_ATOMS`].
    pub fn new(atoms: &BTreeSet<Arc<str>>) -> Option<TruthTable> {
        if atoms.len() > MAX_TABLE_ATOMS {
            return None;
        }
        let valuations = 1usize << atoms.len();
        let words = valuations.div_ceil(64);
        let tail_mask = if valuations >= 64 {
            u64::MAX
        } else {
            (1u64 << valuations) - 1
        };
        Some(TruthTable {
            atoms: atoms.iter().cloned().collect(),
            words,
            tail_mask,
        })
    }

    pub fn atoms(&self) -> &[Arc<str>] {
        &self.atoms
    }

    pub fn covers(&self, f: &Formula) -> bool {
        f.atoms()
            .iter()
            .all(|a| self.atoms.binary_search(a).is_ok())
    }

    fn full(&self) -> ModelSet {
        let mut words = vec![u64::MAX; self.words];
        *words.last_mut().unwrap() = self.tail_mask;
        ModelSet {
            words: words.into_boxed_slice(),
        }
    }

    pub fn empty(&self) -> ModelSet {
        ModelSet {
            words: vec![0; self.words].into_boxed_slice(),
        }
    }

    pub fn all(&self) -> ModelSet {
        self.full()
    }

    pub fn complement(&self, m: &ModelSet) -> ModelSet {
        let mut out = m.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        *out.words.last_mut().unwrap() &= self.tail_mask;
        out
    }

    fn atom(&self, index: usize) -> ModelSet {
        let mut words = vec![0u64; self.words];
        if index < 6 {
            // Valuation v sets atom i iff bit i of v is set; within a word
            // this is a fixed periodic pattern.
            let period = 1u64 << index;
            let mut pattern = 0u64;
            for bit in 0..64u64 {
                if (bit / period) % 2 == 1 {
                    pattern |= 1 << bit;
                }
            }
            for w in words.iter_mut() {
                *w = pattern;
            }
        } else {
            let block = 1usize << (index - 6);
            for (i, w) in words.iter_mut().enumerate() {
                if (i / block) % 2 == 1 {
                    *w = u64::MAX;
                }
            }
        }
        *words.last_mut().unwrap() &= self.tail_mask;
        ModelSet {
            words: words.into_boxed_slice(),
        }
    }

    /// Panics if `f` mentions an atom outside the universe.
    pub fn models(&self, f: &Formula) -> ModelSet {
        match f {
            Formula::Top => self.full(),
            Formula::Bottom => self.empty(),
            Formula::Atom(name) => {
                let index = self
                    .atoms
                    .binary_search(name)
                    .unwrap_or_else(|_| panic!("atom `{name}` outside truth-table universe"));
                self.atom(index)
            }
            Formula::Not(a) => self.complement(&self.models(a)),
            Formula::And(a, b) => {
                let mut m = self.models(a);
                m.intersect_with(&self.models(b));
                m
            }
            Formula::Or(a, b) => {
                let mut m = self.models(a);
                m.union_with(&self.models(b));
                m
            }
            Formula::Implies(a, b) => {
                let mut m = self.complement(&self.models(a));
                m.union_with(&self.models(b));
                m
            }
            Formula::Equiv(a, b) => {
                let (x, y) = (self.models(a), self.models(b));
                let mut both = x.clone();
                both.intersect_with(&y);
                let mut neither = self.complement(&x);
                neither.intersect_with(&self.complement(&y));
                both.union_with(&neither);
                both
            }
        }
    }
}
