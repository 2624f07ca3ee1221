//! Classical entailment by refutation: the premises together with the
//! negated goal are Tseitin-encoded into clauses and handed to a small DPLL
//! solver.

use std::collections::HashMap;
use std::sync::Arc;

use super::Formula;

type Lit = i32;

#[derive(Default)]
struct Encoder {
    clauses: Vec<Vec<Lit>>,
    atoms: HashMap<Arc<str>, Lit>,
    next: Lit,
}

impl Encoder {
    fn fresh(&mut self) -> Lit {
        self.next += 1;
        self.next
    }

    // Returns a literal equivalent to `f` under the emitted definitions.
    fn encode(&mut self, f: &Formula) -> Lit {
        match f {
            Formula::Atom(name) => {
                if let Some(&v) = self.atoms.get(name) {
                    return v;
                }
                let v = self.fresh();
                self.atoms.insert(name.clone(), v);
                v
            }
            Formula::Top => {
                let v = self.fresh();
                self.clauses.push(vec![v]);
                v
            }
            Formula::Bottom => {
                let v = self.fresh();
                self.clauses.push(vec![-v]);
                v
            }
            Formula::Not(a) => -self.encode(a),
            Formula::And(a, b) => {
                let (x, y) = (self.encode(a), self.encode(b));
                let v = self.fresh();
                self.clauses.push(vec![-v, x]);
                self.clauses.push(vec![-v, y]);
                self.clauses.push(vec![v, -x, -y]);
                v
            }
            Formula::Or(a, b) => {
                let (x, y) = (self.encode(a), self.encode(b));
                let v = self.fresh();
                self.clauses.push(vec![-v, x, y]);
                self.clauses.push(vec![v, -x]);
                self.clauses.push(vec![v, -y]);
                v
            }
            Formula::Implies(a, b) => {
                let (x, y) = (self.encode(a), self.encode(b));
                let v = self.fresh();
                self.clauses.push(vec![-v, -x, y]);
                self.clauses.push(vec![v, x]);
                self.clauses.push(vec![v, -y]);
                v
            }
            Formula::Equiv(a, b) => {
                let (x, y) = (self.encode(a), self.encode(b));
                let v = self.fresh();
                self.clauses.push(vec![-v, -x, y]);
                self.clauses.push(vec![-v, x, -y]);
                self.clauses.push(vec![v, x, y]);
                self.clauses.push(vec![v, -x, -y]);
                v
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Value {
    Unset,
    True,
    False,
}

fn value_of(assign: &[Value], lit: Lit) -> Value {
    let v = assign[lit.unsigned_abs() as usize];
    match (v, lit > 0) {
        (Value::Unset, _) => Value::Unset,
        (Value::True, true) | (Value::False, false) => Value::True,
        _ => Value::False,
    }
}

fn set(assign: &mut [Value], lit: Lit) {
    assign[lit.unsigned_abs() as usize] = if lit > 0 { Value::True } else { Value::False };
}

/// Returns false on conflict.
fn propagate(clauses: &[Vec<Lit>], assign: &mut [Value]) -> bool {
    loop {
        let mut changed = false;
        for clause in clauses {
            let mut unset = None;
            let mut unset_count = 0;
            let mut satisfied = false;
            for &lit in clause {
                match value_of(assign, lit) {
                    Value::True => {
                        satisfied = true;
                        break;
                    }
                    Value::Unset => {
                        unset_count += 1;
                        unset = Some(lit);
                    }
                    Value::False => {}
                }
            }
            if satisfied {
                continue;
            }
            match unset_count {
                0 => return false,
                1 => {
                    set(assign, unset.unwrap());
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return true;
        }
    }
}

fn dpll(clauses: &[Vec<Lit>], mut assign: Vec<Value>) -> bool {
    if !propagate(clauses, &mut assign) {
        return false;
    }
    let branch = clauses.iter().find_map(|clause| {
        if clause.iter().any(|&l| value_of(&assign, l) == Value::True) {
            return None;
        }
        clause
            .iter()
            .copied()
            .find(|&l| value_of(&assign, l) == Value::Unset)
    });
    let Some(lit) = branch else {
        return true;
    };
    let mut left = assign.clone();
    set(&mut left, lit);
    if dpll(clauses, left) {
        return true;
    }
    set(&mut assign, -lit);
    dpll(clauses, assign)
}

/// Whether the conjunction of `formulas` has a model.
pub fn satisfiable<'a, I: IntoIterator<Item = &'a Formula>>(formulas: I) -> bool {
    let mut enc = Encoder::default();
    for f in formulas {
        let lit = enc.encode(f);
        enc.clauses.push(vec![lit]);
    }
    let assign = vec![Value::Unset; enc.next as usize + 1];
    dpll(&enc.clauses, assign)
}

/// Classical consequence: every valuation satisfying all premises satisfies
/// `goal`.
pub fn entails<'a, I: IntoIterator<Item = &'a Formula>>(premises: I, goal: &Formula) -> bool {
    let mut enc = Encoder::default();
    for f in premises {
        let lit = enc.encode(f);
        enc.clauses.push(vec![lit]);
    }
    let lit = enc.encode(goal);
    enc.clauses.push(vec![-lit]);
    let assign = vec![Value::Unset; enc.next as usize + 1];
    !dpll(&enc.clauses, assign)
}

/// True iff the formulas are jointly satisfiable.
pub fn is_consistent<'a, I: IntoIterator<Item = &'a Formula>>(formulas: I) -> bool {
    satisfiable(formulas)
}
