use super::generate::Arguments;
use super::store::{ArgId, Step};
use crate::logic::{top_disjuncts, Formula};

/// The formula collecting everything an argument commits to. Folds are
/// left-associative in the listed order.
pub fn dagger(args: &Arguments, id: ArgId) -> Formula {
    args.store().get(id).dagger_meaning().formula.clone()
}

/// Sub-arguments in the stronger sense: an rbc argument also contains the
/// rbc arguments obtained by cutting each case argument down to one of its
/// sub-arguments. Strict and defeasible arguments collect this recursively
/// from their children. Missing trimmed arguments are interned.
pub fn sub_prime(args: &mut Arguments, id: ArgId) -> Vec<ArgId> {
    let mut out = Vec::new();
    collect_sub_prime(args, id, &mut out);
    out.sort();
    out.dedup();
    out
}

fn collect_sub_prime(args: &mut Arguments, id: ArgId, out: &mut Vec<ArgId>) {
    let step = args.store().get(id).step.clone();
    match step {
        Step::Premise => out.push(id),
        Step::Strict(children) | Step::Defeasible { children, .. } => {
            out.push(id);
            for c in children {
                collect_sub_prime(args, c, out);
            }
        }
        Step::Rbc { trigger, cases } => {
            collect_sub_prime(args, trigger, out);
            let options: Vec<Vec<ArgId>> = cases
                .iter()
                .map(|(_, c)| args.store().get(*c).sub().to_vec())
                .collect();
            let mut idx = vec![0usize; options.len()];
            loop {
                let chosen: Vec<ArgId> = idx.iter().zip(&options).map(|(&i, o)| o[i]).collect();
                out.push(intern_rbc(args, trigger, &cases, &chosen));
                let mut i = idx.len();
                loop {
                    if i == 0 {
                        return;
                    }
                    i -= 1;
                    idx[i] += 1;
                    if idx[i] < options[i].len() {
                        break;
                    }
                    idx[i] = 0;
                }
            }
        }
    }
}

/// Interns the rbc argument over `trigger` with the given case arguments,
/// concluding the set-disjunction of their conclusions.
pub(crate) fn intern_rbc(
    args: &mut Arguments,
    trigger: ArgId,
    cases: &[(Formula, ArgId)],
    chosen: &[ArgId],
) -> ArgId {
    let mut concs: Vec<Formula> = Vec::new();
    for &c in chosen {
        let f = args.store().conc(c);
        if !concs.contains(f) {
            concs.push(f.clone());
        }
    }
    let conc = Formula::or_all(concs).expect("rbc arguments have cases");
    let step = Step::Rbc {
        trigger,
        cases: cases
            .iter()
            .map(|(h, _)| h.clone())
            .zip(chosen.iter().copied())
            .collect(),
    };
    let Arguments { store, oracle, .. } = args;
    store.intern(step, conc, oracle).0
}

/// The strict argument over `sub_prime(a)` concluding the conjunction of
/// their conclusions. It is interned but belongs to no generation.
pub fn hat(args: &mut Arguments, id: ArgId) -> ArgId {
    let parts = sub_prime(args, id);
    let conc = Formula::and_all(parts.iter().map(|&p| args.store().conc(p).clone()))
        .expect("sub-arguments include the argument itself or its trigger");
    let Arguments { store, oracle, .. } = args;
    store.intern(Step::Strict(parts), conc, oracle).0
}

/// Checks the structural requirements of each kind of step against the
/// theory and the oracle. Returns a description of the first violation.
pub fn validate_argument(args: &Arguments, id: ArgId) -> Result<(), String> {
    let store = args.store();
    let node = store.get(id);
    let at = args.theory();
    let fail = |msg: String| Err(format!("{}: {msg}", store.render(id)));
    match &node.step {
        Step::Premise => {
            let mut premises = at.premises();
            premises.extend(args.extensions().keys().cloned());
            if !premises.contains(&node.conc) {
                return fail("premise is not a fact or hypothesis".into());
            }
            if node.sub() != [id] || !node.hsub().is_empty() {
                return fail("premise with sub-arguments".into());
            }
        }
        Step::Strict(children) => {
            let premises: Vec<&Formula> = children.iter().map(|&c| store.conc(c)).collect();
            if !args.oracle().entails(&premises, &node.conc) {
                return fail("strict step without entailment".into());
            }
        }
        Step::Defeasible { rule, children } => {
            let Some(r) = at.rule(rule) else {
                return fail(format!("unknown rule {rule}"));
            };
            let body: Vec<&Formula> = children.iter().map(|&c| store.conc(c)).collect();
            if body != r.body.iter().collect::<Vec<_>>() || r.head != node.conc {
                return fail(format!("does not match rule {rule}"));
            }
        }
        Step::Rbc { trigger, cases } => {
            let hyps: Vec<Formula> = cases.iter().map(|(h, _)| h.clone()).collect();
            if hyps.len() < 2 || top_disjuncts(store.conc(*trigger)) != hyps {
                return fail("cases do not match the trigger's disjuncts".into());
            }
            for (h, c) in cases {
                if !store.get(*c).hsub().is_empty() {
                    return fail("nested rbc argument".into());
                }
                let in_case = match args.extensions().get(h) {
                    Some(g) => g.contains(*c),
                    None => args.base().contains(*c),
                };
                if !in_case {
                    return fail(format!("case argument not built under `{h}`"));
                }
            }
            let mut expected: Vec<ArgId> = store.get(*trigger).sub().to_vec();
            expected.push(id);
            expected.sort();
            if node.sub() != expected {
                return fail("Sub is not self plus Sub(trigger)".into());
            }
        }
    }
    Ok(())
}
