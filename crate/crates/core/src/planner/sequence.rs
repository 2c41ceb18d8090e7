//! Bounded search over action sequences.

use std::collections::{HashMap, VecDeque};

use super::positive::positive_entailment;
use super::{resource, Budget, ExistenceAnswer, Meter};
use crate::action::EpistemicAction;
use crate::error::{Error, Result};
use crate::kbp::Kbp;
use crate::problem::PlanningProblem;
use crate::trace::{verify_plan, Verdict};

/// A valid sequence of at most `k` actions. Applies to ontic-only problems
/// (breadth-first over knowledge states, so the witness is a shortest
/// sequence) and to epistemic-only problems with a positive goal (sets of
/// distinct actions by increasing size, checked by entailment and by trace
/// verification).
pub fn solve_bounded_sequence(problem: &PlanningProblem, k: usize, budget: &Budget) -> Result<ExistenceAnswer> {
    if problem.epistemic.is_empty() {
        resource(ontic(problem, k, budget))
    } else if problem.ontic.is_empty() && problem.goal.is_positive() {
        resource(epistemic_positive(problem, k, budget))
    } else {
        Err(Error::Precondition(
            "sequence search needs an ontic-only problem, or an epistemic-only problem with a positive goal"
                .into(),
        ))
    }
}

fn ontic(problem: &PlanningProblem, k: usize, budget: &Budget) -> Result<ExistenceAnswer> {
    let m0 = problem.initial_state()?;
    let mut parent = HashMap::from([(m0.clone(), None)]);
    let mut queue = VecDeque::from([(m0, 0usize)]);
    let mut meter = Meter::new(budget.max_work);
    while let Some((m, depth)) = queue.pop_front() {
        if problem.goal.holds(&m) {
            let mut names = Vec::new();
            let mut cur = m;
            while let Some(Some((prev, a))) = parent.get(&cur).cloned() {
                names.push(a);
                cur = prev;
            }
            names.reverse();
            return Ok(ExistenceAnswer::Exists(Kbp::actions_seq(names)));
        }
        if depth == k {
            continue;
        }
        for a in &problem.ontic {
            meter.tick()?;
            let n = a.progress(&m);
            if parent.contains_key(&n) {
                continue;
            }
            if parent.len() >= budget.max_states {
                return Err(Error::LimitExceeded(format!(
                    "more than {} knowledge states",
                    budget.max_states
                )));
            }
            parent.insert(n.clone(), Some((m.clone(), a.name.clone())));
            queue.push_back((n, depth + 1));
        }
    }
    Ok(ExistenceAnswer::None)
}

fn epistemic_positive(problem: &PlanningProblem, k: usize, budget: &Budget) -> Result<ExistenceAnswer> {
    let n = problem.epistemic.len();
    let mut meter = Meter::new(budget.max_work);
    for size in 0..=k.min(n) {
        let mut chosen = Vec::with_capacity(size);
        if let Some(set) = combos(n, size, 0, &mut chosen, &mut |set| {
            meter.tick()?;
            let actions: Vec<&EpistemicAction> = set.iter().map(|&i| &problem.epistemic[i]).collect();
            let plan = Kbp::actions_seq(actions.iter().map(|a| a.name.clone()));
            let fast = positive_entailment(problem, &actions, budget)?;
            let slow = verify_plan(problem, &plan, &budget.limits)? == Verdict::Valid;
            if fast != slow {
                return Err(Error::Precondition(
                    "internal: entailment check disagrees with trace verification".into(),
                ));
            }
            Ok(fast)
        })? {
            let names = set.into_iter().map(|i| problem.epistemic[i].name.clone());
            return Ok(ExistenceAnswer::Exists(Kbp::actions_seq(names)));
        }
    }
    Ok(ExistenceAnswer::None)
}

/// First `size`-subset of `start..n` (lexicographic) accepted by `accept`.
fn combos(
    n: usize,
    size: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    accept: &mut dyn FnMut(&[usize]) -> Result<bool>,
) -> Result<Option<Vec<usize>>> {
    if chosen.len() == size {
        return Ok(accept(chosen)?.then(|| chosen.clone()));
    }
    for i in start..n {
        if n - i < size - chosen.len() {
            break;
        }
        chosen.push(i);
        let r = combos(n, size, i + 1, chosen, accept)?;
        chosen.pop();
        if r.is_some() {
            return Ok(r);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_problem;

    #[test]
    fn ontic_setter() {
        let p = parse_problem("var x\nontic xp: x'\ngoal: K(x)\n").unwrap();
        let b = Budget::default();
        assert_eq!(
            solve_bounded_sequence(&p, 1, &b).unwrap(),
            ExistenceAnswer::Exists(Kbp::act("xp"))
        );
        assert_eq!(solve_bounded_sequence(&p, 0, &b).unwrap(), ExistenceAnswer::None);
    }

    #[test]
    fn smallest_sensing_set() {
        let p = parse_problem(
            "var x y\nepistemic tx: x ; !x\nepistemic ty: y ; !y\nepistemic txy: x & y ; !(x & y)\ngoal: K(x & y) | K(!(x & y))\n",
        )
        .unwrap();
        let b = Budget::default();
        assert_eq!(
            solve_bounded_sequence(&p, 2, &b).unwrap(),
            ExistenceAnswer::Exists(Kbp::act("txy"))
        );
        assert_eq!(solve_bounded_sequence(&p, 0, &b).unwrap(), ExistenceAnswer::None);
    }

    #[test]
    fn mixed_problems_rejected() {
        let p = parse_problem("var x\nontic xp: x'\nepistemic tx: x ; !x\ngoal: K(x)\n").unwrap();
        assert!(solve_bounded_sequence(&p, 1, &Budget::default()).is_err());
    }
}
