//! Epistemic-only problems with positive goals: extra sensing never hurts,
//! so a plan exists iff running every action once, in sequence, is one.

use super::{require_epistemic_only, resource, Budget, ExistenceAnswer, Meter};
use crate::action::EpistemicAction;
use crate::error::{Error, Result};
use crate::kbp::Kbp;
use crate::logic::{Formula, KnowledgeState};
use crate::problem::PlanningProblem;
use crate::trace::{verify_plan, Verdict};

pub fn solve_epistemic_positive(problem: &PlanningProblem, budget: &Budget) -> Result<ExistenceAnswer> {
    require_epistemic_only(problem)?;
    if !problem.goal.is_positive() {
        return Err(Error::Precondition("goal is not a positive formula".into()));
    }
    resource((|| {
        let plan = Kbp::actions_seq(problem.epistemic.iter().map(|a| a.name.clone()));
        let valid = verify_plan(problem, &plan, &budget.limits)? == Verdict::Valid;
        let all: Vec<&EpistemicAction> = problem.epistemic.iter().collect();
        if valid != positive_entailment(problem, &all, budget)? {
            return Err(Error::Precondition(
                "internal: entailment check disagrees with trace verification".into(),
            ));
        }
        Ok(if valid {
            ExistenceAnswer::Exists(plan)
        } else {
            ExistenceAnswer::None
        })
    })())
}

/// Whether `init ∧ φ_1 ∧ … ∧ φ_k` entails some disjunct of the goal's
/// K-DNF for every consistent choice of one feedback `φ_j` per action.
/// This is the trace-free check that performing `actions` in sequence is
/// valid; the goal must be positive.
pub fn positive_entailment(
    problem: &PlanningProblem,
    actions: &[&EpistemicAction],
    budget: &Budget,
) -> Result<bool> {
    let cover = problem
        .goal
        .positive_cover()
        .ok_or_else(|| Error::Precondition("goal is not a positive formula".into()))?;
    let m0 = problem.initial_state()?;
    let mut meter = Meter::new(budget.max_work);
    fn go(
        m: &KnowledgeState,
        actions: &[&EpistemicAction],
        cover: &[Formula],
        meter: &mut Meter,
    ) -> Result<bool> {
        meter.tick()?;
        let Some((a, rest)) = actions.split_first() else {
            return Ok(cover.iter().any(|psi| m.all_satisfy(psi)));
        };
        for phi in &a.feedbacks {
            if let Some(n) = m.filter(phi) {
                if !go(&n, rest, cover, meter)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
    go(&m0, actions, &cover, &mut meter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_problem;

    #[test]
    fn unsatisfiable_goal_body() {
        let p = parse_problem("var x\ngoal: K(!(x & !x))\n").unwrap();
        assert_eq!(
            solve_epistemic_positive(&p, &Budget::default()).unwrap(),
            ExistenceAnswer::Exists(Kbp::Empty)
        );
        let p = parse_problem("var x\ngoal: K(!x)\n").unwrap();
        assert_eq!(
            solve_epistemic_positive(&p, &Budget::default()).unwrap(),
            ExistenceAnswer::None
        );
    }

    #[test]
    fn all_tests_in_sequence() {
        let p = parse_problem(
            "var x y\nepistemic tx: x ; !x\nepistemic ty: y ; !y\ngoal: (K(x) | K(!x)) & (K(y) | K(!y))\n",
        )
        .unwrap();
        assert_eq!(
            solve_epistemic_positive(&p, &Budget::default()).unwrap(),
            ExistenceAnswer::Exists(Kbp::actions_seq(["tx", "ty"]))
        );
    }

    #[test]
    fn negative_goal_rejected() {
        let p = parse_problem("var x\ngoal: !K(x)\n").unwrap();
        assert!(solve_epistemic_positive(&p, &Budget::default()).is_err());
    }
}
