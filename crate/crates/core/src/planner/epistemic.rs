//! Tree search for problems without ontic actions.
//!
//! The knowledge state only shrinks, so an action whose outcome may leave it
//! unchanged never helps on that branch, and no branch needs more than
//! `|A_E|` actions. Goals already settled false for every subset prune the
//! search.

use std::collections::HashMap;

use super::{after_sensing, require_epistemic_only, resource, Budget, ExistenceAnswer, Meter};
use crate::action::EpistemicAction;
use crate::compile::cascade_order;
use crate::error::Result;
use crate::kbp::Kbp;
use crate::logic::{KnowledgeState, Settled, Sknnf};
use crate::problem::PlanningProblem;

/// Existence of a plan made of epistemic actions only.
pub fn solve_existence_epistemic(problem: &PlanningProblem, budget: &Budget) -> Result<ExistenceAnswer> {
    require_epistemic_only(problem)?;
    let actions: Vec<&EpistemicAction> = problem.epistemic.iter().collect();
    let m0 = problem.initial_state()?;
    resource(search(&actions, &problem.goal, m0, budget, false))
}

/// Existence of a while-free plan in which every branch uses actions in the
/// given order (each at most once).
pub fn solve_wfoe(problem: &PlanningProblem, order: &[String], budget: &Budget) -> Result<ExistenceAnswer> {
    require_epistemic_only(problem)?;
    let idx = problem.order_indices(order)?;
    let actions: Vec<&EpistemicAction> = idx.iter().map(|&i| &problem.epistemic[i]).collect();
    let m0 = problem.initial_state()?;
    resource(search(&actions, &problem.goal, m0, budget, true))
}

fn search(
    actions: &[&EpistemicAction],
    goal: &Sknnf,
    m0: KnowledgeState,
    budget: &Budget,
    ordered: bool,
) -> Result<ExistenceAnswer> {
    let mut s = Search {
        actions,
        goal,
        ordered,
        memo: HashMap::new(),
        meter: Meter::new(budget.max_work),
        max_states: budget.max_states,
    };
    Ok(match s.solve(&m0, 0)? {
        Some(k) => ExistenceAnswer::Exists(k),
        None => ExistenceAnswer::None,
    })
}

struct Search<'a> {
    actions: &'a [&'a EpistemicAction],
    goal: &'a Sknnf,
    ordered: bool,
    /// Keyed by state and, in ordered mode, the first usable action.
    memo: HashMap<(KnowledgeState, usize), Option<Kbp>>,
    meter: Meter,
    max_states: usize,
}

impl Search<'_> {
    fn solve(&mut self, m: &KnowledgeState, from: usize) -> Result<Option<Kbp>> {
        if self.goal.holds(m) {
            return Ok(Some(Kbp::Empty));
        }
        if self.goal.settled(m) == Settled::Never {
            return Ok(None);
        }
        let key = (m.clone(), if self.ordered { from } else { 0 });
        if let Some(r) = self.memo.get(&key) {
            return Ok(r.clone());
        }
        if self.memo.len() >= self.max_states {
            return Err(crate::error::Error::LimitExceeded(format!(
                "more than {} search states",
                self.max_states
            )));
        }
        let mut found = None;
        let first = if self.ordered { from } else { 0 };
        'actions: for j in first..self.actions.len() {
            self.meter.tick()?;
            let a = self.actions[j];
            let outcomes = cascade_order(a, m);
            if outcomes.iter().any(|(_, n)| n == m) {
                continue;
            }
            let mut branches = Vec::with_capacity(outcomes.len());
            for (i, n) in outcomes {
                match self.solve(&n, j + 1)? {
                    Some(k) => branches.push((i, k)),
                    None => continue 'actions,
                }
            }
            found = Some(after_sensing(a, branches));
            break;
        }
        self.memo.insert(key, found.clone());
        Ok(found)
    }
}
