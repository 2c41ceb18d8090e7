//! Plan-existence solvers.
//!
//! Every solver returns an [`ExistenceAnswer`]; witnesses are re-verified by
//! [`solve`] before they are handed out.

mod bounded;
mod epistemic;
mod fixpoint;
mod positive;
mod sequence;

use std::fmt;

pub use bounded::{default_vocabulary, solve_bounded};
pub use epistemic::{solve_existence_epistemic, solve_wfoe};
pub use fixpoint::{solvability_table, solve_existence, SolvabilityTable, TableEntry};
pub use positive::{positive_entailment, solve_epistemic_positive};
pub use sequence::solve_bounded_sequence;

use crate::action::EpistemicAction;
use crate::compile::build_cascade;
use crate::error::{Error, Result};
use crate::kbp::Kbp;
use crate::problem::PlanningProblem;
use crate::trace::{verify_plan, Limits, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExistenceAnswer {
    Exists(Kbp),
    None,
    Unknown(String),
}

impl ExistenceAnswer {
    pub fn exists(&self) -> Option<bool> {
        match self {
            ExistenceAnswer::Exists(_) => Some(true),
            ExistenceAnswer::None => Some(false),
            ExistenceAnswer::Unknown(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&Kbp> {
        match self {
            ExistenceAnswer::Exists(k) => Some(k),
            _ => None,
        }
    }

    /// `exists`, `none` or `unknown`.
    pub fn verdict(&self) -> &'static str {
        match self {
            ExistenceAnswer::Exists(_) => "exists",
            ExistenceAnswer::None => "none",
            ExistenceAnswer::Unknown(_) => "unknown",
        }
    }
}

/// Resource limits shared by the solvers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Distinct knowledge states (or frontier sets) a solver may create.
    pub max_states: usize,
    /// Elementary search steps.
    pub max_work: usize,
    /// Limits for verification of candidates and witnesses.
    pub limits: Limits,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_states: 200_000,
            max_work: 20_000_000,
            limits: Limits::default(),
        }
    }
}

/// Counts work against a budget.
pub(crate) struct Meter {
    work: usize,
    max: usize,
}

impl Meter {
    pub fn new(max: usize) -> Self {
        Meter { work: 0, max }
    }

    pub fn tick(&mut self) -> Result<()> {
        self.work += 1;
        if self.work > self.max {
            Err(Error::LimitExceeded(format!("more than {} search steps", self.max)))
        } else {
            Ok(())
        }
    }
}

/// Maps resource exhaustion to `Unknown`.
pub(crate) fn resource(r: Result<ExistenceAnswer>) -> Result<ExistenceAnswer> {
    match r {
        Err(Error::LimitExceeded(msg)) => Ok(ExistenceAnswer::Unknown(format!("resource: {msg}"))),
        other => other,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Auto,
    Fixpoint,
    Epistemic,
    Positive,
    Sequence,
    Bounded,
    Wfoe,
}

impl Mode {
    pub const ALL: [Mode; 7] = [
        Mode::Auto,
        Mode::Fixpoint,
        Mode::Epistemic,
        Mode::Positive,
        Mode::Sequence,
        Mode::Bounded,
        Mode::Wfoe,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Mode::Auto => "auto",
            Mode::Fixpoint => "fixpoint",
            Mode::Epistemic => "epistemic",
            Mode::Positive => "positive",
            Mode::Sequence => "sequence",
            Mode::Bounded => "bounded",
            Mode::Wfoe => "wfoe",
        }
    }

    pub fn parse(s: &str) -> Option<Mode> {
        Mode::ALL.into_iter().find(|m| m.name() == s)
    }

    /// The solver `Auto` picks for a problem: ordered search when an order is
    /// given, bounded search when a bound is given, otherwise by action kinds
    /// and goal positivity.
    pub fn for_problem(problem: &PlanningProblem) -> Mode {
        let epistemic_only = problem.ontic.is_empty();
        let positive = problem.goal.is_positive();
        if problem.order.is_some() && epistemic_only {
            Mode::Wfoe
        } else if problem.bound.is_some() {
            if problem.epistemic.is_empty() || (epistemic_only && positive) {
                Mode::Sequence
            } else {
                Mode::Bounded
            }
        } else if epistemic_only && positive {
            Mode::Positive
        } else if epistemic_only {
            Mode::Epistemic
        } else {
            Mode::Fixpoint
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Runs the selected solver and re-verifies any witness. `bound` overrides
/// the problem's bound.
pub fn solve(
    problem: &PlanningProblem,
    mode: Mode,
    bound: Option<usize>,
    budget: &Budget,
) -> Result<ExistenceAnswer> {
    let mode = if mode == Mode::Auto {
        let mut p = problem.clone();
        p.bound = bound.or(p.bound);
        Mode::for_problem(&p)
    } else {
        mode
    };
    let bound = bound.or(problem.bound);
    let need_bound = || {
        bound.ok_or_else(|| Error::Precondition(format!("mode `{mode}` needs a bound")))
    };
    let answer = match mode {
        Mode::Auto => unreachable!("resolved above"),
        Mode::Fixpoint => solve_existence(problem, budget)?,
        Mode::Epistemic => solve_existence_epistemic(problem, budget)?,
        Mode::Positive => solve_epistemic_positive(problem, budget)?,
        Mode::Sequence => solve_bounded_sequence(problem, need_bound()?, budget)?,
        Mode::Bounded => {
            let vocab = if problem.conditions_sufficient {
                problem.conditions.clone()
            } else {
                let mut v = default_vocabulary(problem);
                for c in &problem.conditions {
                    if !v.contains(c) {
                        v.push(c.clone());
                    }
                }
                v
            };
            solve_bounded(problem, need_bound()?, &vocab, budget)?
        }
        Mode::Wfoe => {
            let order = problem
                .order
                .as_ref()
                .ok_or_else(|| Error::Precondition("mode `wfoe` needs an order".into()))?;
            solve_wfoe(problem, order, budget)?
        }
    };
    if let ExistenceAnswer::Exists(w) = &answer {
        check_witness(problem, w, &budget.limits)?;
        if matches!(mode, Mode::Sequence | Mode::Bounded) && w.size() > bound.unwrap_or(usize::MAX) {
            return Err(Error::LimitExceeded(format!(
                "internal: witness of size {} exceeds the bound",
                w.size()
            )));
        }
    }
    Ok(answer)
}

/// Fails unless `w` is a valid plan.
pub fn check_witness(problem: &PlanningProblem, w: &Kbp, limits: &Limits) -> Result<()> {
    match verify_plan(problem, w, limits)? {
        Verdict::Valid => Ok(()),
        _ => Err(Error::Precondition(
            "internal: solver witness does not verify".into(),
        )),
    }
}

/// `a` followed by a feedback cascade, or by the common continuation when
/// every branch agrees.
pub(crate) fn after_sensing(a: &EpistemicAction, branches: Vec<(usize, Kbp)>) -> Kbp {
    let body = match branches.split_first() {
        Some(((_, first), rest)) if rest.iter().all(|(_, k)| k == first) => first.clone(),
        _ => build_cascade(a, branches),
    };
    Kbp::seq(Kbp::act(a.name.clone()), body)
}

pub(crate) fn require_epistemic_only(problem: &PlanningProblem) -> Result<()> {
    if problem.ontic.is_empty() {
        Ok(())
    } else {
        Err(Error::Precondition(
            "solver requires a problem without ontic actions".into(),
        ))
    }
}
