//! Least-fixpoint AND-OR search over the knowledge states reachable from I.

use std::collections::{HashMap, VecDeque};

use super::{after_sensing, resource, Budget, ExistenceAnswer, Meter};
use crate::compile::cascade_order;
use crate::error::{Error, Result};
use crate::kbp::Kbp;
use crate::logic::KnowledgeState;
use crate::problem::{ActionRef, PlanningProblem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableEntry {
    Goal,
    /// `action` indexes `problem.actions()`; every successor has a smaller rank.
    Solvable { action: usize, rank: usize },
    Unsolvable,
}

impl TableEntry {
    pub fn rank(&self) -> Option<usize> {
        match self {
            TableEntry::Goal => Some(0),
            TableEntry::Solvable { rank, .. } => Some(*rank),
            TableEntry::Unsolvable => None,
        }
    }
}

/// Outcome of the fixpoint: one entry per reachable knowledge state.
#[derive(Clone, Debug)]
pub struct SolvabilityTable {
    pub states: Vec<KnowledgeState>,
    pub entries: Vec<TableEntry>,
    /// Successor ids per state and action (distinct, in cascade order for
    /// epistemic actions).
    pub successors: Vec<Vec<Vec<usize>>>,
    /// `|S_t|` after each iteration `t = 0, 1, ...`.
    pub levels: Vec<usize>,
    index: HashMap<KnowledgeState, usize>,
}

impl SolvabilityTable {
    pub fn id(&self, m: &KnowledgeState) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// The initial state is always id 0.
    pub fn initial(&self) -> &TableEntry {
        &self.entries[0]
    }
}

/// Builds the reachable graph from I and runs the fixpoint.
pub fn solvability_table(problem: &PlanningProblem, budget: &Budget) -> Result<SolvabilityTable> {
    let actions: Vec<ActionRef> = problem.actions().collect();
    let init = problem.initial_state()?;
    let mut states = vec![init.clone()];
    let mut index = HashMap::from([(init, 0usize)]);
    let mut successors: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    let mut meter = Meter::new(budget.max_work);
    while let Some(s) = queue.pop_front() {
        let m = states[s].clone();
        let mut row = Vec::with_capacity(actions.len());
        for a in &actions {
            meter.tick()?;
            let next: Vec<KnowledgeState> = match a {
                ActionRef::Ontic(o) => vec![o.progress(&m)],
                ActionRef::Epistemic(e) => cascade_order(e, &m).into_iter().map(|(_, n)| n).collect(),
            };
            let mut ids = Vec::with_capacity(next.len());
            for n in next {
                let id = match index.get(&n) {
                    Some(&id) => id,
                    None => {
                        if states.len() >= budget.max_states {
                            return Err(Error::LimitExceeded(format!(
                                "more than {} reachable knowledge states",
                                budget.max_states
                            )));
                        }
                        states.push(n.clone());
                        index.insert(n, states.len() - 1);
                        queue.push_back(states.len() - 1);
                        states.len() - 1
                    }
                };
                ids.push(id);
            }
            row.push(ids);
        }
        debug_assert_eq!(successors.len(), s);
        successors.push(row);
    }

    let mut entries: Vec<TableEntry> = states
        .iter()
        .map(|m| {
            if problem.goal.holds(m) {
                TableEntry::Goal
            } else {
                TableEntry::Unsolvable
            }
        })
        .collect();
    let mut solved = entries.iter().filter(|e| **e == TableEntry::Goal).count();
    let mut levels = vec![solved];
    for t in 1.. {
        let mut changed = Vec::new();
        for s in 0..states.len() {
            if entries[s] != TableEntry::Unsolvable {
                continue;
            }
            for (ai, succ) in successors[s].iter().enumerate() {
                meter.tick()?;
                let ok = succ
                    .iter()
                    .all(|&n| entries[n].rank().is_some_and(|r| r < t));
                if ok {
                    changed.push((s, ai));
                    break;
                }
            }
        }
        if changed.is_empty() {
            break;
        }
        for (s, action) in changed {
            entries[s] = TableEntry::Solvable { action, rank: t };
            solved += 1;
        }
        levels.push(solved);
    }
    Ok(SolvabilityTable {
        states,
        entries,
        successors,
        levels,
        index,
    })
}

/// Unbounded plan existence; the witness is a while-free standard policy
/// following decreasing ranks.
pub fn solve_existence(problem: &PlanningProblem, budget: &Budget) -> Result<ExistenceAnswer> {
    resource((|| {
        let table = solvability_table(problem, budget)?;
        if table.initial().rank().is_none() {
            return Ok(ExistenceAnswer::None);
        }
        Ok(ExistenceAnswer::Exists(extract(problem, &table, 0)))
    })())
}

fn extract(problem: &PlanningProblem, table: &SolvabilityTable, s: usize) -> Kbp {
    match table.entries[s] {
        TableEntry::Goal => Kbp::Empty,
        TableEntry::Unsolvable => unreachable!("extraction follows solved states"),
        TableEntry::Solvable { action, .. } => {
            let succ = &table.successors[s][action];
            match problem.actions().nth(action).expect("action index") {
                ActionRef::Ontic(a) => Kbp::seq(Kbp::act(a.name.clone()), extract(problem, table, succ[0])),
                ActionRef::Epistemic(a) => {
                    let order = cascade_order(a, &table.states[s]);
                    let branches = order
                        .into_iter()
                        .zip(succ)
                        .map(|((i, _), &n)| (i, extract(problem, table, n)))
                        .collect();
                    after_sensing(a, branches)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_problem;
    use crate::trace::{enumerate_traces, verify_plan, Enumeration, Limits, Verdict};

    const EXAMPLE: &str = "\
var ok1 ok2 ok3
init: (ok1 <-> ok2 & ok3) & (!ok2 | !ok3)
ontic repair1: ok1' & frame(ok2, ok3)
ontic repair2: ok2' & frame(ok1, ok3)
ontic repair3: ok3' & frame(ok1, ok2)
epistemic test1: ok1 ; !ok1
epistemic test2: ok2 ; !ok2
epistemic test3: ok3 ; !ok3
goal: K(ok1 & ok2 & ok3)
";

    #[test]
    fn example_problem_is_solvable() {
        let p = parse_problem(EXAMPLE).unwrap();
        let budget = Budget::default();
        let ExistenceAnswer::Exists(w) = solve_existence(&p, &budget).unwrap() else {
            panic!("expected a plan");
        };
        assert_eq!(verify_plan(&p, &w, &Limits::default()).unwrap(), Verdict::Valid);
        assert!(w.is_standard_policy(&p));
        // blind repairs are the shortest plan
        assert_eq!(w, Kbp::actions_seq(["repair1", "repair2", "repair3"]));
    }

    #[test]
    fn ranks_bound_trace_lengths() {
        let p = parse_problem(
            "var x y\nontic fx: (x' <-> !x) & frame(y)\nepistemic tx: x ; !x\nepistemic ty: y ; !y\ngoal: K(x) & (K(y) | K(!y))\n",
        )
        .unwrap();
        let budget = Budget::default();
        let table = solvability_table(&p, &budget).unwrap();
        assert!(table.levels.windows(2).all(|w| w[0] <= w[1]));
        let rank = table.initial().rank().unwrap();
        let ExistenceAnswer::Exists(w) = solve_existence(&p, &budget).unwrap() else {
            panic!();
        };
        let Enumeration::Finite(traces) = enumerate_traces(&p, &w, &Limits::default()).unwrap() else {
            panic!();
        };
        assert!(traces.iter().all(|t| t.states.len() - 1 <= rank));
    }

    #[test]
    fn unsatisfiable_formula_has_empty_plan() {
        let p = parse_problem("var x\ngoal: K(!(x & !x))\n").unwrap();
        assert_eq!(
            solve_existence(&p, &Budget::default()).unwrap(),
            ExistenceAnswer::Exists(Kbp::Empty)
        );
        let p = parse_problem("var x\nepistemic tx: x ; !x\ngoal: K(x)\n").unwrap();
        assert_eq!(solve_existence(&p, &Budget::default()).unwrap(), ExistenceAnswer::None);
    }

    #[test]
    fn budget_gives_unknown() {
        let p = parse_problem(EXAMPLE).unwrap();
        let budget = Budget {
            max_states: 2,
            ..Budget::default()
        };
        assert!(matches!(
            solve_existence(&p, &budget).unwrap(),
            ExistenceAnswer::Unknown(_)
        ));
    }
}
