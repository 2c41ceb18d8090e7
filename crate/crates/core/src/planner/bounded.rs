//! Bounded existence over while-free KBPs whose conditions come from a
//! finite vocabulary.
//!
//! A while-free program is a right-nested sequence of items, each an action
//! or an `if`. Running it on a set of knowledge states yields the set of
//! final knowledge states, so the search works over such sets: for a set and
//! a size budget it tabulates every reachable output set with a smallest
//! program producing it.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use super::{resource, solve_existence, Budget, ExistenceAnswer, Meter};
use crate::error::{Error, Result};
use crate::kbp::{feedback_atoms, Kbp};
use crate::logic::{Formula, KnowledgeState, Sknnf};
use crate::problem::{ActionRef, PlanningProblem};

/// `Kx`, `K¬x` and `¬Kx ∧ ¬K¬x` for each variable, then every feedback
/// atom, without repetitions.
pub fn default_vocabulary(problem: &PlanningProblem) -> Vec<Sknnf> {
    let mut out: Vec<Sknnf> = Vec::new();
    let mut push = |c: Sknnf| {
        if !out.contains(&c) {
            out.push(c);
        }
    };
    for v in 0..problem.nvars() {
        push(Sknnf::know(Formula::literal(v, true)));
        push(Sknnf::know(Formula::literal(v, false)));
        push(Sknnf::ignores(v));
    }
    for a in &problem.epistemic {
        for c in feedback_atoms(a) {
            push(c);
        }
    }
    out
}

/// A while-free plan of size at most `k` branching only on `vocab`.
///
/// `None` is exact when no plan exists at all, when the problem's
/// vocabulary is flagged sufficient, or when branching cannot help (no
/// epistemic actions, or only epistemic actions and a positive goal).
/// Otherwise a failed search is `Unknown("vocabulary-limited")`.
pub fn solve_bounded(
    problem: &PlanningProblem,
    k: usize,
    vocab: &[Sknnf],
    budget: &Budget,
) -> Result<ExistenceAnswer> {
    if solve_existence(problem, budget)? == ExistenceAnswer::None {
        return Ok(ExistenceAnswer::None);
    }
    resource((|| {
        let m0 = problem.initial_state()?;
        let mut s = Search::new(problem, vocab, budget);
        let start: Set = Rc::new(BTreeSet::from([m0]));
        for b in 0..=k {
            if let Some(p) = s.solve(&start, b)? {
                return Ok(ExistenceAnswer::Exists(p));
            }
        }
        let exact = problem.conditions_sufficient
            || problem.epistemic.is_empty()
            || (problem.ontic.is_empty() && problem.goal.is_positive());
        Ok(if exact {
            ExistenceAnswer::None
        } else {
            ExistenceAnswer::Unknown("vocabulary-limited".into())
        })
    })())
}

type Set = Rc<BTreeSet<KnowledgeState>>;
type Table = Rc<HashMap<Set, (usize, Kbp)>>;

struct Search<'a> {
    problem: &'a PlanningProblem,
    vocab: &'a [Sknnf],
    actions: Vec<ActionRef<'a>>,
    /// Per state, its successors under each action.
    succ: HashMap<KnowledgeState, Rc<Vec<Vec<KnowledgeState>>>>,
    /// Output table of a set, with the budget it was computed for.
    reach: HashMap<Set, (usize, Table)>,
    /// Largest budget known to be insufficient for a set.
    failed: HashMap<Set, usize>,
    meter: Meter,
    max_states: usize,
}

impl<'a> Search<'a> {
    fn new(problem: &'a PlanningProblem, vocab: &'a [Sknnf], budget: &Budget) -> Self {
        Search {
            problem,
            vocab,
            actions: problem.actions().collect(),
            succ: HashMap::new(),
            reach: HashMap::new(),
            failed: HashMap::new(),
            meter: Meter::new(budget.max_work),
            max_states: budget.max_states,
        }
    }

    fn successors(&mut self, m: &KnowledgeState) -> Rc<Vec<Vec<KnowledgeState>>> {
        if let Some(r) = self.succ.get(m) {
            return r.clone();
        }
        let row: Vec<Vec<KnowledgeState>> = self
            .actions
            .iter()
            .map(|a| match a {
                ActionRef::Ontic(o) => vec![o.progress(m)],
                ActionRef::Epistemic(e) => e
                    .applicable(m)
                    .into_iter()
                    .filter_map(|i| e.progress(m, i))
                    .collect(),
            })
            .collect();
        let row = Rc::new(row);
        self.succ.insert(m.clone(), row.clone());
        row
    }

    fn progress(&mut self, s: &Set, a: usize) -> Set {
        let mut out = BTreeSet::new();
        for m in s.iter() {
            out.extend(self.successors(m)[a].iter().cloned());
        }
        Rc::new(out)
    }

    fn split(&self, s: &Set, c: &Sknnf) -> Option<(Set, Set)> {
        let (yes, no): (BTreeSet<_>, BTreeSet<_>) = s.iter().cloned().partition(|m| c.holds(m));
        (!yes.is_empty() && !no.is_empty()).then(|| (Rc::new(yes), Rc::new(no)))
    }

    fn guard(&self) -> Result<()> {
        if self.reach.len() + self.failed.len() > self.max_states {
            Err(Error::LimitExceeded(format!(
                "more than {} knowledge-state sets",
                self.max_states
            )))
        } else {
            Ok(())
        }
    }

    /// A program of size at most `b` taking every member of `s` to the goal.
    fn solve(&mut self, s: &Set, b: usize) -> Result<Option<Kbp>> {
        if s.iter().all(|m| self.problem.goal.holds(m)) {
            return Ok(Some(Kbp::Empty));
        }
        if b == 0 || self.failed.get(s).is_some_and(|&f| f >= b) {
            return Ok(None);
        }
        self.guard()?;
        for a in 0..self.actions.len() {
            self.meter.tick()?;
            let next = self.progress(s, a);
            if let Some(p) = self.solve(&next, b - 1)? {
                return Ok(Some(Kbp::seq(Kbp::act(self.actions[a].name()), p)));
            }
        }
        for c in self.vocab {
            let Some(head_max) = b.checked_sub(c.size()) else {
                continue;
            };
            let Some((yes, no)) = self.split(s, c) else {
                continue;
            };
            for (merged, size, head) in self.branches(c, &yes, &no, head_max)? {
                if let Some(p) = self.solve(&merged, b - c.size() - size)? {
                    return Ok(Some(Kbp::seq(head, p)));
                }
            }
        }
        let f = self.failed.entry(s.clone()).or_insert(0);
        *f = (*f).max(b);
        Ok(None)
    }

    /// Every `if c then p1 else p2` with `|p1| + |p2| <= max`, as merged
    /// output set, `|p1| + |p2|` and the program.
    fn branches(&mut self, c: &Sknnf, yes: &Set, no: &Set, max: usize) -> Result<Vec<(Set, usize, Kbp)>> {
        let mut out = Vec::new();
        let t1 = self.table(yes, max)?;
        for (o1, (s1, p1)) in t1.iter() {
            if *s1 > max {
                continue;
            }
            let t2 = self.table(no, max - s1)?;
            for (o2, (s2, p2)) in t2.iter() {
                self.meter.tick()?;
                if s1 + s2 > max || s1 + s2 == 0 || p1 == p2 {
                    continue;
                }
                let merged: BTreeSet<_> = o1.union(o2).cloned().collect();
                out.push((
                    Rc::new(merged),
                    s1 + s2,
                    Kbp::if_then_else(c.clone(), p1.clone(), p2.clone()),
                ));
            }
        }
        Ok(out)
    }

    /// Output sets of all programs of size at most `b` run on `s`, each with
    /// a smallest program. Entries may exceed `b` when a larger table was
    /// cached; callers filter by size.
    fn table(&mut self, s: &Set, b: usize) -> Result<Table> {
        if let Some((cb, t)) = self.reach.get(s) {
            if *cb >= b {
                return Ok(t.clone());
            }
        }
        self.guard()?;
        let mut t: HashMap<Set, (usize, Kbp)> = HashMap::from([(s.clone(), (0, Kbp::Empty))]);
        let insert = |t: &mut HashMap<Set, (usize, Kbp)>, o: &Set, size: usize, p: Kbp| {
            if t.get(o).is_none_or(|(old, _)| *old > size) {
                t.insert(o.clone(), (size, p));
            }
        };
        if b >= 1 {
            for a in 0..self.actions.len() {
                self.meter.tick()?;
                let next = self.progress(s, a);
                let sub = self.table(&next, b - 1)?;
                for (o, (size, p)) in sub.iter() {
                    if *size < b {
                        let prog = Kbp::seq(Kbp::act(self.actions[a].name()), p.clone());
                        insert(&mut t, o, size + 1, prog);
                    }
                }
            }
        }
        for c in self.vocab {
            let Some(head_max) = b.checked_sub(c.size()) else {
                continue;
            };
            let Some((yes, no)) = self.split(s, c) else {
                continue;
            };
            for (merged, size, head) in self.branches(c, &yes, &no, head_max)? {
                let used = c.size() + size;
                let sub = self.table(&merged, b - used)?;
                for (o, (rest, p)) in sub.iter() {
                    if used + rest <= b {
                        insert(&mut t, o, used + rest, Kbp::seq(head.clone(), p.clone()));
                    }
                }
            }
        }
        let t = Rc::new(t);
        self.reach.insert(s.clone(), (b, t.clone()));
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_problem;
    use crate::trace::{verify_plan, Limits, Verdict};

    #[test]
    fn trivial_goal_needs_nothing() {
        let p = parse_problem("var x\ngoal: K(true)\n").unwrap();
        let b = Budget::default();
        assert_eq!(
            solve_bounded(&p, 0, &default_vocabulary(&p), &b).unwrap(),
            ExistenceAnswer::Exists(Kbp::Empty)
        );
    }

    #[test]
    fn branching_plan_found_within_bound() {
        // sense x, then copy it into y: needs a branch on the feedback
        let text = "var x y\nontic sy: y' & frame(x)\nontic cy: !y' & frame(x)\nepistemic tx: x ; !x\ngoal: K(x <-> y)\n";
        let p = parse_problem(text).unwrap();
        let b = Budget::default();
        let vocab = default_vocabulary(&p);
        let a = solve_bounded(&p, 6, &vocab, &b).unwrap();
        let w = a.witness().expect("plan");
        assert_eq!(verify_plan(&p, w, &Limits::default()).unwrap(), Verdict::Valid);
        assert!(w.size() <= 6);
        // tx; if K(x) then sy else cy has size exactly 5
        assert!(solve_bounded(&p, 5, &vocab, &b).unwrap().witness().is_some());
        // a branch costs at least its condition plus two actions
        assert_eq!(
            solve_bounded(&p, 2, &vocab, &b).unwrap(),
            ExistenceAnswer::Unknown("vocabulary-limited".into())
        );
    }

    #[test]
    fn unsolvable_is_exact() {
        let p = parse_problem("var x\nepistemic tx: x ; !x\ngoal: K(x)\n").unwrap();
        assert_eq!(
            solve_bounded(&p, 5, &default_vocabulary(&p), &Budget::default()).unwrap(),
            ExistenceAnswer::None
        );
    }

    #[test]
    fn default_vocabulary_has_no_repeats() {
        let p = parse_problem("var x\nepistemic tx: x ; !x\ngoal: K(x)\n").unwrap();
        // Kx and K!x coincide with the feedback atoms
        assert_eq!(default_vocabulary(&p).len(), 3);
    }
}
