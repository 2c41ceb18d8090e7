//! Trace enumeration, plan verification and trace equivalence.

use std::collections::{BTreeSet, HashSet};
use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kbp::{Flat, Kbp, Node};
use crate::logic::{KnowledgeState, Sknnf};
use crate::problem::PlanningProblem;
use crate::syntax::printer;

/// Resource guards for enumeration and compilation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Progression steps along a single branch.
    pub max_steps: usize,
    /// Complete traces enumerated.
    pub max_traces: usize,
    /// Action occurrences emitted by compilation.
    pub max_nodes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_steps: 100_000,
            max_traces: 1_000_000,
            max_nodes: 2_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Choice {
    /// An ontic action was applied.
    Ontic(String),
    /// Feedback `index` of an epistemic action was received.
    Feedback { action: String, index: usize },
    /// A condition was evaluated; `true` enters the then-branch or loop body.
    Branch(bool),
}

/// One resolution of the nondeterminism: the knowledge states visited, and
/// the labels of every step (branch labels do not add a state).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub states: Vec<KnowledgeState>,
    pub choices: Vec<Choice>,
}

impl Trace {
    pub fn start(m0: KnowledgeState) -> Self {
        Trace {
            states: vec![m0],
            choices: Vec::new(),
        }
    }

    pub fn last(&self) -> &KnowledgeState {
        self.states.last().expect("traces are nonempty")
    }

    /// One line per knowledge state, labelled by the step that produced it.
    pub fn render(&self, problem: &PlanningProblem) -> String {
        let mut out = format!("M0 = {}\n", self.states[0]);
        let mut t = 0;
        for c in &self.choices {
            let label = match c {
                Choice::Branch(_) => continue,
                Choice::Ontic(a) => a.clone(),
                Choice::Feedback { action, index } => {
                    let phi = problem
                        .epistemic
                        .iter()
                        .find(|a| &a.name == action)
                        .map(|a| printer::formula(&a.feedbacks[*index], &problem.vocab))
                        .unwrap_or_default();
                    format!("{action} [K({phi})]")
                }
            };
            t += 1;
            out.push_str(&format!("{label} -> M{t} = {}\n", self.states[t]));
        }
        out
    }
}

/// All traces of a program, or a prefix witnessing an infinite trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Enumeration {
    Finite(Vec<Trace>),
    InfiniteWitness(Trace),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(Trace),
    NonTerminating(Trace),
}

/// How a walk over the traces ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Walk {
    Completed,
    /// The visitor asked to stop.
    Stopped,
    /// A configuration repeated on the branch ending this prefix.
    Infinite(Trace),
}

/// Calls `visit` on every finite trace of `pi` from `m0`, depth first,
/// branching on every applicable feedback. Stops at the first repeated
/// configuration on any branch.
pub fn walk_traces(
    problem: &PlanningProblem,
    pi: &Kbp,
    m0: &KnowledgeState,
    limits: &Limits,
    visit: &mut dyn FnMut(&Trace) -> ControlFlow<()>,
) -> Result<Walk> {
    let flat = Flat::new(pi, problem)?;
    let mut w = Walker {
        flat: &flat,
        limits,
        visited: HashSet::new(),
        trace: Trace::start(m0.clone()),
        traces: 0,
        visit,
    };
    w.run(vec![flat.root], m0.clone())
}

struct Walker<'f, 'a, 'v> {
    flat: &'f Flat<'a>,
    limits: &'f Limits,
    visited: HashSet<(Vec<usize>, KnowledgeState)>,
    trace: Trace,
    traces: usize,
    visit: &'v mut dyn FnMut(&Trace) -> ControlFlow<()>,
}

impl Walker<'_, '_, '_> {
    fn run(&mut self, mut cont: Vec<usize>, mut m: KnowledgeState) -> Result<Walk> {
        let (base_states, base_choices) = (self.trace.states.len(), self.trace.choices.len());
        let mut added = Vec::new();
        let out = loop {
            let Some(id) = cont.pop() else {
                self.traces += 1;
                if self.traces > self.limits.max_traces {
                    return Err(Error::LimitExceeded(format!(
                        "more than {} traces",
                        self.limits.max_traces
                    )));
                }
                break match (self.visit)(&self.trace) {
                    ControlFlow::Continue(()) => Ok(Walk::Completed),
                    ControlFlow::Break(()) => Ok(Walk::Stopped),
                };
            };
            match self.flat.nodes[id] {
                Node::Empty => {}
                Node::Seq(a, b) => {
                    cont.push(b);
                    cont.push(a);
                }
                Node::If(c, a, b) => {
                    let h = c.holds(&m);
                    self.trace.choices.push(Choice::Branch(h));
                    cont.push(if h { a } else { b });
                }
                Node::While(c, body) => {
                    let h = c.holds(&m);
                    self.trace.choices.push(Choice::Branch(h));
                    if h {
                        cont.push(id);
                        let key = (cont.clone(), m.clone());
                        if self.visited.contains(&key) {
                            break Ok(Walk::Infinite(self.trace.clone()));
                        }
                        self.visited.insert(key.clone());
                        added.push(key);
                        cont.push(body);
                    }
                }
                Node::Ontic(a) => {
                    self.check_steps()?;
                    m = a.progress(&m);
                    self.trace.states.push(m.clone());
                    self.trace.choices.push(Choice::Ontic(a.name.clone()));
                }
                Node::Epistemic(a) => {
                    self.check_steps()?;
                    let mut result = Ok(Walk::Completed);
                    for i in a.applicable(&m) {
                        let next = a.progress(&m, i).expect("applicable feedback");
                        self.trace.states.push(next.clone());
                        self.trace.choices.push(Choice::Feedback {
                            action: a.name.clone(),
                            index: i,
                        });
                        let r = self.run(cont.clone(), next);
                        self.trace.states.pop();
                        self.trace.choices.pop();
                        match r {
                            Ok(Walk::Completed) => {}
                            other => {
                                result = other;
                                break;
                            }
                        }
                    }
                    break result;
                }
            }
        };
        for key in added {
            self.visited.remove(&key);
        }
        self.trace.states.truncate(base_states);
        self.trace.choices.truncate(base_choices);
        out
    }

    fn check_steps(&self) -> Result<()> {
        if self.trace.states.len() > self.limits.max_steps {
            return Err(Error::LimitExceeded(format!(
                "branch longer than {} steps",
                self.limits.max_steps
            )));
        }
        Ok(())
    }
}

/// Every trace of `pi` from the problem's initial state.
pub fn enumerate_traces(problem: &PlanningProblem, pi: &Kbp, limits: &Limits) -> Result<Enumeration> {
    enumerate_from(problem, pi, &problem.initial_state()?, limits)
}

pub fn enumerate_from(
    problem: &PlanningProblem,
    pi: &Kbp,
    m0: &KnowledgeState,
    limits: &Limits,
) -> Result<Enumeration> {
    let mut traces = Vec::new();
    let walk = walk_traces(problem, pi, m0, limits, &mut |t| {
        traces.push(t.clone());
        ControlFlow::Continue(())
    })?;
    Ok(match walk {
        Walk::Infinite(t) => Enumeration::InfiniteWitness(t),
        _ => Enumeration::Finite(traces),
    })
}

/// Validity of `pi` for the problem's initial state and goal.
pub fn verify_plan(problem: &PlanningProblem, pi: &Kbp, limits: &Limits) -> Result<Verdict> {
    verify_from(problem, pi, &problem.initial_state()?, &problem.goal, limits)
}

/// Validity of `pi` from `m0` for `goal`; the first failing trace is reported.
pub fn verify_from(
    problem: &PlanningProblem,
    pi: &Kbp,
    m0: &KnowledgeState,
    goal: &Sknnf,
    limits: &Limits,
) -> Result<Verdict> {
    let mut bad = None;
    let walk = walk_traces(problem, pi, m0, limits, &mut |t| {
        if goal.holds(t.last()) {
            ControlFlow::Continue(())
        } else {
            bad = Some(t.clone());
            ControlFlow::Break(())
        }
    })?;
    Ok(match walk {
        Walk::Completed => Verdict::Valid,
        Walk::Stopped => Verdict::Invalid(bad.expect("visitor stored the trace")),
        Walk::Infinite(t) => Verdict::NonTerminating(t),
    })
}

/// Knowledge-state sequences of every trace from `m0`; `NonTerminating`
/// when some trace is infinite.
pub fn trace_set(
    problem: &PlanningProblem,
    pi: &Kbp,
    m0: &KnowledgeState,
    limits: &Limits,
) -> Result<BTreeSet<Vec<KnowledgeState>>> {
    let mut set = BTreeSet::new();
    let walk = walk_traces(problem, pi, m0, limits, &mut |t| {
        set.insert(t.states.clone());
        ControlFlow::Continue(())
    })?;
    match walk {
        Walk::Infinite(_) => Err(Error::NonTerminating),
        _ => Ok(set),
    }
}

/// Equivalence in the initial state: equal sets of knowledge-state sequences.
pub fn equivalent_in(pi: &Kbp, pi2: &Kbp, problem: &PlanningProblem, limits: &Limits) -> Result<bool> {
    let m0 = problem.initial_state()?;
    Ok(trace_set(problem, pi, &m0, limits)? == trace_set(problem, pi2, &m0, limits)?)
}

/// One execution with feedbacks drawn by a seeded generator.
pub fn simulate(problem: &PlanningProblem, pi: &Kbp, seed: u64, limits: &Limits) -> Result<Trace> {
    let flat = Flat::new(pi, problem)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = problem.initial_state()?;
    let mut trace = Trace::start(m.clone());
    let mut cont = vec![flat.root];
    while let Some(id) = cont.pop() {
        match flat.nodes[id] {
            Node::Empty => {}
            Node::Seq(a, b) => {
                cont.push(b);
                cont.push(a);
            }
            Node::If(c, a, b) => {
                let h = c.holds(&m);
                trace.choices.push(Choice::Branch(h));
                cont.push(if h { a } else { b });
            }
            Node::While(c, body) => {
                let h = c.holds(&m);
                trace.choices.push(Choice::Branch(h));
                if h {
                    cont.push(id);
                    cont.push(body);
                }
            }
            Node::Ontic(a) => {
                m = a.progress(&m);
                trace.states.push(m.clone());
                trace.choices.push(Choice::Ontic(a.name.clone()));
            }
            Node::Epistemic(a) => {
                let options = a.applicable(&m);
                let i = options[rng.gen_range(0..options.len())];
                m = a.progress(&m, i).expect("applicable feedback");
                trace.states.push(m.clone());
                trace.choices.push(Choice::Feedback {
                    action: a.name.clone(),
                    index: i,
                });
            }
        }
        if trace.states.len() > limits.max_steps {
            return Err(Error::LimitExceeded(format!(
                "execution longer than {} steps",
                limits.max_steps
            )));
        }
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Formula;
    use crate::syntax::{parse_kbp, parse_problem};

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

    fn pi_text() -> String {
        (1..=3)
            .map(|i| {
                format!(
                    "if !(K(ok{i}) | K(!ok{i})) then test{i} endif; if K(!ok{i}) then repair{i} endif"
                )
            })
            .collect::<Vec<_>>()
            .join(";\n")
    }

    #[test]
    fn example_chain_is_a_trace() {
        let p = parse_problem(EXAMPLE).unwrap();
        let pi = parse_kbp(&pi_text(), &p.vocab).unwrap();
        let Enumeration::Finite(traces) = enumerate_traces(&p, &pi, &Limits::default()).unwrap() else {
            panic!("finite expected");
        };
        let m = |src: &str| {
            let mut v = p.vocab.clone();
            let f = crate::syntax::parse_formula(src, &mut v, crate::syntax::Names::Declared).unwrap();
            KnowledgeState::models(&f, 3).unwrap()
        };
        let chain = vec![
            p.initial_state().unwrap(),
            m("ok1 & (!ok2 | !ok3)"),
            m("ok1 & ok2 & !ok3"),
            m("ok1 & ok2 & ok3"),
        ];
        assert!(traces.iter().any(|t| t.states == chain));
        assert_eq!(traces.len(), 3);
    }

    #[test]
    fn verification_verdicts() {
        let p = parse_problem(EXAMPLE).unwrap();
        let lim = Limits::default();
        let pi = parse_kbp(&pi_text(), &p.vocab).unwrap();
        assert_eq!(verify_plan(&p, &pi, &lim).unwrap(), Verdict::Valid);
        match verify_plan(&p, &Kbp::Empty, &lim).unwrap() {
            Verdict::Invalid(t) => assert_eq!(t.states, vec![p.initial_state().unwrap()]),
            other => panic!("{other:?}"),
        }
        let lp = parse_kbp("while K(true) do repair1 endwhile", &p.vocab).unwrap();
        assert!(matches!(verify_plan(&p, &lp, &lim).unwrap(), Verdict::NonTerminating(_)));
        let lp = parse_kbp("while K(true) do skip endwhile", &p.vocab).unwrap();
        assert!(matches!(
            enumerate_traces(&p, &lp, &lim).unwrap(),
            Enumeration::InfiniteWitness(_)
        ));
    }

    #[test]
    fn empty_program_has_one_trace() {
        let p = parse_problem(EXAMPLE).unwrap();
        let e = enumerate_traces(&p, &Kbp::Empty, &Limits::default()).unwrap();
        assert_eq!(e, Enumeration::Finite(vec![Trace::start(p.initial_state().unwrap())]));
    }

    #[test]
    fn equivalence() {
        let p = parse_problem(EXAMPLE).unwrap();
        let lim = Limits::default();
        let pi = parse_kbp(&pi_text(), &p.vocab).unwrap();
        let pi_skip = Kbp::Seq(Box::new(pi.clone()), Box::new(Kbp::Empty));
        assert!(equivalent_in(&pi, &pi_skip, &p, &lim).unwrap());

        let t = parse_problem("var x\nepistemic tx: x ; !x\ngoal: true\n").unwrap();
        assert!(!equivalent_in(&Kbp::act("tx"), &Kbp::Empty, &t, &lim).unwrap());
    }

    #[test]
    fn loops_that_learn_terminate() {
        let p = parse_problem("var x\nontic flip: x' <-> !x\nepistemic tx: x ; !x\ngoal: K(x)\n").unwrap();
        let pi = parse_kbp("tx; while K(!x) do flip endwhile", &p.vocab).unwrap();
        assert_eq!(verify_plan(&p, &pi, &Limits::default()).unwrap(), Verdict::Valid);
        let t = simulate(&p, &pi, 7, &Limits::default()).unwrap();
        assert!(t.last().all_satisfy(&Formula::var(0)));
    }

    #[test]
    fn step_limit_is_an_error() {
        let p = parse_problem("var x\nontic flip: x' <-> !x\ngoal: true\n").unwrap();
        let pi = Kbp::actions_seq(["flip"; 5]);
        let lim = Limits {
            max_steps: 3,
            ..Limits::default()
        };
        assert!(matches!(verify_plan(&p, &pi, &lim), Err(Error::LimitExceeded(_))));
    }
}
