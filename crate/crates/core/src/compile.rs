//! Compilation of a KBP and an initial knowledge state into an equivalent
//! standard policy, and succinctness measurements.

use std::collections::HashSet;

use crate::action::EpistemicAction;
use crate::error::{Error, Result};
use crate::kbp::{Flat, Kbp, Node};
use crate::logic::{Formula, KnowledgeState, Sknnf, Vocabulary};
use crate::problem::PlanningProblem;
use crate::trace::Limits;

/// Distinct successors of `m` under the applicable feedbacks of `a`, in the
/// order a feedback cascade must test them: a successor contained in another
/// comes first, later-declared feedbacks before earlier ones otherwise. The
/// last entry is the cascade's unconditioned default.
pub fn cascade_order(a: &EpistemicAction, m: &KnowledgeState) -> Vec<(usize, KnowledgeState)> {
    let mut items: Vec<(usize, KnowledgeState)> = Vec::new();
    for i in a.applicable(m) {
        let next = a.progress(m, i).expect("applicable feedback");
        if !items.iter().any(|(_, s)| *s == next) {
            items.push((i, next));
        }
    }
    let mut ordered = Vec::with_capacity(items.len());
    while !items.is_empty() {
        let pick = (0..items.len())
            .rev()
            .find(|&j| {
                !items
                    .iter()
                    .enumerate()
                    .any(|(k, (_, s))| k != j && s.is_subset(&items[j].1))
            })
            .expect("proper inclusion is acyclic");
        ordered.push(items.remove(pick));
    }
    ordered
}

/// `if K(φ_i1) then π_1 else if ... else π_n`, for branches listed in
/// cascade order.
pub fn build_cascade(a: &EpistemicAction, branches: Vec<(usize, Kbp)>) -> Kbp {
    let mut it = branches.into_iter().rev();
    let Some((_, mut acc)) = it.next() else {
        return Kbp::Empty;
    };
    for (i, body) in it {
        acc = Kbp::if_then_else(Sknnf::Know(a.feedbacks[i].clone()), body, acc);
    }
    acc
}

/// The standard policy `f(pi, M⁰)` for the problem's initial state.
pub fn compile_policy(problem: &PlanningProblem, pi: &Kbp, limits: &Limits) -> Result<Kbp> {
    compile_from(problem, pi, &problem.initial_state()?, limits)
}

/// The standard policy `f(pi, m0)`. A repeated configuration is reported as
/// [`Error::NonTerminating`]; exceeding `limits.max_nodes` emitted actions as
/// [`Error::LimitExceeded`].
pub fn compile_from(
    problem: &PlanningProblem,
    pi: &Kbp,
    m0: &KnowledgeState,
    limits: &Limits,
) -> Result<Kbp> {
    let flat = Flat::new(pi, problem)?;
    let mut c = Compiler {
        flat: &flat,
        limits,
        emitted: 0,
        visiting: HashSet::new(),
    };
    c.go(vec![flat.root], m0.clone())
}

struct Compiler<'f, 'a> {
    flat: &'f Flat<'a>,
    limits: &'f Limits,
    emitted: usize,
    visiting: HashSet<(Vec<usize>, KnowledgeState)>,
}

impl Compiler<'_, '_> {
    fn emit(&mut self) -> Result<()> {
        self.emitted += 1;
        if self.emitted > self.limits.max_nodes {
            return Err(Error::LimitExceeded(format!(
                "policy larger than {} actions",
                self.limits.max_nodes
            )));
        }
        Ok(())
    }

    fn go(&mut self, mut cont: Vec<usize>, mut m: KnowledgeState) -> Result<Kbp> {
        let mut added = Vec::new();
        let mut prefix = Vec::new();
        let result = loop {
            let Some(id) = cont.pop() else {
                break Ok(Kbp::Empty);
            };
            match self.flat.nodes[id] {
                Node::Empty => {}
                Node::Seq(a, b) => {
                    cont.push(b);
                    cont.push(a);
                }
                Node::If(c, a, b) => cont.push(if c.holds(&m) { a } else { b }),
                Node::While(c, body) => {
                    if c.holds(&m) {
                        cont.push(id);
                        let key = (cont.clone(), m.clone());
                        if !self.visiting.insert(key.clone()) {
                            break Err(Error::NonTerminating);
                        }
                        added.push(key);
                        cont.push(body);
                    }
                }
                Node::Ontic(a) => {
                    if let Err(e) = self.emit() {
                        break Err(e);
                    }
                    m = a.progress(&m);
                    prefix.push(Kbp::act(a.name.clone()));
                }
                Node::Epistemic(a) => {
                    if let Err(e) = self.emit() {
                        break Err(e);
                    }
                    prefix.push(Kbp::act(a.name.clone()));
                    let mut branches = Vec::new();
                    let mut failed = None;
                    for (i, next) in cascade_order(a, &m) {
                        match self.go(cont.clone(), next) {
                            Ok(k) => branches.push((i, k)),
                            Err(e) => {
                                failed = Some(e);
                                break;
                            }
                        }
                    }
                    break match failed {
                        Some(e) => Err(e),
                        None => Ok(build_cascade(a, branches)),
                    };
                }
            }
        };
        for key in added {
            self.visiting.remove(&key);
        }
        let tail = result?;
        Ok(prefix.into_iter().rev().fold(tail, |acc, k| Kbp::seq(k, acc)))
    }
}

/// Test-chain family: `n` hidden variables, one test per variable, and the
/// program testing each variable in turn.
pub fn test_chain(n: usize) -> (PlanningProblem, Kbp) {
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let vocab = Vocabulary::from_names(names.iter().map(String::as_str));
    let goal = Sknnf::conj((0..n).map(Sknnf::knows_whether));
    let mut p = PlanningProblem::new(vocab, Formula::True, goal);
    for (v, name) in names.iter().enumerate() {
        p.epistemic
            .push(EpistemicAction::test(format!("test_{name}"), Formula::var(v)));
    }
    let pi = Kbp::actions_seq(p.epistemic.iter().map(|a| a.name.clone()));
    (p, pi)
}

/// One row of a succinctness table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeRow {
    pub n: usize,
    pub kbp_size: usize,
    pub policy_size: usize,
    /// Compilation ran out of budget; `policy_size` is a lower bound.
    pub lower_bound: bool,
}

impl SizeRow {
    pub fn csv(&self) -> String {
        let bound = if self.lower_bound { ">=" } else { "" };
        format!("{},{},{bound}{}", self.n, self.kbp_size, self.policy_size)
    }
}

/// Sizes of `pi_n` and of its compiled policy for each `n` in `ns`.
pub fn measure_succinctness(
    family: impl Fn(usize) -> Result<(PlanningProblem, Kbp)>,
    ns: impl IntoIterator<Item = usize>,
    limits: &Limits,
) -> Result<Vec<SizeRow>> {
    let mut rows = Vec::new();
    for n in ns {
        let (p, pi) = family(n)?;
        let (policy_size, lower_bound) = match compile_policy(&p, &pi, limits) {
            Ok(policy) => (policy.size(), false),
            Err(Error::LimitExceeded(_)) => (limits.max_nodes, true),
            Err(e) => return Err(e),
        };
        rows.push(SizeRow {
            n,
            kbp_size: pi.size(),
            policy_size,
            lower_bound,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_kbp, parse_problem};
    use crate::trace::equivalent_in;

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
    fn example_policy() {
        let p = parse_problem(EXAMPLE).unwrap();
        let pi_text: Vec<String> = (1..=3)
            .map(|i| format!("if !(K(ok{i}) | K(!ok{i})) then test{i} endif; if K(!ok{i}) then repair{i} endif"))
            .collect();
        let pi = parse_kbp(&pi_text.join(";"), &p.vocab).unwrap();
        let lim = Limits::default();
        let policy = compile_policy(&p, &pi, &lim).unwrap();
        let want = parse_kbp(
            "repair1; test2;
             if K(!ok2) then repair2; test3; if K(!ok3) then repair3 endif
             else repair3 endif",
            &p.vocab,
        )
        .unwrap();
        assert_eq!(policy, want);
        assert!(policy.is_standard_policy(&p));
        assert!(equivalent_in(&pi, &policy, &p, &lim).unwrap());
    }

    #[test]
    fn empty_and_loops() {
        let p = parse_problem(EXAMPLE).unwrap();
        let lim = Limits::default();
        assert_eq!(compile_policy(&p, &Kbp::Empty, &lim).unwrap(), Kbp::Empty);
        let lp = parse_kbp("while K(true) do repair1 endwhile", &p.vocab).unwrap();
        assert!(matches!(compile_policy(&p, &lp, &lim), Err(Error::NonTerminating)));
        let small = Limits {
            max_nodes: 2,
            ..lim
        };
        let seq = Kbp::actions_seq(["repair1", "repair2", "repair3"]);
        assert!(matches!(compile_policy(&p, &seq, &small), Err(Error::LimitExceeded(_))));
    }

    #[test]
    fn overlapping_feedbacks_cascade() {
        // feedbacks x, y, true overlap; the cascade must still route each
        // outcome to its own continuation
        let p = parse_problem(
            "var x y\nepistemic look: x ; y ; true\nepistemic tx: x ; !x\nepistemic ty: y ; !y\ngoal: true\n",
        )
        .unwrap();
        let pi = parse_kbp(
            "look; if K(x) then ty endif; if K(y) then tx endif",
            &p.vocab,
        )
        .unwrap();
        let lim = Limits::default();
        let policy = compile_policy(&p, &pi, &lim).unwrap();
        assert!(policy.is_standard_policy(&p));
        assert!(equivalent_in(&pi, &policy, &p, &lim).unwrap());
    }

    #[test]
    fn test_chain_sizes() {
        let rows = measure_succinctness(|n| Ok(test_chain(n)), 1..=3, &Limits::default()).unwrap();
        assert_eq!(rows[0].csv(), "1,1,4");
        for r in &rows {
            assert_eq!(r.kbp_size, r.n);
            assert!(r.policy_size >= (1 << r.n) - 1);
        }
    }
}
