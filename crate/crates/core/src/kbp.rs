//! Knowledge-based programs.

use std::collections::HashSet;

use crate::action::{EpistemicAction, OnticAction};
use crate::error::{Error, Result};
use crate::logic::Sknnf;
use crate::problem::{ActionRef, PlanningProblem};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Kbp {
    Empty,
    Act(String),
    Seq(Box<Kbp>, Box<Kbp>),
    If(Sknnf, Box<Kbp>, Box<Kbp>),
    While(Sknnf, Box<Kbp>),
}

impl Kbp {
    pub fn act(name: impl Into<String>) -> Self {
        Kbp::Act(name.into())
    }

    /// Canonical sequencing: drops empty programs and associates to the right.
    pub fn seq(a: Kbp, b: Kbp) -> Self {
        match (a, b) {
            (Kbp::Empty, b) => b,
            (a, Kbp::Empty) => a,
            (Kbp::Seq(x, y), b) => Kbp::Seq(x, Box::new(Kbp::seq(*y, b))),
            (a, b) => Kbp::Seq(Box::new(a), Box::new(b)),
        }
    }

    /// Right-nested canonical sequence of the given programs.
    pub fn sequence<I>(items: I) -> Self
    where
        I: IntoIterator<Item = Kbp>,
        I::IntoIter: DoubleEndedIterator,
    {
        items
            .into_iter()
            .rev()
            .fold(Kbp::Empty, |acc, k| Kbp::seq(k, acc))
    }

    /// Sequence of named actions.
    pub fn actions_seq<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let items: Vec<Kbp> = names.into_iter().map(Kbp::act).collect();
        Kbp::sequence(items)
    }

    pub fn if_then_else(cond: Sknnf, then: Kbp, other: Kbp) -> Self {
        Kbp::If(cond, Box::new(then), Box::new(other))
    }

    pub fn while_do(cond: Sknnf, body: Kbp) -> Self {
        Kbp::While(cond, Box::new(body))
    }

    /// Action occurrences plus the size of every branching condition.
    pub fn size(&self) -> usize {
        match self {
            Kbp::Empty => 0,
            Kbp::Act(_) => 1,
            Kbp::Seq(a, b) => a.size() + b.size(),
            Kbp::If(c, a, b) => c.size() + a.size() + b.size(),
            Kbp::While(c, b) => c.size() + b.size(),
        }
    }

    pub fn is_while_free(&self) -> bool {
        match self {
            Kbp::Empty | Kbp::Act(_) => true,
            Kbp::Seq(a, b) | Kbp::If(_, a, b) => a.is_while_free() && b.is_while_free(),
            Kbp::While(..) => false,
        }
    }

    /// Number of action occurrences.
    pub fn action_count(&self) -> usize {
        match self {
            Kbp::Empty => 0,
            Kbp::Act(_) => 1,
            Kbp::Seq(a, b) | Kbp::If(_, a, b) => a.action_count() + b.action_count(),
            Kbp::While(_, b) => b.action_count(),
        }
    }

    /// Action names in syntactic order, with repetitions.
    pub fn action_names(&self) -> Vec<&str> {
        fn go<'a>(k: &'a Kbp, out: &mut Vec<&'a str>) {
            match k {
                Kbp::Empty => {}
                Kbp::Act(a) => out.push(a),
                Kbp::Seq(a, b) | Kbp::If(_, a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Kbp::While(_, b) => go(b, out),
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Same program with every sequence in canonical form.
    pub fn normalized(&self) -> Kbp {
        match self {
            Kbp::Empty | Kbp::Act(_) => self.clone(),
            Kbp::Seq(a, b) => Kbp::seq(a.normalized(), b.normalized()),
            Kbp::If(c, a, b) => Kbp::if_then_else(c.clone(), a.normalized(), b.normalized()),
            Kbp::While(c, b) => Kbp::while_do(c.clone(), b.normalized()),
        }
    }

    /// Checks that every action name resolves in `problem`.
    pub fn link(&self, problem: &PlanningProblem) -> Result<()> {
        for name in self.action_names() {
            if problem.action(name).is_none() {
                return Err(Error::UnknownAction(name.to_string()));
            }
        }
        Ok(())
    }

    /// Every branching condition is a feedback atom `Kφ` of the epistemic
    /// action executed immediately before, on every syntactic path.
    /// Unresolved action names make the answer `false`.
    pub fn is_standard_policy(&self, problem: &PlanningProblem) -> bool {
        let start: HashSet<Option<&str>> = [None].into_iter().collect();
        standard(self, problem, start).is_some()
    }
}

/// Possible "last action" sets after running `k` from any of `last`;
/// `None` when a condition violates the standard-policy rule.
fn standard<'a>(
    k: &'a Kbp,
    problem: &'a PlanningProblem,
    last: HashSet<Option<&'a str>>,
) -> Option<HashSet<Option<&'a str>>> {
    let cond_ok = |c: &Sknnf, last: &HashSet<Option<&str>>| {
        let Some(phi) = c.as_atom() else {
            return false;
        };
        last.iter().all(|l| match l.and_then(|n| problem.action(n)) {
            Some(ActionRef::Epistemic(a)) => a.feedbacks.contains(phi),
            _ => false,
        })
    };
    match k {
        Kbp::Empty => Some(last),
        Kbp::Act(a) => {
            problem.action(a)?;
            Some([Some(a.as_str())].into_iter().collect())
        }
        Kbp::Seq(a, b) => {
            let mid = standard(a, problem, last)?;
            standard(b, problem, mid)
        }
        Kbp::If(c, a, b) => {
            if !cond_ok(c, &last) {
                return None;
            }
            let mut out = standard(a, problem, last.clone())?;
            out.extend(standard(b, problem, last)?);
            Some(out)
        }
        Kbp::While(c, body) => {
            // the condition is evaluated on entry and after every iteration
            let mut seen = last;
            loop {
                if !cond_ok(c, &seen) {
                    return None;
                }
                let after = standard(body, problem, seen.clone())?;
                let before = seen.len();
                seen.extend(after);
                if seen.len() == before {
                    return Some(seen);
                }
            }
        }
    }
}

/// A program flattened into an arena with actions resolved against a problem.
#[derive(Clone, Debug)]
pub(crate) struct Flat<'a> {
    pub nodes: Vec<Node<'a>>,
    pub root: usize,
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Node<'a> {
    Empty,
    Ontic(&'a OnticAction),
    Epistemic(&'a EpistemicAction),
    Seq(usize, usize),
    If(&'a Sknnf, usize, usize),
    While(&'a Sknnf, usize),
}

impl<'a> Flat<'a> {
    pub fn new(k: &'a Kbp, problem: &'a PlanningProblem) -> Result<Self> {
        let mut nodes = Vec::new();
        let root = Self::push(k, problem, &mut nodes)?;
        Ok(Flat { nodes, root })
    }

    fn push(k: &'a Kbp, problem: &'a PlanningProblem, nodes: &mut Vec<Node<'a>>) -> Result<usize> {
        let node = match k {
            Kbp::Empty => Node::Empty,
            Kbp::Act(name) => match problem.action(name) {
                Some(ActionRef::Ontic(a)) => Node::Ontic(a),
                Some(ActionRef::Epistemic(a)) => Node::Epistemic(a),
                None => return Err(Error::UnknownAction(name.clone())),
            },
            Kbp::Seq(a, b) => {
                let a = Self::push(a, problem, nodes)?;
                let b = Self::push(b, problem, nodes)?;
                Node::Seq(a, b)
            }
            Kbp::If(c, a, b) => {
                let a = Self::push(a, problem, nodes)?;
                let b = Self::push(b, problem, nodes)?;
                Node::If(c, a, b)
            }
            Kbp::While(c, b) => {
                let b = Self::push(b, problem, nodes)?;
                Node::While(c, b)
            }
        };
        nodes.push(node);
        Ok(nodes.len() - 1)
    }
}

/// `K(φ)` for every feedback of an epistemic action.
pub fn feedback_atoms(a: &EpistemicAction) -> Vec<Sknnf> {
    a.feedbacks.iter().cloned().map(Sknnf::Know).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
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

    fn problem() -> PlanningProblem {
        parse_problem(EXAMPLE).unwrap()
    }

    #[test]
    fn sizes() {
        let p = problem();
        assert_eq!(Kbp::Empty.size(), 0);
        assert_eq!(Kbp::actions_seq(["a", "b"]).size(), 2);
        let pi1 = parse_kbp(
            "if !(K(ok1) | K(!ok1)) then test1 endif; if K(!ok1) then repair1 endif",
            &p.vocab,
        )
        .unwrap();
        // the first condition is stored in SKNNF: !K(ok1) & !K(!ok1), size 8
        assert_eq!(pi1.size(), 2 + 8 + 3);
    }

    #[test]
    fn seq_is_canonical() {
        let a = Kbp::seq(Kbp::seq(Kbp::act("a"), Kbp::act("b")), Kbp::act("c"));
        assert_eq!(a, Kbp::actions_seq(["a", "b", "c"]));
        assert_eq!(Kbp::seq(Kbp::Empty, Kbp::act("a")), Kbp::act("a"));
        let s = Kbp::Seq(Box::new(Kbp::act("a")), Box::new(Kbp::Empty));
        assert_eq!(s.size(), Kbp::act("a").size());
        assert_eq!(s.normalized(), Kbp::act("a"));
    }

    #[test]
    fn standard_policy_check() {
        let p = problem();
        let policy = parse_kbp(
            "repair1; test2; if K(!ok2) then repair2; test3; if K(!ok3) then repair3 endif else repair3 endif",
            &p.vocab,
        )
        .unwrap();
        assert!(policy.is_standard_policy(&p));
        let kbp = parse_kbp("if !(K(ok1) | K(!ok1)) then test1 endif", &p.vocab).unwrap();
        assert!(!kbp.is_standard_policy(&p));
        assert!(Kbp::Empty.is_standard_policy(&p));
        // branching after an ontic action is not allowed
        let bad = parse_kbp("test1; repair1; if K(ok1) then skip endif", &p.vocab).unwrap();
        assert!(!bad.is_standard_policy(&p));
        // one path reaches the branch without a preceding test
        let bad = parse_kbp(
            "test1; if K(ok1) then test2 endif; if K(ok2) then skip endif",
            &p.vocab,
        )
        .unwrap();
        assert!(!bad.is_standard_policy(&p));
        let looped = parse_kbp("test1; while K(!ok1) do repair1; test1 endwhile", &p.vocab).unwrap();
        assert!(looped.is_standard_policy(&p));
        let looped_bad = parse_kbp("test1; while K(!ok1) do test1; repair1 endwhile", &p.vocab).unwrap();
        assert!(!looped_bad.is_standard_policy(&p));
    }

    #[test]
    fn linking() {
        let p = problem();
        assert!(Kbp::act("repair1").link(&p).is_ok());
        assert!(matches!(Kbp::act("fly").link(&p), Err(Error::UnknownAction(_))));
        let k = Kbp::actions_seq(["repair1", "test1"]);
        let flat = Flat::new(&k, &p).unwrap();
        assert!(matches!(flat.nodes[flat.root], Node::Seq(..)));
    }
}
