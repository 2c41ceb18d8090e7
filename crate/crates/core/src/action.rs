//! Ontic and epistemic actions and the progression of knowledge states.

use crate::error::{Error, Result};
use crate::logic::{submasks, successors_of, Formula, KnowledgeState};

/// World-changing action given by a transition theory over `X ∪ X'`.
/// Variables whose primed copy the theory does not mention are unconstrained
/// after the action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OnticAction {
    pub name: String,
    pub theory: Formula,
}

/// Sensing action given by its list of feedbacks `K φ_1, …, K φ_n`
/// (only the objective bodies are stored).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpistemicAction {
    pub name: String,
    pub feedbacks: Vec<Formula>,
}

fn render_state(s: u64, nvars: usize) -> String {
    (0..nvars).map(|v| if s >> v & 1 == 1 { '1' } else { '0' }).collect()
}

impl OnticAction {
    pub fn new(name: impl Into<String>, theory: Formula) -> Self {
        OnticAction {
            name: name.into(),
            theory,
        }
    }

    /// Every state has at least one successor.
    pub fn validate(&self, nvars: usize) -> Result<()> {
        if let Some(v) = self.theory.max_var() {
            if v >= nvars {
                return Err(Error::Malformed(format!(
                    "theory of `{}` mentions undeclared variable #{v}",
                    self.name
                )));
            }
        }
        for s in submasks(self.theory.vars_mask()) {
            if successors_of(&self.theory, s, nvars).is_empty() {
                return Err(Error::EmptySuccessor {
                    action: self.name.clone(),
                    state: render_state(s, nvars),
                });
            }
        }
        Ok(())
    }

    /// `Prog(M, a)`. Panics if the action was not validated and some member
    /// of `m` has no successor.
    pub fn progress(&self, m: &KnowledgeState) -> KnowledgeState {
        m.image(&self.theory)
            .unwrap_or_else(|| panic!("ontic action `{}` has a dead state", self.name))
    }
}

impl EpistemicAction {
    pub fn new(name: impl Into<String>, feedbacks: Vec<Formula>) -> Self {
        EpistemicAction {
            name: name.into(),
            feedbacks,
        }
    }

    /// `test(φ)`, with feedbacks `(K φ, K ¬φ)`.
    pub fn test(name: impl Into<String>, phi: Formula) -> Self {
        let neg = phi.clone().negate();
        EpistemicAction::new(name, vec![phi, neg])
    }

    /// The feedback list is nonempty and its disjunction is a tautology.
    pub fn validate(&self, nvars: usize) -> Result<()> {
        if self.feedbacks.is_empty() {
            return Err(Error::NoFeedback(self.name.clone()));
        }
        for f in &self.feedbacks {
            if f.has_primed() {
                return Err(Error::Malformed(format!(
                    "feedback of `{}` mentions a primed variable",
                    self.name
                )));
            }
            if f.max_var().is_some_and(|v| v >= nvars) {
                return Err(Error::Malformed(format!(
                    "feedback of `{}` mentions an undeclared variable",
                    self.name
                )));
            }
        }
        let uncovered = Formula::disj(self.feedbacks.iter().cloned()).negate();
        match KnowledgeState::models(&uncovered, nvars) {
            None => Ok(()),
            Some(m) => Err(Error::NonExhaustive {
                action: self.name.clone(),
                witness: render_state(m.first_state(), nvars),
            }),
        }
    }

    /// `Prog(M, K φ_i)`, or `None` when undefined (`M |= K ¬φ_i`).
    pub fn progress(&self, m: &KnowledgeState, i: usize) -> Option<KnowledgeState> {
        m.filter(&self.feedbacks[i])
    }

    /// Indices of the feedbacks that may be received in `m`.
    pub fn applicable(&self, m: &KnowledgeState) -> Vec<usize> {
        (0..self.feedbacks.len())
            .filter(|&i| m.any_satisfy(&self.feedbacks[i]))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // ok1 = 0, ok2 = 1, ok3 = 2
    fn repair(i: usize) -> OnticAction {
        let others = (0..3).filter(|&v| v != i);
        OnticAction::new(
            format!("repair{}", i + 1),
            Formula::primed(i).and(Formula::frame(others)),
        )
    }

    fn m0() -> KnowledgeState {
        let phi = Formula::var(0)
            .iff(Formula::var(1).and(Formula::var(2)))
            .and(Formula::literal(1, false).or(Formula::literal(2, false)));
        KnowledgeState::models(&phi, 3).unwrap()
    }

    #[test]
    fn validate_ontic_cases() {
        assert!(repair(0).validate(3).is_ok());
        let contra = OnticAction::new("c", Formula::primed(0).and(Formula::primed(0).negate()));
        assert!(matches!(contra.validate(1), Err(Error::EmptySuccessor { .. })));
        let reinit = OnticAction::new("r", Formula::primed(1).iff(Formula::var(1)));
        assert!(reinit.validate(2).is_ok());
    }

    #[test]
    fn validate_epistemic_cases() {
        assert!(EpistemicAction::test("t", Formula::var(0)).validate(1).is_ok());
        let only_x = EpistemicAction::new("x", vec![Formula::var(0)]);
        match only_x.validate(1) {
            Err(Error::NonExhaustive { witness, .. }) => assert_eq!(witness, "0"),
            other => panic!("unexpected {other:?}"),
        }
        let three = EpistemicAction::new(
            "xy",
            vec![
                Formula::var(0),
                Formula::var(1),
                Formula::literal(0, false).and(Formula::literal(1, false)),
            ],
        );
        assert!(three.validate(2).is_ok());
    }

    #[test]
    fn example_chain() {
        let m1 = repair(0).progress(&m0());
        let want1 = Formula::var(0).and(Formula::literal(1, false).or(Formula::literal(2, false)));
        assert_eq!(m1, KnowledgeState::models(&want1, 3).unwrap());
        let test2 = EpistemicAction::test("test2", Formula::var(1));
        assert_eq!(test2.applicable(&m1), vec![0, 1]);
        let m2 = test2.progress(&m1, 0).unwrap();
        let want2 = Formula::conj([Formula::var(0), Formula::var(1), Formula::literal(2, false)]);
        assert_eq!(m2, KnowledgeState::models(&want2, 3).unwrap());
        let m3 = repair(2).progress(&m2);
        let want3 = Formula::conj([Formula::var(0), Formula::var(1), Formula::var(2)]);
        assert_eq!(m3, KnowledgeState::models(&want3, 3).unwrap());
    }

    #[test]
    fn undefined_feedback() {
        let test2 = EpistemicAction::test("test2", Formula::var(1));
        let not_ok2 = KnowledgeState::models(&Formula::literal(1, false), 3).unwrap();
        assert!(test2.progress(&not_ok2, 0).is_none());
        assert_eq!(test2.progress(&not_ok2, 1), Some(not_ok2.clone()));
        assert_eq!(test2.applicable(&not_ok2), vec![1]);
        let trivial = EpistemicAction::new("t", vec![Formula::True]);
        assert_eq!(trivial.applicable(&not_ok2), vec![0]);
    }

    #[test]
    fn test_of_true_has_dead_second_feedback() {
        let t = EpistemicAction::test("t", Formula::True);
        assert_eq!(t.feedbacks[1], Formula::True.negate());
        assert_eq!(t.applicable(&KnowledgeState::full(2)), vec![0]);
    }
}
