//! Knowledge-based planning problems `(I, A_O, A_E, G)`.

use std::collections::HashSet;

use crate::action::{EpistemicAction, OnticAction};
use crate::error::{Error, Result};
use crate::logic::{Formula, KnowledgeState, Sknnf, Vocabulary, MAX_VARS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionRef<'a> {
    Ontic(&'a OnticAction),
    Epistemic(&'a EpistemicAction),
}

impl ActionRef<'_> {
    pub fn name(&self) -> &str {
        match self {
            ActionRef::Ontic(a) => &a.name,
            ActionRef::Epistemic(a) => &a.name,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanningProblem {
    pub vocab: Vocabulary,
    /// `φ⁰`, with `I = Mods(φ⁰)`.
    pub init: Formula,
    pub ontic: Vec<OnticAction>,
    pub epistemic: Vec<EpistemicAction>,
    pub goal: Sknnf,
    /// Size bound for bounded plan existence.
    pub bound: Option<usize>,
    /// Total order on epistemic actions for ordered existence.
    pub order: Option<Vec<String>>,
    /// Candidate branching conditions for the bounded solver.
    pub conditions: Vec<Sknnf>,
    /// The condition vocabulary is known to suffice: if any plan within the
    /// bound exists, one exists that branches only on `conditions`.
    pub conditions_sufficient: bool,
    /// Free-form provenance lines, written as `# certificate:` comments.
    pub certificate: Vec<String>,
}

impl PlanningProblem {
    pub fn new(vocab: Vocabulary, init: Formula, goal: Sknnf) -> Self {
        PlanningProblem {
            vocab,
            init,
            ontic: Vec::new(),
            epistemic: Vec::new(),
            goal,
            bound: None,
            order: None,
            conditions: Vec::new(),
            conditions_sufficient: false,
            certificate: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.vocab.len()
    }

    /// `I = Mods(φ⁰)`.
    pub fn initial_state(&self) -> Result<KnowledgeState> {
        KnowledgeState::models(&self.init, self.nvars()).ok_or(Error::UnsatisfiableInit)
    }

    pub fn action(&self, name: &str) -> Option<ActionRef<'_>> {
        self.ontic
            .iter()
            .find(|a| a.name == name)
            .map(ActionRef::Ontic)
            .or_else(|| {
                self.epistemic
                    .iter()
                    .find(|a| a.name == name)
                    .map(ActionRef::Epistemic)
            })
    }

    /// All actions, ontic first, each in declaration order.
    pub fn actions(&self) -> impl Iterator<Item = ActionRef<'_>> {
        self.ontic
            .iter()
            .map(ActionRef::Ontic)
            .chain(self.epistemic.iter().map(ActionRef::Epistemic))
    }

    /// Checks every invariant: variable count, unique action names, action
    /// validity, satisfiable init, declared order.
    pub fn validate(&self) -> Result<()> {
        let n = self.nvars();
        if n > MAX_VARS {
            return Err(Error::TooManyVariables(n));
        }
        if self.init.has_primed() {
            return Err(Error::Malformed("initial formula mentions a primed variable".into()));
        }
        let mut seen = HashSet::new();
        for a in self.actions() {
            if !seen.insert(a.name().to_string()) {
                return Err(Error::Duplicate(a.name().to_string()));
            }
        }
        for a in &self.ontic {
            a.validate(n)?;
        }
        for a in &self.epistemic {
            a.validate(n)?;
        }
        self.initial_state()?;
        if let Some(order) = &self.order {
            self.order_indices(order)?;
        }
        Ok(())
    }

    /// Positions in `epistemic` of an order given by names; the order must
    /// list every epistemic action exactly once.
    pub fn order_indices(&self, order: &[String]) -> Result<Vec<usize>> {
        let mut idx = Vec::with_capacity(order.len());
        for name in order {
            match self.epistemic.iter().position(|a| &a.name == name) {
                Some(i) if !idx.contains(&i) => idx.push(i),
                Some(_) => return Err(Error::Precondition(format!("`{name}` repeated in order"))),
                None => return Err(Error::UnknownAction(name.clone())),
            }
        }
        if idx.len() != self.epistemic.len() {
            return Err(Error::Precondition(
                "order must list every epistemic action".into(),
            ));
        }
        Ok(idx)
    }
}
