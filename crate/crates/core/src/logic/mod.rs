//! Propositional and S5 formulas, knowledge states and their semantics.

pub mod epistemic;
pub mod formula;
pub mod state;

pub use epistemic::{entails, Epistemic, Settled, Sknnf};
pub use formula::{submasks, Formula, VarId, Vocabulary, MAX_VARS};
pub use state::{successors_of, KnowledgeState, State};
