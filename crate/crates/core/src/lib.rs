//! Knowledge-based programs as plans.
//!
//! S5 knowledge states, ontic/epistemic actions and progression, KBP trace
//! semantics and plan verification, compilation of KBPs into standard
//! policies, plan-existence solvers, and generators for the hardness
//! constructions used to cross-check them.
//!
//! ```
//! use kbpkit::planner::{solve, Budget, Mode};
//! use kbpkit::syntax::{parse_kbp, parse_problem};
//! use kbpkit::trace::{verify_plan, Limits, Verdict};
//!
//! let p = parse_problem(
//!     "var x\n\
//!      ontic set: x'\n\
//!      epistemic look: x ; !x\n\
//!      goal: K(x)\n",
//! )?;
//! let pi = parse_kbp("look; if K(!x) then set endif", &p.vocab)?;
//! assert_eq!(verify_plan(&p, &pi, &Limits::default())?, Verdict::Valid);
//!
//! let answer = solve(&p, Mode::Auto, None, &Budget::default())?;
//! assert_eq!(answer.witness().map(|w| w.size()), Some(1));
//! # Ok::<(), kbpkit::Error>(())
//! ```

pub mod action;
pub mod cli;
pub mod compile;
pub mod error;
pub mod kbp;
pub mod logic;
pub mod planner;
pub mod problem;
pub mod reductions;
pub mod syntax;
pub mod trace;

pub use action::{EpistemicAction, OnticAction};
pub use error::{Error, Result};
pub use kbp::Kbp;
pub use logic::{Epistemic, Formula, KnowledgeState, Sknnf, Vocabulary};
pub use problem::PlanningProblem;
