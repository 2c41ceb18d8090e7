//! A problem family whose small KBPs decide 3SAT.
//!
//! Hidden variables `x1..xn` hold an arbitrary assignment; bits `l{i}_{j}_{k}`
//! encode literal `j` of clause `i`; `s` can only be true when the hidden
//! assignment satisfies every clause. Slot value `v < n` stands for `x{v+1}`,
//! `n + v` for `¬x{v+1}`, anything larger for a literal that is always true.

use crate::action::{EpistemicAction, OnticAction};
use crate::error::{Error, Result};
use crate::kbp::Kbp;
use crate::logic::{Formula, Sknnf, VarId, Vocabulary, MAX_VARS};
use crate::problem::PlanningProblem;

/// A literal of the encoded formula: variable index (0-based) and polarity.
pub type Literal = (usize, bool);

#[derive(Clone, Debug)]
pub struct SatFamily {
    pub problem: PlanningProblem,
    pub plan: Kbp,
    pub x: Vec<VarId>,
    /// `bits[i][j]`: the bits of slot `j` of clause `i`, least significant first.
    pub bits: Vec<[Vec<VarId>; 3]>,
    pub s: VarId,
    /// `χ1 ∧ ... ∧ χm`: the hidden assignment satisfies the encoded formula.
    pub satisfied: Formula,
}

/// Bits per literal slot, `⌈log2(2n)⌉`.
pub fn slot_bits(nvars: usize) -> usize {
    (2 * nvars).next_power_of_two().trailing_zeros() as usize
}

impl SatFamily {
    pub fn new(nvars: usize, nclauses: usize) -> Result<Self> {
        if nvars == 0 || nclauses == 0 {
            return Err(Error::Precondition("need at least one variable and one clause".into()));
        }
        let width = slot_bits(nvars);
        let total = nvars + 3 * nclauses * width + 1;
        if total > MAX_VARS {
            return Err(Error::TooManyVariables(total));
        }
        let mut vocab = Vocabulary::new();
        let x: Vec<VarId> = (1..=nvars).map(|i| vocab.intern(&format!("x{i}"))).collect();
        let bits: Vec<[Vec<VarId>; 3]> = (1..=nclauses)
            .map(|i| {
                [1, 2, 3].map(|j| (1..=width).map(|k| vocab.intern(&format!("l{i}_{j}_{k}"))).collect())
            })
            .collect();
        let s = vocab.intern("s");

        let chi: Vec<Formula> = bits
            .iter()
            .map(|clause| Formula::disj(clause.iter().map(|slot| slot_true(slot, &x))))
            .collect();
        let satisfied = Formula::conj(chi.iter().cloned());
        let init = Formula::conj(chi.iter().map(|c| c.clone().negate().implies(Formula::literal(s, false))));
        let goal = Sknnf::know(Formula::literal(s, false)).or(Sknnf::know(satisfied.clone()));

        let mut problem = PlanningProblem::new(vocab, init, goal);
        for &xi in &x {
            let frame = Formula::frame((0..problem.nvars()).filter(|&v| v != xi));
            let name = problem.vocab.name(xi).to_string();
            problem.ontic.push(OnticAction::new(format!("{name}_on"), Formula::primed(xi).and(frame.clone())));
            problem
                .ontic
                .push(OnticAction::new(format!("{name}_off"), Formula::primed(xi).negate().and(frame)));
        }
        let all_bits: Vec<VarId> = bits.iter().flat_map(|c| c.iter().flatten().copied()).collect();
        for &b in &all_bits {
            problem
                .epistemic
                .push(EpistemicAction::test(format!("test_{}", problem.vocab.name(b)), Formula::var(b)));
        }

        let mut assign = Vec::new();
        for &xi in &x {
            let name = problem.vocab.name(xi);
            let cond = Sknnf::know(satisfied.clone().and(Formula::var(xi)).negate());
            assign.push(Kbp::if_then_else(
                cond,
                Kbp::act(format!("{name}_off")),
                Kbp::act(format!("{name}_on")),
            ));
        }
        let reads = problem.epistemic.iter().map(|a| Kbp::act(a.name.clone()));
        let decide = Kbp::if_then_else(
            Sknnf::know(Formula::literal(s, false)),
            Kbp::Empty,
            Kbp::sequence(assign),
        );
        let plan = Kbp::seq(Kbp::sequence(reads), decide);
        problem.certificate = vec![format!(
            "satfamily: {nvars} variables, {nclauses} clauses, {width} bits per literal"
        )];
        Ok(SatFamily {
            problem,
            plan,
            x,
            bits,
            s,
            satisfied,
        })
    }

    /// Formula fixing the literal bits to encode `clauses`.
    pub fn encoding(&self, clauses: &[[Literal; 3]]) -> Result<Formula> {
        if clauses.len() != self.bits.len() {
            return Err(Error::Precondition(format!(
                "expected {} clauses, got {}",
                self.bits.len(),
                clauses.len()
            )));
        }
        let n = self.x.len();
        let mut parts = Vec::new();
        for (clause, slots) in clauses.iter().zip(&self.bits) {
            for (&(v, pos), slot) in clause.iter().zip(slots) {
                if v >= n {
                    return Err(Error::UnknownVariable(format!("x{}", v + 1)));
                }
                let code = if pos { v } else { n + v };
                parts.extend(slot.iter().enumerate().map(|(k, &b)| Formula::literal(b, code >> k & 1 == 1)));
            }
        }
        Ok(Formula::conj(parts))
    }
}

/// The literal in `slot` is true under the hidden assignment.
fn slot_true(slot: &[VarId], x: &[VarId]) -> Formula {
    let n = x.len();
    let is = |code: usize| Formula::conj(slot.iter().enumerate().map(|(k, &b)| Formula::literal(b, code >> k & 1 == 1)));
    let mut cases = Vec::new();
    for (v, &xv) in x.iter().enumerate() {
        cases.push(is(v).and(Formula::var(xv)));
        cases.push(is(n + v).and(Formula::literal(xv, false)));
    }
    for code in 2 * n..1 << slot.len() {
        cases.push(is(code));
    }
    Formula::disj(cases)
}

/// The problem and its KBP.
pub fn gen_3sat_family(nvars: usize, nclauses: usize) -> Result<(PlanningProblem, Kbp)> {
    let f = SatFamily::new(nvars, nclauses)?;
    Ok((f.problem, f.plan))
}
