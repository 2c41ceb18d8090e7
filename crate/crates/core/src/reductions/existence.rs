//! Unbounded plan existence: QBF and unsatisfiability encodings, and the
//! ordered-to-unordered transformation.

use super::qbf::{Qbf, Quantifier};
use crate::action::EpistemicAction;
use crate::error::{Error, Result};
use crate::logic::{Formula, Sknnf, VarId, Vocabulary};
use crate::problem::PlanningProblem;

/// `∀a ∃b φ` becomes: tests on every `a`, goal `¬K¬φ ∧ ⋀ (K a ∨ K ¬a)`.
/// A plan exists iff the QBF is true.
pub fn reduce_qbf2_epistemic(q: &Qbf) -> Result<PlanningProblem> {
    let blocks = q.blocks_as(&[Quantifier::Forall, Quantifier::Exists])?;
    let goal = Sknnf::conj(
        std::iter::once(Sknnf::not_know(q.matrix.clone().negate()))
            .chain(blocks[0].iter().map(|&a| Sknnf::knows_whether(a))),
    );
    let mut p = PlanningProblem::new(q.vocab.clone(), Formula::True, goal);
    p.epistemic = blocks[0]
        .iter()
        .map(|&a| EpistemicAction::test(format!("test_{}", q.vocab.name(a)), Formula::var(a)))
        .collect();
    p.certificate = vec!["qbf2e: a plan exists iff the forall-exists QBF is true".into()];
    Ok(p)
}

/// No actions, goal `K¬φ`: the empty plan is valid iff `φ` is unsatisfiable.
pub fn reduce_unsat_positive(phi: &Formula, vocab: &Vocabulary) -> PlanningProblem {
    let mut p = PlanningProblem::new(vocab.clone(), Formula::True, Sknnf::know(phi.clone().negate()));
    p.certificate = vec!["unsat: a plan exists iff the formula is unsatisfiable".into()];
    p
}

/// The QBF is padded to one variable per block, `∃a1 ∀b1 ... ∃ak ∀bk φ`.
/// Existential `ai` is encoded by choosing to reveal `x_ai`, universal `bi`
/// by the revealed value of `y_bi`; the order interleaves the tests.
pub fn reduce_qbf_wfoe(q: &Qbf) -> Result<PlanningProblem> {
    let q = q.strictly_alternating();
    let mut vocab = Vocabulary::new();
    let mut map: Vec<(VarId, Quantifier)> = vec![(0, Quantifier::Exists); q.nvars()];
    let mut epistemic = Vec::new();
    for (quant, vars) in &q.prefix {
        let [v] = vars[..] else {
            return Err(Error::Shape("padding left a block with several variables".into()));
        };
        let prefix = if *quant == Quantifier::Exists { "x" } else { "y" };
        let name = format!("{prefix}_{}", q.vocab.name(v));
        let id = vocab.fresh(&name);
        map[v] = (id, *quant);
        epistemic.push(EpistemicAction::test(format!("test_{}", vocab.name(id)), Formula::var(id)));
    }
    let goal = substitute(&q.matrix.nnf(), &|v, positive| {
        let (id, quant) = map[v];
        match (quant, positive) {
            (Quantifier::Exists, true) => Sknnf::knows_whether(id),
            (Quantifier::Exists, false) => Sknnf::ignores(id),
            (Quantifier::Forall, b) => Sknnf::know(Formula::literal(id, b)),
        }
    });
    let mut p = PlanningProblem::new(vocab, Formula::True, goal);
    p.order = Some(epistemic.iter().map(|a| a.name.clone()).collect());
    p.epistemic = epistemic;
    p.certificate = vec!["wfoe: an ordered while-free plan exists iff the QBF is true".into()];
    Ok(p)
}

/// Maps an NNF matrix to SKNNF, literal by literal.
fn substitute(f: &Formula, lit: &dyn Fn(VarId, bool) -> Sknnf) -> Sknnf {
    match f {
        Formula::True => Sknnf::True,
        Formula::False => Sknnf::not_know(Formula::True),
        Formula::Var(v) => lit(*v, true),
        Formula::Not(inner) => match **inner {
            Formula::Var(v) => lit(v, false),
            _ => unreachable!("negation normal form"),
        },
        Formula::And(a, b) => substitute(a, lit).and(substitute(b, lit)),
        Formula::Or(a, b) => substitute(a, lit).or(substitute(b, lit)),
        _ => unreachable!("negation normal form"),
    }
}

/// Removes the order of an epistemic-only problem: each action `a` is split
/// into `a_p`, `a_n` and the pass actions `a_pbar`, `a_nbar`, revealing
/// hidden `p_a`/`n_a` whose values dictate which variant of the next action
/// must follow, with mutex variables allowing one variant per branch.
pub fn reduce_wfoe_wfe(input: &PlanningProblem) -> Result<PlanningProblem> {
    if !input.ontic.is_empty() {
        return Err(Error::Precondition("input has ontic actions".into()));
    }
    let order = input
        .order
        .as_ref()
        .ok_or_else(|| Error::Precondition("input has no action order".into()))?;
    let idx = input.order_indices(order)?;
    let mut vocab = input.vocab.clone();
    let mut epistemic = Vec::new();
    let mut goal = vec![input.goal.clone()];
    let mut prev: Option<(VarId, VarId)> = None;
    for &i in &idx {
        let a = &input.epistemic[i];
        let p = vocab.fresh(&format!("p_{}", a.name));
        let n = vocab.fresh(&format!("n_{}", a.name));
        let mu: Vec<VarId> = ["p", "n", "pbar", "nbar"]
            .iter()
            .map(|s| vocab.fresh(&format!("mu_{s}_{}", a.name)))
            .collect();
        let split = |bodies: &[Formula], hidden: VarId, m: VarId| -> Vec<Formula> {
            let mut out = Vec::new();
            for body in bodies {
                for d in [true, false] {
                    for e in [true, false] {
                        out.push(Formula::conj([
                            body.clone(),
                            Formula::literal(hidden, d),
                            Formula::literal(m, e),
                        ]));
                    }
                }
            }
            out
        };
        let pass = [Formula::True];
        epistemic.push(EpistemicAction::new(format!("{}_p", a.name), split(&a.feedbacks, p, mu[0])));
        epistemic.push(EpistemicAction::new(format!("{}_n", a.name), split(&a.feedbacks, n, mu[1])));
        epistemic.push(EpistemicAction::new(format!("{}_pbar", a.name), split(&pass, p, mu[2])));
        epistemic.push(EpistemicAction::new(format!("{}_nbar", a.name), split(&pass, n, mu[3])));
        if let Some((pp, pn)) = prev {
            let pos = Sknnf::not_know(Formula::var(pp)).and(Sknnf::not_know(Formula::literal(pn, false)));
            goal.push(pos.or(Sknnf::knows_whether(p)));
            let neg = Sknnf::not_know(Formula::literal(pp, false)).and(Sknnf::not_know(Formula::var(pn)));
            goal.push(neg.or(Sknnf::knows_whether(n)));
        }
        for x in 0..4 {
            for y in x + 1..4 {
                goal.push(Sknnf::ignores(mu[x]).or(Sknnf::ignores(mu[y])));
            }
        }
        prev = Some((p, n));
    }
    let mut out = PlanningProblem::new(vocab, input.init.clone(), Sknnf::conj(goal));
    out.epistemic = epistemic;
    out.certificate = input.certificate.clone();
    out.certificate
        .push("wfoe2wfe: an unordered plan exists iff an ordered plan exists for the input".into());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kbp::Kbp;
    use crate::planner::{solve_existence, solve_existence_epistemic, solve_wfoe, Budget, ExistenceAnswer};
    use crate::reductions::qbf_eval;
    use crate::syntax::parse_qbf;

    fn qbf(text: &str) -> Qbf {
        parse_qbf(text).unwrap()
    }

    #[test]
    fn forall_exists_examples() {
        let b = Budget::default();
        for (text, expect) in [
            ("forall a1\nexists b1\nmatrix: a1 | b1\n", true),
            ("forall a1\nexists b1\nmatrix: a1\n", false),
            ("forall a1\nexists b1\nmatrix: true\n", true),
        ] {
            let q = qbf(text);
            assert_eq!(qbf_eval(&q).unwrap(), expect);
            let p = reduce_qbf2_epistemic(&q).unwrap();
            p.validate().unwrap();
            let a = solve_existence_epistemic(&p, &b).unwrap();
            assert_eq!(a.exists(), Some(expect), "{text}");
        }
        assert!(reduce_qbf2_epistemic(&qbf("exists a\nforall b\nmatrix: a\n")).is_err());
    }

    #[test]
    fn unsat_examples() {
        let b = Budget::default();
        let mut vocab = Vocabulary::from_names(["x"]);
        let x = Formula::var(vocab.intern("x"));
        let p = reduce_unsat_positive(&x.clone().and(x.clone().negate()), &vocab);
        assert!(p.ontic.is_empty() && p.epistemic.is_empty());
        assert_eq!(solve_existence(&p, &b).unwrap(), ExistenceAnswer::Exists(Kbp::Empty));
        let p = reduce_unsat_positive(&x, &vocab);
        assert_eq!(solve_existence(&p, &b).unwrap(), ExistenceAnswer::None);
        let p = reduce_unsat_positive(&Formula::False, &vocab);
        assert!(p.goal.is_positive());
        assert_eq!(solve_existence(&p, &b).unwrap().exists(), Some(true));
    }

    #[test]
    fn ordered_examples() {
        let b = Budget::default();
        for (m, expect) in [("a1 | b1", true), ("a1 & b1", false), ("b1 | !b1", true)] {
            let q = qbf(&format!("exists a1\nforall b1\nmatrix: {m}\n"));
            assert_eq!(qbf_eval(&q).unwrap(), expect);
            let p = reduce_qbf_wfoe(&q).unwrap();
            p.validate().unwrap();
            let a = solve_wfoe(&p, p.order.as_ref().unwrap(), &b).unwrap();
            assert_eq!(a.exists(), Some(expect), "{m}");
        }
    }

    #[test]
    fn ordered_padding() {
        // forall first: a dummy existential is prepended, a dummy universal appended
        let q = qbf("forall b\nexists a\nmatrix: a <-> b\n");
        let p = reduce_qbf_wfoe(&q).unwrap();
        assert_eq!(p.epistemic.len(), 4);
        let a = solve_wfoe(&p, p.order.as_ref().unwrap(), &Budget::default()).unwrap();
        assert_eq!(a.exists(), Some(true));
    }

    #[test]
    fn unordered_structure_and_chain() {
        let mut vocab = Vocabulary::new();
        let x = vocab.intern("x");
        let mut single = PlanningProblem::new(vocab, Formula::True, Sknnf::knows_whether(x));
        single.epistemic = vec![EpistemicAction::test("tx", Formula::var(x))];
        single.order = Some(vec!["tx".into()]);
        let out = reduce_wfoe_wfe(&single).unwrap();
        out.validate().unwrap();
        assert_eq!(out.epistemic.len(), 4);
        // the base goal plus six mutex pairs
        let mut conjuncts = 0;
        let mut g = &out.goal;
        while let Sknnf::And(a, b) = g {
            conjuncts += 1;
            g = a;
            assert!(matches!(**b, Sknnf::Or(..)));
        }
        assert_eq!(conjuncts, 6);

        let b = Budget::default();
        for (m, expect) in [("a1 | b1", true), ("a1 & b1", false)] {
            let q = qbf(&format!("exists a1\nforall b1\nmatrix: {m}\n"));
            let p = reduce_wfoe_wfe(&reduce_qbf_wfoe(&q).unwrap()).unwrap();
            p.validate().unwrap();
            assert_eq!(solve_existence_epistemic(&p, &b).unwrap().exists(), Some(expect), "{m}");
        }
    }
}
