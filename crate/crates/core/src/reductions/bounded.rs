//! Bounded plan existence from QBF.

use super::qbf::{Qbf, Quantifier};
use crate::action::{EpistemicAction, OnticAction};
use crate::error::Result;
use crate::logic::{Formula, Sknnf, VarId};
use crate::problem::PlanningProblem;

/// `∃a ∀b ∃c φ`, with `|a| = |b|` after padding. Setters `alpha_pos_ai` /
/// `alpha_neg_ai` fix `ai` and reshuffle every `b`; `gamma_pos_cj` /
/// `gamma_neg_cj` fix `cj`; `test_ai` senses `ai <-> bi`. Goal
/// `Kφ ∧ ⋀ (K bi ∨ K ¬bi)`. The bound is the size of the plan that fixes the
/// `a`s, runs every test, then sets each `cj` under `if K(φ -> cj)`; these
/// conditions form the vocabulary, which suffices.
pub fn reduce_qbf3_bounded(q: &Qbf) -> Result<PlanningProblem> {
    let blocks = q.blocks_as(&[Quantifier::Exists, Quantifier::Forall, Quantifier::Exists])?;
    let mut vocab = q.vocab.clone();
    let (mut a, mut b, c) = (blocks[0].clone(), blocks[1].clone(), blocks[2].clone());
    while a.len() < b.len() {
        a.push(vocab.fresh("pad_a"));
    }
    while b.len() < a.len() {
        b.push(vocab.fresh("pad_b"));
    }
    let all: Vec<VarId> = (0..vocab.len()).collect();
    let keep = |skip: &dyn Fn(VarId) -> bool| Formula::frame(all.iter().copied().filter(|&v| !skip(v)));
    let phi = q.matrix.clone();

    let mut ontic = Vec::new();
    for &ai in &a {
        let frame = keep(&|v| v == ai || b.contains(&v));
        for (tag, val) in [("pos", true), ("neg", false)] {
            let theory = lit_primed(ai, val).and(frame.clone());
            ontic.push(OnticAction::new(format!("alpha_{tag}_{}", vocab.name(ai)), theory));
        }
    }
    for &cj in &c {
        let frame = keep(&|v| v == cj);
        for (tag, val) in [("pos", true), ("neg", false)] {
            let theory = lit_primed(cj, val).and(frame.clone());
            ontic.push(OnticAction::new(format!("gamma_{tag}_{}", vocab.name(cj)), theory));
        }
    }
    let epistemic: Vec<EpistemicAction> = a
        .iter()
        .zip(&b)
        .map(|(&ai, &bi)| {
            EpistemicAction::test(format!("test_{}", vocab.name(ai)), Formula::var(ai).iff(Formula::var(bi)))
        })
        .collect();
    let goal = Sknnf::conj(
        std::iter::once(Sknnf::know(phi.clone())).chain(b.iter().map(|&bi| Sknnf::knows_whether(bi))),
    );
    let conditions: Vec<Sknnf> = c
        .iter()
        .map(|&cj| Sknnf::know(phi.clone().implies(Formula::var(cj))))
        .collect();
    let k = 2 * a.len() + conditions.iter().map(|c| c.size() + 2).sum::<usize>();

    let mut p = PlanningProblem::new(vocab, Formula::True, goal);
    p.ontic = ontic;
    p.epistemic = epistemic;
    p.bound = Some(k);
    p.conditions = conditions;
    p.conditions_sufficient = true;
    p.certificate = vec![format!(
        "qbf3b: a while-free plan of size at most {k} exists iff the exists-forall-exists QBF is true"
    )];
    Ok(p)
}

fn lit_primed(v: VarId, val: bool) -> Formula {
    if val {
        Formula::primed(v)
    } else {
        Formula::primed(v).negate()
    }
}

/// `∃a ∀b φ` with fresh `c` and one `d_ai` per `ai`. Sensing `alpha_ai`
/// reveals `d_ai` and either `c -> ai` or `c ∧ ¬ai`; `beta_ai` likewise for
/// `¬ai`. Goal `⋀ (K d ∨ K ¬d) ∧ (K c ∨ K(c -> φ))`, positive, bound `|a|`.
pub fn reduce_qbf2_bounded_pos(q: &Qbf) -> Result<PlanningProblem> {
    let blocks = q.blocks_as(&[Quantifier::Exists, Quantifier::Forall])?;
    let a = &blocks[0];
    let mut vocab = q.vocab.clone();
    let c = vocab.fresh("c");
    let d: Vec<VarId> = a.iter().map(|&ai| vocab.fresh(&format!("d_{}", q.vocab.name(ai)))).collect();
    let cv = Formula::var(c);
    let sensing = |name: String, ai: VarId, di: VarId, val: bool| {
        let guarded = cv.clone().implies(Formula::literal(ai, val));
        let caught = cv.clone().and(Formula::literal(ai, !val));
        let feedbacks = [guarded, caught]
            .into_iter()
            .flat_map(|f| [true, false].map(|e| f.clone().and(Formula::literal(di, e))))
            .collect();
        EpistemicAction::new(name, feedbacks)
    };
    let mut epistemic = Vec::new();
    for (tag, val) in [("alpha", true), ("beta", false)] {
        for (&ai, &di) in a.iter().zip(&d) {
            epistemic.push(sensing(format!("{tag}_{}", vocab.name(ai)), ai, di, val));
        }
    }
    let goal = Sknnf::conj(
        d.iter()
            .map(|&di| Sknnf::knows_whether(di))
            .chain([Sknnf::know(cv.clone()).or(Sknnf::know(cv.clone().implies(q.matrix.clone())))]),
    );
    let mut p = PlanningProblem::new(vocab, Formula::True, goal);
    p.epistemic = epistemic;
    p.bound = Some(a.len());
    p.certificate = vec![format!(
        "qbf2bpos: a plan of size at most {} exists iff the exists-forall QBF is true",
        a.len()
    )];
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kbp::Kbp;
    use crate::planner::{solve_bounded, solve_bounded_sequence, solve_existence, Budget, ExistenceAnswer};
    use crate::reductions::qbf_eval;
    use crate::syntax::parse_qbf;

    #[test]
    fn three_blocks_examples() {
        let b = Budget::default();
        let q = parse_qbf("exists a1\nforall b1\nexists c1\nmatrix: (a1 <-> b1) | c1\n").unwrap();
        let p = reduce_qbf3_bounded(&q).unwrap();
        p.validate().unwrap();
        assert_eq!((p.ontic.len(), p.epistemic.len()), (4, 1));
        let k = p.bound.unwrap();
        let a = solve_bounded(&p, k, &p.conditions, &b).unwrap();
        assert!(a.witness().is_some_and(|w| w.size() <= k), "{a:?}");

        let q = parse_qbf("exists a1\nforall b1\nexists c1\nmatrix: a1 & !a1\n").unwrap();
        let p = reduce_qbf3_bounded(&q).unwrap();
        assert_eq!(solve_existence(&p, &b).unwrap(), ExistenceAnswer::None);
        assert_eq!(
            solve_bounded(&p, p.bound.unwrap(), &p.conditions, &b).unwrap(),
            ExistenceAnswer::None
        );
    }

    #[test]
    fn three_blocks_padding() {
        let q = parse_qbf("exists a1 a2\nforall b1\nexists c1\nmatrix: c1\n").unwrap();
        let p = reduce_qbf3_bounded(&q).unwrap();
        assert_eq!(p.epistemic.len(), 2);
        assert!(p.vocab.get("pad_b").is_some());
    }

    #[test]
    fn positive_bounded_examples() {
        let b = Budget::default();
        let q = parse_qbf("exists a1\nforall b1\nmatrix: a1\n").unwrap();
        assert!(qbf_eval(&q).unwrap());
        let p = reduce_qbf2_bounded_pos(&q).unwrap();
        p.validate().unwrap();
        assert!(p.goal.is_positive());
        assert_eq!(
            solve_bounded(&p, 1, &[], &b).unwrap(),
            ExistenceAnswer::Exists(Kbp::act("alpha_a1"))
        );
        assert_eq!(solve_bounded_sequence(&p, 1, &b).unwrap().exists(), Some(true));

        let q = parse_qbf("exists a1\nforall b1\nmatrix: b1\n").unwrap();
        let p = reduce_qbf2_bounded_pos(&q).unwrap();
        assert_eq!(solve_bounded_sequence(&p, 1, &b).unwrap(), ExistenceAnswer::None);
        assert_eq!(solve_bounded(&p, 1, &[], &b).unwrap(), ExistenceAnswer::None);
    }
}
