//! Random problems and programs shared by the integration suites.

#![allow(dead_code)]

use kbpkit::planner::Budget;
use kbpkit::trace::{verify_plan, Limits, Verdict};
use kbpkit::{EpistemicAction, Formula, Kbp, KnowledgeState, OnticAction, PlanningProblem, Sknnf, Vocabulary};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn budget() -> Budget {
    Budget::default()
}

pub fn literal<R: Rng>(rng: &mut R, n: usize) -> Formula {
    Formula::literal(rng.gen_range(0..n), rng.gen_bool(0.5))
}

/// A literal, or two literals joined by `&`, `|` or `<->`.
pub fn small_formula<R: Rng>(rng: &mut R, n: usize) -> Formula {
    let a = literal(rng, n);
    match rng.gen_range(0..4) {
        0 => a,
        1 => a.and(literal(rng, n)),
        2 => a.or(literal(rng, n)),
        _ => a.iff(literal(rng, n)),
    }
}

pub fn random_init<R: Rng>(rng: &mut R, n: usize) -> Formula {
    loop {
        let f = if rng.gen_bool(0.4) { Formula::True } else { small_formula(rng, n) };
        if KnowledgeState::models(&f, n).is_some() {
            return f;
        }
    }
}

/// Atom `K φ` or `¬K φ` (only `K φ` when `positive`).
pub fn random_atom<R: Rng>(rng: &mut R, n: usize, positive: bool) -> Sknnf {
    let phi = if rng.gen_bool(0.7) { literal(rng, n) } else { small_formula(rng, n) };
    if positive || rng.gen_bool(0.5) {
        Sknnf::know(phi)
    } else {
        Sknnf::not_know(phi)
    }
}

pub fn random_sknnf<R: Rng>(rng: &mut R, n: usize, positive: bool, depth: usize) -> Sknnf {
    if depth == 0 || rng.gen_bool(0.5) {
        return random_atom(rng, n, positive);
    }
    let a = random_sknnf(rng, n, positive, depth - 1);
    let b = random_sknnf(rng, n, positive, depth - 1);
    if rng.gen_bool(0.5) {
        a.and(b)
    } else {
        a.or(b)
    }
}

/// One effect per variable: keep, set, clear, flip or (rarely) forget.
pub fn random_ontic<R: Rng>(rng: &mut R, name: String, n: usize) -> OnticAction {
    loop {
        let mut parts = Vec::new();
        let mut identity = true;
        for v in 0..n {
            let p = Formula::primed(v);
            let r = rng.gen_range(0..10);
            identity &= r <= 4;
            match r {
                0..=4 => parts.push(Formula::frame([v])),
                5 | 6 => parts.push(p),
                7 => parts.push(p.negate()),
                8 => parts.push(p.iff(Formula::var(v).negate())),
                _ => {}
            }
        }
        if !identity {
            return OnticAction::new(name, Formula::conj(parts));
        }
    }
}

/// A test, or a three-way partition on two formulas.
pub fn random_epistemic<R: Rng>(rng: &mut R, name: String, n: usize) -> EpistemicAction {
    let phi = if rng.gen_bool(0.7) { Formula::var(rng.gen_range(0..n)) } else { small_formula(rng, n) };
    if rng.gen_bool(0.7) {
        EpistemicAction::test(name, phi)
    } else {
        let psi = literal(rng, n);
        EpistemicAction::new(
            name,
            vec![phi.clone(), phi.clone().negate().and(psi.clone()), phi.negate().and(psi.negate())],
        )
    }
}

pub fn random_problem<R: Rng>(
    rng: &mut R,
    n: usize,
    ontic: usize,
    epistemic: usize,
    positive_goal: bool,
) -> PlanningProblem {
    let vocab = Vocabulary::from_names((1..=n).map(|i| format!("x{i}")));
    let init = random_init(rng, n);
    let goal = random_sknnf(rng, n, positive_goal, 2);
    let mut p = PlanningProblem::new(vocab, init, goal);
    p.ontic = (0..ontic).map(|i| random_ontic(rng, format!("o{i}"), n)).collect();
    p.epistemic = (0..epistemic).map(|i| random_epistemic(rng, format!("e{i}"), n)).collect();
    p.validate().expect("generated problems are well-formed");
    p
}

/// Random program of size at most `max_size`, with loops when `loops`
/// (loop conditions are single atoms).
pub fn random_kbp<R: Rng>(rng: &mut R, p: &PlanningProblem, max_size: usize, loops: bool) -> Kbp {
    let names: Vec<String> = p.actions().map(|a| a.name().to_string()).collect();
    loop {
        let k = gen(rng, p.nvars(), &names, 3, loops);
        if k.size() <= max_size && k != Kbp::Empty {
            return k;
        }
    }
}

fn gen<R: Rng>(rng: &mut R, n: usize, names: &[String], depth: usize, loops: bool) -> Kbp {
    let pick = if depth == 0 { 0 } else { rng.gen_range(0..10) };
    match pick {
        0..=3 => Kbp::act(names.choose(rng).expect("actions").clone()),
        4..=6 => Kbp::seq(gen(rng, n, names, depth - 1, loops), gen(rng, n, names, depth - 1, loops)),
        7 | 8 => {
            let c = if rng.gen_bool(0.7) { random_atom(rng, n, false) } else { random_sknnf(rng, n, false, 1) };
            let other = if rng.gen_bool(0.4) { Kbp::Empty } else { gen(rng, n, names, depth - 1, loops) };
            Kbp::if_then_else(c, gen(rng, n, names, depth - 1, loops), other)
        }
        _ if loops => Kbp::while_do(random_atom(rng, n, false), gen(rng, n, names, depth - 1, loops)),
        _ => Kbp::act(names.choose(rng).expect("actions").clone()),
    }
}

pub fn terminates(p: &PlanningProblem, k: &Kbp) -> bool {
    !matches!(verify_plan(p, k, &Limits::default()), Ok(Verdict::NonTerminating(_)))
}

/// Random terminating program.
pub fn random_terminating<R: Rng>(rng: &mut R, p: &PlanningProblem, max_size: usize, loops: bool) -> Kbp {
    loop {
        let k = random_kbp(rng, p, max_size, loops);
        if terminates(p, &k) {
            return k;
        }
    }
}
