//! A problem built around a given KBP so that the KBP (adapted with void
//! actions and variant choices) is a valid plan, and deviating from it breaks
//! the goal.
//!
//! The program is first rewritten so that every condition is a single
//! `K φ` or `¬K φ`, it starts and ends with an ontic action, ontic and
//! epistemic actions alternate inside sequences, and only ontic actions
//! touch `if`/`else`/`endif`/`while`/`endwhile`. Every occurrence then
//! becomes its own action. Fresh variables:
//!
//! * `ok`: known true initially and required at the end; an ontic action
//!   taken out of turn falsifies it in some state.
//! * `s`: unknown secret that must stay unknown; an epistemic action taken
//!   out of turn reveals it.
//! * `stop`: set by the final action, required at the end.
//! * one ready flag per epistemic occurrence and per group of ontic
//!   occurrences that may follow one another across a keyword.
//! * `p_e` per epistemic occurrence `e`, revealed by `e`; the ontic action
//!   after `e` comes in two variants (`_p`, `_pbar`) and only the one
//!   matching `p_e` keeps `ok`.
//!
//! The first ontic action of the branch taken when `K φ` holds also requires
//! `φ` for `ok`.

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::action::{EpistemicAction, OnticAction};
use crate::error::{Error, Result};
use crate::kbp::Kbp;
use crate::logic::{Formula, Sknnf, VarId};
use crate::problem::{ActionRef, PlanningProblem};
use crate::trace::{walk_traces, Choice, Limits, Verdict, verify_plan, Walk};

#[derive(Clone, Debug)]
pub struct Gadget {
    pub problem: PlanningProblem,
    /// The adapted plan, valid for `problem`.
    pub plan: Kbp,
    /// Original action of each generated action; `None` for void actions.
    pub origin: HashMap<String, Option<String>>,
}

#[derive(Clone, Debug)]
enum Item {
    Act { name: String, ontic: bool },
    /// Taken when `K φ` holds iff `pos`.
    If { pos: bool, phi: Formula, then: Vec<Item>, other: Vec<Item> },
    While { pos: bool, phi: Formula, body: Vec<Item> },
}

impl Item {
    fn is_ontic_act(&self) -> bool {
        matches!(self, Item::Act { ontic: true, .. })
    }
}

/// Builds the problem for `pi`, using `base` for the initial state, the
/// action definitions and the base goal (usually `K⊤`).
pub fn problem_from_kbp(base: &PlanningProblem, pi: &Kbp) -> Result<Gadget> {
    match verify_plan(base, pi, &Limits::default()) {
        Ok(Verdict::NonTerminating(_)) | Err(Error::NonTerminating) => return Err(Error::NonTerminating),
        Err(e) => return Err(e),
        Ok(_) => {}
    }
    let items = flatten(base, pi)?;
    let mut b = Builder {
        counts: HashMap::new(),
        voids: 0,
        origin: HashMap::new(),
    };
    let items = b.normalize(items);
    let items = b.rename(items);
    let origin = b.origin;
    Wiring::build(base, &items, origin)
}

fn flatten(base: &PlanningProblem, pi: &Kbp) -> Result<Vec<Item>> {
    let mut out = Vec::new();
    push_items(base, pi, &mut out)?;
    Ok(out)
}

fn push_items(base: &PlanningProblem, pi: &Kbp, out: &mut Vec<Item>) -> Result<()> {
    match pi {
        Kbp::Empty => {}
        Kbp::Act(name) => {
            let a = base.action(name).ok_or_else(|| Error::UnknownAction(name.clone()))?;
            out.push(Item::Act {
                name: name.clone(),
                ontic: matches!(a, ActionRef::Ontic(_)),
            });
        }
        Kbp::Seq(a, b) => {
            push_items(base, a, out)?;
            push_items(base, b, out)?;
        }
        Kbp::If(c, t, e) => {
            let t = flatten(base, t)?;
            let e = flatten(base, e)?;
            out.extend(literal_if(c, t, e));
        }
        Kbp::While(c, body) => {
            let (pos, phi) = match c {
                Sknnf::Know(phi) => (true, phi.clone()),
                Sknnf::NotKnow(phi) => (false, phi.clone()),
                _ => {
                    return Err(Error::Precondition(
                        "loop conditions must be K φ or ¬K φ".into(),
                    ))
                }
            };
            out.push(Item::While {
                pos,
                phi,
                body: flatten(base, body)?,
            });
        }
    }
    Ok(())
}

/// `if c then t else e` as nested single-literal tests.
fn literal_if(c: &Sknnf, t: Vec<Item>, e: Vec<Item>) -> Vec<Item> {
    match c {
        Sknnf::True => t,
        Sknnf::Know(phi) => vec![Item::If { pos: true, phi: phi.clone(), then: t, other: e }],
        Sknnf::NotKnow(phi) => vec![Item::If { pos: false, phi: phi.clone(), then: t, other: e }],
        Sknnf::And(a, b) => {
            let inner = literal_if(b, t, e.clone());
            literal_if(a, inner, e)
        }
        Sknnf::Or(a, b) => {
            let inner = literal_if(b, t.clone(), e);
            literal_if(a, t, inner)
        }
    }
}

struct Builder {
    counts: HashMap<String, usize>,
    voids: usize,
    origin: HashMap<String, Option<String>>,
}

const VOID_ONTIC: &str = "\0void-ontic";
const VOID_EPISTEMIC: &str = "\0void-epistemic";

impl Builder {
    fn void(ontic: bool) -> Item {
        Item::Act {
            name: if ontic { VOID_ONTIC } else { VOID_EPISTEMIC }.into(),
            ontic,
        }
    }

    /// Inserts void actions; every block starts and ends with an ontic
    /// action.
    fn normalize(&mut self, items: Vec<Item>) -> Vec<Item> {
        let mut out: Vec<Item> = Vec::new();
        for item in items {
            let last = out.last();
            match &item {
                Item::Act { ontic: true, .. } => {
                    if last.is_some_and(Item::is_ontic_act) {
                        out.push(Self::void(false));
                    }
                }
                _ => {
                    if !last.is_some_and(Item::is_ontic_act) {
                        out.push(Self::void(true));
                    }
                }
            }
            out.push(match item {
                Item::If { pos, phi, then, other } => Item::If {
                    pos,
                    phi,
                    then: self.normalize(then),
                    other: self.normalize(other),
                },
                Item::While { pos, phi, body } => Item::While {
                    pos,
                    phi,
                    body: self.normalize(body),
                },
                act => act,
            });
        }
        if !out.last().is_some_and(Item::is_ontic_act) {
            out.push(Self::void(true));
        }
        out
    }

    /// Gives every occurrence its own name.
    fn rename(&mut self, items: Vec<Item>) -> Vec<Item> {
        items
            .into_iter()
            .map(|item| match item {
                Item::Act { name, ontic } => {
                    let (fresh, origin) = if name == VOID_ONTIC || name == VOID_EPISTEMIC {
                        self.voids += 1;
                        (format!("void{}", self.voids), None)
                    } else {
                        let k = self.counts.entry(name.clone()).or_insert(0);
                        *k += 1;
                        (format!("{name}_{k}"), Some(name))
                    };
                    self.origin.insert(fresh.clone(), origin);
                    Item::Act { name: fresh, ontic }
                }
                Item::If { pos, phi, then, other } => Item::If {
                    pos,
                    phi,
                    then: self.rename(then),
                    other: self.rename(other),
                },
                Item::While { pos, phi, body } => Item::While {
                    pos,
                    phi,
                    body: self.rename(body),
                },
            })
            .collect()
    }
}

fn first_name(block: &[Item]) -> &str {
    match &block[0] {
        Item::Act { name, .. } => name,
        _ => unreachable!("normalized blocks start with an action"),
    }
}

/// What follows an action occurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Next {
    Epistemic(String),
    /// Ontic actions that may come next, across a keyword or in sequence.
    Ontic(BTreeSet<String>),
    End,
}

struct Wiring {
    next: HashMap<String, Next>,
    /// Epistemic occurrence preceding an ontic one.
    after_sensing: HashMap<String, String>,
    /// `φ` an ontic occurrence requires for `ok`.
    guard: HashMap<String, Formula>,
    order: Vec<(String, bool)>,
    first: String,
}

impl Wiring {
    fn build(base: &PlanningProblem, items: &[Item], origin: HashMap<String, Option<String>>) -> Result<Gadget> {
        let mut w = Wiring {
            next: HashMap::new(),
            after_sensing: HashMap::new(),
            guard: HashMap::new(),
            order: Vec::new(),
            first: first_name(items).to_string(),
        };
        w.walk(items, &Next::End);
        w.emit(base, items, origin)
    }

    fn entry(&mut self, items: &[Item], i: usize, cont: &Next) -> Next {
        match items.get(i) {
            None => cont.clone(),
            Some(Item::Act { name, ontic: false }) => Next::Epistemic(name.clone()),
            Some(Item::Act { name, ontic: true }) => Next::Ontic(BTreeSet::from([name.clone()])),
            Some(Item::If { pos, phi, then, other }) => {
                let (t, e) = (first_name(then).to_string(), first_name(other).to_string());
                self.guard.insert(if *pos { t.clone() } else { e.clone() }, phi.clone());
                Next::Ontic(BTreeSet::from([t, e]))
            }
            Some(Item::While { pos, phi, body }) => {
                let b = first_name(body).to_string();
                let Next::Ontic(mut set) = self.entry(items, i + 1, cont) else {
                    unreachable!("an ontic action or the end follows a loop");
                };
                let exit = set.iter().next().cloned();
                set.insert(b.clone());
                match (pos, exit) {
                    (true, _) => {
                        self.guard.insert(b, phi.clone());
                    }
                    (false, Some(e)) => {
                        self.guard.insert(e, phi.clone());
                    }
                    (false, None) => {}
                }
                Next::Ontic(set)
            }
        }
    }

    fn walk(&mut self, items: &[Item], cont: &Next) {
        for (i, item) in items.iter().enumerate() {
            match item {
                Item::Act { name, ontic } => {
                    self.order.push((name.clone(), *ontic));
                    let next = self.entry(items, i + 1, cont);
                    if !*ontic {
                        if let Some(Item::Act { name: o, ontic: true }) = items.get(i + 1) {
                            self.after_sensing.insert(o.clone(), name.clone());
                        }
                    }
                    self.next.insert(name.clone(), next);
                }
                Item::If { then, other, .. } => {
                    let after = self.entry(items, i + 1, cont);
                    self.walk(then, &after);
                    self.walk(other, &after);
                }
                Item::While { body, .. } => {
                    let head = self.entry(items, i, cont);
                    self.walk(body, &head);
                }
            }
        }
    }

    fn emit(self, base: &PlanningProblem, items: &[Item], origin: HashMap<String, Option<String>>) -> Result<Gadget> {
        let mut vocab = base.vocab.clone();
        let n0 = base.nvars();
        let ok = vocab.fresh("ok");
        let s = vocab.fresh("s");
        let stop = vocab.fresh("stop");
        let start = vocab.fresh("r_start");

        // ready flags: one per ontic group (the start group included), one per
        // epistemic occurrence
        let mut group_flag: HashMap<BTreeSet<String>, VarId> = HashMap::new();
        group_flag.insert(BTreeSet::from([self.first.clone()]), start);
        let mut sense_flag: HashMap<String, VarId> = HashMap::new();
        let mut reveal: HashMap<String, VarId> = HashMap::new();
        for (name, ontic) in &self.order {
            if !ontic {
                sense_flag.insert(name.clone(), vocab.fresh(&format!("r_{name}")));
                reveal.insert(name.clone(), vocab.fresh(&format!("p_{name}")));
            }
        }
        for (name, _) in &self.order {
            if let Some(Next::Ontic(set)) = self.next.get(name) {
                if !group_flag.contains_key(set) {
                    let v = vocab.fresh(&format!("r_{}", set.iter().next().expect("nonempty group")));
                    group_flag.insert(set.clone(), v);
                }
            }
        }
        let all_flags: Vec<VarId> = group_flag.values().chain(sense_flag.values()).copied().collect();
        let width = vocab.len();

        let mut problem = PlanningProblem::new(vocab, Formula::True, Sknnf::True);
        let mut ontic_names: HashSet<String> = HashSet::new();
        for (name, ontic) in &self.order {
            let orig = origin[name].as_deref();
            if *ontic {
                let sigma = match orig {
                    Some(o) => match base.action(o) {
                        Some(ActionRef::Ontic(a)) => a.theory.clone(),
                        _ => unreachable!("kind checked when flattening"),
                    },
                    None => Formula::frame(0..n0),
                };
                // flags this occurrence consumes, and flags it raises
                let groups: Vec<VarId> = group_flag
                    .iter()
                    .filter(|(set, _)| set.contains(name))
                    .map(|(_, &v)| v)
                    .collect();
                let mut raise = Vec::new();
                match &self.next[name] {
                    Next::Epistemic(e) => raise.push(sense_flag[e]),
                    Next::Ontic(set) => raise.push(group_flag[set]),
                    Next::End => raise.push(stop),
                }
                let variants: Vec<(String, Formula, Vec<VarId>, Option<VarId>)> =
                    match self.after_sensing.get(name) {
                        Some(e) => {
                            let p = reveal[e];
                            vec![
                                (format!("{name}_p"), Formula::var(p), vec![sense_flag[e]], Some(p)),
                                (format!("{name}_pbar"), Formula::literal(p, false), vec![sense_flag[e]], Some(p)),
                            ]
                        }
                        None => {
                            let mut g = Formula::disj(groups.iter().map(|&v| Formula::var(v)));
                            if let Some(phi) = self.guard.get(name) {
                                g = g.and(phi.clone());
                            }
                            vec![(name.clone(), g, groups.clone(), None)]
                        }
                    };
                for (vname, cond, lower, free) in variants {
                    let keep_ok = Formula::primed(ok).iff(Formula::conj([
                        Formula::var(ok),
                        cond,
                        Formula::literal(stop, false),
                    ]));
                    let mut parts = vec![sigma.clone(), keep_ok];
                    let mut touched: HashSet<VarId> = HashSet::from([ok]);
                    for &v in &raise {
                        parts.push(Formula::primed(v));
                        touched.insert(v);
                    }
                    for &v in &lower {
                        if touched.insert(v) {
                            parts.push(Formula::primed(v).negate());
                        }
                    }
                    if let Some(p) = free {
                        touched.insert(p);
                    }
                    let frame = Formula::frame((n0..width).filter(|v| !touched.contains(v)));
                    parts.push(frame);
                    ontic_names.insert(vname.clone());
                    problem.ontic.push(OnticAction::new(vname, Formula::conj(parts)));
                }
            } else {
                let omega = match orig {
                    Some(o) => match base.action(o) {
                        Some(ActionRef::Epistemic(a)) => a.feedbacks.clone(),
                        _ => unreachable!("kind checked when flattening"),
                    },
                    None => vec![Formula::True],
                };
                let own = sense_flag[name];
                let p = reveal[name];
                let others = Formula::disj(
                    all_flags
                        .iter()
                        .copied()
                        .filter(|&v| v != own)
                        .chain([stop])
                        .map(Formula::var),
                );
                let mut feedbacks = Vec::new();
                for phi in &omega {
                    for e in [true, false] {
                        for d in [true, false] {
                            feedbacks.push(Formula::conj([
                                phi.clone(),
                                Formula::var(own).implies(Formula::literal(p, e)),
                                others.clone().implies(Formula::literal(s, d)),
                            ]));
                        }
                    }
                }
                problem.epistemic.push(EpistemicAction::new(name.clone(), feedbacks));
            }
        }

        problem.init = Formula::conj(
            [base.init.clone(), Formula::var(ok), Formula::var(start), Formula::literal(stop, false)]
                .into_iter()
                .chain(all_flags.iter().filter(|&&v| v != start).map(|&v| Formula::literal(v, false))),
        );
        problem.goal = Sknnf::conj([
            base.goal.clone(),
            Sknnf::know(Formula::var(ok)),
            Sknnf::know(Formula::var(stop)),
            Sknnf::ignores(s),
        ]);
        debug_assert_eq!(problem.nvars(), width);
        let plan = adapted(items, &self.after_sensing, &reveal);
        let mut origin = origin;
        for (name, _) in &self.order {
            if self.after_sensing.contains_key(name) {
                let o = origin.remove(name).expect("recorded");
                origin.insert(format!("{name}_p"), o.clone());
                origin.insert(format!("{name}_pbar"), o);
            }
        }
        problem.certificate = vec!["fromkbp: the adapted plan is valid; deviations break the goal".into()];
        Ok(Gadget { problem, plan, origin })
    }
}

/// The normalized program with variant choices after each sensing action.
fn adapted(items: &[Item], after: &HashMap<String, String>, reveal: &HashMap<String, VarId>) -> Kbp {
    Kbp::sequence(items.iter().map(|item| match item {
        Item::Act { name, .. } => match after.get(name) {
            Some(e) => Kbp::if_then_else(
                Sknnf::know(Formula::var(reveal[e])),
                Kbp::act(format!("{name}_p")),
                Kbp::act(format!("{name}_pbar")),
            ),
            None => Kbp::act(name.clone()),
        },
        Item::If { pos, phi, then, other } => Kbp::if_then_else(
            literal(*pos, phi),
            adapted(then, after, reveal),
            adapted(other, after, reveal),
        ),
        Item::While { pos, phi, body } => Kbp::while_do(literal(*pos, phi), adapted(body, after, reveal)),
    }))
}

fn literal(pos: bool, phi: &Formula) -> Sknnf {
    if pos {
        Sknnf::know(phi.clone())
    } else {
        Sknnf::not_know(phi.clone())
    }
}

/// Names of the actions some trace of `plan` executes.
pub fn live_actions(problem: &PlanningProblem, plan: &Kbp, limits: &Limits) -> Result<HashSet<String>> {
    let mut live = HashSet::new();
    let m0 = problem.initial_state()?;
    let walk = walk_traces(problem, plan, &m0, limits, &mut |t| {
        for c in &t.choices {
            match c {
                Choice::Ontic(a) => {
                    live.insert(a.clone());
                }
                Choice::Feedback { action, .. } => {
                    live.insert(action.clone());
                }
                Choice::Branch(_) => {}
            }
        }
        std::ops::ControlFlow::Continue(())
    })?;
    match walk {
        Walk::Infinite(_) => Err(Error::NonTerminating),
        _ => Ok(live),
    }
}

/// Single-edit mutants of `plan`: one occurrence of an action in `live` is
/// dropped or replaced by a different action of `problem`.
pub fn mutants<R: Rng>(
    problem: &PlanningProblem,
    plan: &Kbp,
    live: &HashSet<String>,
    count: usize,
    rng: &mut R,
) -> Vec<Kbp> {
    let mut sites = Vec::new();
    collect_sites(plan, live, &mut sites);
    let names: Vec<String> = problem.actions().map(|a| a.name().to_string()).collect();
    let mut out = Vec::new();
    if sites.is_empty() {
        return out;
    }
    for _ in 0..count {
        let site = rng.gen_range(0..sites.len());
        let others: Vec<&String> = names.iter().filter(|n| **n != sites[site]).collect();
        let replacement = match others.choose(rng) {
            Some(n) if rng.gen_bool(0.7) => Some((*n).clone()),
            _ => None,
        };
        let mut k = site;
        out.push(edit(plan, live, &mut k, &replacement));
    }
    out
}

fn collect_sites(k: &Kbp, live: &HashSet<String>, out: &mut Vec<String>) {
    match k {
        Kbp::Empty => {}
        Kbp::Act(a) => {
            if live.contains(a) {
                out.push(a.clone());
            }
        }
        Kbp::Seq(a, b) | Kbp::If(_, a, b) => {
            collect_sites(a, live, out);
            collect_sites(b, live, out);
        }
        Kbp::While(_, b) => collect_sites(b, live, out),
    }
}

fn edit(k: &Kbp, live: &HashSet<String>, site: &mut usize, with: &Option<String>) -> Kbp {
    match k {
        Kbp::Empty => Kbp::Empty,
        Kbp::Act(a) => {
            if live.contains(a) {
                if *site == 0 {
                    *site = usize::MAX;
                    return with.clone().map_or(Kbp::Empty, Kbp::act);
                }
                *site = site.wrapping_sub(1);
            }
            k.clone()
        }
        Kbp::Seq(a, b) => {
            let a = edit(a, live, site, with);
            Kbp::seq(a, edit(b, live, site, with))
        }
        Kbp::If(c, a, b) => {
            let a = edit(a, live, site, with);
            Kbp::if_then_else(c.clone(), a, edit(b, live, site, with))
        }
        Kbp::While(c, b) => Kbp::while_do(c.clone(), edit(b, live, site, with)),
    }
}
