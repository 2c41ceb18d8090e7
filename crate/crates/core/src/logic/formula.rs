//! Objective (propositional) formulas over a declared variable vocabulary.

use std::collections::HashMap;

/// Index of a declared variable; also the bit position of that variable in a state.
pub type VarId = usize;

/// Maximum number of variables a problem may declare (states are `u64` bit vectors).
pub const MAX_VARS: usize = 64;

/// Ordered set of variable names. The position of a name is its [`VarId`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    names: Vec<String>,
    index: HashMap<String, VarId>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut v = Self::new();
        for n in names {
            v.intern(&n.into());
        }
        v
    }

    /// Returns the id of `name`, declaring it if needed.
    pub fn intern(&mut self, name: &str) -> VarId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }

    /// Declares a fresh variable whose name starts with `base`, suffixing `_k` on clashes.
    pub fn fresh(&mut self, base: &str) -> VarId {
        if !self.index.contains_key(base) {
            return self.intern(base);
        }
        let mut k = 1;
        loop {
            let candidate = format!("{base}_{k}");
            if !self.index.contains_key(&candidate) {
                return self.intern(&candidate);
            }
            k += 1;
        }
    }

    pub fn get(&self, name: &str) -> Option<VarId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: VarId) -> &str {
        &self.names[id]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Propositional formula. `Primed` refers to the successor value `x'` and is
/// only meaningful inside ontic action theories.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Var(VarId),
    Primed(VarId),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(v: VarId) -> Self {
        Formula::Var(v)
    }

    pub fn primed(v: VarId) -> Self {
        Formula::Primed(v)
    }

    /// `x` when `positive`, `¬x` otherwise.
    pub fn literal(v: VarId, positive: bool) -> Self {
        if positive {
            Formula::Var(v)
        } else {
            Formula::Var(v).negate()
        }
    }

    pub fn negate(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Self {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Self {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn iff(self, other: Formula) -> Self {
        Formula::Iff(Box::new(self), Box::new(other))
    }

    /// Left-associated conjunction; `True` when empty.
    pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        items
            .into_iter()
            .reduce(|a, b| a.and(b))
            .unwrap_or(Formula::True)
    }

    /// Left-associated disjunction; `False` when empty.
    pub fn disj<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        items
            .into_iter()
            .reduce(|a, b| a.or(b))
            .unwrap_or(Formula::False)
    }

    /// Frame axioms `v' <-> v` for every listed variable.
    pub fn frame<I: IntoIterator<Item = VarId>>(vars: I) -> Self {
        Formula::conj(
            vars.into_iter()
                .map(|v| Formula::Primed(v).iff(Formula::Var(v))),
        )
    }

    /// Occurrences of symbols, connectives and constants.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Var(_) | Formula::Primed(_) => 1,
            Formula::Not(a) => 1 + a.size(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn has_primed(&self) -> bool {
        self.primed_mask() != 0
    }

    /// Bit mask of unprimed variables occurring in the formula.
    pub fn vars_mask(&self) -> u64 {
        let mut m = 0;
        self.visit_atoms(&mut |v, primed| {
            if !primed {
                m |= 1u64 << v
            }
        });
        m
    }

    /// Bit mask of primed variables occurring in the formula.
    pub fn primed_mask(&self) -> u64 {
        let mut m = 0;
        self.visit_atoms(&mut |v, primed| {
            if primed {
                m |= 1u64 << v
            }
        });
        m
    }

    /// Largest variable id mentioned, primed or not.
    pub fn max_var(&self) -> Option<VarId> {
        let mut best = None;
        self.visit_atoms(&mut |v, _| best = Some(best.map_or(v, |b: VarId| b.max(v))));
        best
    }

    fn visit_atoms(&self, f: &mut impl FnMut(VarId, bool)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Var(v) => f(*v, false),
            Formula::Primed(v) => f(*v, true),
            Formula::Not(a) => a.visit_atoms(f),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
        }
    }

    /// Truth value at a state (bit `v` holds the value of variable `v`).
    /// Primed atoms read `next`.
    pub fn eval_pair(&self, cur: u64, next: u64) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Var(v) => cur >> v & 1 == 1,
            Formula::Primed(v) => next >> v & 1 == 1,
            Formula::Not(a) => !a.eval_pair(cur, next),
            Formula::And(a, b) => a.eval_pair(cur, next) && b.eval_pair(cur, next),
            Formula::Or(a, b) => a.eval_pair(cur, next) || b.eval_pair(cur, next),
            Formula::Implies(a, b) => !a.eval_pair(cur, next) || b.eval_pair(cur, next),
            Formula::Iff(a, b) => a.eval_pair(cur, next) == b.eval_pair(cur, next),
        }
    }

    /// Truth value of an unprimed formula at `state`.
    pub fn eval(&self, state: u64) -> bool {
        self.eval_pair(state, 0)
    }

    /// Kleene evaluation where unprimed variables are fully known and primed
    /// variables are known only on the bits of `known`.
    pub fn eval_partial(&self, cur: u64, next: u64, known: u64) -> Option<bool> {
        match self {
            Formula::True => Some(true),
            Formula::False => Some(false),
            Formula::Var(v) => Some(cur >> v & 1 == 1),
            Formula::Primed(v) => (known >> v & 1 == 1).then_some(next >> v & 1 == 1),
            Formula::Not(a) => a.eval_partial(cur, next, known).map(|x| !x),
            Formula::And(a, b) => match a.eval_partial(cur, next, known) {
                Some(false) => Some(false),
                Some(true) => b.eval_partial(cur, next, known),
                None => match b.eval_partial(cur, next, known) {
                    Some(false) => Some(false),
                    _ => None,
                },
            },
            Formula::Or(a, b) => match a.eval_partial(cur, next, known) {
                Some(true) => Some(true),
                Some(false) => b.eval_partial(cur, next, known),
                None => match b.eval_partial(cur, next, known) {
                    Some(true) => Some(true),
                    _ => None,
                },
            },
            Formula::Implies(a, b) => match a.eval_partial(cur, next, known) {
                Some(false) => Some(true),
                Some(true) => b.eval_partial(cur, next, known),
                None => match b.eval_partial(cur, next, known) {
                    Some(true) => Some(true),
                    _ => None,
                },
            },
            Formula::Iff(a, b) => {
                let x = a.eval_partial(cur, next, known)?;
                let y = b.eval_partial(cur, next, known)?;
                Some(x == y)
            }
        }
    }

    /// Applies `f` to every variable id (primed atoms keep their priming).
    pub fn map_vars(&self, f: &impl Fn(VarId) -> VarId) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Var(v) => Formula::Var(f(*v)),
            Formula::Primed(v) => Formula::Primed(f(*v)),
            Formula::Not(a) => a.map_vars(f).negate(),
            Formula::And(a, b) => a.map_vars(f).and(b.map_vars(f)),
            Formula::Or(a, b) => a.map_vars(f).or(b.map_vars(f)),
            Formula::Implies(a, b) => a.map_vars(f).implies(b.map_vars(f)),
            Formula::Iff(a, b) => a.map_vars(f).iff(b.map_vars(f)),
        }
    }

    /// Negation normal form over `Var`/`Primed` literals, `And`, `Or` and constants.
    pub fn nnf(&self) -> Formula {
        self.nnf_polarity(true)
    }

    fn nnf_polarity(&self, pos: bool) -> Formula {
        match (self, pos) {
            (Formula::True, true) | (Formula::False, false) => Formula::True,
            (Formula::True, false) | (Formula::False, true) => Formula::False,
            (Formula::Var(_) | Formula::Primed(_), true) => self.clone(),
            (Formula::Var(_) | Formula::Primed(_), false) => self.clone().negate(),
            (Formula::Not(a), _) => a.nnf_polarity(!pos),
            (Formula::And(a, b), true) => a.nnf_polarity(true).and(b.nnf_polarity(true)),
            (Formula::And(a, b), false) => a.nnf_polarity(false).or(b.nnf_polarity(false)),
            (Formula::Or(a, b), true) => a.nnf_polarity(true).or(b.nnf_polarity(true)),
            (Formula::Or(a, b), false) => a.nnf_polarity(false).and(b.nnf_polarity(false)),
            (Formula::Implies(a, b), true) => a.nnf_polarity(false).or(b.nnf_polarity(true)),
            (Formula::Implies(a, b), false) => a.nnf_polarity(true).and(b.nnf_polarity(false)),
            (Formula::Iff(a, b), true) => (a.nnf_polarity(true).and(b.nnf_polarity(true)))
                .or(a.nnf_polarity(false).and(b.nnf_polarity(false))),
            (Formula::Iff(a, b), false) => (a.nnf_polarity(true).and(b.nnf_polarity(false)))
                .or(a.nnf_polarity(false).and(b.nnf_polarity(true))),
        }
    }
}

/// Iterates over every submask of `mask`, including `0` and `mask` itself.
pub fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_example_state() {
        // 110 |= ok1 & ok2 & !ok3
        let f = Formula::conj([Formula::var(0), Formula::var(1), Formula::literal(2, false)]);
        assert!(f.eval(0b011));
        assert!(Formula::True.eval(0b101));
        assert!(!Formula::var(0).eval(0));
    }

    #[test]
    fn submasks_cover_all() {
        let mut all: Vec<u64> = submasks(0b1010).collect();
        all.sort();
        assert_eq!(all, vec![0, 0b10, 0b1000, 0b1010]);
        assert_eq!(submasks(0).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn partial_eval_prunes() {
        let f = Formula::primed(0).and(Formula::primed(0).negate());
        assert_eq!(f.eval_partial(0, 0, 0), None);
        assert_eq!(f.eval_partial(0, 1, 1), Some(false));
        let g = Formula::primed(1).or(Formula::True);
        assert_eq!(g.eval_partial(0, 0, 0), Some(true));
    }

    #[test]
    fn nnf_preserves_truth() {
        let f = Formula::var(0).iff(Formula::var(1).implies(Formula::var(2))).negate();
        let g = f.nnf();
        for s in 0..8 {
            assert_eq!(f.eval(s), g.eval(s));
        }
    }

    #[test]
    fn fresh_names_avoid_clashes() {
        let mut v = Vocabulary::from_names(["ok", "ok_1"]);
        let id = v.fresh("ok");
        assert_eq!(v.name(id), "ok_2");
    }
}
