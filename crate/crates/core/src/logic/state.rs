//! Knowledge states: nonempty sets of states.
//!
//! A knowledge state is stored as an explicit set of bit vectors over a
//! subset of the variables (`care`); every variable outside `care` is
//! unconstrained, i.e. the set is closed under flipping it. The
//! representation is canonical (no variable in `care` is unconstrained), so
//! derived equality and ordering are set equality and a total order.

use std::fmt;

use super::formula::{submasks, Formula, Vocabulary};

/// One valuation of the declared variables; bit `i` is the value of variable `i`.
pub type State = u64;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KnowledgeState {
    width: u32,
    care: u64,
    states: Vec<State>,
}

fn width_mask(width: u32) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

impl KnowledgeState {
    /// `Mods(true)`: every state over `width` variables.
    pub fn full(width: usize) -> Self {
        KnowledgeState {
            width: width as u32,
            care: 0,
            states: vec![0],
        }
    }

    /// Builds a knowledge state from explicit states; `None` when empty.
    pub fn from_states<I: IntoIterator<Item = State>>(width: usize, states: I) -> Option<Self> {
        let care = width_mask(width as u32);
        Self::canonical(width as u32, care, states.into_iter().map(|s| s & care).collect())
    }

    /// `Mods(phi)` restricted to `width` variables; `None` when unsatisfiable.
    /// `phi` must not contain primed variables.
    pub fn models(phi: &Formula, width: usize) -> Option<Self> {
        debug_assert!(!phi.has_primed());
        let care = phi.vars_mask() & width_mask(width as u32);
        let states = submasks(care).filter(|&s| phi.eval(s)).collect();
        Self::canonical(width as u32, care, states)
    }

    fn canonical(width: u32, mut care: u64, mut states: Vec<State>) -> Option<Self> {
        states.sort_unstable();
        states.dedup();
        if states.is_empty() {
            return None;
        }
        let mut bits = care;
        while bits != 0 {
            let v = bits.trailing_zeros();
            bits &= bits - 1;
            let flip = 1u64 << v;
            if states.len().is_multiple_of(2)
                && states.iter().all(|s| states.binary_search(&(s ^ flip)).is_ok())
            {
                states.retain(|s| s & flip == 0);
                care &= !flip;
            }
        }
        Some(KnowledgeState {
            width,
            care,
            states,
        })
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    /// Variables the set actually constrains.
    pub fn care_mask(&self) -> u64 {
        self.care
    }

    /// Number of states in the set.
    pub fn cardinality(&self) -> u128 {
        let free = (width_mask(self.width) & !self.care).count_ones();
        (self.states.len() as u128) << free
    }

    /// States projected to `care_mask()`; each stands for all its completions.
    pub fn patterns(&self) -> &[State] {
        &self.states
    }

    /// Members restated over `care`, which must include `care_mask()`.
    fn expand(&self, care: u64) -> impl Iterator<Item = State> + '_ {
        let extra = care & !self.care;
        self.states
            .iter()
            .flat_map(move |&s| submasks(extra).map(move |e| s | e))
    }

    /// Every member state, in increasing numeric order.
    pub fn states(&self) -> Vec<State> {
        let mut all: Vec<State> = self.expand(width_mask(self.width)).collect();
        all.sort_unstable();
        all
    }

    /// Smallest member state.
    pub fn first_state(&self) -> State {
        self.states[0]
    }

    pub fn contains(&self, s: State) -> bool {
        self.states.binary_search(&(s & self.care)).is_ok()
    }

    pub fn is_subset(&self, other: &KnowledgeState) -> bool {
        // every constraint of `other` must be met by our members
        let care = self.care | other.care;
        self.expand(care).all(|s| other.contains(s))
    }

    pub fn union(&self, other: &KnowledgeState) -> KnowledgeState {
        let care = self.care | other.care;
        let states = self.expand(care).chain(other.expand(care)).collect();
        Self::canonical(self.width.max(other.width), care, states).expect("nonempty union")
    }

    pub fn intersect(&self, other: &KnowledgeState) -> Option<KnowledgeState> {
        let care = self.care | other.care;
        let states = self.expand(care).filter(|&s| other.contains(s)).collect();
        Self::canonical(self.width, care, states)
    }

    /// `M |= K phi`.
    pub fn all_satisfy(&self, phi: &Formula) -> bool {
        let care = self.care | phi.vars_mask();
        self.expand(care).all(|s| phi.eval(s))
    }

    /// Some member satisfies `phi`.
    pub fn any_satisfy(&self, phi: &Formula) -> bool {
        let care = self.care | phi.vars_mask();
        self.expand(care).any(|s| phi.eval(s))
    }

    /// `{s in M | s |= phi}`; `None` when empty.
    pub fn filter(&self, phi: &Formula) -> Option<KnowledgeState> {
        let care = self.care | phi.vars_mask();
        let states = self.expand(care).filter(|&s| phi.eval(s)).collect();
        Self::canonical(self.width, care, states)
    }

    /// Image under a transition theory over `X ∪ X'`:
    /// `{s' | s in M, s s' |= theory}`. `None` when some member has no successor.
    pub fn image(&self, theory: &Formula) -> Option<KnowledgeState> {
        let reads = theory.vars_mask();
        let writes = theory.primed_mask() & width_mask(self.width);
        let mut inputs: Vec<State> = self.states.iter().map(|s| s & reads).collect();
        inputs.sort_unstable();
        inputs.dedup();
        let extra = reads & !self.care;
        let mut out = Vec::new();
        for base in inputs {
            for e in submasks(extra) {
                let before = out.len();
                successors(theory, base | e, writes, &mut out);
                if out.len() == before {
                    return None;
                }
            }
        }
        Self::canonical(self.width, writes, out)
    }

    /// Renders the member states as bit strings in variable order, e.g. `{100, 101}`.
    /// Large sets are rendered with `*` for unconstrained variables.
    pub fn render(&self) -> String {
        let w = self.width as usize;
        let bit = |s: State, v: usize| if s >> v & 1 == 1 { '1' } else { '0' };
        let mut items: Vec<String> = if self.cardinality() <= 64 {
            self.states()
                .into_iter()
                .map(|s| (0..w).map(|v| bit(s, v)).collect())
                .collect()
        } else {
            self.states
                .iter()
                .map(|&s| {
                    (0..w)
                        .map(|v| if self.care >> v & 1 == 1 { bit(s, v) } else { '*' })
                        .collect()
                })
                .collect()
        };
        items.sort();
        format!("{{{}}}", items.join(", "))
    }

    /// Like [`render`](Self::render), followed by the variable order.
    pub fn render_named(&self, vocab: &Vocabulary) -> String {
        format!("{} over ({})", self.render(), vocab.names().join(" "))
    }
}

/// Successor states of `cur` under `theory`, over `width` variables.
/// Variables not mentioned primed in `theory` are unconstrained and left zero.
pub fn successors_of(theory: &Formula, cur: State, width: usize) -> Vec<State> {
    let mut out = Vec::new();
    successors(theory, cur, theory.primed_mask() & width_mask(width as u32), &mut out);
    out
}

/// Appends every assignment to the `writes` bits (others zero) that, paired
/// with `cur`, satisfies `theory`.
fn successors(theory: &Formula, cur: State, writes: u64, out: &mut Vec<State>) {
    fn go(theory: &Formula, cur: State, next: State, known: u64, rest: u64, out: &mut Vec<State>) {
        match theory.eval_partial(cur, next, known) {
            Some(false) => {}
            Some(true) => out.extend(submasks(rest).map(|e| next | e)),
            None => {
                debug_assert!(rest != 0, "fully assigned formula must evaluate");
                let v = rest.trailing_zeros();
                let bit = 1u64 << v;
                let rest = rest & !bit;
                go(theory, cur, next, known | bit, rest, out);
                go(theory, cur, next | bit, known | bit, rest, out);
            }
        }
    }
    go(theory, cur, 0, 0, writes, out);
}

impl fmt::Display for KnowledgeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_models(phi: &Formula, width: usize) -> Vec<State> {
        (0..1u64 << width).filter(|&s| phi.eval(s)).collect()
    }

    #[test]
    fn models_match_brute_force() {
        // (ok1 <-> (ok2 & ok3)) & (!ok2 | !ok3)
        let phi = Formula::var(0)
            .iff(Formula::var(1).and(Formula::var(2)))
            .and(Formula::literal(1, false).or(Formula::literal(2, false)));
        let m = KnowledgeState::models(&phi, 3).unwrap();
        assert_eq!(m.states(), brute_models(&phi, 3));
        assert_eq!(m.render(), "{000, 001, 010}");
    }

    #[test]
    fn canonical_form_drops_free_vars() {
        let a = KnowledgeState::from_states(2, [0, 1, 2, 3]).unwrap();
        assert_eq!(a, KnowledgeState::full(2));
        assert_eq!(a.care_mask(), 0);
        let b = KnowledgeState::from_states(2, [0b01, 0b11]).unwrap();
        assert_eq!(b.care_mask(), 0b01);
        assert_eq!(b.cardinality(), 2);
    }

    #[test]
    fn empty_models_is_none() {
        let phi = Formula::var(0).and(Formula::literal(0, false));
        assert!(KnowledgeState::models(&phi, 1).is_none());
    }

    #[test]
    fn image_of_reinit_action() {
        // theory x2' <-> x2 over {x1, x2}; from {11} the successors are {11, 01}
        let theory = Formula::primed(1).iff(Formula::var(1));
        let m = KnowledgeState::from_states(2, [0b11]).unwrap();
        let img = m.image(&theory).unwrap();
        assert_eq!(img.states(), vec![0b10, 0b11]);
    }

    #[test]
    fn image_fails_on_contradiction() {
        let theory = Formula::primed(0).and(Formula::primed(0).negate());
        assert!(KnowledgeState::full(1).image(&theory).is_none());
    }

    #[test]
    fn subset_and_union() {
        let a = KnowledgeState::from_states(3, [1]).unwrap();
        let b = KnowledgeState::models(&Formula::var(0), 3).unwrap();
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        assert_eq!(a.union(&b), b);
        assert_eq!(b.intersect(&a), Some(a.clone()));
    }
}
