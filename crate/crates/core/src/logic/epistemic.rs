//! Purely subjective S5 formulas and their knowledge-negation normal form.

use super::formula::Formula;
use super::state::KnowledgeState;

/// Purely subjective formula: every objective subformula sits under exactly one `K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Epistemic {
    True,
    Know(Formula),
    Not(Box<Epistemic>),
    And(Box<Epistemic>, Box<Epistemic>),
    Or(Box<Epistemic>, Box<Epistemic>),
    Implies(Box<Epistemic>, Box<Epistemic>),
    Iff(Box<Epistemic>, Box<Epistemic>),
}

impl Epistemic {
    pub fn know(phi: Formula) -> Self {
        Epistemic::Know(phi)
    }

    pub fn negate(self) -> Self {
        Epistemic::Not(Box::new(self))
    }

    pub fn and(self, other: Epistemic) -> Self {
        Epistemic::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Epistemic) -> Self {
        Epistemic::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Epistemic) -> Self {
        Epistemic::Implies(Box::new(self), Box::new(other))
    }

    pub fn iff(self, other: Epistemic) -> Self {
        Epistemic::Iff(Box::new(self), Box::new(other))
    }

    pub fn size(&self) -> usize {
        match self {
            Epistemic::True => 1,
            Epistemic::Know(phi) => 1 + phi.size(),
            Epistemic::Not(a) => 1 + a.size(),
            Epistemic::And(a, b)
            | Epistemic::Or(a, b)
            | Epistemic::Implies(a, b)
            | Epistemic::Iff(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// `M |= Phi` under S5 semantics.
    pub fn holds(&self, m: &KnowledgeState) -> bool {
        match self {
            Epistemic::True => true,
            Epistemic::Know(phi) => m.all_satisfy(phi),
            Epistemic::Not(a) => !a.holds(m),
            Epistemic::And(a, b) => a.holds(m) && b.holds(m),
            Epistemic::Or(a, b) => a.holds(m) || b.holds(m),
            Epistemic::Implies(a, b) => !a.holds(m) || b.holds(m),
            Epistemic::Iff(a, b) => a.holds(m) == b.holds(m),
        }
    }

    /// Equivalent SKNNF: implications and biconditionals expanded, then
    /// negations pushed down to the `K` atoms.
    pub fn to_sknnf(&self) -> Sknnf {
        self.push(true)
    }

    fn push(&self, pos: bool) -> Sknnf {
        match (self, pos) {
            (Epistemic::True, true) => Sknnf::True,
            (Epistemic::True, false) => Sknnf::NotKnow(Formula::True),
            (Epistemic::Know(phi), true) => Sknnf::Know(phi.clone()),
            (Epistemic::Know(phi), false) => Sknnf::NotKnow(phi.clone()),
            (Epistemic::Not(a), _) => a.push(!pos),
            (Epistemic::And(a, b), true) => a.push(true).and(b.push(true)),
            (Epistemic::And(a, b), false) => a.push(false).or(b.push(false)),
            (Epistemic::Or(a, b), true) => a.push(true).or(b.push(true)),
            (Epistemic::Or(a, b), false) => a.push(false).and(b.push(false)),
            (Epistemic::Implies(a, b), true) => a.push(false).or(b.push(true)),
            (Epistemic::Implies(a, b), false) => a.push(true).and(b.push(false)),
            (Epistemic::Iff(a, b), true) => {
                (a.push(true).and(b.push(true))).or(a.push(false).and(b.push(false)))
            }
            (Epistemic::Iff(a, b), false) => {
                (a.push(true).and(b.push(false))).or(a.push(false).and(b.push(true)))
            }
        }
    }
}

/// Subjective formula in knowledge negation normal form: negation occurs only
/// inside objective subformulas or directly in front of `K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sknnf {
    True,
    Know(Formula),
    NotKnow(Formula),
    And(Box<Sknnf>, Box<Sknnf>),
    Or(Box<Sknnf>, Box<Sknnf>),
}

/// Three-valued verdict on whether a formula can still become true as the
/// knowledge state shrinks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Settled {
    /// True now and in every nonempty subset.
    Always,
    /// False now and in every nonempty subset.
    Never,
    Open,
}

impl Sknnf {
    pub fn know(phi: Formula) -> Self {
        Sknnf::Know(phi)
    }

    pub fn not_know(phi: Formula) -> Self {
        Sknnf::NotKnow(phi)
    }

    pub fn and(self, other: Sknnf) -> Self {
        Sknnf::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Sknnf) -> Self {
        Sknnf::Or(Box::new(self), Box::new(other))
    }

    /// Left-associated conjunction; `True` when empty.
    pub fn conj<I: IntoIterator<Item = Sknnf>>(items: I) -> Self {
        items
            .into_iter()
            .reduce(|a, b| a.and(b))
            .unwrap_or(Sknnf::True)
    }

    /// Left-associated disjunction; `NotKnow(true)` (unsatisfiable) when empty.
    pub fn disj<I: IntoIterator<Item = Sknnf>>(items: I) -> Self {
        items
            .into_iter()
            .reduce(|a, b| a.or(b))
            .unwrap_or(Sknnf::NotKnow(Formula::True))
    }

    /// `K l ∨ K ¬l`: the value of `v` is known.
    pub fn knows_whether(v: usize) -> Self {
        Sknnf::Know(Formula::var(v)).or(Sknnf::Know(Formula::literal(v, false)))
    }

    /// `¬K l ∧ ¬K ¬l`: the value of `v` is unknown.
    pub fn ignores(v: usize) -> Self {
        Sknnf::NotKnow(Formula::var(v)).and(Sknnf::NotKnow(Formula::literal(v, false)))
    }

    pub fn holds(&self, m: &KnowledgeState) -> bool {
        match self {
            Sknnf::True => true,
            Sknnf::Know(phi) => m.all_satisfy(phi),
            Sknnf::NotKnow(phi) => !m.all_satisfy(phi),
            Sknnf::And(a, b) => a.holds(m) && b.holds(m),
            Sknnf::Or(a, b) => a.holds(m) || b.holds(m),
        }
    }

    /// Whether the truth value is already fixed for every nonempty subset of `m`.
    /// Known atoms stay known as the state set shrinks.
    pub fn settled(&self, m: &KnowledgeState) -> Settled {
        match self {
            Sknnf::True => Settled::Always,
            Sknnf::Know(phi) => {
                if m.all_satisfy(phi) {
                    Settled::Always
                } else if !m.any_satisfy(phi) {
                    Settled::Never
                } else {
                    Settled::Open
                }
            }
            Sknnf::NotKnow(phi) => {
                if m.all_satisfy(phi) {
                    Settled::Never
                } else if !m.any_satisfy(phi) {
                    Settled::Always
                } else {
                    Settled::Open
                }
            }
            Sknnf::And(a, b) => match (a.settled(m), b.settled(m)) {
                (Settled::Never, _) | (_, Settled::Never) => Settled::Never,
                (Settled::Always, Settled::Always) => Settled::Always,
                _ => Settled::Open,
            },
            Sknnf::Or(a, b) => match (a.settled(m), b.settled(m)) {
                (Settled::Always, _) | (_, Settled::Always) => Settled::Always,
                (Settled::Never, Settled::Never) => Settled::Never,
                _ => Settled::Open,
            },
        }
    }

    /// No negation in front of a `K`.
    pub fn is_positive(&self) -> bool {
        match self {
            Sknnf::True | Sknnf::Know(_) => true,
            Sknnf::NotKnow(_) => false,
            Sknnf::And(a, b) | Sknnf::Or(a, b) => a.is_positive() && b.is_positive(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Sknnf::True => 1,
            Sknnf::Know(phi) => 1 + phi.size(),
            Sknnf::NotKnow(phi) => 2 + phi.size(),
            Sknnf::And(a, b) | Sknnf::Or(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// The objective formula when this is a single positive `K` atom.
    pub fn as_atom(&self) -> Option<&Formula> {
        match self {
            Sknnf::Know(phi) => Some(phi),
            _ => None,
        }
    }

    /// Back to the general formula type (negated atoms become `¬K`).
    pub fn to_epistemic(&self) -> Epistemic {
        match self {
            Sknnf::True => Epistemic::True,
            Sknnf::Know(phi) => Epistemic::Know(phi.clone()),
            Sknnf::NotKnow(phi) => Epistemic::Know(phi.clone()).negate(),
            Sknnf::And(a, b) => a.to_epistemic().and(b.to_epistemic()),
            Sknnf::Or(a, b) => a.to_epistemic().or(b.to_epistemic()),
        }
    }

    /// Every objective formula appearing under a `K`.
    pub fn atoms(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn go<'a>(f: &'a Sknnf, out: &mut Vec<&'a Formula>) {
            match f {
                Sknnf::True => {}
                Sknnf::Know(phi) | Sknnf::NotKnow(phi) => out.push(phi),
                Sknnf::And(a, b) | Sknnf::Or(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        go(self, &mut out);
        out
    }

    /// For a positive formula: objective formulas `χ_1..χ_m` with
    /// `M |= self` iff `M |= K χ_c` for some `c` (conjunctions of `K` atoms
    /// merge into one atom). `None` when the formula is not positive.
    pub fn positive_cover(&self) -> Option<Vec<Formula>> {
        match self {
            Sknnf::True => Some(vec![Formula::True]),
            Sknnf::Know(phi) => Some(vec![phi.clone()]),
            Sknnf::NotKnow(_) => None,
            Sknnf::Or(a, b) => {
                let mut l = a.positive_cover()?;
                l.extend(b.positive_cover()?);
                Some(l)
            }
            Sknnf::And(a, b) => {
                let l = a.positive_cover()?;
                let r = b.positive_cover()?;
                Some(
                    l.iter()
                        .flat_map(|x| r.iter().map(move |y| x.clone().and(y.clone())))
                        .collect(),
                )
            }
        }
    }
}

/// Every state satisfying `phi` satisfies `psi`, checked by enumeration.
pub fn entails(phi: &Formula, psi: &Formula, width: usize) -> bool {
    match KnowledgeState::models(phi, width) {
        None => true,
        Some(m) => m.all_satisfy(psi),
    }
}
