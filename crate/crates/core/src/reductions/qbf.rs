//! Quantified Boolean formulas and a brute-force evaluator.

use rand::Rng;

use crate::error::{Error, Result};
use crate::logic::{Formula, VarId, Vocabulary};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

/// Prenex QBF. Every vocabulary variable is bound by exactly one block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Qbf {
    pub vocab: Vocabulary,
    pub prefix: Vec<(Quantifier, Vec<VarId>)>,
    pub matrix: Formula,
}

/// Largest QBF the evaluator accepts.
pub const MAX_QBF_VARS: usize = 24;

impl Qbf {
    /// Drops empty blocks and merges adjacent blocks with the same quantifier.
    pub fn new(vocab: Vocabulary, prefix: Vec<(Quantifier, Vec<VarId>)>, matrix: Formula) -> Result<Self> {
        let mut blocks: Vec<(Quantifier, Vec<VarId>)> = Vec::new();
        let mut bound = vec![false; vocab.len()];
        for (q, vars) in prefix {
            for &v in &vars {
                if v >= vocab.len() {
                    return Err(Error::UnknownVariable(format!("#{v}")));
                }
                if std::mem::replace(&mut bound[v], true) {
                    return Err(Error::Duplicate(vocab.name(v).to_string()));
                }
            }
            if vars.is_empty() {
                continue;
            }
            match blocks.last_mut() {
                Some((last, b)) if *last == q => b.extend(vars),
                _ => blocks.push((q, vars)),
            }
        }
        if let Some(v) = bound.iter().position(|b| !b) {
            return Err(Error::Shape(format!("variable `{}` is not quantified", vocab.name(v))));
        }
        if matrix.has_primed() {
            return Err(Error::Malformed("primed variable in a QBF matrix".into()));
        }
        Ok(Qbf {
            vocab,
            prefix: blocks,
            matrix,
        })
    }

    pub fn nvars(&self) -> usize {
        self.vocab.len()
    }

    /// The blocks matched against `shape`; the prefix must be a subsequence
    /// of `shape`, and missing blocks are returned empty.
    pub fn blocks_as(&self, shape: &[Quantifier]) -> Result<Vec<Vec<VarId>>> {
        let mut out = vec![Vec::new(); shape.len()];
        let mut k = 0;
        for (q, vars) in &self.prefix {
            while k < shape.len() && shape[k] != *q {
                k += 1;
            }
            if k == shape.len() {
                return Err(Error::Shape(format!(
                    "quantifier prefix does not fit {}",
                    shape_name(shape)
                )));
            }
            out[k] = vars.clone();
            k += 1;
        }
        Ok(out)
    }

    /// Equivalent QBF `∃x1 ∀y1 ... ∃xk ∀yk φ` with one variable per block;
    /// fresh dummy variables fill the gaps. Variables keep their order.
    pub fn strictly_alternating(&self) -> Qbf {
        let mut vocab = self.vocab.clone();
        let mut prefix = Vec::new();
        let mut want = Quantifier::Exists;
        let flip = |q| match q {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        };
        for (q, vars) in &self.prefix {
            for &v in vars {
                if *q != want {
                    let d = vocab.fresh("dummy");
                    prefix.push((want, vec![d]));
                    want = flip(want);
                }
                prefix.push((*q, vec![v]));
                want = flip(want);
            }
        }
        if want == Quantifier::Forall || prefix.is_empty() {
            if prefix.is_empty() {
                let d = vocab.fresh("dummy");
                prefix.push((Quantifier::Exists, vec![d]));
            }
            let d = vocab.fresh("dummy");
            prefix.push((Quantifier::Forall, vec![d]));
        }
        Qbf {
            vocab,
            prefix,
            matrix: self.matrix.clone(),
        }
    }
}

fn shape_name(shape: &[Quantifier]) -> String {
    shape
        .iter()
        .map(|q| match q {
            Quantifier::Exists => "∃",
            Quantifier::Forall => "∀",
        })
        .collect()
}

/// Truth value by exhaustive recursion over the prefix.
pub fn qbf_eval(q: &Qbf) -> Result<bool> {
    if q.nvars() > MAX_QBF_VARS {
        return Err(Error::LimitExceeded(format!(
            "QBF with {} variables (at most {MAX_QBF_VARS})",
            q.nvars()
        )));
    }
    let order: Vec<(Quantifier, VarId)> = q
        .prefix
        .iter()
        .flat_map(|(quant, vars)| vars.iter().map(move |&v| (*quant, v)))
        .collect();
    fn go(order: &[(Quantifier, VarId)], matrix: &Formula, assignment: u64) -> bool {
        match order.split_first() {
            None => matrix.eval(assignment),
            Some((&(q, v), rest)) => {
                let lo = go(rest, matrix, assignment);
                match q {
                    Quantifier::Exists => lo || go(rest, matrix, assignment | 1 << v),
                    Quantifier::Forall => lo && go(rest, matrix, assignment | 1 << v),
                }
            }
        }
    }
    Ok(go(&order, &q.matrix, 0))
}

/// Random QBF with the given blocks (quantifier, variable count) and a
/// matrix made of `terms` random terms of up to three literals, combined
/// either as a CNF or as a DNF. Variables are named after their block:
/// `a1, a2, ...` for the first block, `b1, ...` for the second, and so on.
pub fn random_qbf<R: Rng>(rng: &mut R, blocks: &[(Quantifier, usize)], terms: usize) -> Qbf {
    let mut vocab = Vocabulary::new();
    let mut prefix = Vec::new();
    for (i, &(q, n)) in blocks.iter().enumerate() {
        let letter = (b'a' + i as u8) as char;
        let vars = (1..=n).map(|j| vocab.intern(&format!("{letter}{j}"))).collect();
        prefix.push((q, vars));
    }
    let n = vocab.len();
    let matrix = if n == 0 {
        if rng.gen_bool(0.5) {
            Formula::True
        } else {
            Formula::False
        }
    } else {
        let cnf = rng.gen_bool(0.5);
        let items = (0..terms.max(1)).map(|_| {
            let lits = (0..rng.gen_range(1..=3usize.min(n)))
                .map(|_| Formula::literal(rng.gen_range(0..n), rng.gen_bool(0.5)));
            let lits: Vec<Formula> = lits.collect();
            if cnf {
                Formula::disj(lits)
            } else {
                Formula::conj(lits)
            }
        });
        let items: Vec<Formula> = items.collect();
        if cnf {
            Formula::conj(items)
        } else {
            Formula::disj(items)
        }
    };
    Qbf::new(vocab, prefix, matrix).expect("well-formed by construction")
}

/// Every matrix over the given variables built from at most two literals
/// joined by `&`, `|` or `<->`, plus the two constants.
pub fn small_matrices(nvars: usize) -> Vec<Formula> {
    let mut lits = Vec::new();
    for v in 0..nvars {
        lits.push(Formula::literal(v, true));
        lits.push(Formula::literal(v, false));
    }
    let mut out = vec![Formula::True, Formula::False];
    out.extend(lits.iter().cloned());
    for (i, a) in lits.iter().enumerate() {
        for b in &lits[i + 1..] {
            out.push(a.clone().and(b.clone()));
            out.push(a.clone().or(b.clone()));
            out.push(a.clone().iff(b.clone()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_qbf;
    use rand::SeedableRng;

    fn eval(src: &str) -> bool {
        qbf_eval(&parse_qbf(src).unwrap()).unwrap()
    }

    #[test]
    fn oracle_examples() {
        assert!(eval("exists a\nforall b\nmatrix: a | b"));
        assert!(eval("forall a\nexists b\nmatrix: a <-> b"));
        assert!(!eval("forall a\nexists b\nmatrix: a"));
        assert!(!eval("exists a\nforall b\nmatrix: a & b"));
    }

    #[test]
    fn unquantified_variables_are_rejected() {
        let mut v = Vocabulary::new();
        let a = v.intern("a");
        v.intern("b");
        assert!(Qbf::new(v, vec![(Quantifier::Exists, vec![a])], Formula::var(a)).is_err());
    }

    #[test]
    fn block_matching() {
        let q = parse_qbf("exists a\nmatrix: a").unwrap();
        let b = q.blocks_as(&[Quantifier::Exists, Quantifier::Forall]).unwrap();
        assert_eq!(b, vec![vec![0], vec![]]);
        let q = parse_qbf("forall a\nexists b\nmatrix: a | b").unwrap();
        assert!(q.blocks_as(&[Quantifier::Exists, Quantifier::Forall]).is_err());
    }

    #[test]
    fn alternation_padding_preserves_truth() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let shape = [
                (Quantifier::Forall, rng.gen_range(0..3)),
                (Quantifier::Exists, rng.gen_range(0..3)),
                (Quantifier::Forall, rng.gen_range(0..2)),
            ];
            let q = random_qbf(&mut rng, &shape, 2);
            let p = q.strictly_alternating();
            assert_eq!(qbf_eval(&q).unwrap(), qbf_eval(&p).unwrap());
            for (i, (quant, vars)) in p.prefix.iter().enumerate() {
                assert_eq!(vars.len(), 1);
                let want = if i % 2 == 0 { Quantifier::Exists } else { Quantifier::Forall };
                assert_eq!(*quant, want);
            }
            assert_eq!(p.prefix.len() % 2, 0);
        }
    }
}
