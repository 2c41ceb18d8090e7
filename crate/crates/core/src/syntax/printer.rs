//! Canonical text rendering; output parses back to the same tree.

use crate::kbp::Kbp;
use crate::logic::{Epistemic, Formula, Sknnf, Vocabulary};

const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

fn wrap(s: String, prec: u8, min: u8) -> String {
    if prec < min {
        format!("({s})")
    } else {
        s
    }
}

/// Renders an objective formula with minimal parentheses.
pub fn formula(f: &Formula, vocab: &Vocabulary) -> String {
    obj(f, vocab).0
}

fn obj(f: &Formula, vocab: &Vocabulary) -> (String, u8) {
    let bin = |a: &Formula, b: &Formula, op: &str, prec: u8, right_assoc: bool| {
        let (l, lp) = obj(a, vocab);
        let (r, rp) = obj(b, vocab);
        let (lmin, rmin) = if right_assoc { (prec + 1, prec) } else { (prec, prec + 1) };
        (format!("{} {op} {}", wrap(l, lp, lmin), wrap(r, rp, rmin)), prec)
    };
    match f {
        Formula::True => ("true".into(), UNARY + 1),
        Formula::False => ("false".into(), UNARY + 1),
        Formula::Var(v) => (vocab.name(*v).to_string(), UNARY + 1),
        Formula::Primed(v) => (format!("{}'", vocab.name(*v)), UNARY + 1),
        Formula::Not(a) => {
            let (s, p) = obj(a, vocab);
            (format!("!{}", wrap(s, p, UNARY)), UNARY)
        }
        Formula::And(a, b) => bin(a, b, "&", AND, false),
        Formula::Or(a, b) => bin(a, b, "|", OR, false),
        Formula::Implies(a, b) => bin(a, b, "->", IMPLIES, true),
        Formula::Iff(a, b) => bin(a, b, "<->", IFF, false),
    }
}

pub fn epistemic(f: &Epistemic, vocab: &Vocabulary) -> String {
    epi(f, vocab).0
}

fn epi(f: &Epistemic, vocab: &Vocabulary) -> (String, u8) {
    let bin = |a: &Epistemic, b: &Epistemic, op: &str, prec: u8, right_assoc: bool| {
        let (l, lp) = epi(a, vocab);
        let (r, rp) = epi(b, vocab);
        let (lmin, rmin) = if right_assoc { (prec + 1, prec) } else { (prec, prec + 1) };
        (format!("{} {op} {}", wrap(l, lp, lmin), wrap(r, rp, rmin)), prec)
    };
    match f {
        Epistemic::True => ("true".into(), UNARY + 1),
        Epistemic::Know(phi) => (format!("K({})", formula(phi, vocab)), UNARY + 1),
        Epistemic::Not(a) => {
            let (s, p) = epi(a, vocab);
            (format!("!{}", wrap(s, p, UNARY)), UNARY)
        }
        Epistemic::And(a, b) => bin(a, b, "&", AND, false),
        Epistemic::Or(a, b) => bin(a, b, "|", OR, false),
        Epistemic::Implies(a, b) => bin(a, b, "->", IMPLIES, true),
        Epistemic::Iff(a, b) => bin(a, b, "<->", IFF, false),
    }
}

pub fn sknnf(f: &Sknnf, vocab: &Vocabulary) -> String {
    sk(f, vocab).0
}

fn sk(f: &Sknnf, vocab: &Vocabulary) -> (String, u8) {
    let bin = |a: &Sknnf, b: &Sknnf, op: &str, prec: u8| {
        let (l, lp) = sk(a, vocab);
        let (r, rp) = sk(b, vocab);
        (format!("{} {op} {}", wrap(l, lp, prec), wrap(r, rp, prec + 1)), prec)
    };
    match f {
        Sknnf::True => ("true".into(), UNARY + 1),
        Sknnf::Know(phi) => (format!("K({})", formula(phi, vocab)), UNARY + 1),
        Sknnf::NotKnow(phi) => (format!("!K({})", formula(phi, vocab)), UNARY),
        Sknnf::And(a, b) => bin(a, b, "&", AND),
        Sknnf::Or(a, b) => bin(a, b, "|", OR),
    }
}

/// Multi-line rendering of a program; `skip` for the empty program.
pub fn kbp(p: &Kbp, vocab: &Vocabulary) -> String {
    let mut out = String::new();
    write_kbp(p, vocab, 0, &mut out);
    out
}

fn write_kbp(p: &Kbp, vocab: &Vocabulary, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match p {
        Kbp::Empty => {
            out.push_str(&pad);
            out.push_str("skip");
        }
        Kbp::Act(a) => {
            out.push_str(&pad);
            out.push_str(a);
        }
        Kbp::Seq(a, b) => {
            write_kbp(a, vocab, depth, out);
            out.push_str(";\n");
            write_kbp(b, vocab, depth, out);
        }
        Kbp::If(c, t, e) => {
            out.push_str(&format!("{pad}if {} then\n", sknnf(c, vocab)));
            write_kbp(t, vocab, depth + 1, out);
            if **e != Kbp::Empty {
                out.push_str(&format!("\n{pad}else\n"));
                write_kbp(e, vocab, depth + 1, out);
            }
            out.push_str(&format!("\n{pad}endif"));
        }
        Kbp::While(c, body) => {
            out.push_str(&format!("{pad}while {} do\n", sknnf(c, vocab)));
            write_kbp(body, vocab, depth + 1, out);
            out.push_str(&format!("\n{pad}endwhile"));
        }
    }
}

/// Single-line rendering, used in reports and error messages.
pub fn kbp_inline(p: &Kbp, vocab: &Vocabulary) -> String {
    match p {
        Kbp::Empty => "skip".into(),
        Kbp::Act(a) => a.clone(),
        Kbp::Seq(a, b) => format!("{}; {}", kbp_inline(a, vocab), kbp_inline(b, vocab)),
        Kbp::If(c, t, e) if **e == Kbp::Empty => format!(
            "if {} then {} endif",
            sknnf(c, vocab),
            kbp_inline(t, vocab)
        ),
        Kbp::If(c, t, e) => format!(
            "if {} then {} else {} endif",
            sknnf(c, vocab),
            kbp_inline(t, vocab),
            kbp_inline(e, vocab)
        ),
        Kbp::While(c, b) => format!("while {} do {} endwhile", sknnf(c, vocab), kbp_inline(b, vocab)),
    }
}
