//! Concrete syntax: formulas, KBPs, problem files and QBF files.

pub mod lexer;
pub mod parser;
pub mod printer;

use crate::action::{EpistemicAction, OnticAction};
use crate::error::{Error, Result};
use crate::kbp::Kbp;
use crate::logic::{Epistemic, Formula, Sknnf, Vocabulary};
use crate::problem::PlanningProblem;
use crate::reductions::qbf::{Qbf, Quantifier};

pub use parser::{Names, Parser};

fn parse_with<T>(
    text: &str,
    line: usize,
    col: usize,
    vocab: &mut Vocabulary,
    names: Names,
    primed: bool,
    f: impl FnOnce(&mut Parser) -> Result<T>,
) -> Result<T> {
    let toks = lexer::tokenize(text, line, col)?;
    let mut p = Parser::new(toks, vocab, names);
    if primed {
        p = p.with_primed();
    }
    let out = f(&mut p)?;
    p.finish()?;
    Ok(out)
}

/// Objective formula without primed variables.
pub fn parse_formula(text: &str, vocab: &mut Vocabulary, names: Names) -> Result<Formula> {
    parse_with(text, 1, 1, vocab, names, false, |p| p.objective())
}

/// Ontic theory: primed variables and `frame(...)` allowed; names must be declared.
pub fn parse_theory(text: &str, vocab: &Vocabulary) -> Result<Formula> {
    let mut v = vocab.clone();
    parse_with(text, 1, 1, &mut v, Names::Declared, true, |p| p.objective())
}

pub fn parse_epistemic(text: &str, vocab: &mut Vocabulary, names: Names) -> Result<Epistemic> {
    parse_with(text, 1, 1, vocab, names, false, |p| p.epistemic())
}

/// Parses a program; conditions are normalized to SKNNF. Empty text (or
/// text made only of comments) is the empty program. Action names are not
/// resolved here.
pub fn parse_kbp(text: &str, vocab: &Vocabulary) -> Result<Kbp> {
    let toks = lexer::tokenize(text, 1, 1)?;
    if toks.is_empty() {
        return Ok(Kbp::Empty);
    }
    let mut v = vocab.clone();
    let mut p = Parser::new(toks, &mut v, Names::Declared);
    let k = p.kbp()?;
    p.finish()?;
    Ok(k)
}

fn syntax(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        col: 1,
        msg: msg.into(),
    }
}

/// Parses the problem-file format and validates the result.
pub fn parse_problem(text: &str) -> Result<PlanningProblem> {
    let problem = parse_problem_unchecked(text)?;
    problem.validate()?;
    Ok(problem)
}

/// Parses the problem-file format without semantic validation.
pub fn parse_problem_unchecked(text: &str) -> Result<PlanningProblem> {
    let mut vocab = Vocabulary::new();
    let mut init = None;
    let mut goal = None;
    let mut ontic: Vec<(usize, String, usize, String)> = Vec::new();
    let mut epistemic: Vec<(usize, String, usize, String)> = Vec::new();
    let mut bound = None;
    let mut order = None;
    let mut conditions: Vec<(usize, usize, String)> = Vec::new();
    let mut sufficient = false;
    let mut certificate = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if let Some(c) = raw.trim_start().strip_prefix("# certificate:") {
            certificate.push(c.trim().to_string());
            continue;
        }
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        let (head, body, body_col) = match trimmed.find(':') {
            Some(k) => (
                trimmed[..k].trim(),
                &trimmed[k + 1..],
                indent + k + 2,
            ),
            None => (trimmed, "", indent + trimmed.len() + 1),
        };
        let mut words = head.split_whitespace();
        let kw = words.next().unwrap_or("");
        match kw {
            "var" => {
                if trimmed.contains(':') {
                    return Err(syntax(line, "`var` takes a list of names"));
                }
                for name in words {
                    if !is_identifier(name) {
                        return Err(syntax(line, format!("invalid variable name `{name}`")));
                    }
                    if vocab.get(name).is_some() {
                        return Err(Error::Duplicate(name.to_string()));
                    }
                    vocab.intern(name);
                }
            }
            "init" => init = Some((line, body_col, body.to_string())),
            "goal" => goal = Some((line, body_col, body.to_string())),
            "ontic" | "epistemic" => {
                let name = words
                    .next()
                    .filter(|n| is_identifier(n))
                    .ok_or_else(|| syntax(line, format!("`{kw}` needs an action name")))?;
                if words.next().is_some() || !trimmed.contains(':') {
                    return Err(syntax(line, format!("expected `{kw} <name>: ...`")));
                }
                let entry = (line, name.to_string(), body_col, body.to_string());
                if kw == "ontic" {
                    ontic.push(entry);
                } else {
                    epistemic.push(entry);
                }
            }
            "bound" => {
                bound = Some(
                    body.trim()
                        .parse::<usize>()
                        .map_err(|_| syntax(line, "bound must be a nonnegative integer"))?,
                )
            }
            "order" => order = Some(body.split_whitespace().map(String::from).collect()),
            "vocab" => conditions.push((line, body_col, body.to_string())),
            "vocab-sufficient" => {
                sufficient = match body.trim() {
                    "true" => true,
                    "false" => false,
                    _ => return Err(syntax(line, "expected `true` or `false`")),
                }
            }
            other => return Err(syntax(line, format!("unknown section `{other}`"))),
        }
    }

    let declared = |text: &str, line, col, vocab: &Vocabulary, primed| {
        let mut v = vocab.clone();
        parse_with(text, line, col, &mut v, Names::Declared, primed, |p| p.objective())
    };
    let epistemic_of = |text: &str, line, col, vocab: &Vocabulary| {
        let mut v = vocab.clone();
        parse_with(text, line, col, &mut v, Names::Declared, false, |p| p.epistemic())
    };

    let init = match init {
        Some((l, c, t)) => declared(&t, l, c, &vocab, false)?,
        None => Formula::True,
    };
    let goal = match goal {
        Some((l, c, t)) => epistemic_of(&t, l, c, &vocab)?.to_sknnf(),
        None => return Err(syntax(1, "missing `goal:` line")),
    };
    let mut problem = PlanningProblem::new(vocab, init, goal);
    for (l, name, c, t) in ontic {
        let theory = declared(&t, l, c, &problem.vocab, true)?;
        problem.ontic.push(OnticAction::new(name, theory));
    }
    for (l, name, c, t) in epistemic {
        let mut v = problem.vocab.clone();
        let feedbacks = parse_with(&t, l, c, &mut v, Names::Declared, false, |p| {
            let mut fs = vec![p.objective()?];
            while !p.at_end() {
                p.semicolon()?;
                fs.push(p.objective()?);
            }
            Ok(fs)
        })?;
        problem.epistemic.push(EpistemicAction::new(name, feedbacks));
    }
    for (l, c, t) in conditions {
        problem
            .conditions
            .push(epistemic_of(&t, l, c, &problem.vocab)?.to_sknnf());
    }
    problem.bound = bound;
    problem.order = order;
    problem.conditions_sufficient = sufficient;
    problem.certificate = certificate;
    Ok(problem)
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Canonical problem-file text.
pub fn print_problem(p: &PlanningProblem) -> String {
    let v = &p.vocab;
    let mut out = String::new();
    for c in &p.certificate {
        out.push_str(&format!("# certificate: {c}\n"));
    }
    out.push_str("var");
    for n in v.names() {
        out.push(' ');
        out.push_str(n);
    }
    out.push('\n');
    out.push_str(&format!("init: {}\n", printer::formula(&p.init, v)));
    for a in &p.ontic {
        out.push_str(&format!("ontic {}: {}\n", a.name, printer::formula(&a.theory, v)));
    }
    for a in &p.epistemic {
        let fs: Vec<String> = a.feedbacks.iter().map(|f| printer::formula(f, v)).collect();
        out.push_str(&format!("epistemic {}: {}\n", a.name, fs.join(" ; ")));
    }
    out.push_str(&format!("goal: {}\n", printer::sknnf(&p.goal, v)));
    if let Some(k) = p.bound {
        out.push_str(&format!("bound: {k}\n"));
    }
    if let Some(order) = &p.order {
        out.push_str(&format!("order: {}\n", order.join(" ")));
    }
    for c in &p.conditions {
        out.push_str(&format!("vocab: {}\n", printer::sknnf(c, v)));
    }
    if p.conditions_sufficient {
        out.push_str("vocab-sufficient: true\n");
    }
    out
}

/// One condition per non-empty line (`#` comments allowed).
pub fn parse_conditions(text: &str, vocab: &Vocabulary) -> Result<Vec<Sknnf>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let mut v = vocab.clone();
        let e = parse_with(content, i + 1, 1, &mut v, Names::Declared, false, |p| p.epistemic())?;
        out.push(e.to_sknnf());
    }
    Ok(out)
}

/// QBF file: one `exists ...` / `forall ...` line per block, then `matrix: <formula>`.
pub fn parse_qbf(text: &str) -> Result<Qbf> {
    let mut vocab = Vocabulary::new();
    let mut prefix: Vec<(Quantifier, Vec<usize>)> = Vec::new();
    let mut matrix = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(body) = content.strip_prefix("matrix:") {
            let mut v = vocab.clone();
            let col = raw.find("matrix:").unwrap_or(0) + 8;
            matrix = Some(parse_with(body, line, col, &mut v, Names::Declared, false, |p| {
                p.objective()
            })?);
            continue;
        }
        let mut words = content.split_whitespace();
        let q = match words.next() {
            Some("exists") => Quantifier::Exists,
            Some("forall") => Quantifier::Forall,
            Some(other) => return Err(syntax(line, format!("unknown quantifier `{other}`"))),
            None => continue,
        };
        let mut block = Vec::new();
        for name in words {
            if !is_identifier(name) {
                return Err(syntax(line, format!("invalid variable name `{name}`")));
            }
            if vocab.get(name).is_some() {
                return Err(Error::Duplicate(name.to_string()));
            }
            block.push(vocab.intern(name));
        }
        prefix.push((q, block));
    }
    let matrix = matrix.ok_or_else(|| syntax(1, "missing `matrix:` line"))?;
    Qbf::new(vocab, prefix, matrix)
}

pub fn print_qbf(q: &Qbf) -> String {
    let mut out = String::new();
    for (quant, block) in &q.prefix {
        let kw = match quant {
            Quantifier::Exists => "exists",
            Quantifier::Forall => "forall",
        };
        let names: Vec<&str> = block.iter().map(|&v| q.vocab.name(v)).collect();
        out.push_str(&format!("{kw} {}\n", names.join(" ")));
    }
    out.push_str(&format!("matrix: {}\n", printer::formula(&q.matrix, &q.vocab)));
    out
}
