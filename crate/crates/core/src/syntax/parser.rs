//! Recursive-descent parser for formulas and KBPs.
//!
//! Precedence, tightest first: `!`, `&`, `|`, `->`, `<->`. `&`, `|` and
//! `<->` associate to the left, `->` to the right.

use super::lexer::{Tok, Token};
use crate::error::{Error, Result};
use crate::kbp::Kbp;
use crate::logic::{Epistemic, Formula, Vocabulary};

const KEYWORDS: &[&str] = &[
    "skip", "if", "then", "else", "endif", "while", "do", "endwhile", "true", "false",
];

/// How identifiers in formulas are resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Names {
    /// Identifiers must already be declared.
    Declared,
    /// Unknown identifiers are declared on first use.
    Intern,
}

pub struct Parser<'v> {
    toks: Vec<Token>,
    pos: usize,
    vocab: &'v mut Vocabulary,
    names: Names,
    allow_primed: bool,
    end: (usize, usize),
}

impl<'v> Parser<'v> {
    pub fn new(toks: Vec<Token>, vocab: &'v mut Vocabulary, names: Names) -> Self {
        let end = toks.last().map_or((1, 1), |t| (t.line, t.col + 1));
        Parser {
            toks,
            pos: 0,
            vocab,
            names,
            allow_primed: false,
            end,
        }
    }

    /// Permits `x'` atoms and the `frame(...)` macro.
    pub fn with_primed(mut self) -> Self {
        self.allow_primed = true;
        self
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|t| &t.tok)
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self
            .toks
            .get(self.pos)
            .map_or(self.end, |t| (t.line, t.col));
        Err(Error::Syntax {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn describe(&self) -> String {
        match self.peek() {
            None => "end of input".to_string(),
            Some(t) => format!("{t:?}"),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {tok:?}, found {}", self.describe()))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        if self.at_keyword(kw) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{kw}`, found {}", self.describe()))
        }
    }

    pub fn semicolon(&mut self) -> Result<()> {
        self.expect(Tok::Semi)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn finish(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err(format!("unexpected trailing {}", self.describe()))
        }
    }

    fn resolve(&mut self, name: &str) -> Result<usize> {
        match self.names {
            Names::Declared => match self.vocab.get(name) {
                Some(id) => Ok(id),
                None => self.err(format!("undeclared variable `{name}`")),
            },
            Names::Intern => Ok(self.vocab.intern(name)),
        }
    }

    pub fn identifier(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err(format!("expected identifier, found {}", self.describe())),
        }
    }

    // ---- objective formulas ----

    pub fn objective(&mut self) -> Result<Formula> {
        let mut lhs = self.obj_implies()?;
        while self.peek() == Some(&Tok::Iff) {
            self.pos += 1;
            lhs = lhs.iff(self.obj_implies()?);
        }
        Ok(lhs)
    }

    fn obj_implies(&mut self) -> Result<Formula> {
        let lhs = self.obj_or()?;
        if self.peek() == Some(&Tok::Implies) {
            self.pos += 1;
            return Ok(lhs.implies(self.obj_implies()?));
        }
        Ok(lhs)
    }

    fn obj_or(&mut self) -> Result<Formula> {
        let mut lhs = self.obj_and()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            lhs = lhs.or(self.obj_and()?);
        }
        Ok(lhs)
    }

    fn obj_and(&mut self) -> Result<Formula> {
        let mut lhs = self.obj_unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            lhs = lhs.and(self.obj_unary()?);
        }
        Ok(lhs)
    }

    fn obj_unary(&mut self) -> Result<Formula> {
        match self.peek().cloned() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(self.obj_unary()?.negate())
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.objective()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::Primed(name)) => {
                if !self.allow_primed {
                    return self.err(format!("primed variable `{name}'` not allowed here"));
                }
                let id = self.resolve(&name)?;
                self.pos += 1;
                Ok(Formula::Primed(id))
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "true" => {
                    self.pos += 1;
                    Ok(Formula::True)
                }
                "false" => {
                    self.pos += 1;
                    Ok(Formula::False)
                }
                "K" if self.peek2() == Some(&Tok::LParen) => {
                    self.err("knowledge modality inside an objective formula")
                }
                "frame" if self.allow_primed && self.peek2() == Some(&Tok::LParen) => {
                    self.pos += 2;
                    let mut vars = Vec::new();
                    if self.peek() != Some(&Tok::RParen) {
                        loop {
                            let n = self.identifier()?;
                            vars.push(self.resolve(&n)?);
                            if self.peek() == Some(&Tok::Comma) {
                                self.pos += 1;
                            } else {
                                break;
                            }
                        }
                    }
                    self.expect(Tok::RParen)?;
                    Ok(Formula::frame(vars))
                }
                _ => {
                    let n = self.identifier()?;
                    Ok(Formula::Var(self.resolve(&n)?))
                }
            },
            _ => self.err(format!("expected formula, found {}", self.describe())),
        }
    }

    // ---- subjective formulas ----

    pub fn epistemic(&mut self) -> Result<Epistemic> {
        let mut lhs = self.epi_implies()?;
        while self.peek() == Some(&Tok::Iff) {
            self.pos += 1;
            lhs = lhs.iff(self.epi_implies()?);
        }
        Ok(lhs)
    }

    fn epi_implies(&mut self) -> Result<Epistemic> {
        let lhs = self.epi_or()?;
        if self.peek() == Some(&Tok::Implies) {
            self.pos += 1;
            return Ok(lhs.implies(self.epi_implies()?));
        }
        Ok(lhs)
    }

    fn epi_or(&mut self) -> Result<Epistemic> {
        let mut lhs = self.epi_and()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            lhs = lhs.or(self.epi_and()?);
        }
        Ok(lhs)
    }

    fn epi_and(&mut self) -> Result<Epistemic> {
        let mut lhs = self.epi_unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            lhs = lhs.and(self.epi_unary()?);
        }
        Ok(lhs)
    }

    fn epi_unary(&mut self) -> Result<Epistemic> {
        match self.peek().cloned() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(self.epi_unary()?.negate())
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.epistemic()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::Ident(name)) if name == "true" => {
                self.pos += 1;
                Ok(Epistemic::True)
            }
            Some(Tok::Ident(name)) if name == "false" => {
                self.pos += 1;
                Ok(Epistemic::True.negate())
            }
            Some(Tok::Ident(name)) if name == "K" && self.peek2() == Some(&Tok::LParen) => {
                self.pos += 2;
                let phi = self.objective()?;
                self.expect(Tok::RParen)?;
                Ok(Epistemic::Know(phi))
            }
            Some(Tok::Ident(_)) | Some(Tok::Primed(_)) => {
                self.err("objective formula outside the scope of K")
            }
            _ => self.err(format!("expected epistemic formula, found {}", self.describe())),
        }
    }

    // ---- programs ----

    pub fn kbp(&mut self) -> Result<Kbp> {
        let first = self.kbp_item()?;
        if self.peek() == Some(&Tok::Semi) {
            self.pos += 1;
            if self.at_end()
                || self.at_keyword("else")
                || self.at_keyword("endif")
                || self.at_keyword("endwhile")
            {
                return Ok(first);
            }
            let rest = self.kbp()?;
            return Ok(Kbp::Seq(Box::new(first), Box::new(rest)));
        }
        Ok(first)
    }

    fn kbp_item(&mut self) -> Result<Kbp> {
        if self.at_keyword("skip") {
            self.pos += 1;
            return Ok(Kbp::Empty);
        }
        if self.at_keyword("if") {
            self.pos += 1;
            let cond = self.epistemic()?.to_sknnf();
            self.expect_keyword("then")?;
            let then = self.kbp()?;
            let other = if self.at_keyword("else") {
                self.pos += 1;
                self.kbp()?
            } else {
                Kbp::Empty
            };
            self.expect_keyword("endif")?;
            return Ok(Kbp::If(cond, Box::new(then), Box::new(other)));
        }
        if self.at_keyword("while") {
            self.pos += 1;
            let cond = self.epistemic()?.to_sknnf();
            self.expect_keyword("do")?;
            let body = self.kbp()?;
            self.expect_keyword("endwhile")?;
            return Ok(Kbp::While(cond, Box::new(body)));
        }
        let name = self.identifier()?;
        Ok(Kbp::Act(name))
    }
}
