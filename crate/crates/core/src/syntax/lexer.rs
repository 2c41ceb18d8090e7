use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// `x'`
    Primed(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    Semi,
    Comma,
    Colon,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

/// Splits `src` into tokens; `#` starts a comment running to end of line.
/// `line0` is the line number reported for the first line of `src`.
pub fn tokenize(src: &str, line0: usize, col0: usize) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut line, mut col) = (line0, col0);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        let push = |out: &mut Vec<Token>, tok| {
            out.push(Token {
                tok,
                line: start.0,
                col: start.1,
            })
        };
        match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => {}
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '!' => push(&mut out, Tok::Not),
            '&' => push(&mut out, Tok::And),
            '|' => push(&mut out, Tok::Or),
            '(' => push(&mut out, Tok::LParen),
            ')' => push(&mut out, Tok::RParen),
            ';' => push(&mut out, Tok::Semi),
            ',' => push(&mut out, Tok::Comma),
            ':' => push(&mut out, Tok::Colon),
            '-' if chars.get(i + 1) == Some(&'>') => {
                push(&mut out, Tok::Implies);
                i += 2;
                col += 2;
                continue;
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                push(&mut out, Tok::Iff);
                i += 3;
                col += 3;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let name: String = chars[i..j].iter().collect();
                if chars.get(j) == Some(&'\'') {
                    push(&mut out, Tok::Primed(name));
                    j += 1;
                } else {
                    push(&mut out, Tok::Ident(name));
                }
                col += j - i;
                i = j;
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    line,
                    col,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
        i += 1;
        col += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_operators_and_primes() {
        let toks: Vec<Tok> = tokenize("x' <-> !y -> K(z) # c", 1, 1)
            .unwrap()
            .into_iter()
            .map(|t| t.tok)
            .collect();
        assert_eq!(
            toks,
            vec![
                Tok::Primed("x".into()),
                Tok::Iff,
                Tok::Not,
                Tok::Ident("y".into()),
                Tok::Implies,
                Tok::Ident("K".into()),
                Tok::LParen,
                Tok::Ident("z".into()),
                Tok::RParen,
            ]
        );
    }

    #[test]
    fn reports_position() {
        match tokenize("a\n  $", 1, 1) {
            Err(Error::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("{other:?}"),
        }
    }
}
