//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+'|'-') term)* ;
//! term   := factor ('*' factor)* ;
//! factor := coeff | var ('^' uint)? | '(' expr ')' | '-' factor ;
//! coeff  := int ('/' uint)? ;
//! ```
//!
//! Whitespace is insignificant. Juxtaposition is not multiplication.

use std::sync::Arc;

use thiserror::Error;

use super::{Polynomial, VarTable};
use crate::exactnum::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("unknown identifier `{name}` at {line}:{col}")]
    UnknownIdentifier {
        name: String,
        line: usize,
        col: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token {
                tok,
                line: l0,
                col: c0,
            });
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Int(chars[start..i].iter().collect()),
                line: l0,
                col: c0,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            // bracketed elementary symbol, e.g. E[1,0,2]
            if i < chars.len() && chars[i] == '[' {
                let close = chars[i..].iter().position(|&ch| ch == ']').map(|p| i + p);
                match close {
                    Some(end) => i = end + 1,
                    None => {
                        return Err(ParseError::Syntax {
                            line,
                            col: col + (i - start),
                            message: "unterminated `[`".into(),
                        })
                    }
                }
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: l0,
                col: c0,
            });
            continue;
        }
        return Err(ParseError::Syntax {
            line,
            col,
            message: format!("unexpected character `{c}`"),
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        col,
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    vt: &'a Arc<VarTable>,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, t: &Token, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: t.line,
            col: t.col,
            message: message.into(),
        }
    }

    fn describe(t: &Tok) -> String {
        match t {
            Tok::Int(s) => format!("number `{s}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::End => "end of input".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn uint(&mut self) -> Result<String, ParseError> {
        let t = self.bump();
        match t.tok.clone() {
            Tok::Int(s) => Ok(s),
            other => Err(self.error(
                &t,
                format!(
                    "expected unsigned integer, found {}",
                    Self::describe(&other)
                ),
            )),
        }
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let t = self.bump();
        match t.tok.clone() {
            Tok::Minus => Ok(-self.factor()?),
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.bump();
                if close.tok != Tok::RParen {
                    return Err(self.error(
                        &close,
                        format!("expected `)`, found {}", Self::describe(&close.tok)),
                    ));
                }
                Ok(inner)
            }
            Tok::Int(n) => {
                let mut text = n;
                if self.peek().tok == Tok::Slash {
                    self.bump();
                    let d = self.uint()?;
                    text = format!("{text}/{d}");
                }
                let c: Rational = text.parse().map_err(|e| self.error(&t, format!("{e}")))?;
                Ok(Polynomial::constant(self.vt, c))
            }
            Tok::Ident(name) => {
                let v = self
                    .vt
                    .index_of(&name)
                    .ok_or(ParseError::UnknownIdentifier {
                        name: name.clone(),
                        line: t.line,
                        col: t.col,
                    })?;
                let base = Polynomial::var_index(self.vt, v);
                if self.peek().tok == Tok::Caret {
                    self.bump();
                    let et = self.peek().clone();
                    let e: u32 = self
                        .uint()?
                        .parse()
                        .map_err(|_| self.error(&et, "exponent out of range"))?;
                    Ok(base.pow(e))
                } else {
                    Ok(base)
                }
            }
            other => Err(self.error(
                &t,
                format!("expected a factor, found {}", Self::describe(&other)),
            )),
        }
    }
}

/// Parses `text` over the variables of `vt`.
pub fn parse(text: &str, vt: &Arc<VarTable>) -> Result<Polynomial, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, vt };
    let result = p.expr()?;
    let t = p.peek().clone();
    if t.tok != Tok::End {
        return Err(p.error(&t, format!("unexpected {}", Parser::describe(&t.tok))));
    }
    Ok(result)
}
