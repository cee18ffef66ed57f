//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := '-'* factor ('*' factor)*
//! factor := rational | identifier | '(' expr ')'
//! ```
//!
//! Rationals are `p` or `p/q`; products keep their written order.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::{Alphabet, NcPolynomial};
use crate::rational::Rational;

/// Positions are 0-based byte offsets; messages report 1-based columns.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("lexical-error: unexpected character {ch:?} at column {}", pos + 1)]
    Lex { pos: usize, ch: char },
    #[error("parse-error: {msg} at column {}", pos + 1)]
    Syntax { pos: usize, msg: String },
    #[error("unknown-symbol: {name:?} at column {}", pos + 1)]
    UnknownSymbol { name: String, pos: usize },
    #[error("zero-denominator at column {}", pos + 1)]
    ZeroDenominator { pos: usize },
}

impl ParseError {
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::Lex { .. } => "lexical-error",
            ParseError::Syntax { .. } => "parse-error",
            ParseError::UnknownSymbol { .. } => "unknown-symbol",
            ParseError::ZeroDenominator { .. } => "zero-denominator",
        }
    }

    pub fn position(&self) -> usize {
        match self {
            ParseError::Lex { pos, .. }
            | ParseError::Syntax { pos, .. }
            | ParseError::UnknownSymbol { pos, .. }
            | ParseError::ZeroDenominator { pos } => *pos,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((Tok::Plus, start)),
            '-' => out.push((Tok::Minus, start)),
            '*' => out.push((Tok::Star, start)),
            '/' => out.push((Tok::Slash, start)),
            '(' => out.push((Tok::LParen, start)),
            ')' => out.push((Tok::RParen, start)),
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[start..i];
                out.push((Tok::Int(digits.parse().expect("ascii digits")), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or(c);
                return Err(ParseError::Lex { pos: start, ch });
            }
        }
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    symbols: &'a Alphabet,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<NcPolynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc + self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<NcPolynomial, ParseError> {
        let mut negate = false;
        while *self.peek() == Tok::Minus {
            self.bump();
            negate = !negate;
        }
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(if negate { -acc } else { acc })
    }

    fn factor(&mut self) -> Result<NcPolynomial, ParseError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Int(p) => {
                if *self.peek() != Tok::Slash {
                    return Ok(NcPolynomial::constant(Rational::from_integer(p)));
                }
                self.bump();
                let den_pos = self.pos();
                match self.bump() {
                    (Tok::Int(q), _) if q.is_zero() => {
                        Err(ParseError::ZeroDenominator { pos: den_pos })
                    }
                    (Tok::Int(q), _) => Ok(NcPolynomial::constant(Rational::new(p, q))),
                    _ => Err(ParseError::Syntax {
                        pos: den_pos,
                        msg: "expected a positive integer denominator".into(),
                    }),
                }
            }
            Tok::Ident(name) => match self.symbols.lookup(&name) {
                Some(sym) => Ok(NcPolynomial::generator(sym)),
                None => Err(ParseError::UnknownSymbol { name, pos }),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                match self.bump() {
                    (Tok::RParen, _) => Ok(inner),
                    (_, at) => Err(ParseError::Syntax { pos: at, msg: "expected ')'".into() }),
                }
            }
            Tok::End => Err(ParseError::Syntax { pos, msg: "unexpected end of input".into() }),
            _ => Err(ParseError::Syntax { pos, msg: "expected a number, name or '('".into() }),
        }
    }
}

/// Parses `text` over the declared generators in `symbols`.
pub fn parse_expr(text: &str, symbols: &Alphabet) -> Result<NcPolynomial, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, at: 0, symbols };
    if *parser.peek() == Tok::End {
        return Err(ParseError::Syntax { pos: 0, msg: "empty expression".into() });
    }
    let poly = parser.expr()?;
    match parser.peek() {
        Tok::End => Ok(poly),
        _ => Err(ParseError::Syntax { pos: parser.pos(), msg: "unexpected token".into() }),
    }
}
