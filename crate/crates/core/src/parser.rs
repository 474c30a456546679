//! Recursive-descent parser for formulas.
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" imp)*
//! imp     := or ("->" imp)?
//! or      := and ("\/" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | "(" formula ")" | atom
//! atom    := setexpr "|" setexpr "|" setexpr
//! setexpr := "{" [idlist] "}" | idlist
//! idlist  := id ("," id)*
//! id      := [A-Za-z_][A-Za-z0-9_]*
//! ```
//!
//! Whitespace is insignificant and `#` starts a comment running to the end
//! of the line.

use std::fmt;

use thiserror::Error;

use crate::syntax::{Atom, Formula, Signature, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {position}: expected {}, found {found}", .expected.join(" or "))]
    Syntax {
        position: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("unknown vertex `{name}` at offset {position}")]
    UnknownVertex { name: String, position: usize },
    #[error("empty formula")]
    EmptyFormula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LBrace,
    RBrace,
    Comma,
    Bar,
    Tilde,
    Arrow,
    DoubleArrow,
    Amp,
    Vee,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(name) => write!(f, "identifier `{name}`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Tilde => f.write_str("`~`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::DoubleArrow => f.write_str("`<->`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Vee => f.write_str("`\\/`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
                continue;
            }
            b'{' => Tok::LBrace,
            b'}' => Tok::RBrace,
            b',' => Tok::Comma,
            b'|' => Tok::Bar,
            b'~' => Tok::Tilde,
            b'&' => Tok::Amp,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Tok::DoubleArrow
            }
            b'\\' if bytes.get(i + 1) == Some(&b'/') => {
                i += 1;
                Tok::Vee
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_')
                {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            _ => {
                let found = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    position: start,
                    expected: vec!["a token".into()],
                    found: format!("`{found}`"),
                });
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    sig: &'a Signature,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.tokens[self.pos].clone();
        if t.0 != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError::Syntax {
            position: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        }
    }

    fn expect(&mut self, tok: Tok, label: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[label]))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::DoubleArrow {
            self.bump();
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Vee {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::LBrace | Tok::Ident(_) => self.atom(),
            _ => Err(self.error(&["`~`", "`(`", "a vertex set"])),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let left = self.set()?;
        self.expect(Tok::Bar, "`|`")?;
        let middle = self.set()?;
        self.expect(Tok::Bar, "`|`")?;
        let right = self.set()?;
        Ok(Formula::Atom(Atom::new(left, middle, right)))
    }

    fn set(&mut self) -> Result<VertexSet, ParseError> {
        match self.peek() {
            Tok::LBrace => {
                self.bump();
                if *self.peek() == Tok::RBrace {
                    self.bump();
                    return Ok(VertexSet::EMPTY);
                }
                let set = self.id_list()?;
                self.expect(Tok::RBrace, "`}`")?;
                Ok(set)
            }
            Tok::Ident(_) => self.id_list(),
            _ => Err(self.error(&["`{`", "identifier"])),
        }
    }

    fn id_list(&mut self) -> Result<VertexSet, ParseError> {
        let mut set = VertexSet::EMPTY;
        loop {
            set = set.with(self.ident()?);
            if *self.peek() != Tok::Comma {
                return Ok(set);
            }
            self.bump();
        }
    }

    fn ident(&mut self) -> Result<usize, ParseError> {
        match self.bump() {
            (Tok::Ident(name), position) => self
                .sig
                .vertex(&name)
                .ok_or(ParseError::UnknownVertex { name, position }),
            _ => {
                self.pos -= 1;
                Err(self.error(&["identifier"]))
            }
        }
    }
}

/// Parses `text` against the vertex universe `sig`.
///
/// Connectives are kept as written; call [`Formula::desugar`] to reduce to
/// negation and implication.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let tokens = tokenize(text)?;
    if tokens.len() == 1 {
        return Err(ParseError::EmptyFormula);
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        sig,
    };
    let formula = parser.formula()?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.error(&["a connective", "end of input"]));
    }
    Ok(formula)
}
