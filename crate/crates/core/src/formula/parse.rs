//! Recursive-descent parser for the textual formula syntax.
//!
//! ```text
//! formula := quant | iff
//! quant   := ("E" | "A") var ("," var)* "." formula
//! iff     := imp ("<->" imp)*
//! imp     := or ("->" or)*
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | "(" formula ")" | quant | atom
//! atom    := term rel term | INT "divides" term | "true" | "false"
//! term    := ["-"] addend (("+" | "-") addend)*
//! addend  := INT | var | INT "*" var
//! ```
//!
//! `->` associates to the right, `<->` to the left. Variables receive their
//! index in the global order at their first occurrence in the text.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use super::{normalize_atom, normalize_div, Formula, LinearTerm, Rel, VarId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Un-normalized side of a relation: a homogeneous part plus a constant.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawTerm {
    pub term: LinearTerm,
    pub constant: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Exists,
    Forall,
    True,
    False,
    Divides,
    LParen,
    RParen,
    Dot,
    Comma,
    Bang,
    Amp,
    Bar,
    Arrow,
    DArrow,
    Rel(Rel),
    Plus,
    Minus,
    Star,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(i) => format!("integer `{i}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::Exists => "E",
            Tok::Forall => "A",
            Tok::True => "true",
            Tok::False => "false",
            Tok::Divides => "divides",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Dot => ".",
            Tok::Comma => ",",
            Tok::Bang => "!",
            Tok::Amp => "&",
            Tok::Bar => "|",
            Tok::Arrow => "->",
            Tok::DArrow => "<->",
            Tok::Rel(r) => r.symbol(),
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Int(_) | Tok::Ident(_) | Tok::Eof => "",
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, column);
        let err = |message: String| ParseError {
            line: start_line,
            column: start_col,
            message,
        };
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let rest = &chars[i..];
        let starts = |s: &str| rest.iter().take(s.len()).copied().eq(s.chars());
        let (tok, len) = if c.is_ascii_digit() {
            let len = rest.iter().take_while(|c| c.is_ascii_digit()).count();
            let digits: String = rest[..len].iter().collect();
            (Tok::Int(digits.parse().expect("digits")), len)
        } else if c.is_alphabetic() || c == '_' {
            let len = rest
                .iter()
                .take_while(|c| c.is_alphanumeric() || **c == '_' || **c == '\'')
                .count();
            let word: String = rest[..len].iter().collect();
            let tok = match word.as_str() {
                "E" => Tok::Exists,
                "A" => Tok::Forall,
                "true" => Tok::True,
                "false" => Tok::False,
                "divides" => Tok::Divides,
                _ => Tok::Ident(word),
            };
            (tok, len)
        } else if starts("<->") {
            (Tok::DArrow, 3)
        } else if starts("->") {
            (Tok::Arrow, 2)
        } else if starts("<=") {
            (Tok::Rel(Rel::Le), 2)
        } else if starts(">=") {
            (Tok::Rel(Rel::Ge), 2)
        } else if starts("!=") {
            (Tok::Rel(Rel::Ne), 2)
        } else {
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '.' => Tok::Dot,
                ',' => Tok::Comma,
                '!' => Tok::Bang,
                '&' => Tok::Amp,
                '|' => Tok::Bar,
                '=' => Tok::Rel(Rel::Eq),
                '<' => Tok::Rel(Rel::Lt),
                '>' => Tok::Rel(Rel::Gt),
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                other => return Err(err(format!("unexpected character `{other}`"))),
            };
            (tok, 1)
        };
        out.push(Spanned {
            tok,
            line: start_line,
            column: start_col,
        });
        i += len;
        column += len;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    vars: HashMap<String, VarId>,
}

/// Parses a formula; atoms are stored in normalized form.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        vars: HashMap::new(),
    };
    let f = p.formula()?;
    p.expect(&Tok::Eof)?;
    Ok(f)
}

impl Parser {
    fn peek(&self) -> &Tok {
        self.peek_at(0)
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.peek().clone();
        self.pos += 1;
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let s = &self.toks[self.pos.min(self.toks.len() - 1)];
        ParseError {
            line: s.line,
            column: s.column,
            message: message.into(),
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.error_here(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        if self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn var(&mut self, name: String) -> VarId {
        let next = self.vars.len();
        self.vars
            .entry(name.clone())
            .or_insert_with(|| VarId::new(name, next))
            .clone()
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Exists | Tok::Forall => self.quant(),
            _ => self.iff(),
        }
    }

    fn quant(&mut self) -> Result<Formula, ParseError> {
        let exists = self.bump() == Tok::Exists;
        let mut binders = Vec::new();
        loop {
            match self.bump() {
                Tok::Ident(name) => binders.push(self.var(name)),
                _ => {
                    self.pos -= 1;
                    return Err(self.unexpected("a variable"));
                }
            }
            if self.peek() == &Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        self.expect(&Tok::Dot)?;
        let body = self.formula()?;
        Ok(binders.into_iter().rev().fold(body, |acc, v| {
            if exists {
                Formula::exists(v, acc)
            } else {
                Formula::forall(v, acc)
            }
        }))
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while self.peek() == &Tok::DArrow {
            self.bump();
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.peek() == &Tok::Arrow {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == &Tok::Bar {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == &Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Tok::Exists | Tok::Forall => self.quant(),
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        if let (Tok::Int(d), Tok::Divides) = (self.peek().clone(), self.peek_at(1)) {
            if d < BigInt::from(2) {
                return Err(self.error_here(format!("divisor must be at least 2, found {d}")));
            }
            self.bump();
            self.bump();
            let t = self.term()?;
            return Ok(normalize_div(d, &t));
        }
        let lhs = self.term()?;
        let rel = match self.bump() {
            Tok::Rel(r) => r,
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("a relation"));
            }
        };
        let rhs = self.term()?;
        Ok(normalize_atom(&lhs, rel, &rhs))
    }

    fn term(&mut self) -> Result<RawTerm, ParseError> {
        let mut sign = BigInt::one();
        if self.peek() == &Tok::Minus {
            self.bump();
            sign = -sign;
        }
        let mut pairs = Vec::new();
        let mut constant = BigInt::zero();
        loop {
            match self.bump() {
                Tok::Int(k) => {
                    if self.peek() == &Tok::Star {
                        self.bump();
                        match self.bump() {
                            Tok::Ident(name) => pairs.push((self.var(name), &sign * k)),
                            _ => {
                                self.pos -= 1;
                                return Err(self.unexpected("a variable"));
                            }
                        }
                    } else {
                        constant += &sign * k;
                    }
                }
                Tok::Ident(name) => pairs.push((self.var(name), sign.clone())),
                _ => {
                    self.pos -= 1;
                    return Err(self.unexpected("an integer or a variable"));
                }
            }
            match self.peek() {
                Tok::Plus => sign = BigInt::one(),
                Tok::Minus => sign = -BigInt::one(),
                _ => break,
            }
            self.bump();
        }
        Ok(RawTerm {
            term: LinearTerm::from_pairs(pairs),
            constant,
        })
    }
}
