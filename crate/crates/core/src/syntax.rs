//! Concrete syntax.
//!
//! ```text
//! formula := impl
//! impl    := or ("->" impl)?
//! or      := and ("|" and)*
//! and     := neg ("&" neg)*
//! neg     := "~" neg | atom
//! atom    := "true" | "false" | IDENT | "(" formula ")"
//! ```
//!
//! `&` and `|` associate to the left, `->` to the right. The printer emits
//! the fewest parentheses that reparse to the same tree.

use crate::error::{Result, SyntaxError};
use crate::formula::{is_valid_ident, Formula, FormulaKind, FormulaWi, FormulaWiKind, Ident};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(name) => format!("identifier `{name}`"),
            Token::True => "`true`".into(),
            Token::False => "`false`".into(),
            Token::Not => "`~`".into(),
            Token::And => "`&`".into(),
            Token::Or => "`|`".into(),
            Token::Arrow => "`->`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::End => "end of input".into(),
        }
    }
}

const ATOM_START: &[&str] = &["`~`", "`(`", "`true`", "`false`", "identifier"];
const AFTER_OPERAND: &[&str] = &["`&`", "`|`", "`->`", "`)`", "end of input"];

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let token = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => Token::Not,
            b'&' => Token::And,
            b'|' => Token::Or,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Token::Arrow
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                match &text[start..=i] {
                    "true" => Token::True,
                    "false" => Token::False,
                    name => Token::Ident(name.to_owned()),
                }
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(SyntaxError {
                    offset: start,
                    expected: vec!["`~`", "`&`", "`|`", "`->`", "`(`", "`)`", "`true`", "`false`", "identifier"],
                    found: format!("character {ch:?}"),
                });
            }
        };
        i += 1;
        tokens.push((start, token));
    }
    tokens.push((text.len(), Token::End));
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].1
    }

    fn bump(&mut self) -> Token {
        let token = self.tokens[self.pos].1.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        token
    }

    fn error(&self, expected: &[&'static str]) -> SyntaxError {
        let (offset, token) = &self.tokens[self.pos];
        SyntaxError {
            offset: *offset,
            expected: expected.to_vec(),
            found: token.describe(),
        }
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.or()?;
        if *self.peek() == Token::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.and()?;
        while *self.peek() == Token::Or {
            self.bump();
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.neg()?;
        while *self.peek() == Token::And {
            self.bump();
            lhs = Formula::and(lhs, self.neg()?);
        }
        Ok(lhs)
    }

    // Negation chains are counted rather than recursed into.
    fn neg(&mut self) -> Result<Formula, SyntaxError> {
        let mut negations = 0usize;
        while *self.peek() == Token::Not {
            self.bump();
            negations += 1;
        }
        let mut phi = self.atom()?;
        for _ in 0..negations {
            phi = Formula::neg(phi);
        }
        Ok(phi)
    }

    fn atom(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek().clone() {
            Token::True => {
                self.bump();
                Ok(Formula::constant(true))
            }
            Token::False => {
                self.bump();
                Ok(Formula::constant(false))
            }
            Token::Ident(name) => {
                self.bump();
                debug_assert!(is_valid_ident(&name));
                Ok(Formula::atom(Ident::new(&name).map_err(|_| self.error(ATOM_START))?))
            }
            Token::LParen => {
                self.bump();
                let phi = self.formula()?;
                if *self.peek() != Token::RParen {
                    return Err(self.error(&["`&`", "`|`", "`->`", "`)`"]));
                }
                self.bump();
                Ok(phi)
            }
            _ => Err(self.error(ATOM_START)),
        }
    }
}

/// Parses a formula. Empty input and trailing tokens are errors.
pub fn parse(text: &str) -> Result<Formula> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let phi = parser.formula()?;
    if *parser.peek() != Token::End {
        return Err(parser.error(AFTER_OPERAND).into());
    }
    Ok(phi)
}

/// Parses an implication-free formula; `->` anywhere is rejected with
/// [`Error::ContainsImplication`].
pub fn parse_wi(text: &str) -> Result<FormulaWi> {
    let phi = parse(text)?;
    FormulaWi::try_from(&phi)
}

// ---------------------------------------------------------------------------
// Printing

const PREC_IMPL: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_NEG: u8 = 4;

enum View<'a, F> {
    Leaf(&'a str),
    Neg(&'a F),
    Binary(&'static str, u8, &'a F, &'a F),
}

trait Printable: Sized {
    fn view(&self) -> View<'_, Self>;
}

impl Printable for Formula {
    fn view(&self) -> View<'_, Self> {
        match self.kind() {
            FormulaKind::Var(x) => View::Leaf(x.as_str()),
            FormulaKind::Const(b) => View::Leaf(if *b { "true" } else { "false" }),
            FormulaKind::Neg(a) => View::Neg(a),
            FormulaKind::And(a, b) => View::Binary("&", PREC_AND, a, b),
            FormulaKind::Or(a, b) => View::Binary("|", PREC_OR, a, b),
            FormulaKind::Impl(a, b) => View::Binary("->", PREC_IMPL, a, b),
        }
    }
}

impl Printable for FormulaWi {
    fn view(&self) -> View<'_, Self> {
        match self.kind() {
            FormulaWiKind::Var(x) => View::Leaf(x.as_str()),
            FormulaWiKind::Const(b) => View::Leaf(if *b { "true" } else { "false" }),
            FormulaWiKind::Neg(a) => View::Neg(a),
            FormulaWiKind::And(a, b) => View::Binary("&", PREC_AND, a, b),
            FormulaWiKind::Or(a, b) => View::Binary("|", PREC_OR, a, b),
        }
    }
}

fn write<F: Printable>(out: &mut String, phi: &F, min_prec: u8) {
    let mut phi = phi;
    let mut min_prec = min_prec;
    // Negation binds tightest, so a chain of them never needs parentheses
    // and can be peeled iteratively; its operand is then printed at
    // negation precedence.
    while let View::Neg(inner) = phi.view() {
        out.push('~');
        phi = inner;
        min_prec = PREC_NEG;
    }
    match phi.view() {
        View::Leaf(name) => out.push_str(name),
        View::Neg(_) => unreachable!("negations were peeled above"),
        View::Binary(op, prec, lhs, rhs) => {
            let parens = prec < min_prec;
            if parens {
                out.push('(');
            }
            let (lmin, rmin) = if prec == PREC_IMPL { (prec + 1, prec) } else { (prec, prec + 1) };
            write(out, lhs, lmin);
            out.push(' ');
            out.push_str(op);
            out.push(' ');
            write(out, rhs, rmin);
            if parens {
                out.push(')');
            }
        }
    }
}

pub fn print(phi: &Formula) -> String {
    let mut out = String::new();
    write(&mut out, phi, 0);
    out
}

pub fn print_wi(phi: &FormulaWi) -> String {
    let mut out = String::new();
    write(&mut out, phi, 0);
    out
}
