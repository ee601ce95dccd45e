//! Text grammar for polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := number ('/' number)? | identifier | '(' expr ')'
//! ```
//!
//! Numbers are integers or decimals (`2`, `0.25`, `1.5e-3`); `3/4` is a
//! rational literal. Implicit multiplication (`2x`) is rejected.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use super::{MultiPoly, Ring};
use crate::error::{Error, Result};
use crate::scalar::parse_decimal;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Op(char),
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Num(q) => write!(f, "number `{q}`"),
            Tok::Ident(name) => write!(f, "`{name}`"),
            Tok::Op(c) => write!(f, "`{c}`"),
        }
    }
}

fn err(position: usize, message: impl Into<String>) -> Error {
    Error::Parse { position, message: message.into() }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            // exponent only when followed by digits, so `2e` is not swallowed
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let lit = &text[start..i];
            let value = parse_decimal(lit).ok_or_else(|| err(start, format!("malformed number `{lit}`")))?;
            out.push((start, Tok::Num(value)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if "+-*^/()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(err(i, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
    ring: &'a Arc<Ring>,
}

type Poly = MultiPoly<BigRational>;

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.eat('^') {
            let at = self.offset();
            match self.toks.get(self.pos) {
                Some((_, Tok::Num(q))) if q.is_integer() => {
                    let e: u32 =
                        q.to_integer().try_into().map_err(|_| err(at, "exponent must be a nonnegative integer"))?;
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return Err(err(at, "exponent must be a nonnegative integer")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        let at = self.offset();
        match self.toks.get(self.pos).cloned() {
            Some((_, Tok::Num(q))) => {
                self.pos += 1;
                let mut value = q;
                if self.eat('/') {
                    let at = self.offset();
                    match self.toks.get(self.pos).cloned() {
                        Some((_, Tok::Num(d))) if !d.is_zero() => {
                            self.pos += 1;
                            value /= d;
                        }
                        _ => return Err(err(at, "expected nonzero denominator")),
                    }
                }
                Ok(Poly::constant(self.ring, value))
            }
            Some((_, Tok::Ident(name))) => {
                self.pos += 1;
                let idx = self.ring.index_of(&name).expect("ring built from the same tokens");
                Ok(Poly::variable(self.ring, idx))
            }
            Some((_, Tok::Op('('))) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(err(self.offset(), "expected `)`"));
                }
                Ok(inner)
            }
            Some((_, t)) => Err(err(at, format!("unexpected {t}"))),
            None => Err(err(at, "unexpected end of input")),
        }
    }
}

fn parse_in(text: &str, toks: &[(usize, Tok)], ring: &Arc<Ring>) -> Result<Poly> {
    let mut p = Parser { toks, pos: 0, end: text.len(), ring };
    let poly = p.expr()?;
    if p.pos != toks.len() {
        let at = p.offset();
        return Err(err(at, "expected an operator (implicit multiplication is not allowed)"));
    }
    Ok(poly)
}

/// Parses several polynomials into one ring whose variables appear in order
/// of first occurrence across the inputs.
pub fn parse_system<S: AsRef<str>>(texts: &[S]) -> Result<(Arc<Ring>, Vec<Poly>)> {
    let tokens: Vec<Vec<(usize, Tok)>> = texts.iter().map(|t| tokenize(t.as_ref())).collect::<Result<_>>()?;
    let mut names: Vec<String> = Vec::new();
    for (_, t) in tokens.iter().flatten() {
        if let Tok::Ident(name) = t {
            if !names.contains(name) {
                names.push(name.clone());
            }
        }
    }
    let ring = Ring::new(names);
    let polys =
        texts.iter().zip(&tokens).map(|(text, toks)| parse_in(text.as_ref(), toks, &ring)).collect::<Result<_>>()?;
    Ok((ring, polys))
}

/// Parses one polynomial into the given ring.
pub fn parse_polynomial(text: &str, ring: &Arc<Ring>) -> Result<Poly> {
    let toks = tokenize(text)?;
    for (at, t) in &toks {
        if let Tok::Ident(name) = t {
            if ring.index_of(name).is_none() {
                return Err(err(*at, format!("unknown variable `{name}`")));
            }
        }
    }
    parse_in(text, &toks, ring)
}
