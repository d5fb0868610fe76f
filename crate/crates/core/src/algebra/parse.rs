//! Recursive-descent parser for the polynomial expression grammar.
//!
//! ```text
//! expr   := ["-"] term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := "-" factor | atom ["^" ["-"] int]
//! atom   := int | var | "(" expr ")"
//! ```
//! Negative exponents are accepted on variables only.

use std::collections::HashMap;

use num_bigint::BigInt;

use super::mpoly::{is_valid_name, MPoly, Monomial, Var};
use super::AlgebraError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, AlgebraError> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((i, Tok::Plus));
                i += 1
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = s[start..i].parse().map_err(|_| parse_err(start, "bad integer"))?;
                out.push((start, Tok::Int(n)));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(s[start..i].to_string())));
            }
            _ => return Err(parse_err(i, &format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

fn parse_err(pos: usize, msg: &str) -> AlgebraError {
    AlgebraError::Parse { pos, msg: msg.to_string() }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
    vars: &'a mut HashMap<String, Var>,
    allowed: Option<&'a [Var]>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.len)
    }

    fn expr(&mut self) -> Result<MPoly, AlgebraError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add_ref(&t);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub_ref(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly, AlgebraError> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.mul_ref(&f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MPoly, AlgebraError> {
        if let Some(Tok::Minus) = self.peek() {
            self.pos += 1;
            return Ok(self.factor()?.neg_ref());
        }
        let (base, var) = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let neg = if let Some(Tok::Minus) = self.peek() {
                self.pos += 1;
                true
            } else {
                false
            };
            let at = self.here();
            let e = match self.peek() {
                Some(Tok::Int(n)) => {
                    let n = n.clone();
                    self.pos += 1;
                    i32::try_from(n).map_err(|_| parse_err(at, "exponent too large"))?
                }
                _ => return Err(parse_err(at, "expected integer exponent")),
            };
            if neg {
                return match var {
                    Some(v) => Ok(MPoly::term(BigInt::from(1), Monomial::var(v, -e))),
                    None => Err(parse_err(at, "negative exponent allowed on variables only")),
                };
            }
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<(MPoly, Option<Var>), AlgebraError> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok((MPoly::constant(n), None))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let v = self.resolve(&name, at)?;
                Ok((MPoly::var(&v), Some(v)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok((e, None))
                    }
                    _ => Err(parse_err(self.here(), "expected ')'")),
                }
            }
            _ => Err(parse_err(at, "expected integer, variable or '('")),
        }
    }

    fn resolve(&mut self, name: &str, at: usize) -> Result<Var, AlgebraError> {
        if let Some(v) = self.vars.get(name) {
            return Ok(v.clone());
        }
        if let Some(allowed) = self.allowed {
            return match allowed.iter().find(|v| v.name() == name) {
                Some(v) => {
                    self.vars.insert(name.to_string(), v.clone());
                    Ok(v.clone())
                }
                None => Err(parse_err(at, &format!("unknown variable {name}"))),
            };
        }
        debug_assert!(is_valid_name(name));
        let v = Var::new(name)?;
        self.vars.insert(name.to_string(), v.clone());
        Ok(v)
    }
}

fn run(s: &str, allowed: Option<&[Var]>) -> Result<MPoly, AlgebraError> {
    let toks = lex(s)?;
    let mut vars = HashMap::new();
    let mut p = Parser { toks, pos: 0, len: s.len(), vars: &mut vars, allowed };
    if p.peek().is_none() {
        return Err(parse_err(0, "empty expression"));
    }
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(parse_err(p.here(), "trailing input"));
    }
    Ok(e)
}

/// Parses an expression; any well-formed identifier becomes a variable.
pub fn parse_mpoly(s: &str) -> Result<MPoly, AlgebraError> {
    run(s, None)
}

/// Parses an expression whose identifiers must belong to `vars`.
pub fn parse_mpoly_in(s: &str, vars: &[Var]) -> Result<MPoly, AlgebraError> {
    run(s, Some(vars))
}

impl std::str::FromStr for MPoly {
    type Err = AlgebraError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_mpoly(s)
    }
}
