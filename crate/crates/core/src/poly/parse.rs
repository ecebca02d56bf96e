//! Text front-end for polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'zeta' integer | variable | '(' expr ')'
//! variable := identifier ('[' integer ']')*
//! ```
//!
//! Division is only allowed by nonzero constants, and there is no implicit
//! multiplication.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::coeff::Coefficient;
use super::multipoly::{MultiPoly, QPoly};
use super::var::{Indices, Stem, VarName};
use crate::exact::Rational;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

/// A free-form identifier that matches no structured variable stem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownRole {
    pub offset: usize,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Parsed<C: Coefficient> {
    pub poly: MultiPoly<C>,
    pub warnings: Vec<UnknownRole>,
}

/// Parses a polynomial with rational coefficients.
pub fn parse(text: &str) -> Result<QPoly, ParseError> {
    parse_in(text, &()).map(|p| p.poly)
}

/// Parses a polynomial over the given coefficient domain, collecting
/// unknown-role warnings.
pub fn parse_in<C: Coefficient>(text: &str, domain: &C::Domain) -> Result<Parsed<C>, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0, domain, warnings: Vec::new(), end: text.len() };
    let poly = parser.expr()?;
    if let Some(t) = parser.peek() {
        return Err(err(t.offset, "unexpected token after expression"));
    }
    Ok(Parsed { poly, warnings: parser.warnings })
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn err(offset: usize, message: &str) -> ParseError {
    ParseError { offset, message: message.to_string() }
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
        } else if b.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = BigInt::parse_bytes(&bytes[start..i], 10).expect("digits");
            out.push(Token { tok: Tok::Int(n), offset: start });
        } else if b.is_ascii_alphabetic() || b == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(text[start..i].to_string()), offset: start });
        } else if b"+-*/^()[]".contains(&b) {
            out.push(Token { tok: Tok::Sym(b as char), offset: i });
            i += 1;
        } else {
            return Err(err(i, "unexpected character"));
        }
    }
    Ok(out)
}

struct Parser<'a, C: Coefficient> {
    tokens: Vec<Token>,
    pos: usize,
    domain: &'a C::Domain,
    warnings: Vec<UnknownRole>,
    end: usize,
}

impl<C: Coefficient> Parser<'_, C> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_sym(&self) -> Option<char> {
        match self.peek() {
            Some(Token { tok: Tok::Sym(c), .. }) => Some(*c),
            _ => None,
        }
    }

    fn offset(&self) -> usize {
        self.peek().map_or(self.end, |t| t.offset)
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek_sym() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError { offset: self.offset(), message: alloc::format!("expected '{c}'") })
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        match self.peek() {
            Some(Token { tok: Tok::Int(n), .. }) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => Err(err(self.offset(), "expected integer")),
        }
    }

    fn small_integer(&mut self) -> Result<u32, ParseError> {
        let at = self.offset();
        let n = self.integer()?;
        u32::try_from(n).map_err(|_| err(at, "integer too large"))
    }

    fn expr(&mut self) -> Result<MultiPoly<C>, ParseError> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_sym() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly<C>, ParseError> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_sym() {
            self.pos += 1;
            let at = self.offset();
            let rhs = self.unary()?;
            acc = if op == '*' {
                &acc * &rhs
            } else {
                let inv = rhs
                    .as_constant()
                    .ok_or_else(|| err(at, "division by a non-constant"))?
                    .try_inv()
                    .ok_or_else(|| err(at, "division by zero"))?;
                acc.scale(&inv)
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly<C>, ParseError> {
        if self.peek_sym() == Some('-') {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<MultiPoly<C>, ParseError> {
        let base = self.atom()?;
        if self.peek_sym() == Some('^') {
            self.pos += 1;
            let e = self.small_integer()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly<C>, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(err(self.end, "unexpected end of input"));
        };
        match tok.tok {
            Tok::Int(n) => {
                self.pos += 1;
                let q = Rational::from_integer(n);
                let c = C::from_rational_in(self.domain, &q)
                    .ok_or_else(|| err(tok.offset, "constant not representable in domain"))?;
                Ok(MultiPoly::constant(self.domain, c))
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect_sym(')')?;
                Ok(inner)
            }
            Tok::Sym(_) => Err(err(tok.offset, "unexpected symbol")),
            Tok::Ident(name) => {
                self.pos += 1;
                if let Some(n) = zeta_order(&name) {
                    let c = C::zeta_in(self.domain, n)
                        .ok_or_else(|| err(tok.offset, "root of unity not in coefficient domain"))?;
                    return Ok(MultiPoly::constant(self.domain, c));
                }
                let var = self.variable(&name, tok.offset)?;
                Ok(MultiPoly::var(self.domain, var))
            }
        }
    }

    fn variable(&mut self, name: &str, offset: usize) -> Result<VarName, ParseError> {
        let Some(stem) = Stem::from_letter(name) else {
            if self.peek_sym() == Some('[') {
                return Err(err(self.offset(), "subscripts are only allowed on x, s, u, w, z, U, Z"));
            }
            self.warnings.push(UnknownRole { offset, name: name.to_string() });
            return Ok(VarName::named(name));
        };
        let mut idx = Vec::new();
        while self.peek_sym() == Some('[') {
            let at = self.offset();
            self.pos += 1;
            idx.push(self.small_integer()?);
            self.expect_sym(']')?;
            if idx.len() > Indices::MAX {
                return Err(err(at, "too many subscripts"));
            }
        }
        Ok(VarName::indexed(stem, &idx))
    }
}

fn zeta_order(name: &str) -> Option<u32> {
    let digits = name.strip_prefix("zeta")?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok().filter(|&n| n > 0)
}
