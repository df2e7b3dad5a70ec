//! Recursive-descent parser for the polynomial expression grammar:
//! integers, `/` for rational literals, identifiers `[a-zA-Z][a-zA-Z0-9_]*`,
//! operators `+ - * ^` and parentheses; `^` takes a nonnegative integer
//! literal. Whitespace is insignificant.
//!
//! Identifiers resolve to ambient variables first, then to parameters of the
//! ground field. Division is accepted when the divisor evaluates to a
//! nonzero constant of the field.

use num::bigint::BigInt;
use num::rational::BigRational;

use crate::error::{Error, Result};
use crate::field::GroundField;
use crate::poly::Polynomial;

pub fn parse_polynomial(text: &str, vars: &[String], field: &GroundField) -> Result<Polynomial> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        vars,
        field,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    vars: &'a [String],
    field: &'a GroundField,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let divisor = self.factor()?;
                    let c = divisor
                        .constant_value()
                        .ok_or_else(|| self.err("divisor must be a constant"))?;
                    let inv = self.field.inv(&c).map_err(|_| self.err("division by zero"))?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.factor()
            }
            _ => {
                let base = self.atom()?;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let e = self.nat()?;
                    Ok(base.pow(e))
                } else {
                    Ok(base)
                }
            }
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.int()?;
                Ok(Polynomial::constant(
                    self.field.clone(),
                    self.vars.to_vec(),
                    self.field.from_rat(BigRational::from(n)),
                ))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.ident();
                if self.vars.contains(&name) {
                    Polynomial::var_by_name(self.field.clone(), self.vars.to_vec(), &name)
                } else if self.field.params().contains(&name) {
                    let c = self.field.param(&name)?;
                    Ok(Polynomial::constant(self.field.clone(), self.vars.to_vec(), c))
                } else {
                    Err(Error::UnknownSymbol(name))
                }
            }
            _ => Err(self.err("expected a number, identifier or `(`")),
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned()
    }

    fn int(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos])
            .parse()
            .map_err(|_| self.err("invalid integer"))
    }

    fn nat(&mut self) -> Result<u32> {
        self.skip_ws();
        if self.peek() == Some(b'(') || self.peek() == Some(b'-') {
            return Err(self.err("exponent must be a nonnegative integer literal"));
        }
        let n = self.int()?;
        u32::try_from(n).map_err(|_| self.err("exponent out of range"))
    }
}

/// Parse a list of generators in one ambient ring.
pub fn parse_generators(
    texts: &[String],
    vars: &[String],
    field: &GroundField,
) -> Result<Vec<Polynomial>> {
    texts
        .iter()
        .map(|t| parse_polynomial(t, vars, field))
        .collect()
}
