//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar:
//! ```text
//! expr     := term { ("+"|"-") term }
//! term     := factor { "*" factor }
//! factor   := ["-"] base ["^" uint]
//! base     := rational | identifier | "(" expr ")"
//! rational := uint ["/" uint]
//! ```
//! There is no implicit multiplication and exponents are non-negative
//! integer literals.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::polynomial::{Polynomial, VariableSet};
use crate::rational::Rational;
use crate::super_poly::{GeneratorTable, SuperPolynomial};

pub fn parse_expression(text: &str, vars: &Arc<VariableSet>) -> Result<Polynomial> {
    let mut p = Parser::new(text);
    let poly = p.expr(vars)?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(poly)
}

/// Same grammar as `parse_expression`, but identifiers range over the
/// generators of a graded table and products anticommute where the
/// grading says so. Factor order inside a `*` chain is preserved.
pub fn parse_super_expression(
    text: &str,
    table: &Arc<GeneratorTable>,
) -> Result<SuperPolynomial> {
    let mut p = Parser::new(text);
    let elem = p.sexpr(table)?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(elem)
}

pub(crate) struct Parser {
    pub chars: Vec<char>,
    pub pos: usize,
}

impl Parser {
    pub fn new(text: &str) -> Self {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    pub fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    pub fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    pub fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self, vars: &Arc<VariableSet>) -> Result<Polynomial> {
        let mut acc = self.term(vars)?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term(vars)?)?;
            } else if self.eat('-') {
                acc = acc.sub(&self.term(vars)?)?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn term(&mut self, vars: &Arc<VariableSet>) -> Result<Polynomial> {
        let mut acc = self.factor(vars)?;
        while self.eat('*') {
            acc = acc.mul(&self.factor(vars)?)?;
        }
        Ok(acc)
    }

    fn factor(&mut self, vars: &Arc<VariableSet>) -> Result<Polynomial> {
        let negate = self.eat('-');
        let base = self.base(vars)?;
        let result = if self.eat('^') {
            let n = self.uint()?;
            base.pow(n)
        } else {
            base
        };
        Ok(if negate { result.neg() } else { result })
    }

    fn base(&mut self, vars: &Arc<VariableSet>) -> Result<Polynomial> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr(vars)?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let r = self.rational()?;
                Ok(Polynomial::constant(vars, r))
            }
            Some(c) if c.is_alphabetic() => {
                let name = self.identifier()?;
                if vars.index_of(&name).is_none() {
                    return Err(Error::UnknownIdentifier(name));
                }
                Polynomial::var(vars, &name)
            }
            _ => Err(self.err("expected number, identifier or `(`")),
        }
    }

    fn sexpr(&mut self, table: &Arc<GeneratorTable>) -> Result<SuperPolynomial> {
        let mut acc = self.sterm(table)?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.sterm(table)?)?;
            } else if self.eat('-') {
                acc = acc.sub(&self.sterm(table)?)?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn sterm(&mut self, table: &Arc<GeneratorTable>) -> Result<SuperPolynomial> {
        let mut acc = self.sfactor(table)?;
        while self.eat('*') {
            acc = acc.mul(&self.sfactor(table)?)?;
        }
        Ok(acc)
    }

    fn sfactor(&mut self, table: &Arc<GeneratorTable>) -> Result<SuperPolynomial> {
        let negate = self.eat('-');
        let base = self.sbase(table)?;
        let result = if self.eat('^') {
            let n = self.uint()?;
            base.pow(n)
        } else {
            base
        };
        Ok(if negate { result.neg() } else { result })
    }

    fn sbase(&mut self, table: &Arc<GeneratorTable>) -> Result<SuperPolynomial> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.sexpr(table)?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let r = self.rational()?;
                Ok(SuperPolynomial::constant(table, r))
            }
            Some(c) if c.is_alphabetic() => {
                let name = self.identifier()?;
                SuperPolynomial::generator(table, &name)
            }
            _ => Err(self.err("expected number, identifier or `(`")),
        }
    }

    pub fn identifier(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            if c.is_alphanumeric() || c == '_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start {
            return Err(self.err("expected identifier"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    pub fn uint(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected non-negative integer"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits
            .parse::<u32>()
            .map_err(|_| self.err("integer literal out of range"))
    }

    pub fn rational(&mut self) -> Result<Rational> {
        let n = self.big_uint()?;
        if self.pos < self.chars.len() && self.chars[self.pos] == '/' {
            self.pos += 1;
            let d = self.big_uint()?;
            if d == BigInt::from(0) {
                return Err(self.err("zero denominator"));
            }
            Ok(Rational::new(n, d))
        } else {
            Ok(Rational::from_integer(n))
        }
    }

    fn big_uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected digits"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        Ok(digits.parse().expect("digit string"))
    }
}

/// Parse a bare rational literal such as `3/4` or `-2`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let mut p = Parser::new(text);
    let neg = p.eat('-');
    let r = p.rational()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(if neg { -r } else { r })
}
