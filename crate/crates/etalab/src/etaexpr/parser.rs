//! Recursive-descent parser for the eta-quotient expression grammar:
//!
//! ```text
//! expr     := term (("*" | "/") term)* ;
//! term     := base ("^" exponent)? ;
//! base     := "1" | "eta" "(" INT ")" | "geta" "(" INT "," INT ")" ;
//! exponent := INT | "(" INT "/" "2" ")" | "-" exponent ;
//! ```
//!
//! Whitespace is insignificant and `INT` is a positive decimal integer
//! (the second argument of `geta` may be any nonnegative integer).
//! The literal base `1` denotes the empty product, so quotients like
//! `1/eta(1)` are expressible.

use num::rational::Rational64;

use super::{EtaExpr, FactorBase};
use crate::{Error, Result};

pub fn parse(text: &str) -> Result<EtaExpr> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let expr = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(expr)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.into(),
        }
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

    fn eat(&mut self, ch: u8) -> Result<()> {
        if self.peek() == Some(ch) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", ch as char)))
        }
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| self.err("integer out of range"))
    }

    fn positive_integer(&mut self) -> Result<u64> {
        let n = self.integer()?;
        if n == 0 {
            return Err(self.err("expected a positive integer"));
        }
        Ok(n)
    }

    fn expr(&mut self) -> Result<EtaExpr> {
        let mut factors = Vec::new();
        self.term(1, &mut factors)?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    self.term(1, &mut factors)?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    self.term(-1, &mut factors)?;
                }
                _ => break,
            }
        }
        Ok(EtaExpr::new(factors))
    }

    fn term(&mut self, sign: i64, factors: &mut Vec<(FactorBase, Rational64)>) -> Result<()> {
        let base = self.base()?;
        let mut exponent = Rational64::from_integer(1);
        if self.peek() == Some(b'^') {
            self.pos += 1;
            exponent = self.exponent()?;
        }
        if let Some(base) = base {
            factors.push((base, exponent * sign));
        }
        Ok(())
    }

    /// `None` is the literal base `1` (the empty product).
    fn base(&mut self) -> Result<Option<FactorBase>> {
        match self.peek() {
            Some(b'1') => {
                self.pos += 1;
                if self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    self.pos -= 1;
                    return Err(self.err("expected 'eta', 'geta', or the constant 1"));
                }
                Ok(None)
            }
            Some(b'e') | Some(b'g') => {
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                let name = &self.bytes[start..self.pos];
                match name {
                    b"eta" => {
                        self.eat(b'(')?;
                        let delta = self.positive_integer()?;
                        self.eat(b')')?;
                        Ok(Some(FactorBase::Ordinary { delta }))
                    }
                    b"geta" => {
                        self.eat(b'(')?;
                        let delta = self.positive_integer()?;
                        self.eat(b',')?;
                        let g = self.integer()?;
                        self.eat(b')')?;
                        Ok(Some(FactorBase::Generalized {
                            delta,
                            g: g % delta,
                        }))
                    }
                    _ => {
                        self.pos = start;
                        Err(self.err("expected 'eta', 'geta', or the constant 1"))
                    }
                }
            }
            _ => Err(self.err("expected 'eta', 'geta', or the constant 1")),
        }
    }

    fn exponent(&mut self) -> Result<Rational64> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.exponent()?)
            }
            Some(b'(') => {
                self.pos += 1;
                let num = self.positive_integer()?;
                self.eat(b'/')?;
                self.skip_ws();
                let den_pos = self.pos;
                let den = self.positive_integer()?;
                if den != 1 && den != 2 {
                    return Err(Error::Syntax {
                        position: den_pos,
                        message: "exponent denominator must be 1 or 2".into(),
                    });
                }
                self.eat(b')')?;
                Ok(Rational64::new(num as i64, den as i64))
            }
            _ => {
                let n = self.positive_integer()?;
                Ok(Rational64::from_integer(n as i64))
            }
        }
    }
}
