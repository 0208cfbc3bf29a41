//! Recursive-descent parser for the expression grammar
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := ['-'] (integer | decimal | '(' expr ')' | 'sqrt' '(' expr ')')
//! ```
//!
//! Decimals are read as exact rationals.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Num;

use super::{ConstructibleReal, ExactError};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    memo: HashMap<u64, Vec<ConstructibleReal>>,
}

pub fn parse(text: &str) -> Result<ConstructibleReal, ExactError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, memo: HashMap::new() };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

impl Parser<'_> {
    fn err(&self, message: &str) -> ExactError {
        ExactError::Syntax { position: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ExactError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    /// Reuse an earlier structurally identical node from this parse.
    fn share(&mut self, x: ConstructibleReal) -> ConstructibleReal {
        let bucket = self.memo.entry(x.fingerprint()).or_default();
        if let Some(prev) = bucket.iter().find(|p| p.structurally_equal(&x)) {
            return prev.clone();
        }
        bucket.push(x.clone());
        x
    }

    fn expr(&mut self) -> Result<ConstructibleReal, ExactError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = self.share(acc.checked_add(&rhs));
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = self.share(acc.checked_sub(&rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ConstructibleReal, ExactError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = self.share(acc.checked_mul(&rhs));
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = self.share(acc.checked_div(&rhs)?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<ConstructibleReal, ExactError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let inner = self.atom()?;
            return Ok(self.share(inner.neg_ref()));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<ConstructibleReal, ExactError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(b's') => {
                if !self.src[self.pos..].starts_with(b"sqrt") {
                    return Err(self.err("unknown identifier"));
                }
                self.pos += 4;
                self.expect(b'(')?;
                let v = self.expr()?;
                self.expect(b')')?;
                let r = v.checked_sqrt()?;
                Ok(self.share(r))
            }
            Some(_) => Err(self.err("expected a number, '(' or 'sqrt'")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<ConstructibleReal, ExactError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let int_digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let mut value = BigRational::from_integer(BigInt::from_str_radix(int_digits, 10).unwrap());
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            let fs = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if fs == self.pos {
                return Err(self.err("expected digits after '.'"));
            }
            let frac = std::str::from_utf8(&self.src[fs..self.pos]).unwrap();
            let num = BigInt::from_str_radix(frac, 10).unwrap();
            let den = BigInt::from(10u32).pow((self.pos - fs) as u32);
            value += BigRational::new(num, den);
        }
        Ok(self.share(ConstructibleReal::from_rational(value)))
    }
}
