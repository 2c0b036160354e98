//! Recursive-descent parser for polynomial expressions in `n`.
//!
//! Grammar: `+ - * ^`, parentheses, integer literals, the variable `n`.
//! Juxtaposition multiplies, so `2n` and `(n-1)(n+1)` are accepted.

use num_bigint::BigInt;

use super::IntPolynomial;
use crate::error::{Error, Result};

const MAX_EXPONENT: u32 = 256;

pub fn parse_polynomial(src: &str) -> Result<IntPolynomial> {
    let mut p = Parser { s: src.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return p.fail("empty expression");
    }
    let v = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return p.fail("unexpected trailing input");
    }
    Ok(v)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn fail<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.to_string() })
    }

    fn at_end(&self) -> bool {
        self.pos >= self.s.len()
    }

    fn skip_ws(&mut self) {
        while self.s.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<IntPolynomial> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<IntPolynomial> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(b'(' | b'n') | Some(b'0'..=b'9') => acc = &acc * &self.power()?,
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<IntPolynomial> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<IntPolynomial> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let e = self.integer()?;
            let e: u32 = match u32::try_from(e) {
                Ok(e) if e <= MAX_EXPONENT => e,
                _ => {
                    self.pos = start;
                    return self.fail("exponent must be an integer in 0..=256");
                }
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<IntPolynomial> {
        match self.peek() {
            Some(b'n') => {
                self.pos += 1;
                Ok(IntPolynomial::var())
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.fail("expected ')'");
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'0'..=b'9') => Ok(IntPolynomial::constant(self.integer()?)),
            Some(_) => self.fail("unexpected character"),
            None => self.fail("unexpected end of input"),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail("expected integer");
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }
}
