//! Text parser for polynomials.
//!
//! Grammar (whitespace ignored):
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := ('-' factor) | atom ['^' exp]
//! atom   := integer | variable | '(' expr ')'
//! exp    := ['-'] integer | '(' ['-'] integer ['/' integer] ')'
//! ```
//! Division is exact polynomial division; rational exponents are only
//! accepted on variables and must be representable in storage units.

use std::sync::Arc;

use num_bigint::BigInt;

use super::poly::scaled_exponent;
use super::{LaurentPoly, RingContext, RingError};

impl LaurentPoly {
    pub fn parse(ctx: &Arc<RingContext>, text: &str) -> Result<Self, RingError> {
        let mut p = Parser { ctx, src: text.as_bytes(), pos: 0 };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(v)
    }
}

struct Parser<'a> {
    ctx: &'a Arc<RingContext>,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> RingError {
        RingError::Parse { pos: self.pos, msg: msg.to_string() }
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<LaurentPoly, RingError> {
        let mut acc = LaurentPoly::zero(self.ctx);
        let mut sign = if self.eat(b'-') {
            -1
        } else {
            self.eat(b'+');
            1
        };
        loop {
            let t = self.term()?;
            if sign < 0 {
                acc -= &t;
            } else {
                acc += &t;
            }
            if self.eat(b'+') {
                sign = 1;
            } else if self.eat(b'-') {
                sign = -1;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly, RingError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.factor()?;
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.factor()?;
                acc = acc.exact_div(&d).ok_or(RingError::Parse { pos: at, msg: "inexact division".into() })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<LaurentPoly, RingError> {
        if self.eat(b'-') {
            return Ok(-self.factor()?);
        }
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                if self.eat(b'^') {
                    let (num, den) = self.exponent()?;
                    if den != 1 {
                        return Err(self.err("fractional power of a parenthesized expression"));
                    }
                    return e.pow(num).map_err(|_| self.err("negative power of a non-unit"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let base = LaurentPoly::constant(self.ctx, n);
                if self.eat(b'^') {
                    let (num, den) = self.exponent()?;
                    if den != 1 || num < 0 {
                        return Err(self.err("only non-negative integer powers of integers"));
                    }
                    return base.pow(num).map_err(|_| self.err("bad power"));
                }
                Ok(base)
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let i = self.ctx.index_of(name).ok_or_else(|| RingError::UnknownVariable(name.to_string()))?;
                let (num, den) = if self.eat(b'^') { self.exponent()? } else { (1, 1) };
                let mut e = vec![0; self.ctx.nvars()];
                e[i] = scaled_exponent(self.ctx, i, num, den)?;
                Ok(LaurentPoly::monomial_raw(self.ctx, BigInt::from(1), e))
            }
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }

    fn integer(&mut self) -> Result<BigInt, RingError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        s.parse().map_err(|_| self.err("bad integer"))
    }

    fn small_int(&mut self) -> Result<i64, RingError> {
        let neg = self.eat(b'-');
        let n = self.integer()?;
        let n: i64 = i64::try_from(n).map_err(|_| self.err("exponent too large"))?;
        Ok(if neg { -n } else { n })
    }

    fn exponent(&mut self) -> Result<(i64, i64), RingError> {
        if self.eat(b'(') {
            let num = self.small_int()?;
            let den = if self.eat(b'/') { self.small_int()? } else { 1 };
            if !self.eat(b')') {
                return Err(self.err("expected `)` in exponent"));
            }
            if den <= 0 {
                return Err(self.err("exponent denominator must be positive"));
            }
            Ok((num, den))
        } else {
            Ok((self.small_int()?, 1))
        }
    }
}
