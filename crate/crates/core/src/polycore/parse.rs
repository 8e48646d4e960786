//! Text form of polynomials.
//!
//! ```text
//! poly   := term (('+' | '-') term)*
//! term   := [sign] coeff ['*'] mono | [sign] mono | [sign] coeff
//! coeff  := int | int '/' posint
//! mono   := factor ('*' factor)*
//! factor := 'x' I ['^' E]        1 <= I <= n, E >= 1
//! ```
//!
//! Whitespace is ignored everywhere.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{ExponentVector, PolyError, SparsePolynomial};
use crate::rational::Rational;

pub fn parse(text: &str, n: usize) -> Result<SparsePolynomial, PolyError> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        n,
    };
    let poly = p.polynomial()?;
    p.skip_ws();
    if p.pos < p.bytes.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    n: usize,
}

impl<'a> Parser<'a> {
    fn syntax(&self, message: &str) -> PolyError {
        PolyError::Syntax {
            position: self.pos,
            message: message.to_string(),
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn polynomial(&mut self) -> Result<SparsePolynomial, PolyError> {
        let mut poly = SparsePolynomial::zero(self.n);
        if self.peek().is_none() {
            return Err(self.syntax("empty polynomial"));
        }
        let mut first = true;
        loop {
            let negative = if self.eat(b'-') {
                true
            } else if self.eat(b'+') || first {
                false
            } else {
                match self.peek() {
                    None => break,
                    Some(_) => return Err(self.syntax("expected '+' or '-' between terms")),
                }
            };
            first = false;
            let (e, mut c) = self.term()?;
            if negative {
                c = -c;
            }
            poly.add_term(e, c);
            if self.peek().is_none() {
                break;
            }
        }
        Ok(poly)
    }

    fn term(&mut self) -> Result<(ExponentVector, Rational), PolyError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let coeff = self.coefficient()?;
                let had_star = self.eat(b'*');
                if self.peek() == Some(b'x') {
                    Ok((self.monomial()?, coeff))
                } else if had_star {
                    Err(self.syntax("expected a monomial after '*'"))
                } else {
                    Ok((ExponentVector::zero(self.n), coeff))
                }
            }
            Some(b'x') => Ok((self.monomial()?, Rational::one())),
            Some(_) => Err(self.syntax("expected a coefficient or a monomial")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            std::str::from_utf8(&self.bytes[start..self.pos]).ok()
        }
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        let digits = self
            .digits()
            .ok_or_else(|| self.syntax("expected digits"))?;
        digits.parse().map_err(|_| self.syntax("malformed integer"))
    }

    fn small_integer(&mut self, what: &str) -> Result<u32, PolyError> {
        let digits = self
            .digits()
            .ok_or_else(|| self.syntax(&format!("expected {what}")))?;
        digits
            .parse()
            .map_err(|_| self.syntax(&format!("{what} too large")))
    }

    fn coefficient(&mut self) -> Result<Rational, PolyError> {
        let num = self.integer()?;
        if self.eat(b'/') {
            let den = self.integer()?;
            if den.is_zero() {
                return Err(self.syntax("zero denominator"));
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from_integer(num))
        }
    }

    fn monomial(&mut self) -> Result<ExponentVector, PolyError> {
        let mut exps = vec![0u32; self.n];
        loop {
            if !self.eat(b'x') {
                return Err(self.syntax("expected a variable x<i>"));
            }
            let at = self.pos;
            let index = self.small_integer("variable index")?;
            if index == 0 || index as usize > self.n {
                return Err(PolyError::VariableOutOfRange {
                    position: at,
                    index,
                    n: self.n,
                });
            }
            let mut power = 1u32;
            if self.eat(b'^') {
                if self.peek() == Some(b'-') {
                    return Err(PolyError::NegativeExponent { position: self.pos });
                }
                power = self.small_integer("exponent")?;
                if power == 0 {
                    return Err(self.syntax("exponent must be at least 1"));
                }
            }
            let slot = &mut exps[index as usize - 1];
            *slot = slot
                .checked_add(power)
                .ok_or_else(|| self.syntax("exponent overflow"))?;
            // A '*' continues the monomial only if another variable follows.
            let save = self.pos;
            if self.eat(b'*') && self.peek() == Some(b'x') {
                continue;
            }
            self.pos = save;
            break;
        }
        Ok(ExponentVector::new(exps))
    }
}
