//! Recursive-descent parser for polynomial expressions such as `u1^2 - 3/2*u2*u3`.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'u' integer | '(' expr ')'
//! ```
//!
//! Division is only allowed by a nonzero constant.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::Poly;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("at byte {pos}: variable u{index} out of range for dimension {dim}")]
    VariableOutOfRange { pos: usize, index: usize, dim: usize },
    #[error("at byte {pos}: division by a non-constant polynomial")]
    NonConstantDivisor { pos: usize },
    #[error("at byte {pos}: division by zero")]
    DivisionByZero { pos: usize },
}

pub(super) fn parse(text: &str, dim: usize) -> Result<Poly, PolyError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, dim };
    p.skip_ws();
    if p.at_end() {
        return Err(p.syntax("empty expression"));
    }
    let value = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.syntax(&format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
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

    fn syntax(&self, message: &str) -> PolyError {
        PolyError::Syntax { pos: self.pos, message: message.to_string() }
    }

    fn expr(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            if c == b'+' {
                acc += &rhs;
            } else {
                acc -= &rhs;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let at = self.pos;
            let rhs = self.unary()?;
            if c == b'*' {
                acc = &acc * &rhs;
            } else {
                if !rhs.is_constant() {
                    return Err(PolyError::NonConstantDivisor { pos: at });
                }
                let d = rhs.constant_term();
                if d.is_zero() {
                    return Err(PolyError::DivisionByZero { pos: at });
                }
                acc = acc.scale(&(Rational::from_integer(BigInt::from(1)) / d));
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, PolyError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let digits = self.digits().ok_or_else(|| self.syntax("expected exponent"))?;
            let e: u32 =
                digits.parse().map_err(|_| PolyError::Syntax { pos: at, message: "exponent too large".into() })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'u') => {
                let at = self.pos;
                self.pos += 1;
                let digits = self.digits().ok_or_else(|| self.syntax("expected variable index after 'u'"))?;
                let index: usize = digits.parse().unwrap_or(usize::MAX);
                if index == 0 || index > self.dim {
                    return Err(PolyError::VariableOutOfRange { pos: at, index, dim: self.dim });
                }
                Ok(Poly::var(self.dim, index - 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits().expect("digit present");
                let n: BigInt = digits.parse().expect("ascii digits");
                Ok(Poly::constant(self.dim, Rational::from_integer(n)))
            }
            Some(c) => Err(self.syntax(&format!("unexpected '{}'", c as char))),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn precedence() {
        let a = parse("-u1^2 + 2*u2/4", 2).unwrap();
        let b = &(-&Poly::var(2, 0).pow(2)) + &Poly::var(2, 1).scale(&rat(1, 2));
        assert_eq!(a, b);
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse("u1 + u4", 3), Err(PolyError::VariableOutOfRange { pos: 5, index: 4, dim: 3 }));
        assert!(matches!(parse("u1 +", 2), Err(PolyError::Syntax { pos: 4, .. })));
        assert!(matches!(parse("u1 / u2", 2), Err(PolyError::NonConstantDivisor { pos: 4 })));
        assert!(matches!(parse("u1 / (1 - 1)", 2), Err(PolyError::DivisionByZero { .. })));
        assert!(matches!(parse("u1 u2", 2), Err(PolyError::Syntax { pos: 3, .. })));
        assert!(matches!(parse("", 2), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse("u0", 2), Err(PolyError::VariableOutOfRange { index: 0, .. })));
    }
}
