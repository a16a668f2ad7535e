//! Infix polynomial syntax.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' integer)?
//! atom  := integer | identifier | '(' expr ')'
//! ```
//!
//! Division is only allowed by nonzero constants.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{PolyRing, Polynomial};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    ring: &'a Arc<PolyRing>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { offset: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.src[self.pos..].chars().next() {
            self.pos += c.len_utf8();
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if f(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        &self.src[start..self.pos]
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Some('/') => {
                    self.bump();
                    self.skip_ws();
                    let at = self.pos;
                    let d = self.unary()?;
                    if !d.is_constant() {
                        self.pos = at;
                        return self.err("division by a non-constant");
                    }
                    let c = d.constant_term();
                    if c == BigRational::from_integer(0.into()) {
                        self.pos = at;
                        return self.err("division by zero");
                    }
                    acc = acc.scale(&c.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial> {
        if self.peek() == Some('-') {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.bump();
            self.skip_ws();
            let digits = self.take_while(|c| c.is_ascii_digit());
            if digits.is_empty() {
                return self.err("expected exponent");
            }
            let k: u32 = match digits.parse() {
                Ok(k) => k,
                Err(_) => return self.err("exponent too large"),
            };
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return self.err("expected `)`");
                }
                self.bump();
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.take_while(|c| c.is_ascii_digit());
                let n: BigInt = digits.parse().expect("digits");
                Ok(Polynomial::constant(self.ring, BigRational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' || c == '@' => {
                let start = self.pos;
                self.bump();
                self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                let name = &self.src[start..self.pos];
                match self.ring.index_of(name) {
                    Some(i) => Ok(Polynomial::variable(self.ring, i)),
                    None => Err(Error::UnknownVariable(name.to_string())),
                }
            }
            Some(c) => self.err(format!("unexpected `{c}`")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `text` as a polynomial over `ring`.
pub fn parse_polynomial(ring: &Arc<PolyRing>, text: &str) -> Result<Polynomial> {
    let mut p = Parser { src: text, pos: 0, ring };
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(out)
}

impl Polynomial {
    pub fn parse(ring: &Arc<PolyRing>, text: &str) -> Result<Polynomial> {
        parse_polynomial(ring, text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MonomialOrder;

    fn ring() -> Arc<PolyRing> {
        PolyRing::new(&["x", "y", "z"], MonomialOrder::GrevLex).unwrap()
    }

    #[test]
    fn precedence_and_signs() {
        let r = ring();
        let p = parse_polynomial(&r, "-x^2*y + 3/2*z - (x - y)^2").unwrap();
        let q = parse_polynomial(&r, "-x^2*y + 3*z/2 - x^2 + 2*x*y - y^2").unwrap();
        assert_eq!(p, q);
        assert_eq!(parse_polynomial(&r, "-2^2").unwrap(), Polynomial::from_int(&r, -4));
    }

    #[test]
    fn round_trip() {
        let r = ring();
        for s in ["x^2*y - 3/2*z", "0", "-1", "x*y*z + x + 7", "-1/3*x^3 + y^2"] {
            let p = parse_polynomial(&r, s).unwrap();
            assert_eq!(p.to_string(), s);
            assert_eq!(parse_polynomial(&r, &p.to_string()).unwrap(), p);
        }
    }

    #[test]
    fn errors() {
        let r = ring();
        assert!(matches!(parse_polynomial(&r, "x + w"), Err(Error::UnknownVariable(v)) if v == "w"));
        assert!(matches!(parse_polynomial(&r, "x / y"), Err(Error::Parse { offset: 4, .. })));
        assert!(matches!(parse_polynomial(&r, "x / 0"), Err(Error::Parse { .. })));
        assert!(matches!(parse_polynomial(&r, "(x + 1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_polynomial(&r, "x y"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(parse_polynomial(&r, "x^"), Err(Error::Parse { .. })));
    }
}
