//! Parser for ring elements written as arithmetic expressions.
//!
//! Accepts integers, the uniformizer and variable symbols of the base ring,
//! generator names of the ambient algebra, `+ - * / ^` and parentheses.
//! Division is exact division in the algebra and fails when the quotient is
//! not integral.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rings::algebra::{AlgElem, AlgebraHandle, FiniteFlatAlgebra};
use crate::rings::series::{BaseDvr, Series};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(u64),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s
                .parse()
                .map_err(|_| Error::InvalidInput(format!("integer literal {s} is too large")))?;
            out.push(Token::Int(n));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::InvalidInput(format!("unexpected character '{c}' in {src:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    alg: &'a Arc<FiniteFlatAlgebra>,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::InvalidInput(format!("{msg} in {:?}", self.src))
    }

    fn expr(&mut self) -> Result<AlgElem> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<AlgElem> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                acc = acc.checked_div(&d)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<AlgElem> {
        if self.eat('-') {
            return Ok(-&self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<AlgElem> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.tokens.get(self.pos).cloned() {
                Some(Token::Int(e)) => {
                    self.pos += 1;
                    let e = u32::try_from(e).map_err(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.err("expected a non-negative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<AlgElem> {
        let ring = self.alg.base_ring();
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Int(n)) => {
                self.pos += 1;
                let p = u64::from(ring.field().characteristic());
                Ok(self.alg.scalar(ring.from_int((n % p) as i64)))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                if name == ring.uniformizer_symbol() {
                    Ok(self.alg.scalar(ring.pi()))
                } else if name == ring.variable_symbol() {
                    let v = ring
                        .variable()
                        .map_err(|_| self.err(&format!("{name} is not available over a prime residue field")))?;
                    Ok(self.alg.scalar(v))
                } else {
                    self.alg
                        .generator(&name)
                        .ok_or_else(|| self.err(&format!("unknown symbol {name}")))
                }
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("missing ')'"));
                }
                Ok(v)
            }
            Some(tok) => Err(self.err(&format!("unexpected token {tok:?}"))),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

/// Parses an element of `alg`.
pub fn parse_element(alg: &Arc<FiniteFlatAlgebra>, src: &str) -> Result<AlgElem> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err(Error::InvalidInput("empty expression".into()));
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        alg,
        src,
    };
    let v = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.err("trailing input"));
    }
    Ok(v)
}

/// Parses an element of the base ring.
pub fn parse_series(ring: &BaseDvr, src: &str) -> Result<Series> {
    let base = FiniteFlatAlgebra::base(ring);
    Ok(parse_element(&base, src)?.into_coords().remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::field::CoefficientField;
    use crate::rings::series::Valuation;

    fn f2t() -> BaseDvr {
        BaseDvr::new(CoefficientField::rational_function(2).unwrap(), 12).unwrap()
    }

    #[test]
    fn parses_base_ring_expressions() {
        let r = f2t();
        let x = parse_series(&r, "pi^2*t + t").unwrap();
        let expected = &(&r.pi_pow(2) * &r.variable().unwrap()) + &r.variable().unwrap();
        assert_eq!(x, expected);
        assert_eq!(parse_series(&r, "3").unwrap(), r.one());
        assert_eq!(parse_series(&r, "-(pi)").unwrap(), r.pi());
        assert_eq!(parse_series(&r, "pi^3/pi").unwrap().valuation(), Valuation::Finite(2));
    }

    #[test]
    fn rational_function_constants_divide() {
        let r = f2t();
        let x = parse_series(&r, "1/(1+t)").unwrap();
        let back = &x * &parse_series(&r, "1+t").unwrap();
        assert_eq!(back, r.one());
    }

    #[test]
    fn parses_generators() {
        let r = f2t();
        let poly = vec![r.variable().unwrap(), r.pi(), r.one()];
        let k1 = FiniteFlatAlgebra::monogenic(&r, "a1", &poly).unwrap();
        let x = parse_element(&k1, "a1 + pi").unwrap();
        assert_eq!(x.coords()[0], r.pi());
        assert_eq!(x.coords()[1], r.one());
        // a1^2 = pi*a1 + t
        let sq = parse_element(&k1, "a1^2 - pi*a1").unwrap();
        assert_eq!(sq, k1.scalar(r.variable().unwrap()));
    }

    #[test]
    fn reports_errors() {
        let r = f2t();
        assert!(parse_series(&r, "").is_err());
        assert!(parse_series(&r, "pi +").is_err());
        assert!(parse_series(&r, "(pi").is_err());
        assert!(parse_series(&r, "x").is_err());
        assert!(parse_series(&r, "1/pi").is_err());
        assert!(parse_series(&r, "pi^-1").is_err());
        let fp = BaseDvr::new(CoefficientField::prime(3).unwrap(), 8).unwrap();
        assert!(parse_series(&fp, "t").is_err());
    }
}
