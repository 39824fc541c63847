//! Text form of integer polynomials: `+ - * ^`, parentheses, integer
//! literals and declared variable names, e.g. `20*X0^2 + (47*13)*X1^2`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use super::{IntPoly, Vars};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Tok::Num(text.parse().expect("digits parse")));
            }
            a if a.is_alphabetic() || a == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(Error::Parse(format!("unexpected character '{other}' in '{s}'"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a Arc<Vars>,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at token {} in '{}'", self.pos, self.src))
    }

    fn expr(&mut self) -> Result<IntPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<IntPoly> {
        let mut acc = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            let f = self.unary()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<IntPoly> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<IntPoly> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let e = match self.peek() {
                Some(Tok::Num(n)) => {
                    let e: u32 = n.try_into().map_err(|_| self.err("exponent too large"))?;
                    self.pos += 1;
                    e
                }
                _ => return Err(self.err("expected a nonnegative integer exponent")),
            };
            return Ok(base.pow(e, BigInt::one()));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<IntPoly> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(IntPoly::constant(self.vars.clone(), n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let i = self
                    .vars
                    .index_of(&name)
                    .ok_or_else(|| Error::Parse(format!("undeclared variable '{name}' in '{}'", self.src)))?;
                Ok(IntPoly::var(self.vars.clone(), i, BigInt::one()))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err(self.err("expected ')'")),
                }
            }
            _ => Err(self.err("expected a number, variable or '('")),
        }
    }
}

pub(super) fn parse_int_poly(text: &str, vars: &Arc<Vars>) -> Result<IntPoly> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut p = Parser { toks, pos: 0, vars, src: text };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_products_and_powers() {
        let v = Vars::plain(vec!["x", "y"]).unwrap();
        let f = parse_int_poly("2*x^2*y - (3 - 1)*x^2*y + y^10", &v).unwrap();
        assert_eq!(f.to_string(), "y^10");
        let g = parse_int_poly("-(x+y)^2", &v).unwrap();
        assert_eq!(g.to_string(), "-x^2 - 2*x*y - y^2");
    }

    #[test]
    fn rejects_garbage() {
        let v = Vars::plain(vec!["x"]).unwrap();
        assert!(parse_int_poly("x +", &v).is_err());
        assert!(parse_int_poly("x^y", &v).is_err());
        assert!(parse_int_poly("z", &v).is_err());
        assert!(parse_int_poly("x $ 2", &v).is_err());
        assert!(parse_int_poly("(x", &v).is_err());
        assert!(parse_int_poly("", &v).is_err());
    }

    #[test]
    fn display_round_trips_large_coefficients() {
        let v = Vars::plain(vec!["X0", "X1", "X2", "X3"]).unwrap();
        let f = parse_int_poly("X0^4 + 47*X1^4 - 103*X2^4 - 17*47*103*X3^4", &v).unwrap();
        assert_eq!(f.to_string(), "X0^4 + 47*X1^4 - 103*X2^4 - 82297*X3^4");
        assert_eq!(parse_int_poly(&f.to_string(), &v).unwrap(), f);
    }
}
