//! Text formats: polynomial expressions such as `-a2*a0^2 + (c3 - 1)a1` and coefficient lists `c0,c1,...,cn`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::multipoly::MultiPoly;
use super::rational::{parse_rational, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
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
            let digits: String = chars[start..i].iter().collect();
            out.push(Tok::Num(digits.parse().unwrap()));
        } else if c.is_ascii_alphabetic() {
            // A variable is one letter followed by optional digits, so `c3a1` reads as `c3*a1`.
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.factor()?);
            } else if self.eat('/') {
                let d = self.factor()?;
                let c = d
                    .constant_value()
                    .filter(|c| !c.is_zero())
                    .ok_or_else(|| Error::Parse("division only by nonzero constants".into()))?;
                acc = acc.scale(&c.recip());
            } else if matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_)) | Some(Tok::Op('('))) {
                acc = acc.mul(&self.factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
                    Ok(base.pow(e))
                }
                other => Err(Error::Parse(format!("expected exponent, found {other:?}"))),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(MultiPoly::constant(Rational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(MultiPoly::var(&name))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing closing parenthesis".into()));
                }
                Ok(e)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse a polynomial expression with `+ - * / ^`, parentheses and implicit multiplication.
pub fn parse_poly(s: &str) -> Result<MultiPoly> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input after token {}", p.pos)));
    }
    Ok(e)
}

/// Parse either `c0,c1,...,cn` (low to high) or an expression in a single variable,
/// returning a univariate polynomial in `var`.
pub fn parse_univariate(s: &str, var: &str) -> Result<MultiPoly> {
    if s.contains(',') {
        let coeffs = s.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
        return Ok(MultiPoly::from_coeffs(var, &coeffs));
    }
    let p = parse_poly(s)?;
    match p.vars() {
        [] => Ok(p),
        [v] => Ok(p.rename(&v.clone(), var)),
        vs => Err(Error::Parse(format!("expected one variable, found {}", vs.join(", ")))),
    }
}
