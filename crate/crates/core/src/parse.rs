//! Complex scalar expressions and lattice literals.
//!
//! Scalars accept decimal numbers, `i`, `pi`, `e`, the operators
//! `+ - * / ^`, parentheses, implicit multiplication (`2pi`, `3i`, `2(1+i)`)
//! and the functions `exp`, `sqrt`, `sin`, `cos`, `ln`. Implicit products bind
//! like `*`, so `1/2i` reads as `(1/2)·i`.
//!
//! Lattice literals list generators inside `lattice(...)`: scalars for
//! subgroups of ℂ, parenthesised pairs for ℂ², e.g. `lattice(1, 2i)` or
//! `lattice((2pi*i,0),(0,2pi*i))`.

use num_complex::Complex64;
use std::f64::consts::{E, PI};
use thiserror::Error;

use crate::lattice::{ComplexVector, LatticeError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("{message} at offset {offset} in {input:?}")]
    Syntax {
        input: String,
        offset: usize,
        message: String,
    },
    #[error("invalid lattice: {0}")]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
}

struct Parser<'a> {
    input: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

fn lex(input: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            // Exponent only when digits follow, so that `2e` stays 2·e.
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &input[start..i];
            let v: f64 = text
                .parse()
                .map_err(|_| syntax(input, start, "malformed number"))?;
            out.push((Tok::Num(v), start));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_alphabetic() {
                i += 1;
            }
            out.push((Tok::Ident(input[start..i].to_ascii_lowercase()), start));
        } else {
            let tok = match c {
                '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                _ => return Err(syntax(input, i, &format!("unexpected character {c:?}"))),
            };
            out.push((tok, i));
            i += 1;
        }
    }
    Ok(out)
}

fn syntax(input: &str, offset: usize, message: &str) -> ParseError {
    ParseError::Syntax {
        input: input.to_string(),
        offset,
        message: message.to_string(),
    }
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Result<Self, ParseError> {
        Ok(Self {
            input,
            toks: lex(input)?,
            pos: 0,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks
            .get(self.pos)
            .map_or(self.input.len(), |(_, o)| *o)
    }

    fn err(&self, message: &str) -> ParseError {
        syntax(self.input, self.offset(), message)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Complex64, ParseError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Complex64, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    acc *= self.unary()?;
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let d = self.unary()?;
                    if d.norm() == 0.0 {
                        return Err(self.err("division by zero"));
                    }
                    acc /= d;
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    acc *= self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Complex64, ParseError> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Complex64, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Op('^')) {
            self.pos += 1;
            let exp = self.unary()?;
            if exp.im == 0.0 && exp.re.fract() == 0.0 && exp.re.abs() <= 64.0 {
                return Ok(base.powi(exp.re as i32));
            }
            return Ok(base.powc(exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Complex64, ParseError> {
        let offset = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Complex64::new(v, 0.0))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(v)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "i" => Ok(Complex64::new(0.0, 1.0)),
                    "pi" => Ok(Complex64::new(PI, 0.0)),
                    "e" => Ok(Complex64::new(E, 0.0)),
                    "exp" | "sqrt" | "sin" | "cos" | "ln" => {
                        self.expect(Tok::LParen, "'(' after function name")?;
                        let arg = self.expr()?;
                        self.expect(Tok::RParen, "')'")?;
                        Ok(match name.as_str() {
                            "exp" => arg.exp(),
                            "sqrt" => arg.sqrt(),
                            "sin" => arg.sin(),
                            "cos" => arg.cos(),
                            _ => arg.ln(),
                        })
                    }
                    _ => Err(syntax(
                        self.input,
                        offset,
                        &format!("unknown identifier {name:?}"),
                    )),
                }
            }
            _ => Err(self.err("expected a number, identifier or '('")),
        }
    }

    /// True if the parenthesised group starting at the current token holds a top-level comma.
    fn group_has_comma(&self) -> bool {
        let mut depth = 0usize;
        for (tok, _) in &self.toks[self.pos..] {
            match tok {
                Tok::LParen => depth += 1,
                Tok::RParen => {
                    depth -= 1;
                    if depth == 0 {
                        return false;
                    }
                }
                Tok::Comma if depth == 1 => return true,
                _ => {}
            }
        }
        false
    }

    fn vector(&mut self) -> Result<Vec<Complex64>, ParseError> {
        if self.peek() == Some(&Tok::LParen) && self.group_has_comma() {
            self.pos += 1;
            let mut coords = vec![self.expr()?];
            while self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
                coords.push(self.expr()?);
            }
            self.expect(Tok::RParen, "')' closing the vector")?;
            Ok(coords)
        } else {
            Ok(vec![self.expr()?])
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }
}

pub fn parse_complex(input: &str) -> Result<Complex64, ParseError> {
    let mut p = Parser::new(input)?;
    let v = p.expr()?;
    p.finish()?;
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(syntax(input, 0, "value is not finite"));
    }
    Ok(v)
}

/// Parses `lattice(...)` into its generator list. All generators must share one dimension.
pub fn parse_lattice(input: &str) -> Result<Vec<ComplexVector>, ParseError> {
    let mut p = Parser::new(input)?;
    match p.peek() {
        Some(Tok::Ident(name)) if name == "lattice" => p.pos += 1,
        _ => return Err(p.err("expected 'lattice('")),
    }
    p.expect(Tok::LParen, "'('")?;
    let mut gens = Vec::new();
    if p.peek() != Some(&Tok::RParen) {
        loop {
            let offset = p.offset();
            let v = ComplexVector::new(p.vector()?)
                .map_err(|e| syntax(input, offset, &e.to_string()))?;
            if let Some(first) = gens.first() {
                let first: &ComplexVector = first;
                if first.dim() != v.dim() {
                    return Err(syntax(input, offset, "generators of different dimensions"));
                }
            }
            gens.push(v);
            if p.peek() == Some(&Tok::Comma) {
                p.pos += 1;
            } else {
                break;
            }
        }
    }
    p.expect(Tok::RParen, "')'")?;
    p.finish()?;
    Ok(gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn scalars() {
        assert!(close(
            parse_complex("1+2i").unwrap(),
            Complex64::new(1.0, 2.0)
        ));
        assert!(close(
            parse_complex("2pi").unwrap(),
            Complex64::new(2.0 * PI, 0.0)
        ));
        assert!(close(
            parse_complex("2pi*i").unwrap(),
            Complex64::new(0.0, 2.0 * PI)
        ));
        assert!(close(
            parse_complex("-3.5e-1 - i").unwrap(),
            Complex64::new(-0.35, -1.0)
        ));
        assert!(close(
            parse_complex("2(1+i)").unwrap(),
            Complex64::new(2.0, 2.0)
        ));
        assert!(close(
            parse_complex("exp(i*pi/3)").unwrap(),
            Complex64::new(0.5, 3f64.sqrt() / 2.0)
        ));
        assert!(close(
            parse_complex("2^3").unwrap(),
            Complex64::new(8.0, 0.0)
        ));
        assert!(close(
            parse_complex("2e").unwrap(),
            Complex64::new(2.0 * E, 0.0)
        ));
        assert!(parse_complex("1 +").is_err());
        assert!(parse_complex("foo").is_err());
        assert!(parse_complex("1/0").is_err());
    }

    #[test]
    fn lattices() {
        let g = parse_lattice("lattice(1, 2i)").unwrap();
        assert_eq!(g.len(), 2);
        assert!(close(g[1].get(0), Complex64::new(0.0, 2.0)));
        let g = parse_lattice("lattice((2pi*i,0),(0,2pi*i))").unwrap();
        assert_eq!(g[0].dim(), 2);
        assert!(close(g[1].get(1), Complex64::new(0.0, 2.0 * PI)));
        let g = parse_lattice("lattice((1+i)/2, 1)").unwrap();
        assert!(close(g[0].get(0), Complex64::new(0.5, 0.5)));
        assert!(parse_lattice("lattice()").unwrap().is_empty());
        assert!(parse_lattice("lattice(1, (1, 2))").is_err());
        assert!(parse_lattice("lattice(1, 2i) x").is_err());
        assert!(parse_lattice("lat(1)").is_err());
    }
}
