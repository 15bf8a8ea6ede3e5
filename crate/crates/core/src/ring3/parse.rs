//! Polynomial text grammar:
//!
//! ```text
//! expr     := sign? term (('+'|'-') term)*
//! term     := factor ('*'? factor)*
//! factor   := base ('^' uint)?
//! base     := rational | 'x' | 'y' | 'z' | '(' expr ')'
//! rational := uint ('/' uint)?
//! ```
//!
//! Whitespace is ignored. Input is expanded through an inhomogeneous
//! intermediate form and checked for homogeneity at the end.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{HPoly, Mono, RingError};
use crate::exactlin::Rational;

/// Possibly inhomogeneous polynomial used during parsing.
#[derive(Clone, Debug, Default)]
struct Expansion(BTreeMap<[u32; 3], Rational>);

impl Expansion {
    fn constant(c: Rational) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert([0, 0, 0], c);
        }
        Expansion(m)
    }

    fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Expansion(BTreeMap::from([(e, Rational::one())]))
    }

    fn add(mut self, other: Expansion, sign: bool) -> Self {
        for (k, v) in other.0 {
            let entry = self.0.entry(k).or_insert_with(Rational::zero);
            if sign {
                *entry += v;
            } else {
                *entry -= v;
            }
            if entry.is_zero() {
                self.0.remove(&k);
            }
        }
        self
    }

    fn mul(&self, other: &Expansion) -> Self {
        let mut out: BTreeMap<[u32; 3], Rational> = BTreeMap::new();
        for (a, ca) in &self.0 {
            for (b, cb) in &other.0 {
                let k = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
                let entry = out.entry(k).or_insert_with(Rational::zero);
                *entry += ca * cb;
            }
        }
        out.retain(|_, v| !v.is_zero());
        Expansion(out)
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Expansion::constant(Rational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> RingError {
        RingError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
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

    fn uint(&mut self) -> Result<BigInt, RingError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an unsigned integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(digits.parse().unwrap())
    }

    fn expr(&mut self) -> Result<Expansion, RingError> {
        let mut sign = true;
        if self.eat(b'-') {
            sign = false;
        } else {
            self.eat(b'+');
        }
        let mut acc = Expansion::default().add(self.term()?, sign);
        loop {
            if self.eat(b'+') {
                acc = acc.add(self.term()?, true);
            } else if self.eat(b'-') {
                acc = acc.add(self.term()?, false);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expansion, RingError> {
        let mut acc = self.factor()?;
        loop {
            // explicit `*` or juxtaposition such as `2x` or `x(y+z)`
            if self.eat(b'*') || matches!(self.peek(), Some(c) if c.is_ascii_digit() || b"xyz(".contains(&c)) {
                acc = acc.mul(&self.factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expansion, RingError> {
        let base = self.base()?;
        if self.eat(b'^') {
            let e = self.uint()?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Expansion, RingError> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(Expansion::var(0))
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(Expansion::var(1))
            }
            Some(b'z') => {
                self.pos += 1;
                Ok(Expansion::var(2))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.uint()?;
                let den = if self.eat(b'/') {
                    let d = self.uint()?;
                    if d.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    d
                } else {
                    BigInt::one()
                };
                Ok(Expansion::constant(Rational::new(num, den)))
            }
            Some(c) => Err(self.err(format!("unexpected character '{}'", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses and fully expands a homogeneous polynomial.
pub fn parse(text: &str) -> Result<HPoly, RingError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    let mut degree = None;
    for k in e.0.keys() {
        let d = k[0] + k[1] + k[2];
        match degree {
            None => degree = Some(d),
            Some(d0) if d0 != d => return Err(RingError::NotHomogeneous(d0.min(d), d0.max(d))),
            _ => {}
        }
    }
    let degree = degree.ok_or(RingError::ZeroPolynomial)?;
    Ok(HPoly::from_terms(
        degree,
        e.0.into_iter().map(|(k, c)| (Mono::from_exps(k), c)),
    ))
}
