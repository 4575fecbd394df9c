//! Expression parser shared by polynomial and Laurent-polynomial inputs.
//!
//! Grammar: sums and differences of products of factors, where a factor is a
//! rational literal, a variable, or a parenthesised expression, optionally
//! raised to an integer power. Division is only by rational literals.
//! Variables are `<prefix><index>` with 1-based indices, or the bare prefix
//! for the single variable of a univariate ring.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at position {position}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(BigRational),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i64),
}

/// Target ring for [`Expr::eval`].
pub trait ExprRing: Sized + Clone {
    fn constant(&self, q: &BigRational) -> Option<Self>;
    fn variable(&self, index: usize) -> Option<Self>;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Negative exponents only need to work for invertible elements.
    fn pow(&self, e: i64) -> Option<Self>;
}

impl Expr {
    /// `proto` supplies arity and is otherwise ignored.
    pub fn eval<R: ExprRing>(&self, proto: &R) -> Option<R> {
        Some(match self {
            Expr::Num(q) => proto.constant(q)?,
            Expr::Var(i) => proto.variable(*i)?,
            Expr::Add(a, b) => a.eval(proto)?.add(&b.eval(proto)?),
            Expr::Sub(a, b) => a.eval(proto)?.sub(&b.eval(proto)?),
            Expr::Mul(a, b) => a.eval(proto)?.mul(&b.eval(proto)?),
            Expr::Neg(a) => a.eval(proto)?.neg(),
            Expr::Pow(a, e) => a.eval(proto)?.pow(*e)?,
        })
    }
}

pub fn parse_expr(input: &str, prefix: char, nvars: usize) -> Result<Expr, ParseError> {
    let mut p = Parser { chars: input.chars().collect(), pos: 0, prefix, nvars };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    prefix: char,
    nvars: usize,
}

impl Parser {
    fn error(&self, message: &str) -> ParseError {
        ParseError { position: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                Expr::Neg(Box::new(self.term()?))
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some('-') => {
                    self.pos += 1;
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = Expr::Mul(Box::new(acc), Box::new(self.power()?));
                }
                Some('/') => {
                    self.pos += 1;
                    let d = self.integer()?;
                    if d.is_zero() {
                        return Err(self.error("division by zero"));
                    }
                    acc = Expr::Mul(Box::new(acc), Box::new(Expr::Num(BigRational::new(BigInt::one(), d))));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.factor()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let neg = if self.peek() == Some('-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = self.integer()?;
            let e: i64 = e.try_into().map_err(|_| self.error("exponent too large"))?;
            return Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }));
        }
        Ok(base)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Num(BigRational::from_integer(self.integer()?))),
            Some(c) if c == self.prefix => {
                self.pos += 1;
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let index = if start == self.pos {
                    if self.nvars != 1 {
                        return Err(self.error("bare variable name needs an index"));
                    }
                    0
                } else {
                    let s: String = self.chars[start..self.pos].iter().collect();
                    let i: usize = s.parse().map_err(|_| self.error("bad variable index"))?;
                    if i == 0 || i > self.nvars {
                        self.pos = start;
                        return Err(self.error("variable index out of range"));
                    }
                    i - 1
                };
                Ok(Expr::Var(index))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.error("bad integer"))
    }
}
