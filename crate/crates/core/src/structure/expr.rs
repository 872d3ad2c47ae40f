//! Rational expressions in `t` and `conj(t)` with Gaussian-rational constants.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := integer | 't' | 'conj(t)' | 'i' | '(' expr ')' | '-' factor
//! ```

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::{Rational, GR};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CoeffExpr {
    Int(BigInt),
    T,
    ConjT,
    I,
    Neg(Box<CoeffExpr>),
    Add(Box<CoeffExpr>, Box<CoeffExpr>),
    Sub(Box<CoeffExpr>, Box<CoeffExpr>),
    Mul(Box<CoeffExpr>, Box<CoeffExpr>),
    Div(Box<CoeffExpr>, Box<CoeffExpr>),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
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

    fn eat(&mut self, lit: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<CoeffExpr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = CoeffExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = CoeffExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<CoeffExpr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = CoeffExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = CoeffExpr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<CoeffExpr> {
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some(b'-') => {
                self.pos += 1;
                Ok(CoeffExpr::Neg(Box::new(self.factor()?)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(")") {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                Ok(CoeffExpr::Int(digits.parse().expect("digits")))
            }
            Some(_) => {
                if self.eat("conj(t)") {
                    Ok(CoeffExpr::ConjT)
                } else if self.eat("t") {
                    Ok(CoeffExpr::T)
                } else if self.eat("i") {
                    Ok(CoeffExpr::I)
                } else {
                    self.err("expected a number, `t`, `conj(t)`, `i`, `-` or `(`")
                }
            }
        }
    }
}

impl CoeffExpr {
    pub fn parse(text: &str) -> Result<CoeffExpr> {
        let mut p = Parser { src: text.as_bytes(), pos: 0 };
        let e = p.expr()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(e)
    }

    /// The constant expression whose canonical rendering is `c`.
    pub fn constant(c: &GR) -> CoeffExpr {
        CoeffExpr::parse(&c.to_string()).expect("canonical scalars parse")
    }

    pub fn mentions_t(&self) -> bool {
        use CoeffExpr::*;
        match self {
            Int(_) | I => false,
            T | ConjT => true,
            Neg(a) => a.mentions_t(),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => a.mentions_t() || b.mentions_t(),
        }
    }

    pub fn eval(&self, t: &GR) -> Result<GR> {
        self.eval_inner(t).map_err(|e| match e {
            Error::DivisionByZero => Error::Pole { expr: self.to_string(), t: t.to_string() },
            other => other,
        })
    }

    fn eval_inner(&self, t: &GR) -> Result<GR> {
        use CoeffExpr::*;
        Ok(match self {
            Int(k) => GR::real(Rational::from_integer(k.clone())),
            T => t.clone(),
            ConjT => t.conj(),
            I => GR::i(),
            Neg(a) => -a.eval_inner(t)?,
            Add(a, b) => a.eval_inner(t)? + b.eval_inner(t)?,
            Sub(a, b) => a.eval_inner(t)? - b.eval_inner(t)?,
            Mul(a, b) => a.eval_inner(t)? * b.eval_inner(t)?,
            Div(a, b) => a.eval_inner(t)?.checked_div(&b.eval_inner(t)?)?,
        })
    }

    fn precedence(&self) -> u8 {
        use CoeffExpr::*;
        match self {
            Add(..) | Sub(..) => 1,
            Mul(..) | Div(..) => 2,
            Neg(_) => 3,
            _ => 4,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        use CoeffExpr::*;
        match self {
            Int(k) => write!(f, "{k}"),
            T => write!(f, "t"),
            ConjT => write!(f, "conj(t)"),
            I => write!(f, "i"),
            Neg(a) => {
                write!(f, "-")?;
                a.write_at(f, 3)
            }
            Add(a, b) | Sub(a, b) => {
                a.write_at(f, 1)?;
                write!(f, "{}", if matches!(self, Add(..)) { "+" } else { "-" })?;
                b.write_at(f, 2)
            }
            Mul(a, b) | Div(a, b) => {
                a.write_at(f, 2)?;
                write!(f, "{}", if matches!(self, Mul(..)) { "*" } else { "/" })?;
                b.write_at(f, 3)
            }
        }
    }
}

impl fmt::Display for CoeffExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl std::str::FromStr for CoeffExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CoeffExpr::parse(s)
    }
}

impl serde::Serialize for CoeffExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for CoeffExpr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CoeffExpr::parse(&s).map_err(serde::de::Error::custom)
    }
}
