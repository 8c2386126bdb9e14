//! Arithmetic expressions over a variable set, e.g. `x[0]^2 + zeta*x[1]/(x[0]-1)`.

use std::sync::Arc;

use noether_core::funcfield::{FuncError, RatFunc, VarSet};
use noether_core::scalars::{FieldExt, FieldSpec};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExprError {
    #[error("at column {col}: {msg}")]
    Syntax { col: usize, msg: String },
    #[error(transparent)]
    Func(#[from] FuncError),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: &'a Arc<FieldSpec>,
    vars: &'a VarSet,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax { col: self.pos + 1, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
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

    fn sum(&mut self) -> Result<RatFunc, ExprError> {
        let mut acc = self.product()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.product()?)?;
            } else if self.eat(b'-') {
                acc = acc.sub(&self.product()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<RatFunc, ExprError> {
        let mut acc = self.power()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.power()?)?;
            } else if self.eat(b'/') {
                let d = self.power()?;
                if d.is_zero() {
                    return self.err("division by zero");
                }
                acc = acc.div(&d)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<RatFunc, ExprError> {
        if self.eat(b'-') {
            return Ok(self.power()?.neg());
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let e = self.integer()?;
            let e = if neg { -e } else { e };
            if e < 0 && base.is_zero() {
                return self.err("negative power of zero");
            }
            return Ok(base.pow(e)?);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i64, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        match text.parse() {
            Ok(v) => Ok(v),
            Err(_) => self.err("integer out of range"),
        }
    }

    fn atom(&mut self) -> Result<RatFunc, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.sum()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                Ok(RatFunc::constant(self.field, self.vars, self.field.from_i64(v)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_') {
                    self.pos += 1;
                }
                if self.src.get(self.pos) == Some(&b'[') {
                    while self.src.get(self.pos).is_some_and(|&c| c != b']') {
                        self.pos += 1;
                    }
                    if self.pos == self.src.len() {
                        return self.err("unclosed '['");
                    }
                    self.pos += 1;
                }
                let name: String =
                    std::str::from_utf8(&self.src[start..self.pos]).expect("ascii").chars().filter(|c| !c.is_whitespace()).collect();
                if name == "zeta" {
                    return Ok(RatFunc::constant(self.field, self.vars, self.field.zeta()));
                }
                match self.vars.index_of(&name) {
                    Some(i) => Ok(RatFunc::var(self.field, self.vars, i)),
                    None => {
                        self.pos = start;
                        self.err(format!("unknown variable {name}"))
                    }
                }
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse(text: &str, field: &Arc<FieldSpec>, vars: &VarSet) -> Result<RatFunc, ExprError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, field, vars };
    let v = p.sum()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(v)
}
