//! Scalar fields in configs accept either a JSON number or a small
//! arithmetic expression such as `"2*pi"`, `"sqrt(2)"` or `"-pi/2"`.
//!
//! Grammar: `+ - * / ^`, parentheses, unary minus, the constants `pi` and
//! `e`, and the functions `sqrt`, `exp`, `ln`.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Expr(String),
}

impl Scalar {
    pub fn value(&self) -> Result<f64> {
        match self {
            Scalar::Number(v) => Ok(*v),
            Scalar::Expr(s) => eval(s),
        }
    }
}

impl From<f64> for Scalar {
    fn from(v: f64) -> Self {
        Scalar::Number(v)
    }
}

pub fn values(xs: &[Scalar]) -> Result<Vec<f64>> {
    xs.iter().map(Scalar::value).collect()
}

pub fn eval(src: &str) -> Result<f64> {
    let mut p = Parser { src, chars: src.char_indices().peekable() };
    let v = p.sum()?;
    p.skip_ws();
    if p.chars.peek().is_some() {
        return Err(p.fail("trailing input"));
    }
    if !v.is_finite() {
        return Err(p.fail("value is not finite"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a str,
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
}

impl Parser<'_> {
    fn fail(&self, reason: &'static str) -> LabError {
        LabError::Expression { expr: self.src.to_string(), reason }
    }

    fn skip_ws(&mut self) {
        while self.chars.next_if(|(_, c)| c.is_whitespace()).is_some() {}
    }

    fn eat(&mut self, want: char) -> bool {
        self.skip_ws();
        self.chars.next_if(|&(_, c)| c == want).is_some()
    }

    fn sum(&mut self) -> Result<f64> {
        let mut v = self.product()?;
        loop {
            if self.eat('+') {
                v += self.product()?;
            } else if self.eat('-') {
                v -= self.product()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn product(&mut self) -> Result<f64> {
        let mut v = self.unary()?;
        loop {
            if self.eat('*') {
                v *= self.unary()?;
            } else if self.eat('/') {
                v /= self.unary()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<f64> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<f64> {
        let base = self.atom()?;
        if self.eat('^') {
            // right associative, binds tighter than unary minus on the left
            let exp = self.unary()?;
            return Ok(base.powf(exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<f64> {
        self.skip_ws();
        if self.eat('(') {
            let v = self.sum()?;
            if !self.eat(')') {
                return Err(self.fail("missing ')'"));
            }
            return Ok(v);
        }
        let Some(&(start, c)) = self.chars.peek() else {
            return Err(self.fail("unexpected end of input"));
        };
        if c.is_ascii_digit() || c == '.' {
            let mut end = start;
            let mut prev = c;
            while let Some(&(i, ch)) = self.chars.peek() {
                let exp_sign = (ch == '+' || ch == '-') && (prev == 'e' || prev == 'E');
                if ch.is_ascii_digit() || ch == '.' || ch == 'e' || ch == 'E' || exp_sign {
                    end = i + ch.len_utf8();
                    prev = ch;
                    self.chars.next();
                } else {
                    break;
                }
            }
            return self.src[start..end].parse().map_err(|_| self.fail("bad number"));
        }
        if c.is_ascii_alphabetic() {
            let mut end = start;
            while let Some(&(i, ch)) = self.chars.peek() {
                if ch.is_ascii_alphanumeric() || ch == '_' {
                    end = i + 1;
                    self.chars.next();
                } else {
                    break;
                }
            }
            let name = &self.src[start..end];
            return match name {
                "pi" => Ok(std::f64::consts::PI),
                "e" => Ok(std::f64::consts::E),
                "sqrt" | "exp" | "ln" => {
                    if !self.eat('(') {
                        return Err(self.fail("function call needs '('"));
                    }
                    let arg = self.sum()?;
                    if !self.eat(')') {
                        return Err(self.fail("missing ')'"));
                    }
                    Ok(match name {
                        "sqrt" => arg.sqrt(),
                        "exp" => arg.exp(),
                        _ => arg.ln(),
                    })
                }
                _ => Err(self.fail("unknown identifier")),
            };
        }
        Err(self.fail("unexpected character"))
    }
}
