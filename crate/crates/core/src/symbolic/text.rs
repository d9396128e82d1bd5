//! Parser for the textual forms printed by `Display`: polynomials such as
//! `1/2*b_1_1_2 - 3*a_5_0^2 + 1` and 1-forms such as
//! `(b_1_1_1 + 2)*omega_1_1 - 1/2*omega_0_3`.

use std::ops::{Mul, Neg};

use num_bigint::BigInt;

use super::form::{FormGenerator, OneForm};
use super::poly::{Polynomial, Rational};
use super::symbol::ScalarSymbol;
use crate::error::KernelError;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Token>, KernelError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                out.push(match c {
                    '+' => Token::Plus,
                    '-' => Token::Minus,
                    '*' => Token::Star,
                    '/' => Token::Slash,
                    '^' => Token::Caret,
                    '(' => Token::LParen,
                    _ => Token::RParen,
                });
                i += 1;
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Token::Num(text.parse().map_err(|_| KernelError::Parse(text.clone()))?));
            }
            a if a.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(KernelError::Parse(format!("unexpected character {other:?} in {s:?}"))),
        }
    }
    Ok(out)
}

/// A parsed value: either a scalar or a 1-form.
#[derive(Clone, Debug)]
enum Value {
    Scalar(Polynomial),
    Form(OneForm),
}

impl Value {
    fn add(self, rhs: Value) -> Result<Value, KernelError> {
        Ok(match (self, rhs) {
            (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(a + b),
            (Value::Form(a), Value::Form(b)) => Value::Form(&a + &b),
            (Value::Form(f), Value::Scalar(p)) | (Value::Scalar(p), Value::Form(f)) if p.is_zero() => Value::Form(f),
            _ => return Err(KernelError::Parse("cannot add a scalar and a 1-form".into())),
        })
    }

    fn mul(self, rhs: Value) -> Result<Value, KernelError> {
        Ok(match (self, rhs) {
            (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(a.mul(b)),
            (Value::Scalar(p), Value::Form(f)) | (Value::Form(f), Value::Scalar(p)) => Value::Form(f.scale(&p)),
            _ => return Err(KernelError::Parse("product of two 1-forms".into())),
        })
    }

    fn neg(self) -> Value {
        match self {
            Value::Scalar(p) => Value::Scalar(p.neg()),
            Value::Form(f) => Value::Form(-&f),
        }
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Value, KernelError> {
        let mut negate = false;
        if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = acc.add(self.term()?)?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = acc.add(self.term()?.neg())?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Value, KernelError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = acc.mul(self.power()?)?;
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let Some(Token::Num(d)) = self.next() else {
                        return Err(KernelError::Parse("only integer denominators are supported".into()));
                    };
                    if d == BigInt::from(0) {
                        return Err(KernelError::Parse("division by zero".into()));
                    }
                    let inv = Polynomial::constant(Rational::new(1.into(), d));
                    acc = acc.mul(Value::Scalar(inv))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Value, KernelError> {
        let base = self.atom()?;
        if self.peek() != Some(&Token::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let Some(Token::Num(e)) = self.next() else {
            return Err(KernelError::Parse("exponent must be an integer".into()));
        };
        let e: u32 = e.try_into().map_err(|_| KernelError::Parse("exponent too large".into()))?;
        match base {
            Value::Scalar(p) => Ok(Value::Scalar(p.pow(e))),
            Value::Form(f) if e == 1 => Ok(Value::Form(f)),
            Value::Form(_) => Err(KernelError::Parse("power of a 1-form".into())),
        }
    }

    fn atom(&mut self) -> Result<Value, KernelError> {
        match self.next() {
            Some(Token::Num(n)) => Ok(Value::Scalar(Polynomial::constant(Rational::from_integer(n)))),
            Some(Token::Ident(name)) => {
                if let Some(g) = FormGenerator::parse(&name) {
                    return Ok(Value::Form(OneForm::generator(g)));
                }
                ScalarSymbol::parse(&name)
                    .map(|s| Value::Scalar(Polynomial::symbol(s)))
                    .ok_or_else(|| KernelError::Parse(format!("unknown symbol {name:?}")))
            }
            Some(Token::LParen) => {
                let v = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(v),
                    _ => Err(KernelError::Parse("missing ')'".into())),
                }
            }
            Some(Token::Minus) => Ok(self.power()?.neg()),
            other => Err(KernelError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn parse_value(s: &str) -> Result<Value, KernelError> {
    let mut p = Parser { tokens: tokenize(s)?, pos: 0 };
    if p.tokens.is_empty() {
        return Err(KernelError::Parse("empty expression".into()));
    }
    let v = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(KernelError::Parse(format!("trailing input in {s:?}")));
    }
    Ok(v)
}

pub fn parse_polynomial(s: &str) -> Result<Polynomial, KernelError> {
    match parse_value(s)? {
        Value::Scalar(p) => Ok(p),
        Value::Form(_) => Err(KernelError::Parse(format!("{s:?} is a 1-form, not a scalar"))),
    }
}

pub fn parse_one_form(s: &str) -> Result<OneForm, KernelError> {
    match parse_value(s)? {
        Value::Form(f) => Ok(f),
        Value::Scalar(p) if p.is_zero() => Ok(OneForm::zero()),
        Value::Scalar(_) => Err(KernelError::Parse(format!("{s:?} is a scalar, not a 1-form"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::poly::rat;

    #[test]
    fn polynomial_round_trip() {
        let b = Polynomial::symbol(ScalarSymbol::b(1, 1, 2));
        let a = Polynomial::symbol(ScalarSymbol::param(5, 0));
        let p = &(&b.scale(&rat(1, 2)) - &a.pow(2).scale(&rat(3, 1))) + &Polynomial::int(-7);
        assert_eq!(parse_polynomial(&p.to_string()).unwrap(), p);
        assert_eq!(parse_polynomial("0").unwrap(), Polynomial::zero());
        assert_eq!(parse_polynomial("2*alpha_01").unwrap().to_string(), "2*alpha_01");
    }

    #[test]
    fn one_form_round_trip() {
        let b = Polynomial::symbol(ScalarSymbol::b(1, 1, 1));
        let mut f = OneForm::term(FormGenerator::new(1, 1), &b + &Polynomial::int(2));
        f.add_term(FormGenerator::basis(3), &Polynomial::constant(rat(-1, 2)));
        assert_eq!(parse_one_form(&f.to_string()).unwrap(), f);
        assert!(parse_one_form("0").unwrap().is_zero());
    }

    #[test]
    fn errors() {
        assert!(parse_polynomial("b_1_1").is_err());
        assert!(parse_polynomial("(1 + 2").is_err());
        assert!(parse_one_form("omega_1_1*omega_2_2").is_err());
        assert!(parse_polynomial("omega_1_1").is_err());
        assert!(parse_polynomial("1/0").is_err());
    }
}
