//! Recursive-descent parser for scalar expressions.

use num_bigint::BigInt;

use super::{Field, FieldError, Scalar};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>, String> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
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
            out.push(Token::Int(digits.parse().expect("ascii digits")));
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
            return Err(format!("unexpected character {c:?}"));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    field: &'a Field,
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser<'_> {
    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Token::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Scalar, String> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { self.field.add(&acc, &rhs) } else { self.field.sub(&acc, &rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Scalar, String> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == '*' {
                self.field.mul(&acc, &rhs)
            } else {
                self.field.div(&acc, &rhs).ok_or("division by zero")?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Scalar, String> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(self.field.neg(&self.unary()?))
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Scalar, String> {
        let base = self.atom()?;
        if self.peek_op() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek_op() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let e = match self.tokens.get(self.pos) {
            Some(Token::Int(n)) => i64::try_from(n.clone()).map_err(|_| "exponent too large")?,
            _ => return Err("expected integer exponent".into()),
        };
        self.pos += 1;
        let e = if negative { -e } else { e };
        self.field.pow(&base, e).ok_or_else(|| "zero to a negative power".into())
    }

    fn atom(&mut self) -> Result<Scalar, String> {
        let tok = self.tokens.get(self.pos).cloned().ok_or("unexpected end of input")?;
        self.pos += 1;
        match tok {
            Token::Int(n) => Ok(self.field.from_bigint(&n)),
            Token::Ident(name) => self
                .field
                .symbol_value(&name)
                .ok_or_else(|| format!("unknown symbol {name:?} in {}", self.field.name())),
            Token::Op('(') => {
                let v = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err("expected ')'".into());
                }
                self.pos += 1;
                Ok(v)
            }
            Token::Op(c) => Err(format!("unexpected {c:?}")),
        }
    }
}

pub(super) fn parse_scalar(field: &Field, s: &str) -> Result<Scalar, FieldError> {
    let err = |reason: String| FieldError::Parse { input: s.to_string(), reason };
    let tokens = tokenize(s).map_err(err)?;
    if tokens.is_empty() {
        return Err(err("empty expression".into()));
    }
    let mut p = Parser { field, tokens, pos: 0 };
    let v = p.expr().map_err(err)?;
    if p.pos != p.tokens.len() {
        return Err(err(format!("trailing input at token {}", p.pos)));
    }
    Ok(v)
}
