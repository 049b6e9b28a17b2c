//! A small expression language for user-supplied root sets `x(n, l)`.
//!
//! Expressions use integer literals, the variables `n` and `l`, `+ - * / ^`
//! and parentheses, e.g. `l`, `2^l`, `l^2`, `1/2`, `(n - l) / 3`. The grammar
//! is restricted so that every accepted expression is defined for all
//! `n >= 1, 1 <= l <= n`:
//!
//! * divisors must be nonzero constants;
//! * exponents must be a constant integer, or exactly `n` or `l`;
//! * a negative constant exponent needs a nonzero constant base.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Scalar),
    N,
    L,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let tokens = tokenize(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!(
                "unexpected trailing input in root rule {src:?}"
            )));
        }
        e.check_total()?;
        Ok(e)
    }

    fn constant(&self) -> Option<Scalar> {
        match self {
            Expr::Const(c) => Some(c.clone()),
            Expr::N | Expr::L => None,
            Expr::Neg(a) => a.constant().map(|c| -c),
            Expr::Add(a, b) => Some(a.constant()? + b.constant()?),
            Expr::Sub(a, b) => Some(a.constant()? - b.constant()?),
            Expr::Mul(a, b) => Some(a.constant()? * b.constant()?),
            Expr::Div(a, b) => a.constant()?.checked_div(&b.constant()?),
            Expr::Pow(a, b) => {
                let e = b.constant()?;
                let e = e.as_integer().and_then(|i| i64::try_from(i).ok())?;
                a.constant()?.powi(e)
            }
        }
    }

    fn check_total(&self) -> Result<()> {
        match self {
            Expr::Const(_) | Expr::N | Expr::L => Ok(()),
            Expr::Neg(a) => a.check_total(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.check_total()?;
                b.check_total()
            }
            Expr::Div(a, b) => {
                a.check_total()?;
                match b.constant() {
                    Some(c) if !c.is_zero() => Ok(()),
                    Some(_) => Err(Error::Parse("division by zero in root rule".into())),
                    None => Err(Error::Parse(
                        "root rule divisors must be constants".into(),
                    )),
                }
            }
            Expr::Pow(base, exp) => {
                base.check_total()?;
                match exp.as_ref() {
                    Expr::N | Expr::L => Ok(()),
                    _ => {
                        let e = exp.constant().ok_or_else(|| {
                            Error::Parse("root rule exponents must be a constant, n, or l".into())
                        })?;
                        let e = e
                            .as_integer()
                            .and_then(|i| i64::try_from(i).ok())
                            .ok_or_else(|| {
                                Error::Parse("root rule exponents must be integers".into())
                            })?;
                        if e < 0 && !matches!(base.constant(), Some(c) if !c.is_zero()) {
                            return Err(Error::Parse(
                                "negative exponents need a nonzero constant base".into(),
                            ));
                        }
                        Ok(())
                    }
                }
            }
        }
    }

    /// Evaluates at `(n, l)`. Total for expressions accepted by [`Expr::parse`].
    pub fn eval(&self, n: u32, l: u32) -> Scalar {
        match self {
            Expr::Const(c) => c.clone(),
            Expr::N => Scalar::from(n),
            Expr::L => Scalar::from(l),
            Expr::Neg(a) => -a.eval(n, l),
            Expr::Add(a, b) => a.eval(n, l) + b.eval(n, l),
            Expr::Sub(a, b) => a.eval(n, l) - b.eval(n, l),
            Expr::Mul(a, b) => a.eval(n, l) * b.eval(n, l),
            Expr::Div(a, b) => a
                .eval(n, l)
                .checked_div(&b.eval(n, l))
                .expect("divisor checked nonzero at parse time"),
            Expr::Pow(a, b) => {
                let e = b.eval(n, l);
                let e = e
                    .as_integer()
                    .and_then(|i| i64::try_from(i).ok())
                    .expect("exponent checked integral at parse time");
                a.eval(n, l)
                    .powi(e)
                    .expect("negative exponent only on nonzero constants")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::N => f.write_str("n"),
            Expr::L => f.write_str("l"),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a}^{b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(Scalar),
    N,
    L,
    Op(char),
    Open,
    Close,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    digits.push(d);
                    chars.next();
                }
                out.push(Token::Num(digits.parse()?));
            }
            'n' => {
                chars.next();
                out.push(Token::N);
            }
            'l' => {
                chars.next();
                out.push(Token::L);
            }
            '+' | '-' | '*' | '/' | '^' => {
                chars.next();
                out.push(Token::Op(c));
            }
            '(' => {
                chars.next();
                out.push(Token::Open);
            }
            ')' => {
                chars.next();
                out.push(Token::Close);
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character {other:?} in root rule"
                )))
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Parse("empty root rule".into()));
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(Token::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == '+' {
                Expr::Add(lhs.into(), rhs.into())
            } else {
                Expr::Sub(lhs.into(), rhs.into())
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(Token::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = if op == '*' {
                Expr::Mul(lhs.into(), rhs.into())
            } else {
                Expr::Div(lhs.into(), rhs.into())
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if let Some(Token::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(Expr::Neg(self.unary()?.into()));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if let Some(Token::Op('^')) = self.peek() {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Expr::Pow(base.into(), exp.into()));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.bump() {
            Some(Token::Num(v)) => Ok(Expr::Const(v)),
            Some(Token::N) => Ok(Expr::N),
            Some(Token::L) => Ok(Expr::L),
            Some(Token::Open) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Token::Close) => Ok(e),
                    _ => Err(Error::Parse("unbalanced parenthesis in root rule".into())),
                }
            }
            other => Err(Error::Parse(format!(
                "unexpected token {other:?} in root rule"
            ))),
        }
    }
}
