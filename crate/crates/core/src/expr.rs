//! General arithmetic expression trees and the expression mini-language.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | primary
//! primary := INT | 'pi' | 'gamma' | FUNC '(' expr ')' | '(' expr ')'
//! FUNC    := 'ln' | 'sqrt' | 'sin' | 'cos' | 'cot'
//! ```
//!
//! A literal such as `2/3` parses as `Div(Int 2, Int 3)`. Trees are never
//! simplified, so a parsed right-hand side keeps the printed shape.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::hp::{self, HPReal, PrecisionContext};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Rat(Rational),
    Pi,
    /// Euler's constant.
    Gamma,
    Sqrt(Box<Expr>),
    Ln(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Cot(Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
}

#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn int(n: impl Into<BigInt>) -> Expr {
        Expr::Int(n.into())
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }

    pub fn ln(a: Expr) -> Expr {
        Expr::Ln(Box::new(a))
    }

    pub fn sqrt(a: Expr) -> Expr {
        Expr::Sqrt(Box::new(a))
    }

    /// Nonnegative rational as `n` or `n/d` built from integer literals.
    pub fn ratio(r: &Rational) -> Expr {
        debug_assert!(!r.is_negative());
        if r.denom() == &BigInt::from(1) {
            Expr::Int(r.numer().clone())
        } else {
            Expr::div(Expr::Int(r.numer().clone()), Expr::Int(r.denom().clone()))
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Rat(r) if !r.denom().eq(&BigInt::from(1)) => 2,
            Expr::Neg(_) => 3,
            Expr::Int(n) if n.is_negative() => 3,
            Expr::Rat(r) if r.is_negative() => 3,
            _ => 4,
        }
    }

    fn is_int_ratio(&self) -> bool {
        matches!(self, Expr::Div(a, b) if matches!(**a, Expr::Int(_)) && matches!(**b, Expr::Int(_)))
            || matches!(self, Expr::Rat(r) if r.denom() != &BigInt::from(1))
    }

    fn write_child(child: &Expr, parens: bool, out: &mut String) {
        if parens {
            out.push('(');
            child.write(out);
            out.push(')');
        } else {
            child.write(out);
        }
    }

    fn write(&self, out: &mut String) {
        let call = |name: &str, arg: &Expr, out: &mut String| {
            out.push_str(name);
            out.push('(');
            arg.write(out);
            out.push(')');
        };
        match self {
            Expr::Int(n) => out.push_str(&n.to_string()),
            Expr::Rat(r) => out.push_str(&r.to_string()),
            Expr::Pi => out.push_str("pi"),
            Expr::Gamma => out.push_str("gamma"),
            Expr::Sqrt(a) => call("sqrt", a, out),
            Expr::Ln(a) => call("ln", a, out),
            Expr::Sin(a) => call("sin", a, out),
            Expr::Cos(a) => call("cos", a, out),
            Expr::Cot(a) => call("cot", a, out),
            Expr::Neg(a) => {
                out.push('-');
                Self::write_child(a, a.precedence() < 3, out);
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                let (op, prec) = match self {
                    Expr::Add(..) => (" + ", 1),
                    Expr::Sub(..) => (" - ", 1),
                    Expr::Mul(..) => ("*", 2),
                    _ => ("/", 2),
                };
                // a quotient used as a multiplier keeps its printed parentheses
                let left_parens = a.precedence() < prec
                    || (matches!(self, Expr::Mul(..)) && (matches!(**a, Expr::Div(..)) || a.is_int_ratio()));
                Self::write_child(a, left_parens, out);
                out.push_str(op);
                Self::write_child(b, b.precedence() <= prec, out);
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                toks.push((start, Tok::Int(text[start..i].parse().unwrap())));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                toks.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                return Err(Error::Syntax {
                    pos: start,
                    expected: "number, identifier, operator or parenthesis".into(),
                })
            }
        };
        toks.push((start, tok));
        i += 1;
    }
    toks.push((text.len(), Tok::End));
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            expected: expected.to_string(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(what)
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::add(lhs, self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::mul(lhs, self.unary()?);
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::div(lhs, self.unary()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::neg(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr> {
        let expected = "integer, 'pi', 'gamma', function call or '('";
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(n))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let wrap: fn(Box<Expr>) -> Expr = match name.as_str() {
                    "pi" => {
                        self.bump();
                        return Ok(Expr::Pi);
                    }
                    "gamma" => {
                        self.bump();
                        return Ok(Expr::Gamma);
                    }
                    "ln" => Expr::Ln,
                    "sqrt" => Expr::Sqrt,
                    "sin" => Expr::Sin,
                    "cos" => Expr::Cos,
                    "cot" => Expr::Cot,
                    _ => return self.fail(expected),
                };
                self.bump();
                self.expect(Tok::LParen, "'(' after function name")?;
                let arg = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(wrap(Box::new(arg)))
            }
            _ => self.fail(expected),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: tokenize(text)?,
        at: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail("operator or end of input");
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// Evaluation

/// Divisors and cotangent arguments this close to zero (in ulps) are poles.
const ZERO_SLACK_BITS: u32 = 32;

fn domain_at(path: &str, reason: String) -> Error {
    Error::Domain {
        atom: path.to_string(),
        reason,
    }
}

impl Expr {
    pub fn eval(&self, ctx: &PrecisionContext) -> Result<HPReal> {
        self.eval_at(ctx, "expr")
    }

    fn eval_at(&self, ctx: &PrecisionContext, path: &str) -> Result<HPReal> {
        let child = |e: &Expr, label: &str| e.eval_at(ctx, &format!("{path}/{label}"));
        Ok(match self {
            Expr::Int(n) => HPReal::from_int(n.clone(), ctx),
            Expr::Rat(r) => HPReal::from_rational(r, ctx),
            Expr::Pi => hp::const_pi(ctx),
            Expr::Gamma => hp::const_gamma(ctx),
            Expr::Sqrt(a) => {
                let v = child(a, "sqrt")?;
                if v.is_negative() {
                    return Err(domain_at(
                        &format!("{path}/sqrt"),
                        format!("sqrt of negative value {}", v.to_sci_string(6)),
                    ));
                }
                hp::eval_sqrt(&v, ctx)?
            }
            Expr::Ln(a) => {
                let v = child(a, "ln")?;
                if v.is_negative() || v.is_zero() {
                    return Err(domain_at(
                        &format!("{path}/ln"),
                        format!("ln of nonpositive value {}", v.to_sci_string(6)),
                    ));
                }
                hp::eval_ln(&v, ctx)?
            }
            Expr::Sin(a) => hp::eval_sin_cos(&child(a, "sin")?, ctx).0,
            Expr::Cos(a) => hp::eval_sin_cos(&child(a, "cos")?, ctx).1,
            Expr::Cot(a) => {
                let (s, c) = hp::eval_sin_cos(&child(a, "cot")?, ctx);
                if s.is_negligible(ZERO_SLACK_BITS) {
                    return Err(domain_at(&format!("{path}/cot"), "cot at a pole".into()));
                }
                c.checked_div(&s)?
            }
            Expr::Neg(a) => -child(a, "neg")?,
            Expr::Add(a, b) => child(a, "add.0")? + child(b, "add.1")?,
            Expr::Sub(a, b) => child(a, "sub.0")? - child(b, "sub.1")?,
            Expr::Mul(a, b) => child(a, "mul.0")? * child(b, "mul.1")?,
            Expr::Div(a, b) => {
                let num = child(a, "div.0")?;
                let den = child(b, "div.1")?;
                if den.is_negligible(ZERO_SLACK_BITS) {
                    return Err(domain_at(
                        &format!("{path}/div.1"),
                        "divisor indistinguishable from zero".into(),
                    ));
                }
                num.checked_div(&den)?
            }
        })
    }
}

pub fn ast_parse(text: &str) -> Result<Expr> {
    parse_expr(text)
}

pub fn ast_render(e: &Expr) -> String {
    e.render()
}

pub fn ast_eval(e: &Expr, ctx: &PrecisionContext) -> Result<HPReal> {
    e.eval(ctx)
}
