//! Tokenizer and recursive-descent parser for scalar and polynomial text.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/')? unary)*      juxtaposition multiplies
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' exponent)?
//! atom   := number | identifier | '(' expr ')'
//! ```
//!
//! Identifiers resolve to deformation parameters or to generators `x<k>`
//! (1-based), or to generator aliases supplied by the caller.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalar::{is_generator_token, ParameterSpace, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigRational),
    /// 0-based parameter index.
    Param(usize),
    /// 0-based generator index.
    Gen(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

impl Expr {
    pub fn contains_generator(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Param(_) => false,
            Expr::Gen(_) => true,
            Expr::Neg(a) | Expr::Pow(a, _) => a.contains_generator(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.contains_generator() || b.contains_generator()
            }
        }
    }

    /// Evaluates a generator-free expression in K.
    pub fn eval_scalar(&self, m: usize) -> Result<Scalar> {
        Ok(match self {
            Expr::Num(c) => Scalar::from_rational(c.clone(), m),
            Expr::Param(i) => Scalar::param(*i, m),
            Expr::Gen(k) => {
                return Err(Error::InvalidArgument(format!("generator x{} in scalar context", k + 1)))
            }
            Expr::Neg(a) => a.eval_scalar(m)?.neg(),
            Expr::Add(a, b) => a.eval_scalar(m)?.add(&b.eval_scalar(m)?),
            Expr::Sub(a, b) => a.eval_scalar(m)?.sub(&b.eval_scalar(m)?),
            Expr::Mul(a, b) => a.eval_scalar(m)?.mul(&b.eval_scalar(m)?),
            Expr::Div(a, b) => a.eval_scalar(m)?.div(&b.eval_scalar(m)?)?,
            Expr::Pow(a, e) => a.eval_scalar(m)?.pow(*e)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let mut frac = "";
                if i + 1 < bytes.len() && bytes[i] == b'.' && bytes[i + 1].is_ascii_digit() {
                    let fs = i + 1;
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    frac = &src[fs..i];
                }
                let int_part = &src[start..if frac.is_empty() { i } else { i - frac.len() - 1 }];
                let digits = format!("{int_part}{frac}");
                let n: BigInt = digits.parse().map_err(|_| Error::Syntax {
                    pos: start,
                    msg: "bad number".into(),
                })?;
                let den = num_traits::pow(BigInt::from(10), frac.len());
                out.push((start, Tok::Num(BigRational::new(n, den))));
                continue;
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            other => {
                return Err(Error::Syntax { pos: start, msg: format!("unexpected character `{other}`") })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

/// Name resolution context.
pub struct Symbols<'a> {
    pub params: &'a ParameterSpace,
    /// Number of generators; 0 for scalar-only text.
    pub ngens: usize,
    /// Extra generator names (index = generator).
    pub aliases: &'a [String],
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    syms: &'a Symbols<'a>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.here(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let e = self.exponent()?;
        Ok(Expr::Pow(Box::new(base), e))
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.peek() == Some(&Tok::LParen);
        if paren {
            self.bump();
        }
        let neg = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                true
            }
            Some(Tok::Plus) => {
                self.bump();
                false
            }
            _ => false,
        };
        let v = match self.bump() {
            Some(Tok::Num(n)) if n.is_integer() => {
                let i: i64 = n
                    .to_integer()
                    .try_into()
                    .map_err(|_| Error::Syntax { pos: self.here(), msg: "exponent too large".into() })?;
                i
            }
            _ => {
                self.pos -= 1;
                return self.err("expected integer exponent");
            }
        };
        if paren && self.bump() != Some(Tok::RParen) {
            self.pos -= 1;
            return self.err("expected `)`");
        }
        Ok(if neg { -v } else { v })
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.here();
        match self.bump() {
            Some(Tok::Num(n)) => Ok(Expr::Num(n)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                if self.bump() != Some(Tok::RParen) {
                    self.pos -= 1;
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(Tok::Ident(name)) => self.resolve(&name, at),
            Some(_) => {
                self.pos -= 1;
                self.err("unexpected token")
            }
            None => self.err("unexpected end of input"),
        }
    }

    fn resolve(&self, name: &str, _at: usize) -> Result<Expr> {
        if let Some(i) = self.syms.params.index_of(name) {
            return Ok(Expr::Param(i));
        }
        if let Some(k) = self.syms.aliases.iter().position(|a| a == name) {
            return Ok(Expr::Gen(k));
        }
        if is_generator_token(name) {
            let k: usize = name[1..].parse().map_err(|_| Error::UnknownGenerator(name.into()))?;
            if k >= 1 && k <= self.syms.ngens {
                return Ok(Expr::Gen(k - 1));
            }
            return Err(Error::UnknownGenerator(name.into()));
        }
        if self.syms.ngens > 0 && name.starts_with(|c: char| c.is_ascii_uppercase()) {
            return Err(Error::UnknownGenerator(name.into()));
        }
        Err(Error::UnknownParameter(name.into()))
    }
}

/// Parses text against the given symbol table.
pub fn parse_expr(src: &str, syms: &Symbols<'_>) -> Result<Expr> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::Syntax { pos: 0, msg: "empty expression".into() });
    }
    let mut p = Parser { toks, pos: 0, end: src.len(), syms };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parses a scalar in the scalar grammar.
pub fn parse_scalar(src: &str, params: &ParameterSpace) -> Result<Scalar> {
    let syms = Symbols { params, ngens: 0, aliases: &[] };
    parse_expr(src, &syms)?.eval_scalar(params.len())
}
