use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::MultiPoly;
use crate::error::ParseError;
use crate::ring::ParseCoeff;

/// Syntax tree of a polynomial expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigInt),
    Ident(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, ParseError> {
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
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(text.parse().map_err(|_| ParseError::new(format!("bad number {text}")))?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(ParseError::new(format!("unexpected character '{c}' in \"{s}\"")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else if matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Op('('))) {
                // Implicit product such as `2x` or `3(x+1)`.
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| ParseError::new("exponent too large"))?;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => Err(ParseError::new("exponent must be a non-negative integer")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Ident(s))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(ParseError::new("missing ')'"));
                }
                Ok(e)
            }
            Some(t) => Err(ParseError::new(format!("unexpected token {t:?}"))),
            None => Err(ParseError::new("unexpected end of input")),
        }
    }
}

impl Expr {
    pub fn parse(s: &str) -> Result<Expr, ParseError> {
        let toks = lex(s)?;
        if toks.is_empty() {
            return Err(ParseError::new("empty expression"));
        }
        let mut p = Parser { toks, pos: 0 };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(ParseError::new(format!("trailing input in \"{s}\"")));
        }
        Ok(e)
    }

    /// Value of a constant rational subexpression.
    fn rational(&self) -> Option<BigRational> {
        Some(match self {
            Expr::Num(n) => BigRational::from_integer(n.clone()),
            Expr::Ident(_) => return None,
            Expr::Add(a, b) => a.rational()? + b.rational()?,
            Expr::Sub(a, b) => a.rational()? - b.rational()?,
            Expr::Mul(a, b) => a.rational()? * b.rational()?,
            Expr::Div(a, b) => {
                let d = b.rational()?;
                if d.is_zero() {
                    return None;
                }
                a.rational()? / d
            }
            Expr::Neg(a) => -a.rational()?,
            Expr::Pow(a, e) => {
                let base = a.rational()?;
                (0..*e).fold(BigRational::one(), |acc, _| acc * &base)
            }
        })
    }

    pub fn eval<R: ParseCoeff>(&self, ring: &R, vars: &[String]) -> Result<MultiPoly<R::Elem>, ParseError> {
        let n = vars.len();
        Ok(match self {
            Expr::Num(v) => MultiPoly::constant(ring, n, ratio(ring, v, &BigInt::one())?),
            Expr::Ident(s) => {
                if let Some(i) = vars.iter().position(|v| v == s) {
                    MultiPoly::var(ring, n, i)
                } else if let Some(c) = ring.base_variable(s) {
                    MultiPoly::constant(ring, n, c)
                } else {
                    return Err(ParseError::new(format!("unknown identifier '{s}'")));
                }
            }
            Expr::Add(a, b) => a.eval(ring, vars)?.add(ring, &b.eval(ring, vars)?),
            Expr::Sub(a, b) => a.eval(ring, vars)?.sub(ring, &b.eval(ring, vars)?),
            Expr::Mul(a, b) => a.eval(ring, vars)?.mul(ring, &b.eval(ring, vars)?),
            Expr::Div(a, b) => {
                let d = b
                    .rational()
                    .ok_or_else(|| ParseError::new("division only by nonzero rational constants"))?;
                let inv = ratio(ring, d.denom(), d.numer())?;
                a.eval(ring, vars)?.scale(ring, &inv)
            }
            Expr::Neg(a) => a.eval(ring, vars)?.neg(ring),
            Expr::Pow(a, e) => a.eval(ring, vars)?.pow(ring, *e),
        })
    }
}

fn ratio<R: ParseCoeff>(ring: &R, n: &BigInt, d: &BigInt) -> Result<R::Elem, ParseError> {
    ring.from_ratio(n, d)
        .ok_or_else(|| ParseError::new(format!("{n}/{d} is not an element of the coefficient ring")))
}

/// Parses `s` as a polynomial in `vars` over `ring`.
pub fn parse_poly<R: ParseCoeff>(ring: &R, vars: &[String], s: &str) -> Result<MultiPoly<R::Elem>, ParseError> {
    Expr::parse(s)?.eval(ring, vars)
}
