//! Polynomial expression parser.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor ('*' factor | factor)*      juxtaposition multiplies
//! factor   := ['-'] atom ['^' uint]
//! atom     := rational | variable | '(' expr ')'
//! rational := int ['/' uint] | decimal
//! ```
//!
//! `^` binds to the atom only, so `-x^2` is `-(x^2)`. Juxtaposition is
//! accepted before a variable or a parenthesis, e.g. `3x^2y` or `2(x+1)`.
//! Runs of letters are split into declared variable names (`xy` is `x*y`
//! when `x` and `y` are declared). Decimals convert exactly (`0.5` is `1/2`).

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ratpoly::{ring, RatPoly, Rational};

const MAX_EXPONENT: u32 = 1000;

/// Parsed expression tree.
#[derive(Clone, Debug, PartialEq)]
pub enum ExprAst {
    Number(Rational),
    /// Index into the declared variable list.
    Variable(usize),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Neg(Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, u32),
    Group(Box<ExprAst>),
}

impl ExprAst {
    /// Expands the tree into a polynomial over `vars`.
    pub fn to_poly(&self, vars: &Arc<[String]>) -> RatPoly {
        match self {
            ExprAst::Number(r) => RatPoly::constant(vars.clone(), r.clone()),
            ExprAst::Variable(i) => RatPoly::var_at(vars.clone(), *i),
            ExprAst::Add(a, b) => &a.to_poly(vars) + &b.to_poly(vars),
            ExprAst::Sub(a, b) => &a.to_poly(vars) - &b.to_poly(vars),
            ExprAst::Neg(a) => -a.to_poly(vars),
            ExprAst::Mul(a, b) => &a.to_poly(vars) * &b.to_poly(vars),
            ExprAst::Pow(a, n) => a.to_poly(vars).pow(*n),
            ExprAst::Group(a) => a.to_poly(vars),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Decimal(Rational),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    vars: &'a [String],
    toks: Vec<(Tok, usize)>,
}

impl<'a> Lexer<'a> {
    fn run(src: &'a str, vars: &'a [String]) -> Result<Vec<(Tok, usize)>> {
        let mut lx = Lexer {
            src,
            vars,
            toks: Vec::new(),
        };
        lx.lex()?;
        Ok(lx.toks)
    }

    fn lex(&mut self) -> Result<()> {
        let bytes = self.src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            match c {
                b' ' | b'\t' | b'\n' | b'\r' => i += 1,
                b'+' => self.push1(Tok::Plus, &mut i),
                b'-' => self.push1(Tok::Minus, &mut i),
                b'*' => self.push1(Tok::Star, &mut i),
                b'/' => self.push1(Tok::Slash, &mut i),
                b'^' => self.push1(Tok::Caret, &mut i),
                b'(' => self.push1(Tok::LParen, &mut i),
                b')' => self.push1(Tok::RParen, &mut i),
                b'0'..=b'9' | b'.' => i = self.number(i)?,
                c if c.is_ascii_alphabetic() || c == b'_' => i = self.ident(i)?,
                _ => {
                    let ch = self.src[i..].chars().next().unwrap_or('?');
                    return Err(Error::Syntax {
                        offset: i,
                        message: format!("unexpected character `{ch}`"),
                    });
                }
            }
        }
        self.toks.push((Tok::End, bytes.len()));
        Ok(())
    }

    fn push1(&mut self, t: Tok, i: &mut usize) {
        self.toks.push((t, *i));
        *i += 1;
    }

    fn number(&mut self, start: usize) -> Result<usize> {
        let bytes = self.src.as_bytes();
        let mut i = start;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let int_part = &self.src[start..i];
        if i < bytes.len() && bytes[i] == b'.' {
            i += 1;
            let frac_start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let frac = &self.src[frac_start..i];
            if int_part.is_empty() && frac.is_empty() {
                return Err(Error::Syntax {
                    offset: start,
                    message: "lone decimal point".into(),
                });
            }
            let digits = format!("{int_part}{frac}");
            let num: BigInt = digits.parse().expect("digits only");
            let den = num_traits::pow(BigInt::from(10), frac.len());
            self.toks.push((Tok::Decimal(Rational::new(num, den)), start));
        } else {
            let n: BigInt = int_part.parse().expect("digits only");
            self.toks.push((Tok::Int(n), start));
        }
        Ok(i)
    }

    fn ident(&mut self, start: usize) -> Result<usize> {
        let bytes = self.src.as_bytes();
        let mut i = start;
        while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
            i += 1;
        }
        let word = &self.src[start..i];
        match split_into_vars(word, self.vars) {
            Some(parts) => {
                let mut off = start;
                for (idx, len) in parts {
                    self.toks.push((Tok::Var(idx), off));
                    off += len;
                }
                Ok(i)
            }
            None => Err(Error::UnknownVariable(word.to_string())),
        }
    }
}

/// Splits `word` into a sequence of declared variable names, preferring the
/// longest name at each position. Returns `(index, byte length)` pairs.
fn split_into_vars(word: &str, vars: &[String]) -> Option<Vec<(usize, usize)>> {
    if let Some(i) = vars.iter().position(|v| v == word) {
        return Some(vec![(i, word.len())]);
    }
    // reachable[k]: a split of word[..k] exists
    let n = word.len();
    let mut best: Vec<Option<(usize, usize)>> = vec![None; n + 1];
    let mut reachable = vec![false; n + 1];
    reachable[0] = true;
    for k in 0..n {
        if !reachable[k] {
            continue;
        }
        let mut cands: Vec<(usize, &String)> = vars
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_empty() && word[k..].starts_with(v.as_str()))
            .collect();
        cands.sort_by_key(|(_, v)| std::cmp::Reverse(v.len()));
        for (idx, v) in cands {
            let e = k + v.len();
            if !reachable[e] {
                reachable[e] = true;
                best[e] = Some((idx, k));
            }
        }
    }
    if !reachable[n] {
        return None;
    }
    let mut parts = Vec::new();
    let mut e = n;
    while e > 0 {
        let (idx, k) = best[e]?;
        parts.push((idx, e - k));
        e = k;
    }
    parts.reverse();
    Some(parts)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<ExprAst> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = ExprAst::Add(Box::new(lhs), Box::new(rhs));
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = ExprAst::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ExprAst> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.factor()?;
                    lhs = ExprAst::Mul(Box::new(lhs), Box::new(rhs));
                }
                Tok::Var(_) | Tok::LParen => {
                    let rhs = self.factor()?;
                    lhs = ExprAst::Mul(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<ExprAst> {
        let negate = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let mut base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let off = self.offset();
            match self.bump() {
                Tok::Int(n) => {
                    if *self.peek() == Tok::Slash {
                        return Err(Error::NonPolynomial {
                            offset: off,
                            message: "fractional exponent".into(),
                        });
                    }
                    let e: u32 = match u32::try_from(&n) {
                        Ok(e) if e <= MAX_EXPONENT => e,
                        _ => {
                            return Err(Error::Syntax {
                                offset: off,
                                message: format!("exponent larger than {MAX_EXPONENT}"),
                            })
                        }
                    };
                    base = ExprAst::Pow(Box::new(base), e);
                }
                Tok::Minus => {
                    return Err(Error::NonPolynomial {
                        offset: off,
                        message: "negative exponent".into(),
                    })
                }
                Tok::Decimal(_) => {
                    return Err(Error::NonPolynomial {
                        offset: off,
                        message: "fractional exponent".into(),
                    })
                }
                _ => {
                    return Err(Error::Syntax {
                        offset: off,
                        message: "expected a non-negative integer exponent".into(),
                    })
                }
            }
        }
        Ok(if negate {
            ExprAst::Neg(Box::new(base))
        } else {
            base
        })
    }

    fn atom(&mut self) -> Result<ExprAst> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let off = self.offset();
                    match self.bump() {
                        Tok::Int(d) if !d.is_zero() => {
                            Ok(ExprAst::Number(Rational::new(n, d)))
                        }
                        Tok::Int(_) => Err(Error::Syntax {
                            offset: off,
                            message: "zero denominator".into(),
                        }),
                        _ => Err(Error::Syntax {
                            offset: off,
                            message: "expected an integer denominator".into(),
                        }),
                    }
                } else {
                    Ok(ExprAst::Number(Rational::from_integer(n)))
                }
            }
            Tok::Decimal(r) => {
                self.bump();
                Ok(ExprAst::Number(r))
            }
            Tok::Var(i) => {
                self.bump();
                Ok(ExprAst::Variable(i))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.syntax("expected `)`");
                }
                self.bump();
                Ok(ExprAst::Group(Box::new(inner)))
            }
            Tok::End => self.syntax("unexpected end of input"),
            other => self.syntax(format!("unexpected token {}", describe(&other))),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Int(_) | Tok::Decimal(_) => "number",
        Tok::Var(_) => "variable",
        Tok::Plus => "`+`",
        Tok::Minus => "`-`",
        Tok::Star => "`*`",
        Tok::Slash => "`/`",
        Tok::Caret => "`^`",
        Tok::LParen => "`(`",
        Tok::RParen => "`)`",
        Tok::End => "end of input",
    }
}

/// Parses `text` into an expression tree over the declared `variables`.
pub fn parse_expr<S: AsRef<str>>(text: &str, variables: &[S]) -> Result<ExprAst> {
    let vars: Vec<String> = variables.iter().map(|s| s.as_ref().to_string()).collect();
    if text.trim().is_empty() {
        return Err(Error::Syntax {
            offset: 0,
            message: "empty expression".into(),
        });
    }
    let toks = Lexer::run(text, &vars)?;
    let mut p = Parser { toks, pos: 0 };
    let ast = p.expr()?;
    if *p.peek() != Tok::End {
        let t = p.peek().clone();
        return p.syntax(format!("unexpected {}", describe(&t)));
    }
    Ok(ast)
}

/// Parses `text` into an exact polynomial over `variables` (in that order).
pub fn parse_poly<S: AsRef<str>>(text: &str, variables: &[S]) -> Result<RatPoly> {
    let ast = parse_expr(text, variables)?;
    Ok(ast.to_poly(&ring(variables)))
}

/// Parses a comma-separated list of rationals (`1/2`, `-3`, `0.25`).
pub fn parse_point(text: &str) -> Result<Vec<Rational>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split(',') {
        let s = part.trim();
        let value = parse_rational(s).ok_or_else(|| Error::Syntax {
            offset,
            message: format!("`{s}` is not a rational number"),
        })?;
        out.push(value);
        offset += part.len() + 1;
    }
    Ok(out)
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest.trim_start()),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    if body.is_empty() {
        return None;
    }
    let value = if let Some((n, d)) = body.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Rational::new(n, d)
    } else if let Some((i, f)) = body.split_once('.') {
        if !(i.chars().all(|c| c.is_ascii_digit()) && f.chars().all(|c| c.is_ascii_digit())) {
            return None;
        }
        if i.is_empty() && f.is_empty() {
            return None;
        }
        let digits: BigInt = format!("{i}{f}").parse().ok()?;
        Rational::new(digits, num_traits::pow(BigInt::from(10), f.len()))
    } else {
        if !body.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        Rational::from_integer(body.parse().ok()?)
    };
    Some(if neg { -value } else { value })
}
