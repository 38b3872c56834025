//! Text syntax for polynomial input.
//!
//! Grammar accepted in all input files:
//!
//! ```text
//! expr   := [sign] term (sign term)*
//! term   := factor ('*' factor)*
//! factor := rational | coord ('^' uint)?
//! ```
//!
//! Rational literals are `a` or `a/b`; coordinates are the chart's declared
//! names; whitespace is insignificant; implicit multiplication is not
//! allowed. Example: `3/2*x1^2*x3 - x2`.

use num_bigint::BigInt;
use num_traits::One;

use super::field::ScalarField;
use super::poly::Polynomial;
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(Rational),
    Name(String),
    Plus,
    Minus,
    Star,
    Caret,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
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
            let numer: BigInt = chars[start..i].iter().collect::<String>().parse().unwrap();
            // '/' only ever occurs inside rational literals
            let mut j = i;
            while j < chars.len() && chars[j].is_whitespace() {
                j += 1;
            }
            if j < chars.len() && chars[j] == '/' {
                j += 1;
                while j < chars.len() && chars[j].is_whitespace() {
                    j += 1;
                }
                let dstart = j;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if dstart == j {
                    return Err(Error::Parse(format!(
                        "expected denominator digits at offset {j} in {src:?}"
                    )));
                }
                let denom: BigInt = chars[dstart..j].iter().collect::<String>().parse().unwrap();
                if denom == BigInt::from(0) {
                    return Err(Error::Parse(format!(
                        "zero denominator in literal in {src:?}"
                    )));
                }
                out.push(Token::Number(Rational::new(numer, denom)));
                i = j;
            } else {
                out.push(Token::Number(Rational::from_integer(numer)));
            }
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Name(chars[start..i].iter().collect()));
        } else {
            match c {
                '+' => out.push(Token::Plus),
                '-' => out.push(Token::Minus),
                '*' => out.push(Token::Star),
                '^' => out.push(Token::Caret),
                _ => {
                    return Err(Error::Parse(format!(
                        "unexpected character {c:?} in {src:?}"
                    )))
                }
            }
            i += 1;
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    coords: &'a [String],
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} in {:?}", self.src))
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let nvars = self.coords.len();
        let mut acc = Polynomial::zero(nvars);
        let mut sign = Rational::one();
        match self.peek() {
            Some(Token::Minus) => {
                sign = -sign;
                self.bump();
            }
            Some(Token::Plus) => {
                self.bump();
            }
            None => return Err(self.err("empty expression")),
            _ => {}
        }
        loop {
            let term = self.term()?;
            acc = &acc + &term.scale(&sign);
            match self.bump() {
                None => return Ok(acc),
                Some(Token::Plus) => sign = Rational::one(),
                Some(Token::Minus) => sign = -Rational::one(),
                Some(t) => return Err(self.err(&format!("expected '+' or '-' before {t:?}"))),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Token::Star) {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let nvars = self.coords.len();
        match self.bump() {
            Some(Token::Number(c)) => Ok(Polynomial::constant(c, nvars)),
            Some(Token::Name(name)) => {
                let var = self
                    .coords
                    .iter()
                    .position(|c| *c == name)
                    .ok_or_else(|| self.err(&format!("unknown coordinate {name:?}")))?;
                if self.peek() == Some(&Token::Caret) {
                    self.bump();
                    match self.bump() {
                        Some(Token::Number(k))
                            if k.is_integer() && !num_traits::Signed::is_negative(&k) =>
                        {
                            let exp: u32 = k
                                .to_integer()
                                .try_into()
                                .map_err(|_| self.err("exponent too large"))?;
                            Ok(Polynomial::variable(var, nvars).pow(exp))
                        }
                        _ => Err(self.err("'^' must be followed by a nonnegative integer literal")),
                    }
                } else {
                    Ok(Polynomial::variable(var, nvars))
                }
            }
            Some(t) => Err(self.err(&format!("unexpected {t:?}"))),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

/// Parses the polynomial text syntax against a chart's coordinate names.
pub fn parse_polynomial(src: &str, coords: &[String]) -> Result<Polynomial> {
    let tokens = tokenize(src)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        coords,
        src,
    };
    p.expr()
}

/// Parses a scalar field given as a numerator polynomial and an optional
/// denominator polynomial.
pub fn parse_scalar_field(num: &str, den: Option<&str>, coords: &[String]) -> Result<ScalarField> {
    let n = parse_polynomial(num, coords)?;
    match den {
        None => Ok(ScalarField::from_poly(n)),
        Some(d) => ScalarField::new(n, parse_polynomial(d, coords)?),
    }
}
