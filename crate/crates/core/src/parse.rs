//! Polynomial expression parser.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' INTEGER)?
//! atom    := INTEGER | INTEGER '/' INTEGER | IDENT | '(' sum ')'
//! ```
//!
//! There is no implicit multiplication, and `/` only appears inside rational
//! literals. Every identifier must be a variable of the target ring.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::poly::{Poly, Ring};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {position}: {kind}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    Lexical(char),
    #[error("undeclared identifier `{0}`")]
    UndeclaredIdentifier(String),
    #[error("exponent must be a nonnegative integer literal, found a negative exponent")]
    NegativeExponent,
    #[error("exponent must be a nonnegative integer literal")]
    NonIntegerExponent,
    #[error("exponent too large")]
    ExponentTooLarge,
    #[error("zero denominator in rational literal")]
    ZeroDenominator,
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: &'static str, found: String },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ratio(BigInt, BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number `{n}`"),
            Tok::Ratio(n, d) => format!("number `{n}/{d}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |position, kind| ParseError { position, kind };
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '^' => out.push((start, Tok::Caret)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let num: BigInt = text[start..i].parse().unwrap();
                if i < bytes.len() && bytes[i] == b'/' {
                    let dstart = i + 1;
                    let mut j = dstart;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j == dstart {
                        return Err(err(i, ParseErrorKind::Lexical('/')));
                    }
                    let den: BigInt = text[dstart..j].parse().unwrap();
                    if den.is_zero() {
                        return Err(err(dstart, ParseErrorKind::ZeroDenominator));
                    }
                    out.push((start, Tok::Ratio(num, den)));
                    i = j;
                } else {
                    out.push((start, Tok::Int(num)));
                }
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap();
                return Err(err(start, ParseErrorKind::Lexical(ch)));
            }
        }
        i += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    ring: &'a Ring,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        ParseError {
            position: self.offset(),
            kind: ParseErrorKind::Unexpected {
                expected,
                found: self.peek().describe(),
            },
        }
    }

    fn sum(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.product()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let err = |kind| ParseError { position: at, kind };
        match self.bump() {
            Tok::Int(n) => {
                let e: u32 = n.try_into().map_err(|_| err(ParseErrorKind::ExponentTooLarge))?;
                if e > 10_000 {
                    return Err(err(ParseErrorKind::ExponentTooLarge));
                }
                Ok(base.pow(e))
            }
            Tok::Minus => Err(err(ParseErrorKind::NegativeExponent)),
            Tok::Ratio(..) | Tok::Ident(_) | Tok::LParen => Err(err(ParseErrorKind::NonIntegerExponent)),
            other => Err(ParseError {
                position: at,
                kind: ParseErrorKind::Unexpected {
                    expected: "an exponent",
                    found: other.describe(),
                },
            }),
        }
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Poly::constant(self.ring, Rational::from_integer(n)))
            }
            Tok::Ratio(n, d) => {
                self.bump();
                Ok(Poly::constant(self.ring, Rational::new(n, d)))
            }
            Tok::Ident(name) => {
                self.bump();
                Poly::var_named(self.ring, &name).map_err(|_| ParseError {
                    position: at,
                    kind: ParseErrorKind::UndeclaredIdentifier(name),
                })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.sum()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected("a number, variable or `(`")),
        }
    }
}

/// Parse `text` into a polynomial of `ring`.
pub fn parse_poly(text: &str, ring: &Ring) -> Result<Poly, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, ring };
    let out = p.sum()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r() -> Ring {
        Ring::xyz()
    }

    #[test]
    fn basic_expressions() {
        let a = parse_poly("x*z - y^2", &r()).unwrap();
        assert_eq!(a.to_string(), "x*z - y^2");
        let b = parse_poly("1/2*x^2 + -3*y", &r()).unwrap();
        assert_eq!(b.to_string(), "1/2*x^2 - 3*y");
    }

    #[test]
    fn precedence() {
        // -x^2 is -(x^2); (x+1)^2 expands
        assert_eq!(parse_poly("-x^2", &r()).unwrap().to_string(), "-x^2");
        assert_eq!(parse_poly("(x+1)^2", &r()).unwrap().to_string(), "x^2 + 2*x + 1");
        assert_eq!(parse_poly("2*-3*x", &r()).unwrap().to_string(), "-6*x");
        assert_eq!(parse_poly("x - y - z", &r()).unwrap().to_string(), "x - y - z");
    }

    #[test]
    fn implicit_multiplication_is_rejected() {
        let e = parse_poly("x y", &r()).unwrap_err();
        assert_eq!(e.position, 2);
        assert!(matches!(e.kind, ParseErrorKind::Unexpected { .. }));
    }

    #[test]
    fn error_kinds() {
        assert_eq!(parse_poly("x + w", &r()).unwrap_err().kind, ParseErrorKind::UndeclaredIdentifier("w".into()));
        assert_eq!(parse_poly("x^-1", &r()).unwrap_err().kind, ParseErrorKind::NegativeExponent);
        assert_eq!(parse_poly("x^1/2", &r()).unwrap_err().kind, ParseErrorKind::NonIntegerExponent);
        assert_eq!(parse_poly("x $ y", &r()).unwrap_err(), ParseError { position: 2, kind: ParseErrorKind::Lexical('$') });
        assert_eq!(parse_poly("1/0", &r()).unwrap_err().kind, ParseErrorKind::ZeroDenominator);
        assert!(parse_poly("(x + y", &r()).is_err());
        assert!(parse_poly("", &r()).is_err());
    }
}
