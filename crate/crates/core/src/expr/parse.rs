//! Recursive-descent parser for the model expression language.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | atom ('^' integer)?
//! atom   := identifier | number | '(' expr ')'
//! ```
//!
//! Numbers are decimal integers, decimals (`0.25`) or scientific literals
//! (`1e-5`); all are converted to exact rationals. A quotient of two integer
//! literals such as `83/4` folds to the exact rational. Exponents must be
//! integers, optionally signed or parenthesised (`x^-2`, `x^(-2)`).

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Expr, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at {}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected one of: {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number { value: Rational, integer: bool },
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number { value, .. } => format!("number `{value}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, line, column: col });
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Spanned { tok: Tok::Ident(name), line: start_line, column: start_col });
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            let (value, integer) = decimal_to_rational(&text).ok_or_else(|| ParseError {
                line: start_line,
                column: start_col,
                message: format!("malformed number `{text}`"),
                expected: vec![],
            })?;
            out.push(Spanned {
                tok: Tok::Number { value, integer },
                line: start_line,
                column: start_col,
            });
            continue;
        }
        return Err(ParseError {
            line,
            column: col,
            message: format!("unexpected character `{c}`"),
            expected: vec![],
        });
    }
    out.push(Spanned { tok: Tok::End, line, column: col });
    Ok(out)
}

/// Exact value of a decimal literal; the flag reports whether the literal
/// was written as a plain integer.
fn decimal_to_rational(text: &str) -> Option<(Rational, bool)> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i64>().ok()?),
        None => (text, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().ok()?;
    let scale = exponent - frac_part.len() as i64;
    let ten = Rational::from_integer(BigInt::from(10));
    let value = Rational::from_integer(numer) * super::rational_pow(&ten, scale);
    let integer = !mantissa.contains('.') && exponent == 0;
    Some((value, integer))
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> &Spanned {
        let t = &self.toks[self.pos];
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>, expected: &[&str]) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError {
            line: t.line,
            column: t.column,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    terms.push(self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    terms.push(Expr::neg(self.term()?));
                }
                _ => break,
            }
        }
        Ok(Expr::add(terms))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = Expr::mul(vec![acc, rhs]);
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = Expr::div(acc, rhs);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::neg(self.factor()?));
        }
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let k = self.exponent()?;
            return Ok(Expr::pow(base, k));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let parenthesised = *self.peek() == Tok::LParen;
        if parenthesised {
            self.bump();
        }
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.bump();
        }
        let value = match self.peek().clone() {
            Tok::Number { value, integer } => {
                if !integer || !value.is_integer() {
                    return Err(self.error(
                        format!("non-integer exponent `{value}`"),
                        &["integer exponent"],
                    ));
                }
                let v: i64 = value.to_integer().try_into().map_err(|_| {
                    self.error("exponent out of range", &["integer exponent"])
                })?;
                self.bump();
                v
            }
            other => {
                return Err(self.error(
                    format!("non-integer exponent: found {}", other.describe()),
                    &["integer exponent"],
                ))
            }
        };
        if parenthesised {
            if *self.peek() != Tok::RParen {
                return Err(self.error(format!("found {}", self.peek().describe()), &["`)`"]));
            }
            self.bump();
        }
        Ok(if negative { -value } else { value })
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Expr::symbol(&name))
            }
            Tok::Number { value, .. } => {
                self.bump();
                Ok(Expr::constant(value))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(
                        format!("found {}", self.peek().describe()),
                        &["`)`", "`+`", "`-`", "`*`", "`/`", "`^`"],
                    ));
                }
                self.bump();
                Ok(inner)
            }
            other => Err(self.error(
                format!("found {}", other.describe()),
                &["identifier", "number", "`(`", "`-`"],
            )),
        }
    }
}

/// Parses one expression; the whole input must be consumed.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error(
            format!("unexpected {}", p.peek().describe()),
            &["`+`", "`-`", "`*`", "`/`", "end of input"],
        ));
    }
    Ok(e)
}

/// Parses a rational literal such as `-2017/256`, `0.25` or `1e-5`.
pub fn parse_rational(src: &str) -> Option<Rational> {
    let s = src.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let value = match body.split_once('/') {
        Some((n, d)) => {
            let (n, _) = decimal_to_rational(n.trim())?;
            let (d, _) = decimal_to_rational(d.trim())?;
            if d.is_zero() {
                return None;
            }
            n / d
        }
        None => decimal_to_rational(body)?.0,
    };
    Some(if neg { -value } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Node;

    #[test]
    fn sum_of_power_and_product() {
        let e = parse("x1^2 + 2*x2").unwrap();
        let Node::Add(terms) = e.node() else { panic!("{e:?}") };
        assert!(matches!(terms[0].node(), Node::Pow(b, 2) if b.as_symbol() == Some("x1")));
        let Node::Mul(fs) = terms[1].node() else { panic!() };
        assert_eq!(fs[0], Expr::int(2));
        assert_eq!(fs[1].as_symbol(), Some("x2"));
    }

    #[test]
    fn product_with_negated_power() {
        let e = parse("a^2*(1 - y1^2)").unwrap();
        let Node::Mul(fs) = e.node() else { panic!() };
        assert!(matches!(fs[0].node(), Node::Pow(b, 2) if b.as_symbol() == Some("a")));
        let Node::Add(ts) = fs[1].node() else { panic!() };
        // 1 - y1^2 is stored as Add(-y1^2, 1) once constants are folded
        assert!(ts.iter().any(|t| t.is_one()));
        assert!(ts.iter().any(|t| matches!(t.node(), Node::Mul(m) if m[0] == Expr::int(-1))));
    }

    #[test]
    fn symbolic_exponent_rejected() {
        let err = parse("x^y").unwrap_err();
        assert!(err.message.contains("non-integer exponent"), "{err}");
        assert_eq!((err.line, err.column), (1, 3));
        assert!(parse("x^1.5").unwrap_err().message.contains("non-integer"));
        assert!(parse("x^(2)").is_ok());
        assert_eq!(parse("x^-2").unwrap(), Expr::pow(Expr::symbol("x"), -2));
    }

    #[test]
    fn exact_literals() {
        assert_eq!(parse("0.25").unwrap(), Expr::ratio(1, 4));
        assert_eq!(parse("83/4").unwrap(), Expr::ratio(83, 4));
        assert_eq!(parse("1e-5").unwrap(), Expr::ratio(1, 100_000));
        assert_eq!(parse("2.5E2").unwrap(), Expr::int(250));
        assert_eq!(parse_rational("-2017/256").unwrap(), Rational::new((-2017).into(), 256.into()));
        assert_eq!(parse_rational("0.125").unwrap(), Rational::new(1.into(), 8.into()));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("abc").is_none());
    }

    #[test]
    fn errors_carry_location_and_expectations() {
        let err = parse("x1 +\n  * 3").unwrap_err();
        assert_eq!((err.line, err.column), (2, 3));
        assert!(err.expected.contains(&"identifier".to_string()));
        let err = parse("(a + b").unwrap_err();
        assert!(err.expected.contains(&"`)`".to_string()));
        assert!(parse("a b").is_err());
        assert!(parse("a $ b").is_err());
    }
}
