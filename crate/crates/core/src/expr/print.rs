use std::fmt;

use num_traits::{One, Signed};

use super::{Expr, Node};

const ADD: u8 = 1;
const MUL: u8 = 2;
const NEG: u8 = 3;
const ATOM: u8 = 5;

fn precedence(e: &Expr) -> u8 {
    match e.node() {
        Node::Const(c) if c.is_negative() => NEG,
        Node::Const(c) if !c.is_integer() => MUL,
        Node::Const(_) | Node::Symbol(_) => ATOM,
        Node::Add(_) => ADD,
        Node::Mul(fs) => match fs[0].as_const() {
            Some(c) if c.is_negative() => NEG,
            _ => MUL,
        },
        Node::Div(..) => MUL,
        Node::Pow(..) => 4,
    }
}

/// Splits a term into (is_negative, negated term) for `a - b` rendering.
fn negated(e: &Expr) -> Option<Expr> {
    match e.node() {
        Node::Const(c) if c.is_negative() => Some(Expr::constant(-c.clone())),
        Node::Mul(fs) => match fs[0].as_const() {
            Some(c) if c.is_negative() => {
                let mut rest = fs.clone();
                rest[0] = Expr::constant(-c.clone());
                Some(Expr::mul(rest))
            }
            _ => None,
        },
        _ => None,
    }
}

pub(super) fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    let wrap = precedence(e) < min_prec;
    if wrap {
        f.write_str("(")?;
    }
    match e.node() {
        Node::Const(c) => write!(f, "{c}")?,
        Node::Symbol(s) => f.write_str(s)?,
        Node::Add(terms) => {
            write_expr(f, &terms[0], ADD)?;
            for t in &terms[1..] {
                match negated(t) {
                    Some(pos) => {
                        f.write_str(" - ")?;
                        write_expr(f, &pos, MUL)?;
                    }
                    None => {
                        f.write_str(" + ")?;
                        write_expr(f, t, MUL)?;
                    }
                }
            }
        }
        Node::Mul(factors) => {
            let mut rest = &factors[..];
            if let Some(c) = factors[0].as_const() {
                if (-c.clone()).is_one() {
                    f.write_str("-")?;
                } else {
                    write!(f, "{c}*")?;
                }
                rest = &factors[1..];
            }
            for (k, factor) in rest.iter().enumerate() {
                if k > 0 {
                    f.write_str("*")?;
                }
                write_expr(f, factor, NEG)?;
            }
        }
        Node::Div(n, d) => {
            write_expr(f, n, MUL)?;
            f.write_str("/")?;
            write_expr(f, d, NEG)?;
        }
        Node::Pow(b, k) => {
            write_expr(f, b, ATOM)?;
            if *k < 0 {
                write!(f, "^({k})")?;
            } else {
                write!(f, "^{k}")?;
            }
        }
    }
    if wrap {
        f.write_str(")")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use crate::expr::{parse, semantically_equal, Expr};

    #[test]
    fn prints_readably() {
        let e = parse("x1^2 + 2*x2").unwrap();
        assert_eq!(e.to_string(), "x1^2 + 2*x2");
        let e = parse("a^2*(1 - y1^2)").unwrap();
        assert_eq!(e.to_string(), "a^2*(1 - y1^2)");
        let e = parse("-x/(y*z) - 3/4*w").unwrap();
        assert_eq!(e.to_string(), "-x/(y*z) - 3/4*w");
        let e = Expr::pow(Expr::symbol("x"), -2);
        assert_eq!(e.to_string(), "x^(-2)");
    }

    #[test]
    fn tricky_round_trips() {
        for src in [
            "a/(b/c)",
            "(a/b)/c",
            "-(a + b)*c",
            "x^(-3)*(y - 1)^2",
            "-1/2*x + (-3)*y",
            "a - (b - c)",
            "(-a)^3",
            "1/(x - y)^2",
        ] {
            let e = parse(src).unwrap();
            let back = parse(&e.to_string()).unwrap();
            assert!(semantically_equal(&e, &back).unwrap(), "{src} -> {e}");
        }
    }
}
