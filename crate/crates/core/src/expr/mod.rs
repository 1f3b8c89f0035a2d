//! Exact symbolic expressions over rational constants.
//!
//! [`Expr`] is an immutable, reference-counted tree. Constructors apply a
//! small set of eager simplifications (constant folding, flattening of nested
//! sums and products, the additive/multiplicative identities) but never
//! distribute; expansion happens only in [`canonicalize`].

mod canonical;
mod compile;
mod diff;
mod eval;
mod parse;
mod poly;
mod print;
mod subst;

use std::collections::BTreeSet;
use std::fmt;
use std::ops;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use canonical::{
    canonicalize, canonicalize_all, canonicalize_in, semantically_equal, CanonicalRational, VarOrder,
};
pub use compile::CompiledExprs;
pub use eval::{evaluate, Binding, Value};
pub use parse::{parse, parse_rational, ParseError};
pub use poly::{Monomial, Poly};

/// Exact rational number used for every constant.
pub type Rational = BigRational;

/// Node of an expression tree.
#[derive(Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Const(Rational),
    Symbol(Arc<str>),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Expr, i64),
    Div(Expr, Expr),
}

/// Immutable symbolic expression.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Expr(Arc<Node>);

impl Expr {
    pub fn node(&self) -> &Node {
        &self.0
    }

    /// Address of the shared node, used as a memo key while walking DAGs.
    pub(crate) fn ptr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    fn from_node(node: Node) -> Expr {
        Expr(Arc::new(node))
    }

    pub fn constant(value: Rational) -> Expr {
        Expr::from_node(Node::Const(value))
    }

    pub fn int(value: i64) -> Expr {
        Expr::constant(Rational::from_integer(BigInt::from(value)))
    }

    pub fn ratio(numer: i64, denom: i64) -> Expr {
        Expr::constant(Rational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn symbol(name: &str) -> Expr {
        Expr::from_node(Node::Symbol(Arc::from(name)))
    }

    pub fn as_const(&self) -> Option<&Rational> {
        match self.node() {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_symbol(&self) -> Option<&str> {
        match self.node() {
            Node::Symbol(s) => Some(s),
            _ => None,
        }
    }

    /// True when the expression is literally the constant zero. This is a
    /// structural test; use [`semantically_equal`] for the semantic one.
    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_const().is_some_and(|c| c.is_one())
    }

    /// Sum with flattening and constant folding. The folded constant takes
    /// the position of the first constant term, so source order survives
    /// printing.
    pub fn add(terms: Vec<Expr>) -> Expr {
        let mut constant = Rational::zero();
        let mut slot = None;
        let mut rest = Vec::with_capacity(terms.len());
        let mut take = |t: &Expr, rest: &mut Vec<Expr>| match t.node() {
            Node::Const(c) => {
                constant += c;
                slot.get_or_insert(rest.len());
            }
            _ => rest.push(t.clone()),
        };
        for term in &terms {
            match term.node() {
                Node::Add(inner) => inner.iter().for_each(|t| take(t, &mut rest)),
                _ => take(term, &mut rest),
            }
        }
        if !constant.is_zero() {
            rest.insert(slot.unwrap_or(rest.len()), Expr::constant(constant));
        }
        match rest.len() {
            0 => Expr::zero(),
            1 => rest.pop().unwrap(),
            _ => Expr::from_node(Node::Add(rest)),
        }
    }

    /// Product with flattening and constant folding; the folded constant
    /// (when not 1) is placed first.
    pub fn mul(factors: Vec<Expr>) -> Expr {
        let mut constant = Rational::one();
        let mut rest = Vec::with_capacity(factors.len() + 1);
        for factor in factors {
            match factor.node() {
                Node::Const(c) => constant *= c,
                Node::Mul(inner) => {
                    for f in inner {
                        match f.node() {
                            Node::Const(c) => constant *= c,
                            _ => rest.push(f.clone()),
                        }
                    }
                }
                _ => rest.push(factor),
            }
        }
        if constant.is_zero() {
            return Expr::zero();
        }
        if rest.is_empty() {
            return Expr::constant(constant);
        }
        if !constant.is_one() {
            rest.insert(0, Expr::constant(constant));
        }
        if rest.len() == 1 {
            rest.pop().unwrap()
        } else {
            Expr::from_node(Node::Mul(rest))
        }
    }

    /// Integer power.
    pub fn pow(base: Expr, exponent: i64) -> Expr {
        if exponent == 0 {
            return Expr::one();
        }
        if exponent == 1 {
            return base;
        }
        match base.node() {
            Node::Const(c) if !c.is_zero() || exponent > 0 => {
                Expr::constant(rational_pow(c, exponent))
            }
            Node::Pow(inner, k) => Expr::pow(inner.clone(), k * exponent),
            _ => Expr::from_node(Node::Pow(base, exponent)),
        }
    }

    /// Quotient. Division by a nonzero constant becomes a scaled product;
    /// division by the literal constant zero is kept so that evaluation can
    /// report it.
    pub fn div(numer: Expr, denom: Expr) -> Expr {
        if let Some(d) = denom.as_const() {
            if d.is_zero() {
                return Expr::from_node(Node::Div(numer, denom));
            }
            let inv = d.recip();
            return Expr::mul(vec![Expr::constant(inv), numer]);
        }
        if numer.is_zero() {
            return Expr::zero();
        }
        Expr::from_node(Node::Div(numer, denom))
    }

    pub fn neg(e: Expr) -> Expr {
        Expr::mul(vec![Expr::int(-1), e])
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::add(vec![a, Expr::neg(b)])
    }

    /// Free symbols in sorted order.
    pub fn free_symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut seen = std::collections::HashSet::new();
        collect_symbols(self, &mut out, &mut seen);
        out
    }

    pub fn contains_symbol(&self, name: &str) -> bool {
        self.free_symbols().contains(name)
    }

    /// Number of distinct nodes in the DAG.
    pub fn node_count(&self) -> usize {
        fn walk(e: &Expr, seen: &mut std::collections::HashSet<usize>) {
            if !seen.insert(e.ptr()) {
                return;
            }
            match e.node() {
                Node::Add(ts) | Node::Mul(ts) => ts.iter().for_each(|t| walk(t, seen)),
                Node::Pow(b, _) => walk(b, seen),
                Node::Div(n, d) => {
                    walk(n, seen);
                    walk(d, seen);
                }
                _ => {}
            }
        }
        let mut seen = std::collections::HashSet::new();
        walk(self, &mut seen);
        seen.len()
    }

    /// Every denominator appearing in the tree, including bases raised to a
    /// negative power.
    pub fn denominators(&self) -> Vec<Expr> {
        fn walk(e: &Expr, seen: &mut std::collections::HashSet<usize>, out: &mut Vec<Expr>) {
            if !seen.insert(e.ptr()) {
                return;
            }
            match e.node() {
                Node::Add(ts) | Node::Mul(ts) => ts.iter().for_each(|t| walk(t, seen, out)),
                Node::Pow(b, k) => {
                    if *k < 0 {
                        out.push(b.clone());
                    }
                    walk(b, seen, out);
                }
                Node::Div(n, d) => {
                    out.push(d.clone());
                    walk(n, seen, out);
                    walk(d, seen, out);
                }
                _ => {}
            }
        }
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        walk(self, &mut seen, &mut out);
        out
    }

    pub fn differentiate(&self, var: &str) -> Expr {
        diff::differentiate(self, var)
    }
}

fn collect_symbols(
    e: &Expr,
    out: &mut BTreeSet<String>,
    seen: &mut std::collections::HashSet<usize>,
) {
    if !seen.insert(e.ptr()) {
        return;
    }
    match e.node() {
        Node::Const(_) => {}
        Node::Symbol(s) => {
            out.insert(s.to_string());
        }
        Node::Add(ts) | Node::Mul(ts) => ts.iter().for_each(|t| collect_symbols(t, out, seen)),
        Node::Pow(b, _) => collect_symbols(b, out, seen),
        Node::Div(n, d) => {
            collect_symbols(n, out, seen);
            collect_symbols(d, out, seen);
        }
    }
}

pub(crate) fn rational_pow(base: &Rational, exponent: i64) -> Rational {
    let mag = exponent.unsigned_abs();
    let mut acc = Rational::one();
    for _ in 0..mag {
        acc *= base;
    }
    if exponent < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// `∂e/∂v`.
pub fn differentiate(e: &Expr, var: &str) -> Expr {
    diff::differentiate(e, var)
}

pub use subst::substitute;

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_expr(f, self, 0)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

impl From<i64> for Expr {
    fn from(v: i64) -> Self {
        Expr::int(v)
    }
}

impl From<Rational> for Expr {
    fn from(v: Rational) -> Self {
        Expr::constant(v)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $build:expr) => {
        impl ops::$trait<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $build(self, rhs)
            }
        }
        impl ops::$trait<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                $build(self, rhs.clone())
            }
        }
        impl ops::$trait<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $build(self.clone(), rhs)
            }
        }
        impl ops::$trait<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                $build(self.clone(), rhs.clone())
            }
        }
    };
}

binop!(Add, add, |a, b| Expr::add(vec![a, b]));
binop!(Sub, sub, Expr::sub);
binop!(Mul, mul, |a, b| Expr::mul(vec![a, b]));
binop!(Div, div, Expr::div);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

impl ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_fold_and_flatten() {
        let x = Expr::symbol("x");
        let e = Expr::add(vec![Expr::int(2), Expr::add(vec![x.clone(), Expr::int(-2)])]);
        assert_eq!(e, x);
        let p = Expr::mul(vec![Expr::int(3), Expr::mul(vec![Expr::ratio(1, 3), x.clone()])]);
        assert_eq!(p, x);
        assert!(Expr::mul(vec![x.clone(), Expr::zero()]).is_zero());
        assert_eq!(Expr::pow(x.clone(), 1), x);
        assert!(Expr::pow(x.clone(), 0).is_one());
        assert_eq!(Expr::pow(Expr::ratio(2, 3), -2), Expr::ratio(9, 4));
        assert_eq!(Expr::pow(Expr::pow(x.clone(), 2), 3), Expr::pow(x.clone(), 6));
    }

    #[test]
    fn division_rules() {
        let x = Expr::symbol("x");
        assert_eq!(Expr::div(x.clone(), Expr::one()), x);
        assert!(Expr::div(Expr::zero(), x.clone()).is_zero());
        // kept so evaluation reports the zero denominator
        assert!(matches!(Expr::div(x.clone(), Expr::zero()).node(), Node::Div(..)));
        assert_eq!(Expr::div(x.clone(), Expr::int(2)), Expr::mul(vec![Expr::ratio(1, 2), x]));
    }

    #[test]
    fn free_symbols_sorted() {
        let e = parse("y2*x1 + a/(b - x1)").unwrap();
        let names: Vec<_> = e.free_symbols().into_iter().collect();
        assert_eq!(names, ["a", "b", "x1", "y2"]);
    }
}
