//! Point evaluation, exact when every relevant binding is rational.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{ToPrimitive, Zero};

use super::{rational_pow, Expr, Node, Rational};
use crate::error::{Error, Result};

/// A numeric value: exact rational or IEEE double.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Rational),
    Float(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Value::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Float(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => write!(f, "{r}"),
            Value::Float(x) => write!(f, "{x}"),
        }
    }
}

impl From<Rational> for Value {
    fn from(r: Rational) -> Self {
        Value::Exact(r)
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

/// Symbol name to value.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Binding {
    values: BTreeMap<String, Value>,
}

impl Binding {
    pub fn new() -> Binding {
        Binding::default()
    }

    pub fn set(&mut self, name: impl Into<String>, value: impl Into<Value>) -> &mut Self {
        self.values.insert(name.into(), value.into());
        self
    }

    pub fn with(mut self, name: impl Into<String>, value: impl Into<Value>) -> Self {
        self.set(name, value);
        self
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.values.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.values.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.values.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn extend(&mut self, other: &Binding) {
        for (k, v) in &other.values {
            self.values.insert(k.clone(), v.clone());
        }
    }

    /// Exact bindings as constant expressions, for symbolic substitution.
    /// Floating values are skipped.
    pub fn exact_substitutions(&self) -> HashMap<String, Expr> {
        self.values
            .iter()
            .filter_map(|(k, v)| v.as_exact().map(|r| (k.clone(), Expr::constant(r.clone()))))
            .collect()
    }
}

impl<S: Into<String>, V: Into<Value>> FromIterator<(S, V)> for Binding {
    fn from_iter<I: IntoIterator<Item = (S, V)>>(iter: I) -> Self {
        let mut b = Binding::new();
        for (k, v) in iter {
            b.set(k, v);
        }
        b
    }
}

/// Evaluates `e` at `b`. The result is exact when every free symbol of `e`
/// is bound to a rational.
pub fn evaluate(e: &Expr, b: &Binding) -> Result<Value> {
    let syms = e.free_symbols();
    let mut exact = true;
    for s in &syms {
        match b.get(s) {
            None => return Err(Error::UnboundSymbol(s.clone())),
            Some(Value::Float(_)) => exact = false,
            Some(Value::Exact(_)) => {}
        }
    }
    if exact {
        let mut memo = HashMap::new();
        eval_exact(e, b, &mut memo).map(Value::Exact)
    } else {
        let mut memo = HashMap::new();
        eval_float(e, b, &mut memo).map(Value::Float)
    }
}

fn eval_exact(e: &Expr, b: &Binding, memo: &mut HashMap<usize, Rational>) -> Result<Rational> {
    if let Some(v) = memo.get(&e.ptr()) {
        return Ok(v.clone());
    }
    let v = match e.node() {
        Node::Const(c) => c.clone(),
        Node::Symbol(s) => match b.get(s) {
            Some(Value::Exact(r)) => r.clone(),
            _ => return Err(Error::UnboundSymbol(s.to_string())),
        },
        Node::Add(ts) => {
            let mut acc = Rational::zero();
            for t in ts {
                acc += eval_exact(t, b, memo)?;
            }
            acc
        }
        Node::Mul(fs) => {
            let mut acc = Rational::from_integer(1.into());
            for f in fs {
                acc *= eval_exact(f, b, memo)?;
                if acc.is_zero() {
                    break;
                }
            }
            acc
        }
        Node::Pow(base, k) => {
            let v = eval_exact(base, b, memo)?;
            if v.is_zero() && *k < 0 {
                return Err(Error::ZeroDenominator(base.to_string()));
            }
            rational_pow(&v, *k)
        }
        Node::Div(n, d) => {
            let dv = eval_exact(d, b, memo)?;
            if dv.is_zero() {
                return Err(Error::ZeroDenominator(d.to_string()));
            }
            eval_exact(n, b, memo)? / dv
        }
    };
    memo.insert(e.ptr(), v.clone());
    Ok(v)
}

fn eval_float(e: &Expr, b: &Binding, memo: &mut HashMap<usize, f64>) -> Result<f64> {
    if let Some(v) = memo.get(&e.ptr()) {
        return Ok(*v);
    }
    let v = match e.node() {
        Node::Const(c) => c.to_f64().unwrap_or(f64::NAN),
        Node::Symbol(s) => match b.get(s) {
            Some(v) => v.to_f64(),
            None => return Err(Error::UnboundSymbol(s.to_string())),
        },
        Node::Add(ts) => {
            let mut acc = 0.0;
            for t in ts {
                acc += eval_float(t, b, memo)?;
            }
            acc
        }
        Node::Mul(fs) => {
            let mut acc = 1.0;
            for f in fs {
                acc *= eval_float(f, b, memo)?;
            }
            acc
        }
        Node::Pow(base, k) => {
            let v = eval_float(base, b, memo)?;
            if v == 0.0 && *k < 0 {
                return Err(Error::ZeroDenominator(base.to_string()));
            }
            v.powi(*k as i32)
        }
        Node::Div(n, d) => {
            let dv = eval_float(d, b, memo)?;
            if dv == 0.0 {
                return Err(Error::ZeroDenominator(d.to_string()));
            }
            eval_float(n, b, memo)? / dv
        }
    };
    memo.insert(e.ptr(), v);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn exact_polynomial() {
        let e = parse("x1^2 + x2").unwrap();
        let b = Binding::new().with("x1", q(2, 1)).with("x2", q(1, 1));
        assert_eq!(evaluate(&e, &b).unwrap(), Value::Exact(q(5, 1)));
    }

    #[test]
    fn float_when_any_binding_is_float() {
        let e = parse("x/4 + y").unwrap();
        let b = Binding::new().with("x", q(1, 1)).with("y", 0.5);
        assert_eq!(evaluate(&e, &b).unwrap(), Value::Float(0.75));
    }

    #[test]
    fn zero_denominator_reported() {
        let e = parse("1/x1").unwrap();
        let b = Binding::new().with("x1", q(0, 1));
        match evaluate(&e, &b) {
            Err(Error::ZeroDenominator(s)) => assert_eq!(s, "x1"),
            other => panic!("{other:?}"),
        }
        let e = parse("3 + (y - 1)^(-2)").unwrap();
        let b = Binding::new().with("y", 1.0);
        assert!(matches!(evaluate(&e, &b), Err(Error::ZeroDenominator(s)) if s == "y - 1"));
    }

    #[test]
    fn unbound_symbol_reported() {
        let e = parse("a + b").unwrap();
        let b = Binding::new().with("a", q(1, 1));
        assert!(matches!(evaluate(&e, &b), Err(Error::UnboundSymbol(s)) if s == "b"));
    }
}
