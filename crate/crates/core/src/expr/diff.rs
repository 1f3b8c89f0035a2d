//! Symbolic differentiation. Shared subtrees are differentiated once.

use std::collections::HashMap;

use super::{Expr, Node};

pub(super) fn differentiate(e: &Expr, var: &str) -> Expr {
    let mut memo = HashMap::new();
    diff(e, var, &mut memo)
}

fn diff(e: &Expr, var: &str, memo: &mut HashMap<usize, Expr>) -> Expr {
    if let Some(d) = memo.get(&e.ptr()) {
        return d.clone();
    }
    let d = match e.node() {
        Node::Const(_) => Expr::zero(),
        Node::Symbol(s) => {
            if &**s == var {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Node::Add(terms) => Expr::add(terms.iter().map(|t| diff(t, var, memo)).collect()),
        Node::Mul(factors) => {
            let mut sum = Vec::new();
            for (i, f) in factors.iter().enumerate() {
                let df = diff(f, var, memo);
                if df.is_zero() {
                    continue;
                }
                let mut prod = factors.clone();
                prod[i] = df;
                sum.push(Expr::mul(prod));
            }
            Expr::add(sum)
        }
        Node::Pow(base, k) => {
            let db = diff(base, var, memo);
            if db.is_zero() {
                Expr::zero()
            } else {
                Expr::mul(vec![Expr::int(*k), Expr::pow(base.clone(), k - 1), db])
            }
        }
        Node::Div(n, den) => {
            let dn = diff(n, var, memo);
            let dd = diff(den, var, memo);
            match (dn.is_zero(), dd.is_zero()) {
                (true, true) => Expr::zero(),
                (false, true) => Expr::div(dn, den.clone()),
                (true, false) => {
                    Expr::neg(Expr::div(Expr::mul(vec![n.clone(), dd]), Expr::pow(den.clone(), 2)))
                }
                (false, false) => Expr::div(
                    Expr::sub(Expr::mul(vec![dn, den.clone()]), Expr::mul(vec![n.clone(), dd])),
                    Expr::pow(den.clone(), 2),
                ),
            }
        }
    };
    memo.insert(e.ptr(), d.clone());
    d
}
