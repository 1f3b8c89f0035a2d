//! Symbol substitution. The result is rebuilt through the folding
//! constructors, so substituting zero collapses products immediately.

use std::collections::HashMap;

use super::{Expr, Node};

/// Replaces every bound symbol; unbound symbols are left untouched.
pub fn substitute(e: &Expr, bindings: &HashMap<String, Expr>) -> Expr {
    if bindings.is_empty() {
        return e.clone();
    }
    let mut memo = HashMap::new();
    subst(e, bindings, &mut memo)
}

fn subst(e: &Expr, b: &HashMap<String, Expr>, memo: &mut HashMap<usize, Expr>) -> Expr {
    if let Some(r) = memo.get(&e.ptr()) {
        return r.clone();
    }
    let r = match e.node() {
        Node::Const(_) => e.clone(),
        Node::Symbol(s) => b.get(&**s).cloned().unwrap_or_else(|| e.clone()),
        Node::Add(ts) => Expr::add(ts.iter().map(|t| subst(t, b, memo)).collect()),
        Node::Mul(fs) => Expr::mul(fs.iter().map(|f| subst(f, b, memo)).collect()),
        Node::Pow(base, k) => Expr::pow(subst(base, b, memo), *k),
        Node::Div(n, d) => Expr::div(subst(n, b, memo), subst(d, b, memo)),
    };
    memo.insert(e.ptr(), r.clone());
    r
}
