//! Canonical numerator/denominator form of rational expressions.
//!
//! Expansion runs bottom-up over the tree. Denominators are never expanded
//! eagerly: each one is split into a monomial part and a product of
//! registered polynomial factors, so sums of fractions share a least common
//! denominator over the registry instead of multiplying denominators out.
//! No multivariate gcd is computed, so two canonical forms of equal
//! functions may still differ by a common factor; equality is decided by
//! cross-multiplication.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use super::{Expr, Node, Poly, Rational};
use crate::error::{Error, Result};
use crate::expr::poly::Monomial;

/// Variable order used for monomial comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarOrder {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl VarOrder {
    pub fn new<S: AsRef<str>>(names: &[S]) -> VarOrder {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let index = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        VarOrder { names, index }
    }

    /// Sorted free symbols of all the given expressions.
    pub fn from_exprs<'a>(exprs: impl IntoIterator<Item = &'a Expr>) -> VarOrder {
        let mut all = std::collections::BTreeSet::new();
        for e in exprs {
            all.extend(e.free_symbols());
        }
        VarOrder::new(&all.into_iter().collect::<Vec<_>>())
    }

    /// This order extended by any symbol of `e` it lacks (sorted).
    pub fn covering(&self, e: &Expr) -> VarOrder {
        let extra: Vec<String> =
            e.free_symbols().into_iter().filter(|s| !self.index.contains_key(s)).collect();
        if extra.is_empty() {
            return self.clone();
        }
        let mut names = self.names.clone();
        names.extend(extra);
        VarOrder::new(&names)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }
}

/// `numer / denom` with the denominator a primitive integer polynomial with
/// positive leading coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct CanonicalRational {
    pub numer: Poly,
    pub denom: Poly,
    order: VarOrder,
}

impl CanonicalRational {
    pub fn order(&self) -> &VarOrder {
        &self.order
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    pub fn to_expr(&self) -> Expr {
        let n = self.numer.to_expr(self.order.names());
        let d = self.denom.to_expr(self.order.names());
        Expr::div(n, d)
    }

    pub fn numer_expr(&self) -> Expr {
        self.numer.to_expr(self.order.names())
    }

    pub fn denom_expr(&self) -> Expr {
        self.denom.to_expr(self.order.names())
    }
}

impl fmt::Display for CanonicalRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

impl fmt::Debug for CanonicalRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.numer_expr(), self.denom_expr())
    }
}

/// Canonical form with variables ordered by sorted symbol name.
pub fn canonicalize(e: &Expr) -> Result<CanonicalRational> {
    let order = VarOrder::from_exprs([e]);
    canonicalize_in(e, &order)
}

/// Canonical form in a given variable order (extended if `e` has symbols
/// the order lacks).
pub fn canonicalize_in(e: &Expr, order: &VarOrder) -> Result<CanonicalRational> {
    let order = order.covering(e);
    let mut c = Canonicalizer::new(&order);
    let r = c.convert(e)?;
    Ok(c.finish(r))
}

/// Canonicalizes several expressions with one shared factor registry.
pub fn canonicalize_all(exprs: &[Expr], order: &VarOrder) -> Result<Vec<CanonicalRational>> {
    let mut order = order.clone();
    for e in exprs {
        order = order.covering(e);
    }
    let mut c = Canonicalizer::new(&order);
    exprs
        .iter()
        .map(|e| {
            let r = c.convert(e)?;
            Ok(c.finish(r))
        })
        .collect()
}

/// `a ≡ b` as rational functions, decided by `num_a·den_b − num_b·den_a = 0`.
pub fn semantically_equal(a: &Expr, b: &Expr) -> Result<bool> {
    let order = VarOrder::from_exprs([a, b]);
    let ca = canonicalize_in(a, &order)?;
    let cb = canonicalize_in(b, &order)?;
    Ok(ca.numer.mul(&cb.denom).sub(&cb.numer.mul(&ca.denom)).is_zero())
}

/// Denominator as monomial times registered factors with multiplicities.
#[derive(Clone, Debug, PartialEq)]
struct Den {
    mono: Monomial,
    factors: BTreeMap<usize, u32>,
}

#[derive(Clone, Debug)]
struct Frac {
    num: Poly,
    den: Den,
}

struct Canonicalizer<'a> {
    order: &'a VarOrder,
    nvars: usize,
    registry: Vec<Poly>,
    memo: HashMap<usize, Frac>,
    inv_memo: HashMap<usize, Frac>,
}

impl<'a> Canonicalizer<'a> {
    fn new(order: &'a VarOrder) -> Self {
        Canonicalizer {
            order,
            nvars: order.len(),
            registry: Vec::new(),
            memo: HashMap::new(),
            inv_memo: HashMap::new(),
        }
    }

    fn unit_den(&self) -> Den {
        Den { mono: Monomial::one(self.nvars), factors: BTreeMap::new() }
    }

    fn poly_frac(&self, p: Poly) -> Frac {
        Frac { num: p, den: self.unit_den() }
    }

    fn convert(&mut self, e: &Expr) -> Result<Frac> {
        if let Some(f) = self.memo.get(&e.ptr()) {
            return Ok(f.clone());
        }
        let f = match e.node() {
            Node::Const(c) => self.poly_frac(Poly::constant(self.nvars, c.clone())),
            Node::Symbol(s) => {
                let i = self.order.position(s).expect("order covers every symbol");
                self.poly_frac(Poly::var(self.nvars, i))
            }
            Node::Add(ts) => {
                let mut acc = self.poly_frac(Poly::zero(self.nvars));
                for t in ts {
                    let ft = self.convert(t)?;
                    acc = self.add(&acc, &ft);
                }
                acc
            }
            Node::Mul(fs) => {
                let mut acc = self.poly_frac(Poly::one(self.nvars));
                for factor in fs {
                    let ff = self.convert(factor)?;
                    acc = self.mul(&acc, &ff);
                    if acc.num.is_zero() {
                        break;
                    }
                }
                acc
            }
            Node::Pow(b, k) => {
                let base = if *k < 0 { self.invert(b)? } else { self.convert(b)? };
                self.pow(&base, k.unsigned_abs() as u32)
            }
            Node::Div(n, d) => {
                let fd = self.invert(d)?;
                let fnum = self.convert(n)?;
                self.mul(&fnum, &fd)
            }
        };
        self.memo.insert(e.ptr(), f.clone());
        Ok(f)
    }

    /// `1/e`, keeping product structure so factors register separately.
    fn invert(&mut self, e: &Expr) -> Result<Frac> {
        if let Some(f) = self.inv_memo.get(&e.ptr()) {
            return Ok(f.clone());
        }
        let f = match e.node() {
            Node::Const(c) => {
                if c.is_zero() {
                    return Err(Error::ZeroPolynomialDivisor(e.to_string()));
                }
                self.poly_frac(Poly::constant(self.nvars, c.recip()))
            }
            Node::Mul(fs) => {
                let mut acc = self.poly_frac(Poly::one(self.nvars));
                for factor in fs {
                    let inv = self.invert(factor)?;
                    acc = self.mul(&acc, &inv);
                }
                acc
            }
            Node::Pow(b, k) => {
                let base = if *k < 0 { self.convert(b)? } else { self.invert(b)? };
                self.pow(&base, k.unsigned_abs() as u32)
            }
            Node::Div(n, d) => {
                let inv_n = self.invert(n)?;
                let fd = self.convert(d)?;
                self.mul(&fd, &inv_n)
            }
            Node::Symbol(_) | Node::Add(_) => {
                let fe = self.convert(e)?;
                if fe.num.is_zero() {
                    return Err(Error::ZeroPolynomialDivisor(e.to_string()));
                }
                let (scale, den) = self.register(&fe.num);
                let num = self.expand_den(&fe.den).scale(&scale.recip());
                Frac { num, den }
            }
        };
        self.inv_memo.insert(e.ptr(), f.clone());
        Ok(f)
    }

    /// Splits a nonzero polynomial into `scale · monomial · Π factors`.
    fn register(&mut self, p: &Poly) -> (Rational, Den) {
        let mono = p.monomial_content();
        let rest = p.div_monomial(&mono).expect("content divides");
        let (scale, mut rest) = rest.primitive();
        let mut factors = BTreeMap::new();
        if rest.as_constant().is_some() {
            return (scale, Den { mono, factors });
        }
        for (i, f) in self.registry.iter().enumerate() {
            if f.total_degree() > rest.total_degree() {
                continue;
            }
            while let Some(q) = rest.exact_div(f) {
                *factors.entry(i).or_insert(0) += 1;
                rest = q;
                if rest.as_constant().is_some() {
                    break;
                }
            }
            if rest.as_constant().is_some() {
                break;
            }
        }
        let mut scale = scale;
        match rest.as_constant() {
            // quotient of primitive polynomials by primitive factors is ±1
            Some(c) => scale *= c,
            None => {
                let (s, prim) = rest.primitive();
                scale *= s;
                self.registry.push(prim);
                factors.insert(self.registry.len() - 1, 1);
            }
        }
        (scale, Den { mono, factors })
    }

    fn expand_den(&self, d: &Den) -> Poly {
        let mut p = Poly::monomial(d.mono.clone(), Rational::one());
        for (&i, &k) in &d.factors {
            p = p.mul(&self.registry[i].pow(k));
        }
        p
    }

    /// `target / d` where `d` divides `target` structurally.
    fn cofactor(&self, d: &Den, target: &Den) -> Poly {
        let mono = target.mono.div(&d.mono).expect("lcm is a multiple");
        let mut p = Poly::monomial(mono, Rational::one());
        for (&i, &k) in &target.factors {
            let have = d.factors.get(&i).copied().unwrap_or(0);
            if k > have {
                p = p.mul(&self.registry[i].pow(k - have));
            }
        }
        p
    }

    fn add(&self, a: &Frac, b: &Frac) -> Frac {
        if a.num.is_zero() {
            return b.clone();
        }
        if b.num.is_zero() {
            return a.clone();
        }
        if a.den == b.den {
            return Frac { num: a.num.add(&b.num), den: a.den.clone() };
        }
        let mut factors = a.den.factors.clone();
        for (&i, &k) in &b.den.factors {
            let e = factors.entry(i).or_insert(0);
            *e = (*e).max(k);
        }
        let den = Den { mono: a.den.mono.lcm(&b.den.mono), factors };
        let na = a.num.mul(&self.cofactor(&a.den, &den));
        let nb = b.num.mul(&self.cofactor(&b.den, &den));
        let num = na.add(&nb);
        if num.is_zero() {
            return self.poly_frac(num);
        }
        Frac { num, den }
    }

    fn mul(&self, a: &Frac, b: &Frac) -> Frac {
        let num = a.num.mul(&b.num);
        if num.is_zero() {
            return self.poly_frac(num);
        }
        let mut factors = a.den.factors.clone();
        for (&i, &k) in &b.den.factors {
            *factors.entry(i).or_insert(0) += k;
        }
        let den = Den { mono: a.den.mono.mul(&b.den.mono), factors };
        cancel_monomial(Frac { num, den })
    }

    fn pow(&self, a: &Frac, k: u32) -> Frac {
        let num = a.num.pow(k);
        let factors = a.den.factors.iter().map(|(&i, &m)| (i, m * k)).collect();
        let mono = Monomial::from_exps(a.den.mono.exps().iter().map(|e| e * k).collect());
        Frac { num, den: Den { mono, factors } }
    }

    fn finish(&self, f: Frac) -> CanonicalRational {
        let mut f = cancel_monomial(f);
        if f.num.is_zero() {
            return CanonicalRational {
                numer: f.num,
                denom: Poly::one(self.nvars),
                order: self.order.clone(),
            };
        }
        let indices: Vec<usize> = f.den.factors.keys().copied().collect();
        for i in indices {
            let factor = &self.registry[i];
            while f.den.factors[&i] > 0 {
                match f.num.exact_div(factor) {
                    Some(q) => {
                        f.num = q;
                        *f.den.factors.get_mut(&i).unwrap() -= 1;
                    }
                    None => break,
                }
            }
        }
        f.den.factors.retain(|_, k| *k > 0);
        CanonicalRational {
            denom: self.expand_den(&f.den),
            numer: f.num,
            order: self.order.clone(),
        }
    }
}

fn cancel_monomial(mut f: Frac) -> Frac {
    if f.den.mono.is_one() {
        return f;
    }
    let g = f.num.monomial_content().gcd(&f.den.mono);
    if !g.is_one() {
        f.num = f.num.div_monomial(&g).expect("gcd divides");
        f.den.mono = f.den.mono.div(&g).expect("gcd divides");
    }
    f
}
