//! Numeric fixed points: Newton from a seed grid on the cleared numerators
//! of `G^i(μ, x, 0)`.

use std::cmp::Ordering;
use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{canonicalize_all, substitute, Binding, CompiledExprs, Expr, Poly, Value, VarOrder};
use crate::kcc::Model;

/// Acceptance bound on the relative backward error of the cleared
/// numerators: `|G^{i,1}(x̄)| / Σ_m |c_m x̄^m|`.
pub const RESIDUAL_BOUND: f64 = 1e-10;
/// Smallest admissible denominator magnitude at a fixed point.
pub const DENOM_MARGIN: f64 = 1e-8;
/// Max-norm radius under which two roots are the same point.
pub const DEDUP_RADIUS: f64 = 1e-6;

const MAX_NEWTON_ITERS: usize = 100;
const DIVERGENCE_NORM: f64 = 1e12;

/// A state `(x̄, 0)` where every `G^i` vanishes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixedPoint {
    pub x: Vec<f64>,
    /// `max_i |G^i(μ, x̄, 0)|`.
    pub residual: f64,
    /// Largest relative backward error of the cleared numerators.
    pub backward_error: f64,
    /// Smallest `|denominator|` met while evaluating the `G^i` at `(x̄, 0)`.
    pub denom_margin: f64,
}

/// Axis-aligned search region.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl SearchBox {
    /// `[lo, hi]ⁿ`.
    pub fn cube(n: usize, lo: f64, hi: f64) -> SearchBox {
        SearchBox { lo: vec![lo; n], hi: vec![hi; n] }
    }

    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<SearchBox> {
        if lo.len() != hi.len() {
            return Err(Error::Dimension("search box bounds differ in length".into()));
        }
        if lo.iter().zip(&hi).any(|(l, h)| !(l < h) || !l.is_finite() || !h.is_finite()) {
            return Err(Error::InvalidArgument("search box must satisfy lo < hi on every axis".into()));
        }
        Ok(SearchBox { lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// Membership with a relative slack so roots on the boundary survive.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (l, h))| {
            let slack = 1e-9 * (1.0 + v.abs());
            *v >= l - slack && *v <= h + slack
        })
    }

    /// `seeds` points per axis including both endpoints, in row-major order.
    pub fn grid(&self, seeds: usize) -> Vec<Vec<f64>> {
        let axes: Vec<Vec<f64>> = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| match seeds {
                0 => Vec::new(),
                1 => vec![0.5 * (l + h)],
                s => (0..s).map(|k| l + (h - l) * k as f64 / (s - 1) as f64).collect(),
            })
            .collect();
        let mut points = vec![Vec::new()];
        for axis in &axes {
            points = points
                .into_iter()
                .flat_map(|p| {
                    axis.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        points
    }
}

/// The `y = 0` restriction of a model at fixed parameters, compiled for
/// repeated numeric evaluation.
pub(crate) struct RestrictedSystem {
    /// Numerators `G^{i,1}` and their Jacobian, row-major after them.
    numer: CompiledExprs,
    /// The `G^i` themselves with `y = 0`.
    g: CompiledExprs,
    /// Numerators with every coefficient replaced by its magnitude.
    magnitude: CompiledExprs,
    n: usize,
}

/// Exact substitutions for the parameters and `y = 0`.
pub(crate) fn exact_point_substitutions(model: &Model, params: &Binding) -> Result<HashMap<String, Expr>> {
    let bound = model.bind_params(params)?;
    let mut subs = HashMap::new();
    for (name, v) in bound.iter() {
        let r = match v {
            Value::Exact(r) => r.clone(),
            Value::Float(f) => BigRational::from_float(*f)
                .ok_or_else(|| Error::InvalidArgument(format!("parameter `{name}` is not finite")))?,
        };
        subs.insert(name.clone(), Expr::constant(r));
    }
    for y in &model.velocities {
        subs.insert(y.clone(), Expr::zero());
    }
    Ok(subs)
}

impl RestrictedSystem {
    pub(crate) fn new(model: &Model, params: &Binding) -> Result<RestrictedSystem> {
        let n = model.dim();
        let subs = exact_point_substitutions(model, params)?;
        let g0: Vec<Expr> = model.g.iter().map(|g| substitute(g, &subs)).collect();
        let order = VarOrder::new(&model.vars);
        let canon = canonicalize_all(&g0, &order)?;
        let names = canon.first().map(|c| c.order().names().to_vec()).unwrap_or_default();
        let numers: Vec<_> = canon.iter().map(|c| c.numer.clone()).collect();
        let mut exprs: Vec<Expr> = numers.iter().map(|p| p.to_expr(&names)).collect();
        for p in &numers {
            for j in 0..n {
                exprs.push(p.derivative(j).to_expr(&names));
            }
        }
        let magnitude: Vec<Expr> = numers
            .iter()
            .map(|p| {
                let nv = p.nvars();
                p.terms()
                    .fold(Poly::zero(nv), |acc, (m, c)| acc.add(&Poly::monomial(m.clone(), c.abs())))
                    .to_expr(&names)
            })
            .collect();
        let empty = Binding::new();
        Ok(RestrictedSystem {
            magnitude: CompiledExprs::new(&magnitude, &model.vars, &empty)?,
            numer: CompiledExprs::new(&exprs, &model.vars, &empty)?,
            g: CompiledExprs::new(&g0, &model.vars, &empty)?,
            n,
        })
    }

    /// `(max |G^i(x, 0)|, denominator margin)`.
    pub(crate) fn residual(&self, x: &[f64]) -> (f64, f64) {
        let (vals, margin) = self.g.eval_vec(x);
        let r = vals.iter().fold(0.0f64, |m, v| if v.is_nan() { f64::NAN } else { m.max(v.abs()) });
        (r, margin)
    }

    /// `max_i |G^{i,1}(x)| / Σ_m |c_m||x|^m`, zero where a numerator
    /// vanishes exactly.
    pub(crate) fn backward_error(&self, x: &[f64]) -> f64 {
        let mut buf = vec![0.0; self.numer.num_outputs()];
        self.numer.eval(x, &mut buf);
        let ax: Vec<f64> = x.iter().map(|v| v.abs()).collect();
        let (scale, _) = self.magnitude.eval_vec(&ax);
        buf[..self.n].iter().zip(&scale).fold(0.0f64, |m, (r, s)| {
            let e = if *r == 0.0 { 0.0 } else { r.abs() / s };
            if e.is_nan() { f64::NAN } else { m.max(e) }
        })
    }

    fn newton_step(&self, x: &[f64], buf: &mut [f64]) -> Option<(DVector<f64>, f64)> {
        let n = self.n;
        self.numer.eval(x, buf);
        let f = DVector::from_column_slice(&buf[..n]);
        let jac = DMatrix::from_row_slice(n, n, &buf[n..]);
        if !f.iter().chain(jac.iter()).all(|v| v.is_finite()) {
            return None;
        }
        let fnorm = f.amax();
        if fnorm == 0.0 {
            return Some((DVector::zeros(n), 0.0));
        }
        let dx = jac.lu().solve(&(-f))?;
        if !dx.iter().all(|v| v.is_finite()) {
            return None;
        }
        Some((dx, fnorm))
    }

    fn numer_norm(&self, x: &[f64], buf: &mut [f64]) -> f64 {
        self.numer.eval(x, buf);
        buf[..self.n].iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Damped Newton from `seed`; `None` when the Jacobian is singular or
    /// the iterate runs off to infinity.
    pub(crate) fn newton(&self, seed: &[f64]) -> Option<Vec<f64>> {
        let mut buf = vec![0.0; self.numer.num_outputs()];
        let mut x = seed.to_vec();
        for _ in 0..MAX_NEWTON_ITERS {
            let (dx, fnorm) = self.newton_step(&x, &mut buf)?;
            if fnorm == 0.0 {
                return Some(x);
            }
            // halve the step until the numerator norm does not grow
            let mut lambda = 1.0;
            let mut trial: Vec<f64>;
            loop {
                trial = x.iter().zip(dx.iter()).map(|(a, d)| a + lambda * d).collect();
                let tn = self.numer_norm(&trial, &mut buf);
                if tn.is_finite() && tn <= fnorm || lambda < 1e-4 {
                    break;
                }
                lambda *= 0.5;
            }
            let step = dx.amax() * lambda;
            let scale = 1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            x = trial;
            if !x.iter().all(|v| v.is_finite() && v.abs() < DIVERGENCE_NORM) {
                return None;
            }
            if step <= 1e-15 * scale {
                return Some(x);
            }
        }
        // stalled at rounding level; the residual checks decide
        Some(x)
    }
}

fn lex(a: &[f64], b: &[f64]) -> Ordering {
    a.iter().zip(b).map(|(u, v)| u.total_cmp(v)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

fn max_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (u, v)| m.max((u - v).abs()))
}

/// Fixed points of `model` inside `search_box`, found by Newton from a grid
/// of `seeds` points per axis. Points on a denominator zero set, outside the
/// box, or with a large residual are dropped; the rest are deduplicated and
/// sorted lexicographically.
pub fn find_fixed_points(
    model: &Model,
    params: &Binding,
    search_box: &SearchBox,
    seeds: usize,
) -> Result<Vec<FixedPoint>> {
    if search_box.dim() != model.dim() {
        return Err(Error::Dimension(format!(
            "search box has {} axes for a {}-dimensional model",
            search_box.dim(),
            model.dim()
        )));
    }
    let sys = RestrictedSystem::new(model, params)?;
    let found: Vec<Vec<f64>> =
        search_box.grid(seeds).par_iter().filter_map(|s| sys.newton(s)).collect();
    let mut accepted: Vec<FixedPoint> = found
        .into_iter()
        .filter(|x| search_box.contains(x))
        .filter_map(|x| {
            let (residual, denom_margin) = sys.residual(&x);
            let backward_error = sys.backward_error(&x);
            (backward_error <= RESIDUAL_BOUND && denom_margin > DENOM_MARGIN)
                .then_some(FixedPoint { x, residual, backward_error, denom_margin })
        })
        .collect();
    accepted.sort_by(|a, b| lex(&a.x, &b.x));
    let mut out: Vec<FixedPoint> = Vec::new();
    for fp in accepted {
        match out.iter_mut().find(|q| max_dist(&q.x, &fp.x) < DEDUP_RADIUS) {
            Some(q) if fp.residual < q.residual => *q = fp,
            Some(_) => {}
            None => out.push(fp),
        }
    }
    out.sort_by(|a, b| lex(&a.x, &b.x));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn grid_includes_endpoints() {
        let b = SearchBox::cube(2, -1.0, 1.0);
        let g = b.grid(3);
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], vec![-1.0, -1.0]);
        assert_eq!(g[8], vec![1.0, 1.0]);
        assert_eq!(b.grid(1), vec![vec![0.0, 0.0]]);
    }

    #[test]
    fn degenerate_box_rejected() {
        assert!(SearchBox::new(vec![1.0], vec![1.0]).is_err());
    }

    #[test]
    fn cubic_roots() {
        // ẍ + x(x² − 1) = 0 has fixed points −1, 0, 1
        let m = Model::new("cubic", vec!["x1".into()], vec![], vec![parse("x1*(x1^2 - 1)/2").unwrap()])
            .unwrap();
        let fps = find_fixed_points(&m, &Binding::new(), &SearchBox::cube(1, -3.0, 3.0), 9).unwrap();
        let xs: Vec<f64> = fps.iter().map(|f| f.x[0]).collect();
        assert_eq!(xs.len(), 3);
        for (got, want) in xs.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn rational_model_roots() {
        let m = Model::new("rat", vec!["x1".into()], vec![], vec![parse("1/x1 + x1 - 5/2").unwrap()])
            .unwrap();
        let fps = find_fixed_points(&m, &Binding::new(), &SearchBox::cube(1, -3.0, 3.0), 9).unwrap();
        let xs: Vec<f64> = fps.iter().map(|f| f.x[0]).collect();
        assert_eq!(xs.len(), 2);
        assert!((xs[0] - 0.5).abs() < 1e-12 && (xs[1] - 2.0).abs() < 1e-12);
        assert!(fps.iter().all(|f| f.denom_margin > DENOM_MARGIN));
    }
}
