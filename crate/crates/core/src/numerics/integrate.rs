//! Classical fourth-order Runge–Kutta on the first-order forms
//! `ẋ = y, ẏ = −2G(x, y)` and `ξ̇ = η, η̇ = A21 ξ + A22 η`.

use nalgebra::{DMatrix, DVector};

use super::trace::{grid_steps, Trace};
use crate::error::{Error, Result};
use crate::expr::{Binding, CompiledExprs};
use crate::kcc::{kcc_deviation, Model, NumericDeviation};

/// Integration stops when a denominator of some `G^i` gets this small.
pub const MIN_DENOMINATOR: f64 = 1e-10;

fn rk4_step(f: &mut impl FnMut(f64, &[f64]) -> Result<Vec<f64>>, t: f64, s: &[f64], h: f64) -> Result<Vec<f64>> {
    let axpy = |a: &[f64], k: &[f64], c: f64| -> Vec<f64> { a.iter().zip(k).map(|(x, d)| x + c * d).collect() };
    let k1 = f(t, s)?;
    let k2 = f(t + 0.5 * h, &axpy(s, &k1, 0.5 * h))?;
    let k3 = f(t + 0.5 * h, &axpy(s, &k2, 0.5 * h))?;
    let k4 = f(t + h, &axpy(s, &k3, h))?;
    Ok(s.iter()
        .enumerate()
        .map(|(i, v)| v + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

fn run(
    mut f: impl FnMut(f64, &[f64]) -> Result<Vec<f64>>,
    s0: Vec<f64>,
    t_end: f64,
    dt: f64,
    names: Vec<String>,
) -> Result<Trace> {
    let steps = grid_steps(t_end, dt)?;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(s0);
    for k in 0..steps {
        let t = k as f64 * dt;
        let next = rk4_step(&mut f, t, &states[k], dt)?;
        if !next.iter().all(|v| v.is_finite()) {
            return Err(Error::IntegrationAborted { t: t + dt, margin: f64::NAN });
        }
        times.push((k + 1) as f64 * dt);
        states.push(next);
    }
    Ok(Trace { times, states, names, dt, method: "rk4".into() })
}

/// Right-hand side of a model at fixed parameters.
pub struct ModelRhs {
    g: CompiledExprs,
    n: usize,
}

impl ModelRhs {
    pub fn new(model: &Model, params: &Binding) -> Result<ModelRhs> {
        let bound = model.bind_params(params)?;
        let g = CompiledExprs::new(&model.g, &model.state_names(), &bound)?;
        Ok(ModelRhs { g, n: model.dim() })
    }

    /// `(y, −2G(x, y))`, failing when a denominator is below
    /// [`MIN_DENOMINATOR`].
    pub fn eval(&self, t: f64, s: &[f64]) -> Result<Vec<f64>> {
        let (g, margin) = self.g.eval_vec(s);
        if margin < MIN_DENOMINATOR || margin.is_nan() {
            return Err(Error::IntegrationAborted { t, margin });
        }
        let mut out = s[self.n..].to_vec();
        out.extend(g.iter().map(|v| -2.0 * v));
        Ok(out)
    }
}

/// Trajectory of `model` from `(x0, y0)` on the grid `0, dt, 2dt, …` up to
/// the first grid time at or past `t_end`.
pub fn integrate(model: &Model, params: &Binding, x0: &[f64], y0: &[f64], t_end: f64, dt: f64) -> Result<Trace> {
    let n = model.dim();
    if x0.len() != n || y0.len() != n {
        return Err(Error::Dimension(format!("initial state must have {n} positions and {n} velocities")));
    }
    grid_steps(t_end, dt)?;
    let rhs = ModelRhs::new(model, params)?;
    let s0: Vec<f64> = x0.iter().chain(y0).copied().collect();
    rhs.eval(0.0, &s0)?;
    run(|t, s| rhs.eval(t, s), s0, t_end, dt, model.state_names())
}

/// Column names `xi1..xin, dxi1..dxin`.
pub fn deviation_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("xi{i}")).chain((1..=n).map(|i| format!("dxi{i}"))).collect()
}

pub(crate) fn check_w(w: &[f64], n: usize) -> Result<()> {
    if w.len() != n {
        return Err(Error::Dimension(format!("initial deviation velocity needs {n} entries")));
    }
    if w.iter().all(|v| *v == 0.0) {
        return Err(Error::InvalidArgument("initial deviation velocity W must be nonzero".into()));
    }
    if !w.iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidArgument("initial deviation velocity W must be finite".into()));
    }
    Ok(())
}

/// RK4 on the constant-coefficient deviation equations with `ξ(0) = 0`,
/// `ξ̇(0) = W`.
pub fn integrate_linear_deviation(dev: &NumericDeviation, w: &[f64], t_end: f64, dt: f64) -> Result<Trace> {
    let n = dev.dim();
    check_w(w, n)?;
    let a: DMatrix<f64> = dev.block();
    let mut s0 = vec![0.0; n];
    s0.extend_from_slice(w);
    let f = |_t: f64, s: &[f64]| Ok((&a * DVector::from_column_slice(s)).as_slice().to_vec());
    let mut tr = run(f, s0, t_end, dt, deviation_names(n))?;
    tr.method = "rk4-deviation".into();
    Ok(tr)
}

/// Deviation vector about the fixed point `(x̄, 0)`, with `A21` and `A22`
/// frozen at that point.
pub fn integrate_deviation(
    model: &Model,
    params: &Binding,
    x_bar: &[f64],
    w: &[f64],
    t_end: f64,
    dt: f64,
) -> Result<Trace> {
    if x_bar.len() != model.dim() {
        return Err(Error::Dimension(format!("base point must have {} entries", model.dim())));
    }
    check_w(w, model.dim())?;
    let bound = model.bind_params(params)?;
    let dev = kcc_deviation(model).at_fixed_point(&bound, x_bar)?;
    integrate_linear_deviation(&dev, w, t_end, dt)
}
