//! First-principles estimate of the deviation vector: integrate the full
//! system from a nudged initial velocity and difference the trajectories.

use super::integrate::{check_w, deviation_names, integrate};
use super::trace::Trace;
use crate::error::{Error, Result};
use crate::expr::Binding;
use crate::kcc::Model;

/// Default nudge size.
pub const DEFAULT_ETA: f64 = 1e-6;

/// `(x̃(t) − x(t))/η` and the matching velocity difference, where `x̃`
/// starts from the same position as `base` with velocity `y(0) + ηW`.
pub fn perturbation_oracle(model: &Model, params: &Binding, base: &Trace, w: &[f64], eta: f64) -> Result<Trace> {
    let n = model.dim();
    check_w(w, n)?;
    if eta == 0.0 || !eta.is_finite() {
        return Err(Error::InvalidArgument(format!("perturbation size must be nonzero and finite, got {eta}")));
    }
    let (s0, t_end) = match (base.states.first(), base.times.last()) {
        (Some(s), Some(&t)) if base.len() >= 2 && s.len() == 2 * n => (s, t),
        _ => return Err(Error::DegenerateTrace("base trajectory needs at least two full states".into())),
    };
    let y0: Vec<f64> = s0[n..].iter().zip(w).map(|(y, wi)| y + eta * wi).collect();
    let nudged = integrate(model, params, &s0[..n], &y0, t_end, base.dt)?;
    if nudged.len() != base.len() {
        return Err(Error::DegenerateTrace("base trajectory is not on a uniform grid from 0".into()));
    }
    let states = nudged
        .states
        .iter()
        .zip(&base.states)
        .map(|(a, b)| a.iter().zip(b).map(|(u, v)| (u - v) / eta).collect())
        .collect();
    Ok(Trace {
        times: base.times.clone(),
        states,
        names: deviation_names(n),
        dt: base.dt,
        method: "perturbation".into(),
    })
}
