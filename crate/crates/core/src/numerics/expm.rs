//! Matrix exponential by scaling and squaring with a truncated Taylor
//! series, and the closed-form deviation solution it yields.

use nalgebra::{DMatrix, DVector};

use super::integrate::{check_w, deviation_names};
use super::trace::Trace;
use crate::error::{Error, Result};
use crate::kcc::NumericDeviation;

/// Relative truncation tolerance of the final result.
pub const EXPM_RTOL: f64 = 1e-12;
const MAX_TERMS: usize = 64;

fn norm1(a: &DMatrix<f64>) -> f64 {
    a.column_iter().map(|c| c.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// `exp(A)` for a square matrix with finite entries.
pub fn expm(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Dimension("exponential of a non-square matrix".into()));
    }
    if let Some(k) = a.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(k % n, k / n));
    }
    let norm = norm1(a);
    // bring the norm under 1/2
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a / 2f64.powi(s);
    // each squaring can double the relative error
    let tol = EXPM_RTOL * 2f64.powi(-s) * 1e-2;
    let mut sum = DMatrix::<f64>::identity(n, n);
    let mut term = DMatrix::<f64>::identity(n, n);
    for k in 1..=MAX_TERMS {
        term = &term * &scaled / k as f64;
        sum += &term;
        if norm1(&term) <= tol * norm1(&sum) {
            break;
        }
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    Ok(sum)
}

/// `(ξ, ξ̇)(t) = exp(A t)·(0, W)` at each of `times`.
pub fn matrix_exp_solution(dev: &NumericDeviation, w: &[f64], times: &[f64]) -> Result<Trace> {
    let n = dev.dim();
    check_w(w, n)?;
    let a = dev.block();
    let mut v0 = DVector::zeros(2 * n);
    for i in 0..n {
        v0[n + i] = w[i];
    }
    let states = times
        .iter()
        .map(|&t| Ok((expm(&(&a * t))? * &v0).as_slice().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    let dt = if times.len() > 1 { times[1] - times[0] } else { 0.0 };
    Ok(Trace { times: times.to_vec(), states, names: deviation_names(n), dt, method: "expm".into() })
}

/// `0, dt, …` up to the first grid time at or past `t_end`.
pub fn uniform_times(t_end: f64, dt: f64) -> Result<Vec<f64>> {
    let steps = super::trace::grid_steps(t_end, dt)?;
    Ok((0..=steps).map(|k| k as f64 * dt).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix_gives_linear_growth() {
        let dev = NumericDeviation { a21: DMatrix::zeros(2, 2), a22: DMatrix::zeros(2, 2) };
        let tr = matrix_exp_solution(&dev, &[1.0, -2.0], &[0.0, 0.5, 3.0]).unwrap();
        assert_eq!(tr.states[2], vec![3.0, -6.0, 1.0, -2.0]);
    }

    #[test]
    fn rotation() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]) * 7.0;
        let e = expm(&a).unwrap();
        let want = DMatrix::from_row_slice(2, 2, &[7f64.cos(), -7f64.sin(), 7f64.sin(), 7f64.cos()]);
        assert!((e - want).amax() < 1e-13);
    }

    #[test]
    fn quarter_spring_closed_form() {
        let dev = NumericDeviation { a21: DMatrix::identity(1, 1) * -0.25, a22: DMatrix::zeros(1, 1) };
        let times: Vec<f64> = (0..=100).map(|k| k as f64 * 0.1).collect();
        let tr = matrix_exp_solution(&dev, &[0.7], &times).unwrap();
        for (t, s) in times.iter().zip(&tr.states) {
            assert!((s[0] - 1.4 * (t / 2.0).sin()).abs() < 1e-12);
        }
    }
}
