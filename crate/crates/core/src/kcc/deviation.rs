//! Jacobi (deviation) equations `ξ̈ = A21 ξ + A22 ξ̇` of a model.

use nalgebra::DMatrix;

use super::{Matrix, Model};
use crate::error::{Error, Result};
use crate::expr::{evaluate, Binding, Expr, Value};

/// Symbolic deviation system; entries still depend on `x`, `y` and `μ`.
#[derive(Clone, Debug)]
pub struct DeviationSystem {
    /// `A21 = −2 ∂G^i/∂x_j`.
    pub a21: Matrix,
    /// `A22 = −2 N^i_j`.
    pub a22: Matrix,
    vars: Vec<String>,
    velocities: Vec<String>,
}

/// The deviation matrices at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericDeviation {
    pub a21: DMatrix<f64>,
    pub a22: DMatrix<f64>,
}

impl NumericDeviation {
    pub fn dim(&self) -> usize {
        self.a21.nrows()
    }

    /// Block matrix `[[0, I], [A21, A22]]`.
    pub fn block(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut a = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            a[(i, n + i)] = 1.0;
            for j in 0..n {
                a[(n + i, j)] = self.a21[(i, j)];
                a[(n + i, n + j)] = self.a22[(i, j)];
            }
        }
        a
    }
}

/// Builds the deviation system of `model`.
pub fn kcc_deviation(model: &Model) -> DeviationSystem {
    let n = model.dim();
    let mut a21 = vec![Vec::with_capacity(n); n];
    let mut a22 = vec![Vec::with_capacity(n); n];
    for i in 0..n {
        for j in 0..n {
            a21[i].push(Expr::int(-2) * model.g[i].differentiate(&model.vars[j]));
            a22[i].push(Expr::int(-2) * model.g[i].differentiate(&model.velocities[j]));
        }
    }
    DeviationSystem { a21, a22, vars: model.vars.clone(), velocities: model.velocities.clone() }
}

impl DeviationSystem {
    pub fn dim(&self) -> usize {
        self.a21.len()
    }

    /// The `2n × 2n` block matrix `[[0, E], [A21, A22]]`.
    pub fn block(&self) -> Matrix {
        let n = self.dim();
        let mut a = vec![vec![Expr::zero(); 2 * n]; 2 * n];
        for i in 0..n {
            a[i][n + i] = Expr::one();
            for j in 0..n {
                a[n + i][j] = self.a21[i][j].clone();
                a[n + i][n + j] = self.a22[i][j].clone();
            }
        }
        a
    }

    /// One printable equation per component:
    /// `xi_i'' + Σ (2N^i_j) xi_j' + Σ (2∂G^i/∂x_j) xi_j = 0`.
    pub fn residuals(&self) -> Vec<String> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = format!("xi{}''", i + 1);
                for (coeffs, suffix) in [(&self.a22, "'"), (&self.a21, "")] {
                    for j in 0..n {
                        let c = -coeffs[i][j].clone();
                        if c.is_zero() {
                            continue;
                        }
                        s.push_str(&format!(" + ({c})*xi{}{suffix}", j + 1));
                    }
                }
                s.push_str(" = 0");
                s
            })
            .collect()
    }

    /// Evaluates both blocks at `params` plus the given state.
    pub fn at(&self, params: &Binding, x: &[Value], y: &[Value]) -> Result<NumericDeviation> {
        let n = self.dim();
        let mut b = params.clone();
        for (name, v) in self.vars.iter().zip(x) {
            b.set(name.clone(), v.clone());
        }
        for (name, v) in self.velocities.iter().zip(y) {
            b.set(name.clone(), v.clone());
        }
        let mut a21 = DMatrix::zeros(n, n);
        let mut a22 = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a21[(i, j)] = evaluate(&self.a21[i][j], &b)?.to_f64();
                a22[(i, j)] = evaluate(&self.a22[i][j], &b)?.to_f64();
                if !a21[(i, j)].is_finite() || !a22[(i, j)].is_finite() {
                    return Err(Error::NonFinite(i, j));
                }
            }
        }
        Ok(NumericDeviation { a21, a22 })
    }

    /// Evaluates at a fixed point `(x̄, 0)` given in floating point.
    pub fn at_fixed_point(&self, params: &Binding, x: &[f64]) -> Result<NumericDeviation> {
        let xv: Vec<Value> = x.iter().map(|&v| Value::Float(v)).collect();
        let yv = vec![Value::Float(0.0); x.len()];
        self.at(params, &xv, &yv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn linear_system_blocks() {
        let m = Model::new(
            "osc",
            vec!["x1".into()],
            vec!["k".into(), "c".into()],
            vec![parse("(k*x1 + c*y1)/2").unwrap()],
        )
        .unwrap();
        let d = kcc_deviation(&m);
        let params = Binding::new().with("k", 0.25).with("c", 0.5);
        let num = d.at_fixed_point(&params, &[0.0]).unwrap();
        assert_eq!(num.a21[(0, 0)], -0.25);
        assert_eq!(num.a22[(0, 0)], -0.5);
        let a = num.block();
        assert_eq!(a.as_slice(), &[0.0, -0.25, 1.0, -0.5]);
        assert_eq!(d.residuals(), vec!["xi1'' + (c)*xi1' + (k)*xi1 = 0"]);
    }
}
