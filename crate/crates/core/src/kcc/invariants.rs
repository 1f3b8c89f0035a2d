//! Connections, deviation curvature tensor and the higher invariants.

use rayon::prelude::*;

use super::{Matrix, Model, Tensor3, Tensor4};
use crate::expr::Expr;

/// Connection and curvature data of a model.
#[derive(Clone, Debug)]
pub struct KccInvariants {
    /// Nonlinear connection `N^i_j = ∂G^i/∂y_j`.
    pub n: Matrix,
    /// Berwald connection `G^i_{jl} = ∂N^i_j/∂y_l`, indexed `[i][j][l]`.
    pub berwald: Tensor3,
    /// Deviation curvature tensor `P^i_j`.
    pub p: Matrix,
    /// First invariant `ε_i = 2G^i − N^i_j y_j`.
    pub epsilon: Vec<Expr>,
}

/// Torsion, Riemann–Christoffel curvature and Douglas tensors.
#[derive(Clone, Debug)]
pub struct HigherInvariants {
    /// `P^i_{jk} = (∂P^i_j/∂y_k − ∂P^i_k/∂y_j) / 3`.
    pub torsion: Tensor3,
    /// `P^i_{jkl} = ∂P^i_{jk}/∂y_l`.
    pub riemann: Tensor4,
    /// `D^i_{jkl} = ∂G^i_{jk}/∂y_l`.
    pub douglas: Tensor4,
}

fn grad(exprs: &[Expr], by: &[String]) -> Matrix {
    exprs
        .par_iter()
        .map(|e| by.iter().map(|v| e.differentiate(v)).collect())
        .collect()
}

fn nonlinear_connection(m: &Model) -> Matrix {
    grad(&m.g, &m.velocities)
}

fn berwald(m: &Model, n: &Matrix) -> Tensor3 {
    n.par_iter()
        .map(|row| {
            row.iter().map(|nij| m.velocities.iter().map(|y| nij.differentiate(y)).collect()).collect()
        })
        .collect()
}

/// Deviation curvature tensor from the connections, following the loop
/// nest: start from `−2∂G^i/∂x_j`, then accumulate over `l`.
fn curvature(m: &Model, n: &Matrix, b: &Tensor3) -> Matrix {
    let dim = m.dim();
    let two = Expr::int(2);
    (0..dim)
        .into_par_iter()
        .map(|i| {
            (0..dim)
                .map(|j| {
                    let mut terms = vec![Expr::mul(vec![
                        Expr::int(-2),
                        m.g[i].differentiate(&m.vars[j]),
                    ])];
                    for l in 0..dim {
                        terms.push(-(&two * &m.g[l] * &b[i][j][l]));
                        let y = Expr::symbol(&m.velocities[l]);
                        terms.push(y * n[i][j].differentiate(&m.vars[l]));
                        terms.push(&n[i][l] * &n[l][j]);
                    }
                    Expr::add(terms)
                })
                .collect()
        })
        .collect()
}

fn epsilon(m: &Model, n: &Matrix) -> Vec<Expr> {
    (0..m.dim())
        .map(|i| {
            let mut terms = vec![Expr::int(2) * &m.g[i]];
            for (j, y) in m.velocities.iter().enumerate() {
                terms.push(-(&n[i][j] * Expr::symbol(y)));
            }
            Expr::add(terms)
        })
        .collect()
}

/// Connections, `P^i_j` and `ε_i` in one pass.
pub fn kcc_invariants(model: &Model) -> KccInvariants {
    let n = nonlinear_connection(model);
    let b = berwald(model, &n);
    let p = curvature(model, &n, &b);
    let eps = epsilon(model, &n);
    KccInvariants { n, berwald: b, p, epsilon: eps }
}

/// Deviation curvature tensor `P^i_j`.
pub fn kcc_invariant(model: &Model) -> Matrix {
    kcc_invariants(model).p
}

/// `P^i_j` computed from a caller-supplied nonlinear connection instead of
/// `∂G/∂y`. Useful for checking how an error in `N` propagates.
pub fn curvature_with_connection(model: &Model, n: &Matrix) -> Matrix {
    curvature(model, n, &berwald(model, n))
}

/// First KCC invariant `ε_i`.
pub fn first_invariant(model: &Model) -> Vec<Expr> {
    epsilon(model, &nonlinear_connection(model))
}

pub fn higher_invariants(model: &Model, inv: &KccInvariants) -> HigherInvariants {
    let dim = model.dim();
    let ys = &model.velocities;
    // dp[i][j][k] = ∂P^i_j/∂y_k
    let dp: Tensor3 = grad(&inv.p.concat(), ys)
        .chunks(dim)
        .map(|c| c.to_vec())
        .collect();
    let third = Expr::ratio(1, 3);
    let torsion: Tensor3 = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    (0..dim)
                        .map(|k| &third * (&dp[i][j][k] - &dp[i][k][j]))
                        .collect()
                })
                .collect()
        })
        .collect();
    let riemann: Tensor4 = torsion
        .par_iter()
        .map(|tj| {
            tj.iter()
                .map(|tk| tk.iter().map(|t| ys.iter().map(|y| t.differentiate(y)).collect()).collect())
                .collect()
        })
        .collect();
    let douglas: Tensor4 = inv
        .berwald
        .par_iter()
        .map(|bj| {
            bj.iter()
                .map(|bk| bk.iter().map(|b| ys.iter().map(|y| b.differentiate(y)).collect()).collect())
                .collect()
        })
        .collect();
    HigherInvariants { torsion, riemann, douglas }
}
