//! Conversion of `M(x, y, μ) ẍ + f = 0` into standard form `G = ½ M⁻¹ f`.

use super::Matrix;
use crate::error::{Error, Result};
use crate::expr::{canonicalize, Expr};

const MAX_SYMBOLIC_DIM: usize = 4;

fn minor(m: &Matrix, row: usize, col: usize) -> Matrix {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, e)| e.clone()).collect())
        .collect()
}

/// Laplace expansion along the first row.
fn det(m: &Matrix) -> Expr {
    match m.len() {
        0 => Expr::one(),
        1 => m[0][0].clone(),
        n => Expr::add(
            (0..n)
                .filter(|&j| !m[0][j].is_zero())
                .map(|j| {
                    let sign = if j % 2 == 0 { Expr::one() } else { Expr::int(-1) };
                    Expr::mul(vec![sign, m[0][j].clone(), det(&minor(m, 0, j))])
                })
                .collect(),
        ),
    }
}

fn is_diagonal(m: &Matrix) -> bool {
    m.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, e)| i == j || e.is_zero()))
}

/// Returns the `G^i` of `M ẍ + f = 0`. The mass matrix may be symbolic;
/// its inverse is formed from the adjugate, so `det M` shows up as a
/// denominator.
pub fn to_standard_form(mass: &Matrix, force: &[Expr]) -> Result<Vec<Expr>> {
    let n = mass.len();
    if force.len() != n || mass.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension(format!(
            "mass matrix must be {n}x{n} to match {} force entries",
            force.len()
        )));
    }
    if n > MAX_SYMBOLIC_DIM {
        return Err(Error::UnsupportedDimension {
            what: "symbolic mass-matrix inverse",
            n,
            max: MAX_SYMBOLIC_DIM,
        });
    }
    let half = Expr::ratio(1, 2);
    if is_diagonal(mass) {
        let mut g = Vec::with_capacity(n);
        for i in 0..n {
            if canonicalize(&mass[i][i])?.is_zero() {
                return Err(Error::SingularMassMatrix);
            }
            g.push(Expr::div(&half * &force[i], mass[i][i].clone()));
        }
        return Ok(g);
    }
    let d = det(mass);
    if canonicalize(&d)?.is_zero() {
        return Err(Error::SingularMassMatrix);
    }
    let mut g = Vec::with_capacity(n);
    for i in 0..n {
        // row i of adj(M) is the cofactor column i
        let terms = (0..n)
            .filter(|&j| !force[j].is_zero())
            .map(|j| {
                let sign = if (i + j) % 2 == 0 { Expr::one() } else { Expr::int(-1) };
                Expr::mul(vec![sign, det(&minor(mass, j, i)), force[j].clone()])
            })
            .collect();
        g.push(Expr::div(&half * Expr::add(terms), d.clone()));
    }
    Ok(g)
}
