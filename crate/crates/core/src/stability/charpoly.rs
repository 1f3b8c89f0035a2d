//! Characteristic polynomials and Hurwitz determinants.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::expr::Expr;

/// Coefficients `a_1..a_n` of `p(λ) = det(λI − P) = λⁿ + a_1 λⁿ⁻¹ + … + a_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharPoly {
    pub coeffs: Vec<f64>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `a_k` with `a_0 = 1` and zero outside `0..=n`.
    pub fn a(&self, k: i64) -> f64 {
        match k {
            0 => 1.0,
            k if k < 0 || k as usize > self.coeffs.len() => 0.0,
            k => self.coeffs[k as usize - 1],
        }
    }

    /// Horner evaluation of the monic polynomial.
    pub fn eval(&self, lambda: f64) -> f64 {
        self.coeffs.iter().fold(1.0, |acc, c| acc * lambda + c)
    }
}

/// Faddeev–LeVerrier: `M_k = P M_{k−1} + a_{k−1} I`, `a_k = −tr(P M_k)/k`.
pub fn char_poly(p: &DMatrix<f64>) -> Result<CharPoly> {
    let n = p.nrows();
    if p.ncols() != n {
        return Err(Error::Dimension(format!("{}x{} matrix is not square", n, p.ncols())));
    }
    for i in 0..n {
        for j in 0..n {
            if !p[(i, j)].is_finite() {
                return Err(Error::NonFinite(i, j));
            }
        }
    }
    let mut coeffs = Vec::with_capacity(n);
    let mut m = DMatrix::<f64>::zeros(n, n);
    let mut prev = 1.0;
    for k in 1..=n {
        m = p * &m;
        for i in 0..n {
            m[(i, i)] += prev;
        }
        let a = -(p * &m).trace() / k as f64;
        coeffs.push(a);
        prev = a;
    }
    Ok(CharPoly { coeffs })
}

/// Hurwitz matrix of order `j`: entry `(r, c)` (1-based) is `a_{2c−r}`.
pub fn hurwitz_matrix(cp: &CharPoly, j: usize) -> DMatrix<f64> {
    DMatrix::from_fn(j, j, |r, c| cp.a(2 * (c as i64 + 1) - (r as i64 + 1)))
}

/// Leading principal minors `Δ_1..Δ_n` of the Hurwitz matrix.
pub fn hurwitz_determinants(cp: &CharPoly) -> Vec<f64> {
    let n = cp.degree();
    let h = hurwitz_matrix(cp, n);
    (1..=n).map(|j| h.view((0, 0), (j, j)).clone_owned().determinant()).collect()
}

/// Symbolic Faddeev–LeVerrier on an expression matrix.
pub fn char_poly_symbolic(p: &[Vec<Expr>]) -> Vec<Expr> {
    let n = p.len();
    let mut m: Vec<Vec<Expr>> = vec![vec![Expr::zero(); n]; n];
    let mut prev = Expr::one();
    let mut coeffs = Vec::with_capacity(n);
    let matmul = |a: &[Vec<Expr>], b: &[Vec<Expr>]| -> Vec<Vec<Expr>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Expr::add((0..n).map(|l| &a[i][l] * &b[l][j]).collect()))
                    .collect()
            })
            .collect()
    };
    for k in 1..=n {
        m = matmul(p, &m);
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = &row[i] + &prev;
        }
        let pm = matmul(p, &m);
        let trace = Expr::add((0..n).map(|i| pm[i][i].clone()).collect());
        let a = Expr::mul(vec![Expr::ratio(-1, k as i64), trace]);
        coeffs.push(a.clone());
        prev = a;
    }
    coeffs
}

/// Symbolic Hurwitz determinants from symbolic coefficients.
pub fn hurwitz_determinants_symbolic(a: &[Expr]) -> Vec<Expr> {
    let n = a.len();
    let coeff = |k: i64| -> Expr {
        match k {
            0 => Expr::one(),
            k if k < 0 || k as usize > n => Expr::zero(),
            k => a[k as usize - 1].clone(),
        }
    };
    (1..=n)
        .map(|j| {
            let h: Vec<Vec<Expr>> = (0..j)
                .map(|r| (0..j).map(|c| coeff(2 * (c as i64 + 1) - (r as i64 + 1))).collect())
                .collect();
            laplace_det(&h)
        })
        .collect()
}

fn laplace_det(m: &[Vec<Expr>]) -> Expr {
    let n = m.len();
    match n {
        0 => Expr::one(),
        1 => m[0][0].clone(),
        _ => Expr::add(
            (0..n)
                .filter(|&j| !m[0][j].is_zero())
                .map(|j| {
                    let minor: Vec<Vec<Expr>> = m[1..]
                        .iter()
                        .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, e)| e.clone()).collect())
                        .collect();
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    Expr::mul(vec![Expr::int(sign), m[0][j].clone(), laplace_det(&minor)])
                })
                .collect(),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, semantically_equal};

    #[test]
    fn diagonal_quarter() {
        let p = DMatrix::from_row_slice(2, 2, &[-0.25, 0.0, 0.0, -0.25]);
        let cp = char_poly(&p).unwrap();
        assert_eq!(cp.coeffs, vec![0.5, 0.0625]);
        assert_eq!(hurwitz_determinants(&cp), vec![0.5, 0.03125]);
    }

    #[test]
    fn zero_matrix() {
        let cp = char_poly(&DMatrix::zeros(3, 3)).unwrap();
        assert_eq!(cp.coeffs, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn companion_matrix() {
        // companion of λ³ + 2λ² + 3λ + 4
        let c = DMatrix::from_row_slice(3, 3, &[0.0, 0.0, -4.0, 1.0, 0.0, -3.0, 0.0, 1.0, -2.0]);
        let cp = char_poly(&c).unwrap();
        for (got, want) in cp.coeffs.iter().zip([2.0, 3.0, 4.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn non_finite_rejected() {
        let p = DMatrix::from_row_slice(2, 2, &[1.0, f64::NAN, 0.0, 1.0]);
        assert!(matches!(char_poly(&p), Err(Error::NonFinite(0, 1))));
    }

    #[test]
    fn hurwitz_low_order_closed_forms() {
        let cp = CharPoly { coeffs: vec![3.0, 5.0] };
        assert_eq!(hurwitz_determinants(&cp), vec![3.0, 15.0]);
        let cp = CharPoly { coeffs: vec![2.0, 3.0, 4.0] };
        let d = hurwitz_determinants(&cp);
        assert!((d[1] - 2.0).abs() < 1e-12);
        assert!((d[2] - 8.0).abs() < 1e-12);
        let a: Vec<Expr> = ["a1", "a2", "a3"].iter().map(|s| parse(s).unwrap()).collect();
        let d = hurwitz_determinants_symbolic(&a);
        assert!(semantically_equal(&d[1], &parse("a1*a2 - a3").unwrap()).unwrap());
        assert!(semantically_equal(&d[2], &parse("a3*(a1*a2 - a3)").unwrap()).unwrap());
    }

    #[test]
    fn symbolic_matches_trace_and_determinant() {
        let p: Vec<Vec<Expr>> = vec![
            vec![parse("p").unwrap(), parse("q").unwrap()],
            vec![parse("r").unwrap(), parse("s").unwrap()],
        ];
        let a = char_poly_symbolic(&p);
        assert!(semantically_equal(&a[0], &parse("-(p + s)").unwrap()).unwrap());
        assert!(semantically_equal(&a[1], &parse("p*s - q*r").unwrap()).unwrap());
    }
}
