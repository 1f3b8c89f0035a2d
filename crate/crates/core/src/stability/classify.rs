//! Routh–Hurwitz classification of fixed points, cross-checked against the
//! eigenvalues of the deviation curvature tensor.

use std::fmt;

use nalgebra::DMatrix;
use serde::Serialize;

use super::charpoly::{char_poly, hurwitz_determinants, CharPoly};
use super::fixed_points::{exact_point_substitutions, find_fixed_points, FixedPoint, SearchBox};
use crate::error::{Error, Result};
use crate::expr::{substitute, Binding, CompiledExprs, Expr};
use crate::kcc::{kcc_invariant, Model};

/// Default absolute tolerance for sign decisions on the normalized tensor.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Stable,
    Unstable,
    /// Some decisive quantity sits inside the tolerance band, or the
    /// Hurwitz and eigenvalue routes disagree.
    Indeterminate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Stable => "stable",
            Verdict::Unstable => "unstable",
            Verdict::Indeterminate => "indeterminate",
        })
    }
}

/// Classification of one fixed point.
#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub fixed_point: FixedPoint,
    /// `P^i_j` at `(x̄, 0)`, row-major.
    pub p: Vec<Vec<f64>>,
    /// `a_1..a_n` of `det(λI − P)`.
    pub char_poly: Vec<f64>,
    /// `Δ_1..Δ_n`.
    pub hurwitz: Vec<f64>,
    pub verdict: Verdict,
    /// Verdict from the real parts of the eigenvalues alone.
    pub eigen_verdict: Verdict,
    /// Eigenvalues as `(re, im)`, sorted.
    pub eigenvalues: Vec<(f64, f64)>,
    /// Human-readable notes on near-zero quantities and disagreements.
    pub margin_flags: Vec<String>,
}

/// Hurwitz verdict on the coefficients of an already normalized tensor,
/// plus flags for each quantity inside `(−tol, tol)`.
pub fn hurwitz_verdict(cp: &CharPoly, tol: f64) -> (Verdict, Vec<String>) {
    let n = cp.degree();
    let delta = hurwitz_determinants(cp);
    let mut decisive = vec![(format!("a_{n}"), cp.a(n as i64))];
    decisive.extend(delta.iter().enumerate().map(|(j, d)| (format!("Delta_{}", j + 1), *d)));
    let flags: Vec<String> = decisive
        .iter()
        .filter(|(_, v)| v.abs() < tol)
        .map(|(name, v)| format!("|{name}| = {v:e} below tolerance"))
        .collect();
    let verdict = if !flags.is_empty() {
        Verdict::Indeterminate
    } else if decisive.iter().all(|(_, v)| *v > tol) {
        Verdict::Stable
    } else {
        Verdict::Unstable
    };
    (verdict, flags)
}

/// Verdict from the largest eigenvalue real part.
pub fn eigen_verdict(p: &DMatrix<f64>, tol: f64) -> (Verdict, Vec<(f64, f64)>) {
    if p.nrows() == 0 {
        return (Verdict::Stable, Vec::new());
    }
    let mut eig: Vec<(f64, f64)> =
        p.complex_eigenvalues().iter().map(|c| (c.re, c.im)).collect();
    eig.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let max_re = eig.iter().map(|e| e.0).fold(f64::NEG_INFINITY, f64::max);
    let v = if max_re < -tol {
        Verdict::Stable
    } else if max_re > tol {
        Verdict::Unstable
    } else {
        Verdict::Indeterminate
    };
    (v, eig)
}

/// Outcome of [`classify_matrix`].
#[derive(Clone, Debug)]
pub struct MatrixClassification {
    pub char_poly: CharPoly,
    pub hurwitz: Vec<f64>,
    pub verdict: Verdict,
    pub eigen_verdict: Verdict,
    pub eigenvalues: Vec<(f64, f64)>,
    pub flags: Vec<String>,
}

/// Classifies a numeric tensor. Signs are decided after scaling `P` by its
/// largest entry; the reported coefficients are those of the raw `P`.
pub fn classify_matrix(p: &DMatrix<f64>, tol: f64) -> Result<MatrixClassification> {
    let char_poly = char_poly(p)?;
    let hurwitz = hurwitz_determinants(&char_poly);
    let scale = p.amax();
    if scale == 0.0 {
        return Ok(MatrixClassification {
            char_poly,
            hurwitz,
            verdict: Verdict::Indeterminate,
            eigen_verdict: Verdict::Indeterminate,
            eigenvalues: vec![(0.0, 0.0); p.nrows()],
            flags: vec!["P vanishes identically".to_string()],
        });
    }
    let normalized = p / scale;
    let (mut verdict, mut flags) = hurwitz_verdict(&super::charpoly::char_poly(&normalized)?, tol);
    let (eigen_verdict, _) = self::eigen_verdict(&normalized, tol);
    let (_, eigenvalues) = self::eigen_verdict(p, tol);
    if verdict != Verdict::Indeterminate && eigen_verdict != verdict {
        flags.push(format!("Hurwitz says {verdict}, eigenvalues say {eigen_verdict}"));
        verdict = Verdict::Indeterminate;
    }
    Ok(MatrixClassification { char_poly, hurwitz, verdict, eigen_verdict, eigenvalues, flags })
}

/// `P` at `y = 0` for fixed parameters, compiled over the positions.
pub struct Classifier {
    p: CompiledExprs,
    n: usize,
}

impl Classifier {
    pub fn new(model: &Model, params: &Binding) -> Result<Classifier> {
        let subs = exact_point_substitutions(model, params)?;
        let p = kcc_invariant(model);
        let flat: Vec<Expr> = p.iter().flatten().map(|e| substitute(e, &subs)).collect();
        Ok(Classifier { p: CompiledExprs::new(&flat, &model.vars, &Binding::new())?, n: model.dim() })
    }

    /// `P^i_j(x̄, 0)`.
    pub fn tensor_at(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let (vals, margin) = self.p.eval_vec(x);
        if margin == 0.0 {
            return Err(Error::ZeroDenominator(format!("P at {x:?}")));
        }
        if let Some(k) = vals.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(k / self.n, k % self.n));
        }
        Ok(DMatrix::from_row_slice(self.n, self.n, &vals))
    }

    pub fn classify(&self, fp: &FixedPoint, tol: f64) -> Result<StabilityReport> {
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
        }
        let p = self.tensor_at(&fp.x)?;
        let c = classify_matrix(&p, tol)?;
        Ok(StabilityReport {
            fixed_point: fp.clone(),
            p: p.row_iter().map(|r| r.iter().copied().collect()).collect(),
            char_poly: c.char_poly.coeffs,
            hurwitz: c.hurwitz,
            verdict: c.verdict,
            eigen_verdict: c.eigen_verdict,
            eigenvalues: c.eigenvalues,
            margin_flags: c.flags,
        })
    }
}

/// Classifies a single fixed point of `model` at `params`.
pub fn classify(model: &Model, params: &Binding, fp: &FixedPoint, tol: f64) -> Result<StabilityReport> {
    Classifier::new(model, params)?.classify(fp, tol)
}

/// Number of Jacobi stable fixed points in a search box, with every report.
#[derive(Clone, Debug, Serialize)]
pub struct StabilityCount {
    pub k: usize,
    pub reports: Vec<StabilityReport>,
    /// How many reports came out indeterminate (not counted in `k`).
    pub indeterminate: usize,
}

pub fn count_stable(
    model: &Model,
    params: &Binding,
    search_box: &SearchBox,
    seeds: usize,
    tol: f64,
) -> Result<StabilityCount> {
    let fps = find_fixed_points(model, params, search_box, seeds)?;
    let classifier = Classifier::new(model, params)?;
    let reports = fps.iter().map(|fp| classifier.classify(fp, tol)).collect::<Result<Vec<_>>>()?;
    let k = reports.iter().filter(|r| r.verdict == Verdict::Stable).count();
    let indeterminate = reports.iter().filter(|r| r.verdict == Verdict::Indeterminate).count();
    Ok(StabilityCount { k, reports, indeterminate })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_diagonal_is_stable() {
        let p = DMatrix::from_row_slice(2, 2, &[-0.25, 0.0, 0.0, -0.25]);
        let c = classify_matrix(&p, DEFAULT_TOL).unwrap();
        assert_eq!(c.char_poly.coeffs, vec![0.5, 0.0625]);
        assert_eq!(c.hurwitz, vec![0.5, 0.03125]);
        assert_eq!((c.verdict, c.eigen_verdict), (Verdict::Stable, Verdict::Stable));
        assert!(c.flags.is_empty());
    }

    #[test]
    fn saddle_is_unstable() {
        let p = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -2.0]);
        assert_eq!(classify_matrix(&p, DEFAULT_TOL).unwrap().verdict, Verdict::Unstable);
    }

    #[test]
    fn boundary_is_indeterminate() {
        // eigenvalues ±i: a_1 = 0
        let p = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let r = classify_matrix(&p, DEFAULT_TOL).unwrap();
        assert_eq!(r.verdict, Verdict::Indeterminate);
        assert!(!r.flags.is_empty());
        let zero = DMatrix::zeros(2, 2);
        assert_eq!(classify_matrix(&zero, DEFAULT_TOL).unwrap().verdict, Verdict::Indeterminate);
    }

    #[test]
    fn scale_does_not_change_verdict() {
        let p = DMatrix::from_row_slice(2, 2, &[-3e-8, 1e-8, 0.0, -2e-8]);
        assert_eq!(classify_matrix(&p, DEFAULT_TOL).unwrap().verdict, Verdict::Stable);
    }
}
