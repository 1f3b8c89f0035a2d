//! The polynomial system whose real solutions are the Jacobi stable fixed
//! points: cleared numerators of `G^i(μ, x, 0)` as equations, their
//! denominators as inequations, and the signs of `a_n` and every `Δ_j` as
//! strict inequalities.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed};

use super::charpoly::{char_poly_symbolic, hurwitz_determinants_symbolic};
use crate::error::{Error, Result};
use crate::expr::{canonicalize_all, canonicalize_in, substitute, Expr, Poly, VarOrder};
use crate::kcc::{kcc_invariant, Model};

/// Default cap on the number of monomials of any assembled polynomial.
pub const DEFAULT_MONOMIAL_BUDGET: usize = 200_000;
const MAX_SYMBOLIC_DIM: usize = 3;

/// Polynomials in the positions followed by the parameters.
#[derive(Clone, Debug)]
pub struct SemiAlgebraicSystem {
    pub variables: Vec<String>,
    /// `G^{i,1}(μ, x, 0) = 0`.
    pub equations: Vec<Poly>,
    /// `G^{i,2}(μ, x, 0) ≠ 0` for the denominators that involve a
    /// position, deduplicated; the constant `1` when there are none.
    pub inequations: Vec<Poly>,
    /// Denominators in the parameters alone. They restrict the parameter
    /// domain rather than the fixed points.
    pub parameter_inequations: Vec<Poly>,
    /// `a_{n,1}·a_{n,2} > 0`, then `Δ_{j,1}·Δ_{j,2} > 0` for `j = 1..n`.
    pub inequalities: Vec<Poly>,
}

impl SemiAlgebraicSystem {
    pub fn equation_exprs(&self) -> Vec<Expr> {
        self.equations.iter().map(|p| p.to_expr(&self.variables)).collect()
    }

    pub fn inequation_exprs(&self) -> Vec<Expr> {
        self.inequations.iter().map(|p| p.to_expr(&self.variables)).collect()
    }

    pub fn inequality_exprs(&self) -> Vec<Expr> {
        self.inequalities.iter().map(|p| p.to_expr(&self.variables)).collect()
    }

    /// One `EQ`, `NEQ` or `GT` tagged polynomial per line, preceded by
    /// `PNEQ` lines for the parameter-only denominators.
    pub fn lines(&self) -> Vec<String> {
        let tag = |t: &str, ps: Vec<Expr>| ps.into_iter().map(move |e| format!("{t} {e}")).collect::<Vec<_>>();
        let pneq = self.parameter_inequations.iter().map(|p| p.to_expr(&self.variables)).collect();
        let mut out = tag("PNEQ", pneq);
        out.extend(tag("EQ", self.equation_exprs()));
        out.extend(tag("NEQ", self.inequation_exprs()));
        out.extend(tag("GT", self.inequality_exprs()));
        out
    }
}

impl fmt::Display for SemiAlgebraicSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

fn check_budget(what: &'static str, p: &Poly, budget: usize) -> Result<()> {
    if p.len() > budget {
        return Err(Error::BudgetExceeded { what: what.to_string(), terms: p.len(), budget });
    }
    Ok(())
}

/// Rescales by a positive rational so the coefficients are coprime
/// integers without flipping the sign of the polynomial.
fn positive_primitive(p: &Poly) -> Poly {
    if p.is_zero() {
        return p.clone();
    }
    let c = p.content().abs();
    p.scale(&(num_rational::BigRational::one() / c))
}

/// Assembles the system with the default monomial budget.
pub fn assemble_semialgebraic(model: &Model) -> Result<SemiAlgebraicSystem> {
    assemble_semialgebraic_with_budget(model, DEFAULT_MONOMIAL_BUDGET)
}

pub fn assemble_semialgebraic_with_budget(model: &Model, budget: usize) -> Result<SemiAlgebraicSystem> {
    let n = model.dim();
    if n > MAX_SYMBOLIC_DIM {
        return Err(Error::UnsupportedDimension {
            what: "symbolic semi-algebraic assembly",
            n,
            max: MAX_SYMBOLIC_DIM,
        });
    }
    let zero_y: HashMap<String, Expr> =
        model.velocities.iter().map(|y| (y.clone(), Expr::zero())).collect();
    let names: Vec<&String> = model.vars.iter().chain(&model.params).collect();
    let order = VarOrder::new(&names);

    let g0: Vec<Expr> = model.g.iter().map(|g| substitute(g, &zero_y)).collect();
    let canon = canonicalize_all(&g0, &order)?;
    let variables = canon.first().map(|c| c.order().names().to_vec()).unwrap_or_default();
    let mut equations = Vec::with_capacity(n);
    let mut inequations: Vec<Poly> = Vec::new();
    let mut parameter_inequations: Vec<Poly> = Vec::new();
    for c in &canon {
        check_budget("equation", &c.numer, budget)?;
        equations.push(if c.numer.is_zero() { c.numer.clone() } else { c.numer.primitive().1 });
        let d = c.denom.primitive().1;
        let target = if (0..n).any(|i| d.degree_in(i) > 0) {
            &mut inequations
        } else if d.as_constant().is_none() {
            &mut parameter_inequations
        } else {
            continue;
        };
        if !target.contains(&d) {
            target.push(d);
        }
    }
    if inequations.is_empty() {
        inequations.push(Poly::one(variables.len()));
    }

    let p: Vec<Vec<Expr>> = kcc_invariant(model)
        .iter()
        .map(|row| row.iter().map(|e| substitute(e, &zero_y)).collect())
        .collect();
    let p_canon = canonicalize_all(&p.concat(), &order)?;
    for c in &p_canon {
        check_budget("tensor entry", &c.numer, budget)?;
        check_budget("tensor entry", &c.denom, budget)?;
    }
    let p_simple: Vec<Vec<Expr>> =
        p_canon.chunks(n).map(|row| row.iter().map(|c| c.to_expr()).collect()).collect();
    let a = char_poly_symbolic(&p_simple);
    let delta = hurwitz_determinants_symbolic(&a);
    let mut inequalities = Vec::with_capacity(n + 1);
    for e in std::iter::once(&a[n - 1]).chain(&delta) {
        let c = canonicalize_in(e, &order)?;
        check_budget("Hurwitz numerator", &c.numer, budget)?;
        check_budget("Hurwitz denominator", &c.denom, budget)?;
        let prod = c.numer.mul(&c.denom);
        check_budget("sign condition", &prod, budget)?;
        inequalities.push(positive_primitive(&prod));
    }
    Ok(SemiAlgebraicSystem { variables, equations, inequations, parameter_inequations, inequalities })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, semantically_equal};

    #[test]
    fn one_dimensional_oscillator() {
        let m = Model::new("osc", vec!["x1".into()], vec!["k".into()], vec![parse("k*x1/2").unwrap()])
            .unwrap();
        let s = assemble_semialgebraic(&m).unwrap();
        let v = &s.variables;
        assert!(semantically_equal(&s.equations[0].to_expr(v), &parse("k*x1").unwrap()).unwrap());
        assert_eq!(s.inequation_exprs()[0].to_string(), "1");
        // a_1 = k, Δ_1 = k
        assert_eq!(s.inequalities.len(), 2);
        for g in s.inequality_exprs() {
            assert!(semantically_equal(&g, &parse("k").unwrap()).unwrap());
        }
    }

    #[test]
    fn sign_is_kept() {
        // P = k, so a_1 = −k and Δ_1 = −k
        let m = Model::new("anti", vec!["x1".into()], vec!["k".into()], vec![parse("-k*x1/2").unwrap()])
            .unwrap();
        let s = assemble_semialgebraic(&m).unwrap();
        for g in s.inequality_exprs() {
            assert!(semantically_equal(&g, &parse("-k").unwrap()).unwrap());
        }
        assert!(s.lines().iter().any(|l| l.starts_with("GT ")));
    }

    #[test]
    fn budget_and_dimension_guards() {
        let m = Model::new("osc", vec!["x1".into()], vec!["k".into()], vec![parse("k*x1/2 + x1^3").unwrap()])
            .unwrap();
        assert!(matches!(assemble_semialgebraic_with_budget(&m, 1), Err(Error::BudgetExceeded { .. })));
        let vars: Vec<String> = (1..=4).map(|i| format!("x{i}")).collect();
        let g = vars.iter().map(|v| parse(v).unwrap()).collect();
        let big = Model::new("big", vars, vec![], g).unwrap();
        assert!(matches!(assemble_semialgebraic(&big), Err(Error::UnsupportedDimension { n: 4, .. })));
    }
}
