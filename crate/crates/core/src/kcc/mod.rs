//! KCC geometry of a second-order system `ẍ_i + 2 G^i(μ; x, y) = 0`.
//!
//! [`Model`] holds the `G^i`; [`kcc_invariant`] and friends compute the
//! nonlinear and Berwald connections, the deviation curvature tensor and
//! the higher invariants by plain symbolic differentiation.

mod deviation;
mod dump;
mod invariants;
mod standard_form;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::expr::{Binding, Expr, VarOrder};

pub use deviation::{kcc_deviation, DeviationSystem, NumericDeviation};
pub use dump::{matrix_json, matrix_text, tensor3_json, tensor3_text, tensor4_json, tensor4_text};
pub use invariants::{
    curvature_with_connection, first_invariant, higher_invariants, kcc_invariant, kcc_invariants, HigherInvariants,
    KccInvariants,
};
pub use standard_form::to_standard_form;

pub type Matrix = Vec<Vec<Expr>>;
pub type Tensor3 = Vec<Vec<Vec<Expr>>>;
pub type Tensor4 = Vec<Vec<Vec<Vec<Expr>>>>;

/// An autonomous system of `n` second-order ODEs in KCC standard form.
#[derive(Clone, Debug)]
pub struct Model {
    pub name: String,
    /// Position names `x_1..x_n`.
    pub vars: Vec<String>,
    /// Velocity names, `y1..yn`.
    pub velocities: Vec<String>,
    pub params: Vec<String>,
    /// Default parameter values, possibly partial.
    pub defaults: Binding,
    pub g: Vec<Expr>,
}

impl Model {
    /// Builds a model, checking that each `G^i` only mentions positions,
    /// velocities and parameters.
    pub fn new(
        name: impl Into<String>,
        vars: Vec<String>,
        params: Vec<String>,
        g: Vec<Expr>,
    ) -> Result<Model> {
        let n = vars.len();
        if n == 0 {
            return Err(Error::Dimension("a model needs at least one variable".into()));
        }
        if g.len() != n {
            return Err(Error::Dimension(format!("{} variables but {} G functions", n, g.len())));
        }
        let velocities: Vec<String> = (1..=n).map(|i| format!("y{i}")).collect();
        let mut declared: BTreeSet<&str> = BTreeSet::new();
        for s in vars.iter().chain(&velocities).chain(&params) {
            if !declared.insert(s) {
                return Err(Error::InvalidArgument(format!("symbol `{s}` declared twice")));
            }
        }
        for (i, gi) in g.iter().enumerate() {
            if let Some(s) = gi.free_symbols().into_iter().find(|s| !declared.contains(s.as_str())) {
                return Err(Error::InvalidArgument(format!(
                    "G{} mentions undeclared symbol `{s}`",
                    i + 1
                )));
            }
        }
        Ok(Model {
            name: name.into(),
            vars,
            velocities,
            params,
            defaults: Binding::new(),
            g,
        })
    }

    pub fn with_defaults(mut self, defaults: Binding) -> Model {
        self.defaults = defaults;
        self
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    /// Declaration order: positions, velocities, parameters.
    pub fn var_order(&self) -> VarOrder {
        let all: Vec<&String> = self.vars.iter().chain(&self.velocities).chain(&self.params).collect();
        VarOrder::new(&all)
    }

    /// Defaults overridden by `overrides`; fails if a parameter stays unbound.
    pub fn bind_params(&self, overrides: &Binding) -> Result<Binding> {
        let mut b = self.defaults.clone();
        b.extend(overrides);
        for (k, _) in overrides.iter() {
            if !self.params.contains(k) {
                return Err(Error::InvalidArgument(format!(
                    "model `{}` has no parameter `{k}`",
                    self.name
                )));
            }
        }
        if let Some(p) = self.params.iter().find(|p| !b.contains(p)) {
            return Err(Error::MissingParameter(p.clone()));
        }
        Ok(b)
    }

    /// The `G^i` with exact parameter values substituted.
    pub fn specialize(&self, params: &Binding) -> Vec<Expr> {
        let subs = params.exact_substitutions();
        self.g.iter().map(|g| crate::expr::substitute(g, &subs)).collect()
    }

    /// Position and velocity names, the state layout used by the numerics.
    pub fn state_names(&self) -> Vec<String> {
        self.vars.iter().chain(&self.velocities).cloned().collect()
    }
}
