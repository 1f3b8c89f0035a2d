//! Fixed points, Routh–Hurwitz classification and the polynomial stability
//! conditions.
//!
//! Sign decisions use the deviation curvature tensor at `(x̄, 0)`: a fixed
//! point is Jacobi stable when every eigenvalue of `P` has negative real
//! part, decided here through the Hurwitz determinants of `det(λI − P)`.

mod airfoil;
mod charpoly;
mod classify;
mod fixed_points;
mod semialgebraic;

pub use airfoil::{airfoil_region_conditions, condition_polynomials, Region, RegionReport};
pub use charpoly::{
    char_poly, char_poly_symbolic, hurwitz_determinants, hurwitz_determinants_symbolic,
    hurwitz_matrix, CharPoly,
};
pub use classify::{
    classify, classify_matrix, count_stable, eigen_verdict, hurwitz_verdict, Classifier,
    MatrixClassification, StabilityCount, StabilityReport, Verdict, DEFAULT_TOL,
};
pub use fixed_points::{
    find_fixed_points, FixedPoint, SearchBox, DEDUP_RADIUS, DENOM_MARGIN, RESIDUAL_BOUND,
};
pub use semialgebraic::{
    assemble_semialgebraic, assemble_semialgebraic_with_budget, SemiAlgebraicSystem,
    DEFAULT_MONOMIAL_BUDGET,
};
