//! Time-domain checks: trajectories, deviation vectors by three routes
//! (RK4, matrix exponential, finite perturbation) and the focusing
//! diagnostic.

mod expm;
mod focusing;
mod integrate;
mod perturbation;
mod trace;

pub use expm::{expm, matrix_exp_solution, uniform_times, EXPM_RTOL};
pub use focusing::{
    focusing_profile, probe_times, FocusVerdict, FocusingProfile, DEFAULT_T_PROBE, EQUALITY_BAND,
    PROBE_SAMPLES,
};
pub use integrate::{
    deviation_names, integrate, integrate_deviation, integrate_linear_deviation, ModelRhs,
    MIN_DENOMINATOR,
};
pub use perturbation::{perturbation_oracle, DEFAULT_ETA};
pub use trace::{format_f64, Trace};
