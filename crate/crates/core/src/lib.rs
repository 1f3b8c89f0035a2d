//! Jacobi stability analysis of second-order ODE systems through the KCC
//! (Kosambi–Cartan–Chern) geometric invariants.
//!
//! The pipeline is: build or load a [`Model`] in standard form
//! `ẍ_i + 2G^i(μ; x, ẋ) = 0`, compute its deviation curvature tensor with
//! [`kcc::kcc_invariant`], locate fixed points and classify them with
//! [`stability`], and check the prediction in the time domain with
//! [`numerics`].

pub mod cli;
pub mod error;
pub mod expr;
pub mod kcc;
pub mod models;
pub mod numerics;
pub mod stability;

pub use error::{Error, Result};
pub use kcc::Model;
