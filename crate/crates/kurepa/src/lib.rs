//! Evaluation of Kurepa's left factorial function and its generalizations
//! over the complex plane.
//!
//! At positive integers K coincides with the left factorial
//! `!n = 0! + 1! + ... + (n-1)!`; for Re z > 0 it is defined by
//!
//! ```text
//! K(z) = integral_0^inf e^{-t} (t^z - 1)/(t - 1) dt,
//! ```
//!
//! and it continues to a meromorphic function on the whole plane with simple
//! poles at z = -1 and z = -m for m >= 3 (the point -2 is regular). The
//! continuation is computed from
//!
//! ```text
//! K(z) = (Ei(1) + i pi)/e + (-1)^z Gamma(1+z) Gamma(-z, -1)/e
//! ```
//!
//! with the principal branch `(-1)^z = e^{i pi z}`. The family members
//!
//! ```text
//! K_i(z) = (K(z+i-1) - K(i-1)) / (i-1)!,      K_1 = K,
//! ```
//!
//! shift the pole set to -i and -(i+m), m >= 2, with exact rational
//! residues. The recurrence `(i-1)! (K_i(z+1) - K_i(z)) = Gamma(z+i)` ties
//! everything to the gamma function and powers both the argument-reduction
//! route and a large part of the verification harness.
//!
//! # Layout
//!
//! * [`special`] - gamma, the (entire) incomplete gamma at -1, Ei(1), and
//!   the branch convention; the building blocks.
//! * [`quadrature`] - adaptive Gauss-Kronrod integration of the defining
//!   integral.
//! * [`eval`] - K and K_i with route dispatch ([`k`], [`ki`]), exact
//!   [`left_factorial`], and the recurrence residual.
//! * [`poles`] - exact pole/residue catalog and the circle-mean residue
//!   estimator.
//! * [`verify`] - the property harness behind the `verify` CLI subcommand.
//! * [`grid`] - batch evaluation over complex-plane rectangles, in parallel
//!   under the `parallel` feature (on by default).
//!
//! # Example
//!
//! ```
//! use kurepa::{k, EvalConfig};
//! use num_complex::Complex64;
//!
//! let cfg = EvalConfig::new();
//! let r = k(Complex64::new(3.0, 0.0), &cfg).unwrap();
//! assert!((r.value.re - 4.0).abs() < 1e-9); // !3 = 0! + 1! + 2! = 4
//! ```

pub mod error;
pub mod eval;
pub mod grid;
pub mod poles;
pub mod quadrature;
pub mod sampling;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use eval::{
    closed_form_k, k, ki, left_factorial, recurrence_residual, EvalConfig, Evaluation,
    FamilyIndex, Method, Route, Warning,
};
pub use grid::{eval_grid, eval_grid_serial, GridRecord, GridSpec, GridStatus};
pub use poles::{is_pole_location, pole_catalog, residue_numeric, PoleInfo};
pub use quadrature::{integrate_k, kurepa_integrand, QuadratureConfig};
pub use verify::{
    check_asymptotic_null, check_asymptotic_ratio, check_family_route_equivalence, run_all,
    CheckReport,
};

#[cfg(feature = "parallel")]
pub use grid::eval_grid_parallel;
