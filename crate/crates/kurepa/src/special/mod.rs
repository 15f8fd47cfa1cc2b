//! Building blocks: complex gamma, the upper incomplete gamma at -1, the
//! exponential-integral constant Ei(1), and the principal branch of (-1)^z.
//!
//! Everything here is a pure function of its arguments and safe to call from
//! any number of threads.

mod branch;
mod exp_integral;
mod gamma;
mod incomplete_gamma;

pub use branch::minus_one_pow;
pub use exp_integral::ei_one;
pub use gamma::{gamma, ln_gamma, GAMMA_POLE_RADIUS};
pub use incomplete_gamma::upper_gamma_at_minus_one;

pub(crate) use gamma::{factorial, nearest_nonpositive_integer};
