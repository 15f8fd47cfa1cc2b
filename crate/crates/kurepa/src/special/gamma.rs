//! Complex gamma function and its logarithm.
//!
//! Lanczos rational-kernel approximation with Pugh's 11-term coefficient set
//! (g = 10.900511), the same table `statrs` uses for real arguments, applied
//! here to complex arguments. The reflection formula covers Re z < 1/2.

use num_complex::Complex64;
use std::f64::consts::{E, PI};

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 10.900511;

const LANCZOS_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];

const TWO_SQRT_E_OVER_PI: f64 = 1.8603827342052657173362492472666631120594218414085755;

/// Distance below which an argument counts as sitting on a pole of gamma.
pub const GAMMA_POLE_RADIUS: f64 = 1e-12;

fn lanczos_sum(w: Complex64) -> Complex64 {
    // valid for Re w >= 0.5
    let mut s = Complex64::new(LANCZOS_DK[0], 0.0);
    for (i, dk) in LANCZOS_DK.iter().enumerate().skip(1) {
        s += dk / (w + (i as f64 - 1.0));
    }
    s
}

fn lanczos_gamma(w: Complex64) -> Complex64 {
    // Re w >= 0.5
    let base = (w - 0.5 + LANCZOS_G) / E;
    lanczos_sum(w) * TWO_SQRT_E_OVER_PI * base.powc(w - 0.5)
}

/// Nearest non-positive integer to `z` together with the distance, when
/// `z` lies close enough to the non-positive real axis for one to exist.
pub(crate) fn nearest_nonpositive_integer(z: Complex64) -> (u64, f64) {
    let n = if z.re >= 0.0 { 0.0 } else { (-z.re).round() };
    let dist = Complex64::new(z.re + n, z.im).norm();
    (n as u64, dist)
}

fn check_pole(z: Complex64) -> Result<()> {
    if z.re < 0.5 {
        let (n, dist) = nearest_nonpositive_integer(z);
        if dist <= GAMMA_POLE_RADIUS {
            return Err(Error::Pole {
                location: -(n as i64),
            });
        }
    }
    Ok(())
}

fn check_finite(z: Complex64, what: &str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what}: argument must be finite, got {z}")))
    }
}

/// Gamma function for complex arguments.
///
/// Relative accuracy is about 1e-14 away from the poles; the functional
/// equation gamma(z+1) = z*gamma(z) holds to the same level. Arguments within
/// [`GAMMA_POLE_RADIUS`] of a non-positive integer are rejected as poles.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    check_finite(z, "gamma")?;
    check_pole(z)?;
    let value = if z.re < 0.5 {
        // reflection: gamma(z) = pi / (sin(pi z) * gamma(1 - z))
        let s = (PI * z).sin();
        PI / (s * lanczos_gamma(Complex64::new(1.0, 0.0) - z))
    } else {
        lanczos_gamma(z)
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(format!("gamma({z}) exceeds the f64 range")))
    }
}

/// Principal-branch logarithm of gamma.
///
/// Only exp-consistency is promised: `exp(ln_gamma(z))` agrees with
/// `gamma(z)` wherever both are representable. The imaginary part is not a
/// continuous branch along arbitrary paths.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    check_finite(z, "ln_gamma")?;
    check_pole(z)?;
    let value = if z.re < 0.5 {
        let s = (PI * z).sin();
        Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(Complex64::new(1.0, 0.0) - z)?
    } else {
        let base = (z - 0.5 + LANCZOS_G) / E;
        lanczos_sum(z).ln() + TWO_SQRT_E_OVER_PI.ln() + (z - 0.5) * base.ln()
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(format!("ln_gamma({z}) is not representable")))
    }
}

/// n! as f64 (infinite beyond 170!).
pub(crate) fn factorial(n: u64) -> f64 {
    let mut p = 1.0f64;
    for k in 2..=n {
        p *= k as f64;
    }
    p
}
