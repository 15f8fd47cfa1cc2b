//! Upper incomplete gamma function at second argument -1.
//!
//! The map `a -> gamma_upper(a, -1)` is entire: the poles of gamma(a) at the
//! non-positive integers cancel exactly against the `k = n` term of the
//! lower-incomplete series
//!
//! ```text
//! gamma_lower(a, -1) = e^{i pi a} * sum_{k>=0} 1/(k! (a+k))
//! ```
//!
//! (principal branch of `(-1)^a`). A naive subtraction
//! `gamma(a) - gamma_lower(a, -1)` therefore loses all digits near those
//! integers. Within distance 0.1 of an integer `-n` this module instead
//! combines the two singular terms analytically before summation: writing
//! `a = -n + eps` and using the reflection formula,
//!
//! ```text
//! gamma(a) - e^{i pi a}/(n! (a+n))
//!     = (-1)^n / eps * [ (pi eps / sin(pi eps)) / gamma(1+n-eps) - e^{i pi eps} / n! ]
//! ```
//!
//! which is pole-free by construction. At the integers themselves the exact
//! value is
//!
//! ```text
//! gamma_upper(-n, -1) = ((-1)^n / n!) * (e * !n - Ei(1) - i pi)
//! ```
//!
//! with `!n = 0! + 1! + ... + (n-1)!`, and a short Lagrange interpolation
//! bridges the last few ulps around each integer where even the combined
//! form runs out of digits.

use num_complex::Complex64;
use std::f64::consts::{E, PI};

use crate::error::{Error, Result};
use crate::special::branch::minus_one_pow;
use crate::special::exp_integral::ei_one;
use crate::special::gamma::{gamma, nearest_nonpositive_integer};

/// Iteration cap for the series; hitting it is a `Convergence` error,
/// never a silent truncation.
const SERIES_CAP: usize = 500;

/// Inside this distance of a non-positive integer the combined
/// (pole-cancelled) form is used instead of the naive subtraction.
const COMBINE_RADIUS: f64 = 0.1;

/// Inside this distance the value is interpolated from surrounding nodes;
/// the combined form itself loses digits as eps -> 0.
const INTERP_RADIUS: f64 = 1e-5;

/// Node spacing for the near-integer interpolation stencil.
const INTERP_STEP: f64 = 1e-3;

/// Upper incomplete gamma at -1, `gamma_upper(a, -1)`, for any finite `a`.
///
/// Entire in `a`; relative accuracy is about 1e-12 for |a| <= 40. Satisfies
/// the recurrence `gamma_upper(a+1,-1) = a*gamma_upper(a,-1) + e^{i pi a} * e`.
pub fn upper_gamma_at_minus_one(a: Complex64) -> Result<Complex64> {
    if !(a.re.is_finite() && a.im.is_finite()) {
        return Err(Error::Domain(format!(
            "upper_gamma_at_minus_one: argument must be finite, got {a}"
        )));
    }
    let (n, dist) = nearest_nonpositive_integer(a);
    let value = if a.re < 0.5 && dist == 0.0 {
        at_nonpositive_integer(n)
    } else if a.re < 0.5 && dist < INTERP_RADIUS {
        interpolated(n, a + n as f64)?
    } else if a.re < 0.5 && dist <= COMBINE_RADIUS {
        combined(n, a + n as f64)?
    } else {
        naive(a)?
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(format!(
            "upper_gamma_at_minus_one({a}) exceeds the f64 range"
        )))
    }
}

/// Exact value at `a = -n`:  `((-1)^n / n!) (e * !n - Ei(1) - i pi)`.
///
/// Evaluated through the ratio `!n / n!` so nothing overflows even when
/// `n!` itself would.
fn at_nonpositive_integer(n: u64) -> Complex64 {
    let mut ratio = 0.0f64; // !n / n!
    let mut t = 1.0f64;
    for k in (0..n).rev() {
        t /= (k + 1) as f64;
        ratio += t;
    }
    let mut inv_fact = 1.0f64; // 1 / n!
    for m in 1..=n {
        inv_fact /= m as f64;
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Complex64::new(
        sign * (E * ratio - ei_one() * inv_fact),
        sign * (-PI * inv_fact),
    )
}

/// Pole-cancelled form for `a = -n + eps`, `0 < |eps| <= 0.1`.
fn combined(n: u64, eps: Complex64) -> Result<Complex64> {
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let mut inv_fact = 1.0f64;
    for m in 1..=n {
        inv_fact /= m as f64;
    }
    let pe = eps * PI;
    let kernel = pe / pe.sin();
    let g = gamma(Complex64::new((n + 1) as f64, 0.0) - eps)?;
    let phase = (Complex64::new(0.0, PI) * eps).exp();
    let d = kernel / g - phase * inv_fact;
    let tail = series_sum(eps - n as f64, Some(n))?;
    Ok(sign * (d / eps - phase * tail))
}

/// Five-point Lagrange stencil across `a = -n` for the last few ulps where
/// the combined form cancels.
fn interpolated(n: u64, eps: Complex64) -> Result<Complex64> {
    let h = INTERP_STEP;
    let xs = [-2.0 * h, -h, 0.0, h, 2.0 * h];
    let mut fs = [Complex64::new(0.0, 0.0); 5];
    for (j, &x) in xs.iter().enumerate() {
        fs[j] = if x == 0.0 {
            at_nonpositive_integer(n)
        } else {
            combined(n, Complex64::new(x, 0.0))?
        };
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..5 {
        let mut w = Complex64::new(1.0, 0.0);
        for m in 0..5 {
            if m != j {
                w *= (eps - xs[m]) / (xs[j] - xs[m]);
            }
        }
        acc += fs[j] * w;
    }
    Ok(acc)
}

/// Direct subtraction, valid when `a` is at least 0.1 away from every
/// non-positive integer.
fn naive(a: Complex64) -> Result<Complex64> {
    let g = gamma(a)?;
    let s = series_sum(a, None)?;
    Ok(g - minus_one_pow(a) * s)
}

/// `sum_{k>=0, k != skip} 1/(k! (a+k))`.
fn series_sum(a: Complex64, skip: Option<u64>) -> Result<Complex64> {
    let skip_k = skip.map(|s| s as i64).unwrap_or(-1);
    let min_k = ((skip_k + 3).max(6)) as usize;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut fact = 1.0f64;
    for k in 0..SERIES_CAP {
        if k > 0 {
            fact *= k as f64;
        }
        if k as i64 == skip_k {
            continue;
        }
        let term = ((a + k as f64) * fact).finv();
        sum += term;
        if k >= min_k && term.norm() <= 1e-17 * sum.norm() + 1e-305 {
            return Ok(sum);
        }
    }
    Err(Error::Convergence {
        context: "incomplete gamma series",
        limit: SERIES_CAP,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Lcg64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn upper(a: Complex64) -> Complex64 {
        upper_gamma_at_minus_one(a).unwrap()
    }

    fn assert_close(got: Complex64, want: Complex64, tol: f64) {
        assert!(
            (got - want).norm() <= tol,
            "got {got}, want {want} (diff {:.3e}, tol {:.1e})",
            (got - want).norm(),
            tol
        );
    }

    #[test]
    fn small_integer_arguments() {
        assert_close(upper(c(1.0, 0.0)), c(E, 0.0), 1e-12);
        assert_close(upper(c(2.0, 0.0)), c(0.0, 0.0), 1e-12);
        // one step of the recurrence from a = 2
        assert_close(upper(c(3.0, 0.0)), c(E, 0.0), 1e-12);
    }

    #[test]
    fn reference_values() {
        // Computed with 40-digit arithmetic.
        assert_close(
            upper(c(0.5, 0.0)),
            c(1.7724538509055160273, -2.9253034918143632176),
            1e-11,
        );
        assert_close(
            upper(c(2.5, 1.5)),
            c(0.307038268074673888158, 0.7280561438060072450307),
            1e-11,
        );
        assert_close(
            upper(c(0.3, -2.0)),
            c(273.7679220121424397075, -511.2846199259459134595),
            1e-8,
        );
        assert_close(
            upper(c(-3.25, 0.0)),
            c(-0.7067880179567882266628, 1.243038745873173657694),
            1e-11,
        );
        assert_close(
            upper(c(-7.0, 0.25)),
            c(-0.2144046126750748491462, -0.009581223835710786926951),
            1e-11,
        );
        assert_close(
            upper(c(-39.5, 0.0)),
            c(2.44282263298229552808e-47, 0.07065373224584246046393),
            1e-11,
        );
        assert_close(
            upper(c(5.0, 35.0)),
            c(-1.165150697984860605483e-17, 2.756863296021380993323e-17),
            1e-28,
        );
    }

    #[test]
    fn exact_values_at_nonpositive_integers() {
        assert_close(
            upper(c(0.0, 0.0)),
            c(-1.895117816355936755467, -PI),
            1e-13,
        );
        assert_close(
            upper(c(-1.0, 0.0)),
            c(-0.8231640121031084798938, PI),
            1e-13,
        );
        assert_close(
            upper(c(-3.0, 0.0)),
            c(-1.496334916246707364329, 0.5235987755982988730771),
            1e-13,
        );
        assert_close(
            upper(c(-10.0, 0.0)),
            c(0.3064608842731419412705, -8.65738716267028559982e-7),
            1e-13,
        );
    }

    #[test]
    fn consistency_with_ei_constant() {
        // gamma_upper(0, -1) = -(Ei(1) + i pi)
        let lhs = c(ei_one(), PI) / E;
        let rhs = -upper(c(0.0, 0.0)) / E;
        assert_close(lhs, rhs, 1e-10);
    }

    #[test]
    fn recurrence_holds_on_random_samples() {
        // gamma_upper(a+1,-1) = a * gamma_upper(a,-1) + e^{i pi a} * e
        let mut rng = Lcg64::new(0x16C6);
        let mut count = 0;
        while count < 200 {
            let a = rng.complex_in((-14.0, 14.0), (-14.0, 14.0));
            if a.norm() > 20.0 {
                continue;
            }
            count += 1;
            let lhs = upper(a + 1.0);
            let rhs = a * upper(a) + minus_one_pow(a) * E;
            let tol = 1e-9 * (1.0 + lhs.norm());
            assert_close(lhs, rhs, tol);
        }
    }

    #[test]
    fn entire_across_nonpositive_integers() {
        for k in 0..4u64 {
            let at = upper(c(-(k as f64), 0.0));
            let near = upper(c(-(k as f64) + 1e-6, 0.0));
            assert!(
                (at - near).norm() <= 1e-4,
                "discontinuity across a = -{k}: {at} vs {near}"
            );
        }
    }

    #[test]
    fn combined_and_naive_routes_agree_on_the_seam() {
        // Both forms are valid on the ring |eps| = 0.15; they must agree.
        for n in [0u64, 1, 2, 5, 12] {
            for j in 0..8 {
                let th = 2.0 * PI * j as f64 / 8.0;
                let eps = c(0.15 * th.cos(), 0.15 * th.sin());
                let a = eps - n as f64;
                let via_combined = combined(n, eps).unwrap();
                let via_naive = naive(a).unwrap();
                let tol = 5e-12 * (1.0 + via_naive.norm());
                assert_close(via_combined, via_naive, tol);
            }
        }
    }

    #[test]
    fn interpolation_agrees_with_the_combined_form() {
        // both are valid just outside the interpolation radius
        for n in [0u64, 1, 3] {
            for eps in [c(0.9e-5, 0.0), c(0.0, 0.9e-5), c(2e-5, -1e-5)] {
                let via_interp = interpolated(n, eps).unwrap();
                let via_combined = combined(n, eps).unwrap();
                assert!(
                    (via_interp - via_combined).norm() <= 1e-9,
                    "route mismatch at -{n}+{eps}: {via_interp} vs {via_combined}"
                );
            }
        }
    }

    #[test]
    fn rejects_non_finite_arguments() {
        assert!(matches!(
            upper_gamma_at_minus_one(c(f64::NAN, 0.0)),
            Err(Error::Domain(_))
        ));
    }
}
