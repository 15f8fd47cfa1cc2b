//! Adaptive integration of the defining integral
//!
//! ```text
//! K(z) = integral_0^inf e^{-t} (t^z - 1)/(t - 1) dt,    Re z > 0.
//! ```
//!
//! The singularity at t = 1 is removable; inside a small window around it
//! the integrand is evaluated by a short Taylor expansion, since the direct
//! quotient loses about six digits there. The infinite tail is truncated at
//! a cutoff T chosen so the analytic tail bound stays below the absolute
//! tolerance, and that bound is folded into the reported error estimate.
//!
//! The scheme is adaptive bisection on [0, T] with a 15-point Gauss-Kronrod
//! pair per panel, split initially at t = 1 and with a logarithmic initial
//! grid toward t = 0 (for small Re z the factor t^z has a boundary layer
//! there, and for complex z it oscillates in ln t).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::eval::{Evaluation, Route};

/// Half-width of the Taylor window around the removable point t = 1.
const SERIES_WINDOW: f64 = 1e-6;

/// Discretization policy for [`integrate_k`].
#[derive(Debug, Clone)]
pub struct QuadratureConfig {
    /// Relative tolerance on the integral value.
    pub rel_tol: f64,
    /// Absolute tolerance floor.
    pub abs_tol: f64,
    /// Tail truncation point; `None` picks the smallest T with
    /// `e^{-T} (T^{Re z} + 1) < abs_tol / 10`.
    pub tail_cutoff: Option<f64>,
    /// Cap on panel bisections before giving up.
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            tail_cutoff: None,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureConfig {
    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::Domain(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if let Some(t) = self.tail_cutoff {
            if !(t > 2.0) || !t.is_finite() {
                return Err(Error::Domain(format!(
                    "tail cutoff must be finite and > 2, got {t}"
                )));
            }
        }
        if self.max_subdivisions < 10 {
            return Err(Error::Domain(format!(
                "max_subdivisions must be at least 10, got {}",
                self.max_subdivisions
            )));
        }
        Ok(())
    }

    fn effective_tail(&self, re_z: f64) -> f64 {
        match self.tail_cutoff {
            Some(t) => t,
            None => {
                let log_target = (self.abs_tol / 10.0).ln();
                let re = re_z.max(0.0);
                let mut t = 35.0f64;
                // log-space test of e^{-T} (T^re + 1) < target
                while -t + re * t.ln() + 0.7 >= log_target {
                    t += 5.0;
                }
                t
            }
        }
    }
}

/// The integrand `e^{-t} (t^z - 1)/(t - 1)`, with the removable point at
/// t = 1 patched by its Taylor expansion.
///
/// At t = 0 the limit value is 1 for Re z > 0 (and 0 for z = 0); other
/// arguments with Re z <= 0 are rejected there because `t^z` is unbounded.
pub fn kurepa_integrand(z: Complex64, t: f64) -> Result<Complex64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("integrand requires t >= 0, got {t}")));
    }
    if t == 0.0 && z != Complex64::new(0.0, 0.0) && z.re <= 0.0 {
        return Err(Error::Domain(
            "integrand at t = 0 requires Re z > 0".into(),
        ));
    }
    Ok(integrand_unchecked(z, t))
}

pub(crate) fn integrand_unchecked(z: Complex64, t: f64) -> Complex64 {
    if z.re == 0.0 && z.im == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    if t == 0.0 {
        // t^z -> 0 for Re z > 0, so the quotient tends to (-1)/(-1) = 1
        return Complex64::new(1.0, 0.0);
    }
    let u = t - 1.0;
    let damp = (-t).exp();
    if u.abs() <= SERIES_WINDOW {
        // (t^z - 1)/(t - 1) = sum_{m>=1} C(z, m) u^{m-1}
        let mut binom = z;
        let mut acc = binom;
        let mut u_pow = 1.0f64;
        for m in 2..=6u32 {
            binom = binom * (z - (m as f64 - 1.0)) / m as f64;
            u_pow *= u;
            acc += binom * u_pow;
        }
        acc * damp
    } else {
        ((z * t.ln()).exp() - 1.0) / u * damp
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

/// Evaluate `K(z)` by adaptive quadrature of the defining integral.
///
/// Requires `Re z > 0`. The reported `est_abs_error` combines the
/// Gauss-Kronrod panel estimates with the analytic tail bound
/// `e^{-T} (T^{Re z} + 1)/(T - 1)`.
pub fn integrate_k(z: Complex64, cfg: &QuadratureConfig) -> Result<Evaluation> {
    cfg.validate()?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("integrate_k: z must be finite, got {z}")));
    }
    if !(z.re > 0.0) {
        return Err(Error::Domain(format!(
            "the defining integral requires Re z > 0, got Re z = {}",
            z.re
        )));
    }

    let t_end = cfg.effective_tail(z.re);
    let f = |t: f64| integrand_unchecked(z, t);

    // Initial breakpoints: 0, a binary ladder up to 1/2, then 1 and T.
    let mut breaks = Vec::with_capacity(48);
    breaks.push(0.0f64);
    let mut p = 2.0f64.powi(-44);
    while p < 0.75 {
        breaks.push(p);
        p *= 2.0;
    }
    breaks.push(1.0);
    breaks.push(t_end);

    let mut panels: Vec<Panel> = Vec::with_capacity(breaks.len() + 64);
    for w in breaks.windows(2) {
        let (value, err) = gk15(&f, w[0], w[1]);
        panels.push(Panel {
            a: w[0],
            b: w[1],
            value,
            err,
        });
    }

    let mut total_value: Complex64 = panels.iter().map(|p| p.value).sum();
    let mut total_err: f64 = panels.iter().map(|p| p.err).sum();
    let mut splits = 0usize;

    loop {
        let target = cfg.abs_tol.max(cfg.rel_tol * total_value.norm());
        if total_err <= target {
            break;
        }
        if splits >= cfg.max_subdivisions {
            return Err(Error::Convergence {
                context: "adaptive quadrature",
                limit: cfg.max_subdivisions,
            });
        }
        // worst panel, first index on ties: deterministic
        let mut worst = 0;
        for (idx, p) in panels.iter().enumerate() {
            if p.err > panels[worst].err {
                worst = idx;
            }
        }
        let Panel { a, b, value, err } = panels.swap_remove(worst);
        total_value -= value;
        total_err -= err;
        let mid = 0.5 * (a + b);
        for (lo, hi) in [(a, mid), (mid, b)] {
            let (v, e) = gk15(&f, lo, hi);
            total_value += v;
            total_err += e;
            panels.push(Panel {
                a: lo,
                b: hi,
                value: v,
                err: e,
            });
        }
        splits += 1;
    }

    // Fixed summation order (ascending panel position), independent of the
    // refinement history, so results are bit-reproducible.
    panels.sort_by(|p, q| p.a.partial_cmp(&q.a).unwrap());
    let value: Complex64 = panels.iter().map(|p| p.value).sum();
    let mut est: f64 = panels.iter().map(|p| p.err).sum();
    est += (-t_end).exp() * (t_end.powf(z.re) + 1.0) / (t_end - 1.0);

    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Overflow(format!("K({z}) exceeds the f64 range")));
    }
    Ok(Evaluation {
        value,
        method: Route::Quadrature,
        est_abs_error: est,
        warnings: Vec::new(),
    })
}

// 15-point Gauss-Kronrod pair (QUADPACK constants), applied to a
// complex-valued integrand on [a, b]. Returns (integral, error estimate).
#[allow(clippy::excessive_precision)]
fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    const XGK: [f64; 8] = [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144838258730,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ];
    const WG: [f64; 4] = [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ];
    const WGK: [f64; 8] = [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ];
    let n = XGK.len();

    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();

    let f_center = f(center);
    let mut res_gauss = f_center * WG[n / 2 - 1];
    let mut res_kronrod = f_center * WGK[n - 1];
    let mut res_abs = res_kronrod.norm();

    let mut fv1 = [Complex64::new(0.0, 0.0); 7];
    let mut fv2 = [Complex64::new(0.0, 0.0); 7];

    for (j, wg) in WG.iter().enumerate().take((n - 1) / 2) {
        let jtw = j * 2 + 1;
        let abscissa = half * XGK[jtw];
        let fval1 = f(center - abscissa);
        let fval2 = f(center + abscissa);
        let fsum = fval1 + fval2;
        fv1[jtw] = fval1;
        fv2[jtw] = fval2;
        res_gauss += *wg * fsum;
        res_kronrod += WGK[jtw] * fsum;
        res_abs += WGK[jtw] * (fval1.norm() + fval2.norm());
    }

    for j in 0..n / 2 {
        let jtwm1 = j * 2;
        if jtwm1 >= n - 1 {
            break;
        }
        let abscissa = half * XGK[jtwm1];
        let fval1 = f(center - abscissa);
        let fval2 = f(center + abscissa);
        fv1[jtwm1] = fval1;
        fv2[jtwm1] = fval2;
        res_kronrod += WGK[jtwm1] * (fval1 + fval2);
        res_abs += WGK[jtwm1] * (fval1.norm() + fval2.norm());
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[n - 1] * (f_center - mean).norm();
    for j in 0..n - 1 {
        res_asc += WGK[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
    }

    let err = ((res_kronrod - res_gauss) * half).norm();
    let value = res_kronrod * half;
    res_abs *= abs_half;
    res_asc *= abs_half;

    (value, rescale_error(err, res_abs, res_asc))
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // independent oracle: !n = 0! + 1! + ... + (n-1)! in exact integers
    fn left_factorial_oracle(n: u32) -> BigInt {
        let mut sum = BigInt::from(0);
        for k in 0..n {
            let mut f = BigInt::from(1);
            for j in 2..=k {
                f *= j;
            }
            sum += f;
        }
        sum
    }

    #[test]
    fn integrand_examples() {
        // z = 1 collapses the quotient
        let v = kurepa_integrand(c(1.0, 0.0), 3.0).unwrap();
        assert!((v - c((-3.0f64).exp(), 0.0)).norm() < 1e-15);
        // removable point: (t^2 - 1)/(t - 1) -> 2 at t = 1
        let v = kurepa_integrand(c(2.0, 0.0), 1.0).unwrap();
        assert!((v - c(2.0 * (-1.0f64).exp(), 0.0)).norm() < 1e-12);
        // z = 0 kills the numerator
        for t in [0.0, 0.5, 1.0, 7.0] {
            assert_eq!(kurepa_integrand(c(0.0, 0.0), t).unwrap(), c(0.0, 0.0));
        }
        // limit at t = 0
        let v = kurepa_integrand(c(2.5, 0.0), 0.0).unwrap();
        assert_eq!(v, c(1.0, 0.0));
    }

    #[test]
    fn integrand_domain_errors() {
        assert!(matches!(
            kurepa_integrand(c(1.0, 0.0), -0.5),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            kurepa_integrand(c(-1.5, 0.0), 0.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn patch_window_matches_the_direct_quotient() {
        // direct evaluation at |t-1| ~ 1e-6 still carries ~10 good digits;
        // the series value must sit inside that envelope
        for z in [c(2.7, 0.0), c(0.5, 3.0), c(5.0, -2.0)] {
            for t in [1.0 + 0.9e-6, 1.0 - 0.7e-6] {
                let series = kurepa_integrand(z, t).unwrap();
                let direct = ((z * t.ln()).exp() - 1.0) / (t - 1.0) * (-t).exp();
                assert!(
                    (series - direct).norm() <= 1e-9 * (1.0 + series.norm()),
                    "patch mismatch for z = {z}, t = {t}"
                );
            }
        }
    }

    #[test]
    fn collapses_to_exponential_at_z_one() {
        let cfg = QuadratureConfig::default();
        let r = integrate_k(c(1.0, 0.0), &cfg).unwrap();
        assert!((r.value - c(1.0, 0.0)).norm() <= 10.0 * cfg.abs_tol);
        assert_eq!(r.method, Route::Quadrature);
    }

    #[test]
    fn matches_exact_left_factorials_at_integers() {
        let cfg = QuadratureConfig::default();
        for n in 1..=10u32 {
            let want = left_factorial_oracle(n).to_f64().unwrap();
            let got = integrate_k(c(n as f64, 0.0), &cfg).unwrap();
            assert!(
                (got.value - c(want, 0.0)).norm() <= 10.0 * cfg.rel_tol * want.max(1.0),
                "n = {n}: got {}, want {want}",
                got.value
            );
        }
    }

    #[test]
    fn rejects_left_half_plane() {
        let cfg = QuadratureConfig::default();
        assert!(matches!(
            integrate_k(c(0.0, 0.0), &cfg),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            integrate_k(c(-1.5, 2.0), &cfg),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn tail_is_sound() {
        // doubling the cutoff must not move the result
        for z in [c(0.5, 0.0), c(2.5, 1.5), c(5.0, -3.0)] {
            let base = QuadratureConfig::default();
            let t = base.effective_tail(z.re);
            let far = QuadratureConfig {
                tail_cutoff: Some(2.0 * t),
                ..base.clone()
            };
            let near = QuadratureConfig {
                tail_cutoff: Some(t),
                ..base.clone()
            };
            let a = integrate_k(z, &near).unwrap().value;
            let b = integrate_k(z, &far).unwrap().value;
            assert!((a - b).norm() < base.abs_tol, "tail moved for z = {z}");
        }
    }

    #[test]
    fn error_estimate_does_not_spike_at_the_removable_point() {
        let cfg = QuadratureConfig::default();
        let on_axis = integrate_k(c(2.0, 0.0), &cfg).unwrap().est_abs_error;
        let off_axis = integrate_k(c(2.0, 5.0), &cfg).unwrap().est_abs_error;
        assert!(on_axis <= 100.0 * off_axis);
    }

    #[test]
    fn oscillatory_small_re_converges() {
        // t^z oscillates in ln t; the logarithmic initial grid must cope
        let cfg = QuadratureConfig::default();
        let r = integrate_k(c(0.02, 4.8), &cfg).unwrap();
        assert!(r.value.norm().is_finite());
        assert!(r.est_abs_error <= cfg.rel_tol * r.value.norm() + 2.0 * cfg.abs_tol);
    }

    #[test]
    fn exhausting_the_budget_is_a_convergence_error() {
        let cfg = QuadratureConfig {
            rel_tol: 1e-15,
            abs_tol: 1e-300,
            tail_cutoff: None,
            max_subdivisions: 10,
        };
        assert!(matches!(
            integrate_k(c(0.03, 4.0), &cfg),
            Err(Error::Convergence { .. })
        ));
    }

    #[test]
    fn config_invariants_are_enforced() {
        let bad_tail = QuadratureConfig {
            tail_cutoff: Some(1.5),
            ..Default::default()
        };
        assert!(matches!(bad_tail.validate(), Err(Error::Domain(_))));
        let bad_subdiv = QuadratureConfig {
            max_subdivisions: 3,
            ..Default::default()
        };
        assert!(matches!(bad_subdiv.validate(), Err(Error::Domain(_))));
    }
}
