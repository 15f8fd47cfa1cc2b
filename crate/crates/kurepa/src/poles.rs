//! Pole catalog and residues.
//!
//! K_i is meromorphic with simple poles at z = -i and z = -(i+m) for m >= 2;
//! the point -(i+1) is regular. The residues are exact rationals:
//!
//! ```text
//! res K_i(-i)       = -1 / (i-1)!
//! res K_i(-(i+m))   = (1/(i-1)!) * sum_{k=2}^{m} (-1)^{k-1} / k!,    m >= 2,
//! ```
//!
//! accumulated here in exact big-integer arithmetic with no floating
//! intermediates. `residue_numeric` re-derives them from the function values
//! alone through a trapezoidal Cauchy circle mean, which is what the
//! verification harness compares against.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::eval::{closed_form_parts, left_factorial_f64, FamilyIndex};
use crate::special::factorial;

/// A simple pole of K_i: location, order (always 1), and the exact residue
/// together with its floating rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleInfo {
    pub location: i64,
    pub order: u32,
    pub residue_exact: BigRational,
    pub residue_float: f64,
}

/// Whether `location` is a pole of K_i.
pub fn is_pole_location(i: FamilyIndex, location: i64) -> bool {
    let ii = i.get() as i64;
    location == -ii || location <= -(ii + 2)
}

/// Shared pole proximity gate: exact hit is `Pole`, within `radius` is
/// `NearPole`.
pub(crate) fn guard_near_poles(i: u32, z: Complex64, radius: f64) -> Result<()> {
    let ii = i as i64;
    let r0 = z.re.round();
    for cand in [r0 - 1.0, r0, r0 + 1.0] {
        let p = cand as i64;
        if p == -ii || p <= -(ii + 2) {
            let dist = Complex64::new(z.re - cand, z.im).norm();
            if dist == 0.0 {
                return Err(Error::Pole { location: p });
            }
            if dist <= radius {
                return Err(Error::NearPole {
                    location: p,
                    distance: dist,
                    radius,
                });
            }
        }
    }
    Ok(())
}

fn big_factorial(n: u64) -> BigInt {
    let mut f = BigInt::one();
    for k in 2..=n {
        f *= k;
    }
    f
}

/// All poles of K_i with location >= -limit, nearest first.
pub fn pole_catalog(i: FamilyIndex, limit: u32) -> Vec<PoleInfo> {
    let ii = i.get() as i64;
    let lim = limit as i64;
    let inv_fact = BigRational::new(BigInt::one(), big_factorial(i.get() as u64 - 1));
    let mut out = Vec::new();

    if ii <= lim {
        let residue = -inv_fact.clone();
        out.push(make_pole(-ii, residue));
    }

    // running sum of (-1)^{k-1}/k! for k = 2..=m, in exact rationals
    let mut sum = BigRational::zero();
    let mut fact = BigInt::one(); // m!
    let mut m: i64 = 2;
    fact *= 2;
    while ii + m <= lim {
        let term = BigRational::new(BigInt::from(if m % 2 == 0 { -1 } else { 1 }), fact.clone());
        sum += term;
        out.push(make_pole(-(ii + m), &inv_fact * &sum));
        m += 1;
        fact *= m;
    }
    out
}

fn make_pole(location: i64, residue: BigRational) -> PoleInfo {
    let residue_float = residue.to_f64().unwrap_or(f64::NAN);
    PoleInfo {
        location,
        order: 1,
        residue_exact: residue,
        residue_float,
    }
}

/// Trapezoidal Cauchy estimate of the residue of K_i at a pole: the mean of
/// `(z - p) K_i(z)` over 16 equally spaced points on `|z - p| = radius`.
///
/// Sampling this close to a pole is the whole point, so the evaluation goes
/// through the raw closed form rather than the radius-gated public entry.
pub fn residue_numeric(i: FamilyIndex, location: i64, radius: f64) -> Result<Complex64> {
    if !(1e-4..=0.4).contains(&radius) {
        return Err(Error::Domain(format!(
            "residue radius must lie in [1e-4, 0.4], got {radius}"
        )));
    }
    if !is_pole_location(i, location) {
        return Err(Error::Domain(format!(
            "z = {location} is not a pole of K_{}",
            i.get()
        )));
    }
    let ii = i.get() as u64;
    let fact = factorial(ii - 1);
    let lf = left_factorial_f64(ii - 1);
    let p = Complex64::new(location as f64, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..16 {
        let theta = 2.0 * PI * j as f64 / 16.0;
        let z = p + radius * Complex64::new(theta.cos(), theta.sin());
        let kw = closed_form_parts(z + (ii as f64 - 1.0))?.0;
        let ki_val = (kw - lf) / fact;
        acc += (z - p) * ki_val;
    }
    Ok(acc / 16.0)
}

/// Convenience check used by the exact residue-transfer identity:
/// `(i-1)! * res K_i(-(i+m)) = res K(-(m+1))` for m = 0 or m >= 2.
pub fn residue_transfer_holds(i: FamilyIndex, m: u32) -> bool {
    let ii = i.get();
    let lhs_catalog = pole_catalog(i, ii + m);
    let lhs = match lhs_catalog.iter().find(|p| p.location == -((ii + m) as i64)) {
        Some(p) => &p.residue_exact * BigRational::from(big_factorial(ii as u64 - 1)),
        None => return false,
    };
    let k_catalog = pole_catalog(FamilyIndex::new(1).unwrap(), m + 1);
    match k_catalog.iter().find(|p| p.location == -((m + 1) as i64)) {
        Some(p) => p.residue_exact == lhs,
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fam(i: i64) -> FamilyIndex {
        FamilyIndex::new(i).unwrap()
    }

    fn rational(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn catalog_for_k_itself() {
        let poles = pole_catalog(fam(1), 4);
        assert_eq!(poles.len(), 3);
        assert_eq!(poles[0].location, -1);
        assert_eq!(poles[0].residue_exact, rational(-1, 1));
        assert_eq!(poles[1].location, -3);
        assert_eq!(poles[1].residue_exact, rational(-1, 2));
        assert_eq!(poles[2].location, -4);
        assert_eq!(poles[2].residue_exact, rational(-1, 3));
        assert!((poles[2].residue_float + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn minus_two_is_absent() {
        let poles = pole_catalog(fam(1), 2);
        assert_eq!(poles.len(), 1);
        assert_eq!(poles[0].location, -1);
    }

    #[test]
    fn catalog_for_the_second_family_member() {
        let poles = pole_catalog(fam(2), 3);
        assert_eq!(poles.len(), 1);
        assert_eq!(poles[0].location, -2);
        assert_eq!(poles[0].residue_exact, rational(-1, 1));
        let poles = pole_catalog(fam(2), 2);
        assert_eq!(poles.len(), 1);
    }

    #[test]
    fn truncation_respects_the_limit() {
        let poles = pole_catalog(fam(1), 1);
        assert_eq!(poles.len(), 1);
        assert_eq!(poles[0].location, -1);
    }

    #[test]
    fn orders_are_all_one_and_floats_match() {
        for i in [1, 2, 3, 5] {
            for p in pole_catalog(fam(i), 12) {
                assert_eq!(p.order, 1);
                let expected = p.residue_exact.to_f64().unwrap();
                assert_eq!(p.residue_float, expected);
                assert!(p.residue_exact.denom() > &BigInt::zero());
            }
        }
    }

    #[test]
    fn residue_transfer_is_exact() {
        for i in 1..=4i64 {
            for m in [0u32, 2, 3, 4] {
                assert!(residue_transfer_holds(fam(i), m), "i = {i}, m = {m}");
            }
        }
    }

    #[test]
    fn circle_means_recover_the_exact_residues() {
        let r = residue_numeric(fam(1), -1, 1e-2).unwrap();
        assert!((r - Complex64::new(-1.0, 0.0)).norm() <= 1e-5, "got {r}");
        let r = residue_numeric(fam(3), -3, 1e-2).unwrap();
        assert!((r - Complex64::new(-0.5, 0.0)).norm() <= 1e-5, "got {r}");
        let r = residue_numeric(fam(1), -4, 1e-2).unwrap();
        assert!((r - Complex64::new(-1.0 / 3.0, 0.0)).norm() <= 1e-5, "got {r}");
    }

    #[test]
    fn non_poles_are_domain_errors() {
        assert!(matches!(
            residue_numeric(fam(1), -2, 1e-2),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            residue_numeric(fam(2), -3, 1e-2),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            residue_numeric(fam(1), -1, 0.5),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            residue_numeric(fam(1), -1, 1e-5),
            Err(Error::Domain(_))
        ));
    }

    proptest! {
        #[test]
        fn residues_are_reduced_rationals(i in 1i64..6, limit in 1u32..20) {
            for p in pole_catalog(fam(i), limit) {
                prop_assert_eq!(&p.residue_exact, &p.residue_exact.reduced());
                prop_assert!(p.residue_exact.denom() > &BigInt::zero());
                prop_assert!(p.location != -(i + 1));
                prop_assert!(p.location >= -(limit as i64));
            }
        }
    }
}
