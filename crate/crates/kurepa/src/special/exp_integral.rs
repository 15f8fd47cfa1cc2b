//! The exponential-integral constant Ei(1).

/// Euler-Mascheroni constant (cross-checked against the Ei(1) series in the
/// tests below).
pub(crate) const EULER_GAMMA: f64 = 0.57721566490153286;

const EI_ONE_TERMS: usize = 30;

/// Ei(1), the exponential integral at 1.
///
/// Computed from `Ei(1) = gamma + sum_{k>=1} 1/(k*k!)`; thirty terms leave a
/// truncation error below 1e-34, so the result is correct to the last bit of
/// the summation. Summed smallest-term-first.
pub fn ei_one() -> f64 {
    let mut terms = [0.0f64; EI_ONE_TERMS];
    let mut fact = 1.0f64;
    for (i, slot) in terms.iter_mut().enumerate() {
        let k = (i + 1) as f64;
        fact *= k;
        *slot = 1.0 / (k * fact);
    }
    let mut sum = 0.0;
    for t in terms.iter().rev() {
        sum += t;
    }
    EULER_GAMMA + sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::ToPrimitive;

    #[test]
    fn coarse_bracket() {
        let v = ei_one();
        assert!(v > 1.8 && v < 2.0);
    }

    #[test]
    fn matches_reference_constant() {
        // 1.895117816355936755466521... to 25 digits
        assert!((ei_one() - 1.8951178163559368).abs() <= 1e-14);
    }

    #[test]
    fn matches_exact_rational_series() {
        // Independent oracle: the same series in exact rationals, plus the
        // Euler-Mascheroni constant taken to 20 digits.
        let mut sum = BigRational::new(BigInt::from(0), BigInt::from(1));
        let mut fact = BigInt::from(1);
        for k in 1..=30u32 {
            fact *= k;
            sum += BigRational::new(BigInt::from(1), BigInt::from(k) * &fact);
        }
        let gamma20: f64 = "0.57721566490153286061".parse().unwrap();
        let oracle = gamma20 + sum.to_f64().unwrap();
        assert!((ei_one() - oracle).abs() <= 1e-14);
    }
}
