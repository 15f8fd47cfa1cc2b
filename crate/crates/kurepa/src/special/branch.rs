//! Principal determination of the power (-1)^z.

use num_complex::Complex64;
use std::f64::consts::PI;

/// `(-1)^z` under the principal branch, i.e. `exp(i*pi*z)`.
///
/// This is the only determination for which the continuation formula for
/// K(z) stays real on the positive real axis. Real integer exponents are
/// returned exactly as `+1`/`-1` so integer identities carry no rounding.
pub fn minus_one_pow(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re.fract() == 0.0 && z.re.is_finite() {
        // re % 2.0 is exact for integer-valued doubles
        let odd = (z.re % 2.0).abs() == 1.0;
        return Complex64::new(if odd { -1.0 } else { 1.0 }, 0.0);
    }
    // exp(i*pi*(x+iy)) = exp(-pi*y) * (cos(pi*x) + i sin(pi*x))
    let scale = (-PI * z.im).exp();
    Complex64::new(scale * (PI * z.re).cos(), scale * (PI * z.re).sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn integer_exponents_are_exact() {
        assert_eq!(minus_one_pow(Complex64::new(0.0, 0.0)), Complex64::new(1.0, 0.0));
        assert_eq!(minus_one_pow(Complex64::new(1.0, 0.0)), Complex64::new(-1.0, 0.0));
        assert_eq!(minus_one_pow(Complex64::new(2.0, 0.0)), Complex64::new(1.0, 0.0));
        assert_eq!(minus_one_pow(Complex64::new(-3.0, 0.0)), Complex64::new(-1.0, 0.0));
        assert_eq!(minus_one_pow(Complex64::new(-4.0, 0.0)), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn half_integer_gives_imaginary_unit() {
        let v = minus_one_pow(Complex64::new(0.5, 0.0));
        assert!((v - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    proptest! {
        // (-1)^{a+1} = -(-1)^a up to rounding in the trigonometric argument
        #[test]
        fn shift_by_one_negates(re in -20.0f64..20.0, im in -5.0f64..5.0) {
            let a = Complex64::new(re, im);
            let lhs = minus_one_pow(a + Complex64::new(1.0, 0.0));
            let rhs = -minus_one_pow(a);
            let tol = 1e-13 * (1.0 + rhs.norm()) * (1.0 + re.abs());
            prop_assert!((lhs - rhs).norm() <= tol);
        }
    }
}
