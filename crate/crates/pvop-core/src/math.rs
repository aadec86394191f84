//! Scalar float helpers that work with and without `std`.
//!
//! With `std` enabled these forward to the native `f64` methods; otherwise
//! they fall back to `libm`. `powu` is shared by both builds so monomial
//! evaluation is bit-identical across configurations.

macro_rules! forward {
    ($name:ident, $std_method:ident, $libm_fn:ident) => {
        #[inline]
        pub fn $name(x: f64) -> f64 {
            #[cfg(feature = "std")]
            {
                x.$std_method()
            }
            #[cfg(not(feature = "std"))]
            {
                libm::$libm_fn(x)
            }
        }
    };
}

forward!(abs, abs, fabs);
forward!(sqrt, sqrt, sqrt);
forward!(exp, exp, exp);
forward!(ln, ln, log);
forward!(cos, cos, cos);
forward!(sin, sin, sin);

/// Nearest integer, ties away from zero.
#[inline]
pub fn round(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.round()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::round(x)
    }
}

/// Fractional part of `x`.
#[inline]
pub fn fract(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.fract()
    }
    #[cfg(not(feature = "std"))]
    {
        x - libm::trunc(x)
    }
}

/// `base^exp` for a real base.
#[inline]
pub fn powf(base: f64, exp: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        base.powf(exp)
    }
    #[cfg(not(feature = "std"))]
    {
        libm::pow(base, exp)
    }
}

/// Non-negative integer power by binary exponentiation. `powu(x, 0) == 1`.
#[inline]
pub fn powu(base: f64, mut exp: u32) -> f64 {
    let mut acc = 1.0;
    let mut b = base;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= b;
        }
        b *= b;
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powu_matches_repeated_multiplication() {
        assert_eq!(powu(3.0, 0), 1.0);
        assert_eq!(powu(2.0, 10), 1024.0);
        assert_eq!(powu(-2.0, 3), -8.0);
        assert_eq!(powu(0.0, 0), 1.0);
        assert_eq!(powu(0.0, 5), 0.0);
    }

    #[test]
    fn transcendental_shims() {
        assert!((exp(1.0) - core::f64::consts::E).abs() < 1e-15);
        assert!((ln(core::f64::consts::E) - 1.0).abs() < 1e-15);
        assert_eq!(sqrt(16.0), 4.0);
        assert_eq!(abs(-3.5), 3.5);
    }
}
