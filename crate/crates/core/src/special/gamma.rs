//! Complex Gamma function, Pochhammer symbols and exact factorial helpers.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Lanczos shift (Godfrey's set).
const LANCZOS_G: f64 = 607.0 / 128.0;

const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_76e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_64e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

fn check_finite(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(format!("{z}")))
    }
}

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// `sin(pi z)` with the real part reduced modulo 2 before scaling, so that
/// zeros at the integers stay accurate for large `|Re z|`.
pub fn sin_pi(z: Complex64) -> Complex64 {
    let x = z.re - 2.0 * (z.re / 2.0).round();
    let (s, c) = (PI * x).sin_cos();
    let y = PI * z.im;
    Complex64::new(s * y.cosh(), c * y.sinh())
}

fn lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut series = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    let log_part = (z + 0.5) * t.ln() - t;
    (2.0 * PI).sqrt() * log_part.exp() * series
}

/// The Gamma function on the complex plane.
///
/// Lanczos approximation on `Re z >= 1/2`, reflection formula elsewhere.
pub fn complex_gamma(z: Complex64) -> Result<Complex64> {
    check_finite(z)?;
    if is_nonpositive_integer(z) {
        return Err(Error::GammaPole(z.re));
    }
    if z.re < 0.5 {
        let s = sin_pi(z);
        Ok(PI / (s * lanczos(1.0 - z)))
    } else {
        Ok(lanczos(z))
    }
}

/// `1/Gamma(z)`, entire, so it returns zero at the poles instead of failing.
pub fn complex_rgamma(z: Complex64) -> Result<Complex64> {
    check_finite(z)?;
    if is_nonpositive_integer(z) {
        return Ok(Complex64::zero());
    }
    if z.re < 0.5 {
        Ok(sin_pi(z) * lanczos(1.0 - z) / PI)
    } else {
        Ok(1.0 / lanczos(z))
    }
}

/// Real Gamma via the complex routine.
pub fn gamma(x: f64) -> Result<f64> {
    complex_gamma(Complex64::new(x, 0.0)).map(|z| z.re)
}

/// Beta function for positive real arguments.
pub fn beta(a: f64, b: f64) -> Result<f64> {
    Ok(gamma(a)? * gamma(b)? / gamma(a + b)?)
}

/// Rising factorial `a (a+1) ... (a+k-1)`.
pub fn pochhammer(a: Complex64, k: usize) -> Complex64 {
    (0..k).fold(Complex64::one(), |acc, i| acc * (a + i as f64))
}

/// Exact rising factorial for rational `a`.
pub fn pochhammer_exact(a: &BigRational, k: usize) -> BigRational {
    let mut acc = BigRational::one();
    let mut term = a.clone();
    for _ in 0..k {
        acc *= &term;
        term += BigRational::one();
    }
    acc
}

/// `n!` as an exact integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Exact `Gamma(a) / Gamma(b)` for positive integers `a, b`.
pub fn factorial_ratio(a: u64, b: u64) -> BigRational {
    assert!(a >= 1 && b >= 1, "factorial_ratio needs positive integer arguments");
    BigRational::new(factorial(a - 1), factorial(b - 1))
}

/// Binomial coefficient `C(n, k)` as an exact integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}
