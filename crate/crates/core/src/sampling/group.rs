use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::sampling::haar::{sample_haar_unitary, ComplexMatrix};
use crate::sampling::mc::{monte_carlo, monte_carlo_flagged, McEstimate};
use crate::special::gamma::{binomial, factorial, pochhammer_exact};
use crate::special::linalg::{det, min_gap, vandermonde};

/// Minimum pairwise eigenvalue gap accepted by the determinant formulas.
pub const GAP_THRESHOLD: f64 = 1e-8;

/// Hermiticity tolerance at the API boundary.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Minimum Monte Carlo sample count for the group integrals.
pub const MIN_GROUP_SAMPLES: usize = 1000;

/// Diagonal complex matrix with the given real entries.
pub fn diag(a: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(a.len(), a.iter().map(|&x| Complex64::new(x, 0.0))))
}

fn hermitian_deviation(h: &ComplexMatrix) -> f64 {
    (h - h.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    if !h.is_square() {
        return Err(Error::Dimension(format!("{}x{} is not square", h.nrows(), h.ncols())));
    }
    let dev = hermitian_deviation(h);
    if dev > HERMITIAN_TOLERANCE {
        return Err(Error::NotHermitian(dev));
    }
    Ok(())
}

/// Strict Cholesky attempt; true iff every pivot is positive.
fn cholesky_positive(h: &ComplexMatrix) -> bool {
    let n = h.nrows();
    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = h[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) {
            return false;
        }
        let dj = d.sqrt();
        l[(j, j)] = dj.into();
        for i in j + 1..n {
            let mut s = h[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / dj;
        }
    }
    true
}

/// Matrix Heaviside function: true iff `H` is positive definite.
pub fn theta_positive_definite(h: &ComplexMatrix) -> Result<bool> {
    check_hermitian(h)?;
    Ok(cholesky_positive(h))
}

/// `c_{n,p} = prod_{j=0}^{n-1} C(p+n-1, j)^{-1}`, exact.
pub fn cnp_exact(n: usize, p: usize) -> BigRational {
    let top = (p + n - 1) as u64;
    (0..n as u64).fold(BigRational::one(), |acc, j| acc / BigRational::from_integer(binomial(top, j)))
}

pub fn cnp(n: usize, p: usize) -> f64 {
    cnp_exact(n, p).to_f64().unwrap_or(f64::NAN)
}

fn positive_part_pow(x: f64, e: usize) -> f64 {
    if x > 0.0 {
        x.powi(e as i32)
    } else {
        0.0
    }
}

fn check_spectra(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::Dimension(format!("spectra of sizes {} and {}", a.len(), b.len())));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("spectrum".into()));
    }
    for gap in [min_gap(a), min_gap(b)] {
        if gap < GAP_THRESHOLD {
            return Err(Error::DegenerateSpectrum { gap, threshold: GAP_THRESHOLD });
        }
    }
    Ok(())
}

/// `c · det[(a_j - b_k)_+^{p+n-1}] / (Δ(a) Δ(b))` for a caller-supplied
/// constant `c`.
pub fn group_integral_rhs_with_constant(a: &[f64], b: &[f64], p: usize, constant: f64) -> Result<f64> {
    check_spectra(a, b)?;
    let n = a.len();
    let m = DMatrix::from_fn(n, n, |j, k| positive_part_pow(a[j] - b[k], p + n - 1));
    Ok(constant * det(&m) / (vandermonde(a) * vandermonde(b)))
}

/// Closed form of `∫ det(A - U B U^*)^p θ(A - U B U^*) dU` for Hermitian
/// `A, B` with eigenvalues `a`, `b`.
pub fn group_integral_rhs(a: &[f64], b: &[f64], p: usize) -> Result<f64> {
    group_integral_rhs_with_constant(a, b, p, cnp(a.len(), p))
}

/// The same integral in the form valid when `min a >= max b`:
/// `det(A)^p det[(1 - b_k/a_j)^{p+n-1}] / (Δ(1/a) Δ(b) c̃)` with
/// `c̃ = prod_{j<n} (-(p+n-1))_j / j!`.
pub fn group_integral_separated(a: &[f64], b: &[f64], p: usize) -> Result<f64> {
    check_spectra(a, b)?;
    let n = a.len();
    let amin = a.iter().cloned().fold(f64::INFINITY, f64::min);
    let bmax = b.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if amin < bmax || amin <= 0.0 {
        return Err(Error::InvalidArgument("needs 0 < min a and max b <= min a".into()));
    }
    let shift = BigRational::from_integer(BigInt::from(-((p + n - 1) as i64)));
    let ct = (0..n).fold(BigRational::one(), |acc, j| {
        acc * pochhammer_exact(&shift, j) / BigRational::from_integer(factorial(j as u64))
    });
    let m = DMatrix::from_fn(n, n, |j, k| (1.0 - b[k] / a[j]).powi((p + n - 1) as i32));
    let inv: Vec<f64> = a.iter().map(|x| 1.0 / x).collect();
    let deta: f64 = a.iter().product();
    Ok(deta.powi(p as i32) * det(&m) / (vandermonde(&inv) * vandermonde(b) * ct.to_f64().unwrap_or(f64::NAN)))
}

/// Monte Carlo estimate of the restricted group integral together with the
/// fraction of draws where `A - U B U^*` is not positive definite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupIntegralEstimate {
    pub estimate: McEstimate,
    pub rejected_fraction: f64,
}

/// Averages `det(A - U B U^*)^p θ(A - U B U^*)` over Haar `U`.
pub fn mc_group_integral(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    p: usize,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<GroupIntegralEstimate> {
    check_hermitian(a)?;
    check_hermitian(b)?;
    if a.nrows() != b.nrows() {
        return Err(Error::Dimension(format!("A is {}x{}, B is {}x{}", a.nrows(), a.ncols(), b.nrows(), b.ncols())));
    }
    if samples < MIN_GROUP_SAMPLES {
        return Err(Error::InvalidArgument(format!("need at least {MIN_GROUP_SAMPLES} samples")));
    }
    let n = a.nrows();
    let (estimate, rejected) = monte_carlo_flagged(samples, seed, exec, |rng| {
        let u = sample_haar_unitary(n, rng);
        let mut h = a - &u * b * u.adjoint();
        // exact Hermitian symmetrization of rounding noise
        h = (&h + h.adjoint()).scale(0.5);
        if cholesky_positive(&h) {
            let d = h.determinant().re;
            Ok((Complex64::new(d.powi(p as i32), 0.0), false))
        } else {
            Ok((Complex64::new(0.0, 0.0), true))
        }
    })?;
    Ok(GroupIntegralEstimate { estimate, rejected_fraction: rejected as f64 / samples as f64 })
}

/// Exact HCIZ integral `∫ exp(t Tr A U B U^*) dU`:
/// `(prod_{j<n} j!) det[e^{t a_j b_k}] / (t^{n(n-1)/2} Δ(a) Δ(b))`, and 1 at `t = 0`.
pub fn hciz_exact(a: &[f64], b: &[f64], t: Complex64) -> Result<Complex64> {
    check_spectra(a, b)?;
    let n = a.len();
    if t == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let m = DMatrix::from_fn(n, n, |j, k| (t * a[j] * b[k]).exp());
    let sf: f64 = (1..n).map(|j| factorial(j as u64).to_f64().unwrap_or(f64::NAN)).product();
    let d = m.lu().determinant();
    Ok(d * sf / (t.powu((n * (n - 1) / 2) as u32) * vandermonde(a) * vandermonde(b)))
}

/// Monte Carlo estimate of `∫ exp(t Tr A U B U^*) dU` over Haar `U`.
pub fn mc_hciz(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    t: Complex64,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<McEstimate> {
    check_hermitian(a)?;
    check_hermitian(b)?;
    if samples < MIN_GROUP_SAMPLES {
        return Err(Error::InvalidArgument(format!("need at least {MIN_GROUP_SAMPLES} samples")));
    }
    let n = a.nrows();
    monte_carlo(samples, seed, exec, |rng| {
        let u = sample_haar_unitary(n, rng);
        Ok((t * (a * &u * b * u.adjoint()).trace()).exp())
    })
}
