use nalgebra::DMatrix;
use num_traits::ToPrimitive;

use crate::ensembles::weights::WeightSystem;
use crate::error::{Error, Result};
use crate::sampling::group::GAP_THRESHOLD;
use crate::special::gamma::{beta, factorial};
use crate::special::linalg::{det, min_gap, vandermonde};

/// Joint density `Δ(y) det[w_k(y_j)] / Z_n` of the squared singular values;
/// zero outside `(0, 1)^n`.
pub fn joint_density_product(ws: &WeightSystem, y: &[f64]) -> Result<f64> {
    let n = ws.spec.n;
    if y.len() != n {
        return Err(Error::Dimension(format!("expected {n} points, got {}", y.len())));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("density argument".into()));
    }
    if y.iter().any(|&v| !(v > 0.0 && v < 1.0)) {
        return Ok(0.0);
    }
    let m = DMatrix::from_fn(n, n, |j, k| ws.eval(k + 1, y[j]));
    Ok(vandermonde(y) * det(&m) / ws.z_n.to_f64().unwrap_or(f64::NAN))
}

/// Normalization of the fixed-`X` density: `[n! prod_{j=1}^n B(j+nu, m-n-nu)]^{-1}`.
pub fn fixed_x_constant(m: usize, n: usize, nu: usize) -> Result<f64> {
    let mut c = factorial(n as u64).to_f64().unwrap_or(f64::NAN);
    for j in 1..=n {
        c *= beta((j + nu) as f64, (m - n - nu) as f64)?;
    }
    Ok(1.0 / c)
}

fn positive_part_pow(x: f64, e: usize) -> f64 {
    if x > 0.0 {
        x.powi(e as i32)
    } else {
        0.0
    }
}

/// Density of the squared singular values of `Y = T X` for fixed `X` with
/// squared singular values `x`, where `T` is an `(n+nu) x n` truncation of
/// an `m x m` Haar unitary:
///
/// ```text
/// C prod x_j^{n-m} prod y_j^nu det[(x_k - y_j)_+^{m-n-nu-1}] Δ(y) / Δ(x)
/// ```
pub fn joint_density_fixed_x(x: &[f64], y: &[f64], m: usize, n: usize, nu: usize) -> Result<f64> {
    if x.len() != n || y.len() != n || n == 0 {
        return Err(Error::Dimension(format!("need {n} values of x and y, got {} and {}", x.len(), y.len())));
    }
    if m < n + nu + 1 {
        return Err(Error::InvalidSpec(format!("m = {m} < n + nu + 1 = {}", n + nu + 1)));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("density argument".into()));
    }
    if x.iter().any(|&v| v <= 0.0) {
        return Err(Error::InvalidArgument("x must be positive".into()));
    }
    let gap = min_gap(x);
    if gap < GAP_THRESHOLD {
        return Err(Error::DegenerateSpectrum { gap, threshold: GAP_THRESHOLD });
    }
    if y.iter().any(|&v| v <= 0.0) {
        return Ok(0.0);
    }
    let e = m - n - nu - 1;
    let d = DMatrix::from_fn(n, n, |j, k| positive_part_pow(x[k] - y[j], e));
    let px: f64 = x.iter().map(|v| v.powi(n as i32 - m as i32)).product();
    let py: f64 = y.iter().map(|v| v.powi(nu as i32)).product();
    Ok(fixed_x_constant(m, n, nu)? * px * py * det(&d) * vandermonde(y) / vandermonde(x))
}
