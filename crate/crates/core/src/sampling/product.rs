use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::sampling::haar::{sample_truncation, ComplexMatrix};
use crate::sampling::rng::RngStream;

/// Ensemble parameters of `Y = T_r ... T_1`, where `T_j` is the
/// `(n+nu_j) x (n+nu_{j-1})` truncation of an `m_j x m_j` Haar unitary and
/// `nu_0 = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProductSpec {
    pub n: usize,
    pub nu: Vec<usize>,
    pub m: Vec<usize>,
}

impl ProductSpec {
    /// Validated constructor: `m_1 >= 2n + nu_1` and `m_j >= n + nu_j + 1`.
    pub fn new(n: usize, nu: Vec<usize>, m: Vec<usize>) -> Result<Self> {
        let spec = Self { n, nu, m };
        spec.validate()?;
        Ok(spec)
    }

    pub fn r(&self) -> usize {
        self.nu.len()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if self.n == 0 {
            return bad("n must be positive".into());
        }
        if self.nu.is_empty() {
            return bad("r must be positive".into());
        }
        if self.nu.len() != self.m.len() {
            return bad(format!("{} values of nu but {} values of m", self.nu.len(), self.m.len()));
        }
        let n = self.n;
        if self.m[0] < 2 * n + self.nu[0] {
            return bad(format!("m_1 = {} < 2n + nu_1 = {}", self.m[0], 2 * n + self.nu[0]));
        }
        for j in 1..self.r() {
            if self.m[j] < n + self.nu[j] + 1 {
                return bad(format!(
                    "m_{} = {} < n + nu_{} + 1 = {}",
                    j + 1,
                    self.m[j],
                    j + 1,
                    n + self.nu[j] + 1
                ));
            }
        }
        Ok(())
    }

    /// Shape `(rows, cols)` of factor `j` (0-based).
    pub fn factor_shape(&self, j: usize) -> (usize, usize) {
        let prev = if j == 0 { 0 } else { self.nu[j - 1] };
        (self.n + self.nu[j], self.n + prev)
    }
}

/// Tolerance for the contraction check on squared singular values.
const CONTRACTION_SLACK: f64 = 1e-12;

/// Samples `Y = T_r ... T_1`.
pub fn sample_product<R: Rng + ?Sized>(spec: &ProductSpec, rng: &mut R) -> Result<ComplexMatrix> {
    spec.validate()?;
    let (rows, cols) = spec.factor_shape(0);
    let mut y = sample_truncation(spec.m[0], rows, cols, rng)?;
    for j in 1..spec.r() {
        let (rows, cols) = spec.factor_shape(j);
        y = sample_truncation(spec.m[j], rows, cols, rng)? * y;
    }
    Ok(y)
}

/// Eigenvalues of `Y^* Y` in ascending order, from the singular values of `Y`.
///
/// Every value is asserted to lie in `[0, 1]` up to rounding and then clamped
/// there.
pub fn sample_product_squared_singvals<R: Rng + ?Sized>(spec: &ProductSpec, rng: &mut R) -> Result<Vec<f64>> {
    let y = sample_product(spec, rng)?;
    let mut x: Vec<f64> = y.singular_values().iter().map(|s| s * s).collect();
    x.sort_by(f64::total_cmp);
    for v in &mut x {
        assert!(
            (-CONTRACTION_SLACK..=1.0 + CONTRACTION_SLACK).contains(v),
            "squared singular value {v} outside [0, 1]"
        );
        *v = v.clamp(0.0, 1.0);
    }
    Ok(x)
}

/// `samples` draws of the squared singular values, draw `i` on stream `i`
/// of `seed`; identical for every execution strategy.
pub fn sample_product_draws(spec: &ProductSpec, samples: usize, seed: u64, exec: Execution) -> Result<Vec<Vec<f64>>> {
    spec.validate()?;
    exec.map(samples, |i| sample_product_squared_singvals(spec, &mut RngStream::new(seed, i as u64).rng()))
        .into_iter()
        .collect()
}

/// Number of squared singular values within `tol` of 1.
pub fn count_near_one(values: &[f64], tol: f64) -> usize {
    values.iter().filter(|&&v| v >= 1.0 - tol).count()
}
