use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::sampling::ProductSpec;
use crate::special::gamma::{complex_gamma, factorial};
use crate::special::linalg::det_exact;
use crate::special::poly::rat;
use crate::special::residue::{residue_expansion, LogPolyExpansion, RationalFunction};

/// `c_r = (m_1 - 2n - nu_1)! · prod_{j>=2} (m_j - n - nu_j - 1)!`.
pub fn weight_constant(spec: &ProductSpec) -> BigRational {
    let n = spec.n;
    let mut c = factorial((spec.m[0] - 2 * n - spec.nu[0]) as u64);
    for j in 1..spec.r() {
        c *= factorial((spec.m[j] - n - spec.nu[j] - 1) as u64);
    }
    BigRational::from_integer(c)
}

fn check_k(spec: &ProductSpec, k: usize) -> Result<()> {
    spec.validate()?;
    if k == 0 || k > spec.n {
        return Err(Error::Index { index: k, bound: spec.n + 1 });
    }
    Ok(())
}

/// Mellin transform of `w_k` without `c_r`, as a rational function of `s`:
/// `Gamma(s+nu_1+k-1)/Gamma(s+m_1-2n+k) · prod_{j>=2} Gamma(s+nu_j)/Gamma(s+m_j-n)`.
pub fn weight_rational(spec: &ProductSpec, k: usize) -> Result<RationalFunction> {
    check_k(spec, k)?;
    let n = spec.n as i64;
    let (nu1, m1) = (spec.nu[0] as i64, spec.m[0] as i64);
    let mut f = RationalFunction::gamma_ratio(nu1 + k as i64 - 1, (m1 - 2 * n - nu1 + 1) as u32);
    for j in 1..spec.r() {
        let (nu, m) = (spec.nu[j] as i64, spec.m[j] as i64);
        f.push_gamma_ratio(nu, (m - n - nu) as u32);
    }
    Ok(f)
}

/// The weight `w_k` on `(0, 1)` as an exact residue expansion.
pub fn weight_wk(spec: &ProductSpec, k: usize) -> Result<LogPolyExpansion> {
    let f = weight_rational(spec, k)?;
    Ok(residue_expansion(&f)?.scale(&weight_constant(spec)))
}

/// The Mellin transform of `w_k` continued to all `s` off its poles.
pub fn weight_mellin(spec: &ProductSpec, k: usize, s: Complex64) -> Result<Complex64> {
    check_k(spec, k)?;
    let n = spec.n as f64;
    let (nu1, m1) = (spec.nu[0] as f64, spec.m[0] as f64);
    let mut v = complex_gamma(s + nu1 + k as f64 - 1.0)? / complex_gamma(s + m1 - 2.0 * n + k as f64)?;
    for j in 1..spec.r() {
        v *= complex_gamma(s + spec.nu[j] as f64)? / complex_gamma(s + spec.m[j] as f64 - n)?;
    }
    Ok(v * weight_constant(spec).to_f64().unwrap_or(f64::NAN))
}

/// `∫_0^1 y^{s-1} w_k(y) dy` for `Re s > 0`, evaluated from the Gamma functions.
pub fn weight_moment(spec: &ProductSpec, k: usize, s: Complex64) -> Result<Complex64> {
    if !(s.re > 0.0) {
        return Err(Error::InvalidArgument(format!("weight moment needs Re s > 0, got {s}")));
    }
    weight_mellin(spec, k, s)
}

/// Exact moment at a positive integer `s`.
pub fn weight_moment_exact(spec: &ProductSpec, k: usize, s: u32) -> Result<BigRational> {
    if s == 0 {
        return Err(Error::InvalidArgument("weight moment needs s > 0".into()));
    }
    let f = weight_rational(spec, k)?;
    Ok(f.eval_exact(&rat(s as i64))? * weight_constant(spec))
}

/// `Z_n = n! det[ ∫ y^{j-1} w_k(y) dy ]_{j,k=1..n}`, exact.
pub fn normalization_zn(spec: &ProductSpec) -> Result<BigRational> {
    spec.validate()?;
    let n = spec.n;
    let mut rows = Vec::with_capacity(n);
    for j in 1..=n {
        let mut row = Vec::with_capacity(n);
        for k in 1..=n {
            row.push(weight_moment_exact(spec, k, j as u32)?);
        }
        rows.push(row);
    }
    let z = det_exact(rows) * BigRational::from_integer(factorial(n as u64));
    assert!(z > BigRational::from_integer(BigInt::from(0)), "moment matrix is singular for a valid spec");
    Ok(z)
}

/// Coefficient mass above which weights are evaluated in exact arithmetic.
pub const CANCELLATION_GUARD: f64 = 1e8;

/// The weights `w_1..w_n` of a product ensemble with their normalization.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSystem {
    pub spec: ProductSpec,
    pub weights: Vec<LogPolyExpansion>,
    pub c_r: BigRational,
    pub z_n: BigRational,
}

impl WeightSystem {
    pub fn new(spec: &ProductSpec) -> Result<Self> {
        spec.validate()?;
        let weights = (1..=spec.n).map(|k| weight_wk(spec, k)).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            spec: spec.clone(),
            weights,
            c_r: weight_constant(spec),
            z_n: normalization_zn(spec)?,
        })
    }

    /// `w_k(y)` (1-based `k`), summed exactly when the coefficients are
    /// large enough for floating-point cancellation to matter.
    pub fn eval(&self, k: usize, y: f64) -> f64 {
        let w = &self.weights[k - 1];
        if w.coefficient_l1() > CANCELLATION_GUARD {
            w.eval_accurate(y)
        } else {
            w.eval(y)
        }
    }

    /// Smallest weight value seen on a uniform interior grid.
    pub fn min_on_grid(&self, points: usize) -> f64 {
        let mut lo = f64::INFINITY;
        for w in &self.weights {
            for i in 1..points {
                lo = lo.min(w.eval_accurate(i as f64 / points as f64));
            }
        }
        lo
    }
}
