use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::hardedge::limit::LimitKernel;
use crate::hardedge::spec::{scaling_constant, HardEdgeSpec};
use crate::kernels::{BiorthogonalSystem, ContourOptions};
use crate::sampling::ProductSpec;
use crate::special::gamma::{complex_gamma, sin_pi};

/// One line of a finite-`n` to limit comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub c_n: f64,
    /// `sup |K_n(x/c_n, y/c_n)/c_n - K(x, y)|` over the grid.
    pub sup_error: f64,
}

/// Compares `K_n(x/c_n, y/c_n)/c_n`, computed by the exact sum, with the
/// limit kernel on `grid x grid` for every `n` in `ns`. Every member of the
/// family must keep `m_j - n` fixed on `J`.
pub fn convergence_experiment(
    family: &dyn Fn(usize) -> Result<ProductSpec>,
    j: &[usize],
    ns: &[usize],
    grid: &[f64],
    options: ContourOptions,
) -> Result<Vec<ConvergenceRow>> {
    let first = ns.first().ok_or_else(|| Error::InvalidArgument("no sizes given".into()))?;
    if grid.is_empty() || grid.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidArgument("grid must be nonempty and positive".into()));
    }
    let h = HardEdgeSpec::from_product(&family(*first)?, j)?;
    let bound = grid.iter().cloned().fold(0.0, f64::max);
    let limit = LimitKernel::new(&h, bound, options)?.grid(grid, grid)?;
    ns.iter()
        .map(|&n| {
            let spec = family(n)?;
            if HardEdgeSpec::from_product(&spec, j)? != h {
                return Err(Error::InvalidHardEdge(format!("family changes its limit parameters at n = {n}")));
            }
            let c = scaling_constant(&spec, j)?;
            let scaled: Vec<f64> = grid.iter().map(|v| v / c).collect();
            let finite = BiorthogonalSystem::new(&spec)?.kernel_grid(&scaled, &scaled, options.exec);
            let sup_error = finite
                .iter()
                .flatten()
                .zip(limit.iter().flatten())
                .map(|(f, l)| (f / c - l).abs())
                .fold(0.0, f64::max);
            Ok(ConvergenceRow { n, c_n: c, sup_error })
        })
        .collect()
}

/// True if each error is below `(1 + slack)` times its predecessor.
pub fn errors_decrease(rows: &[ConvergenceRow], slack: f64) -> bool {
    rows.windows(2).all(|w| w[1].sup_error < (1.0 + slack) * w[0].sup_error)
}

/// `Gamma(t+1-n)/Gamma(s+1-n) = sin(pi s)/sin(pi t) · Gamma(n-s)/Gamma(n-t)`,
/// the last ratio expanded as a finite product so large `n` cannot overflow.
pub fn reflected_gamma_ratio(s: Complex64, t: Complex64, n: usize) -> Result<Complex64> {
    let mut v = sin_pi(s) / sin_pi(t) * complex_gamma(1.0 - s)? / complex_gamma(1.0 - t)?;
    for l in 1..n {
        v *= (l as f64 - s) / (l as f64 - t);
    }
    Ok(v)
}

/// `Gamma(t+1+m)/Gamma(s+1+m)` as a finite product.
pub fn shifted_gamma_ratio(s: Complex64, t: Complex64, m: usize) -> Result<Complex64> {
    let mut v = complex_gamma(t + 1.0)? / complex_gamma(s + 1.0)?;
    for l in 1..=m {
        v *= (t + l as f64) / (s + l as f64);
    }
    Ok(v)
}

/// Relative deviations of the two large-`n` approximations
/// `Gamma(t+1-n)/Gamma(s+1-n) ≈ sin(pi s)/sin(pi t) n^{t-s}` and
/// `Gamma(t+1+m)/Gamma(s+1+m) ≈ m^{t-s}` (with `m = n`).
pub fn gamma_ratio_deviations(s: Complex64, t: Complex64, n: usize) -> Result<(f64, f64)> {
    let nf = n as f64;
    let reflected = sin_pi(s) / sin_pi(t) * Complex64::from(nf).powc(t - s);
    let shifted = Complex64::from(nf).powc(t - s);
    let e0 = (reflected_gamma_ratio(s, t, n)? / reflected - 1.0).norm();
    let e1 = (shifted_gamma_ratio(s, t, n)? / shifted - 1.0).norm();
    Ok((e0, e1))
}

/// Rows of `K_n(x/c_n, y/c_n)/c_n` for an explicit size, used when the limit
/// values are already known.
pub fn scaled_finite_kernel(spec: &ProductSpec, j: &[usize], xs: &[f64], ys: &[f64], exec: Execution) -> Result<Vec<Vec<f64>>> {
    let c = scaling_constant(spec, j)?;
    let sx: Vec<f64> = xs.iter().map(|v| v / c).collect();
    let sy: Vec<f64> = ys.iter().map(|v| v / c).collect();
    let k = BiorthogonalSystem::new(spec)?.kernel_grid(&sx, &sy, exec);
    Ok(k.into_iter().map(|row| row.into_iter().map(|v| v / c).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_products_match_gamma() {
        let (s, t) = (Complex64::new(-0.5, 1.3), Complex64::new(2.2, 0.4));
        for n in [1usize, 3, 7] {
            let direct = complex_gamma(t + 1.0 - n as f64).unwrap() / complex_gamma(s + 1.0 - n as f64).unwrap();
            let v = reflected_gamma_ratio(s, t, n).unwrap();
            assert!((v - direct).norm() < 1e-12 * direct.norm());
            let direct = complex_gamma(t + 1.0 + n as f64).unwrap() / complex_gamma(s + 1.0 + n as f64).unwrap();
            assert!((shifted_gamma_ratio(s, t, n).unwrap() - direct).norm() < 1e-12 * direct.norm());
        }
    }

    #[test]
    fn ratio_asymptotics_first_order() {
        let (s, t) = (Complex64::new(-0.5, 0.8), Complex64::new(1.5, -0.3));
        let (a0, a1) = gamma_ratio_deviations(s, t, 100).unwrap();
        let (b0, b1) = gamma_ratio_deviations(s, t, 1000).unwrap();
        assert!(b0 * 1000.0 < 10.0 && b1 * 1000.0 < 10.0);
        assert!((a0 / b0 - 10.0).abs() < 1.0, "{a0} {b0}");
        assert!((a1 / b1 - 10.0).abs() < 1.0, "{a1} {b1}");
    }

    #[test]
    fn finite_kernel_finite_on_diagonal() {
        let spec = ProductSpec::new(4, vec![0], vec![12]).unwrap();
        let k = scaled_finite_kernel(&spec, &[], &[0.5, 1.0], &[0.5, 1.0], Execution::Sequential).unwrap();
        assert!(k.iter().flatten().all(|v| v.is_finite()));
        assert!(k[0][0] > 0.0 && k[1][1] > 0.0);
    }

    #[test]
    fn family_must_fix_offsets_on_j() {
        let family = |n: usize| ProductSpec::new(n, vec![0, 0], vec![3 * n, n + 1 + n / 4]);
        let r = convergence_experiment(&family, &[2], &[2, 4], &[1.0], ContourOptions::default());
        assert!(matches!(r, Err(Error::InvalidHardEdge(_))));
    }
}
