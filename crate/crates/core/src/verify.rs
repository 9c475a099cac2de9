//! Self-checks that pit every analytic formula against an independent route:
//! Monte Carlo, a second quadrature, exact arithmetic or a classical special
//! function. Each check reports one statistic and the threshold it must meet.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ensembles::{
    debruijn_transform, joint_density_fixed_x, joint_density_product, mellin_bridge_distances, TensorRule,
    WeightSystem,
};
use crate::error::Result;
use crate::exec::Execution;
use crate::hardedge::{
    bessel_limit_kernel, convergence_experiment, errors_decrease, rt_polynomial, ConvergenceRow, HardEdgeSpec,
    LimitKernel,
};
use crate::kernels::{telescoping_check, BiorthogonalSystem, ContourKernel, ContourOptions};
use crate::sampling::group::{cnp, group_integral_rhs_with_constant};
use crate::sampling::{diag, hciz_exact, mc_group_integral, mc_hciz, monte_carlo_vec, sample_product_squared_singvals};
use crate::sampling::{McEstimate, ProductSpec};
use crate::special::linalg::det;
use crate::special::pfaffian;
use crate::special::quadrature::composite_rule;

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `statistic <= threshold`.
    pub fn at_most(name: &str, statistic: f64, threshold: f64) -> Self {
        Self { name: name.into(), statistic, threshold, pass: statistic <= threshold }
    }

    /// Passes when `statistic < threshold`.
    pub fn below(name: &str, statistic: f64, threshold: f64) -> Self {
        Self { name: name.into(), statistic, threshold, pass: statistic < threshold }
    }
}

/// Settings of the default suite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Haar draws per Monte Carlo check.
    pub samples: usize,
    pub exec: Execution,
    /// Multiplies `c_{n,p}` in the group-integral reference; 1 leaves it intact.
    pub cnp_factor: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: 7, samples: 1_000_000, exec: Execution::default(), cnp_factor: 1.0 }
    }
}

/// Z-score bound for Monte Carlo comparisons.
pub const Z_THRESHOLD: f64 = 3.0;

/// Monte Carlo group integral at `p = 1` against the determinant formula.
/// With `require_rejections` the indicator must also have vetoed some draws.
pub fn check_group_integral(
    name: &str,
    a: &[f64],
    b: &[f64],
    require_rejections: bool,
    config: &SuiteConfig,
) -> Result<Check> {
    let p = 1;
    let est = mc_group_integral(&diag(a), &diag(b), p, config.samples, config.seed, config.exec)?;
    let exact = group_integral_rhs_with_constant(a, b, p, cnp(a.len(), p) * config.cnp_factor)?;
    let z = est.estimate.z_score(exact.into());
    log::info!("{name}: mc {} ± {}, exact {exact}, rejected {}", est.estimate.mean.re, est.estimate.std_error, est.rejected_fraction);
    let mut check = Check::at_most(name, z, Z_THRESHOLD);
    if require_rejections && est.rejected_fraction <= 0.0 {
        check.pass = false;
    }
    Ok(check)
}

/// HCIZ at `n = 2`, `t = 1`, `a = (1, 2)`, `b = (0, 1)`.
pub fn check_hciz(config: &SuiteConfig) -> Result<Check> {
    let (a, b, t) = ([1.0, 2.0], [0.0, 1.0], Complex64::new(1.0, 0.0));
    let est = mc_hciz(&diag(&a), &diag(&b), t, config.samples, config.seed, config.exec)?;
    Ok(Check::at_most("hciz", est.z_score(hciz_exact(&a, &b, t)?), Z_THRESHOLD))
}

/// Minimal valid dimensions: `m_1 = 2n + nu_1`, `m_j = n + nu_j + 1`.
pub fn minimal_spec(n: usize, nu: &[usize]) -> Result<ProductSpec> {
    let m = nu.iter().enumerate().map(|(j, &v)| if j == 0 { 2 * n + v } else { n + v + 1 }).collect();
    ProductSpec::new(n, nu.to_vec(), m)
}

/// Every `nu` in `{0, 1, 2}^r`.
fn nu_choices(r: usize) -> Vec<Vec<usize>> {
    (0..3usize.pow(r as u32))
        .map(|mut code| {
            (0..r)
                .map(|_| {
                    let d = code % 3;
                    code /= 3;
                    d
                })
                .collect()
        })
        .collect()
}

/// Exact `∫ P_j Q_k = δ_{jk}` for `n <= max_n`, `r <= max_r`, every
/// `nu_j ∈ {0, 1, 2}` and minimal `m`; the statistic counts failing systems.
pub fn check_biorthogonality(max_n: usize, max_r: usize, exec: Execution) -> Result<Check> {
    let mut specs = Vec::new();
    for r in 1..=max_r {
        for nu in nu_choices(r) {
            for n in 1..=max_n {
                specs.push(minimal_spec(n, &nu)?);
            }
        }
    }
    let ok = exec.map_slice(&specs, |s| BiorthogonalSystem::new(s)?.is_biorthogonal());
    let mut failures = 0usize;
    for (s, r) in specs.iter().zip(ok) {
        if !r? {
            log::warn!("not biorthogonal: {s:?}");
            failures += 1;
        }
    }
    Ok(Check::at_most("biorthogonality", failures as f64, 0.0))
}

/// Largest telescoping residual over `pairs` random off-lattice `(s, t)`
/// and `n = 1..=6`.
pub fn check_telescoping(pairs: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut point = || loop {
        let z = Complex64::new(rng.gen_range(-5.0..7.0), rng.gen_range(-3.0..3.0));
        if (z.re - z.re.round()).abs().max(z.im.abs()) >= 0.1 {
            return z;
        }
    };
    let mut worst = 0.0f64;
    for _ in 0..pairs {
        let (s, t) = (point(), point());
        for n in 1..=6 {
            worst = worst.max(telescoping_check(s, t, n));
        }
    }
    Check::below("telescoping", worst, 1e-12)
}

/// Largest ratio of consecutive Beta-to-Gamma bridge distances over
/// `m = 50, 100, 200`; below 1 means strictly decreasing.
pub fn check_mellin_bridge() -> Result<Check> {
    let f = |u: f64| if u > 0.0 && u < 1.0 { u * (1.0 - u) } else { 0.0 };
    let z: Vec<f64> = (1..=20).map(|i| 0.25 * i as f64).collect();
    let d = mellin_bridge_distances(&f, 2, 1, &[50, 100, 200], &z)?;
    log::info!("bridge distances {d:?}");
    let worst = d.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
    Ok(Check::below("mellin_bridge", worst, 1.0))
}

fn random_skew(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(-1.0..1.0);
            a[(i, j)] = v;
            a[(j, i)] = -v;
        }
    }
    a
}

/// Largest `|Pf(A)^2 - det A| / |det A|` over `count` random 6x6 matrices.
pub fn check_pfaffian(count: usize, seed: u64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let a = random_skew(6, &mut rng);
        let (pf, d) = (pfaffian(&a)?, det(&a));
        worst = worst.max((pf * pf - d).abs() / d.abs());
    }
    Ok(Check::below("pfaffian", worst, 1e-10))
}

/// Largest `|g(y1, y2) + g(y2, y1)|` of the two-variable transform of
/// `f(x1, x2) = x1 - x2` on the unit square.
pub fn check_debruijn(count: usize, seed: u64) -> Result<Check> {
    let f = |a: f64, b: f64| if a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0 { a - b } else { 0.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let (y1, y2) = (rng.gen_range(0.01..0.99), rng.gen_range(0.01..0.99));
        let g = debruijn_transform(&f, 2, 1, y1, y2, TensorRule::default())?;
        let h = debruijn_transform(&f, 2, 1, y2, y1, TensorRule::default())?;
        worst = worst.max((g + h).abs());
    }
    Ok(Check::below("debruijn_antisymmetry", worst, 1e-12))
}

/// `max |K_sum - K_contour| / max(1, |K_sum|)` on a grid.
pub fn kernel_discrepancy(spec: &ProductSpec, xs: &[f64], ys: &[f64], exec: Execution) -> Result<f64> {
    let sum = BiorthogonalSystem::new(spec)?.kernel_grid(xs, ys, exec);
    let contour = ContourKernel::new(spec, ContourOptions { exec, ..Default::default() })?.grid(xs, ys)?;
    Ok(sum
        .iter()
        .flatten()
        .zip(contour.iter().flatten())
        .map(|(a, b)| (a - b).abs() / a.abs().max(1.0))
        .fold(0.0, f64::max))
}

/// Sum route against contour route for `n = 4`, `nu = (1, 0)`, `m = (11, 7)`
/// on a 5x5 grid.
pub fn check_kernel_cross_route(exec: Execution) -> Result<Check> {
    let spec = ProductSpec::new(4, vec![1, 0], vec![11, 7])?;
    let g = [0.1, 0.3, 0.5, 0.7, 0.9];
    Ok(Check::below("kernel_cross_route", kernel_discrepancy(&spec, &g, &g, exec)?, 1e-6))
}

/// One histogram bin: the Monte Carlo fraction of squared singular values
/// per draw against `(1/n) ∫_bin K_n(x, x) dx`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BinComparison {
    pub lo: f64,
    pub hi: f64,
    pub observed: f64,
    pub std_error: f64,
    pub expected: f64,
}

impl BinComparison {
    pub fn z_score(&self) -> f64 {
        McEstimate { mean: self.observed.into(), std_error: self.std_error, samples: 0 }.z_score(self.expected.into())
    }
}

/// Histogram of sampled squared singular values against the analytic
/// one-point function, with equal bins on `[0, 1]`.
pub fn one_point_histogram(
    spec: &ProductSpec,
    bins: usize,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<BinComparison>> {
    let n = spec.n as f64;
    let est = monte_carlo_vec(samples, seed, exec, bins, |rng| {
        let mut counts = vec![0.0; bins];
        for v in sample_product_squared_singvals(spec, rng)? {
            counts[((v * bins as f64) as usize).min(bins - 1)] += 1.0 / n;
        }
        Ok(counts)
    })?;
    let sys = BiorthogonalSystem::new(spec)?;
    let expected = exec.map(bins, |b| {
        let (lo, hi) = (b as f64 / bins as f64, (b + 1) as f64 / bins as f64);
        composite_rule(lo, hi, &[], 2, 20).into_iter().map(|(x, w)| w * sys.kernel(x, x)).sum::<f64>() / n
    });
    Ok(est
        .iter()
        .zip(expected)
        .enumerate()
        .map(|(b, (e, expected))| BinComparison {
            lo: b as f64 / bins as f64,
            hi: (b + 1) as f64 / bins as f64,
            observed: e.mean.re,
            std_error: e.std_error,
            expected,
        })
        .collect())
}

/// Largest bin z-score of [`one_point_histogram`] with 20 bins.
pub fn check_one_point(spec: &ProductSpec, samples: usize, seed: u64, exec: Execution) -> Result<Check> {
    let bins = one_point_histogram(spec, 20, samples, seed, exec)?;
    let worst = bins.iter().map(BinComparison::z_score).fold(0.0, f64::max);
    Ok(Check::at_most("one_point_histogram", worst, Z_THRESHOLD))
}

/// `∫∫ p(y1, y2)` over a tensor Gauss–Legendre rule split at `breaks`.
pub fn tensor_mass(p: &(dyn Fn(f64, f64) -> f64 + Sync), hi: f64, breaks: &[f64], exec: Execution) -> f64 {
    let rule = composite_rule(0.0, hi, breaks, 24, 20);
    exec.map_slice(&rule, |&(a, wa)| wa * rule.iter().map(|&(b, wb)| wb * p(a, b)).sum::<f64>()).into_iter().sum()
}

/// Masses of the `n = 2` product density (`nu = (1, 0)`, `m = (7, 5)`) and the
/// fixed-`X` density (`x = (0.7, 0.4)`, `m = 6`, `nu = 1`); the statistic is
/// the larger deviation from 1.
pub fn check_normalization(exec: Execution) -> Result<Check> {
    let ws = WeightSystem::new(&ProductSpec::new(2, vec![1, 0], vec![7, 5])?)?;
    // graded panels towards the logarithmic endpoint at 0
    let graded = [1e-3, 1e-2, 0.1];
    let prod = tensor_mass(&|a, b| joint_density_product(&ws, &[a, b]).unwrap_or(f64::NAN), 1.0, &graded, exec);
    let x = [0.7, 0.4];
    let fixed = tensor_mass(
        &|a, b| joint_density_fixed_x(&x, &[a, b], 6, 2, 1).unwrap_or(f64::NAN),
        0.7,
        &[1e-3, 1e-2, 0.1, 0.4],
        exec,
    );
    log::info!("density masses: product {prod}, fixed {fixed}");
    let dev = (prod - 1.0).abs().max((fixed - 1.0).abs());
    Ok(Check::below("density_normalization", if dev.is_nan() { f64::INFINITY } else { dev }, 1e-6))
}

/// Geometric grid of `k >= 2` points from `lo` to `hi`.
pub fn geometric_grid(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    (0..k).map(|i| lo * (hi / lo).powf(i as f64 / (k - 1) as f64)).collect()
}

/// Limit kernel for `r = 1`, `nu = 0` against the Bessel kernel on a grid
/// in `[0.1, 10]^2`; the statistic is `sup |K - K_Bessel| / sup |K_Bessel|`.
pub fn check_bessel_limit(exec: Execution) -> Result<Check> {
    let grid = geometric_grid(0.1, 10.0, 8);
    let h = HardEdgeSpec::unperturbed(vec![0])?;
    let k = LimitKernel::new(&h, 10.0, ContourOptions { exec, ..Default::default() })?.grid(&grid, &grid)?;
    let (mut diff, mut scale) = (0.0f64, 0.0f64);
    for (i, &x) in grid.iter().enumerate() {
        for (j, &y) in grid.iter().enumerate() {
            let b = bessel_limit_kernel(x, y);
            diff = diff.max((k[i][j] - b).abs());
            scale = scale.max(b.abs());
        }
    }
    Ok(Check::below("hard_edge_bessel", diff / scale, 1e-6))
}

/// Finite-`n` kernels for `r = 1`, `nu = 0`, `m = 3n` against the limit at
/// `n = 8, 16, 24`; passes when the sup errors strictly decrease. The
/// statistic is the largest ratio of consecutive errors.
pub fn check_hard_edge_convergence(exec: Execution) -> Result<(Check, Vec<ConvergenceRow>)> {
    let family = |n: usize| ProductSpec::new(n, vec![0], vec![3 * n]);
    let grid = geometric_grid(0.1, 10.0, 5);
    let rows = convergence_experiment(&family, &[], &[8, 16, 24], &grid, ContourOptions { exec, ..Default::default() })?;
    let worst = rows.windows(2).map(|w| w[1].sup_error / w[0].sup_error).fold(0.0, f64::max);
    let mut check = Check::below("hard_edge_convergence", worst, 1.0);
    check.pass &= errors_decrease(&rows, 0.0);
    Ok((check, rows))
}

/// Numerical rank (singular values above `1e-7` of the largest) of the
/// difference between the `r = 2`, `nu = (0, 0)`, `J = {2}`, `mu = 1` limit
/// kernel and the `r = 1`, `nu = 0` one on a 12x12 grid; must not exceed
/// `deg R + 1`.
pub fn check_perturbation_rank(exec: Execution) -> Result<Check> {
    let perturbed = HardEdgeSpec::new(vec![0, 0], vec![2], vec![1])?;
    let base = HardEdgeSpec::unperturbed(vec![0])?;
    let deg = rt_polynomial(&perturbed)?.degree().unwrap_or(0);
    let grid = geometric_grid(0.1, 10.0, 12);
    let opts = ContourOptions { exec, ..Default::default() };
    let a = LimitKernel::new(&perturbed, 10.0, opts)?.grid(&grid, &grid)?;
    let b = LimitKernel::new(&base, 10.0, opts)?.grid(&grid, &grid)?;
    let d = DMatrix::from_fn(grid.len(), grid.len(), |i, j| a[i][j] - b[i][j]);
    let sv = d.singular_values();
    let rank = sv.iter().filter(|&&v| v > 1e-7 * sv.max()).count();
    Ok(Check::at_most("hard_edge_rank", rank as f64, (deg + 1) as f64))
}

/// The default suite: group integrals (plain and indicator-active), HCIZ,
/// exact biorthogonality, telescoping identity, Beta-to-Gamma bridge,
/// Pfaffians and the two-variable transform.
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<Check>> {
    Ok(vec![
        check_group_integral("group_integral", &[2.0, 3.0], &[0.5, 1.0], false, config)?,
        check_group_integral("group_integral_indicator", &[0.5, 2.0], &[1.0, 0.1], true, config)?,
        check_hciz(config)?,
        check_biorthogonality(6, 3, config.exec)?,
        check_telescoping(100, config.seed),
        check_mellin_bridge()?,
        check_pfaffian(50, config.seed)?,
        check_debruijn(20, config.seed)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_constructors() {
        assert!(Check::at_most("a", 0.0, 0.0).pass);
        assert!(!Check::below("a", 1.0, 1.0).pass);
        assert!(!Check::at_most("a", f64::NAN, 1.0).pass);
    }

    #[test]
    fn minimal_specs_are_tight() {
        let s = minimal_spec(3, &[1, 0, 2]).unwrap();
        assert_eq!(s.m, vec![7, 4, 6]);
        assert_eq!(nu_choices(2).len(), 9);
        assert!(nu_choices(3).contains(&vec![2, 0, 1]));
    }

    #[test]
    fn cheap_checks_pass() {
        assert!(check_telescoping(20, 1).pass);
        assert!(check_pfaffian(10, 1).unwrap().pass);
        assert!(check_biorthogonality(3, 2, Execution::Sequential).unwrap().pass);
    }

    #[test]
    fn corrupted_constant_fails() {
        let cfg = SuiteConfig { samples: 20_000, cnp_factor: 1.5, ..Default::default() };
        let c = check_group_integral("g", &[2.0, 3.0], &[0.5, 1.0], false, &cfg).unwrap();
        assert!(!c.pass && c.statistic > Z_THRESHOLD);
        let cfg = SuiteConfig { samples: 20_000, ..Default::default() };
        assert!(check_group_integral("g", &[2.0, 3.0], &[0.5, 1.0], false, &cfg).unwrap().pass);
    }

    #[test]
    fn histogram_bins_sum_to_one() {
        let spec = ProductSpec::new(2, vec![1], vec![7]).unwrap();
        let bins = one_point_histogram(&spec, 10, 2000, 3, Execution::Parallel).unwrap();
        let obs: f64 = bins.iter().map(|b| b.observed).sum();
        let exp: f64 = bins.iter().map(|b| b.expected).sum();
        assert!((obs - 1.0).abs() < 1e-12);
        assert!((exp - 1.0).abs() < 1e-8);
    }
}
