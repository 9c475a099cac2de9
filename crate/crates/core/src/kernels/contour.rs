use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::sampling::ProductSpec;
use crate::special::gamma::{complex_gamma, complex_rgamma};
use crate::special::quadrature::{accept_by_doubling, ContourKind, ContourSpec};

/// Gauss–Legendre nodes per unit of path length at the base level.
const NODES_PER_UNIT: f64 = 32.0;

/// Quadrature controls for the double contour integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourOptions {
    /// Relative acceptance tolerance for node doubling.
    pub tolerance: f64,
    pub exec: Execution,
}

impl Default for ContourOptions {
    fn default() -> Self {
        Self { tolerance: 1e-10, exec: Execution::default() }
    }
}

/// The two paths: `Σ_n = [-1/4, n+1/4] x [-1/2, 1/2]` around the `t`-poles
/// `0..n-1`, and `C = [-(M+1/2), -1/2] x [-1/2, 1/2]` around the `s`-poles
/// `-1..-M` with `M = max_j (m_j - n)`. Their separation is 1/4.
pub fn kernel_contours(spec: &ProductSpec) -> (ContourSpec, ContourSpec) {
    let n = spec.n as f64;
    let deepest = spec.m.iter().map(|&m| m - spec.n).max().unwrap_or(1) as f64;
    let sigma = ContourKind::Rectangle { lo: Complex64::new(-0.25, -0.5), hi: Complex64::new(n + 0.25, 0.5) };
    let c = ContourKind::Hankel { apex: -0.5, height: 0.5, left: -(deepest + 0.5) };
    let nodes = |k: ContourKind| {
        let len = ContourSpec::new(k, 16).length();
        ContourSpec::new(k, (NODES_PER_UNIT * len).ceil() as usize)
    };
    (nodes(sigma), nodes(c))
}

/// Precomputed node values of a separable integrand `A(s) B(t) / (s - t)`
/// at one refinement level: `(s, w_s A(s))` and `(t, w_t B(t))`.
struct Level {
    s: Vec<(Complex64, Complex64)>,
    t: Vec<(Complex64, Complex64)>,
}

/// `(2 pi i)^{-2} ∫ ds ∫ dt A(s) B(t) x^t y^{-s-1} / (s - t)` over two fixed
/// disjoint paths, with node values cached for the base level and two
/// doublings.
pub(crate) struct SeparableIntegral {
    levels: Vec<Level>,
    options: ContourOptions,
}

impl SeparableIntegral {
    pub(crate) fn new(
        s_path: ContourSpec,
        t_path: ContourSpec,
        a: impl Fn(Complex64) -> Result<Complex64>,
        b: impl Fn(Complex64) -> Result<Complex64>,
        options: ContourOptions,
    ) -> Result<Self> {
        let mut levels = Vec::with_capacity(3);
        for level in 0..3u32 {
            let sp = ContourSpec { nodes: s_path.nodes << level, ..s_path };
            let tp = ContourSpec { nodes: t_path.nodes << level, ..t_path };
            let s = sp.nodes_weights().into_iter().map(|(s, w)| Ok((s, w * a(s)?))).collect::<Result<Vec<_>>>()?;
            let t = tp.nodes_weights().into_iter().map(|(t, w)| Ok((t, w * b(t)?))).collect::<Result<Vec<_>>>()?;
            levels.push(Level { s, t });
        }
        Ok(Self { levels, options })
    }

    fn at_level(&self, level: usize, x: f64, y: f64) -> Complex64 {
        let lv = &self.levels[level];
        let (lx, ly) = (x.ln(), y.ln());
        let bt: Vec<(Complex64, Complex64)> = lv.t.iter().map(|&(t, g)| (t, g * (t * lx).exp())).collect();
        let partial = self.options.exec.map_slice(&lv.s, |&(s, f)| {
            let a = f * (-(s + 1.0) * ly).exp();
            let inner: Complex64 = bt.iter().map(|&(t, b)| b / (s - t)).sum();
            a * inner
        });
        let total: Complex64 = partial.into_iter().sum();
        total / Complex64::new(0.0, 2.0 * PI).powu(2)
    }

    /// Real part of the integral, accepted once doubling the nodes on both
    /// paths changes it by at most the tolerance (relative to `max(1, |K|)`).
    pub(crate) fn value(&self, x: f64, y: f64) -> Result<f64> {
        accept_by_doubling(|level| Ok(self.at_level(level as usize, x, y)), self.options.tolerance).map(|v| v.re)
    }
}

/// `K_n(x, y)` by double contour quadrature of
///
/// ```text
/// (2 pi i)^{-2} ∫_C ds ∮_Σn dt prod_{j=0}^r Gamma(s+1+nu_j) Gamma(t+1+m_j-n)
///        / (Gamma(t+1+nu_j) Gamma(s+1+m_j-n)) · x^t y^{-s-1} / (s - t)
/// ```
///
/// with `m_0 = nu_0 = 0`. Gamma values are computed directly, independently
/// of the residue calculus used by the sum route.
pub struct ContourKernel {
    spec: ProductSpec,
    integral: SeparableIntegral,
}

impl ContourKernel {
    pub fn new(spec: &ProductSpec, options: ContourOptions) -> Result<Self> {
        spec.validate()?;
        let (sigma, c) = kernel_contours(spec);
        let integral = SeparableIntegral::new(c, sigma, |s| s_factor(spec, s), |t| t_factor(spec, t), options)?;
        Ok(Self { spec: spec.clone(), integral })
    }

    pub fn spec(&self) -> &ProductSpec {
        &self.spec
    }

    pub fn value(&self, x: f64, y: f64) -> Result<f64> {
        if !(x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0) {
            return Err(Error::InvalidArgument(format!("kernel arguments must lie in (0,1), got ({x}, {y})")));
        }
        self.integral.value(x, y)
    }

    /// Values on `xs x ys` (row `i` is `xs[i]`).
    pub fn grid(&self, xs: &[f64], ys: &[f64]) -> Result<Vec<Vec<f64>>> {
        xs.iter().map(|&x| ys.iter().map(|&y| self.value(x, y)).collect()).collect()
    }
}

fn s_factor(spec: &ProductSpec, s: Complex64) -> Result<Complex64> {
    let n = spec.n as f64;
    let mut f = complex_gamma(s + 1.0)? * complex_rgamma(s + 1.0 - n)?;
    for j in 0..spec.r() {
        f *= complex_gamma(s + 1.0 + spec.nu[j] as f64)? * complex_rgamma(s + 1.0 + spec.m[j] as f64 - n)?;
    }
    Ok(f)
}

fn t_factor(spec: &ProductSpec, t: Complex64) -> Result<Complex64> {
    let n = spec.n as f64;
    let mut g = complex_gamma(t + 1.0 - n)? * complex_rgamma(t + 1.0)?;
    for j in 0..spec.r() {
        g *= complex_gamma(t + 1.0 + spec.m[j] as f64 - n)? * complex_rgamma(t + 1.0 + spec.nu[j] as f64)?;
    }
    Ok(g)
}

/// One-shot `K_n(x, y)` by the contour route.
pub fn kernel_kn_contour(spec: &ProductSpec, x: f64, y: f64, options: ContourOptions) -> Result<f64> {
    ContourKernel::new(spec, options)?.value(x, y)
}
