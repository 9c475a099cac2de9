use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::Rng;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::sampling::mc::{monte_carlo, McEstimate};
use crate::special::gamma::factorial;
use crate::special::linalg::det;
use crate::special::quadrature::{composite_rule, integrate_with_breaks};

/// Absolute tolerance of the one-dimensional transforms.
pub const TRANSFORM_TOLERANCE: f64 = 1e-10;

/// Real function shared across threads.
pub type RealFn<'a> = &'a (dyn Fn(f64) -> f64 + Sync);

fn check_y(y: f64) -> Result<()> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::InvalidArgument(format!("transform needs y > 0, got {y}")));
    }
    Ok(())
}

/// `∫_0^1 x^nu (1-x)^mu f(y/x) dx/x`.
///
/// The point `x = y`, where `f` typically leaves its support, is a forced
/// subdivision point.
pub fn beta_mellin_transform(f: RealFn, nu: u32, mu: u32, y: f64) -> Result<f64> {
    check_y(y)?;
    let g = |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        x.powi(nu as i32 - 1) * (1.0 - x).powi(mu as i32) * f(y / x)
    };
    integrate_with_breaks(g, 0.0, 1.0, &[y], TRANSFORM_TOLERANCE)
}

/// Upper cut-off for the Gamma kernel: `x^nu e^{-x} < 1e-20 · max(1, nu^nu e^{-nu})`.
fn gamma_cutoff(nu: u32) -> f64 {
    let nu = nu as f64;
    let peak = if nu > 0.0 { nu * nu.ln() - nu } else { 0.0 };
    let mut x = (nu + 1.0).max(1.0) * 2.0;
    while nu * x.ln() - x > peak.max(0.0) - 46.0 {
        x *= 1.25;
    }
    x
}

/// `∫_0^∞ x^nu e^{-x} f(y/x) dx/x`, truncated where the kernel is below
/// `1e-20` of its peak.
pub fn gamma_mellin_transform(f: RealFn, nu: u32, y: f64) -> Result<f64> {
    check_y(y)?;
    let g = |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        x.powi(nu as i32 - 1) * (-x).exp() * f(y / x)
    };
    let hi = gamma_cutoff(nu).max(2.0 * y);
    integrate_with_breaks(g, 0.0, hi, &[y, 1.0, nu as f64], TRANSFORM_TOLERANCE)
}

/// Sup-norm distance over `z_grid` between `m^nu g_beta(z/m)` (with
/// `mu = m - n - nu - 1`) and the Gamma transform `g_gamma(z)`, for each `m`.
pub fn mellin_bridge_distances(f: RealFn, n: u32, nu: u32, ms: &[u32], z_grid: &[f64]) -> Result<Vec<f64>> {
    let gamma: Vec<f64> = z_grid.iter().map(|&z| gamma_mellin_transform(f, nu, z)).collect::<Result<_>>()?;
    ms.iter()
        .map(|&m| {
            if m < n + nu + 1 {
                return Err(Error::InvalidSpec(format!("m = {m} < n + nu + 1")));
            }
            let mu = m - n - nu - 1;
            let scale = (m as f64).powi(nu as i32);
            let mut sup = 0.0f64;
            for (z, g) in z_grid.iter().zip(&gamma) {
                let b = scale * beta_mellin_transform(f, nu, mu, z / m as f64)?;
                sup = sup.max((b - g).abs());
            }
            Ok(sup)
        })
        .collect()
}

/// `n! det[∫ phi_k psi_j w dx]_{j,k}` over `[a, b]` by adaptive quadrature.
pub fn andreief_gram(phi: &[RealFn], psi: &[RealFn], weight: RealFn, domain: (f64, f64)) -> Result<f64> {
    let n = phi.len();
    if psi.len() != n || n == 0 {
        return Err(Error::Dimension(format!("{} phi and {} psi functions", n, psi.len())));
    }
    let (a, b) = domain;
    let mut g = DMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            g[(j, k)] = integrate_with_breaks(|x| phi[k](x) * psi[j](x) * weight(x), a, b, &[], 1e-12)?;
        }
    }
    Ok(factorial(n as u64).to_f64().unwrap_or(f64::NAN) * det(&g))
}

/// Monte Carlo estimate of `∫ det[phi_k(x_j)] det[psi_k(x_j)] prod w(x_j) dx`
/// over `[a, b]^n` with uniform draws.
pub fn andreief_lhs_mc(
    phi: &[RealFn],
    psi: &[RealFn],
    weight: RealFn,
    domain: (f64, f64),
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<McEstimate> {
    let n = phi.len();
    if psi.len() != n || n == 0 {
        return Err(Error::Dimension(format!("{} phi and {} psi functions", n, psi.len())));
    }
    let (a, b) = domain;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidArgument("Monte Carlo side needs a finite domain".into()));
    }
    let vol = (b - a).powi(n as i32);
    monte_carlo(samples, seed, exec, |rng| {
        let x: Vec<f64> = (0..n).map(|_| a + (b - a) * rng.gen::<f64>()).collect();
        let dp = det(&DMatrix::from_fn(n, n, |j, k| phi[k](x[j])));
        let dq = det(&DMatrix::from_fn(n, n, |j, k| psi[k](x[j])));
        let w: f64 = x.iter().map(|&v| weight(v)).product();
        Ok(Complex64::new(vol * dp * dq * w, 0.0))
    })
}

/// Quadrature controls for [`debruijn_transform`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TensorRule {
    pub panels: usize,
    pub order: usize,
}

impl Default for TensorRule {
    fn default() -> Self {
        Self { panels: 8, order: 20 }
    }
}

/// Two-variable Beta–Mellin transform of an antisymmetric `f`:
///
/// ```text
/// g(y1, y2) = ∫∫ x1^nu (1-x1)^mu x2^nu (1-x2)^mu f(y1/x1, y2/x2) dx1/x1 dx2/x2
/// ```
///
/// Both variables use the same composite rule, split at `{y1, y2}`, so the
/// discrete sum is antisymmetric whenever `f` is. Every evaluated pair is
/// checked for antisymmetry of `f`.
pub fn debruijn_transform(
    f: &(dyn Fn(f64, f64) -> f64 + Sync),
    nu: u32,
    mu: u32,
    y1: f64,
    y2: f64,
    rule: TensorRule,
) -> Result<f64> {
    check_y(y1)?;
    check_y(y2)?;
    let nodes = composite_rule(0.0, 1.0, &[y1, y2], rule.panels, rule.order);
    let kern: Vec<f64> = nodes
        .iter()
        .map(|&(x, w)| w * x.powi(nu as i32 - 1) * (1.0 - x).powi(mu as i32))
        .collect();
    let mut total = 0.0;
    let mut dev = 0.0f64;
    for (i, &(xi, _)) in nodes.iter().enumerate() {
        let mut row = 0.0;
        for (j, &(xj, _)) in nodes.iter().enumerate() {
            let (u, v) = (y1 / xi, y2 / xj);
            let fuv = f(u, v);
            let fvu = f(v, u);
            dev = dev.max((fuv + fvu).abs() / fuv.abs().max(1.0));
            row += kern[j] * fuv;
        }
        total += kern[i] * row;
    }
    if dev > 1e-12 {
        return Err(Error::NotAntisymmetric(dev));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn indicator(u: f64) -> f64 {
        if u > 0.0 && u < 1.0 {
            1.0
        } else {
            0.0
        }
    }

    /// Series for E1 with the Euler constant, valid for small `y`.
    fn e1(y: f64) -> f64 {
        let mut s = -0.577_215_664_901_532_9 - y.ln();
        let mut term = 1.0;
        for k in 1..80 {
            term *= -y / k as f64;
            s -= term / k as f64;
        }
        s
    }

    #[test]
    fn beta_transform_of_indicator() {
        for y in [0.1, 0.5, 0.9] {
            let g = beta_mellin_transform(&indicator, 1, 0, y).unwrap();
            assert!((g - (1.0 - y)).abs() < 1e-10);
        }
        assert_eq!(beta_mellin_transform(&indicator, 1, 3, 1.5).unwrap(), 0.0);
    }

    #[test]
    fn gamma_transform_of_indicator() {
        for y in [0.2, 1.0, 3.0] {
            let g1 = gamma_mellin_transform(&indicator, 1, y).unwrap();
            assert!((g1 - (-y).exp()).abs() < 1e-10, "nu=1 y={y}");
            let g0 = gamma_mellin_transform(&indicator, 0, y).unwrap();
            assert!((g0 - e1(y)).abs() < 1e-9, "nu=0 y={y}: {g0} vs {}", e1(y));
        }
    }

    #[test]
    fn gamma_transform_of_narrow_bump() {
        let eps = 1e-3;
        let bump = move |u: f64| if (u - 1.0).abs() < eps { 1.0 / (2.0 * eps) } else { 0.0 };
        for y in [0.5, 2.0] {
            let g = integrate_with_breaks(
                |x: f64| x.powi(2 - 1) * (-x).exp() * bump(y / x),
                y / (1.0 + eps),
                y / (1.0 - eps),
                &[],
                1e-12,
            )
            .unwrap();
            assert!((g - y * y * (-y).exp()).abs() < 1e-2 * y * y * (-y).exp());
        }
    }

    #[test]
    fn bridge_distances_decrease() {
        let f = |u: f64| if u > 0.0 && u < 1.0 { u * (1.0 - u) } else { 0.0 };
        let z: Vec<f64> = (1..=20).map(|i| 0.25 * i as f64).collect();
        let d = mellin_bridge_distances(&f, 2, 1, &[50, 100, 200], &z).unwrap();
        assert!(d[0] > d[1] && d[1] > d[2], "{d:?}");
    }

    #[test]
    fn andreief_examples() {
        let one: RealFn = &|_| 1.0;
        let x2: RealFn = &|x| x * x;
        let v = andreief_gram(&[x2], &[one], one, (0.0, 1.0)).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-14);
        // Legendre P0, P1, P2 on [-1,1] have norms 2, 2/3, 2/5.
        let p: [RealFn; 3] = [&|_| 1.0, &|x| x, &|x| 1.5 * x * x - 0.5];
        let v = andreief_gram(&p, &p, one, (-1.0, 1.0)).unwrap();
        assert!((v - 6.0 * 2.0 * (2.0 / 3.0) * 0.4).abs() < 1e-12);
        let phi: [RealFn; 2] = [&|x| x, &|x| (x * 2.0).exp()];
        let psi: [RealFn; 2] = [&|_| 1.0, &|x| x.sin()];
        let w: RealFn = &|x| 1.0 - x;
        let gram = andreief_gram(&phi, &psi, w, (0.0, 1.0)).unwrap();
        let mc = andreief_lhs_mc(&phi, &psi, w, (0.0, 1.0), 200_000, 3, Execution::Parallel).unwrap();
        assert!(mc.z_score(gram.into()) < 3.0, "{gram} vs {mc:?}");
    }

    #[test]
    fn debruijn_closed_form_and_antisymmetry() {
        let f = |a: f64, b: f64| if a < 1.0 && b < 1.0 { a - b } else { 0.0 };
        for &(y1, y2) in &[(0.2, 0.7), (0.55, 0.1), (0.33, 0.34)] {
            let g = debruijn_transform(&f, 1, 0, y1, y2, TensorRule::default()).unwrap();
            let want = (-y1 * y1.ln()) * (1.0 - y2) - (1.0 - y1) * (-y2 * y2.ln());
            assert!((g - want).abs() < 1e-12, "{g} vs {want}");
            let h = debruijn_transform(&f, 1, 0, y2, y1, TensorRule::default()).unwrap();
            assert!((g + h).abs() < 1e-12);
        }
        let d = debruijn_transform(&f, 2, 3, 0.4, 0.4, TensorRule::default()).unwrap();
        assert!(d.abs() < 1e-15);
        let bad = |a: f64, b: f64| a + b;
        assert!(matches!(
            debruijn_transform(&bad, 1, 0, 0.2, 0.3, TensorRule::default()),
            Err(Error::NotAntisymmetric(_))
        ));
    }
}
