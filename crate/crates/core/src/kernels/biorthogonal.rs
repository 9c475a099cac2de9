use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::sampling::ProductSpec;
use crate::special::gamma::{complex_gamma, complex_rgamma, factorial, pochhammer};
use crate::special::poly::{rat, rational_from_f64, to_f64, ExactPolynomial};
use crate::special::residue::{residue_expansion, LogPolyExpansion, RationalFunction, SUPPORT_EPS};

fn check_index(spec: &ProductSpec, k: usize) -> Result<()> {
    spec.validate()?;
    if k >= spec.n {
        return Err(Error::Index { index: k, bound: spec.n });
    }
    Ok(())
}

/// `P_k(x) = sum_{i<=k} (-1)^{k-i} / (i! (k-i)!) prod_j (m_j-n+i)! / (nu_j+i)! x^i`.
pub fn pk_coefficients(spec: &ProductSpec, k: usize) -> Result<ExactPolynomial> {
    check_index(spec, k)?;
    let n = spec.n;
    let coeffs = (0..=k)
        .map(|i| {
            let mut c = BigRational::new(BigInt::one(), factorial(i as u64) * factorial((k - i) as u64));
            for j in 0..spec.r() {
                c *= BigRational::new(factorial((spec.m[j] - n + i) as u64), factorial((spec.nu[j] + i) as u64));
            }
            if (k - i) % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    Ok(ExactPolynomial::new(coeffs))
}

/// `(s-k)_k prod_j Gamma(s+nu_j)/Gamma(s+m_j-n)` as a rational function.
pub fn qk_rational(spec: &ProductSpec, k: usize) -> Result<RationalFunction> {
    check_index(spec, k)?;
    let n = spec.n as i64;
    let numerator = ExactPolynomial::from_shifts((0..k as i64).map(|l| l - k as i64));
    let mut f = RationalFunction::new(numerator, &[])?;
    for j in 0..spec.r() {
        let (nu, m) = (spec.nu[j] as i64, spec.m[j] as i64);
        f.push_gamma_ratio(nu, (m - n - nu) as u32);
    }
    Ok(f)
}

/// `Q_k` on `(0, 1)` as an exact residue expansion.
pub fn qk_expansion(spec: &ProductSpec, k: usize) -> Result<LogPolyExpansion> {
    residue_expansion(&qk_rational(spec, k)?)
}

/// `∫_0^1 y^{s-1} Q_k(y) dy = (s-k)_k prod_j Gamma(s+nu_j)/Gamma(s+m_j-n)` for `Re s > 0`.
pub fn qk_moment(spec: &ProductSpec, k: usize, s: Complex64) -> Result<Complex64> {
    check_index(spec, k)?;
    if !(s.re > 0.0) {
        return Err(Error::InvalidArgument(format!("Q moment needs Re s > 0, got {s}")));
    }
    let n = spec.n as f64;
    let mut v = pochhammer(s - k as f64, k);
    for j in 0..spec.r() {
        v *= complex_gamma(s + spec.nu[j] as f64)? * complex_rgamma(s + spec.m[j] as f64 - n)?;
    }
    Ok(v)
}

/// Exact moment at a positive integer `s`.
pub fn qk_moment_exact(spec: &ProductSpec, k: usize, s: u32) -> Result<BigRational> {
    if s == 0 {
        return Err(Error::InvalidArgument("Q moment needs s > 0".into()));
    }
    qk_rational(spec, k)?.eval_exact(&rat(s as i64))
}

/// Biorthogonal pair `(P_k, Q_k)`, `k = 0..n-1`, with float copies of the
/// polynomial coefficients for the fast evaluation path.
#[derive(Clone, Debug)]
pub struct BiorthogonalSystem {
    pub spec: ProductSpec,
    pub p: Vec<ExactPolynomial>,
    pub q: Vec<LogPolyExpansion>,
    p_float: Vec<Vec<f64>>,
}

impl BiorthogonalSystem {
    pub fn new(spec: &ProductSpec) -> Result<Self> {
        spec.validate()?;
        let p = (0..spec.n).map(|k| pk_coefficients(spec, k)).collect::<Result<Vec<_>>>()?;
        let q = (0..spec.n).map(|k| qk_expansion(spec, k)).collect::<Result<Vec<_>>>()?;
        let spread = p.iter().map(ExactPolynomial::coefficient_spread).fold(1.0, f64::max);
        let qmass = q.iter().map(LogPolyExpansion::coefficient_l1).fold(0.0, f64::max);
        log::debug!("biorthogonal system n={}: P coefficient spread {spread:e}, Q coefficient mass {qmass:e}", spec.n);
        let p_float = p.iter().map(|pk| pk.coeffs().iter().map(to_f64).collect()).collect();
        Ok(Self { spec: spec.clone(), p, q, p_float })
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    /// `[∫ P_j Q_k]_{j,k}` in exact arithmetic through the moments of `Q_k`.
    pub fn gram_exact(&self) -> Result<Vec<Vec<BigRational>>> {
        let n = self.n();
        let mut g = vec![vec![BigRational::zero(); n]; n];
        for k in 0..n {
            let max_deg = n;
            let moments: Vec<BigRational> =
                (1..=max_deg as u32).map(|s| qk_moment_exact(&self.spec, k, s)).collect::<Result<_>>()?;
            for (j, pj) in self.p.iter().enumerate() {
                g[j][k] = pj.coeffs().iter().zip(&moments).map(|(c, m)| c * m).sum();
            }
        }
        Ok(g)
    }

    /// True iff `∫ P_j Q_k = δ_{jk}` exactly.
    pub fn is_biorthogonal(&self) -> Result<bool> {
        let g = self.gram_exact()?;
        Ok(g.iter().enumerate().all(|(j, row)| {
            row.iter().enumerate().all(|(k, v)| if j == k { v.is_one() } else { v.is_zero() })
        }))
    }

    /// `∫_0^1 K_n(x, x) dx`, exact.
    pub fn trace_exact(&self) -> Result<BigRational> {
        let g = self.gram_exact()?;
        Ok((0..self.n()).map(|k| g[k][k].clone()).sum())
    }

    /// Exact values `P_k(x)` at the rational equal to `x`.
    fn p_exact_at(&self, x: f64) -> Vec<BigRational> {
        let xr = rational_from_f64(x);
        self.p.iter().map(|pk| pk.eval_exact(&xr)).collect()
    }

    /// Exact polynomial groups of every `Q_k` at `y`, or `None` off the support.
    fn q_groups_at(&self, y: f64) -> Option<(f64, Vec<Vec<BigRational>>)> {
        if !(y > 0.0 && y < 1.0) {
            return None;
        }
        let y = y.clamp(SUPPORT_EPS, 1.0 - SUPPORT_EPS);
        let yr = rational_from_f64(y);
        Some((y, self.q.iter().map(|qk| qk.eval_groups_exact(&yr)).collect()))
    }

    fn combine(&self, px: &[BigRational], qy: &Option<(f64, Vec<Vec<BigRational>>)>) -> f64 {
        let Some((y, groups)) = qy else { return 0.0 };
        let depth = groups.iter().map(Vec::len).max().unwrap_or(0);
        let ln = y.ln();
        let mut total = 0.0;
        let mut logf = 1.0;
        for d in 0..depth {
            if d > 0 {
                logf *= ln / d as f64;
            }
            let mut acc = BigRational::zero();
            for (pk, gk) in px.iter().zip(groups) {
                if let Some(g) = gk.get(d) {
                    acc += pk * g;
                }
            }
            total += to_f64(&acc) * logf;
        }
        total
    }

    /// `K_n(x, y) = sum_k P_k(x) Q_k(y)`, summed exactly for each power of
    /// `ln y` and rounded once per power.
    pub fn kernel(&self, x: f64, y: f64) -> f64 {
        self.combine(&self.p_exact_at(x), &self.q_groups_at(y))
    }

    /// `K_n` on the grid `xs x ys` (row `i` is `xs[i]`), sharing the exact
    /// evaluations of `P_k` and `Q_k` across the grid.
    pub fn kernel_grid(&self, xs: &[f64], ys: &[f64], exec: Execution) -> Vec<Vec<f64>> {
        let px = exec.map_slice(xs, |&x| self.p_exact_at(x));
        let qy = exec.map_slice(ys, |&y| self.q_groups_at(y));
        exec.map(xs.len(), |i| qy.iter().map(|q| self.combine(&px[i], q)).collect())
    }

    /// Floating-point `K_n`: Horner on rounded coefficients. Accurate only
    /// while the coefficients stay moderate (small `n` and `m`).
    pub fn kernel_fast(&self, x: f64, y: f64) -> f64 {
        if !(y > 0.0 && y < 1.0) {
            return 0.0;
        }
        self.p_float
            .iter()
            .zip(&self.q)
            .map(|(c, qk)| c.iter().rev().fold(0.0, |acc, v| acc * x + v) * qk.eval(y))
            .sum()
    }
}

/// `P_k(x)` from its contour integral over a rectangle around `[0, k]`.
pub fn pk_by_contour(spec: &ProductSpec, k: usize, x: f64, tol: f64) -> Result<f64> {
    use crate::special::quadrature::{contour_quadrature, ContourKind, ContourSpec};
    check_index(spec, k)?;
    let n = spec.n as f64;
    let c = ContourSpec::new(
        ContourKind::Rectangle { lo: Complex64::new(-0.25, -0.5), hi: Complex64::new(k as f64 + 0.25, 0.5) },
        64 * (k + 1),
    );
    let v = contour_quadrature(
        |t| {
            let mut g = Complex64::one() / pochhammer(t - k as f64, k + 1);
            for j in 0..spec.r() {
                g *= complex_gamma(t + 1.0 + spec.m[j] as f64 - n).unwrap_or_default()
                    * complex_rgamma(t + 1.0 + spec.nu[j] as f64).unwrap_or_default();
            }
            g * Complex64::new(x, 0.0).powc(t)
        },
        &c,
        tol,
    )?;
    Ok(v.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::quadrature::{integrate, integrate_with_breaks};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec(n: usize, nu: &[usize], m: &[usize]) -> ProductSpec {
        ProductSpec::new(n, nu.to_vec(), m.to_vec()).unwrap()
    }

    #[test]
    fn p0_and_q0_base_case() {
        // n=1, m=4: m - n = 3
        let s = spec(1, &[0], &[4]);
        assert_eq!(pk_coefficients(&s, 0).unwrap(), ExactPolynomial::constant(rat(6)));
        let q0 = qk_expansion(&s, 0).unwrap();
        for y in [0.1f64, 0.5, 0.9] {
            assert!((q0.eval(y) - 0.5 * (1.0 - y).powi(2)).abs() < 1e-15);
        }
        let sys = BiorthogonalSystem::new(&s).unwrap();
        assert!(sys.is_biorthogonal().unwrap());
        // K_1(x, y) = P_0 Q_0(y) does not depend on x
        assert_eq!(sys.kernel(0.2, 0.4), sys.kernel(0.9, 0.4));
    }

    #[test]
    fn degrees_and_index_errors() {
        let s = spec(4, &[1, 0], &[11, 7]);
        for k in 0..4 {
            assert_eq!(pk_coefficients(&s, k).unwrap().degree(), Some(k));
        }
        assert!(matches!(pk_coefficients(&s, 4), Err(Error::Index { .. })));
        assert!(qk_expansion(&s, 7).is_err());
    }

    #[test]
    fn q_moments() {
        let s = spec(3, &[1, 2], &[8, 6]);
        for k in 0..3 {
            let q = qk_expansion(&s, k).unwrap();
            if k >= 1 {
                assert!(qk_moment_exact(&s, k, k as u32).unwrap().is_zero());
            }
            for si in 1..6u32 {
                let e = qk_moment_exact(&s, k, si).unwrap();
                assert_eq!(e, q.moment_exact(si));
                let c = qk_moment(&s, k, (si as f64).into()).unwrap().re;
                assert!((c - to_f64(&e)).abs() <= 1e-12 * to_f64(&e).abs().max(1e-300));
                let quad = integrate(|y| y.powi(si as i32 - 1) * q.eval_accurate(y), 0.0, 1.0, 1e-14).unwrap();
                assert!((quad - to_f64(&e)).abs() < 1e-9 * to_f64(&e).abs().max(1e-6));
            }
        }
        // k=0, s=1: prod nu_j! / (m_j - n)!
        let want = (1.0 * 2.0) / (120.0 * 6.0);
        assert!((to_f64(&qk_moment_exact(&s, 0, 1).unwrap()) - want).abs() < 1e-16);
    }

    #[test]
    fn p_matches_contour() {
        let s = spec(4, &[1, 0], &[11, 7]);
        for k in 0..4 {
            let p = pk_coefficients(&s, k).unwrap().eval_f64(0.3);
            let c = pk_by_contour(&s, k, 0.3, 1e-13).unwrap();
            assert!((p - c).abs() < 1e-10 * p.abs().max(1.0), "k={k}: {p} vs {c}");
        }
    }

    #[test]
    fn exact_biorthogonality_small_cases() {
        for (n, nu, m) in [(2, vec![0, 1], vec![4, 4]), (3, vec![2, 2, 0], vec![8, 6, 4]), (5, vec![1], vec![11])] {
            let sys = BiorthogonalSystem::new(&spec(n, &nu, &m)).unwrap();
            assert!(sys.is_biorthogonal().unwrap());
            assert_eq!(sys.trace_exact().unwrap(), rat(n as i64));
        }
    }

    #[test]
    fn fast_and_exact_paths_agree_for_small_systems() {
        let sys = BiorthogonalSystem::new(&spec(3, &[1, 0], &[9, 6])).unwrap();
        for &(x, y) in &[(0.1, 0.2), (0.5, 0.5), (0.9, 0.3)] {
            let (a, b) = (sys.kernel(x, y), sys.kernel_fast(x, y));
            assert!((a - b).abs() < 1e-10 * a.abs().max(1.0));
        }
        let g = sys.kernel_grid(&[0.1, 0.5], &[0.2, 0.3, 1.5], Execution::Parallel);
        assert_eq!(g[1][1], sys.kernel(0.5, 0.3));
        assert_eq!(g[0][2], 0.0);
    }

    #[test]
    fn trace_by_quadrature_and_diagonal_positive() {
        let sys = BiorthogonalSystem::new(&spec(4, &[1, 0], &[11, 7])).unwrap();
        let t = integrate(|x| sys.kernel_fast(x, x), 0.0, 1.0, 1e-11).unwrap();
        assert!((t - 4.0).abs() < 1e-8);
        for i in 1..=50 {
            assert!(sys.kernel(i as f64 / 51.0, i as f64 / 51.0) >= -1e-9);
        }
    }

    #[test]
    fn reproducing_property() {
        let sys = BiorthogonalSystem::new(&spec(3, &[1, 0], &[9, 6])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..3 {
            let (x, y): (f64, f64) = (rng.gen_range(0.05..0.95), rng.gen_range(0.05..0.95));
            let lhs = integrate_with_breaks(|t| sys.kernel_fast(x, t) * sys.kernel_fast(t, y), 0.0, 1.0, &[x.min(y), x.max(y)], 1e-10).unwrap();
            let rhs = sys.kernel_fast(x, y);
            assert!((lhs - rhs).abs() < 1e-6 * rhs.abs().max(1.0), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn kernel_invariant_under_parameter_permutations() {
        let base = BiorthogonalSystem::new(&spec(3, &[1, 0, 2], &[8, 6, 7])).unwrap();
        let nu_perm = BiorthogonalSystem::new(&spec(3, &[1, 2, 0], &[8, 6, 7])).unwrap();
        let m_perm = BiorthogonalSystem::new(&spec(3, &[1, 0, 2], &[8, 7, 6])).unwrap();
        for &(x, y) in &[(0.2, 0.4), (0.7, 0.1), (0.5, 0.5)] {
            let k = base.kernel(x, y);
            assert!((k - nu_perm.kernel(x, y)).abs() < 1e-10 * k.abs().max(1.0));
            assert!((k - m_perm.kernel(x, y)).abs() < 1e-10 * k.abs().max(1.0));
        }
    }
}
