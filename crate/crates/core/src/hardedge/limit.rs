use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hardedge::spec::{rt_polynomial, HardEdgeSpec};
use crate::kernels::contour::{ContourOptions, SeparableIntegral};
use crate::special::gamma::{complex_gamma, complex_rgamma, sin_pi};
use crate::special::quadrature::{ContourKind, ContourSpec};

/// Slope of the two halves of the `s`-path: `s = -1/2 - LEAN |σ| + iσ`.
pub const LEAN: f64 = 1.0;
/// Log-magnitude drop (about `1e-17`) below which path tails are cut.
const TAIL_DROP: f64 = 40.0;
const NODES_PER_UNIT: f64 = 32.0;
const MAX_HEIGHT: f64 = 200.0;
const MAX_T: usize = 400;

/// How the integrand is written.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum IntegrandForm {
    /// `prod_{j=0}^r Gamma(s+1+nu_j)/Gamma(t+1+nu_j) · sin(pi s)/sin(pi t)
    ///  · prod_k Gamma(t+1+mu_k)/Gamma(s+1+mu_k)`.
    #[default]
    Gamma,
    /// The same with the factors on `J` folded into `R(t)/R(s)`.
    Polynomial,
}

/// Hard-edge limit kernel
///
/// ```text
/// (2 pi i)^{-2} ∫ ds ∫_Σ dt prod_{j=0}^r Gamma(s+1+nu_j)/Gamma(t+1+nu_j)
///     · sin(pi s)/sin(pi t) · prod_k Gamma(t+1+mu_k)/Gamma(s+1+mu_k)
///     · x^t y^{-s-1} / (s - t)
/// ```
///
/// with `nu_0 = 0`. The `s`-path leaves `-1/2` upwards and bends to the
/// left, which keeps the integrand absolutely integrable when `r - q = 1`;
/// `Σ` is a rectangle around `[0, T]` in `Re t > -1/2`. Both cut-offs are
/// chosen from the integrand's decay for arguments up to `bound`.
pub struct LimitKernel {
    spec: HardEdgeSpec,
    bound: f64,
    height: f64,
    t_max: usize,
    integral: SeparableIntegral,
}

impl LimitKernel {
    pub fn new(spec: &HardEdgeSpec, bound: f64, options: ContourOptions) -> Result<Self> {
        Self::with_form(spec, bound, options, IntegrandForm::Gamma)
    }

    pub fn with_form(spec: &HardEdgeSpec, bound: f64, options: ContourOptions, form: IntegrandForm) -> Result<Self> {
        spec.validate()?;
        if !(bound > 0.0 && bound.is_finite()) {
            return Err(Error::InvalidArgument(format!("bound must be positive, got {bound}")));
        }
        let factors = Factors::new(spec, form)?;
        let t_max = t_cutoff(spec, bound)?;
        let height = s_cutoff(&factors, bound)?;
        let s_kind = ContourKind::VerticalLine { abscissa: -0.5, half_height: height, lean: LEAN };
        let t_kind = ContourKind::Rectangle {
            lo: Complex64::new(-0.25, -0.5),
            hi: Complex64::new(t_max as f64 + 0.5, 0.5),
        };
        let path = |k: ContourKind| {
            let len = ContourSpec::new(k, 16).length();
            ContourSpec::new(k, (NODES_PER_UNIT * len).ceil() as usize)
        };
        let integral = SeparableIntegral::new(path(s_kind), path(t_kind), |s| factors.a(s), |t| factors.b(t), options)?;
        log::debug!("hard-edge kernel: s-path half height {height}, t cut-off {t_max}");
        Ok(Self { spec: spec.clone(), bound, height, t_max, integral })
    }

    pub fn spec(&self) -> &HardEdgeSpec {
        &self.spec
    }

    /// Cut-offs `(H, T)` of the two paths.
    pub fn cutoffs(&self) -> (f64, usize) {
        (self.height, self.t_max)
    }

    pub fn value(&self, x: f64, y: f64) -> Result<f64> {
        if !(x > 0.0 && y > 0.0 && x <= self.bound && y <= self.bound) {
            return Err(Error::InvalidArgument(format!("arguments must lie in (0, {}], got ({x}, {y})", self.bound)));
        }
        self.integral.value(x, y)
    }

    /// Values on `xs x ys` (row `i` is `xs[i]`).
    pub fn grid(&self, xs: &[f64], ys: &[f64]) -> Result<Vec<Vec<f64>>> {
        xs.iter().map(|&x| ys.iter().map(|&y| self.value(x, y)).collect()).collect()
    }
}

/// One-shot evaluation with `bound = max(x, y)`.
pub fn limit_kernel(spec: &HardEdgeSpec, x: f64, y: f64, options: ContourOptions) -> Result<f64> {
    LimitKernel::new(spec, x.max(y), options)?.value(x, y)
}

struct Factors {
    /// `nu_j` entering as Gamma factors (all of them, or only those off `J`).
    nu: Vec<f64>,
    /// `mu_k` for the Gamma form; empty for the polynomial form.
    mu: Vec<f64>,
    rt: Option<crate::special::ExactPolynomial>,
}

impl Factors {
    fn new(spec: &HardEdgeSpec, form: IntegrandForm) -> Result<Self> {
        Ok(match form {
            IntegrandForm::Gamma => Self {
                nu: std::iter::once(0).chain(spec.nu.iter().copied()).map(|v| v as f64).collect(),
                mu: spec.mu.iter().map(|&v| v as f64).collect(),
                rt: None,
            },
            IntegrandForm::Polynomial => Self {
                nu: spec.free_nu().into_iter().map(|v| v as f64).collect(),
                mu: Vec::new(),
                rt: Some(rt_polynomial(spec)?),
            },
        })
    }

    /// `s`-side factor without `y^{-s-1}`.
    fn a(&self, s: Complex64) -> Result<Complex64> {
        let mut v = sin_pi(s);
        for &nu in &self.nu {
            v *= complex_gamma(s + 1.0 + nu)?;
        }
        for &mu in &self.mu {
            v *= complex_rgamma(s + 1.0 + mu)?;
        }
        if let Some(r) = &self.rt {
            v /= r.eval_complex(s);
        }
        Ok(v)
    }

    /// `t`-side factor without `x^t`.
    fn b(&self, t: Complex64) -> Result<Complex64> {
        let mut v = 1.0 / sin_pi(t);
        for &nu in &self.nu {
            v *= complex_rgamma(t + 1.0 + nu)?;
        }
        for &mu in &self.mu {
            v *= complex_gamma(t + 1.0 + mu)?;
        }
        if let Some(r) = &self.rt {
            v *= r.eval_complex(t);
        }
        Ok(v)
    }
}

/// Smallest integer `T` past the peak of
/// `x^T prod_k Gamma(T+1+mu_k) / prod_{j=0}^r Gamma(T+1+nu_j)` at `x = bound`
/// where it has dropped by `TAIL_DROP` in log-magnitude.
fn t_cutoff(spec: &HardEdgeSpec, bound: f64) -> Result<usize> {
    let lx = bound.ln();
    let (mut level, mut peak) = (0.0f64, 0.0f64);
    for t in 0..MAX_T {
        if level < peak - TAIL_DROP && t >= 2 {
            return Ok(t);
        }
        let tf = t as f64 + 1.0;
        level += lx + spec.mu.iter().map(|&m| (tf + m as f64).ln()).sum::<f64>()
            - (tf.ln() + spec.nu.iter().map(|&v| (tf + v as f64).ln()).sum::<f64>());
        peak = peak.max(level);
    }
    Err(Error::NonConvergence { change: (level - peak).exp(), tolerance: (-TAIL_DROP).exp() })
}

/// Half height `H` of the `s`-path past which `|A(s)| max(1, bound)^{Re(-s)-1}`
/// stays `TAIL_DROP` below its peak.
fn s_cutoff(factors: &Factors, bound: f64) -> Result<f64> {
    let ly = bound.max(1.0).ln();
    let mut peak = f64::NEG_INFINITY;
    let mut sigma = 0.0;
    while sigma <= MAX_HEIGHT {
        let s = Complex64::new(-0.5 - LEAN * sigma, sigma);
        let level = factors.a(s)?.norm().ln() + (LEAN * sigma - 0.5) * ly;
        peak = peak.max(level);
        if sigma >= 2.0 && (level < peak - TAIL_DROP || level == f64::NEG_INFINITY) {
            return Ok(sigma);
        }
        sigma += 0.5;
    }
    Err(Error::NonConvergence { change: f64::INFINITY, tolerance: (-TAIL_DROP).exp() })
}
