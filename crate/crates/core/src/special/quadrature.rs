//! Gauss–Legendre rules, adaptive real quadrature and contour integration.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut out = vec![(0.0, 0.0); n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    out
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre nodes on `[a, b]` split at `breaks`.
pub fn composite_rule(a: f64, b: f64, breaks: &[f64], panels: usize, order: usize) -> Vec<(f64, f64)> {
    let base = gauss_legendre(order);
    let mut cuts = vec![a];
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|&c| c > a && c < b).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    cuts.extend(inner);
    cuts.push(b);
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let h = (hi - lo) / panels as f64;
        for p in 0..panels {
            let c = lo + (p as f64 + 0.5) * h;
            for &(x, wt) in &base {
                out.push((c + 0.5 * h * x, 0.5 * h * wt));
            }
        }
    }
    out
}

const ADAPT_ORDER: usize = 15;
const ADAPT_MAX_DEPTH: u32 = 48;

fn gl_on(f: &dyn Fn(f64) -> f64, rule: &[(f64, f64)], a: f64, b: f64) -> f64 {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    rule.iter().map(|&(x, w)| w * f(c + h * x)).sum::<f64>() * h
}

/// Adaptive Gauss–Legendre quadrature of `f` over `[a, b]` to absolute
/// tolerance `tol`, bisecting wherever the 15-point rule and its two halves
/// disagree.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    integrate_with_breaks(f, a, b, &[], tol)
}

/// [`integrate`] with known non-smooth points (kinks, jumps) as forced cuts.
pub fn integrate_with_breaks(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: f64,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let rule = gauss_legendre(ADAPT_ORDER);
    let mut cuts = vec![a];
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|&c| c > a.min(b) && c < a.max(b)).collect();
    inner.sort_by(f64::total_cmp);
    if a > b {
        inner.reverse();
    }
    cuts.extend(inner);
    cuts.push(b);
    let pieces = (cuts.len() - 1) as f64;
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let whole = gl_on(&f, &rule, w[0], w[1]);
        total += adapt(&f, &rule, w[0], w[1], whole, tol / pieces, 0)?;
    }
    Ok(total)
}

fn adapt(
    f: &dyn Fn(f64) -> f64,
    rule: &[(f64, f64)],
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let left = gl_on(f, rule, a, m);
    let right = gl_on(f, rule, m, b);
    let change = (left + right - whole).abs();
    if !change.is_finite() {
        return Err(Error::NonFinite(format!("integrand on [{a}, {b}]")));
    }
    if change <= tol {
        return Ok(left + right);
    }
    if depth >= ADAPT_MAX_DEPTH {
        return Err(Error::NonConvergence { change, tolerance: tol });
    }
    Ok(adapt(f, rule, a, m, left, 0.5 * tol, depth + 1)? + adapt(f, rule, m, b, right, 0.5 * tol, depth + 1)?)
}

/// Shape of an integration path in the complex plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ContourKind {
    /// Positively oriented circle.
    Circle { center: Complex64, radius: f64 },
    /// Positively oriented loop around the negative real axis, crossing the
    /// real axis at `apex`, running at `Im = ±height` and closed at `Re = left`.
    /// With every pole of the integrand in `(left, apex)` this equals the
    /// infinite loop up to the decay of the integrand past `left`.
    Hankel { apex: f64, height: f64, left: f64 },
    /// Upward path through `abscissa` truncated at `|Im| = half_height`.
    /// With `lean > 0` the two halves bend left: `s = abscissa - lean |σ| + iσ`.
    VerticalLine { abscissa: f64, half_height: f64, lean: f64 },
    /// Positively oriented rectangle with opposite corners `lo`, `hi`.
    Rectangle { lo: Complex64, hi: Complex64 },
}

/// A contour plus its node budget (at least 16).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourSpec {
    pub kind: ContourKind,
    pub nodes: usize,
}

const PANEL_ORDER: usize = 16;

impl ContourSpec {
    pub fn new(kind: ContourKind, nodes: usize) -> Self {
        Self { kind, nodes: nodes.max(16) }
    }

    pub fn doubled(&self) -> Self {
        Self { nodes: self.nodes * 2, ..*self }
    }

    fn vertices(&self) -> Vec<Complex64> {
        let c = Complex64::new;
        match self.kind {
            ContourKind::Circle { .. } => Vec::new(),
            ContourKind::Hankel { apex, height, left } => vec![
                c(left, -height),
                c(apex, -height),
                c(apex, height),
                c(left, height),
                c(left, -height),
            ],
            ContourKind::VerticalLine { abscissa, half_height, lean } => vec![
                c(abscissa - lean * half_height, -half_height),
                c(abscissa, 0.0),
                c(abscissa - lean * half_height, half_height),
            ],
            ContourKind::Rectangle { lo, hi } => vec![
                lo,
                c(hi.re, lo.im),
                hi,
                c(lo.re, hi.im),
                lo,
            ],
        }
    }

    /// Path length.
    pub fn length(&self) -> f64 {
        match self.kind {
            ContourKind::Circle { radius, .. } => 2.0 * PI * radius,
            _ => self.vertices().windows(2).map(|w| (w[1] - w[0]).norm()).sum(),
        }
    }

    /// Points `z_i` and complex weights `w_i` (including `dz`) such that
    /// `∫ f(z) dz ≈ sum_i w_i f(z_i)`.
    pub fn nodes_weights(&self) -> Vec<(Complex64, Complex64)> {
        if let ContourKind::Circle { center, radius } = self.kind {
            let n = self.nodes;
            return (0..n)
                .map(|k| {
                    let e = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
                    (center + radius * e, Complex64::i() * radius * e * (2.0 * PI / n as f64))
                })
                .collect();
        }
        let verts = self.vertices();
        let total = self.length();
        let panels_total = (self.nodes / PANEL_ORDER).max(verts.len() - 1) as f64;
        let rule = gauss_legendre(PANEL_ORDER);
        let mut out = Vec::with_capacity(self.nodes + 4 * PANEL_ORDER);
        for w in verts.windows(2) {
            let (z0, z1) = (w[0], w[1]);
            let len = (z1 - z0).norm();
            if len == 0.0 {
                continue;
            }
            let panels = ((panels_total * len / total).round() as usize).max(1);
            let dz = (z1 - z0) / panels as f64;
            for p in 0..panels {
                let mid = z0 + dz * (p as f64 + 0.5);
                for &(x, wt) in &rule {
                    out.push((mid + 0.5 * dz * x, 0.5 * dz * wt));
                }
            }
        }
        out
    }

    /// `(1 / 2 pi i) sum_i w_i f(z_i)` at this node budget.
    pub fn apply(&self, f: &dyn Fn(Complex64) -> Complex64) -> Complex64 {
        let sum: Complex64 = self.nodes_weights().into_iter().map(|(z, w)| w * f(z)).sum();
        sum / Complex64::new(0.0, 2.0 * PI)
    }
}

/// Accepts a sequence of refinements once two consecutive values differ by
/// at most `tol · max(1, |value|)`; gives up after two doublings.
pub fn accept_by_doubling<F>(mut evaluate: F, tol: f64) -> Result<Complex64>
where
    F: FnMut(u32) -> Result<Complex64>,
{
    let mut prev = evaluate(0)?;
    let mut change = f64::INFINITY;
    for level in 1..=2 {
        let next = evaluate(level)?;
        if !(next.re.is_finite() && next.im.is_finite()) {
            return Err(Error::NonFinite("quadrature value".into()));
        }
        change = (next - prev).norm();
        if change <= tol * next.norm().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergence { change, tolerance: tol })
}

/// `(1 / 2 pi i) ∫_c f(z) dz`, accepted once doubling the nodes changes the
/// value by at most `tol` (relative to `max(1, |value|)`).
pub fn contour_quadrature(
    f: impl Fn(Complex64) -> Complex64,
    contour: &ContourSpec,
    tol: f64,
) -> Result<Complex64> {
    accept_by_doubling(
        |level| {
            let spec = ContourSpec { nodes: contour.nodes << level, ..*contour };
            Ok(spec.apply(&f))
        },
        tol,
    )
}
