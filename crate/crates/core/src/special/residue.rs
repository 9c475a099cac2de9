//! Exact residue calculus for Mellin–Barnes integrals with rational
//! integrands.
//!
//! With integer parameters every Gamma ratio in the weight, `Q_k` and kernel
//! integrands collapses to a rational function of `s` whose poles sit at
//! non-positive integers. Closing the contour that encircles the negative
//! real axis then turns
//!
//! ```text
//!     (1 / 2 pi i) ∫_C f(s) y^{-s} ds
//! ```
//!
//! into a finite sum of terms `a · y^p (ln y)^d / d!` with rational `a`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::special::poly::{rat, rational_from_f64, to_f64, ExactPolynomial};

/// `numerator(s) / prod_i (s - location_i)^{multiplicity_i}` with integer pole
/// locations.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction {
    numerator: ExactPolynomial,
    poles: BTreeMap<i64, u32>,
}

impl RationalFunction {
    pub fn new(numerator: ExactPolynomial, poles: &[(i64, u32)]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for &(loc, mult) in poles {
            if mult == 0 {
                return Err(Error::InvalidArgument("pole multiplicity must be positive".into()));
            }
            if map.insert(loc, mult).is_some() {
                return Err(Error::InvalidArgument(format!("pole {loc} listed twice")));
            }
        }
        Ok(Self { numerator, poles: map })
    }

    /// `1 / prod_{l=0}^{len-1} (s + start + l)`, i.e. `Gamma(s+start)/Gamma(s+start+len)`.
    pub fn gamma_ratio(start: i64, len: u32) -> Self {
        let mut f = Self {
            numerator: ExactPolynomial::constant(BigRational::one()),
            poles: BTreeMap::new(),
        };
        f.push_gamma_ratio(start, len);
        f
    }

    /// Multiplies by `Gamma(s+start)/Gamma(s+start+len)`.
    pub fn push_gamma_ratio(&mut self, start: i64, len: u32) {
        for l in 0..len as i64 {
            *self.poles.entry(-(start + l)).or_insert(0) += 1;
        }
    }

    /// Multiplies the numerator by `p`.
    pub fn mul_numerator(&mut self, p: &ExactPolynomial) {
        self.numerator = &self.numerator * p;
    }

    pub fn numerator(&self) -> &ExactPolynomial {
        &self.numerator
    }

    pub fn poles(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        self.poles.iter().map(|(&l, &m)| (l, m))
    }

    pub fn total_multiplicity(&self) -> usize {
        self.poles.values().map(|&m| m as usize).sum()
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        let den = self
            .poles
            .iter()
            .fold(Complex64::one(), |acc, (&l, &m)| acc * (s - l as f64).powi(m as i32));
        self.numerator.eval_complex(s) / den
    }

    /// Exact value at a rational point that is not a pole.
    pub fn eval_exact(&self, s: &BigRational) -> Result<BigRational> {
        let mut den = BigRational::one();
        for (&l, &m) in &self.poles {
            let d = s - rat(l);
            if d.is_zero() {
                return Err(Error::Pole(format!("{s}")));
            }
            for _ in 0..m {
                den *= &d;
            }
        }
        Ok(self.numerator.eval_exact(s) / den)
    }

    /// First `order` Taylor coefficients of `self · (s - at)^{mult(at)}` about
    /// `s = at`.
    fn regular_part_taylor(&self, at: i64, order: usize) -> Vec<BigRational> {
        let mut series = truncate(self.numerator.taylor_shift(&rat(at)).coeffs().to_vec(), order);
        for (&q, &m) in &self.poles {
            if q == at {
                continue;
            }
            // (a + u)^{-m} = a^{-m} sum_i (-1)^i C(m+i-1, i) (u/a)^i
            let a = rat(at - q);
            let inv_a = BigRational::one() / &a;
            let mut factor = Vec::with_capacity(order);
            let mut lead = BigRational::one();
            for _ in 0..m {
                lead *= &inv_a;
            }
            let mut binom = BigRational::one();
            let mut pow = lead;
            for i in 0..order {
                let sign = if i % 2 == 0 { BigRational::one() } else { -BigRational::one() };
                factor.push(&sign * &binom * &pow);
                // C(m+i, i+1) = C(m+i-1, i) * (m+i) / (i+1)
                binom = binom * rat(m as i64 + i as i64) / rat(i as i64 + 1);
                pow *= &inv_a;
            }
            series = mul_truncated(&series, &factor, order);
        }
        series
    }
}

fn truncate(mut v: Vec<BigRational>, order: usize) -> Vec<BigRational> {
    v.resize(order, BigRational::zero());
    v
}

fn mul_truncated(a: &[BigRational], b: &[BigRational], order: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); order];
    for (i, x) in a.iter().enumerate().take(order) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// One term `coeff · y^power (ln y)^log_degree / log_degree!`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogTerm {
    pub power: u32,
    pub log_degree: u32,
    pub coeff: BigRational,
}

/// Finite expansion `sum a_{p,d} y^p (ln y)^d / d!` supported on `(0, 1)`.
///
/// Terms are kept sorted by `(power, log_degree)` with no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LogPolyExpansion {
    terms: Vec<LogTerm>,
}

/// Evaluation window; outside `(0,1)` the expansion is zero.
pub const SUPPORT_EPS: f64 = 1e-12;

impl LogPolyExpansion {
    pub fn from_terms<I: IntoIterator<Item = LogTerm>>(terms: I) -> Self {
        let mut map: BTreeMap<(u32, u32), BigRational> = BTreeMap::new();
        for t in terms {
            *map.entry((t.power, t.log_degree)).or_insert_with(BigRational::zero) += t.coeff;
        }
        Self {
            terms: map
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((power, log_degree), coeff)| LogTerm { power, log_degree, coeff })
                .collect(),
        }
    }

    pub fn terms(&self) -> &[LogTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_log_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.log_degree).max().unwrap_or(0)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::from_terms(self.terms.iter().map(|t| LogTerm { coeff: &t.coeff * k, ..t.clone() }))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(other.terms.iter()).cloned())
    }

    fn clamp(y: f64) -> Option<f64> {
        if !(y > 0.0 && y < 1.0) {
            None
        } else {
            Some(y.clamp(SUPPORT_EPS, 1.0 - SUPPORT_EPS))
        }
    }

    /// Floating-point evaluation with coefficients rounded to `f64`.
    pub fn eval(&self, y: f64) -> f64 {
        let Some(y) = Self::clamp(y) else { return 0.0 };
        let ln = y.ln();
        self.terms
            .iter()
            .map(|t| to_f64(&t.coeff) * y.powi(t.power as i32) * log_factor(ln, t.log_degree))
            .sum()
    }

    /// Exact polynomial part for each log degree, evaluated at the rational
    /// equal to `y`: entry `d` is `sum_p a_{p,d} y^p`.
    pub fn eval_groups_exact(&self, y: &BigRational) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.max_log_degree() as usize + 1];
        let max_p = self.terms.iter().map(|t| t.power).max().unwrap_or(0);
        let mut powers = Vec::with_capacity(max_p as usize + 1);
        let mut acc = BigRational::one();
        for _ in 0..=max_p {
            powers.push(acc.clone());
            acc *= y;
        }
        for t in &self.terms {
            out[t.log_degree as usize] += &t.coeff * &powers[t.power as usize];
        }
        out
    }

    /// Evaluation with every polynomial group summed exactly; only the final
    /// combination with powers of `ln y` is done in floating point.
    pub fn eval_accurate(&self, y: f64) -> f64 {
        let Some(y) = Self::clamp(y) else { return 0.0 };
        let ln = y.ln();
        self.eval_groups_exact(&rational_from_f64(y))
            .iter()
            .enumerate()
            .map(|(d, g)| to_f64(g) * log_factor(ln, d as u32))
            .sum()
    }

    /// Exact Mellin moment `∫_0^1 y^{s-1} f(y) dy` at a positive integer `s`.
    pub fn moment_exact(&self, s: u32) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, t| {
            let base = rat(s as i64 + t.power as i64);
            let mut den = BigRational::one();
            for _ in 0..=t.log_degree {
                den *= &base;
            }
            let v = &t.coeff / den;
            if t.log_degree % 2 == 0 {
                acc + v
            } else {
                acc - v
            }
        })
    }

    /// Mellin moment at complex `s` with `Re s > 0`.
    pub fn moment(&self, s: Complex64) -> Result<Complex64> {
        if s.re <= 0.0 {
            return Err(Error::InvalidArgument(format!("moment needs Re s > 0, got {s}")));
        }
        Ok(self.terms.iter().fold(Complex64::zero(), |acc, t| {
            let sign = if t.log_degree % 2 == 0 { 1.0 } else { -1.0 };
            acc + sign * to_f64(&t.coeff) / (s + t.power as f64).powi(t.log_degree as i32 + 1)
        }))
    }

    /// Sum of `|a_{p,d}|`, an upper bound on `|f|` over `[e^{-1}, 1)` and a
    /// rough measure of cancellation in [`LogPolyExpansion::eval`].
    pub fn coefficient_l1(&self) -> f64 {
        self.terms.iter().map(|t| to_f64(&t.coeff.abs())).sum()
    }
}

fn log_factor(ln: f64, d: u32) -> f64 {
    (1..=d).fold(1.0, |acc, i| acc * ln / i as f64)
}

/// Residue expansion of `(1/2 pi i) ∫_C f(s) y^{-s} ds` for `0 < y < 1`, where
/// `C` is the positively oriented loop around the negative real axis
/// enclosing every pole of `f`.
///
/// A pole of multiplicity `M` at `p` contributes
/// `y^{-p} sum_{d<M} g_{M-1-d} (-ln y)^d / d!` with `g_i` the Taylor
/// coefficients of `(s-p)^M f(s)` at `p`.
pub fn residue_expansion(f: &RationalFunction) -> Result<LogPolyExpansion> {
    let den = f.total_multiplicity();
    let num = f.numerator().degree().map_or(0, |d| d + 1);
    if f.numerator().is_zero() {
        return Ok(LogPolyExpansion::default());
    }
    if num > den {
        return Err(Error::ImproperRational { num: num - 1, den });
    }
    let mut terms = Vec::new();
    for (p, m) in f.poles() {
        if p > 0 {
            return Err(Error::InvalidArgument(format!(
                "pole at s = {p} lies right of the contour around the negative axis"
            )));
        }
        let g = f.regular_part_taylor(p, m as usize);
        for d in 0..m as usize {
            let c = &g[m as usize - 1 - d];
            if c.is_zero() {
                continue;
            }
            let coeff = if d % 2 == 0 { c.clone() } else { -c.clone() };
            terms.push(LogTerm { power: (-p) as u32, log_degree: d as u32, coeff });
        }
    }
    Ok(LogPolyExpansion::from_terms(terms))
}
