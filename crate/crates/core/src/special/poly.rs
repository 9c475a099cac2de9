//! Polynomials with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Polynomial in one variable with `BigRational` coefficients, stored in
/// ascending degree. The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExactPolynomial {
    coeffs: Vec<BigRational>,
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Converts a finite `f64` to the exactly equal dyadic rational.
pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_f64(x).expect("finite float")
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

impl ExactPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The monic linear factor `t + a`.
    pub fn linear(a: BigRational) -> Self {
        Self::new(vec![a, BigRational::one()])
    }

    /// `prod_i (t + shifts[i])`.
    pub fn from_shifts<I: IntoIterator<Item = i64>>(shifts: I) -> Self {
        shifts
            .into_iter()
            .fold(Self::constant(BigRational::one()), |acc, a| &acc * &Self::linear(rat(a)))
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval_exact(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Evaluates exactly at the rational equal to `x`, then rounds once.
    pub fn eval_f64(&self, x: f64) -> f64 {
        to_f64(&self.eval_exact(&rational_from_f64(x)))
    }

    /// Horner evaluation with coefficients rounded to `f64`.
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, c| acc * z + to_f64(c))
    }

    /// Coefficients of `p(a + u)` in powers of `u`.
    pub fn taylor_shift(&self, a: &BigRational) -> Self {
        let n = self.coeffs.len();
        let mut c = self.coeffs.clone();
        // Repeated synthetic division.
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = &c[j + 1] * a;
                c[j] += t;
            }
        }
        Self::new(c)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Largest coefficient magnitude relative to the smallest nonzero one,
    /// a rough indicator of cancellation when evaluating in floating point.
    pub fn coefficient_spread(&self) -> f64 {
        let mags: Vec<f64> = self
            .coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| to_f64(&c.abs()))
            .collect();
        let max = mags.iter().cloned().fold(0.0, f64::max);
        let min = mags.iter().cloned().fold(f64::INFINITY, f64::min);
        if mags.is_empty() {
            1.0
        } else {
            max / min
        }
    }
}

impl Add for &ExactPolynomial {
    type Output = ExactPolynomial;
    fn add(self, rhs: &ExactPolynomial) -> ExactPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigRational::zero();
        ExactPolynomial::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Mul for &ExactPolynomial {
    type Output = ExactPolynomial;
    fn mul(self, rhs: &ExactPolynomial) -> ExactPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return ExactPolynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ExactPolynomial::new(out)
    }
}

impl fmt::Display for ExactPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn product_of_shifts() {
        // (t)(t+1)(t+2) = t^3 + 3t^2 + 2t
        let p = ExactPolynomial::from_shifts([0, 1, 2]);
        assert_eq!(p.coeffs(), &[rat(0), rat(2), rat(3), rat(1)]);
        assert_eq!(p.degree(), Some(3));
        assert_eq!(p.eval_exact(&rat(2)), rat(24));
    }

    #[test]
    fn zero_is_trimmed() {
        let p = ExactPolynomial::new(vec![rat(0), rat(0)]);
        assert!(p.is_zero());
        assert_eq!(p.degree(), None);
    }

    #[test]
    fn dyadic_conversion_is_exact() {
        let q = rational_from_f64(0.375);
        assert_eq!(q, BigRational::new(3.into(), 8.into()));
    }

    proptest! {
        #[test]
        fn taylor_shift_preserves_values(
            cs in proptest::collection::vec(-20i64..20, 1..7),
            a in -5i64..5,
            u in -5i64..5,
        ) {
            let p = ExactPolynomial::new(cs.into_iter().map(rat).collect());
            let shifted = p.taylor_shift(&rat(a));
            prop_assert_eq!(shifted.eval_exact(&rat(u)), p.eval_exact(&rat(a + u)));
        }
    }
}
