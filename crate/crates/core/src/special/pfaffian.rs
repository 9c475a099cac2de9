//! Pfaffian of a real skew-symmetric matrix.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Skew-symmetry tolerance accepted at the boundary.
pub const SKEW_TOLERANCE: f64 = 1e-12;

/// Largest `|A + A^T|` entry.
pub fn skew_deviation(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            dev = dev.max((a[(i, j)] + a[(j, i)]).abs());
        }
    }
    dev
}

/// Pfaffian by skew-symmetric Gaussian elimination with pivoting.
///
/// At each step the largest entry of the first row is brought to position
/// `(0, 1)` by a symmetric swap (which flips the sign), the pair `0, 1` is
/// eliminated, and the recursion continues on the Schur complement.
pub fn pfaffian(a: &DMatrix<f64>) -> Result<f64> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Dimension(format!("{}x{} is not square", n, a.ncols())));
    }
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("pfaffian input".into()));
    }
    let dev = skew_deviation(a);
    if dev > SKEW_TOLERANCE {
        return Err(Error::NotSkewSymmetric(dev));
    }
    let mut z = a.clone();
    let mut pf = 1.0;
    let mut size = n;
    while size > 0 {
        let (mut piv, mut best) = (1, 0.0f64);
        for j in 1..size {
            if z[(0, j)].abs() > best {
                best = z[(0, j)].abs();
                piv = j;
            }
        }
        if best == 0.0 {
            return Ok(0.0);
        }
        if piv != 1 {
            z.swap_rows(1, piv);
            z.swap_columns(1, piv);
            pf = -pf;
        }
        let a01 = z[(0, 1)];
        pf *= a01;
        let rest = size - 2;
        let mut next = DMatrix::zeros(rest, rest);
        for i in 0..rest {
            for j in 0..rest {
                let (ii, jj) = (i + 2, j + 2);
                next[(i, j)] = z[(ii, jj)] + (z[(1, ii)] * z[(0, jj)] - z[(0, ii)] * z[(1, jj)]) / a01;
            }
        }
        z = next;
        size = rest;
    }
    Ok(pf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_skew(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v: f64 = rng.gen_range(-1.0..1.0);
                a[(i, j)] = v;
                a[(j, i)] = -v;
            }
        }
        a
    }

    /// Expansion along the first row; exponential but independent.
    fn pf_expand(a: &DMatrix<f64>) -> f64 {
        let n = a.nrows();
        if n == 0 {
            return 1.0;
        }
        let mut total = 0.0;
        for j in 1..n {
            let keep: Vec<usize> = (1..n).filter(|&k| k != j).collect();
            let sub = DMatrix::from_fn(n - 2, n - 2, |r, c| a[(keep[r], keep[c])]);
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            total += sign * a[(0, j)] * pf_expand(&sub);
        }
        total
    }

    #[test]
    fn two_by_two() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 3.5, -3.5, 0.0]);
        assert_eq!(pfaffian(&a).unwrap(), 3.5);
    }

    #[test]
    fn four_by_four_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_skew(4, &mut rng);
        let want = a[(0, 1)] * a[(2, 3)] - a[(0, 2)] * a[(1, 3)] + a[(0, 3)] * a[(1, 2)];
        assert!((pfaffian(&a).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn matches_expansion_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in [2, 4, 6, 8] {
            let a = random_skew(n, &mut rng);
            let (p, q) = (pfaffian(&a).unwrap(), pf_expand(&a));
            assert!((p - q).abs() < 1e-12 * q.abs().max(1.0), "n={n}");
        }
    }

    #[test]
    fn square_is_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = random_skew(6, &mut rng);
            let p = pfaffian(&a).unwrap();
            let d = a.clone().determinant();
            assert!((p * p - d).abs() <= 1e-10 * d.abs(), "pf^2={} det={d}", p * p);
        }
    }

    #[test]
    fn errors() {
        assert_eq!(pfaffian(&DMatrix::zeros(3, 3)), Err(Error::OddDimension(3)));
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -0.9, 0.0]);
        assert!(matches!(pfaffian(&a), Err(Error::NotSkewSymmetric(_))));
        assert_eq!(pfaffian(&DMatrix::zeros(0, 0)).unwrap(), 1.0);
    }

    proptest! {
        #[test]
        fn congruence(seed in 0u64..10_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_skew(6, &mut rng);
            let b = DMatrix::from_fn(6, 6, |_, _| rng.gen_range(-1.0..1.0));
            let mut bab = &b * &a * b.transpose();
            // restore exact antisymmetry lost to rounding
            bab = (&bab - bab.transpose()) * 0.5;
            let lhs = pfaffian(&bab).unwrap();
            let rhs = b.determinant() * pfaffian(&a).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs().max(1e-300));
        }
    }
}
