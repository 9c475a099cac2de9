//! Small determinant helpers: exact rational and partially pivoted float.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact determinant by fraction-preserving Gaussian elimination.
pub fn det_exact(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &pivot;
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    det
}

/// Float determinant via LU.
pub fn det(a: &DMatrix<f64>) -> f64 {
    a.clone().lu().determinant()
}

/// Complex determinant via LU.
pub fn det_complex(a: &DMatrix<Complex64>) -> Complex64 {
    a.clone().lu().determinant()
}

/// Vandermonde product `prod_{j<k} (x_k - x_j)`.
pub fn vandermonde(x: &[f64]) -> f64 {
    let mut v = 1.0;
    for k in 0..x.len() {
        for j in 0..k {
            v *= x[k] - x[j];
        }
    }
    v
}

/// Smallest pairwise gap `min_{j<k} |x_k - x_j|` (infinite for fewer than two points).
pub fn min_gap(x: &[f64]) -> f64 {
    let mut g = f64::INFINITY;
    for k in 0..x.len() {
        for j in 0..k {
            g = g.min((x[k] - x[j]).abs());
        }
    }
    g
}
