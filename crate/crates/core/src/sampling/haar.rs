use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Dense complex matrix used for samples, truncations and products.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Ginibre matrix: entries with independent `N(0, 1/2)` real and imaginary
/// parts, so `E|G_ij|^2 = 1`.
pub fn sample_ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(s * re, s * im)
    })
}

/// Haar-distributed `m x m` unitary: QR of a Ginibre matrix with each column
/// of `Q` rotated by the phase of the matching diagonal entry of `R`.
pub fn sample_haar_unitary<R: Rng + ?Sized>(m: usize, rng: &mut R) -> ComplexMatrix {
    let qr = sample_ginibre(m, m, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..m {
        let d = r[(j, j)];
        let n = d.norm();
        if n > 0.0 {
            let phase = d / n;
            q.column_mut(j).iter_mut().for_each(|z| *z *= phase);
        }
    }
    q
}

/// Top-left `rows x cols` block of a Haar `m x m` unitary.
pub fn sample_truncation<R: Rng + ?Sized>(m: usize, rows: usize, cols: usize, rng: &mut R) -> Result<ComplexMatrix> {
    if rows == 0 || cols == 0 || m <= rows.max(cols) {
        return Err(Error::Dimension(format!(
            "truncation {rows}x{cols} needs m > {}, got m = {m}",
            rows.max(cols)
        )));
    }
    let u = sample_haar_unitary(m, rng);
    Ok(u.view((0, 0), (rows, cols)).into_owned())
}

/// Frobenius norm of `U^* U - I`.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    let n = u.ncols();
    (u.adjoint() * u - ComplexMatrix::identity(n, n)).norm()
}
