use num_complex::Complex64;

use crate::special::gamma::pochhammer;

/// `sum_{k=0}^{n-1} (s+1-k)_k / (t-k)_{k+1}`.
pub fn telescoping_lhs(s: Complex64, t: Complex64, n: usize) -> Complex64 {
    (0..n).map(|k| pochhammer(s + 1.0 - k as f64, k) / pochhammer(t - k as f64, k + 1)).sum()
}

/// `[Gamma(s+1) Gamma(t+1-n) / (Gamma(t+1) Gamma(s+1-n)) - 1] / (s - t)`.
///
/// The Gamma ratio is `prod_l (1 + δ v_l)` with `δ = s - t` and
/// `v_l = 1/(t+1-n+l)`; expanding `(R - 1)/δ` by the recurrence
/// `E_l = E_{l-1} (1 + δ v_l) + v_l` avoids the cancellation at `s ≈ t`.
pub fn telescoping_rhs(s: Complex64, t: Complex64, n: usize) -> Complex64 {
    let delta = s - t;
    (0..n).fold(Complex64::new(0.0, 0.0), |e, l| {
        let v = 1.0 / (t + 1.0 - n as f64 + l as f64);
        e * (1.0 + delta * v) + v
    })
}

/// `|LHS - RHS|` of the telescoping identity.
pub fn telescoping_check(s: Complex64, t: Complex64, n: usize) -> f64 {
    (telescoping_lhs(s, t, n) - telescoping_rhs(s, t, n)).norm()
}
