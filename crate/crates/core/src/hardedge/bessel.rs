//! Bessel functions `J_0`, `J_1` from their power series and the order-zero
//! hard-edge Bessel kernel built on them.

/// Power series of `J_order(z)` for `order` in `{0, 1}`; accurate for
/// moderate `|z|` (the terms peak near `e^{|z|}`).
fn series(order: u32, z: f64) -> f64 {
    let q = -0.25 * z * z;
    let mut term = if order == 0 { 1.0 } else { 0.5 * z };
    let mut sum = term;
    for k in 1..200 {
        term *= q / (k as f64 * (k + order as usize) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

pub fn bessel_j0(z: f64) -> f64 {
    series(0, z)
}

pub fn bessel_j1(z: f64) -> f64 {
    series(1, z)
}

/// `K(a, b) = [J0(√a) √b J0'(√b) - √a J0'(√a) J0(√b)] / (2(a - b))`, with
/// the diagonal `(J0(√a)² + J1(√a)²) / 4`.
pub fn bessel_kernel(a: f64, b: f64) -> f64 {
    let (sa, sb) = (a.sqrt(), b.sqrt());
    if (a - b).abs() <= 1e-9 * a.abs().max(b.abs()) {
        let s = 0.5 * (sa + sb);
        let (j0, j1) = (bessel_j0(s), bessel_j1(s));
        return 0.25 * (j0 * j0 + j1 * j1);
    }
    (sa * bessel_j1(sa) * bessel_j0(sb) - sb * bessel_j1(sb) * bessel_j0(sa)) / (2.0 * (a - b))
}

/// The `r = 1`, `nu = 0` hard-edge limit in the variables used here:
/// `4 K(4x, 4y)`.
pub fn bessel_limit_kernel(x: f64, y: f64) -> f64 {
    4.0 * bessel_kernel(4.0 * x, 4.0 * y)
}
