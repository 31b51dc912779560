//! Complete elliptic integral of the first kind.

use std::f64::consts::PI;

const AGM_TOL: f64 = 1e-16;
const AGM_MAX_ITER: usize = 64;

/// Arithmetic-geometric mean of two positive numbers.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..AGM_MAX_ITER {
        let (an, bn) = (0.5 * (a + b), (a * b).sqrt());
        (a, b) = (an, bn);
        if (a - b).abs() <= AGM_TOL * a {
            break;
        }
    }
    0.5 * (a + b)
}

/// `K(m)` in the parameter convention:
///
/// ```text
/// K(m) = ∫₀^{π/2} dt / √(1 − m sin²t) = π / (2·agm(1, √(1 − m)))
/// ```
///
/// Valid for every `m < 1`, negative values included. Returns `+∞` at
/// `m = 1` and `NaN` above.
pub fn ellip_k(m: f64) -> f64 {
    if m > 1.0 || m.is_nan() {
        return f64::NAN;
    }
    if m == 1.0 {
        return f64::INFINITY;
    }
    PI / (2.0 * agm(1.0, (1.0 - m).sqrt()))
}
