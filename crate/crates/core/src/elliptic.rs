//! Complete elliptic integral of the first kind by the arithmetic-geometric mean.

use std::f64::consts::PI;

const MAX_ITER: usize = 40;

/// `K(m) = int_0^{pi/2} dt / sqrt(1 - m sin^2 t)`, parameter convention `m = k^2`.
///
/// `K(m) = pi / (2 agm(1, sqrt(1 - m)))`. Returns NaN for `m < 0` and infinity
/// for `m >= 1`.
pub fn ellipk(m: f64) -> f64 {
    if !(m >= 0.0) {
        return f64::NAN;
    }
    if m >= 1.0 {
        return f64::INFINITY;
    }
    PI / (2.0 * agm(1.0, (1.0 - m).sqrt()))
}

pub fn agm(mut a: f64, mut g: f64) -> f64 {
    for _ in 0..MAX_ITER {
        if (a - g).abs() <= 1e-15 * a {
            break;
        }
        let next = 0.5 * (a + g);
        g = (a * g).sqrt();
        a = next;
    }
    0.5 * (a + g)
}
