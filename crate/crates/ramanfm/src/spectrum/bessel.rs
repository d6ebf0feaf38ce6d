//! Bessel functions of the first kind, integer order.
//!
//! Evaluated from the integral representation
//! `J_n(x) = (1/2π) ∫₀^{2π} cos(nθ - x sin θ) dθ`
//! by the trapezoid rule, which is spectrally accurate for smooth periodic
//! integrands: the quadrature error is a sum of Bessel coefficients of order
//! `n ± M`, which collapse once `M` comfortably exceeds `|n| + |x|`.

/// `J_n(x)` for integer order (any sign) to near machine precision.
pub fn bessel_j(order: i32, x: f64) -> f64 {
    let mut sign = 1.0;
    let mut n = order;
    let mut x = x;
    if n < 0 {
        n = -n;
        if n % 2 == 1 {
            sign = -sign;
        }
    }
    if x < 0.0 {
        x = -x;
        if n % 2 == 1 {
            sign = -sign;
        }
    }
    let m = 64 + 4 * (n as usize + libm::ceil(x) as usize);
    let mut acc = 0.0;
    for j in 0..m {
        let theta = core::f64::consts::TAU * j as f64 / m as f64;
        acc += libm::cos(n as f64 * theta - x * libm::sin(theta));
    }
    sign * acc / m as f64
}
