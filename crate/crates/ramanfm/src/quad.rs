//! Composite quadrature on uniformly sampled data.

/// Composite Simpson integral of uniformly spaced samples.
///
/// Even interval counts use the plain composite rule; odd counts finish with
/// a 3/8 segment so every sample keeps fourth-order weighting. Two samples
/// fall back to the trapezoid.
pub(crate) fn simpson(values: &[f64], step: f64) -> f64 {
    let n = values.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * step * (values[0] + values[1]),
        _ => {
            let intervals = n - 1;
            if intervals % 2 == 0 {
                simpson_even(values, step)
            } else if n == 4 {
                three_eighths(&values[0..4], step)
            } else {
                simpson_even(&values[..n - 3], step) + three_eighths(&values[n - 4..], step)
            }
        }
    }
}

fn simpson_even(values: &[f64], step: f64) -> f64 {
    let n = values.len();
    debug_assert!(n >= 3 && (n - 1) % 2 == 0);
    let mut acc = values[0] + values[n - 1];
    let mut odd = 0.0;
    let mut even = 0.0;
    for (i, v) in values.iter().enumerate().take(n - 1).skip(1) {
        if i % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    acc += 4.0 * odd + 2.0 * even;
    acc * step / 3.0
}

fn three_eighths(values: &[f64], step: f64) -> f64 {
    debug_assert_eq!(values.len(), 4);
    0.375 * step * (values[0] + 3.0 * values[1] + 3.0 * values[2] + values[3])
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn sample(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> (Vec<f64>, f64) {
        let step = (b - a) / (n - 1) as f64;
        ((0..n).map(|i| f(a + i as f64 * step)).collect(), step)
    }

    #[test]
    fn cubic_is_exact_even_intervals() {
        let (v, h) = sample(|x| x * x * x, 0.0, 2.0, 11);
        assert!((simpson(&v, h) - 4.0).abs() < 1e-13);
    }

    #[test]
    fn cubic_is_exact_odd_intervals() {
        let (v, h) = sample(|x| x * x * x, 0.0, 2.0, 12);
        assert!((simpson(&v, h) - 4.0).abs() < 1e-13);
    }

    #[test]
    fn sine_converges() {
        let (v, h) = sample(libm::sin, 0.0, core::f64::consts::PI, 201);
        assert!((simpson(&v, h) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(simpson(&[], 0.1), 0.0);
        assert_eq!(simpson(&[3.0], 0.1), 0.0);
        assert!((simpson(&[1.0, 3.0], 0.5) - 1.0).abs() < 1e-15);
    }
}
