//! Adaptive embedded Runge-Kutta integrator (Dormand-Prince 5(4)).
//!
//! Small fixed-dimension systems only; the crate's single consumer is the
//! two-component characteristics system of the time map. Uses the FSAL
//! property, so an accepted step costs six right-hand-side evaluations.

/// Integration gave up before reaching the end of the interval.
#[derive(Debug, Clone, Copy)]
pub(crate) struct StepFailure<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
}

const SAFETY: f64 = 0.9;
const MIN_SCALE: f64 = 0.2;
const MAX_SCALE: f64 = 5.0;

/// Integrate `dy/dt = rhs(t, y)` from `t0` to `t1` (`t1 >= t0`).
///
/// Local error is controlled per component against `abs_tol + rel_tol·|y|`.
pub(crate) fn integrate<const N: usize, F>(
    mut rhs: F,
    t0: f64,
    t1: f64,
    y0: [f64; N],
    rel_tol: f64,
    abs_tol: f64,
    max_steps: usize,
) -> Result<[f64; N], StepFailure<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let mut t = t0;
    let mut y = y0;
    if t1 <= t0 {
        return Ok(y);
    }
    let mut h = (0.01 * (t1 - t0)).min(t1 - t0);
    let mut k1 = rhs(t, &y);

    let mut steps = 0usize;
    while t < t1 {
        if steps >= max_steps {
            return Err(StepFailure { t, y });
        }
        steps += 1;
        if t + h > t1 {
            h = t1 - t;
        }

        let mut stage = |c: f64, coeffs: &[(f64, &[f64; N])]| {
            let mut ys = y;
            for (a, k) in coeffs {
                for i in 0..N {
                    ys[i] += h * a * k[i];
                }
            }
            rhs(t + c * h, &ys)
        };

        let k2 = stage(0.2, &[(0.2, &k1)]);
        let k3 = stage(0.3, &[(3.0 / 40.0, &k1), (9.0 / 40.0, &k2)]);
        let k4 = stage(0.8, &[(44.0 / 45.0, &k1), (-56.0 / 15.0, &k2), (32.0 / 9.0, &k3)]);
        let k5 = stage(
            8.0 / 9.0,
            &[
                (19372.0 / 6561.0, &k1),
                (-25360.0 / 2187.0, &k2),
                (64448.0 / 6561.0, &k3),
                (-212.0 / 729.0, &k4),
            ],
        );
        let k6 = stage(
            1.0,
            &[
                (9017.0 / 3168.0, &k1),
                (-355.0 / 33.0, &k2),
                (46732.0 / 5247.0, &k3),
                (49.0 / 176.0, &k4),
                (-5103.0 / 18656.0, &k5),
            ],
        );

        let mut y_next = y;
        for i in 0..N {
            y_next[i] += h
                * (35.0 / 384.0 * k1[i] + 500.0 / 1113.0 * k3[i] + 125.0 / 192.0 * k4[i]
                    - 2187.0 / 6784.0 * k5[i]
                    + 11.0 / 84.0 * k6[i]);
        }
        let k7 = rhs(t + h, &y_next);

        // difference between the 5th- and embedded 4th-order results
        let mut err_sq = 0.0;
        for i in 0..N {
            let e = h
                * (71.0 / 57600.0 * k1[i] - 71.0 / 16695.0 * k3[i] + 71.0 / 1920.0 * k4[i]
                    - 17253.0 / 339200.0 * k5[i]
                    + 22.0 / 525.0 * k6[i]
                    - 1.0 / 40.0 * k7[i]);
            let scale = abs_tol + rel_tol * y[i].abs().max(y_next[i].abs());
            let r = e / scale;
            err_sq += r * r;
        }
        let err = libm::sqrt(err_sq / N as f64);

        if err <= 1.0 {
            t += h;
            y = y_next;
            k1 = k7; // FSAL
            let scale = if err == 0.0 {
                MAX_SCALE
            } else {
                (SAFETY * libm::pow(err, -0.2)).clamp(MIN_SCALE, MAX_SCALE)
            };
            h *= scale;
        } else {
            h *= (SAFETY * libm::pow(err, -0.2)).clamp(MIN_SCALE, 1.0);
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let y = integrate(|_, y: &[f64; 1]| [-y[0]], 0.0, 2.0, [1.0], 1e-12, 1e-14, 100_000)
            .unwrap();
        assert!((y[0] - libm::exp(-2.0)).abs() < 1e-11);
    }

    #[test]
    fn harmonic_oscillator_energy() {
        let y = integrate(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            20.0,
            [1.0, 0.0],
            1e-11,
            1e-13,
            1_000_000,
        )
        .unwrap();
        let energy = y[0] * y[0] + y[1] * y[1];
        assert!((energy - 1.0).abs() < 1e-9);
        assert!((y[0] - libm::cos(20.0)).abs() < 1e-8);
    }

    #[test]
    fn step_budget_exhaustion_reports_state() {
        let r = integrate(|_, y: &[f64; 1]| [y[0]], 0.0, 1.0, [1.0], 1e-12, 1e-14, 3);
        let fail = r.unwrap_err();
        assert!(fail.t < 1.0);
        assert!(fail.y[0] >= 1.0);
    }
}
