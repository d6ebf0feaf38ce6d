//! The input-time map and compression factor.
//!
//! The output field at reduced local time `η` is the input field at the input
//! time `s(η)`, scaled by `G(η) = ds/dη`. The pair `(s, G)` is defined
//! implicitly by `∫_s^η dθ/ψ(θ) = 1` where `ψ` is the reduced susceptibility.
//!
//! Rather than evaluating that integral (whose integrand diverges at every
//! zero of `ψ`), the solver integrates the equivalent characteristics system
//! over a fictitious depth fraction `ζ ∈ [0, 1]`:
//!
//! ```text
//! ds/dζ = -ψ(s)        s(0) = η
//! dG/dζ = -ψ'(s)·G     G(0) = 1
//! ```
//!
//! which is smooth everywhere, fixes the zeros of `ψ` exactly, and yields `G`
//! at zeros (where the ratio form `ψ(s)/ψ(η)` is 0/0) as the limit
//! `exp(-ψ'(η))`. Single sinusoidal modes additionally admit the closed-form
//! comb solution used as a fast path and cross-check.

use crate::ode;
use crate::susceptibility::{RamanMode, SusceptibilityProfile};
use crate::{Error, Result};

use core::f64::consts::{PI, TAU};

/// Tolerances and step budget for [`solve_map`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MapSolverConfig {
    /// Adaptive-step relative tolerance.
    pub rel_tol: f64,
    /// Absolute tolerance (a time). `None` resolves to `1e-12 · 2π/ω_min` of
    /// the profile being solved.
    pub abs_tol: Option<f64>,
    /// Step budget per map evaluation.
    pub max_steps: usize,
}

impl Default for MapSolverConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: None,
            max_steps: 1_000_000,
        }
    }
}

impl MapSolverConfig {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self { rel_tol, ..Self::default() }
    }

    pub(crate) fn resolved_abs_tol(&self, profile: &SusceptibilityProfile) -> f64 {
        self.abs_tol
            .unwrap_or_else(|| 1e-12 * profile.longest_period().unwrap_or(TAU))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || self.abs_tol.is_some_and(|a| !(a > 0.0)) {
            return Err(Error::InvalidArgument("solver tolerances must be positive"));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidArgument("max_steps must be at least 1"));
        }
        Ok(())
    }
}

/// One solved point of the map: output time, input time, compression factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeMapResult {
    pub eta: f64,
    pub s: f64,
    pub g: f64,
}

/// Solve the input-time map at output time `eta` for an arbitrary profile.
///
/// For an empty profile this is the identity with `G = 1`. At a zero of `ψ`
/// the returned `s` equals `eta` exactly and `G = exp(-ψ'(η))`.
pub fn solve_map(
    profile: &SusceptibilityProfile,
    eta: f64,
    cfg: &MapSolverConfig,
) -> Result<TimeMapResult> {
    if profile.is_empty() {
        return Ok(TimeMapResult { eta, s: eta, g: 1.0 });
    }
    let abs_tol = cfg.resolved_abs_tol(profile);
    let rhs = |_z: f64, y: &[f64; 2]| {
        let (p, pp) = profile.psi_and_prime(y[0]);
        [-p, -pp * y[1]]
    };
    match ode::integrate(rhs, 0.0, 1.0, [eta, 1.0], cfg.rel_tol, abs_tol, cfg.max_steps) {
        Ok([s, g]) => Ok(TimeMapResult { eta, s, g }),
        Err(fail) => Err(Error::NonConvergence { eta, zeta: fail.t, s: fail.y[0] }),
    }
}

/// Closed-form map for a single sinusoidal mode (the periodic comb).
///
/// `s` follows from `tan[(ωs+φ)/2] = e^(-αz) tan[(ωη+φ)/2]` with the branch
/// chosen by the half-period index `k = ⌊(ωη+φ)/π + 1/2⌋`, so `s` is
/// continuous across comb teeth and stays in the same inter-zero interval as
/// `η`. On odd half-periods the reduced relation inverts the depth sign,
/// which is what produces the comb teeth.
pub fn single_mode_map(mode: &RamanMode, eta: f64) -> TimeMapResult {
    if mode.comb_depth == 0.0 {
        return TimeMapResult { eta, s: eta, g: 1.0 };
    }
    let x = mode.omega * eta + mode.phase;
    let k = libm::floor(x / PI + 0.5);
    let u = x - k * PI; // in [-pi/2, pi/2)
    let odd = (k as i64).rem_euclid(2) == 1;
    let factor = if odd {
        libm::exp(mode.comb_depth)
    } else {
        libm::exp(-mode.comb_depth)
    };
    let v = 2.0 * libm::atan(factor * libm::tan(0.5 * u));
    let s = (k * PI + v - mode.phase) / mode.omega;

    let (sin_half, cos_half) = libm::sincos(0.5 * x);
    let g = 1.0
        / (libm::exp(mode.comb_depth) * cos_half * cos_half
            + libm::exp(-mode.comb_depth) * sin_half * sin_half);
    TimeMapResult { eta, s, g }
}

/// Input time from the locally linearized susceptibility around `eta_i`:
///
/// `s = η_i - ψ(η_i)/ψ'(η_i) + [η - η_i + ψ(η_i)/ψ'(η_i)] · exp(-ψ'(η_i))`
pub fn local_linearized_map(
    profile: &SusceptibilityProfile,
    eta_i: f64,
    eta: f64,
) -> Result<f64> {
    let pp = profile.psi_prime(eta_i);
    if pp == 0.0 {
        return Err(Error::SingularLinearization { eta_i });
    }
    let ratio = profile.psi(eta_i) / pp;
    Ok(eta_i - ratio + (eta - eta_i + ratio) * libm::exp(-pp))
}

/// Local compression factor `G(η_i) = exp(-ψ'(η_i))`.
///
/// Exact wherever `η_i` is a zero of `ψ`; an approximation elsewhere, with
/// validity governed by [`check_validity`].
pub fn approx_compression(profile: &SusceptibilityProfile, eta_i: f64) -> f64 {
    libm::exp(-profile.psi_prime(eta_i))
}

/// Both sides of the local-map validity condition at `eta_i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidityCheck {
    /// `|(exp(-ψ') - 1)/ψ'|` in reduced form (analytic limit 1 as `ψ' → 0`).
    pub lhs: f64,
    /// `T_m / |ψ(η_i)|`; infinite at a zero of `ψ`.
    pub rhs: f64,
    pub satisfied: bool,
}

/// Default operationalization of "much less than": a factor of 10.
pub const VALIDITY_MARGIN: f64 = 0.1;

/// Check `|s_i - η_i| ≪ T_m` for the local linearized map, with the default
/// factor-10 margin.
pub fn check_validity(
    profile: &SusceptibilityProfile,
    eta_i: f64,
    t_m: f64,
) -> Result<ValidityCheck> {
    check_validity_with(profile, eta_i, t_m, VALIDITY_MARGIN)
}

/// Same as [`check_validity`] with an explicit margin: satisfied when
/// `lhs·|ψ(η_i)| < margin·T_m`.
pub fn check_validity_with(
    profile: &SusceptibilityProfile,
    eta_i: f64,
    t_m: f64,
    margin: f64,
) -> Result<ValidityCheck> {
    if !(t_m > 0.0) {
        return Err(Error::InvalidArgument("T_m must be positive"));
    }
    let p = profile.psi(eta_i).abs();
    let pp = profile.psi_prime(eta_i);
    // (exp(-x) - 1)/x evaluated stably; -> -1 as x -> 0
    let lhs = if pp == 0.0 {
        1.0
    } else {
        (libm::expm1(-pp) / pp).abs()
    };
    let rhs = if p == 0.0 { f64::INFINITY } else { t_m / p };
    Ok(ValidityCheck {
        lhs,
        rhs,
        satisfied: lhs * p < margin * t_m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::susceptibility::{RamanMode, SusceptibilityProfile};
    use approx::assert_relative_eq;
    use core::f64::consts::FRAC_PI_2;

    fn mode(depth: f64) -> RamanMode {
        RamanMode::new(depth, 1.0, 0.0).unwrap()
    }

    fn fig1_profile() -> SusceptibilityProfile {
        SusceptibilityProfile::new(alloc::vec![
            RamanMode::new(0.8, 1.0, 0.0).unwrap(),
            RamanMode::new(0.6, 0.07, 0.0).unwrap(),
        ])
    }

    #[test]
    fn empty_profile_is_identity() {
        let r = solve_map(&SusceptibilityProfile::empty(), 3.7, &MapSolverConfig::default())
            .unwrap();
        assert_eq!(r.s, 3.7);
        assert_eq!(r.g, 1.0);
    }

    #[test]
    fn comb_peak_and_trough() {
        // at ωη = π the comb peaks: s = η, G = e^{0.8}
        let cfg = MapSolverConfig::default();
        let p = SusceptibilityProfile::single(mode(0.8));
        let r = solve_map(&p, PI, &cfg).unwrap();
        assert!((r.s - PI).abs() < 1e-10);
        assert_relative_eq!(r.g, 2.2255409284924676, max_relative = 1e-9);
        // at ωη = 0 the comb bottoms: G = e^{-0.8}
        let r = solve_map(&p, 0.0, &cfg).unwrap();
        assert_eq!(r.s, 0.0);
        assert_relative_eq!(r.g, 0.4493289641172216, max_relative = 1e-9);
    }

    #[test]
    fn single_mode_closed_form_values() {
        // direct substitution into the comb formulas at ωη = π/2
        let r = single_mode_map(&mode(0.8), FRAC_PI_2);
        assert_relative_eq!(r.s, 0.8445915040533678, max_relative = 1e-14);
        assert_relative_eq!(r.g, 0.7476999182374196, max_relative = 1e-14);
        // zero depth is the identity
        let r = single_mode_map(&mode(0.0), 1.234);
        assert_eq!(r.s, 1.234);
        assert_eq!(r.g, 1.0);
        // comb peak
        let r = single_mode_map(&mode(0.8), PI);
        assert_relative_eq!(r.g, 2.2255409284924676, max_relative = 1e-14);
        assert_relative_eq!(r.s, PI, max_relative = 1e-14);
    }

    #[test]
    fn closed_form_matches_ode_solver() {
        let cfg = MapSolverConfig::default();
        for &depth in &[0.1, 0.5, 1.0, 2.0] {
            let m = mode(depth);
            let p = SusceptibilityProfile::single(m);
            for k in 0..32 {
                let eta = -2.0 + k as f64 * 0.37;
                let exact = single_mode_map(&m, eta);
                let ode = solve_map(&p, eta, &cfg).unwrap();
                assert_relative_eq!(ode.g, exact.g, max_relative = 1e-8);
                assert!((ode.s - exact.s).abs() <= 1e-8 * exact.s.abs().max(TAU));
            }
        }
    }

    #[test]
    fn branch_continuity_across_teeth() {
        // s must be continuous and increasing through half-period boundaries
        let m = RamanMode::new(1.3, 1.0, 0.4).unwrap();
        let mut prev = single_mode_map(&m, -8.0).s;
        for k in 1..=3200 {
            let eta = -8.0 + k as f64 * 0.005;
            let s = single_mode_map(&m, eta).s;
            assert!(
                s > prev && s - prev < 0.1,
                "jump at eta={eta}: {prev} -> {s}"
            );
            prev = s;
        }
    }

    #[test]
    fn fig1_quadrature_oracle() {
        // Direct-quadrature oracle for the defining integral: on each
        // inter-zero interval, Phi(θ) = ∫ dθ/ψ from a fixed interior
        // reference; solve Phi(eta) - Phi(s) = 1 by bisection and take
        // G = ψ(s)/ψ(eta). Independent of the ODE path.
        let p = fig1_profile();
        let cfg = MapSolverConfig::default();
        let hi = TAU / 0.07;
        let zeros = p.find_zeros(-1.0, hi + 1.0).unwrap();
        let n = 1000;
        for k in 0..n {
            let eta = (k as f64 + 0.5) / n as f64 * hi;
            let r = solve_map(&p, eta, &cfg).unwrap();
            if let Some((s_oracle, g_oracle)) = quadrature_map(&p, eta, &zeros) {
                assert_relative_eq!(r.g, g_oracle, max_relative = 1e-7);
                assert!((r.s - s_oracle).abs() < 1e-7 * hi);
            }
        }
    }

    /// Test-only oracle: solve the defining integral by adaptive Simpson
    /// quadrature of 1/ψ plus bisection. Returns None within `guard` of an
    /// interval endpoint where the integrand is too singular to trust.
    fn quadrature_map(
        p: &SusceptibilityProfile,
        eta: f64,
        zeros: &[f64],
    ) -> Option<(f64, f64)> {
        let pe = p.psi(eta);
        if pe == 0.0 {
            return Some((eta, libm::exp(-p.psi_prime(eta))));
        }
        let lo = zeros.iter().copied().filter(|z| *z < eta).fold(f64::NEG_INFINITY, f64::max);
        let hi = zeros.iter().copied().filter(|z| *z > eta).fold(f64::INFINITY, f64::min);
        if !lo.is_finite() || !hi.is_finite() {
            return None;
        }
        let guard = 1e-6 * (hi - lo);
        if eta - lo < guard || hi - eta < guard {
            return None;
        }
        let phi = |a: f64, b: f64| adaptive_simpson(&|t| 1.0 / p.psi(t), a, b, 1e-11, 44);
        // s lies between eta and the interval end approached by the backward flow
        let (mut a, mut b) = if pe > 0.0 { (lo + guard, eta) } else { (eta, hi - guard) };
        // f(s) = Phi(s -> eta) - 1, monotone in s; bracket then bisect
        let f = |s: f64| {
            if s < eta {
                phi(s, eta) - 1.0
            } else {
                -phi(eta, s) - 1.0
            }
        };
        let (fa, fb) = (f(a), f(b));
        if fa.signum() == fb.signum() {
            return None; // s pinned closer to the endpoint than the guard
        }
        for _ in 0..64 {
            let mid = 0.5 * (a + b);
            if f(mid).signum() == fa.signum() {
                a = mid;
            } else {
                b = mid;
            }
            if b - a < 1e-11 * (hi - lo) {
                break;
            }
        }
        let s = 0.5 * (a + b);
        Some((s, p.psi(s) / pe))
    }

    fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
            (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
        }
        fn rec(
            f: &dyn Fn(f64) -> f64,
            a: f64,
            b: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let left = simpson(f, a, m);
            let right = simpson(f, m, b);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                rec(f, a, m, left, 0.5 * tol, depth - 1)
                    + rec(f, m, b, right, 0.5 * tol, depth - 1)
            }
        }
        rec(f, a, b, simpson(f, a, b), tol, depth)
    }

    #[test]
    fn fixed_points_at_zeros() {
        let p = fig1_profile();
        let cfg = MapSolverConfig::default();
        let zeros = p.find_zeros(0.0, TAU / 0.07).unwrap();
        assert!(!zeros.is_empty());
        for z in zeros {
            let r = solve_map(&p, z, &cfg).unwrap();
            assert!((r.s - z).abs() <= cfg.resolved_abs_tol(&p) + 1e-9 * z.abs());
            // Eq.-of-motion limit at the zero
            assert_relative_eq!(r.g, approx_compression(&p, z), max_relative = 1e-8);
        }
    }

    #[test]
    fn reversibility_backward_characteristics() {
        let p = fig1_profile();
        let back = p.negated();
        let cfg = MapSolverConfig::default();
        for k in 0..24 {
            let eta = 0.3 + k as f64 * 3.1;
            let fwd = solve_map(&p, eta, &cfg).unwrap();
            let rec = solve_map(&back, fwd.s, &cfg).unwrap();
            assert!((rec.s - eta).abs() < 1e-8 * eta.abs().max(TAU));
        }
    }

    #[test]
    fn compression_ratio_cross_check() {
        // away from zeros, G = ψ(s)/ψ(η)
        let p = fig1_profile();
        let cfg = MapSolverConfig::default();
        let floor = 1e-3 * p.amplitude_sum();
        for k in 0..200 {
            let eta = k as f64 * 0.45;
            let r = solve_map(&p, eta, &cfg).unwrap();
            let pe = p.psi(eta);
            if pe.abs() > floor {
                assert_relative_eq!(r.g, p.psi(r.s) / pe, max_relative = 1e-7);
            }
        }
    }

    #[test]
    fn derivative_consistency() {
        // (s(η+h) - s(η-h)) / 2h = G(η)
        let p = fig1_profile();
        let cfg = MapSolverConfig {
            rel_tol: 1e-13,
            abs_tol: Some(1e-15 * TAU / 0.07),
            max_steps: 1_000_000,
        };
        let h = 1e-6 * TAU / 0.07;
        for k in 0..40 {
            let eta = 1.3 + k as f64 * 2.17;
            let r = solve_map(&p, eta, &cfg).unwrap();
            let sp = solve_map(&p, eta + h, &cfg).unwrap().s;
            let sm = solve_map(&p, eta - h, &cfg).unwrap().s;
            assert_relative_eq!((sp - sm) / (2.0 * h), r.g, max_relative = 1e-6);
        }
    }

    #[test]
    fn monotone_within_inter_zero_interval() {
        let p = fig1_profile();
        let cfg = MapSolverConfig::default();
        let zeros = p.find_zeros(0.0, TAU / 0.07).unwrap();
        let (lo, hi) = (zeros[0], zeros[1]);
        let mut prev = f64::NEG_INFINITY;
        for k in 1..60 {
            let eta = lo + (hi - lo) * k as f64 / 60.0;
            let s = solve_map(&p, eta, &cfg).unwrap().s;
            assert!(s > prev);
            assert!(s > lo && s < hi, "s left the interval");
            prev = s;
        }
    }

    #[test]
    fn linearized_map_examples() {
        let p = SusceptibilityProfile::single(mode(0.8));
        // fixed point at a zero
        assert_relative_eq!(local_linearized_map(&p, 0.0, 0.0).unwrap(), 0.0);
        // s = 0.01·e^{-0.8} at a zero of ψ
        let s = local_linearized_map(&p, 0.0, 0.01).unwrap();
        assert_relative_eq!(s, 0.01 * 0.4493289641172216, max_relative = 1e-14);
        // against the closed form
        let exact = single_mode_map(&mode(0.8), 0.01).s;
        assert!((s - exact).abs() < 1e-4);
        // singular where ψ' vanishes
        assert!(matches!(
            local_linearized_map(&p, FRAC_PI_2, 1.6),
            Err(Error::SingularLinearization { .. })
        ));
    }

    #[test]
    fn approx_compression_examples() {
        assert_eq!(approx_compression(&SusceptibilityProfile::empty(), 0.3), 1.0);
        let p = SusceptibilityProfile::single(mode(0.8));
        assert_relative_eq!(approx_compression(&p, 0.0), 0.4493289641172216, max_relative = 1e-15);
        // fig-1 profile: both mode zeros coincide at the origin
        let p = fig1_profile();
        let expect = 0.2465969639416065; // e^{-1.4}
        assert_relative_eq!(approx_compression(&p, 0.0), expect, max_relative = 1e-14);
        let g = solve_map(&p, 0.0, &MapSolverConfig::default()).unwrap().g;
        assert_relative_eq!(g, expect, max_relative = 1e-9);
    }

    #[test]
    fn validity_condition() {
        // a zero of ψ always satisfies the condition, with infinite rhs
        let p = fig1_profile();
        let v = check_validity(&p, 0.0, TAU).unwrap();
        assert!(v.satisfied);
        assert!(v.rhs.is_infinite());
        // small susceptibility and modulation
        let p = SusceptibilityProfile::single(mode(0.001));
        let v = check_validity(&p, FRAC_PI_2, TAU).unwrap();
        assert!(v.satisfied);
        assert_relative_eq!(v.lhs, 1.0, max_relative = 1e-3);
        // strong modulation fails
        let p = SusceptibilityProfile::single(mode(2.0));
        let v = check_validity(&p, FRAC_PI_2, TAU).unwrap();
        assert!(!v.satisfied);
        assert!(check_validity(&p, 0.0, -1.0).is_err());
    }

    #[test]
    fn non_convergence_carries_state() {
        let p = fig1_profile();
        let cfg = MapSolverConfig {
            rel_tol: 1e-14,
            abs_tol: Some(1e-16),
            max_steps: 3,
        };
        match solve_map(&p, 9.4, &cfg) {
            Err(Error::NonConvergence { eta, zeta, .. }) => {
                assert_eq!(eta, 9.4);
                assert!((0.0..1.0).contains(&zeta));
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
