//! The multimode time-varying Raman susceptibility in reduced form.
//!
//! Each coherently excited Raman transition contributes one sinusoid to the
//! susceptibility. Working in depth-scaled form, mode `j` enters every
//! computed quantity only through its comb depth `α_j·z`, so the propagation
//! distance is implicit in the profile. The reduced susceptibility is
//!
//! `ψ(θ) = Σ_j (α_j z / ω_j) · sin(ω_j θ + φ_j)`
//!
//! and has time dimension; its derivative `ψ'(θ) = Σ_j α_j z · cos(ω_j θ + φ_j)`
//! is dimensionless.

use alloc::vec::Vec;

use crate::{Error, Result};

/// One sinusoidal susceptibility mode.
///
/// `comb_depth` is the dimensionless product `α_j·z`; a negative depth is the
/// same mode phase-shifted by π.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RamanMode {
    pub comb_depth: f64,
    pub omega: f64,
    pub phase: f64,
}

impl RamanMode {
    pub fn new(comb_depth: f64, omega: f64, phase: f64) -> Result<Self> {
        if !comb_depth.is_finite() {
            return Err(Error::InvalidArgument("comb_depth must be finite"));
        }
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidArgument("omega must be positive and finite"));
        }
        if !phase.is_finite() {
            return Err(Error::InvalidArgument("phase must be finite"));
        }
        Ok(Self { comb_depth, omega, phase })
    }

    /// Reduced amplitude `a_j = comb_depth / ω_j` (a time).
    #[inline]
    pub fn reduced_amplitude(&self) -> f64 {
        self.comb_depth / self.omega
    }

    pub fn period(&self) -> f64 {
        core::f64::consts::TAU / self.omega
    }
}

/// An ordered superposition of sinusoidal modes; may be empty (no modulation).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SusceptibilityProfile {
    modes: Vec<RamanMode>,
}

impl SusceptibilityProfile {
    pub fn new(modes: Vec<RamanMode>) -> Self {
        Self { modes }
    }

    pub fn empty() -> Self {
        Self { modes: Vec::new() }
    }

    pub fn single(mode: RamanMode) -> Self {
        Self { modes: alloc::vec![mode] }
    }

    pub fn modes(&self) -> &[RamanMode] {
        &self.modes
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// `ψ(θ) = Σ_j a_j sin(ω_j θ + φ_j)`.
    pub fn psi(&self, theta: f64) -> f64 {
        let mut acc = 0.0;
        for m in &self.modes {
            acc += m.reduced_amplitude() * libm::sin(m.omega * theta + m.phase);
        }
        acc
    }

    /// `ψ'(θ) = Σ_j α_j z · cos(ω_j θ + φ_j)`, the exact derivative of [`psi`].
    ///
    /// [`psi`]: SusceptibilityProfile::psi
    pub fn psi_prime(&self, theta: f64) -> f64 {
        let mut acc = 0.0;
        for m in &self.modes {
            acc += m.comb_depth * libm::cos(m.omega * theta + m.phase);
        }
        acc
    }

    /// `ψ` and `ψ'` together; one `sincos` per mode, used by the map solver's
    /// inner loop.
    #[inline]
    pub fn psi_and_prime(&self, theta: f64) -> (f64, f64) {
        let mut p = 0.0;
        let mut pp = 0.0;
        for m in &self.modes {
            let (sin, cos) = libm::sincos(m.omega * theta + m.phase);
            p += m.reduced_amplitude() * sin;
            pp += m.comb_depth * cos;
        }
        (p, pp)
    }

    /// Bound `Σ_j |a_j|` on `|ψ|`.
    pub fn amplitude_sum(&self) -> f64 {
        self.modes.iter().map(|m| m.reduced_amplitude().abs()).sum()
    }

    /// `Σ_j |α_j z|`, the bound on `|ψ'|`.
    pub fn depth_sum(&self) -> f64 {
        self.modes.iter().map(|m| m.comb_depth.abs()).sum()
    }

    pub fn min_omega(&self) -> Option<f64> {
        self.modes.iter().map(|m| m.omega).reduce(f64::min)
    }

    pub fn max_omega(&self) -> Option<f64> {
        self.modes.iter().map(|m| m.omega).reduce(f64::max)
    }

    /// Period of the slowest mode, or `None` for an empty profile.
    pub fn longest_period(&self) -> Option<f64> {
        self.min_omega().map(|w| core::f64::consts::TAU / w)
    }

    /// Same modes with all comb depths negated (the backward medium).
    pub fn negated(&self) -> Self {
        Self {
            modes: self
                .modes
                .iter()
                .map(|m| RamanMode { comb_depth: -m.comb_depth, ..*m })
                .collect(),
        }
    }

    /// All sign-change roots of `ψ` in `[lo, hi]`, ascending.
    ///
    /// The interval is scanned at 256 samples per shortest mode period and
    /// each bracketed root is refined by bisection to an absolute tolerance of
    /// `1e-12 · 2π/ω_min`. Tangential (non-sign-changing) zeros are reported
    /// only when they fall exactly on a scan node.
    pub fn find_zeros(&self, lo: f64, hi: f64) -> Result<Vec<f64>> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::ReversedInterval { lo, hi });
        }
        let mut zeros = Vec::new();
        let (min_w, max_w) = match (self.min_omega(), self.max_omega()) {
            (Some(a), Some(b)) => (a, b),
            // ψ ≡ 0: by convention no discrete zeros are reported.
            _ => return Ok(zeros),
        };
        let tol = 1e-12 * core::f64::consts::TAU / min_w;
        let scan_step = core::f64::consts::TAU / max_w / 256.0;
        let steps = libm::ceil((hi - lo) / scan_step) as usize;
        let step = (hi - lo) / steps as f64;

        let mut prev_t = lo;
        let mut prev_v = self.psi(lo);
        if prev_v == 0.0 {
            zeros.push(lo);
        }
        for k in 1..=steps {
            let t = if k == steps { hi } else { lo + k as f64 * step };
            let v = self.psi(t);
            if v == 0.0 {
                push_zero(&mut zeros, t, tol);
            } else if prev_v != 0.0 && ((prev_v < 0.0) != (v < 0.0)) {
                let root = self.bisect(prev_t, t, prev_v, tol);
                push_zero(&mut zeros, root, tol);
            }
            prev_t = t;
            prev_v = v;
        }
        Ok(zeros)
    }

    fn bisect(&self, mut lo: f64, mut hi: f64, v_lo: f64, tol: f64) -> f64 {
        let lo_neg = v_lo < 0.0;
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            let v = self.psi(mid);
            if v == 0.0 {
                return mid;
            }
            if (v < 0.0) == lo_neg {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

fn push_zero(zeros: &mut Vec<f64>, z: f64, tol: f64) {
    if zeros.last().is_none_or(|&last| z - last > tol) {
        zeros.push(z);
    }
}

/// Lab-frame unit conventions. Documentation-only record: the average
/// velocity `v = 2c/χ₀` relates the reduced local time to the lab frame, but
/// never enters any computation because every implemented relation depends on
/// `z`, `c`, and the raw mode amplitudes only through the comb depths.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameConvention {
    pub chi0: f64,
    pub c: f64,
}

impl FrameConvention {
    /// Implied average phase and group velocity in local-time coordinates.
    pub fn average_velocity(&self) -> f64 {
        2.0 * self.c / self.chi0
    }
}
