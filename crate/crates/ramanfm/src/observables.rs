//! Conserved and non-conserved pulse diagnostics.
//!
//! Under the time remapping, pulse area, photon number, oscillation count,
//! and the product of window length and mean frequency are all conserved;
//! pulse energy is not. All integrals use composite Simpson quadrature on the
//! trace's uniform grid, with windows snapped to grid nodes.

use alloc::vec::Vec;

use crate::grid::{UniformGrid, Window};
use crate::propagation::{sample_input, FieldTrace, ProbePulse};
use crate::quad::simpson;
use crate::{Error, Result};

/// Pulse area `∫ E dη` over the window.
pub fn pulse_area(trace: &FieldTrace, window: Window) -> Result<f64> {
    let (i0, i1) = window.node_range(&trace.grid)?;
    Ok(simpson(&trace.e[i0..=i1], trace.grid.step()))
}

/// Per-sample instantaneous oscillation frequency `ω_osc(η) = G(η)·ω₀`.
pub fn instantaneous_frequency(trace: &FieldTrace) -> Vec<f64> {
    trace.g.iter().map(|g| g * trace.omega0).collect()
}

/// Photon number `∫ E²/ω_osc dη` in normalized units (the `cε₀/2ħ` prefactor
/// cancels in every exposed ratio).
pub fn photon_number(trace: &FieldTrace, window: Window) -> Result<f64> {
    let (i0, i1) = window.node_range(&trace.grid)?;
    let vals: Vec<f64> = (i0..=i1)
        .map(|i| trace.e[i] * trace.e[i] / (trace.g[i] * trace.omega0))
        .collect();
    Ok(simpson(&vals, trace.grid.step()))
}

/// Mean oscillation frequency over the window,
/// `ω̄ = (η₂-η₁)⁻¹ ∫ ω_osc dη`.
pub fn mean_frequency(trace: &FieldTrace, window: Window) -> Result<f64> {
    let (i0, i1) = window.node_range(&trace.grid)?;
    let vals: Vec<f64> = (i0..=i1).map(|i| trace.g[i] * trace.omega0).collect();
    let span = (i1 - i0) as f64 * trace.grid.step();
    Ok(simpson(&vals, trace.grid.step()) / span)
}

/// Number of strict sign changes of the field in the window.
///
/// Exact zero samples extend the current sign run. Fails if any sample's
/// phase advance `G·ω₀·Δη` exceeds π/2 (fewer than four samples per local
/// oscillation), which is too coarse to count reliably.
pub fn count_oscillations(trace: &FieldTrace, window: Window) -> Result<usize> {
    let (i0, i1) = window.node_range(&trace.grid)?;
    for i in i0..=i1 {
        let phase_step = trace.g[i] * trace.omega0 * trace.grid.step();
        if phase_step > core::f64::consts::FRAC_PI_2 {
            return Err(Error::UnderResolved { index: i, phase_step });
        }
    }
    let mut count = 0;
    let mut prev = 0.0f64;
    for &v in &trace.e[i0..=i1] {
        if v != 0.0 {
            if prev != 0.0 && (v < 0.0) != (prev < 0.0) {
                count += 1;
            }
            prev = v;
        }
    }
    Ok(count)
}

/// Pulse energy `∫ E² dη` over the window (not conserved in general).
pub fn energy(trace: &FieldTrace, window: Window) -> Result<f64> {
    let (i0, i1) = window.node_range(&trace.grid)?;
    let vals: Vec<f64> = trace.e[i0..=i1].iter().map(|e| e * e).collect();
    Ok(simpson(&vals, trace.grid.step()))
}

/// Input/output diagnostics over an output window `[η₁, η₂]` and its mapped
/// input window `[s₁, s₂]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConservationReport {
    pub eta_window: (f64, f64),
    pub s_window: (f64, f64),
    pub area_in: f64,
    pub area_out: f64,
    pub photons_in: f64,
    pub photons_out: f64,
    pub zero_count_in: usize,
    pub zero_count_out: usize,
    pub energy_in: f64,
    pub energy_out: f64,
    /// `ω₀·(s₂-s₁)`.
    pub mean_freq_product_in: f64,
    /// `ω̄·(η₂-η₁)`.
    pub mean_freq_product_out: f64,
}

impl ConservationReport {
    /// Relative-error denominators are floored to keep ratios meaningful for
    /// near-zero areas.
    pub const EPS_FLOOR: f64 = 1e-12;

    pub fn area_error(&self) -> f64 {
        rel_err(self.area_out, self.area_in)
    }

    pub fn photon_error(&self) -> f64 {
        rel_err(self.photons_out, self.photons_in)
    }

    pub fn mean_freq_error(&self) -> f64 {
        rel_err(self.mean_freq_product_out, self.mean_freq_product_in)
    }

    pub fn energy_ratio(&self) -> f64 {
        self.energy_out / self.energy_in
    }

    pub fn zero_counts_match(&self) -> bool {
        self.zero_count_in == self.zero_count_out
    }
}

fn rel_err(out: f64, reference: f64) -> f64 {
    (out - reference).abs() / reference.abs().max(ConservationReport::EPS_FLOOR)
}

/// Build the conservation report for a propagated trace.
///
/// Output-side integrals run over the snapped window of the trace itself;
/// input-side integrals sample the analytic pulse on the mapped window
/// `[s₁, s₂]` with the same number of nodes (the map never decreases the
/// sample density below the output grid's own rule).
pub fn conservation_report(
    pulse: &ProbePulse,
    trace: &FieldTrace,
    window: Window,
) -> Result<ConservationReport> {
    let (i0, i1) = window.node_range(&trace.grid)?;
    let eta1 = trace.grid.at(i0);
    let eta2 = trace.grid.at(i1);
    let s1 = trace.s[i0];
    let s2 = trace.s[i1];
    let n = i1 - i0 + 1;

    let snapped = Window { lo: eta1, hi: eta2 };
    let area_out = pulse_area(trace, snapped)?;
    let photons_out = photon_number(trace, snapped)?;
    let zero_count_out = count_oscillations(trace, snapped)?;
    let energy_out = energy(trace, snapped)?;
    let mean_freq_product_out = mean_frequency(trace, snapped)? * (eta2 - eta1);

    let input = sample_input(pulse, &UniformGrid::closed(s1, s2, n)?);
    let in_window = input.grid.full_window();
    let area_in = pulse_area(&input, in_window)?;
    let photons_in = photon_number(&input, in_window)?;
    let zero_count_in = count_oscillations(&input, in_window)?;
    let energy_in = energy(&input, in_window)?;

    Ok(ConservationReport {
        eta_window: (eta1, eta2),
        s_window: (s1, s2),
        area_in,
        area_out,
        photons_in,
        photons_out,
        zero_count_in,
        zero_count_out,
        energy_in,
        energy_out,
        mean_freq_product_in: pulse.omega0 * (s2 - s1),
        mean_freq_product_out,
    })
}
