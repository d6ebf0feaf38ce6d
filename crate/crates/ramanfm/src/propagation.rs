//! Output-field construction for mixture media and cell cascades.
//!
//! A mixture is a single cell whose susceptibility is the full multimode
//! profile; a cascade sends the probe through separate cells in sequence.
//! Both produce `E_out(η) = E_in(s(η)) · G(η)` on a sampled grid, they only
//! differ in how `(s, G)` is composed. For a cascade the map of the *last*
//! cell is applied to `η` first: its output is the time at the preceding
//! interface, and so on back to the medium entrance. The total compression
//! factor is the product of the per-stage factors, each evaluated at that
//! stage's own output time.

use alloc::vec::Vec;

use crate::grid::UniformGrid;
use crate::susceptibility::SusceptibilityProfile;
use crate::timemap::{self, MapSolverConfig, TimeMapResult};
use crate::{Error, Result};

/// Gaussian-envelope probe pulse with a cosine carrier:
/// `E_in(η) = A · exp[-(η-η_p)²/T²] · cos[ω₀(η-η_p)]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbePulse {
    pub omega0: f64,
    /// Gaussian envelope scale `T`.
    pub length: f64,
    pub peak_time: f64,
    pub peak_amplitude: f64,
}

impl ProbePulse {
    pub fn new(omega0: f64, length: f64, peak_time: f64) -> Result<Self> {
        if !(omega0 > 0.0) || !omega0.is_finite() {
            return Err(Error::InvalidArgument("carrier frequency must be positive"));
        }
        if !(length > 0.0) {
            return Err(Error::InvalidArgument("pulse length must be positive"));
        }
        if !peak_time.is_finite() {
            return Err(Error::InvalidArgument("peak time must be finite"));
        }
        Ok(Self { omega0, length, peak_time, peak_amplitude: 1.0 })
    }

    pub fn with_amplitude(mut self, a: f64) -> Self {
        self.peak_amplitude = a;
        self
    }

    #[inline]
    pub fn field_at(&self, t: f64) -> f64 {
        let u = t - self.peak_time;
        let x = u / self.length;
        self.peak_amplitude * libm::exp(-x * x) * libm::cos(self.omega0 * u)
    }

    pub fn envelope_at(&self, t: f64) -> f64 {
        let x = (t - self.peak_time) / self.length;
        self.peak_amplitude * libm::exp(-x * x)
    }
}

/// One cell of a cascade.
#[derive(Clone, Debug, PartialEq)]
pub struct CascadeStage {
    pub profile: SusceptibilityProfile,
}

impl CascadeStage {
    pub fn new(profile: SusceptibilityProfile) -> Self {
        Self { profile }
    }
}

/// Sampled real field on a uniform grid, together with the map data that
/// produced it.
///
/// For input traces `s` is the grid itself and `g` is one everywhere.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldTrace {
    pub grid: UniformGrid,
    /// Field samples `E(η_i)`.
    pub e: Vec<f64>,
    /// Compression-factor samples `G(η_i)`, positive.
    pub g: Vec<f64>,
    /// Input-time samples `s(η_i)`.
    pub s: Vec<f64>,
    /// Carrier frequency of the probe that generated the trace.
    pub omega0: f64,
}

/// Sample the analytic input pulse on a grid (identity map, `G = 1`).
pub fn sample_input(pulse: &ProbePulse, grid: &UniformGrid) -> FieldTrace {
    let n = grid.len();
    let mut e = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n);
    for t in grid.iter() {
        e.push(pulse.field_at(t));
        s.push(t);
    }
    FieldTrace {
        grid: *grid,
        e,
        g: alloc::vec![1.0; n],
        s,
        omega0: pulse.omega0,
    }
}

/// Solve the map at every grid point.
pub fn map_grid(
    profile: &SusceptibilityProfile,
    grid: &UniformGrid,
    cfg: &MapSolverConfig,
) -> Result<Vec<TimeMapResult>> {
    grid.iter().map(|eta| timemap::solve_map(profile, eta, cfg)).collect()
}

/// The composed cascade map at a single output time.
pub fn cascade_map_at(
    stages: &[CascadeStage],
    eta: f64,
    cfg: &MapSolverConfig,
) -> Result<TimeMapResult> {
    if stages.is_empty() {
        return Err(Error::NoStages);
    }
    let mut t = eta;
    let mut g = 1.0;
    for stage in stages.iter().rev() {
        let r = timemap::solve_map(&stage.profile, t, cfg)?;
        g *= r.g;
        t = r.s;
    }
    Ok(TimeMapResult { eta, s: t, g })
}

/// Assemble an output trace from precomputed map samples. Callers that
/// evaluate the map concurrently feed their results through here.
pub fn trace_from_map(
    pulse: &ProbePulse,
    grid: &UniformGrid,
    map: &[TimeMapResult],
) -> FieldTrace {
    debug_assert_eq!(map.len(), grid.len());
    let mut e = Vec::with_capacity(map.len());
    let mut g = Vec::with_capacity(map.len());
    let mut s = Vec::with_capacity(map.len());
    for r in map {
        e.push(pulse.field_at(r.s) * r.g);
        g.push(r.g);
        s.push(r.s);
    }
    FieldTrace { grid: *grid, e, g, s, omega0: pulse.omega0 }
}

/// Propagate the probe through a mixture medium: `E(η) = E_in(s(η))·G(η)`.
pub fn propagate_mixture(
    pulse: &ProbePulse,
    profile: &SusceptibilityProfile,
    grid: &UniformGrid,
    cfg: &MapSolverConfig,
) -> Result<FieldTrace> {
    let map = map_grid(profile, grid, cfg)?;
    Ok(trace_from_map(pulse, grid, &map))
}

/// Propagate the probe through an ordered cascade of cells (first element
/// traversed first).
pub fn propagate_cascade(
    pulse: &ProbePulse,
    stages: &[CascadeStage],
    grid: &UniformGrid,
    cfg: &MapSolverConfig,
) -> Result<FieldTrace> {
    if stages.is_empty() {
        return Err(Error::NoStages);
    }
    let map: Result<Vec<TimeMapResult>> = grid
        .iter()
        .map(|eta| cascade_map_at(stages, eta, cfg))
        .collect();
    Ok(trace_from_map(pulse, grid, &map?))
}

/// One row of the mixture-versus-cascade comparison table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompareRow {
    pub eta: f64,
    /// Full nonlinear mixture factor.
    pub g_mix: f64,
    /// Product of the closed-form single-mode factors at `η`.
    pub g_product: f64,
    /// Cascade in the given stage order.
    pub g_ab: f64,
    /// Cascade in the reversed stage order.
    pub g_ba: f64,
}

/// Tabulate the mixture factor, the product of individual comb factors, and
/// both cascade orders on a grid. `stages` is expected to be the single-mode
/// decomposition of `profile`.
pub fn compare_factors(
    profile: &SusceptibilityProfile,
    stages: &[CascadeStage],
    grid: &UniformGrid,
    cfg: &MapSolverConfig,
) -> Result<Vec<CompareRow>> {
    if stages.is_empty() {
        return Err(Error::NoStages);
    }
    let mut reversed: Vec<CascadeStage> = stages.to_vec();
    reversed.reverse();
    grid.iter().map(|eta| compare_at(profile, stages, &reversed, eta, cfg)).collect()
}

pub(crate) fn compare_at(
    profile: &SusceptibilityProfile,
    stages: &[CascadeStage],
    reversed: &[CascadeStage],
    eta: f64,
    cfg: &MapSolverConfig,
) -> Result<CompareRow> {
    let g_mix = timemap::solve_map(profile, eta, cfg)?.g;
    let g_product = profile
        .modes()
        .iter()
        .map(|m| timemap::single_mode_map(m, eta).g)
        .product();
    let g_ab = cascade_map_at(stages, eta, cfg)?.g;
    let g_ba = cascade_map_at(reversed, eta, cfg)?.g;
    Ok(CompareRow { eta, g_mix, g_product, g_ab, g_ba })
}

/// Grid density rule: at least `samples_per_period` samples per period of the
/// fastest expected oscillation `ω₀ · exp(Σ|α_j z|)`.
pub fn recommended_grid_count(
    pulse: &ProbePulse,
    profile: &SusceptibilityProfile,
    span: f64,
    samples_per_period: f64,
) -> usize {
    let g_max_est = libm::exp(profile.depth_sum());
    let max_freq = pulse.omega0 * g_max_est;
    libm::ceil(span * max_freq * samples_per_period / core::f64::consts::TAU) as usize
}
