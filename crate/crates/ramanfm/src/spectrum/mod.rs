//! Spectral analysis, the small-depth Bessel sideband prediction, and
//! phase-compensated time-domain synthesis.

mod bessel;
mod fft;

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::grid::UniformGrid;
use crate::propagation::{CascadeStage, FieldTrace, ProbePulse};
use crate::susceptibility::RamanMode;
use crate::{Error, Result};

pub use bessel::bessel_j;

/// Window taper applied before transforming.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Taper {
    None,
    Hann,
}

/// Grid and taper that produced a spectrum; enough to invert it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowMeta {
    pub taper: Taper,
    pub start: f64,
    pub step: f64,
    pub len: usize,
    /// Carrier frequency of the source trace.
    pub carrier: f64,
}

/// One-sided discrete spectrum of a real field trace.
///
/// Bin `k` holds `amps[k] = Δη · Σ_n E(η_n) e^(-i ω_k η_n)` at
/// `ω_k = 2πk/(N·Δη)`, i.e. phases are referenced to `η = 0`. Under this
/// normalization Parseval reads `Σ_k c_k |amps[k]|² / (N·Δη) = Σ_n E² Δη`
/// with `c_k = 2` except on the DC and (even-length) Nyquist bins.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub freqs: Vec<f64>,
    pub amps: Vec<Complex64>,
    pub meta: WindowMeta,
}

impl Spectrum {
    /// Discrete form of `∫ |Ê(ω)|² dω/2π`, equal to `∫ E² dη` for an
    /// untapered transform.
    pub fn parseval_sum(&self) -> f64 {
        let n = self.meta.len;
        let norm = 1.0 / (n as f64 * self.meta.step);
        let nyquist_single = n % 2 == 0;
        let last = self.amps.len() - 1;
        self.amps
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let c = if k == 0 || (nyquist_single && k == last) { 1.0 } else { 2.0 };
                c * a.norm_sqr() * norm
            })
            .sum()
    }

    /// Amplitude-weighted centroid frequency.
    pub fn centroid(&self) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for (f, a) in self.freqs.iter().zip(self.amps.iter()) {
            let m = a.norm();
            num += m * f;
            den += m;
        }
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }
}

/// Transform a trace to its one-sided spectrum.
pub fn dft_spectrum(trace: &FieldTrace, taper: Taper) -> Spectrum {
    let n = trace.grid.len();
    let step = trace.grid.step();
    let start = trace.grid.start();

    let buf: Vec<Complex64> = match taper {
        Taper::None => trace.e.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        Taper::Hann => trace
            .e
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let w = 0.5
                    * (1.0
                        - libm::cos(core::f64::consts::TAU * i as f64 / (n - 1) as f64));
                Complex64::new(v * w, 0.0)
            })
            .collect(),
    };
    let transformed = fft::dft(&buf, false);

    let half = n / 2 + 1;
    let d_omega = core::f64::consts::TAU / (n as f64 * step);
    let mut freqs = Vec::with_capacity(half);
    let mut amps = Vec::with_capacity(half);
    // phase reference at η = 0: multiply by e^(-i ω_k η₀) = e^(-2πi k·r)
    // with r = η₀/(N·Δη), reduced to [-1/2, 1/2) before the trig call
    let ratio = start / (n as f64 * step);
    for (k, x) in transformed.iter().take(half).enumerate() {
        let kr = k as f64 * ratio;
        let ang = -core::f64::consts::TAU * (kr - libm::round(kr));
        let (s, c) = libm::sincos(ang);
        freqs.push(k as f64 * d_omega);
        amps.push(x * Complex64::new(c, s) * step);
    }
    Spectrum {
        freqs,
        amps,
        meta: WindowMeta { taper, start, step, len: n, carrier: trace.omega0 },
    }
}

/// Zero the phase of every bin and inverse-transform.
///
/// The result is real by construction (the one-sided magnitudes extend to a
/// Hermitian full spectrum) and peaks at the `η = 0` phase reference. The
/// returned trace carries `G = 1` and the identity map.
pub fn phase_compensate(spectrum: &Spectrum) -> FieldTrace {
    let n = spectrum.meta.len;
    let step = spectrum.meta.step;
    let start = spectrum.meta.start;
    let ratio = start / (n as f64 * step);

    let mut full = vec![Complex64::new(0.0, 0.0); n];
    for (k, a) in spectrum.amps.iter().enumerate() {
        // zero-phase amplitude, re-referenced to the grid origin
        let kr = k as f64 * ratio;
        let ang = core::f64::consts::TAU * (kr - libm::round(kr));
        let (s, c) = libm::sincos(ang);
        let v = a.norm() * Complex64::new(c, s);
        full[k] = v;
        if k != 0 && k != n - k {
            full[n - k] = v.conj();
        }
    }
    let time = fft::dft(&full, true);
    let scale = 1.0 / (n as f64 * step);
    let grid = UniformGrid::from_step(start, step, n).expect("meta grid is valid");
    FieldTrace {
        grid,
        e: time.iter().map(|v| v.re * scale).collect(),
        g: vec![1.0; n],
        s: grid.iter().collect(),
        omega0: spectrum.meta.carrier,
    }
}

/// Frequency extent of the spectrum above an amplitude floor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralExtent {
    pub lo: f64,
    pub hi: f64,
    /// `(hi - ω̄_c)/(ω̄_c - lo) - 1` with `ω̄_c` the amplitude-weighted
    /// centroid; zero for a single-bin extent.
    pub asymmetry: f64,
}

/// Lowest and highest bins with `|amp| ≥ floor·max|amp|`.
pub fn spectral_extent(spectrum: &Spectrum, floor: f64) -> Result<SpectralExtent> {
    if !(floor > 0.0 && floor < 1.0) {
        return Err(Error::InvalidArgument("floor must lie in (0, 1)"));
    }
    let max = spectrum.amps.iter().map(|a| a.norm()).fold(0.0f64, f64::max);
    if max <= 0.0 {
        return Err(Error::DegenerateSpectrum);
    }
    let threshold = floor * max;
    let mut lo = None;
    let mut hi = None;
    for (f, a) in spectrum.freqs.iter().zip(spectrum.amps.iter()) {
        if a.norm() >= threshold {
            if lo.is_none() {
                lo = Some(*f);
            }
            hi = Some(*f);
        }
    }
    let (lo, hi) = (lo.ok_or(Error::DegenerateSpectrum)?, hi.unwrap());
    let centroid = spectrum.centroid();
    let asymmetry = if hi == lo || centroid <= lo || centroid >= hi {
        0.0
    } else {
        (hi - centroid) / (centroid - lo) - 1.0
    };
    Ok(SpectralExtent { lo, hi, asymmetry })
}

/// Small-depth sideband prediction for a sequence of cells.
///
/// In the small-depth limit the input-output time relation is a pure phase
/// modulation of the carrier, `ω₀s = ω₀η - Σ_j ξ_j sin(ω_j η + φ_j)` with
/// index `ξ_j = α_j z_j · ω₀/ω_j`, so the output expands over harmonics
/// `ω₀ + Σ_j q_j ω_j` with amplitudes `Π_j J_{q_j}(ξ_j)` relative to the
/// input carrier.
#[derive(Clone, Debug, PartialEq)]
pub struct SidebandPrediction {
    /// One entry of `q_j` per mode, aligned with `freqs`/`amps`.
    pub orders: Vec<Vec<i32>>,
    pub freqs: Vec<f64>,
    pub amps: Vec<f64>,
    /// False when some depth exceeds 0.1 and the expansion is questionable.
    pub small_depth: bool,
}

/// Predict sideband amplitudes `Π_j J_{q_j}(ξ_j)` for all order tuples with
/// `|q_j| ≤ max_order`.
pub fn predict_sidebands(
    pulse: &ProbePulse,
    stages: &[CascadeStage],
    max_order: u32,
) -> SidebandPrediction {
    let modes: Vec<&RamanMode> =
        stages.iter().flat_map(|st| st.profile.modes().iter()).collect();
    let small_depth = modes.iter().all(|m| m.comb_depth.abs() <= 0.1);
    let k = max_order as i32;
    let per_mode = (2 * k + 1) as usize;

    // Bessel table per mode: J_{-K..K}(ξ_j)
    let tables: Vec<Vec<f64>> = modes
        .iter()
        .map(|m| {
            let xi = modulation_depth(m, pulse.omega0);
            (-k..=k).map(|q| bessel_j(q, xi)).collect()
        })
        .collect();

    let total = per_mode.pow(modes.len() as u32);
    let mut orders = Vec::with_capacity(total);
    let mut freqs = Vec::with_capacity(total);
    let mut amps = Vec::with_capacity(total);
    let mut idx = vec![0usize; modes.len()];
    for _ in 0..total {
        let mut freq = pulse.omega0;
        let mut amp = 1.0;
        let mut tuple = Vec::with_capacity(modes.len());
        for (j, m) in modes.iter().enumerate() {
            let q = idx[j] as i32 - k;
            tuple.push(q);
            freq += q as f64 * m.omega;
            amp *= tables[j][idx[j]];
        }
        orders.push(tuple);
        freqs.push(freq);
        amps.push(amp);
        // odometer increment
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < per_mode {
                break;
            }
            *slot = 0;
        }
    }
    SidebandPrediction { orders, freqs, amps, small_depth }
}

/// Phase-modulation index `γ_j z_j = α_j z_j · ω₀/ω_j` of one mode.
///
/// Only the frequency ratio enters, so any consistent unit works.
pub fn modulation_depth(mode: &RamanMode, omega0: f64) -> f64 {
    mode.comb_depth * omega0 / mode.omega
}
