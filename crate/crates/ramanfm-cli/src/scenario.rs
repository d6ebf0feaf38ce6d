//! Scenario files: a versioned key/value format describing the medium, the
//! probe, the grid, and solver settings.
//!
//! Two unit conventions are supported. In `normalized` units the fast mode
//! frequency is typically taken as 1 so times are in radians of that mode
//! (one period = 2π). In `wavenumber-fs` units every frequency field is a
//! wavenumber in cm⁻¹, converted at load time via `ω = 2πc·ν̃` with
//! `c = 2.99792458×10⁻⁵ cm/fs`, and every time field is in femtoseconds.
//! Comb depths are dimensionless in both conventions.

use std::path::Path;

use anyhow::{anyhow, bail, Context};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use ramanfm::{
    CascadeStage, MapSolverConfig, ProbePulse, RamanMode, SusceptibilityProfile, UniformGrid,
};

use crate::{AppError, AppResult};

/// Speed of light in cm per femtosecond.
pub const C_CM_PER_FS: f64 = 2.99792458e-5;

/// Convert a wavenumber in cm⁻¹ to an angular frequency in rad/fs.
pub fn wavenumber_to_angular(nu: f64) -> f64 {
    std::f64::consts::TAU * C_CM_PER_FS * nu
}

/// Convert an angular frequency in rad/fs back to a wavenumber in cm⁻¹.
pub fn angular_to_wavenumber(omega: f64) -> f64 {
    omega / (std::f64::consts::TAU * C_CM_PER_FS)
}

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Units {
    Normalized,
    WavenumberFs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputKind {
    Map,
    Field,
    Spectrum,
    Report,
    Synthesis,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeSpec {
    pub depth: f64,
    /// rad/time in normalized units; cm⁻¹ in wavenumber-fs units.
    pub omega: f64,
    #[serde(default)]
    pub phase: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileSpec {
    pub modes: Vec<ModeSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageSpec {
    pub modes: Vec<ModeSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PulseSpec {
    /// rad/time or cm⁻¹, by units.
    pub omega0: f64,
    /// Gaussian envelope scale, in grid time units.
    pub length: f64,
    #[serde(default)]
    pub peak_time: f64,
    #[serde(default = "default_amplitude")]
    pub peak_amplitude: f64,
}

fn default_amplitude() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    /// Sample count; spacing is `(stop-start)/count` with `stop` excluded
    /// (periodic convention, so spectra see a span of exactly `stop-start`).
    pub count: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverSpec {
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<f64>,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
}

fn default_rel_tol() -> f64 {
    1e-10
}

fn default_max_steps() -> usize {
    1_000_000
}

impl Default for SolverSpec {
    fn default() -> Self {
        Self { rel_tol: default_rel_tol(), abs_tol: None, max_steps: default_max_steps() }
    }
}

/// On-disk scenario schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    pub units: Units,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<OutputKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pulse: Option<PulseSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileSpec>,
    #[serde(default, rename = "stage", skip_serializing_if = "Vec::is_empty")]
    pub stages: Vec<StageSpec>,
    pub grid: GridSpec,
    #[serde(default)]
    pub solver: SolverSpec,
}

/// A loaded, unit-converted, validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub units: Units,
    pub outputs: Vec<OutputKind>,
    pub pulse: Option<ProbePulse>,
    pub profile: Option<SusceptibilityProfile>,
    pub stages: Vec<CascadeStage>,
    pub grid: UniformGrid,
    pub solver: MapSolverConfig,
    /// SHA-256 of the scenario text, for output provenance headers.
    pub sha256: String,
    /// File stem used to name output products.
    pub stem: String,
}

impl Scenario {
    pub fn load(path: &Path) -> AppResult<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading scenario {}", path.display()))
            .map_err(AppError::Config)?;
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("scenario")
            .to_string();
        Self::parse(&text, &stem)
    }

    pub fn parse(text: &str, stem: &str) -> AppResult<Self> {
        let file: ScenarioFile =
            toml::from_str(text).map_err(|e| AppError::Config(anyhow!(e)))?;
        let sha256 = hex_digest(text.as_bytes());
        Self::from_file(&file, sha256, stem.to_string()).map_err(AppError::Config)
    }

    fn from_file(file: &ScenarioFile, sha256: String, stem: String) -> anyhow::Result<Self> {
        if file.schema_version != SCHEMA_VERSION {
            bail!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                file.schema_version
            );
        }
        if file.profile.is_none() && file.stages.is_empty() {
            bail!("scenario must define a profile or at least one stage");
        }
        let freq = |v: f64| match file.units {
            Units::Normalized => v,
            Units::WavenumberFs => wavenumber_to_angular(v),
        };

        let convert_modes = |modes: &[ModeSpec]| -> anyhow::Result<Vec<RamanMode>> {
            modes
                .iter()
                .map(|m| {
                    RamanMode::new(m.depth, freq(m.omega), m.phase)
                        .map_err(|e| anyhow!("mode (depth {}, omega {}): {e}", m.depth, m.omega))
                })
                .collect()
        };

        let profile = file
            .profile
            .as_ref()
            .map(|p| convert_modes(&p.modes).map(SusceptibilityProfile::new))
            .transpose()?;
        let stages = file
            .stages
            .iter()
            .map(|st| {
                convert_modes(&st.modes)
                    .map(|m| CascadeStage::new(SusceptibilityProfile::new(m)))
            })
            .collect::<anyhow::Result<Vec<_>>>()?;

        let pulse = file
            .pulse
            .as_ref()
            .map(|p| {
                ProbePulse::new(freq(p.omega0), p.length, p.peak_time)
                    .map(|pp| pp.with_amplitude(p.peak_amplitude))
                    .map_err(|e| anyhow!("pulse: {e}"))
            })
            .transpose()?;

        let grid = UniformGrid::from_span(file.grid.start, file.grid.stop, file.grid.count)
            .map_err(|e| anyhow!("grid: {e}"))?;

        let solver = MapSolverConfig {
            rel_tol: file.solver.rel_tol,
            abs_tol: file.solver.abs_tol,
            max_steps: file.solver.max_steps,
        };
        solver.validate().map_err(|e| anyhow!("solver: {e}"))?;

        Ok(Self {
            units: file.units,
            outputs: file.outputs.clone(),
            pulse,
            profile,
            stages,
            grid,
            solver,
            sha256,
            stem,
        })
    }

    /// The mixture profile: as given, or the flattened stage modes.
    pub fn mixture_profile(&self) -> SusceptibilityProfile {
        match &self.profile {
            Some(p) => p.clone(),
            None => SusceptibilityProfile::new(
                self.stages
                    .iter()
                    .flat_map(|s| s.profile.modes().iter().copied())
                    .collect(),
            ),
        }
    }

    /// Cascade stages: as given, or the single-mode decomposition of the
    /// profile.
    pub fn cascade_stages(&self) -> Vec<CascadeStage> {
        if !self.stages.is_empty() {
            self.stages.clone()
        } else {
            self.profile
                .as_ref()
                .map(|p| {
                    p.modes()
                        .iter()
                        .map(|m| CascadeStage::new(SusceptibilityProfile::single(*m)))
                        .collect()
                })
                .unwrap_or_default()
        }
    }

    /// True when the scenario should propagate as a cascade (stages given,
    /// no mixture profile).
    pub fn is_cascade(&self) -> bool {
        self.profile.is_none() && !self.stages.is_empty()
    }

    pub fn require_pulse(&self) -> AppResult<&ProbePulse> {
        self.pulse
            .as_ref()
            .ok_or_else(|| AppError::Config(anyhow!("this subcommand needs a [pulse] section")))
    }

    /// Unit label for CSV headers.
    pub fn time_unit(&self) -> &'static str {
        match self.units {
            Units::Normalized => "normalized time (rad of the reference mode)",
            Units::WavenumberFs => "fs",
        }
    }

    pub fn freq_unit(&self) -> &'static str {
        match self.units {
            Units::Normalized => "rad per normalized time",
            Units::WavenumberFs => "rad/fs",
        }
    }
}

pub fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}
