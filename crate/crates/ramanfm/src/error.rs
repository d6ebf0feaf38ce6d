use core::fmt;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A search interval was given with `lo >= hi`.
    ReversedInterval { lo: f64, hi: f64 },
    /// A parameter violated a construction invariant.
    InvalidArgument(&'static str),
    /// The map solver exceeded its step budget; carries the last reached
    /// integration state `(zeta, s)` and the output time being solved.
    NonConvergence { eta: f64, zeta: f64, s: f64 },
    /// The local linearized map is undefined where the susceptibility
    /// derivative vanishes.
    SingularLinearization { eta_i: f64 },
    /// A window contained fewer than two grid nodes.
    EmptyWindow { lo: f64, hi: f64 },
    /// The grid is too coarse to count oscillations: the per-sample phase
    /// advance `G·ω₀·Δη` exceeded π/2 at `index`.
    UnderResolved { index: usize, phase_step: f64 },
    /// A cascade needs at least one stage.
    NoStages,
    /// No spectral bin lies above the requested floor.
    DegenerateSpectrum,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ReversedInterval { lo, hi } => {
                write!(f, "reversed interval: [{lo}, {hi}]")
            }
            Error::InvalidArgument(what) => write!(f, "invalid argument: {what}"),
            Error::NonConvergence { eta, zeta, s } => write!(
                f,
                "map solver exceeded max_steps at eta={eta} (reached zeta={zeta}, s={s})"
            ),
            Error::SingularLinearization { eta_i } => {
                write!(f, "susceptibility derivative vanishes at eta_i={eta_i}")
            }
            Error::EmptyWindow { lo, hi } => {
                write!(f, "window [{lo}, {hi}] holds fewer than two grid nodes")
            }
            Error::UnderResolved { index, phase_step } => write!(
                f,
                "grid too coarse at sample {index}: phase advance {phase_step} rad > pi/2"
            ),
            Error::NoStages => write!(f, "cascade requires at least one stage"),
            Error::DegenerateSpectrum => write!(f, "no spectral bin above the floor"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
