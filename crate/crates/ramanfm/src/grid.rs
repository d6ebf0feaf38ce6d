//! Uniform time grids and node-snapped integration windows.

use crate::{Error, Result};

/// A uniformly spaced time grid `η_i = start + i·step`, `i = 0..n`.
///
/// Uniformity is guaranteed by construction, which is what the spectral
/// transforms rely on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniformGrid {
    start: f64,
    step: f64,
    n: usize,
}

impl UniformGrid {
    pub fn from_step(start: f64, step: f64, n: usize) -> Result<Self> {
        if !start.is_finite() || !step.is_finite() || step <= 0.0 {
            return Err(Error::InvalidArgument("grid start/step must be finite, step > 0"));
        }
        if n < 2 {
            return Err(Error::InvalidArgument("grid needs at least two samples"));
        }
        Ok(Self { start, step, n })
    }

    /// `n` samples covering `[start, stop)`: the spacing is `(stop-start)/n`
    /// and `stop` itself is excluded. This is the periodic convention used by
    /// the discrete Fourier transform, so a span of `stop-start` gives bin
    /// frequencies `2πk/(stop-start)` exactly.
    pub fn from_span(start: f64, stop: f64, n: usize) -> Result<Self> {
        if !(stop > start) {
            return Err(Error::ReversedInterval { lo: start, hi: stop });
        }
        Self::from_step(start, (stop - start) / n as f64, n)
    }

    /// `n` samples covering `[start, stop]` inclusive of both ends.
    pub fn closed(start: f64, stop: f64, n: usize) -> Result<Self> {
        if !(stop > start) {
            return Err(Error::ReversedInterval { lo: start, hi: stop });
        }
        if n < 2 {
            return Err(Error::InvalidArgument("grid needs at least two samples"));
        }
        Self::from_step(start, (stop - start) / (n - 1) as f64, n)
    }

    #[inline]
    pub fn at(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    #[inline]
    pub fn start(&self) -> f64 {
        self.start
    }

    #[inline]
    pub fn step(&self) -> f64 {
        self.step
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn last(&self) -> f64 {
        self.at(self.n - 1)
    }

    /// Periodic span `n·step` (one step past the last sample).
    pub fn span(&self) -> f64 {
        self.n as f64 * self.step
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.at(i))
    }

    /// Window covering the whole grid.
    pub fn full_window(&self) -> Window {
        Window {
            lo: self.start,
            hi: self.last(),
        }
    }
}

/// A closed time window `[lo, hi]`; observables snap it to grid nodes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::ReversedInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// Indices of the first and last grid node inside the window.
    ///
    /// Nodes within one part in 10⁹ of a step from the boundary count as
    /// inside, so windows specified from the grid's own values round-trip.
    pub fn node_range(&self, grid: &UniformGrid) -> Result<(usize, usize)> {
        let eps = 1e-9;
        let lo = (self.lo - grid.start()) / grid.step() - eps;
        let hi = (self.hi - grid.start()) / grid.step() + eps;
        let i0 = libm::ceil(lo).max(0.0) as usize;
        let i1 = libm::floor(hi).min((grid.len() - 1) as f64);
        if i1 < 0.0 {
            return Err(Error::EmptyWindow { lo: self.lo, hi: self.hi });
        }
        let i1 = i1 as usize;
        if i1 <= i0 || i0 >= grid.len() {
            return Err(Error::EmptyWindow { lo: self.lo, hi: self.hi });
        }
        Ok((i0, i1))
    }
}
