//! Linear decay rates measured on the continuum oracle.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::experiments::logspace;
use crate::oracle::{fit_decay_slope, linear_sobolev_norm, DecayFit, RadialProfile};

/// Default sampling window `logspace(1e1, 1e4, 24)`.
pub const DECAY_TIMES: (f64, f64, usize) = (1e1, 1e4, 24);

#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    pub n: usize,
    pub q: f64,
    pub s: f64,
    pub j: usize,
    /// `-(n/4 + (s-q)/2 + j)`.
    pub target: f64,
    pub fit: DecayFit,
    /// `fit.slope - target`.
    pub gap: f64,
    pub samples: Vec<(f64, f64)>,
}

impl DecayReport {
    /// Refit on the samples with `lo <= t <= hi`.
    pub fn refit(&self, lo: f64, hi: f64) -> Result<DecayFit> {
        let sub: Vec<(f64, f64)> = self.samples.iter().copied().filter(|&(t, _)| t >= lo && t <= hi).collect();
        fit_decay_slope(&sub)
    }
}

fn target(n: usize, q: f64, s: f64, j: usize) -> f64 {
    -(n as f64 / 4.0 + (s - q) / 2.0 + j as f64)
}

/// [`linear_decay_experiment_on`] over [`DECAY_TIMES`].
pub fn linear_decay_experiment(n: usize, q: f64, s: f64, j: usize, profile: &RadialProfile) -> Result<DecayReport> {
    let (lo, hi, count) = DECAY_TIMES;
    linear_decay_experiment_on(n, q, s, j, profile, &logspace(lo, hi, count))
}

/// Fits `‖∂ₜ^j K(t)∗φ‖_{Ḣ^s}` against `(1+t)` for a profile with
/// `|ĝ(r)| ≲ r^{-q}` near the origin.
pub fn linear_decay_experiment_on(
    n: usize,
    q: f64,
    s: f64,
    j: usize,
    profile: &RadialProfile,
    times: &[f64],
) -> Result<DecayReport> {
    let nf = n as f64;
    if !(s > q - nf / 2.0) {
        return Err(Error::InvalidParameter(format!(
            "profile not in the decay class: need s > q - n/2 = {}, got s = {s}",
            q - nf / 2.0
        )));
    }
    let samples = times
        .par_iter()
        .map(|&t| linear_sobolev_norm(t, profile, n, s, j).map(|v| (t, v)))
        .collect::<Result<Vec<_>>>()?;
    let fit = fit_decay_slope(&samples)?;
    let target = target(n, q, s, j);
    Ok(DecayReport {
        n,
        q,
        s,
        j,
        target,
        gap: fit.slope - target,
        fit,
        samples,
    })
}
