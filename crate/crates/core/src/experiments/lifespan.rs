//! Lifespan sweeps over the data size `ε`.

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::experiments::exponents::{lifespan_exponent, p_crit, Exponent};
use crate::grid::{Grid, SpectralField};
use crate::oracle::least_squares;
use crate::riesz::RieszMode;
use crate::solver::{run, RunStatus, SolverConfig};

/// Fraction of `L` at which the blow-up data is cut off.
pub const CUTOFF_RADIUS: f64 = 0.8;
/// Width of the cutoff transition, as a fraction of `L`.
pub const CUTOFF_WIDTH: f64 = 0.1;

/// `C∞` step: 0 for `x <= 0`, 1 for `x >= 1`.
fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / x).exp();
        let b = (-1.0 / (1.0 - x)).exp();
        a / (a + b)
    }
}

/// `C⟨x⟩^{-n+q}` cut off smoothly on `[0.7L, 0.8L]`, with `C` fixing `‖u₀‖₂ = 1`.
///
/// Returns the field and `C`.
pub fn blowup_data(grid: &Grid, q: f64) -> Result<(SpectralField, f64)> {
    let n = grid.dim() as f64;
    if !(q > 0.0 && q < n / 2.0) {
        return Err(invalid(format!("q must satisfy 0 < q < n/2 = {}, got {q}", n / 2.0)));
    }
    let l = grid.half_width();
    let (r1, r0) = ((CUTOFF_RADIUS - CUTOFF_WIDTH) * l, CUTOFF_RADIUS * l);
    let raw = grid.sample_radial(|r| (1.0 + r * r).powf((q - n) / 2.0) * (1.0 - smooth_step((r - r1) / (r0 - r1))));
    let field = grid.forward(&raw)?;
    let c = 1.0 / field.l2_norm();
    Ok((field.scaled(c), c))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub epsilon: f64,
    /// Bracket of the blow-up time; both equal the horizon when the run completed.
    pub t_low: f64,
    pub t_high: f64,
    pub status: RunStatus,
}

impl SweepRow {
    pub fn blown_up(&self) -> bool {
        matches!(self.status, RunStatus::BlownUp { .. })
    }

    pub fn t_mid(&self) -> f64 {
        0.5 * (self.t_low + self.t_high)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepFit {
    /// Slope of `log T_mid` against `log ε`.
    pub exponent: f64,
    pub intercept: f64,
    /// Standard error of the slope plus the largest slope shift from moving
    /// every row to either end of its bracket.
    pub uncertainty: f64,
    pub rows_used: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Sorted by increasing `ε`.
    pub rows: Vec<SweepRow>,
    /// `None` when fewer than four rows blew up.
    pub fit: Option<SweepFit>,
    /// `-2(p-1)/(2+γ-(p-1)(n-q))`.
    pub theory_exponent: f64,
    pub relative_gap: Option<f64>,
    /// Blown-up rows whose `T_mid` strictly decreases in `ε`.
    pub strictly_monotone: bool,
    /// Pairs `(i, j)`, `ε_i < ε_j`, with `T_high(j) > T_high(i)` beyond the bracket width.
    pub monotonicity_violations: Vec<(usize, usize)>,
    pub warnings: Vec<String>,
}

impl SweepResult {
    pub fn status_label(&self) -> &'static str {
        if self.fit.is_some() {
            "FITTED"
        } else {
            "UNDERDETERMINED"
        }
    }
}

/// Minimum number of blown-up rows for a fit.
pub const MIN_FIT_ROWS: usize = 4;
/// Minimum number of `ε` values per sweep.
pub const MIN_SWEEP_POINTS: usize = 6;

fn fit_rows(rows: &[&SweepRow], pick: impl Fn(&SweepRow) -> f64) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.epsilon.ln(), pick(r).ln())).collect();
    least_squares(&pts)
}

fn fit(rows: &[SweepRow]) -> Option<SweepFit> {
    let used: Vec<&SweepRow> = rows.iter().filter(|r| r.blown_up() && r.t_low > 0.0).collect();
    if used.len() < MIN_FIT_ROWS {
        return None;
    }
    let (slope, intercept) = fit_rows(&used, SweepRow::t_mid);
    let m = used.len() as f64;
    let xs: Vec<f64> = used.iter().map(|r| r.epsilon.ln()).collect();
    let mx = xs.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sse: f64 = used
        .iter()
        .map(|r| (r.t_mid().ln() - slope * r.epsilon.ln() - intercept).powi(2))
        .sum();
    let stderr = (sse / (m - 2.0) / sxx).sqrt();
    let (lo, _) = fit_rows(&used, |r| r.t_low);
    let (hi, _) = fit_rows(&used, |r| r.t_high);
    Some(SweepFit {
        exponent: slope,
        intercept,
        uncertainty: stderr + (lo - slope).abs().max((hi - slope).abs()),
        rows_used: used.len(),
    })
}

fn monotonicity(rows: &[SweepRow]) -> (bool, Vec<(usize, usize)>) {
    let blown: Vec<&SweepRow> = rows.iter().filter(|r| r.blown_up()).collect();
    let strict = blown.len() == rows.len() && blown.windows(2).all(|w| w[1].t_mid() < w[0].t_mid());
    let mut bad = Vec::new();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let width = (rows[i].t_high - rows[i].t_low).max(rows[j].t_high - rows[j].t_low);
            if rows[j].t_high > rows[i].t_high + width {
                bad.push((i, j));
            }
        }
    }
    (strict, bad)
}

/// One run per `ε` from `(εu₀, εu₁)`, in parallel, fitted against the lifespan law.
///
/// The template's `params.epsilon` is overridden per row.
pub fn lifespan_sweep(
    u0: &SpectralField,
    u1: &SpectralField,
    eps_list: &[f64],
    template: &SolverConfig,
) -> Result<SweepResult> {
    let prm = template.params;
    let mut problems = template.violations();
    let theory = match lifespan_exponent(prm.n, prm.q, prm.gamma, prm.p) {
        Ok(Exponent::Finite(e)) => Some(-e),
        Ok(Exponent::Infinite) => {
            problems.push(format!(
                "theory exponent infinite at critical p: need p < p_crit = {}, got p = {}",
                p_crit(prm.n, prm.q, prm.gamma),
                prm.p
            ));
            None
        }
        Err(e) => {
            problems.push(e.to_string());
            None
        }
    };
    if !matches!(template.mode, RieszMode::Regularized { .. }) {
        problems.push("lifespan sweeps need the regularized Riesz mode".into());
    }
    if eps_list.len() < MIN_SWEEP_POINTS {
        problems.push(format!(
            "need at least {MIN_SWEEP_POINTS} epsilon values, got {}",
            eps_list.len()
        ));
    }
    if eps_list.iter().any(|e| !(*e > 0.0) || !e.is_finite()) {
        problems.push("every epsilon must be positive and finite".into());
    }
    let grid = u0.grid();
    let data: Vec<f64> = grid
        .inverse(u0)?
        .iter()
        .zip(grid.inverse(u1)?)
        .map(|(a, b)| a + b)
        .collect();
    let top = data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let bottom = data.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    if !(top > 0.0) || bottom < -1e-6 * top {
        problems.push(format!("data u0 + u1 must be positive, min = {bottom:e}, max = {top:e}"));
    }
    if !problems.is_empty() {
        return Err(Error::InvalidParameter(problems.join("; ")));
    }
    let theory_exponent = theory.expect("checked above");

    let mut warnings = Vec::new();
    let mut eps: Vec<f64> = eps_list.to_vec();
    eps.sort_by(f64::total_cmp);
    eps.dedup();
    if eps[eps.len() - 1] / eps[0] < 10.0 {
        let msg = format!(
            "epsilon range spans {:.3} decades, less than one",
            (eps[eps.len() - 1] / eps[0]).log10()
        );
        log::warn!("{msg}");
        warnings.push(msg);
    }

    let rows = eps
        .par_iter()
        .map(|&epsilon| {
            let mut cfg = template.clone();
            cfg.params.epsilon = epsilon;
            cfg.snapshot_every = None;
            let res = run(u0, u1, &cfg)?;
            let (t_low, t_high) = match res.status {
                RunStatus::BlownUp { t_low, t_high } => (t_low, t_high),
                RunStatus::Completed => (cfg.horizon, cfg.horizon),
                RunStatus::NonFinite { t } => (t, t),
            };
            Ok(SweepRow {
                epsilon,
                t_low,
                t_high,
                status: res.status,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let fit = fit(&rows);
    if fit.is_none() {
        let blown = rows.iter().filter(|r| r.blown_up()).count();
        let msg = format!("only {blown} of {} runs blew up; fit refused", rows.len());
        log::warn!("{msg}");
        warnings.push(msg);
    }
    let (strictly_monotone, monotonicity_violations) = monotonicity(&rows);
    Ok(SweepResult {
        relative_gap: fit.map(|f| (f.exponent - theory_exponent).abs() / theory_exponent.abs()),
        rows,
        fit,
        theory_exponent,
        strictly_monotone,
        monotonicity_violations,
        warnings,
    })
}
