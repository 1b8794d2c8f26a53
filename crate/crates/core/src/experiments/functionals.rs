//! Test-function functionals `J_R`, data term and right-hand side of the
//! blow-up argument, evaluated on stored snapshots.

use crate::error::{invalid, Error, Result};
use crate::grid::Grid;
use crate::params::ProblemParams;
use crate::solver::Snapshot;

/// `3s² - 2s³` with its first two derivatives.
fn smoothstep(s: f64) -> (f64, f64, f64) {
    (s * s * (3.0 - 2.0 * s), 6.0 * s * (1.0 - s), 6.0 - 12.0 * s)
}

/// Time cutoff: 1 on `[0, 1/2]`, `(1 - w(2t-1))^κ` on `(1/2, 1]`, 0 beyond.
pub fn chi(t: f64, kappa: u32) -> f64 {
    chi_derivatives(t, kappa).0
}

/// `(χ, χ', χ'')` at `t`.
pub fn chi_derivatives(t: f64, kappa: u32) -> (f64, f64, f64) {
    if t <= 0.5 {
        return (1.0, 0.0, 0.0);
    }
    if t >= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    let (w, dw, ddw) = smoothstep(2.0 * t - 1.0);
    let k = kappa as f64;
    let b = 1.0 - w;
    let c0 = b.powi(kappa as i32);
    let c1 = -2.0 * k * b.powi(kappa as i32 - 1) * dw;
    let c2 = 4.0 * (k * (k - 1.0) * b.powi(kappa as i32 - 2) * dw * dw - k * b.powi(kappa as i32 - 1) * ddw);
    (c0, c1, c2)
}

/// `max χ^{-p'/p}(|χ'|^{p'} + |χ''|^{p'})` over `points` equispaced nodes of `[1/2, 1)`.
pub fn chi_property_bound(kappa: u32, p: f64, points: usize) -> f64 {
    let pp = p / (p - 1.0);
    (0..points)
        .map(|i| {
            let t = 0.5 + 0.5 * i as f64 / points as f64;
            let (c, d1, d2) = chi_derivatives(t, kappa);
            c.powf(-pp / p) * (d1.abs().powf(pp) + d2.abs().powf(pp))
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunctionConfig {
    pub r: f64,
    pub kappa: u32,
    /// `p/(p-1)`.
    pub p_prime: f64,
}

impl TestFunctionConfig {
    /// Scale `R` with the smallest admissible `κ = ⌈2p'⌉ + 2`.
    pub fn new(r: f64, p: f64) -> Result<Self> {
        if !(p > 1.0) {
            return Err(invalid(format!("p must satisfy p > 1, got {p}")));
        }
        let p_prime = p / (p - 1.0);
        let cfg = Self {
            r,
            kappa: (2.0 * p_prime).ceil() as u32 + 2,
            p_prime,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let mut v = Vec::new();
        if !(self.r > 0.0) || !self.r.is_finite() {
            v.push(format!("R must be positive, got {}", self.r));
        }
        if !(self.p_prime > 1.0) {
            v.push(format!("p' must exceed 1, got {}", self.p_prime));
        }
        if (self.kappa as f64) < 2.0 * self.p_prime {
            v.push(format!("kappa = {} must be at least 2p' = {}", self.kappa, 2.0 * self.p_prime));
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(v.join("; ")))
        }
    }

    /// `⟨x/R⟩^{-n-1}`.
    pub fn phi(&self, radius: f64, n: usize) -> f64 {
        (1.0 + (radius / self.r).powi(2)).powf(-(n as f64 + 1.0) / 2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowupFunctionals {
    pub r: f64,
    /// `∫₀^{R²}∫ |u|^p φ_R χ_R dx dt`.
    pub j_r: f64,
    /// `∫ (u₀ + u₁) φ_R dx` for the unscaled data.
    pub data_term: f64,
    /// `J_R^{1/p} R^{-2+(n+2)/p'}`.
    pub rhs_term: f64,
    /// Set to the last covered time when the snapshots stop before `R²`.
    pub truncated_at: Option<f64>,
}

impl BlowupFunctionals {
    /// `ε R^{q-γ} - C J_R^{1/p} R^{-2-γ+(n+2)/p'}`.
    pub fn deficit(&self, params: &ProblemParams, c: f64) -> f64 {
        let pp = params.p / (params.p - 1.0);
        params.epsilon * self.r.powf(params.q - params.gamma)
            - c * self.j_r.powf(1.0 / params.p) * self.r.powf(-2.0 - params.gamma + (params.n as f64 + 2.0) / pp)
    }

    /// The `C` that makes [`Self::deficit`] vanish.
    pub fn balancing_constant(&self, params: &ProblemParams) -> Option<f64> {
        let d = self.deficit(params, 1.0);
        let lead = params.epsilon * self.r.powf(params.q - params.gamma);
        let rhs = lead - d;
        (rhs > 0.0).then(|| lead / rhs)
    }
}

/// Space-time quadrature of the blow-up functionals.
///
/// `u0`, `u1` are unscaled physical samples; snapshots hold the scaled
/// solution `u` and must start at `t = 0` with spacing at most `R²/32`.
pub fn blowup_functionals(
    grid: &Grid,
    snapshots: &[Snapshot],
    u0: &[f64],
    u1: &[f64],
    params: &ProblemParams,
    tf: &TestFunctionConfig,
) -> Result<BlowupFunctionals> {
    tf.validate()?;
    params.validate()?;
    let total = grid.total_points();
    if u0.len() != total || u1.len() != total {
        return Err(Error::ShapeMismatch {
            expected: total,
            actual: if u0.len() != total { u0.len() } else { u1.len() },
        });
    }
    if grid.dim() != params.n {
        return Err(invalid(format!("grid dimension {} differs from n = {}", grid.dim(), params.n)));
    }
    let r2 = tf.r * tf.r;
    if grid.half_width() < 4.0 * tf.r {
        return Err(invalid(format!("box too small: need L >= 4R = {}, got L = {}", 4.0 * tf.r, grid.half_width())));
    }
    if snapshots.first().map(|s| s.t) != Some(0.0) {
        return Err(invalid("snapshots must start at t = 0"));
    }
    let cadence = r2 / 32.0;
    let in_window: Vec<&Snapshot> = snapshots.iter().take_while(|s| s.t <= r2 * (1.0 + 1e-12)).collect();
    let next_beyond = snapshots.get(in_window.len());
    for w in in_window.windows(2).map(|w| (w[0].t, w[1].t)).chain(next_beyond.map(|s| (in_window[in_window.len() - 1].t, s.t))) {
        if w.1 - w.0 > cadence * (1.0 + 1e-9) {
            return Err(invalid(format!(
                "snapshot cadence {} exceeds R²/32 = {cadence} near t = {}",
                w.1 - w.0,
                w.0
            )));
        }
    }
    if let Some(s) = snapshots.iter().find(|s| s.u.len() != total) {
        return Err(Error::ShapeMismatch {
            expected: total,
            actual: s.u.len(),
        });
    }

    let n = params.n;
    let dv = grid.cell_volume();
    let phi: Vec<f64> = (0..total).map(|i| tf.phi(grid.radius(i), n)).collect();
    let data_term = dv * (0..total).map(|i| (u0[i] + u1[i]) * phi[i]).sum::<f64>();

    let slice = |s: &Snapshot| {
        let w = chi(s.t / r2, tf.kappa);
        if w == 0.0 {
            return 0.0;
        }
        w * dv * s.u.iter().zip(&phi).map(|(u, f)| u.abs().powf(params.p) * f).sum::<f64>()
    };
    // Trapezoid in t, clipped at R² where χ_R vanishes anyway.
    let mut j_r = 0.0;
    let mut window = in_window.clone();
    if let Some(s) = next_beyond {
        window.push(s);
    }
    let vals: Vec<f64> = window.iter().map(|s| slice(s)).collect();
    for k in 1..window.len() {
        let (a, b) = (window[k - 1].t, window[k].t.min(r2));
        if b > a {
            j_r += 0.5 * (b - a) * (vals[k - 1] + vals[k]);
        }
    }
    let last = window[window.len() - 1].t;
    let truncated_at = (last < r2 * (1.0 - 1e-12)).then_some(last);
    let rhs_term = j_r.powf(1.0 / params.p) * tf.r.powf(-2.0 + (n as f64 + 2.0) / tf.p_prime);
    Ok(BlowupFunctionals {
        r: tf.r,
        j_r,
        data_term,
        rhs_term,
        truncated_at,
    })
}
