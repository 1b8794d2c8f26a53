//! Second-order exponential time differencing for
//! `u_tt - Δu + u_t = I_γ(|u|^p)` built on the exact linear propagator.
//!
//! One step of size `h` from `(û, v̂)` with `N̂ = I_γ(|u|^p)^`:
//!
//! ```text
//! predictor  û* = g0·û + k·v̂ + phi0·N̂          v̂* = dg0·û + dk·v̂ + psi0·N̂
//! corrector  û⁺ = g0·û + k·v̂ + phi1·N̂ + (phi0 - phi1)·N̂*
//!            v̂⁺ = dg0·û + dk·v̂ + psi1·N̂ + (psi0 - psi1)·N̂*
//! ```
//!
//! which is the Duhamel integral with `N` interpolated linearly in time.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::grid::{Grid, SpectralField};
use crate::kernel::{weights_unchecked, PropagatorWeights};
use crate::params::ProblemParams;
use crate::riesz::{NonlinearTerm, PowerNonlinearity, RieszMode};

#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub u_hat: SpectralField,
    pub v_hat: SpectralField,
    pub t: f64,
}

/// `(εu₀, εu₁)` at `t = 0`.
pub fn init_state(u0: &SpectralField, u1: &SpectralField, epsilon: f64) -> Result<SimState> {
    if u0.grid() != u1.grid() {
        return Err(invalid("u0 and u1 live on different grids"));
    }
    if !epsilon.is_finite() {
        return Err(invalid(format!("epsilon must be finite, got {epsilon}")));
    }
    Ok(SimState {
        u_hat: u0.scaled(epsilon),
        v_hat: u1.scaled(epsilon),
        t: 0.0,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub h: f64,
    pub horizon: f64,
    pub blowup_factor: f64,
    /// Steps between recorded samples.
    pub record_every: usize,
    pub mode: RieszMode,
    pub params: ProblemParams,
    pub linear_only: bool,
    /// Evaluate `|u|^p` on a twice finer grid.
    pub oversample: bool,
    /// Steps between stored physical snapshots of `u`; `None` stores none.
    pub snapshot_every: Option<usize>,
    /// Radius outside which the data is negligible, for the causality check.
    pub support_radius: Option<f64>,
}

impl SolverConfig {
    pub fn new(params: ProblemParams, h: f64, horizon: f64) -> Self {
        Self {
            h,
            horizon,
            blowup_factor: 1e8,
            record_every: 1,
            mode: RieszMode::ExactZero,
            params,
            linear_only: false,
            oversample: false,
            snapshot_every: None,
            support_radius: None,
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = self.params.violations();
        if !(self.h > 0.0) || !self.h.is_finite() {
            out.push(format!("step h must be positive, got {}", self.h));
        }
        if !(self.horizon >= self.h) || !self.horizon.is_finite() {
            out.push(format!("horizon T must satisfy T >= h, got {}", self.horizon));
        }
        if !(self.blowup_factor > 1.0) {
            out.push(format!("blowup_factor must exceed 1, got {}", self.blowup_factor));
        }
        if self.record_every == 0 {
            out.push("record_every must be at least 1".into());
        }
        if self.snapshot_every == Some(0) {
            out.push("snapshot_every must be at least 1".into());
        }
        if let RieszMode::Regularized { mu } = self.mode {
            if !(mu > 0.0) {
                out.push(format!("regularization mu must be positive, got {mu}"));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(v.join("; ")))
        }
    }
}

/// Norms of `u(t)` at one recorded time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub l2: f64,
    /// `‖u‖_{Ḣ¹}`.
    pub h1: f64,
    /// `‖u‖_{Ḣ^{-s}}`; `+∞` when `s > 0` and the zero mode is nonzero.
    pub hneg: f64,
    pub linf: f64,
    /// Lattice `Y^q` seminorm.
    pub yq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RunStatus {
    Completed,
    /// `‖u‖_∞` crossed the threshold between `t_low` and `t_high`.
    BlownUp { t_low: f64, t_high: f64 },
    /// Non-finite values without prior growth, at the last finite time.
    NonFinite { t: f64 },
}

impl RunStatus {
    pub fn label(&self) -> &'static str {
        match self {
            RunStatus::Completed => "Completed",
            RunStatus::BlownUp { .. } => "BlownUp",
            RunStatus::NonFinite { .. } => "NonFinite",
        }
    }
}

/// Physical samples of `u` at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub u: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub series: Vec<Sample>,
    pub status: RunStatus,
    pub step_count: usize,
    pub warnings: Vec<String>,
    pub snapshots: Vec<Snapshot>,
    /// Largest `max|Im u| / ‖u‖_∞` seen at recorded times.
    pub max_imaginary_ratio: f64,
    pub final_state: SimState,
}

impl RunResult {
    /// Midpoint of the blow-up bracket.
    pub fn lifespan(&self) -> Option<f64> {
        match self.status {
            RunStatus::BlownUp { t_low, t_high } => Some(0.5 * (t_low + t_high)),
            _ => None,
        }
    }
}

/// Outcome of a single step.
#[derive(Debug, Clone, PartialEq)]
pub enum StepOutcome {
    Advanced(SimState),
    NonFinite,
}

/// Step-size specific tables for one grid.
#[derive(Debug, Clone)]
pub struct Stepper {
    grid: Grid,
    h: f64,
    table: Vec<PropagatorWeights>,
    nonlinearity: Option<PowerNonlinearity>,
}

impl Stepper {
    pub fn new(grid: &Grid, config: &SolverConfig) -> Result<Self> {
        config.validate()?;
        Self::with_step(grid, config, config.h)
    }

    fn with_step(grid: &Grid, config: &SolverConfig, h: f64) -> Result<Self> {
        if grid.dim() != config.params.n {
            return Err(invalid(format!(
                "grid dimension {} differs from n = {}",
                grid.dim(),
                config.params.n
            )));
        }
        let table = grid.shells().iter().map(|&r| weights_unchecked(h, r)).collect();
        let nonlinearity = if config.linear_only {
            None
        } else {
            Some(PowerNonlinearity::new(
                grid,
                config.params.p,
                config.params.gamma,
                config.mode,
                config.oversample,
            )?)
        };
        Ok(Self {
            grid: grid.clone(),
            h,
            table,
            nonlinearity,
        })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    fn evaluate(&self, u: &SpectralField) -> Result<Option<SpectralField>> {
        match &self.nonlinearity {
            None => Ok(None),
            Some(nl) => match nl.evaluate(u)? {
                NonlinearTerm::Finite { field, .. } => Ok(Some(field)),
                NonlinearTerm::NonFinite => Err(Error::Divergent(String::new())),
            },
        }
    }

    /// Advances `state` by `h`.
    pub fn step(&self, state: &SimState) -> Result<StepOutcome> {
        if state.u_hat.grid() != &self.grid {
            return Err(invalid("state does not live on the stepper grid"));
        }
        let n_old = match self.evaluate(&state.u_hat) {
            Ok(v) => v,
            Err(Error::Divergent(_)) => return Ok(StepOutcome::NonFinite),
            Err(e) => return Err(e),
        };
        let shells = self.grid.shell_indices();
        let u = state.u_hat.coeffs();
        let v = state.v_hat.coeffs();
        let total = u.len();
        let mut u_next = vec![Complex64::default(); total];
        let mut v_next = vec![Complex64::default(); total];
        for i in 0..total {
            let w = &self.table[shells[i] as usize];
            u_next[i] = u[i] * w.g0 + v[i] * w.k;
            v_next[i] = u[i] * w.dg0 + v[i] * w.dk;
        }
        if let Some(n_old) = n_old {
            let n_old = n_old.coeffs();
            let mut u_pred = u_next.clone();
            for i in 0..total {
                let w = &self.table[shells[i] as usize];
                u_pred[i] += n_old[i] * w.phi0;
            }
            let u_pred = SpectralField::from_coeffs(&self.grid, u_pred)?;
            let n_new = match self.evaluate(&u_pred) {
                Ok(v) => v.expect("nonlinear stepper"),
                Err(Error::Divergent(_)) => return Ok(StepOutcome::NonFinite),
                Err(e) => return Err(e),
            };
            let n_new = n_new.coeffs();
            for i in 0..total {
                let w = &self.table[shells[i] as usize];
                let (du, dv) = duhamel_increment(w, n_old[i], n_new[i]);
                u_next[i] += du;
                v_next[i] += dv;
            }
        }
        if u_next.iter().chain(&v_next).any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Ok(StepOutcome::NonFinite);
        }
        let mut u_hat = SpectralField::from_coeffs(&self.grid, u_next)?;
        let mut v_hat = SpectralField::from_coeffs(&self.grid, v_next)?;
        u_hat.symmetrize();
        v_hat.symmetrize();
        Ok(StepOutcome::Advanced(SimState {
            u_hat,
            v_hat,
            t: state.t + self.h,
        }))
    }
}

/// `(∫₀ʰ K̂(h-σ)N(σ)dσ, ∫₀ʰ ∂ₜK̂(h-σ)N(σ)dσ)` for `N` linear from `n_old` to `n_new`.
fn duhamel_increment(w: &PropagatorWeights, n_old: Complex64, n_new: Complex64) -> (Complex64, Complex64) {
    (
        n_old * w.phi1 + n_new * (w.phi0 - w.phi1),
        n_old * w.psi1 + n_new * (w.psi0 - w.psi1),
    )
}

/// One step with freshly built tables; prefer [`Stepper`] in loops.
pub fn step(state: &SimState, config: &SolverConfig) -> Result<StepOutcome> {
    Stepper::new(state.u_hat.grid(), config)?.step(state)
}

fn linf(values: &[f64]) -> f64 {
    values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

fn sample(state: &SimState, params: &ProblemParams) -> Result<(Sample, f64, Vec<f64>)> {
    let grid = state.u_hat.grid();
    let complex = grid.inverse_complex(&state.u_hat)?;
    let phys: Vec<f64> = complex.iter().map(|c| c.re).collect();
    let sup = linf(&phys);
    let imag = complex.iter().fold(0.0f64, |m, c| m.max(c.im.abs()));
    let imag_ratio = if sup > 0.0 { imag / sup } else { 0.0 };
    let hneg = match state.u_hat.sobolev_norm(-params.s, true) {
        Ok(v) => v,
        Err(Error::InfiniteNorm(_)) => f64::INFINITY,
        Err(e) => return Err(e),
    };
    let s = Sample {
        t: state.t,
        l2: state.u_hat.l2_norm(),
        h1: state.u_hat.sobolev_norm(1.0, true)?,
        hneg,
        linf: sup,
        yq: state.u_hat.pseudo_measure_norm(params.q)?,
    };
    Ok((s, imag_ratio, phys))
}

/// Integrates from `(εu₀, εu₁)` up to the horizon or blow-up.
///
/// Blow-up is declared once `‖u‖_∞` exceeds `blowup_factor` times the larger of
/// `‖εu₀‖_∞` and `‖εu₁‖_∞`. A non-finite step is retried once as two half steps.
pub fn run(u0: &SpectralField, u1: &SpectralField, config: &SolverConfig) -> Result<RunResult> {
    config.validate()?;
    let grid = u0.grid().clone();
    let stepper = Stepper::new(&grid, config)?;
    let mut half: Option<Stepper> = None;
    let mut state = init_state(u0, u1, config.params.epsilon)?;

    let mut warnings = Vec::new();
    if let Some(radius) = config.support_radius {
        if config.horizon + radius > grid.half_width() {
            let msg = format!(
                "causality window exceeded: T + support radius = {} > L = {}",
                config.horizon + radius,
                grid.half_width()
            );
            log::warn!("{msg}");
            warnings.push(msg);
        }
    }

    let reference = linf(&grid.inverse(&state.u_hat)?).max(linf(&grid.inverse(&state.v_hat)?));
    let threshold = config.blowup_factor * reference;
    let total_steps = (config.horizon / config.h * (1.0 + 1e-12)).floor() as usize;

    let mut series = Vec::new();
    let mut snapshots = Vec::new();
    let (first, mut max_imag, phys) = sample(&state, &config.params)?;
    series.push(first);
    if config.snapshot_every.is_some() {
        snapshots.push(Snapshot { t: 0.0, u: phys });
    }
    let mut last_linf = first.linf;
    let mut t_last_ok = 0.0;
    let mut status = RunStatus::Completed;
    let mut steps = 0usize;

    while steps < total_steps {
        let outcome = match stepper.step(&state)? {
            StepOutcome::Advanced(next) => Some(next),
            StepOutcome::NonFinite => {
                let hs = match &half {
                    Some(s) => s,
                    None => half.insert(Stepper::with_step(&grid, config, 0.5 * config.h)?),
                };
                log::debug!("non-finite step at t = {}, retrying with h/2", state.t);
                match hs.step(&state)? {
                    StepOutcome::Advanced(mid) => match hs.step(&mid)? {
                        StepOutcome::Advanced(next) => Some(next),
                        StepOutcome::NonFinite => None,
                    },
                    StepOutcome::NonFinite => None,
                }
            }
        };
        let Some(mut next) = outcome else {
            let t_bad = state.t + config.h;
            status = if last_linf > reference {
                RunStatus::BlownUp {
                    t_low: state.t,
                    t_high: t_bad,
                }
            } else {
                RunStatus::NonFinite { t: state.t }
            };
            break;
        };
        steps += 1;
        // Times on the lattice n·h, free of accumulated drift.
        next.t = steps as f64 * config.h;
        state = next;

        let record = steps % config.record_every == 0 || steps == total_steps;
        let snap = config.snapshot_every.is_some_and(|k| steps % k == 0);
        let phys = grid.inverse(&state.u_hat)?;
        let sup = linf(&phys);
        if !sup.is_finite() {
            status = if last_linf > reference {
                RunStatus::BlownUp {
                    t_low: t_last_ok,
                    t_high: state.t,
                }
            } else {
                RunStatus::NonFinite { t: t_last_ok }
            };
            break;
        }
        let blown = reference > 0.0 && sup > threshold;
        if record || snap || blown {
            let (s, imag, phys) = sample(&state, &config.params)?;
            max_imag = max_imag.max(imag);
            if record || blown {
                series.push(s);
            }
            if snap {
                snapshots.push(Snapshot { t: state.t, u: phys });
            }
        }
        if blown {
            status = RunStatus::BlownUp {
                t_low: t_last_ok,
                t_high: state.t,
            };
            break;
        }
        last_linf = sup;
        t_last_ok = state.t;
    }

    Ok(RunResult {
        series,
        status,
        step_count: steps,
        warnings,
        snapshots,
        max_imaginary_ratio: max_imag,
        final_state: state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{g0_hat, k_hat};
    use std::f64::consts::PI;

    fn params(n: usize, p: f64, gamma: f64, eps: f64) -> ProblemParams {
        ProblemParams::new(n, p, gamma, 0.25_f64.min(n as f64 / 4.0), eps).unwrap()
    }

    fn gaussian(grid: &Grid, width: f64) -> SpectralField {
        grid.forward(&grid.sample_radial(|r| (-(r / width).powi(2)).exp())).unwrap()
    }

    #[test]
    fn corrector_integrates_linear_forcing_exactly() {
        use crate::kernel::{dk_hat, weights};
        use crate::quadrature::{integrate, QuadOptions};
        let opts = QuadOptions {
            rel_tol: 1e-13,
            ..Default::default()
        };
        for (h, r) in [(0.3, 0.0), (0.5, 0.2), (1.0, 0.5), (0.2, 3.0)] {
            let w = weights(h, r).unwrap();
            let (a, b) = (1.3, -0.4);
            let forcing = |s: f64| a + (b - a) * s / h;
            let u = integrate(&|s| k_hat(h - s, r).unwrap() * forcing(s), 0.0, h, &[], &opts).unwrap();
            let v = integrate(&|s| dk_hat(h - s, r).unwrap() * forcing(s), 0.0, h, &[], &opts).unwrap();
            let (du, dv) = duhamel_increment(&w, Complex64::new(a, 0.0), Complex64::new(b, 0.0));
            assert!((du.re - u.value).abs() < 1e-12, "h={h} r={r}");
            assert!((dv.re - v.value).abs() < 1e-12, "h={h} r={r}");
        }
    }

    #[test]
    fn init_scales_data() {
        let grid = Grid::new(1, 64, 8.0).unwrap();
        let g = gaussian(&grid, 1.0);
        let s = init_state(&g, &g, 0.0).unwrap();
        assert_eq!(s.u_hat.l2_norm(), 0.0);
        let s = init_state(&g, &g, 0.1).unwrap();
        assert!((s.u_hat.l2_norm() - 0.1 * g.l2_norm()).abs() <= 1e-16);
        let mut c = vec![Complex64::default(); 64];
        c[3] = Complex64::new(1.0, 0.0);
        let unit = SpectralField::from_coeffs(&grid, c).unwrap();
        assert_eq!(init_state(&unit, &unit, 2.0).unwrap().u_hat.coeffs()[3].re, 2.0);
    }

    #[test]
    fn config_violations_collected() {
        let mut cfg = SolverConfig::new(params(1, 2.0, 0.0, 0.1), -1.0, f64::NAN);
        cfg.blowup_factor = 0.5;
        cfg.record_every = 0;
        assert_eq!(cfg.violations().len(), 4);
    }

    #[test]
    fn linear_steps_match_closed_form() {
        let grid = Grid::new(2, 16, 4.0).unwrap();
        let u0 = gaussian(&grid, 1.0);
        let u1 = grid.forward(&grid.sample(|x| x[0] * (-x[0] * x[0] - x[1] * x[1]).exp())).unwrap();
        let mut cfg = SolverConfig::new(params(2, 2.0, 0.0, 1.0), 0.07, 7.0);
        cfg.linear_only = true;
        let stepper = Stepper::new(&grid, &cfg).unwrap();
        let mut state = init_state(&u0, &u1, 1.0).unwrap();
        for _ in 0..100 {
            state = match stepper.step(&state).unwrap() {
                StepOutcome::Advanced(s) => s,
                StepOutcome::NonFinite => panic!(),
            };
        }
        let t = 100.0 * 0.07;
        let mut worst = 0.0f64;
        for i in 0..grid.total_points() {
            let r = grid.xi_magnitude(i);
            let want = u0.coeffs()[i] * g0_hat(t, r).unwrap() + u1.coeffs()[i] * k_hat(t, r).unwrap();
            worst = worst.max((state.u_hat.coeffs()[i] - want).norm());
        }
        assert!(worst <= 1e-10, "{worst}");
    }

    #[test]
    fn zero_data_is_fixed_point() {
        let grid = Grid::new(1, 64, 16.0).unwrap();
        let z = SpectralField::zeros(&grid);
        let cfg = SolverConfig::new(params(1, 1.5, 0.3, 1.0), 0.1, 5.0);
        let res = run(&z, &z, &cfg).unwrap();
        assert_eq!(res.status, RunStatus::Completed);
        assert!(res.series.iter().all(|s| s.l2 == 0.0 && s.linf == 0.0));
        assert_eq!(res.series.len(), 51);
    }

    #[test]
    fn causality_warning() {
        let grid = Grid::new(1, 64, 16.0).unwrap();
        let z = SpectralField::zeros(&grid);
        let mut cfg = SolverConfig::new(params(1, 2.0, 0.0, 1.0), 0.5, 10.0);
        cfg.support_radius = Some(8.0);
        assert_eq!(run(&z, &z, &cfg).unwrap().warnings.len(), 1);
    }

    /// Mode ODE `û' = v̂, v̂' = -|ξ|²û - v̂ + N̂(û)` by classical RK4.
    fn rk4(grid: &Grid, cfg: &SolverConfig, state: &SimState, h: f64, substeps: usize) -> SimState {
        let nl = PowerNonlinearity::new(grid, cfg.params.p, cfg.params.gamma, cfg.mode, false).unwrap();
        let rhs = |u: &[Complex64], v: &[Complex64]| -> (Vec<Complex64>, Vec<Complex64>) {
            let uf = SpectralField::from_coeffs(grid, u.to_vec()).unwrap();
            let NonlinearTerm::Finite { field, .. } = nl.evaluate(&uf).unwrap() else {
                panic!()
            };
            let dv = (0..u.len())
                .map(|i| {
                    let r = grid.xi_magnitude(i);
                    -u[i] * r * r - v[i] + field.coeffs()[i]
                })
                .collect();
            (v.to_vec(), dv)
        };
        let axpy = |a: &[Complex64], b: &[Complex64], s: f64| -> Vec<Complex64> {
            a.iter().zip(b).map(|(x, y)| x + y * s).collect()
        };
        let mut u = state.u_hat.coeffs().to_vec();
        let mut v = state.v_hat.coeffs().to_vec();
        let dt = h / substeps as f64;
        for _ in 0..substeps {
            let (k1u, k1v) = rhs(&u, &v);
            let (k2u, k2v) = rhs(&axpy(&u, &k1u, dt / 2.0), &axpy(&v, &k1v, dt / 2.0));
            let (k3u, k3v) = rhs(&axpy(&u, &k2u, dt / 2.0), &axpy(&v, &k2v, dt / 2.0));
            let (k4u, k4v) = rhs(&axpy(&u, &k3u, dt), &axpy(&v, &k3v, dt));
            for i in 0..u.len() {
                u[i] += (k1u[i] + k2u[i] * 2.0 + k3u[i] * 2.0 + k4u[i]) * (dt / 6.0);
                v[i] += (k1v[i] + k2v[i] * 2.0 + k3v[i] * 2.0 + k4v[i]) * (dt / 6.0);
            }
        }
        SimState {
            u_hat: SpectralField::from_coeffs(grid, u).unwrap(),
            v_hat: SpectralField::from_coeffs(grid, v).unwrap(),
            t: state.t + h,
        }
    }

    fn diff(a: &SpectralField, b: &SpectralField) -> f64 {
        a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn one_step_local_error_is_third_order() {
        let grid = Grid::new(1, 64, 4.0 * PI).unwrap();
        let u0 = gaussian(&grid, 2.0);
        let cfg = SolverConfig::new(params(1, 3.0, 0.0, 0.3), 0.2, 1.0);
        let state = init_state(&u0, &u0, 0.3).unwrap();
        let mut errs = Vec::new();
        for h in [0.05, 0.025, 0.0125] {
            let stepper = Stepper::with_step(&grid, &cfg, h).unwrap();
            let StepOutcome::Advanced(etd) = stepper.step(&state).unwrap() else {
                panic!()
            };
            let reference = rk4(&grid, &cfg, &state, h, 400);
            errs.push(diff(&etd.u_hat, &reference.u_hat) + diff(&etd.v_hat, &reference.v_hat));
        }
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order > 2.7, "local order {order}, errors {errs:?}");
        }
    }

    fn final_u(grid: &Grid, cfg: &SolverConfig, u0: &SpectralField, h: f64) -> SpectralField {
        let mut c = cfg.clone();
        c.h = h;
        let res = run(u0, u0, &c).unwrap();
        assert_eq!(res.status, RunStatus::Completed);
        assert!((res.final_state.t - c.horizon).abs() < 1e-9);
        let _ = grid;
        res.final_state.u_hat
    }

    #[test]
    fn observed_order_at_least_two() {
        let grid = Grid::new(1, 128, 8.0 * PI).unwrap();
        let u0 = gaussian(&grid, 2.0);
        let mut cfg = SolverConfig::new(params(1, 2.0, 0.3, 0.3), 0.1, 4.0);
        cfg.mode = RieszMode::regularized_for(&grid);
        let a = final_u(&grid, &cfg, &u0, 0.05);
        let b = final_u(&grid, &cfg, &u0, 0.025);
        let c = final_u(&grid, &cfg, &u0, 0.0125);
        let order = (diff(&a, &b) / diff(&b, &c)).log2();
        assert!(order >= 1.9, "observed order {order}");
    }

    #[test]
    fn reality_is_preserved() {
        let grid = Grid::new(2, 32, 8.0).unwrap();
        let u0 = grid.forward(&grid.sample(|x| (-(x[0] - 1.0).powi(2) - x[1] * x[1]).exp())).unwrap();
        let mut cfg = SolverConfig::new(params(2, 2.5, 0.5, 0.5), 0.05, 2.0);
        cfg.mode = RieszMode::regularized_for(&grid);
        let res = run(&u0, &u0, &cfg).unwrap();
        assert!(res.max_imaginary_ratio <= 1e-10, "{}", res.max_imaginary_ratio);
    }

    #[test]
    fn large_data_blows_up() {
        let grid = Grid::new(1, 256, 32.0).unwrap();
        let u0 = gaussian(&grid, 3.0);
        let mut cfg = SolverConfig::new(params(1, 2.0, 0.0, 5.0), 0.02, 20.0);
        cfg.mode = RieszMode::regularized_for(&grid);
        cfg.record_every = 10;
        let res = run(&u0, &u0, &cfg).unwrap();
        let RunStatus::BlownUp { t_low, t_high } = res.status else {
            panic!("status {:?}", res.status)
        };
        assert!(t_low < t_high && t_high <= 20.0);
        assert!(res.lifespan().unwrap() < 20.0);
        assert!(res.series.windows(2).all(|w| w[0].t < w[1].t));
    }
}
