//! JSON experiment configuration: parsing, defaults and validation.

use std::path::PathBuf;

use rpdw_core::experiments::{lifespan_exponent, p_crit, Exponent};
use rpdw_core::grid::MAX_TOTAL_POINTS;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    KernelTable,
    LinearDecay,
    LemmaCheck,
    Evolve,
    LifespanSweep,
    CriticalScan,
    BlowupFunctional,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::KernelTable => "kernel-table",
            Command::LinearDecay => "linear-decay",
            Command::LemmaCheck => "lemma-check",
            Command::Evolve => "evolve",
            Command::LifespanSweep => "lifespan-sweep",
            Command::CriticalScan => "critical-scan",
            Command::BlowupFunctional => "blowup-functional",
        }
    }

    /// Commands that integrate the nonlinear equation.
    fn uses_solver(self) -> bool {
        matches!(
            self,
            Command::Evolve | Command::LifespanSweep | Command::CriticalScan | Command::BlowupFunctional
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProblemBlock {
    pub n: usize,
    pub p: f64,
    pub gamma: f64,
    pub q: f64,
    pub epsilon: f64,
    pub s: f64,
}

impl Default for ProblemBlock {
    fn default() -> Self {
        Self {
            n: 1,
            p: 2.0,
            gamma: 0.2,
            q: 0.4,
            epsilon: 0.1,
            s: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridBlock {
    /// Points per axis.
    pub points: usize,
    pub half_width: f64,
}

impl Default for GridBlock {
    fn default() -> Self {
        Self {
            points: 1024,
            half_width: 64.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RieszChoice {
    ExactZero,
    Regularized,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverBlock {
    pub h: f64,
    pub horizon: f64,
    pub blowup_factor: f64,
    pub record_every: usize,
    pub riesz: RieszChoice,
    /// Regularization frequency; `null` picks `π/(2L)`.
    pub mu: Option<f64>,
    pub oversample: bool,
    pub linear_only: bool,
}

impl Default for SolverBlock {
    fn default() -> Self {
        Self {
            h: 0.02,
            horizon: 10.0,
            blowup_factor: 1e8,
            record_every: 1,
            riesz: RieszChoice::Regularized,
            mu: None,
            oversample: false,
            linear_only: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataKind {
    /// `u₀ = u₁ = C⟨x⟩^{-n+q}` with a smooth cutoff and `‖u₀‖₂ = 1`.
    Blowup,
    /// `u₀ = exp(-|x|²/w²)`, `u₁ = 0`.
    Gaussian,
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DataBlock {
    pub kind: DataKind,
    pub width: f64,
}

impl Default for DataBlock {
    fn default() -> Self {
        Self {
            kind: DataKind::Blowup,
            width: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KernelTableBlock {
    pub t: Vec<f64>,
    pub r: Vec<f64>,
}

impl Default for KernelTableBlock {
    fn default() -> Self {
        Self {
            t: vec![0.0, 1.0, 2.0],
            r: vec![0.0, 0.5, 1.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    /// `r^{-q} 1_{[0,1]}(r)`.
    PowerIndicator,
    /// `1_{[0,1]}(r)`.
    Indicator,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinearDecayBlock {
    pub j: usize,
    pub profile: ProfileKind,
    pub t_min: f64,
    pub t_max: f64,
    pub count: usize,
}

impl Default for LinearDecayBlock {
    fn default() -> Self {
        Self {
            j: 0,
            profile: ProfileKind::PowerIndicator,
            t_min: 1e1,
            t_max: 1e4,
            count: 24,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaKind {
    /// Low-frequency heat bound ratio.
    B1,
    /// Two-time convolution integral against its closed bound.
    B2,
    /// Pseudo-measure samples of the Bessel-potential data.
    Hankel,
    GagliardoNirenberg,
    HardyLittlewoodSobolev,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LemmaBlock {
    pub kind: LemmaKind,
    pub times: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    /// Exponent and frequency cut of the low-frequency ratio.
    pub b1_gamma: f64,
    pub b1_c: f64,
    pub b1_cut: f64,
    pub xi_min: f64,
    pub xi_max: f64,
    pub xi_count: usize,
    pub family_size: usize,
    pub gn_p: f64,
    pub gn_theta: f64,
    pub gn_a: f64,
    pub gn_p0: f64,
    pub gn_p1: f64,
    pub hls_eta2: f64,
}

impl Default for LemmaBlock {
    fn default() -> Self {
        Self {
            kind: LemmaKind::B2,
            times: vec![10.0, 100.0, 1000.0],
            alpha: 2.0,
            beta: 1.5,
            b1_gamma: 0.0,
            b1_c: 1.0,
            b1_cut: 1.0,
            xi_min: 1e-3,
            xi_max: 1e3,
            xi_count: 25,
            family_size: 16,
            gn_p: 4.0,
            gn_theta: 0.25,
            gn_a: 1.0,
            gn_p0: 2.0,
            gn_p1: 2.0,
            hls_eta2: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepBlock {
    pub epsilons: Vec<f64>,
}

impl Default for SweepBlock {
    fn default() -> Self {
        Self {
            epsilons: vec![0.4, 0.3, 0.22, 0.16, 0.12, 0.09],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanBlock {
    pub p_list: Vec<f64>,
    pub epsilon: f64,
    pub horizon: f64,
}

impl Default for ScanBlock {
    fn default() -> Self {
        Self {
            p_list: vec![1.5, 2.0, 6.0],
            epsilon: 0.05,
            horizon: 200.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FunctionalBlock {
    pub radii: Vec<f64>,
}

impl Default for FunctionalBlock {
    fn default() -> Self {
        Self {
            radii: vec![4.0, 8.0, 16.0],
        }
    }
}

/// Full resolved configuration of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub command: Option<Command>,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub problem: ProblemBlock,
    pub grid: GridBlock,
    pub solver: SolverBlock,
    pub data: DataBlock,
    pub kernel_table: KernelTableBlock,
    pub linear_decay: LinearDecayBlock,
    pub lemma: LemmaBlock,
    pub sweep: SweepBlock,
    pub scan: ScanBlock,
    pub functional: FunctionalBlock,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            command: None,
            seed: 0,
            output_dir: PathBuf::from("rpdw-out"),
            problem: ProblemBlock::default(),
            grid: GridBlock::default(),
            solver: SolverBlock::default(),
            data: DataBlock::default(),
            kernel_table: KernelTableBlock::default(),
            linear_decay: LinearDecayBlock::default(),
            lemma: LemmaBlock::default(),
            sweep: SweepBlock::default(),
            scan: ScanBlock::default(),
            functional: FunctionalBlock::default(),
        }
    }
}

/// Syntax only; unknown fields are rejected.
pub fn parse_syntax(text: &str) -> Result<ExperimentConfig, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Parses and validates; the file must name its `command`.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, CliError> {
    let cfg = parse_syntax(text)?;
    let Some(command) = cfg.command else {
        return Err(CliError::Validation(vec!["config must name a \"command\"".into()]));
    };
    cfg.validate(command)?;
    Ok(cfg)
}

fn finite_positive(x: f64) -> bool {
    x > 0.0 && x.is_finite()
}

impl ExperimentConfig {
    /// Every violated constraint for `command`, named after the hypothesis it breaks.
    pub fn violations(&self, command: Command) -> Vec<String> {
        let mut v = Vec::new();
        if let Some(c) = self.command {
            if c != command {
                v.push(format!("config is for \"{}\" but \"{}\" was invoked", c.name(), command.name()));
            }
        }
        if command == Command::KernelTable {
            let k = &self.kernel_table;
            if k.t.is_empty() || k.r.is_empty() {
                v.push("kernel table needs at least one t and one r".into());
            }
            if k.t.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
                v.push("kernel table times must be finite and >= 0".into());
            }
            if k.r.iter().any(|r| !(*r >= 0.0) || !r.is_finite()) {
                v.push("kernel table frequencies must be finite and >= 0".into());
            }
            return v;
        }
        if command != Command::LemmaCheck {
            self.problem_violations(command, &mut v);
        }
        match command {
            Command::LinearDecay => {
                let d = &self.linear_decay;
                let nf = self.problem.n as f64;
                if d.j > 1 {
                    v.push(format!("j must be 0 or 1, got {}", d.j));
                }
                if !(finite_positive(d.t_min) && d.t_max > d.t_min && d.t_max.is_finite()) {
                    v.push(format!("need 0 < t_min < t_max, got [{}, {}]", d.t_min, d.t_max));
                }
                if d.count < 5 {
                    v.push(format!("decay fit needs at least 5 times, got {}", d.count));
                }
                let q = match d.profile {
                    ProfileKind::PowerIndicator => self.problem.q,
                    ProfileKind::Indicator => 0.0,
                };
                if !(self.problem.s > q - nf / 2.0) {
                    v.push(format!(
                        "s must satisfy s > q - n/2 = {} for the profile to lie in the decay class",
                        q - nf / 2.0
                    ));
                }
            }
            Command::LemmaCheck => self.lemma_violations(&mut v),
            _ => {}
        }
        if command.uses_solver() {
            self.grid_violations(&mut v);
            self.solver_violations(&mut v);
            if self.data.kind == DataKind::Gaussian && !finite_positive(self.data.width) {
                v.push(format!("gaussian width must be positive, got {}", self.data.width));
            }
        }
        match command {
            Command::LifespanSweep => {
                let e = &self.sweep.epsilons;
                if e.len() < 6 {
                    v.push(format!("lifespan sweep needs at least 6 epsilon values, got {}", e.len()));
                }
                if e.iter().any(|x| !finite_positive(*x)) {
                    v.push("every sweep epsilon must be positive".into());
                }
                if self.solver.riesz != RieszChoice::Regularized {
                    v.push("lifespan sweeps need the regularized Riesz mode".into());
                }
                if self.data.kind != DataKind::Blowup {
                    v.push("lifespan sweeps need positive data of the blowup kind".into());
                }
            }
            Command::CriticalScan => {
                let s = &self.scan;
                if s.p_list.is_empty() || s.p_list.iter().any(|p| !(*p > 1.0) || !p.is_finite()) {
                    v.push("scan p values must be finite and > 1".into());
                }
                if !finite_positive(s.epsilon) {
                    v.push(format!("scan epsilon must be positive, got {}", s.epsilon));
                }
                if !(s.horizon >= self.solver.h) || !s.horizon.is_finite() {
                    v.push(format!("scan horizon must be finite and >= h, got {}", s.horizon));
                }
            }
            Command::BlowupFunctional => {
                let r = &self.functional.radii;
                if r.is_empty() || r.iter().any(|x| !finite_positive(*x)) {
                    v.push("functional radii must be positive".into());
                }
                let r_max = r.iter().cloned().fold(0.0, f64::max);
                if self.grid.half_width < 4.0 * r_max {
                    v.push(format!(
                        "box too small for the test function: need L >= 4R = {}, got L = {}",
                        4.0 * r_max,
                        self.grid.half_width
                    ));
                }
                let r_min = r.iter().cloned().fold(f64::INFINITY, f64::min);
                if r_min.is_finite() && self.solver.h > r_min * r_min / 32.0 {
                    v.push(format!("step h = {} exceeds the snapshot cadence R²/32 = {}", self.solver.h, r_min * r_min / 32.0));
                }
            }
            _ => {}
        }
        v
    }

    pub fn validate(&self, command: Command) -> Result<(), CliError> {
        let v = self.violations(command);
        if v.is_empty() {
            Ok(())
        } else {
            Err(CliError::Validation(v))
        }
    }

    fn problem_violations(&self, command: Command, v: &mut Vec<String>) {
        let p = &self.problem;
        let nf = p.n as f64;
        if !(1..=4).contains(&p.n) {
            v.push(format!("n must satisfy 1 <= n <= 4, got {}", p.n));
            return;
        }
        if !(p.q > 0.0 && p.q < nf / 2.0) {
            v.push(format!(
                "q must satisfy 0 < q < n/2 = {}, got {} (pseudo-measure data hypothesis)",
                nf / 2.0,
                p.q
            ));
        }
        if !p.s.is_finite() {
            v.push(format!("s must be finite, got {}", p.s));
        }
        if command == Command::LinearDecay {
            return;
        }
        if !(p.p > 1.0) || !p.p.is_finite() {
            v.push(format!("p must satisfy p > 1, got {} (power nonlinearity hypothesis)", p.p));
        }
        if !(p.gamma >= 0.0 && p.gamma < nf) {
            v.push(format!(
                "gamma must satisfy 0 <= gamma < n = {}, got {} (Riesz potential order hypothesis)",
                p.n, p.gamma
            ));
        }
        if !finite_positive(p.epsilon) && !matches!(command, Command::LifespanSweep | Command::CriticalScan) {
            v.push(format!("epsilon must be positive, got {}", p.epsilon));
        }
        if command == Command::LifespanSweep && p.p > 1.0 && p.q < nf {
            if let Ok(Exponent::Infinite) = lifespan_exponent(p.n, p.q, p.gamma, p.p) {
                v.push(format!(
                    "theory exponent infinite at critical p: need p < p_crit = {}, got p = {} (subcritical lifespan hypothesis)",
                    p_crit(p.n, p.q, p.gamma),
                    p.p
                ));
            }
        }
    }

    fn grid_violations(&self, v: &mut Vec<String>) {
        let g = &self.grid;
        if g.points < 2 || !g.points.is_power_of_two() {
            v.push(format!("grid points must be a power of two >= 2, got {}", g.points));
        }
        if !finite_positive(g.half_width) {
            v.push(format!("grid half_width must be positive, got {}", g.half_width));
        }
        if (1..=4).contains(&self.problem.n) {
            let total = (g.points as f64).powi(self.problem.n as i32);
            if total > MAX_TOTAL_POINTS as f64 {
                v.push(format!("grid has {total} points, above the limit {MAX_TOTAL_POINTS}"));
            }
        }
    }

    fn solver_violations(&self, v: &mut Vec<String>) {
        let s = &self.solver;
        if !finite_positive(s.h) {
            v.push(format!("step h must be positive, got {}", s.h));
        }
        if !(s.horizon >= s.h) || !s.horizon.is_finite() {
            v.push(format!("horizon must satisfy horizon >= h, got {}", s.horizon));
        }
        if !(s.blowup_factor > 1.0) {
            v.push(format!("blowup_factor must exceed 1, got {}", s.blowup_factor));
        }
        if s.record_every == 0 {
            v.push("record_every must be at least 1".into());
        }
        if let Some(mu) = s.mu {
            if !finite_positive(mu) {
                v.push(format!("regularization mu must be positive, got {mu}"));
            }
        }
    }

    fn lemma_violations(&self, v: &mut Vec<String>) {
        let l = &self.lemma;
        let n = self.problem.n;
        let nf = n as f64;
        if !(1..=4).contains(&n) {
            v.push(format!("n must satisfy 1 <= n <= 4, got {n}"));
            return;
        }
        match l.kind {
            LemmaKind::B1 | LemmaKind::B2 => {
                if l.times.is_empty() || l.times.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
                    v.push("lemma times must be finite and >= 0".into());
                }
                if l.kind == LemmaKind::B1 {
                    if !(l.b1_gamma > -nf / 2.0) {
                        v.push(format!("gamma must satisfy gamma > -n/2 = {}, got {}", -nf / 2.0, l.b1_gamma));
                    }
                    if !finite_positive(l.b1_c) || !finite_positive(l.b1_cut) {
                        v.push("c and the frequency cut must be positive".into());
                    }
                } else if !(l.alpha.is_finite() && l.beta.is_finite()) {
                    v.push("alpha and beta must be finite".into());
                }
            }
            LemmaKind::Hankel => {
                let q = self.problem.q;
                if !(q >= 0.0 && q < nf / 2.0) {
                    v.push(format!(
                        "q must satisfy 0 <= q < n/2 = {}, got {q} (pseudo-measure data hypothesis)",
                        nf / 2.0
                    ));
                }
                if !(finite_positive(l.xi_min) && l.xi_max >= l.xi_min && l.xi_max.is_finite()) {
                    v.push(format!("need 0 < xi_min <= xi_max, got [{}, {}]", l.xi_min, l.xi_max));
                }
                if l.xi_count == 0 {
                    v.push("xi_count must be at least 1".into());
                }
            }
            LemmaKind::GagliardoNirenberg | LemmaKind::HardyLittlewoodSobolev => {
                self.grid_violations(v);
                if l.family_size == 0 {
                    v.push("family_size must be at least 1".into());
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_linear_decay_fills_defaults() {
        let cfg = parse_config(r#"{"command": "linear-decay"}"#).unwrap();
        assert_eq!(cfg.linear_decay, LinearDecayBlock::default());
        assert_eq!(cfg.problem.n, 1);
    }

    #[test]
    fn syntax_error_has_position() {
        let e = parse_config("{\n  \"command\": \"evolve\",\n  \"seed\": ,\n}").unwrap_err();
        match e {
            CliError::Syntax { line, column, .. } => assert_eq!((line, column), (3, 11)),
            other => panic!("{other:?}"),
        }
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn q_outside_range_cites_hypothesis() {
        let e = parse_config(r#"{"command": "linear-decay", "problem": {"n": 1, "q": 0.9}}"#).unwrap_err();
        let CliError::Validation(v) = e else { panic!() };
        assert!(v.iter().any(|m| m.contains("q < n/2") && m.contains("hypothesis")), "{v:?}");
    }

    #[test]
    fn critical_p_in_sweep_is_refused() {
        let pc = p_crit(1, 0.4, 0.2);
        let text = format!(r#"{{"command": "lifespan-sweep", "problem": {{"p": {pc:.17}}}}}"#);
        let CliError::Validation(v) = parse_config(&text).unwrap_err() else { panic!() };
        assert!(v.iter().any(|m| m.contains("theory exponent infinite at critical p")), "{v:?}");
    }

    #[test]
    fn every_violation_is_reported() {
        let text = r#"{"command": "evolve", "problem": {"q": 0.9, "p": 0.5}, "grid": {"points": 1000}, "solver": {"h": -1}}"#;
        let CliError::Validation(v) = parse_config(text).unwrap_err() else { panic!() };
        assert!(v.len() >= 4, "{v:?}");
    }

    #[test]
    fn unknown_fields_and_missing_command() {
        assert!(matches!(parse_config(r#"{"command": "evolve", "bogus": 1}"#), Err(CliError::Syntax { .. })));
        assert!(matches!(parse_config("{}"), Err(CliError::Validation(_))));
    }
}
