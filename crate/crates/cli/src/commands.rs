//! One function per subcommand; each returns tables and a JSON summary.

use rpdw_core::experiments::{
    blowup_data, blowup_functionals, critical_scan, lifespan_sweep, linear_decay_experiment_on, logspace,
    TestFunctionConfig,
};
use rpdw_core::kernel::propagator;
use rpdw_core::oracle::{
    gn_check, hankel_pm_norm_samples, hls_check, least_squares, lemma_b1_ratio, lemma_b2_check, sample_family,
    sample_spread, GnSpec, InequalityReport, RadialProfile,
};
use rpdw_core::riesz::RieszMode;
use rpdw_core::solver::{run, RunResult, RunStatus, SolverConfig};
use rpdw_core::{Grid, ProblemParams, SpectralField};
use serde_json::{json, Value};

use crate::config::{Command, DataKind, ExperimentConfig, LemmaKind, ProfileKind, RieszChoice};
use crate::error::CliError;
use crate::output::{fmt_f64, Table};

/// Everything a command produced before it is written to disk.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    /// `(file stem, table)` pairs.
    pub tables: Vec<(String, Table)>,
    pub summary: Value,
    pub warnings: Vec<String>,
    /// Set when the outputs are valid but the computation ended in a numerical failure.
    pub failure: Option<String>,
}

impl CommandOutput {
    fn single(stem: &str, table: Table, summary: Value) -> Self {
        Self {
            tables: vec![(stem.to_string(), table)],
            summary,
            warnings: Vec::new(),
            failure: None,
        }
    }
}

pub fn execute(cfg: &ExperimentConfig, command: Command) -> Result<CommandOutput, CliError> {
    cfg.validate(command)?;
    match command {
        Command::KernelTable => kernel_table(cfg),
        Command::LinearDecay => linear_decay(cfg),
        Command::LemmaCheck => lemma_check(cfg),
        Command::Evolve => evolve(cfg),
        Command::LifespanSweep => sweep(cfg),
        Command::CriticalScan => scan(cfg),
        Command::BlowupFunctional => functional(cfg),
    }
}

fn f(x: f64) -> String {
    fmt_f64(x)
}

fn json_f64(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(fmt_f64(x))
    }
}

fn kernel_table(cfg: &ExperimentConfig) -> Result<CommandOutput, CliError> {
    let mut t = Table::new(&["t", "r", "k_hat", "dk_hat", "g0_hat"]);
    for &time in &cfg.kernel_table.t {
        for &r in &cfg.kernel_table.r {
            let p = propagator(time, r)?;
            t.push(vec![f(time), f(r), f(p.k), f(p.dk), f(p.g0)]);
        }
    }
    let rows = t.rows.len();
    Ok(CommandOutput::single("kernel-table", t, json!({ "rows": rows })))
}

fn linear_decay(cfg: &ExperimentConfig) -> Result<CommandOutput, CliError> {
    let d = &cfg.linear_decay;
    let pr = &cfg.problem;
    let (profile, q) = match d.profile {
        ProfileKind::PowerIndicator => (RadialProfile::power_indicator(pr.q), pr.q),
        ProfileKind::Indicator => (RadialProfile::indicator(), 0.0),
    };
    let times = logspace(d.t_min, d.t_max, d.count);
    let rep = linear_decay_experiment_on(pr.n, q, pr.s, d.j, &profile, &times)?;
    let mut t = Table::new(&["t", "norm"]);
    for &(time, v) in &rep.samples {
        t.push(vec![f(time), f(v)]);
    }
    let summary = json!({
        "profile": profile.label(),
        "slope": rep.fit.slope,
        "intercept": rep.fit.intercept,
        "max_log_residual": rep.fit.residual,
        "target": rep.target,
        "gap": rep.gap,
    });
    Ok(CommandOutput::single("linear-decay", t, summary))
}

fn report_table(rep: &InequalityReport) -> (Table, Value) {
    let mut t = Table::new(&["index", "ratio"]);
    for (i, r) in rep.ratios.iter().enumerate() {
        t.push(vec![i.to_string(), f(*r)]);
    }
    let s = json!({
        "max_ratio": json_f64(rep.max_ratio),
        "min_ratio": json_f64(rep.min_ratio),
        "spread": json_f64(rep.spread()),
    });
    (t, s)
}

fn spread_of(values: &[f64]) -> f64 {
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    hi / lo
}

fn lemma_check(cfg: &ExperimentConfig) -> Result<CommandOutput, CliError> {
    let l = &cfg.lemma;
    let n = cfg.problem.n;
    let (table, summary) = match l.kind {
        LemmaKind::B1 => {
            let mut t = Table::new(&["t", "ratio"]);
            let mut rs = Vec::new();
            for &time in &l.times {
                let r = lemma_b1_ratio(time, l.b1_gamma, l.b1_c, l.b1_cut, n)?;
                rs.push(r);
                t.push(vec![f(time), f(r)]);
            }
            (t, json!({ "spread": json_f64(spread_of(&rs)) }))
        }
        LemmaKind::B2 => {
            let mut t = Table::new(&["t", "integral", "branch", "bound", "ratio"]);
            let mut rs = Vec::new();
            for &time in &l.times {
                let c = lemma_b2_check(l.alpha, l.beta, time)?;
                rs.push(c.ratio());
                t.push(vec![f(time), f(c.integral), format!("{:?}", c.branch), f(c.bound), f(c.ratio())]);
            }
            let positive: Vec<f64> = rs.iter().copied().filter(|r| *r > 0.0).collect();
            (t, json!({ "spread": json_f64(spread_of(&positive)) }))
        }
        LemmaKind::Hankel => {
            let xi = logspace(l.xi_min, l.xi_max, l.xi_count);
            let samples = hankel_pm_norm_samples(cfg.problem.q, n, &xi)?;
            let mut t = Table::new(&["xi", "value", "status"]);
            for (x, v) in &samples {
                match v {
                    Ok(v) => t.push(vec![f(*x), f(*v), "ok".into()]),
                    Err(e) => t.push(vec![f(*x), f(f64::NAN), e.to_string()]),
                }
            }
            let spread = match sample_spread(&samples) {
                Ok(s) => json_f64(s),
                Err(e) => json!(e.to_string()),
            };
            (t, json!({ "max_over_min": spread }))
        }
        LemmaKind::GagliardoNirenberg | LemmaKind::HardyLittlewoodSobolev => {
            let grid = Grid::new(n, cfg.grid.points, cfg.grid.half_width)?;
            let fields = sample_family(&grid, cfg.seed, l.family_size)?;
            let rep = if l.kind == LemmaKind::GagliardoNirenberg {
                let spec = GnSpec {
                    p: l.gn_p,
                    theta: l.gn_theta,
                    a: l.gn_a,
                    p0: l.gn_p0,
                    p1: l.gn_p1,
                };
                gn_check(&fields, &spec)?
            } else {
                hls_check(&fields, cfg.problem.gamma, l.hls_eta2)?
            };
            report_table(&rep)
        }
    };
    Ok(CommandOutput::single("lemma-check", table, summary))
}

fn grid_of(cfg: &ExperimentConfig) -> Result<Grid, CliError> {
    Ok(Grid::new(cfg.problem.n, cfg.grid.points, cfg.grid.half_width)?)
}

fn params_of(cfg: &ExperimentConfig) -> Result<ProblemParams, CliError> {
    let p = &cfg.problem;
    // Sweeps and scans override ε per run.
    let eps = if p.epsilon > 0.0 { p.epsilon } else { 1.0 };
    Ok(ProblemParams::new(p.n, p.p, p.gamma, p.q, eps)?.with_s(p.s))
}

fn solver_of(cfg: &ExperimentConfig, grid: &Grid) -> Result<SolverConfig, CliError> {
    let s = &cfg.solver;
    let mut c = SolverConfig::new(params_of(cfg)?, s.h, s.horizon);
    c.blowup_factor = s.blowup_factor;
    c.record_every = s.record_every;
    c.oversample = s.oversample;
    c.linear_only = s.linear_only;
    c.mode = match (s.riesz, s.mu) {
        (RieszChoice::ExactZero, _) => RieszMode::ExactZero,
        (RieszChoice::Regularized, Some(mu)) => RieszMode::Regularized { mu },
        (RieszChoice::Regularized, None) => RieszMode::regularized_for(grid),
    };
    c.validate()?;
    Ok(c)
}

fn data_of(cfg: &ExperimentConfig, grid: &Grid) -> Result<(SpectralField, SpectralField), CliError> {
    Ok(match cfg.data.kind {
        DataKind::Blowup => {
            let (u, _) = blowup_data(grid, cfg.problem.q)?;
            (u.clone(), u)
        }
        DataKind::Gaussian => {
            let w = cfg.data.width;
            let u = grid.forward(&grid.sample_radial(|r| (-(r / w).powi(2)).exp()))?;
            (u, SpectralField::zeros(grid))
        }
        DataKind::Zero => (SpectralField::zeros(grid), SpectralField::zeros(grid)),
    })
}

fn bracket(status: &RunStatus, horizon: f64) -> (f64, f64) {
    match *status {
        RunStatus::BlownUp { t_low, t_high } => (t_low, t_high),
        RunStatus::NonFinite { t } => (t, t),
        RunStatus::Completed => (horizon, horizon),
    }
}

fn series_table(res: &RunResult) -> Table {
    let mut t = Table::new(&["t", "l2", "h1", "hneg", "linf", "yq"]);
    for s in &res.series {
        t.push(vec![f(s.t), f(s.l2), f(s.h1), f(s.hneg), f(s.linf), f(s.yq)]);
    }
    t
}

fn run_summary(res: &RunResult, horizon: f64) -> Value {
    let (lo, hi) = bracket(&res.status, horizon);
    json!({
        "status": res.status.label(),
        "t_low": lo,
        "t_high": hi,
        "steps": res.step_count,
        "max_imaginary_ratio": res.max_imaginary_ratio,
    })
}

fn evolve(cfg: &ExperimentConfig) -> Result<CommandOutput, CliError> {
    let grid = grid_of(cfg)?;
    let solver = solver_of(cfg, &grid)?;
    let (u0, u1) = data_of(cfg, &grid)?;
    let res = run(&u0, &u1, &solver)?;
    let failure = matches!(res.status, RunStatus::NonFinite { .. })
        .then(|| format!("solution became non-finite near t = {}", bracket(&res.status, 0.0).0));
    Ok(CommandOutput {
        tables: vec![("evolve".into(), series_table(&res))],
        summary: run_summary(&res, solver.horizon),
        warnings: res.warnings.clone(),
        failure,
    })
}

fn sweep(cfg: &ExperimentConfig) -> Result<CommandOutput, CliError> {
    let grid = grid_of(cfg)?;
    let solver = solver_of(cfg, &grid)?;
    let (u0, u1) = data_of(cfg, &grid)?;
    let res = lifespan_sweep(&u0, &u1, &cfg.sweep.epsilons, &solver)?;
    let mut rows = Table::new(&["epsilon", "T_low", "T_high", "status"]);
    for r in &res.rows {
        rows.push(vec![f(r.epsilon), f(r.t_low), f(r.t_high), r.status.label().into()]);
    }
    let mut sum = Table::new(&["fitted_exponent", "theory_exponent", "gap", "uncertainty", "fit_status"]);
    let nan = f64::NAN;
    sum.push(vec![
        f(res.fit.map_or(nan, |x| x.exponent)),
        f(res.theory_exponent),
        f(res.relative_gap.unwrap_or(nan)),
        f(res.fit.map_or(nan, |x| x.uncertainty)),
        res.status_label().into(),
    ]);
    let summary = json!({
        "fit_status": res.status_label(),
        "fitted_exponent": res.fit.map(|x| x.exponent),
        "uncertainty": res.fit.map(|x| x.uncertainty),
        "theory_exponent": res.theory_exponent,
        "relative_gap": res.relative_gap,
        "strictly_monotone": res.strictly_monotone,
        "monotonicity_violations": res.monotonicity_violations,
    });
    Ok(CommandOutput {
        tables: vec![("lifespan-sweep".into(), rows), ("lifespan-sweep-summary".into(), sum)],
        summary,
        warnings: res.warnings,
        failure: None,
    })
}

fn scan(cfg: &ExperimentConfig) -> Result<CommandOutput, CliError> {
    let grid = grid_of(cfg)?;
    let solver = solver_of(cfg, &grid)?;
    let (u0, u1) = data_of(cfg, &grid)?;
    let s = &cfg.scan;
    let table = critical_scan(&u0, &u1, &solver, &s.p_list, s.epsilon, s.horizon)?;
    let mut t = Table::new(&["p", "status", "class", "T_low", "T_high", "regime", "notes"]);
    for r in &table.rows {
        let (lo, hi) = bracket(&r.status, s.horizon);
        t.push(vec![
            f(r.p),
            r.status.label().into(),
            r.class.label().into(),
            f(lo),
            f(hi),
            r.regime.label().into(),
            r.notes.join("; "),
        ]);
    }
    let summary = json!({
        "p_crit": table.p_crit,
        "flip_bracket": table.flip_bracket(),
        "bracket_contains_p_crit": table.flip_bracket().map(|(a, b)| a < table.p_crit && table.p_crit < b),
    });
    Ok(CommandOutput::single("critical-scan", t, summary))
}

fn functional(cfg: &ExperimentConfig) -> Result<CommandOutput, CliError> {
    let grid = grid_of(cfg)?;
    let mut solver = solver_of(cfg, &grid)?;
    let (u0, u1) = data_of(cfg, &grid)?;
    let radii = &cfg.functional.radii;
    let r_min = radii.iter().cloned().fold(f64::INFINITY, f64::min);
    let r_max = radii.iter().cloned().fold(0.0, f64::max);
    solver.snapshot_every = Some(((r_min * r_min / 32.0 / solver.h) * (1.0 + 1e-12)).floor().max(1.0) as usize);
    let mut warnings = Vec::new();
    if solver.horizon < r_max * r_max {
        warnings.push(format!("horizon {} is shorter than R² = {} for the largest R", solver.horizon, r_max * r_max));
    }
    let res = run(&u0, &u1, &solver)?;
    let p0 = grid.inverse(&u0)?;
    let p1 = grid.inverse(&u1)?;
    let mut vals = Vec::new();
    for &r in radii {
        let tf = TestFunctionConfig::new(r, solver.params.p)?;
        let v = blowup_functionals(&grid, &res.snapshots, &p0, &p1, &solver.params, &tf)?;
        if let Some(t) = v.truncated_at {
            warnings.push(format!("R = {r}: time integral truncated at t = {t} before R² = {}", r * r));
        }
        vals.push(v);
    }
    let smallest = vals
        .iter()
        .min_by(|a, b| a.r.total_cmp(&b.r))
        .expect("radii validated non-empty");
    let c = smallest.balancing_constant(&solver.params);
    let mut t = Table::new(&["R", "J_R", "data_term", "rhs_term", "deficit", "truncated_at"]);
    for v in &vals {
        t.push(vec![
            f(v.r),
            f(v.j_r),
            f(v.data_term),
            f(v.rhs_term),
            f(c.map_or(f64::NAN, |c| v.deficit(&solver.params, c))),
            v.truncated_at.map(f).unwrap_or_default(),
        ]);
    }
    let data_exponent = (vals.len() >= 2 && vals.iter().all(|v| v.data_term > 0.0)).then(|| {
        let pts: Vec<(f64, f64)> = vals.iter().map(|v| (v.r.ln(), v.data_term.ln())).collect();
        least_squares(&pts).0
    });
    let mut summary = run_summary(&res, solver.horizon);
    summary["data_term_exponent"] = json!(data_exponent);
    summary["balancing_constant"] = json!(c);
    warnings.extend(res.warnings.iter().cloned());
    Ok(CommandOutput {
        tables: vec![("blowup-functional".into(), t)],
        summary,
        warnings,
        failure: None,
    })
}
