//! Command-line driver: JSON configs and flags in, CSV tables and a JSON
//! metadata sidecar out.
//!
//! Exit status is 0 on success, 1 when the configuration is rejected and 2
//! when a computation fails numerically.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

pub use commands::{execute, CommandOutput};
pub use config::{parse_config, Command, ExperimentConfig};
pub use error::CliError;
pub use output::{write_outputs, Outputs};

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "RPDW_THREADS";

#[derive(Debug, Parser)]
#[command(name = "rpdw", version, about = "Pseudospectral laboratory for damped waves with a Riesz-potential nonlinearity")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

/// Flags shared by every subcommand; they override the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// JSON config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Spatial dimension.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    /// Grid points per axis.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub half_width: Option<f64>,
    /// Time step.
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub horizon: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Propagator values on a (t, r) grid.
    KernelTable {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        t: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        r: Option<Vec<f64>>,
    },
    /// Decay of the linear evolution measured on the continuum oracle.
    LinearDecay {
        #[command(flatten)]
        common: Common,
        /// Time-derivative order, 0 or 1.
        #[arg(long)]
        j: Option<usize>,
    },
    /// Auxiliary inequalities and integrals.
    LemmaCheck {
        #[command(flatten)]
        common: Common,
        /// b1, b2, hankel, gagliardo-nirenberg or hardy-littlewood-sobolev.
        #[arg(long)]
        lemma: Option<String>,
    },
    /// One run of the nonlinear equation.
    Evolve {
        #[command(flatten)]
        common: Common,
    },
    /// Lifespan against data size.
    LifespanSweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
    },
    /// Blow-up or decay across powers p at fixed data size.
    CriticalScan {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        p_list: Option<Vec<f64>>,
        #[arg(long)]
        scan_epsilon: Option<f64>,
        #[arg(long)]
        scan_horizon: Option<f64>,
    },
    /// Test-function functionals on a stored run.
    BlowupFunctional {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<f64>>,
    },
}

fn apply_common(cfg: &mut ExperimentConfig, c: &Common) {
    macro_rules! set {
        ($src:expr => $dst:expr) => {
            if let Some(v) = $src.clone() {
                $dst = v;
            }
        };
    }
    set!(c.output_dir => cfg.output_dir);
    set!(c.seed => cfg.seed);
    set!(c.n => cfg.problem.n);
    set!(c.p => cfg.problem.p);
    set!(c.gamma => cfg.problem.gamma);
    set!(c.q => cfg.problem.q);
    set!(c.epsilon => cfg.problem.epsilon);
    set!(c.s => cfg.problem.s);
    set!(c.points => cfg.grid.points);
    set!(c.half_width => cfg.grid.half_width);
    set!(c.h => cfg.solver.h);
    set!(c.horizon => cfg.solver.horizon);
}

/// Config file, then flags, then the invoked command.
pub fn resolve(sub: &Sub) -> Result<(ExperimentConfig, Command), CliError> {
    let (common, command) = match sub {
        Sub::KernelTable { common, .. } => (common, Command::KernelTable),
        Sub::LinearDecay { common, .. } => (common, Command::LinearDecay),
        Sub::LemmaCheck { common, .. } => (common, Command::LemmaCheck),
        Sub::Evolve { common } => (common, Command::Evolve),
        Sub::LifespanSweep { common, .. } => (common, Command::LifespanSweep),
        Sub::CriticalScan { common, .. } => (common, Command::CriticalScan),
        Sub::BlowupFunctional { common, .. } => (common, Command::BlowupFunctional),
    };
    let mut cfg = match &common.config {
        Some(path) => config::parse_syntax(&std::fs::read_to_string(path)?)?,
        None => ExperimentConfig::default(),
    };
    apply_common(&mut cfg, common);
    match sub {
        Sub::KernelTable { t, r, .. } => {
            if let Some(t) = t {
                cfg.kernel_table.t = t.clone();
            }
            if let Some(r) = r {
                cfg.kernel_table.r = r.clone();
            }
        }
        Sub::LinearDecay { j: Some(j), .. } => cfg.linear_decay.j = *j,
        Sub::LemmaCheck { lemma: Some(l), .. } => {
            cfg.lemma.kind = serde_json::from_value(serde_json::Value::String(l.clone()))
                .map_err(|_| CliError::Validation(vec![format!("unknown lemma \"{l}\"")]))?;
        }
        Sub::LifespanSweep { eps: Some(e), .. } => cfg.sweep.epsilons = e.clone(),
        Sub::CriticalScan {
            p_list,
            scan_epsilon,
            scan_horizon,
            ..
        } => {
            if let Some(p) = p_list {
                cfg.scan.p_list = p.clone();
            }
            if let Some(e) = scan_epsilon {
                cfg.scan.epsilon = *e;
            }
            if let Some(h) = scan_horizon {
                cfg.scan.horizon = *h;
            }
        }
        Sub::BlowupFunctional { radii: Some(r), .. } => cfg.functional.radii = r.clone(),
        _ => {}
    }
    cfg.validate(command)?;
    cfg.command = Some(command);
    Ok((cfg, command))
}

/// Caps the global rayon pool from [`THREADS_ENV`]; unset means all cores.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n >= 1)
        .ok_or_else(|| CliError::Validation(vec![format!("{THREADS_ENV} must be a positive integer, got \"{raw}\"")]))?;
    // A pool built earlier in the process wins; that only happens in tests.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Resolves, runs and writes one command.
pub fn run_resolved(cfg: &ExperimentConfig, command: Command) -> Result<(Outputs, CommandOutput), CliError> {
    let start = Instant::now();
    let out = execute(cfg, command)?;
    for w in &out.warnings {
        log::warn!("{w}");
    }
    let files = write_outputs(
        cfg,
        command.name(),
        &out.tables,
        out.summary.clone(),
        &out.warnings,
        start.elapsed().as_secs_f64(),
    )?;
    Ok((files, out))
}

/// Full CLI entry point; returns the process exit status.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = configure_threads()
        .and_then(|_| resolve(&cli.command))
        .and_then(|(cfg, command)| run_resolved(&cfg, command));
    match result {
        Ok((files, out)) => {
            for p in &files.csv {
                println!("wrote {}", p.display());
            }
            println!("wrote {}", files.metadata.display());
            println!("summary {}", out.summary);
            if let Some(msg) = out.failure {
                eprintln!("numerical failure: {msg}");
                return 2;
            }
            0
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
