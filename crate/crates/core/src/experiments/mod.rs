//! Parameter studies built on the solver and the continuum oracle.

pub mod decay;
pub mod exponents;
pub mod functionals;
pub mod lifespan;
pub mod scan;

pub use decay::{linear_decay_experiment, linear_decay_experiment_on, DecayReport, DECAY_TIMES};
pub use exponents::{lifespan_exponent, p_crit, range_warnings, Exponent, Regime};
pub use functionals::{blowup_functionals, chi, chi_derivatives, chi_property_bound, BlowupFunctionals, TestFunctionConfig};
pub use lifespan::{blowup_data, lifespan_sweep, SweepFit, SweepResult, SweepRow};
pub use scan::{critical_scan, ScanClass, ScanRow, ScanTable};

/// `count` points equally spaced in `log` between `lo` and `hi`, both included.
pub fn logspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..count)
                .map(|i| {
                    if i + 1 == count {
                        hi
                    } else {
                        (a + (b - a) * i as f64 / (count - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}
