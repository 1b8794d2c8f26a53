//! Classification of runs across the power `p` at fixed data size.

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::experiments::exponents::{p_crit, range_warnings, Regime};
use crate::grid::SpectralField;
use crate::solver::{run, RunStatus, Sample, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanClass {
    BlownUp,
    /// Completed, and the last quarter of the `l2` series strictly decreases.
    DecayingTail,
    Inconclusive,
}

impl ScanClass {
    pub fn label(self) -> &'static str {
        match self {
            ScanClass::BlownUp => "BlownUp",
            ScanClass::DecayingTail => "Completed-with-decaying-tail",
            ScanClass::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub p: f64,
    pub status: RunStatus,
    pub class: ScanClass,
    pub regime: Regime,
    /// Hypotheses of the existence theory that this `p` violates.
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanTable {
    /// Sorted by increasing `p`.
    pub rows: Vec<ScanRow>,
    pub p_crit: f64,
    pub epsilon: f64,
    pub horizon: f64,
}

impl ScanTable {
    /// `(p_a, p_b)` between the last blow-up and the first decaying run above it,
    /// when the table is ordered that way.
    pub fn flip_bracket(&self) -> Option<(f64, f64)> {
        let last_blown = self.rows.iter().rposition(|r| r.class == ScanClass::BlownUp)?;
        let first_decay = self.rows.iter().position(|r| r.class == ScanClass::DecayingTail)?;
        (first_decay > last_blown).then(|| (self.rows[last_blown].p, self.rows[first_decay].p))
    }
}

/// Last quarter of the `l2` series strictly decreasing.
pub fn decaying_tail(series: &[Sample]) -> bool {
    let start = series.len() - series.len() / 4;
    let tail = &series[start.saturating_sub(1)..];
    tail.len() >= 2 && tail.windows(2).all(|w| w[1].l2 < w[0].l2)
}

fn classify(status: &RunStatus, series: &[Sample]) -> ScanClass {
    match status {
        RunStatus::BlownUp { .. } => ScanClass::BlownUp,
        RunStatus::Completed if decaying_tail(series) => ScanClass::DecayingTail,
        _ => ScanClass::Inconclusive,
    }
}

/// One run per `p` with the template's other settings; a blow-up at a larger
/// `p` than some decaying run marks both rows Inconclusive.
pub fn critical_scan(
    u0: &SpectralField,
    u1: &SpectralField,
    template: &SolverConfig,
    p_list: &[f64],
    epsilon: f64,
    horizon: f64,
) -> Result<ScanTable> {
    if p_list.is_empty() {
        return Err(invalid("p list is empty"));
    }
    let mut ps = p_list.to_vec();
    ps.sort_by(f64::total_cmp);
    ps.dedup();
    let configs: Vec<SolverConfig> = ps
        .iter()
        .map(|&p| {
            let mut c = template.clone();
            c.params.p = p;
            c.params.epsilon = epsilon;
            c.horizon = horizon;
            c.snapshot_every = None;
            c
        })
        .collect();
    let problems: Vec<String> = configs.iter().flat_map(|c| c.violations()).collect();
    if !problems.is_empty() {
        return Err(crate::Error::InvalidParameter(problems.join("; ")));
    }
    let prm = template.params;
    let mut rows = configs
        .par_iter()
        .map(|cfg| {
            let res = run(u0, u1, cfg)?;
            let p = cfg.params.p;
            Ok(ScanRow {
                p,
                class: classify(&res.status, &res.series),
                status: res.status,
                regime: Regime::of(prm.n, prm.q, prm.gamma, p),
                notes: range_warnings(prm.n, prm.q, prm.gamma, p),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    flag_non_monotone(&mut rows);
    Ok(ScanTable {
        rows,
        p_crit: p_crit(prm.n, prm.q, prm.gamma),
        epsilon,
        horizon,
    })
}

fn flag_non_monotone(rows: &mut [ScanRow]) {
    let mut bad = vec![false; rows.len()];
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            if rows[i].class == ScanClass::DecayingTail && rows[j].class == ScanClass::BlownUp {
                bad[i] = true;
                bad[j] = true;
            }
        }
    }
    for (row, b) in rows.iter_mut().zip(bad) {
        if b {
            row.class = ScanClass::Inconclusive;
            row.notes.push("non-monotone in p: blow-up above a decaying run".into());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::lifespan::blowup_data;
    use crate::grid::Grid;
    use crate::params::ProblemParams;
    use crate::riesz::RieszMode;

    fn sample(t: f64, l2: f64) -> Sample {
        Sample {
            t,
            l2,
            h1: 0.0,
            hneg: 0.0,
            linf: 0.0,
            yq: 0.0,
        }
    }

    #[test]
    fn tail_rule() {
        let dec: Vec<Sample> = (0..8).map(|i| sample(i as f64, 1.0 / (1.0 + i as f64))).collect();
        assert!(decaying_tail(&dec));
        let mut flat = dec.clone();
        flat[7].l2 = flat[6].l2;
        assert!(!decaying_tail(&flat));
        // Growth early on does not matter.
        let mut early = dec.clone();
        early[1].l2 = 5.0;
        assert!(decaying_tail(&early));
        assert!(!decaying_tail(&dec[..1]));
    }

    fn row(p: f64, class: ScanClass) -> ScanRow {
        ScanRow {
            p,
            status: RunStatus::Completed,
            class,
            regime: Regime::Subcritical,
            notes: vec![],
        }
    }

    #[test]
    fn monotonicity_flags() {
        let mut rows = vec![
            row(2.0, ScanClass::BlownUp),
            row(3.0, ScanClass::DecayingTail),
            row(4.0, ScanClass::BlownUp),
            row(5.0, ScanClass::DecayingTail),
        ];
        flag_non_monotone(&mut rows);
        let classes: Vec<ScanClass> = rows.iter().map(|r| r.class).collect();
        assert_eq!(
            classes,
            vec![
                ScanClass::BlownUp,
                ScanClass::Inconclusive,
                ScanClass::Inconclusive,
                ScanClass::DecayingTail
            ]
        );
        let t = ScanTable {
            rows,
            p_crit: 4.5,
            epsilon: 0.1,
            horizon: 1.0,
        };
        assert_eq!(t.flip_bracket(), Some((2.0, 5.0)));
    }

    #[test]
    fn small_runs_classify_both_ways() {
        let grid = Grid::new(1, 256, 32.0).unwrap();
        let (u, _) = blowup_data(&grid, 0.4).unwrap();
        let params = ProblemParams::new(1, 2.0, 0.2, 0.4, 1.0).unwrap();
        let mut cfg = SolverConfig::new(params, 0.05, 1.0);
        cfg.mode = RieszMode::regularized_for(&grid);
        let table = critical_scan(&u, &u, &cfg, &[6.0, 5.0], 1e-4, 20.0).unwrap();
        assert_eq!(table.rows[0].p, 5.0);
        assert!(table.rows.iter().all(|r| r.class == ScanClass::DecayingTail), "{table:?}");
        let table = critical_scan(&u, &u, &cfg, &[1.5, 2.0], 30.0, 20.0).unwrap();
        assert!(table.rows.iter().all(|r| r.class == ScanClass::BlownUp), "{table:?}");
    }
}
