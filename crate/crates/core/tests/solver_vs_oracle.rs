//! The pseudospectral solver against independent closed forms and oracles.

use approx::assert_relative_eq;
use rpdw_core::experiments::{blowup_data, linear_decay_experiment_on, logspace};
use rpdw_core::kernel::propagator;
use rpdw_core::oracle::{fit_decay_slope, RadialProfile};
use rpdw_core::riesz::RieszMode;
use rpdw_core::solver::{run, RunStatus, SolverConfig};
use rpdw_core::{Grid, ProblemParams, SpectralField};

fn gaussian(grid: &Grid, width: f64) -> SpectralField {
    grid.forward(&grid.sample(|x| (-x.iter().map(|v| v * v).sum::<f64>() / (width * width)).exp()))
        .unwrap()
}

#[test]
fn linear_run_matches_mode_propagation_in_two_dimensions() {
    let grid = Grid::new(2, 32, 10.0).unwrap();
    let u0 = gaussian(&grid, 1.5);
    let u1 = gaussian(&grid, 0.8).scaled(-0.3);
    let params = ProblemParams::new(2, 3.0, 0.5, 0.5, 0.7).unwrap();
    let mut cfg = SolverConfig::new(params, 0.1, 7.0);
    cfg.linear_only = true;
    let res = run(&u0, &u1, &cfg).unwrap();
    assert_eq!(res.status, RunStatus::Completed);
    let t = res.final_state.t;
    for i in 0..grid.total_points() {
        let p = propagator(t, grid.xi_magnitude(i)).unwrap();
        let want = (u0.coeffs()[i] * p.g0 + u1.coeffs()[i] * p.k) * 0.7;
        let got = res.final_state.u_hat.coeffs()[i];
        assert!((got - want).norm() <= 1e-12 * (1.0 + want.norm()), "mode {i}");
    }
}

#[test]
fn discrete_linear_decay_tracks_the_continuum_oracle() {
    // L2 decay of the lattice solution from ⟨x⟩^{-1+q} data against the continuum rate.
    let grid = Grid::new(1, 4096, 512.0).unwrap();
    let (u, _) = blowup_data(&grid, 0.4).unwrap();
    let params = ProblemParams::new(1, 2.0, 0.2, 0.4, 1.0).unwrap();
    let mut cfg = SolverConfig::new(params, 0.1, 200.0);
    cfg.linear_only = true;
    cfg.record_every = 20;
    let res = run(&u, &SpectralField::zeros(&grid), &cfg).unwrap();
    let pts: Vec<(f64, f64)> = res.series.iter().filter(|s| s.t >= 40.0).map(|s| (s.t, s.l2)).collect();
    let lattice = fit_decay_slope(&pts).unwrap().slope;
    let oracle = linear_decay_experiment_on(1, 0.4, 0.0, 0, &RadialProfile::power_indicator(0.4), &logspace(40.0, 200.0, 12))
        .unwrap();
    assert_relative_eq!(oracle.target, -0.05, epsilon = 1e-12);
    assert!((lattice - oracle.target).abs() < 0.05, "lattice {lattice}, oracle {}", oracle.fit.slope);
}

#[test]
fn regularized_blowup_is_resolution_stable() {
    let mut lifespans = Vec::new();
    for (points, h) in [(2048usize, 0.02), (4096, 0.01)] {
        let grid = Grid::new(1, points, 128.0).unwrap();
        let (u, _) = blowup_data(&grid, 0.4).unwrap();
        let params = ProblemParams::new(1, 2.0, 0.2, 0.4, 0.4).unwrap();
        let mut cfg = SolverConfig::new(params, h, 60.0);
        cfg.mode = RieszMode::regularized_for(&grid);
        cfg.record_every = 100;
        lifespans.push(run(&u, &u, &cfg).unwrap().lifespan().expect("blows up"));
    }
    assert!((lifespans[0] - lifespans[1]).abs() < 0.05 * lifespans[1], "{lifespans:?}");
}
