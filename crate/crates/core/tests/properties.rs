use proptest::prelude::*;
use rpdw_core::experiments::{chi, lifespan_exponent, logspace, p_crit, Exponent, Regime};
use rpdw_core::kernel::{propagator, weights};
use rpdw_core::Grid;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn propagator_structure(t in 0.0f64..50.0, r in 0.0f64..20.0) {
        let p = propagator(t, r).unwrap();
        prop_assert!((p.g0 - (p.k + p.dk)).abs() <= 1e-14 * (1.0 + p.g0.abs()));
        prop_assert!((p.dg0 + r * r * p.k).abs() <= 1e-14 * (1.0 + p.dg0.abs()));
        // |K̂(t)| ≤ t and |K̂| ≤ 1 for every damped mode.
        prop_assert!(p.k.abs() <= t.min(1.0) + 1e-14);
        prop_assert!(p.k >= 0.0 || r > 0.5);
    }

    #[test]
    fn propagator_continuous_across_branch(t in 0.01f64..40.0, d in 1e-9f64..5e-3) {
        let below = propagator(t, 0.5 - d).unwrap();
        let above = propagator(t, 0.5 + d).unwrap();
        prop_assert!((below.k - above.k).abs() <= 4.0 * d * t * t);
        prop_assert!((below.dk - above.dk).abs() <= 4.0 * d * t * t * (1.0 + t));
    }

    #[test]
    fn weights_consistent(h in 1e-4f64..3.0, r in 0.0f64..15.0) {
        let w = weights(h, r).unwrap();
        prop_assert_eq!(w.psi0, w.k);
        // phi1 is an average of σ/h ∈ [0, 1] against K̂, so |phi1| ≤ ∫|K̂| ≤ h².
        prop_assert!(w.phi1.abs() <= h * h + 1e-15);
        prop_assert!(w.phi0.abs() <= h * h + 1e-15);
        prop_assert!(w.phi0.is_finite() && w.psi1.is_finite());
    }

    #[test]
    fn fft_round_trip_and_parseval(seed in any::<u64>(), log_n in 3usize..8, dim in 1usize..3) {
        let points = 1 << (log_n.min(if dim == 1 { 7 } else { 5 }));
        let grid = Grid::new(dim, points, 5.0).unwrap();
        let mut state = seed | 1;
        let phys: Vec<f64> = (0..grid.total_points())
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            })
            .collect();
        let field = grid.forward(&phys).unwrap();
        let back = grid.inverse(&field).unwrap();
        let err = phys.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-13);
        let direct = (phys.iter().map(|v| v * v).sum::<f64>() * grid.cell_volume()).sqrt();
        prop_assert!((field.l2_norm() - direct).abs() <= 1e-12 * direct);
        prop_assert!(field.max_conjugate_asymmetry() <= 1e-13 * (1.0 + field.l2_norm()));
    }

    #[test]
    fn regime_matches_lifespan_exponent(n in 1usize..4, qf in 0.05f64..0.95, gamma in 0.0f64..0.9, p in 1.05f64..12.0) {
        let q = qf * n as f64 / 2.0;
        let e = lifespan_exponent(n, q, gamma, p).unwrap();
        match Regime::of(n, q, gamma, p) {
            Regime::Subcritical => {
                prop_assert!(p < p_crit(n, q, gamma));
                prop_assert!(matches!(e, Exponent::Finite(v) if v > 0.0));
            }
            Regime::Critical => prop_assert_eq!(e, Exponent::Infinite),
            Regime::Supercritical => prop_assert!(p > p_crit(n, q, gamma)),
        }
    }

    #[test]
    fn chi_is_a_monotone_cutoff(a in 0.0f64..1.2, b in 0.0f64..1.2, kappa in 2u32..12) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (clo, chi_hi) = (chi(lo, kappa), chi(hi, kappa));
        prop_assert!((0.0..=1.0).contains(&clo) && (0.0..=1.0).contains(&chi_hi));
        prop_assert!(chi_hi <= clo);
        if lo <= 0.5 {
            prop_assert_eq!(clo, 1.0);
        }
        if hi >= 1.0 {
            prop_assert_eq!(chi_hi, 0.0);
        }
    }

    #[test]
    fn logspace_endpoints_and_order(lo in 1e-3f64..1.0, decades in 0.1f64..6.0, count in 2usize..60) {
        let hi = lo * 10f64.powf(decades);
        let xs = logspace(lo, hi, count);
        prop_assert_eq!(xs.len(), count);
        prop_assert!((xs[0] - lo).abs() <= 1e-15 * lo);
        prop_assert_eq!(xs[count - 1], hi);
        prop_assert!(xs.windows(2).all(|w| w[0] < w[1]));
    }
}
