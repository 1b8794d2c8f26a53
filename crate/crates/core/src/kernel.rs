//! Fourier-side propagator of the linear damped wave equation.
//!
//! Each mode `ξ` obeys `y'' + y' + |ξ|² y = 0`. The propagator `K̂(t, |ξ|)` is the
//! solution with `y(0) = 0, y'(0) = 1`; the data propagator `Ĝ₀ = K̂ + ∂ₜK̂` is the
//! solution with `y(0) = 1, y'(0) = 0`. The characteristic rates are
//! `λ± = -1/2 ± √(1/4 - |ξ|²)`, colliding at the branch point `|ξ| = 1/2`.
//!
//! Everything here is a real function of `(t, r = |ξ|)`.

use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Half-width of the band around `r = 1/2` where power series replace the closed forms.
pub const BRANCH_BAND: f64 = 1e-3;

/// Above this `|t² μ²|` the branch series is abandoned for the closed forms.
const BRANCH_SERIES_LIMIT: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Low,
    NearBranch,
    High,
}

/// Decay rates of one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeRates {
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
    pub regime: Regime,
}

impl ModeRates {
    pub fn new(r: f64) -> Result<Self> {
        check_nonneg("r", r)?;
        let mu_sq = (0.5 - r) * (0.5 + r);
        let (lambda_plus, lambda_minus) = if mu_sq >= 0.0 {
            let mu = mu_sq.sqrt();
            // -1/2 + μ without cancellation for small r.
            let lp = if r == 0.0 { 0.0 } else { -r * r / (0.5 + mu) };
            (Complex64::new(lp, 0.0), Complex64::new(-0.5 - mu, 0.0))
        } else {
            let omega = (-mu_sq).sqrt();
            (Complex64::new(-0.5, omega), Complex64::new(-0.5, -omega))
        };
        let regime = if (r - 0.5).abs() <= BRANCH_BAND {
            Regime::NearBranch
        } else if r < 0.5 {
            Regime::Low
        } else {
            Regime::High
        };
        Ok(Self {
            lambda_plus,
            lambda_minus,
            regime,
        })
    }
}

/// `K̂`, `∂ₜK̂`, `Ĝ₀` and `∂ₜĜ₀` at one `(t, r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagator {
    pub k: f64,
    pub dk: f64,
    pub g0: f64,
    pub dg0: f64,
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite and >= 0, got {v}")))
    }
}

/// `sinh(√x)/√x` and `cosh(√x)` as power series in `x` (valid for either sign of `x`).
fn branch_series(x: f64) -> (f64, f64) {
    let mut s = 0.0;
    let mut c = 0.0;
    let mut term_c = 1.0; // x^k / (2k)!
    for k in 0..40 {
        let kf = k as f64;
        let term_s = term_c / (2.0 * kf + 1.0);
        s += term_s;
        c += term_c;
        if term_c.abs() < 1e-18 * c.abs().max(1e-300) && k > 2 {
            break;
        }
        term_c *= x / ((2.0 * kf + 1.0) * (2.0 * kf + 2.0));
    }
    (s, c)
}

/// Unchecked evaluation of `(K̂, ∂ₜK̂)`.
fn k_and_dk(t: f64, r: f64) -> (f64, f64) {
    if t == 0.0 {
        return (0.0, 1.0);
    }
    let mu_sq = (0.5 - r) * (0.5 + r);
    if (r - 0.5).abs() <= BRANCH_BAND && (t * t * mu_sq).abs() <= BRANCH_SERIES_LIMIT {
        let (s, c) = branch_series(t * t * mu_sq);
        let damp = (-0.5 * t).exp();
        return (damp * t * s, damp * (c - 0.5 * t * s));
    }
    if mu_sq > 0.0 {
        let mu = mu_sq.sqrt();
        let lp = if r == 0.0 { 0.0 } else { -r * r / (0.5 + mu) };
        let lm = -0.5 - mu;
        let slow = (lp * t).exp();
        let ratio = (-2.0 * mu * t).exp();
        let k = slow * (-(-2.0 * mu * t).exp_m1()) / (2.0 * mu);
        let dk = slow * (lp - lm * ratio) / (2.0 * mu);
        (k, dk)
    } else {
        let omega = (-mu_sq).sqrt();
        let damp = (-0.5 * t).exp();
        let (sin, cos) = (t * omega).sin_cos();
        (damp * sin / omega, damp * (cos - 0.5 * sin / omega))
    }
}

fn propagator_unchecked(t: f64, r: f64) -> Propagator {
    let (k, dk) = k_and_dk(t, r);
    // Ĝ₀' = K'' + K' = -r²K; summing K'' and K' cancels for small r.
    Propagator {
        k,
        dk,
        g0: k + dk,
        dg0: -r * r * k,
    }
}

pub fn propagator(t: f64, r: f64) -> Result<Propagator> {
    check_nonneg("t", t)?;
    check_nonneg("r", r)?;
    Ok(propagator_unchecked(t, r))
}

/// `K̂(t, r)`.
pub fn k_hat(t: f64, r: f64) -> Result<f64> {
    propagator(t, r).map(|p| p.k)
}

/// `∂ₜK̂(t, r)`.
pub fn dk_hat(t: f64, r: f64) -> Result<f64> {
    propagator(t, r).map(|p| p.dk)
}

/// `Ĝ₀ = K̂ + ∂ₜK̂`.
pub fn g0_hat(t: f64, r: f64) -> Result<f64> {
    propagator(t, r).map(|p| p.g0)
}

/// `∂ₜĜ₀ = -r² K̂`.
pub fn dg0_hat(t: f64, r: f64) -> Result<f64> {
    propagator(t, r).map(|p| p.dg0)
}

/// `(e^{λ₊t} - e^{λ₋t}) / (λ₊ - λ₋)` in naive complex arithmetic.
///
/// Independent cross-check of [`k_hat`]; undefined (NaN) exactly at `r = 1/2`
/// and inaccurate inside the branch band.
pub fn eigen_form(t: f64, r: f64) -> f64 {
    let root = Complex64::new(0.25 - r * r, 0.0).sqrt();
    let lp = -0.5 + root;
    let lm = -0.5 - root;
    (((lp * t).exp() - (lm * t).exp()) / (lp - lm)).re
}

/// Exponential-integrator weights for one step `h` and one frequency magnitude `r`.
///
/// `phi0 = ∫₀ʰ K̂(σ)dσ`, `phi1 = h⁻¹∫₀ʰ σK̂(σ)dσ`, `psi0 = K̂(h)`,
/// `psi1 = h⁻¹∫₀ʰ σ∂ₜK̂(σ)dσ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorWeights {
    pub k: f64,
    pub dk: f64,
    pub g0: f64,
    pub dg0: f64,
    pub phi0: f64,
    pub phi1: f64,
    pub psi0: f64,
    pub psi1: f64,
}

pub fn weights(h: f64, r: f64) -> Result<PropagatorWeights> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(invalid(format!("step must be positive, got {h}")));
    }
    check_nonneg("r", r)?;
    Ok(weights_unchecked(h, r))
}

pub(crate) fn weights_unchecked(h: f64, r: f64) -> PropagatorWeights {
    let prop = propagator_unchecked(h, r);
    let (phi0, phi1) = if h * r.max(1.0) <= 1.0 {
        taylor_integrals(h, r)
    } else if (r - 0.5).abs() <= BRANCH_BAND && h * h * (0.25 - r * r).abs() <= BRANCH_SERIES_LIMIT
    {
        branch_integrals(h, r)
    } else {
        closed_form_integrals(h, r)
    };
    PropagatorWeights {
        k: prop.k,
        dk: prop.dk,
        g0: prop.g0,
        dg0: prop.dg0,
        phi0,
        phi1,
        psi0: prop.k,
        // ∫σK' = hK(h) - ∫K
        psi1: prop.k - phi0 / h,
    }
}

/// `(∫₀ʰ K̂, h⁻¹∫₀ʰ σK̂)` from the Taylor coefficients of `K̂` at `t = 0`.
fn taylor_integrals(h: f64, r: f64) -> (f64, f64) {
    let r2 = r * r;
    // d_m = K^{(m)}(0): d0 = 0, d1 = 1, d_{m+2} = -d_{m+1} - r² d_m.
    let (mut d_prev, mut d) = (0.0f64, 1.0f64);
    // hpow_over_fact = h^m / m!
    let mut hpow_over_fact = h;
    let mut phi0 = 0.0;
    let mut phi1 = 0.0;
    for m in 1..60 {
        let mf = m as f64;
        // ∫₀ʰ σ^m/m! = h^{m+1}/(m+1)!, ∫₀ʰ σ^{m+1}/m! = h^{m+2}/(m!(m+2))
        let a = d * hpow_over_fact * h / (mf + 1.0);
        let b = d * hpow_over_fact * h / (mf + 2.0);
        phi0 += a;
        phi1 += b;
        if a.abs() <= 1e-18 * phi0.abs() && m > 3 {
            break;
        }
        let next = -d - r2 * d_prev;
        d_prev = d;
        d = next;
        hpow_over_fact *= h / (mf + 1.0);
    }
    (phi0, phi1)
}

/// `∫₀ʰ σ^m e^{-σ/2} dσ`, all-positive series.
fn damped_moment(m: usize, h: f64) -> f64 {
    let a = (m + 1) as f64;
    let x = 0.5 * h;
    let mut term = 1.0 / a;
    let mut sum = term;
    for j in 1..400 {
        term *= x / (a + j as f64);
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    h.powi(m as i32 + 1) * (-x).exp() * sum
}

/// Near the branch point: `K̂(σ) = e^{-σ/2} Σ_k μ^{2k} σ^{2k+1}/(2k+1)!`.
fn branch_integrals(h: f64, r: f64) -> (f64, f64) {
    let mu_sq = (0.5 - r) * (0.5 + r);
    let mut coef = 1.0; // μ^{2k}/(2k+1)!
    let mut phi0 = 0.0;
    let mut phi1 = 0.0;
    for k in 0..30 {
        let a = coef * damped_moment(2 * k + 1, h);
        let b = coef * damped_moment(2 * k + 2, h) / h;
        phi0 += a;
        phi1 += b;
        if a.abs() <= 1e-18 * phi0.abs() && k > 1 {
            break;
        }
        let kf = k as f64;
        coef *= mu_sq / ((2.0 * kf + 2.0) * (2.0 * kf + 3.0));
    }
    (phi0, phi1)
}

/// `(e^z - 1)/z`.
fn phi_one(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        let x = z.re;
        return Complex64::new(if x == 0.0 { 1.0 } else { x.exp_m1() / x }, 0.0);
    }
    if z.norm() < 1.0 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 1..40 {
            term *= z / (k as f64 + 1.0);
            sum += term;
            if term.norm() < 1e-18 {
                break;
            }
        }
        sum
    } else {
        (z.exp() - 1.0) / z
    }
}

/// `∫₀¹ s e^{zs} ds = (e^z(z - 1) + 1)/z²`.
fn phi_two(z: Complex64) -> Complex64 {
    if z.norm() < 1.0 {
        // Σ z^k / (k! (k+2))
        let mut zk_fact = Complex64::new(1.0, 0.0);
        let mut sum = zk_fact * 0.5;
        for k in 1..40 {
            zk_fact *= z / k as f64;
            let term = zk_fact / (k as f64 + 2.0);
            sum += term;
            if term.norm() < 1e-18 {
                break;
            }
        }
        sum
    } else {
        (z.exp() * (z - 1.0) + 1.0) / (z * z)
    }
}

fn closed_form_integrals(h: f64, r: f64) -> (f64, f64) {
    let rates = ModeRates::new(r).expect("r checked");
    let (lp, lm) = (rates.lambda_plus, rates.lambda_minus);
    let diff = lp - lm;
    let phi0 = h * (phi_one(lp * h) - phi_one(lm * h)) / diff;
    let phi1 = h * (phi_two(lp * h) - phi_two(lm * h)) / diff;
    (phi0.re, phi1.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, QuadOptions};
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn k_hat_examples() {
        assert!(close(k_hat(1.0, 0.0).unwrap(), 1.0 - (-1.0f64).exp(), 1e-15));
        assert!(close(k_hat(2.0, 0.5).unwrap(), 2.0 * (-1.0f64).exp(), 1e-15));
        let r = (PI * PI + 0.25).sqrt();
        assert!(k_hat(1.0, r).unwrap().abs() < 1e-15);
        assert!(k_hat(-1.0, 0.3).is_err());
        assert!(k_hat(1.0, -0.3).is_err());
    }

    #[test]
    fn dk_hat_examples() {
        assert!(close(dk_hat(0.0, 7.3).unwrap(), 1.0, 1e-15));
        assert!(close(dk_hat(1.0, 0.0).unwrap(), (-1.0f64).exp(), 1e-15));
        assert!(dk_hat(2.0, 0.5).unwrap().abs() < 1e-15);
        for t in [0.3, 1.0, 5.0] {
            let expected = (-t / 2.0f64).exp() * (1.0 - t / 2.0);
            assert!(close(dk_hat(t, 0.5).unwrap(), expected, 1e-15));
        }
    }

    #[test]
    fn data_propagator_examples() {
        for r in [0.0, 0.2, 0.5, 3.0] {
            assert_eq!(g0_hat(0.0, r).unwrap(), 1.0);
            assert_eq!(dg0_hat(0.0, r).unwrap(), 0.0);
        }
        assert!(close(g0_hat(1.0, 0.0).unwrap(), 1.0, 1e-15));
    }

    #[test]
    fn eigen_form_examples() {
        assert!(close(eigen_form(1.0, 0.0), 0.632_120_558_828_557_7, 1e-15));
        let w = 3f64.sqrt() / 2.0;
        let expected = (-0.5f64).exp() * w.sin() / w;
        assert!(close(eigen_form(1.0, 1.0), expected, 1e-15));
        assert!(close(k_hat(1.0, 1.0).unwrap(), expected, 1e-15));
        assert_eq!(eigen_form(0.0, 0.7), 0.0);
    }

    #[test]
    fn rates_invariants() {
        for r in [0.0, 0.1, 0.4999, 0.5, 0.5001, 2.0, 40.0] {
            let m = ModeRates::new(r).unwrap();
            let sum = m.lambda_plus + m.lambda_minus;
            let prod = m.lambda_plus * m.lambda_minus;
            assert!((sum.re + 1.0).abs() < 1e-15 && sum.im.abs() < 1e-15);
            assert!((prod.re - r * r).abs() <= 1e-12 * r.max(1.0).powi(2), "r={r}");
            assert!(m.lambda_plus.re <= 0.0 && m.lambda_minus.re <= 0.0);
            if r >= 0.5 {
                assert_eq!(m.lambda_plus.re, -0.5);
            }
        }
        assert_eq!(ModeRates::new(0.5004).unwrap().regime, Regime::NearBranch);
        assert_eq!(ModeRates::new(0.3).unwrap().regime, Regime::Low);
        assert_eq!(ModeRates::new(0.6).unwrap().regime, Regime::High);
    }

    #[test]
    fn ode_residual() {
        let d = 1e-4;
        for i in 0..=40 {
            let t = 0.25 + 19.5 * i as f64 / 40.0;
            for j in 0..=50 {
                let r = 50.0 * j as f64 / 50.0 + if j == 1 { -0.5 } else { 0.0 };
                let km = k_hat(t - d, r).unwrap();
                let k0 = k_hat(t, r).unwrap();
                let kp = k_hat(t + d, r).unwrap();
                let second = (kp - 2.0 * k0 + km) / (d * d);
                let first = (kp - km) / (2.0 * d);
                let res = second + first + r * r * k0;
                assert!(res.abs() <= 1e-6 * r.max(1.0).powi(2), "t={t} r={r} res={res}");
            }
        }
    }

    #[test]
    fn branch_continuity() {
        for t in [0.1, 1.0, 10.0] {
            let target = t * (-t / 2.0f64).exp();
            for r in [0.5 - 1e-8, 0.5 + 1e-8] {
                assert!((k_hat(t, r).unwrap() - target).abs() <= 1e-6);
            }
        }
        // Both sides of the band edge agree.
        for t in [0.5, 3.0, 20.0] {
            let inside = k_hat(t, 0.5 + BRANCH_BAND).unwrap();
            let outside = k_hat(t, 0.5 + BRANCH_BAND * (1.0 + 1e-12)).unwrap();
            assert!((inside - outside).abs() < 1e-12);
            let inside = k_hat(t, 0.5 - BRANCH_BAND).unwrap();
            let outside = k_hat(t, 0.5 - BRANCH_BAND * (1.0 + 1e-12)).unwrap();
            assert!((inside - outside).abs() < 1e-12);
        }
    }

    #[test]
    fn pointwise_decay_bound() {
        for i in 0..60 {
            let t = 1.0 + i as f64 * 2.0;
            for j in 0..80 {
                let r = j as f64 * 0.05;
                let bound = 2.0 * ((-t / 4.0).exp() + (-r * r * t / 2.0).exp());
                assert!(k_hat(t, r).unwrap().abs() <= bound, "t={t} r={r}");
            }
        }
    }

    #[test]
    fn large_times_do_not_overflow() {
        let v = k_hat(1e4, 0.0).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        let v = k_hat(1e4, 0.01).unwrap();
        assert!(v.is_finite() && v > 0.0);
        assert!(k_hat(1e4, 0.5).unwrap().is_finite());
        assert!(k_hat(1e4, 0.5 + 1e-4).unwrap().is_finite());
    }

    #[test]
    fn weight_examples() {
        let w = weights(0.1, 0.0).unwrap();
        assert!((w.phi0 - (0.1 - 1.0 + (-0.1f64).exp())).abs() < 1e-16);
        assert!((w.phi0 - 0.004_837_4).abs() < 1e-7);
        let w = weights(1.0, 0.5).unwrap();
        assert!((w.phi0 - (4.0 - 6.0 * (-0.5f64).exp())).abs() < 1e-15);
        for (h, r) in [(0.02, 0.3), (0.7, 4.0), (2.0, 0.5002)] {
            let w = weights(h, r).unwrap();
            assert_eq!(w.psi0, k_hat(h, r).unwrap());
        }
        assert!(weights(0.0, 1.0).is_err());
        assert!(weights(-0.1, 1.0).is_err());
    }

    fn quad(f: impl Fn(f64) -> f64, h: f64) -> f64 {
        let opts = QuadOptions {
            rel_tol: 1e-13,
            abs_tol: 0.0,
            max_panels: 20_000,
        };
        integrate(&f, 0.0, h, &[], &opts).unwrap().value
    }

    #[test]
    fn weights_match_quadrature() {
        for &h in &[1e-3, 1e-1, 1.0, 3.0] {
            for &r in &[0.0, 1e-6, 0.3, 0.4999, 0.5, 0.5001, 0.52, 10.0] {
                let w = weights(h, r).unwrap();
                let phi0 = quad(|s| k_hat(s, r).unwrap(), h);
                let phi1 = quad(|s| s * k_hat(s, r).unwrap(), h) / h;
                let psi1 = quad(|s| s * dk_hat(s, r).unwrap(), h) / h;
                for (name, got, want) in [("phi0", w.phi0, phi0), ("phi1", w.phi1, phi1), ("psi1", w.psi1, psi1)] {
                    assert!(
                        (got - want).abs() <= 1e-10 * want.abs(),
                        "{name} h={h} r={r}: {got} vs {want}"
                    );
                }
            }
        }
    }
}
