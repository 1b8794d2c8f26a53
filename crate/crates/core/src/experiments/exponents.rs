//! Closed-form exponents of the semilinear problem.

use crate::error::{invalid, Result};

/// `1 + (2+γ)/(n-q)`.
pub fn p_crit(n: usize, q: f64, gamma: f64) -> f64 {
    1.0 + (2.0 + gamma) / (n as f64 - q)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub fn finite(self) -> Option<f64> {
        match self {
            Exponent::Finite(v) => Some(v),
            Exponent::Infinite => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

impl Regime {
    pub fn of(n: usize, q: f64, gamma: f64, p: f64) -> Self {
        let d = denominator(n, q, gamma, p);
        if d.abs() <= ROOT_TOL * (2.0 + gamma) {
            Regime::Critical
        } else if d > 0.0 {
            Regime::Subcritical
        } else {
            Regime::Supercritical
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Regime::Subcritical => "subcritical",
            Regime::Critical => "critical",
            Regime::Supercritical => "supercritical",
        }
    }
}

/// Relative width inside which the denominator counts as its root `p = p_crit`.
const ROOT_TOL: f64 = 1e-12;

fn denominator(n: usize, q: f64, gamma: f64, p: f64) -> f64 {
    2.0 + gamma - (p - 1.0) * (n as f64 - q)
}

/// `2(p-1)/(2+γ-(p-1)(n-q))` for `p < p_crit`, infinite otherwise.
pub fn lifespan_exponent(n: usize, q: f64, gamma: f64, p: f64) -> Result<Exponent> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(invalid(format!("p must satisfy p > 1, got {p}")));
    }
    if !(n as f64 > q) {
        return Err(invalid(format!("need q < n, got q = {q}, n = {n}")));
    }
    Ok(match Regime::of(n, q, gamma, p) {
        Regime::Subcritical => Exponent::Finite(2.0 * (p - 1.0) / denominator(n, q, gamma, p)),
        _ => Exponent::Infinite,
    })
}

/// Parameters outside the range where the existence and blow-up results apply.
/// These are labels, not errors: the dynamics are defined regardless.
pub fn range_warnings(n: usize, q: f64, gamma: f64, p: f64) -> Vec<String> {
    let nf = n as f64;
    let mut out = Vec::new();
    if gamma < 0.0 {
        out.push(format!("gamma = {gamma} < 0"));
    }
    if !(q > 0.0 && q < nf / 2.0) {
        out.push(format!("q = {q} outside 0 < q < n/2 = {}", nf / 2.0));
    }
    if n >= 3 {
        let lo = 2.0 * (nf - q + gamma) / nf;
        let hi = (nf + 2.0 * gamma) / (nf - 2.0);
        if !(lo <= p && p <= hi) {
            out.push(format!(
                "p = {p} outside the Gagliardo-Nirenberg window [{lo}, {hi}] for n = {n}"
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_crit_examples() {
        assert!((p_crit(2, 0.5, 0.25) - 2.5).abs() < 1e-15);
        assert!((p_crit(3, 1.0, 0.5) - 2.25).abs() < 1e-15);
        for n in 1..=4 {
            assert!((p_crit(n, 0.0, 0.0) - (1.0 + 2.0 / n as f64)).abs() < 1e-15);
        }
        assert!((p_crit(1, 0.4, 0.2) - (1.0 + 2.2 / 0.6)).abs() < 1e-15);
    }

    #[test]
    fn lifespan_examples() {
        let e = lifespan_exponent(1, 0.4, 0.2, 2.0).unwrap().finite().unwrap();
        assert!((e - 1.25).abs() < 1e-12);
        let e = lifespan_exponent(2, 0.5, 0.0, 2.0).unwrap().finite().unwrap();
        assert!((e - 4.0).abs() < 1e-12);
        for (n, q, g) in [(1, 0.4, 0.2), (2, 0.5, 0.25), (3, 1.0, 0.5), (4, 1.5, 0.0)] {
            let pc = p_crit(n, q, g);
            assert_eq!(lifespan_exponent(n, q, g, pc).unwrap(), Exponent::Infinite);
            assert_eq!(Regime::of(n, q, g, pc), Regime::Critical);
            assert_eq!(lifespan_exponent(n, q, g, pc + 0.1).unwrap(), Exponent::Infinite);
        }
        assert!(lifespan_exponent(1, 0.4, 0.2, 1.0).is_err());
    }

    #[test]
    fn exponent_blows_up_at_p_crit() {
        let (n, q, g) = (1, 0.4, 0.2);
        let pc = p_crit(n, q, g);
        let mut last = 0.0;
        for k in 1..=8 {
            let p = pc - 10f64.powi(-k);
            let e = lifespan_exponent(n, q, g, p).unwrap().finite().unwrap();
            assert!(e > last);
            // e·(pc - p) → 2(pc-1)/(n-q) as the denominator is linear in p.
            let lim = 2.0 * (pc - 1.0) / (n as f64 - q);
            assert!((e * (pc - p) - lim).abs() <= 10f64.powi(-k) * 10.0 * lim);
            last = e;
        }
    }

    #[test]
    fn warnings_label_hypotheses() {
        assert!(range_warnings(1, 0.4, 0.2, 2.0).is_empty());
        assert_eq!(range_warnings(1, 0.9, 0.2, 2.0).len(), 1);
        let w = range_warnings(3, 1.0, 0.5, 5.0);
        assert!(w[0].contains("Gagliardo-Nirenberg"), "{w:?}");
        assert!(range_warnings(3, 1.0, 0.5, 2.0).is_empty());
    }
}
