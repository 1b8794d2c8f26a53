//! Grid-free radial quadrature in frequency space over ℝⁿ.
//!
//! Every norm here is a one-dimensional integral over `r = |ξ|` against the
//! sphere area `σ_{n-1} = 2π^{n/2}/Γ(n/2)`. The Fourier transform is unitary, so a
//! radial `f(x) = g(|x|)` has `f̂(ρ) = ∫₀^∞ g(r) r^{n-1} J̃_{n/2-1}(rρ) dr`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::gamma as gamma_fn;

use crate::bessel::reduced_bessel_j;
use crate::error::{invalid, Error, Result};
use crate::grid::{Grid, SpectralField};
use crate::kernel::propagator;
use crate::quadrature::{euler_sum, integrate, integrate_to_infinity, QuadOptions};
use crate::riesz::{RieszMode, RieszOperator};

/// `2π^{n/2}/Γ(n/2)`.
pub fn sphere_area(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    2.0 * PI.powf(h) / gamma_fn(h)
}

fn oracle_options() -> QuadOptions {
    QuadOptions {
        rel_tol: 1e-8,
        abs_tol: 0.0,
        max_panels: 50_000,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    /// `ĝ` vanishes outside `[r_min, r_max]`.
    Bounded { r_min: f64, r_max: f64 },
    Unbounded,
}

/// Amplitude `ĝ(r)` of a radial Fourier transform.
#[derive(Clone)]
pub struct RadialProfile {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    support: Support,
    label: String,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("label", &self.label)
            .field("support", &self.support)
            .finish()
    }
}

impl RadialProfile {
    pub fn new(label: impl Into<String>, support: Support, g: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(g),
            support,
            label: label.into(),
        }
    }

    /// `1_{[0,1]}(r)`.
    pub fn indicator() -> Self {
        Self::power_indicator(0.0)
    }

    /// `r^{-q} 1_{[0,1]}(r)`.
    pub fn power_indicator(q: f64) -> Self {
        Self::new(
            format!("r^-{q} 1[0,1]"),
            Support::Bounded { r_min: 0.0, r_max: 1.0 },
            move |r| if r <= 1.0 { r.powf(-q) } else { 0.0 },
        )
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.eval)(r)
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Integration range, `None` for the upper end when unbounded.
    fn range(&self) -> (f64, Option<f64>) {
        match self.support {
            Support::Bounded { r_min, r_max } => (r_min.max(0.0), Some(r_max)),
            Support::Unbounded => (0.0, None),
        }
    }
}

/// Local power-law exponent of `∫_{δ}^{2δ} F` as `δ → 0` (`toward_zero`) or `δ → ∞`.
///
/// Convergence at zero needs a positive exponent, at infinity a negative one.
fn dyadic_exponent(f: &dyn Fn(f64) -> f64, toward_zero: bool) -> Option<f64> {
    let opts = QuadOptions {
        rel_tol: 1e-6,
        abs_tol: 0.0,
        max_panels: 2_000,
    };
    let (d1, d2) = if toward_zero { (1e-6, 1e-10) } else { (1e6, 1e10) };
    let chunk = |d: f64| integrate(f, d, 2.0 * d, &[], &opts).map(|r| r.value.abs()).unwrap_or(f64::NAN);
    let (c1, c2) = (chunk(d1), chunk(d2));
    if c1 == 0.0 && c2 == 0.0 {
        return None;
    }
    if !(c1 > 0.0 && c2 > 0.0) {
        return Some(if toward_zero { f64::NEG_INFINITY } else { f64::INFINITY });
    }
    Some((c1 / c2).ln() / (d1 / d2).ln())
}

/// Errors out when `∫ F` diverges at either end of `[lo, hi]`; `tail` is a
/// non-oscillating envelope of `F` used for the probe at infinity.
fn check_integrable(
    f: &dyn Fn(f64) -> f64,
    tail: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: Option<f64>,
    condition: &str,
) -> Result<()> {
    if lo == 0.0 {
        if let Some(a) = dyadic_exponent(f, true) {
            if a <= 0.02 {
                return Err(Error::Divergent(format!(
                    "integrand behaves like r^{:.3} near r = 0; requires {condition}",
                    a - 1.0
                )));
            }
        }
    }
    if hi.is_none() {
        if let Some(a) = dyadic_exponent(tail, false) {
            if a >= -0.02 {
                return Err(Error::Divergent(format!(
                    "integrand behaves like r^{:.3} as r → ∞; requires {condition}",
                    a - 1.0
                )));
            }
        }
    }
    Ok(())
}

/// Breakpoints for a kernel-weighted integral at time `t`.
fn kernel_breaks(t: f64, lo: f64, hi: Option<f64>) -> Vec<f64> {
    let mut b = vec![0.5];
    for k in -30..=10 {
        b.push(2f64.powi(k));
    }
    if t > 0.0 {
        let scale = 1.0 / t.sqrt();
        for k in -12..=12 {
            b.push(scale * 2f64.powf(k as f64 / 2.0));
        }
        // Zeros of sin(t·√(r² - 1/4)).
        let top = hi.unwrap_or(64.0);
        for k in 1..=2000 {
            let r = (0.25 + (k as f64 * PI / t).powi(2)).sqrt();
            if r > top {
                break;
            }
            b.push(r);
        }
    }
    b.retain(|&x| x > lo && hi.map_or(true, |h| x < h));
    b
}

/// `‖∂ₜ^j K(t)∗φ‖_{Ḣ^s}` for radial `φ̂ = ĝ`.
pub fn linear_sobolev_norm(t: f64, profile: &RadialProfile, n: usize, s: f64, j: usize) -> Result<f64> {
    if !(1..=4).contains(&n) {
        return Err(invalid(format!("n must satisfy 1 <= n <= 4, got {n}")));
    }
    if j > 1 {
        return Err(invalid(format!("time derivative order must be 0 or 1, got {j}")));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(invalid(format!("t must be finite and >= 0, got {t}")));
    }
    let nm1 = n as f64 - 1.0;
    let integrand = |r: f64| {
        if r <= 0.0 {
            return 0.0;
        }
        let p = propagator(t, r).expect("nonnegative arguments");
        let kj = if j == 0 { p.k } else { p.dk };
        let a = kj * profile.eval(r);
        if a == 0.0 {
            return 0.0;
        }
        r.powf(2.0 * s + nm1) * a * a
    };
    // |∂ₜ^j K̂| ≲ r^{j-1} at high frequency for t > 0; K̂(0) = 0, ∂ₜK̂(0) = 1.
    let envelope = |r: f64| {
        let m = if t > 0.0 {
            r.powi(2 * j as i32 - 2)
        } else if j == 1 {
            1.0
        } else {
            0.0
        };
        let g = profile.eval(r);
        m * r.powf(2.0 * s + nm1) * g * g
    };
    let (lo, hi) = profile.range();
    check_integrable(
        &integrand,
        &envelope,
        lo,
        hi,
        "s > q - n/2 for a profile ~ r^-q at the origin",
    )?;
    let breaks = kernel_breaks(t, lo, hi);
    let opts = oracle_options();
    let value = match hi {
        Some(h) => integrate(&integrand, lo, h, &breaks, &opts)?,
        None => integrate_to_infinity(&integrand, lo, &breaks, &opts)?,
    };
    Ok((sphere_area(n) * value.value).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute residual in `log(value)`.
    pub residual: f64,
}

/// Least squares of `log(value)` against `log(1 + t)`.
pub fn fit_decay_slope(samples: &[(f64, f64)]) -> Result<DecayFit> {
    if samples.len() < 5 {
        return Err(Error::InsufficientData(format!(
            "decay fit needs at least 5 samples, got {}",
            samples.len()
        )));
    }
    if let Some((t, v)) = samples.iter().find(|(_, v)| !(*v > 0.0) || !v.is_finite()) {
        return Err(invalid(format!("decay fit needs positive values, got {v} at t = {t}")));
    }
    if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) || samples[0].0 < 0.0 {
        return Err(invalid("decay fit needs strictly increasing nonnegative times"));
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(t, v)| (t.ln_1p(), v.ln())).collect();
    let (slope, intercept) = least_squares(&pts);
    let residual = pts
        .iter()
        .map(|&(x, y)| (y - slope * x - intercept).abs())
        .fold(0.0, f64::max);
    Ok(DecayFit {
        slope,
        intercept,
        residual,
    })
}

/// Ordinary least-squares line `(slope, intercept)`.
pub fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// `‖|ξ|^γ e^{-c|ξ|²t}‖_{L²(|ξ| ≤ ε)} / (1+t)^{-n/4-γ/2}`.
pub fn lemma_b1_ratio(t: f64, gamma: f64, c: f64, eps_cut: f64, n: usize) -> Result<f64> {
    if !(1..=4).contains(&n) || !(c > 0.0) || !(eps_cut > 0.0) || !(t >= 0.0) {
        return Err(invalid(format!(
            "need 1 <= n <= 4, c > 0, eps_cut > 0, t >= 0; got n = {n}, c = {c}, eps_cut = {eps_cut}, t = {t}"
        )));
    }
    let nm1 = n as f64 - 1.0;
    let integrand = |r: f64| {
        if r <= 0.0 {
            0.0
        } else {
            r.powf(2.0 * gamma + nm1) * (-2.0 * c * r * r * t).exp()
        }
    };
    check_integrable(&integrand, &integrand, 0.0, Some(eps_cut), "gamma > -n/2")?;
    let breaks = kernel_breaks(t, 0.0, Some(eps_cut));
    let v = integrate(&integrand, 0.0, eps_cut, &breaks, &oracle_options())?;
    let norm = (sphere_area(n) * v.value).sqrt();
    Ok(norm / (1.0 + t).powf(-(n as f64) / 4.0 - gamma / 2.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum B2Branch {
    /// `max{α, β} > 1`: `(1+t)^{-min{α,β}}`.
    MaxAboveOne,
    /// `max{α, β} = 1`: `(1+t)^{-min{α,β}} log(e+t)`.
    MaxEqualsOne,
    /// `max{α, β} < 1`: `(1+t)^{1-α-β}`.
    MaxBelowOne,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct B2Check {
    pub integral: f64,
    pub branch: B2Branch,
    pub bound: f64,
}

impl B2Check {
    pub fn ratio(&self) -> f64 {
        self.integral / self.bound
    }
}

/// `∫₀ᵗ (1+t-τ)^{-α}(1+τ)^{-β} dτ` with the matching bound branch.
pub fn lemma_b2_check(alpha: f64, beta: f64, t: f64) -> Result<B2Check> {
    if !(t >= 0.0) || !t.is_finite() || !alpha.is_finite() || !beta.is_finite() {
        return Err(invalid(format!("need finite alpha, beta and t >= 0; got {alpha}, {beta}, {t}")));
    }
    let mx = alpha.max(beta);
    let mn = alpha.min(beta);
    let (branch, bound) = if mx > 1.0 {
        (B2Branch::MaxAboveOne, (1.0 + t).powf(-mn))
    } else if mx == 1.0 {
        (B2Branch::MaxEqualsOne, (1.0 + t).powf(-mn) * (std::f64::consts::E + t).ln())
    } else {
        (B2Branch::MaxBelowOne, (1.0 + t).powf(1.0 - alpha - beta))
    };
    let f = |tau: f64| (1.0 + t - tau).powf(-alpha) * (1.0 + tau).powf(-beta);
    let mut breaks = vec![0.5 * t];
    for k in 0..40 {
        let d = 2f64.powi(k);
        if d >= 0.5 * t {
            break;
        }
        breaks.push(d);
        breaks.push(t - d);
    }
    let opts = QuadOptions {
        rel_tol: 1e-10,
        ..oracle_options()
    };
    let integral = integrate(&f, 0.0, t, &breaks, &opts)?.value;
    Ok(B2Check {
        integral,
        branch,
        bound,
    })
}

/// `|ξ|^q |f̂(ξ)|` for `f(x) = ⟨x⟩^{-n+q}` at each requested `|ξ|`.
///
/// The oscillatory tail beyond the first few dozen Bessel half-periods is summed
/// panel by panel with Euler acceleration.
pub fn hankel_pm_norm_samples(q: f64, n: usize, xi_list: &[f64]) -> Result<Vec<(f64, Result<f64>)>> {
    hankel_pm_norm_samples_scaled(q, n, 1.0, xi_list)
}

/// As [`hankel_pm_norm_samples`] for `f = amplitude·⟨x⟩^{-n+q}`.
pub fn hankel_pm_norm_samples_scaled(
    q: f64,
    n: usize,
    amplitude: f64,
    xi_list: &[f64],
) -> Result<Vec<(f64, Result<f64>)>> {
    let nf = n as f64;
    if !(1..=4).contains(&n) || !(q > 0.0 && q < nf / 2.0) {
        return Err(invalid(format!("need 1 <= n <= 4 and 0 < q < n/2; got n = {n}, q = {q}")));
    }
    if let Some(x) = xi_list.iter().find(|x| !(**x > 0.0) || !x.is_finite()) {
        return Err(invalid(format!("frequencies must be positive, got {x}")));
    }
    Ok(xi_list
        .iter()
        .map(|&xi| (xi, radial_transform_power(q, n, xi).map(|v| amplitude * xi.powf(q) * v.abs())))
        .collect())
}

/// `∫₀^∞ ⟨r⟩^{q-n} r^{n-1} J̃_{n/2-1}(rρ) dr`.
fn radial_transform_power(q: f64, n: usize, rho: f64) -> Result<f64> {
    let nf = n as f64;
    let nu = nf / 2.0 - 1.0;
    let f = |r: f64| (1.0 + r * r).powf((q - nf) / 2.0) * r.powf(nf - 1.0) * reduced_bessel_j(nu, r * rho);
    let period = PI / rho;
    // Zeros of the asymptotic phase cos(rρ - (ν/2 + 1/4)π).
    let phase = (0.5 * nu + 0.75) * PI;
    let start = (40.0_f64.max(40.0 * rho) - phase) / PI;
    let r0 = (phase + start.ceil().max(1.0) * PI) / rho;
    let mut breaks: Vec<f64> = (1..)
        .map(|k| (phase + (k as f64 - 1.0) * PI) / rho)
        .take_while(|&r| r < r0)
        .filter(|&r| r > 0.0)
        .collect();
    for k in -6..=6 {
        breaks.push(10f64.powi(k));
    }
    // Cancellation makes the signed value tiny against ∫|f|; tolerances are
    // pinned to the L1 mass, which is the roundoff floor of the sum.
    let coarse = QuadOptions {
        rel_tol: 1e-3,
        abs_tol: 0.0,
        max_panels: 200_000,
    };
    let mass = integrate(&|r: f64| f(r).abs(), 0.0, r0, &breaks, &coarse)?.value;
    let opts = QuadOptions {
        rel_tol: 1e-10,
        abs_tol: 1e-13 * mass.max(f64::MIN_POSITIVE),
        max_panels: 200_000,
    };
    let head = integrate(&f, 0.0, r0, &breaks, &opts)?;
    let terms: Vec<f64> = (0..60)
        .map(|k| {
            let a = r0 + k as f64 * period;
            integrate(&f, a, a + period, &[], &opts).map(|r| r.value)
        })
        .collect::<Result<_>>()?;
    let (tail, spread) = euler_sum(&terms);
    let value = head.value + tail;
    let scale = head.value.abs().max(terms[0].abs());
    if !value.is_finite() || spread > 1e-6 * scale.max(1e-300) && spread > 1e-14 {
        return Err(Error::Quadrature(format!(
            "oscillatory tail did not settle at |xi| = {rho}: spread {spread:e}"
        )));
    }
    Ok(value)
}

/// `max/min` of the returned products, `+∞` when any product is zero.
pub fn sample_spread(samples: &[(f64, Result<f64>)]) -> Result<f64> {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for (xi, v) in samples {
        let v = v.as_ref().map_err(|e| Error::Quadrature(format!("at |xi| = {xi}: {e}")))?;
        lo = lo.min(*v);
        hi = hi.max(*v);
    }
    Ok(if lo > 0.0 { hi / lo } else { f64::INFINITY })
}

/// Fractional Gagliardo–Nirenberg setting
/// `‖u‖_{Ḣ^θ_p} ≤ C ‖u‖_{L^{p0}}^{1-ω} ‖u‖_{Ḣ^a_{p1}}^{ω}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GnSpec {
    pub p: f64,
    pub theta: f64,
    pub a: f64,
    pub p0: f64,
    pub p1: f64,
}

impl GnSpec {
    /// The interpolation weight `ω(θ, a)` in dimension `n`.
    pub fn omega(&self, n: usize) -> f64 {
        let nf = n as f64;
        (1.0 / self.p0 - 1.0 / self.p + self.theta / nf) / (1.0 / self.p0 - 1.0 / self.p1 + self.a / nf)
    }

    fn violations(&self, n: usize) -> Vec<String> {
        let mut v = Vec::new();
        for (name, x) in [("p", self.p), ("p0", self.p0), ("p1", self.p1)] {
            if !(x > 1.0 && x.is_finite()) {
                v.push(format!("{name} must satisfy 1 < {name} < ∞, got {x}"));
            }
        }
        if !(self.a > 0.0) {
            v.push(format!("a must be positive, got {}", self.a));
        }
        let endpoint = self.theta == self.a && self.p == self.p1;
        if !(self.theta >= 0.0 && (self.theta < self.a || endpoint)) {
            v.push(format!("theta must satisfy 0 <= theta < a, got theta = {}, a = {}", self.theta, self.a));
        }
        if v.is_empty() {
            let w = self.omega(n);
            if !(w >= self.theta / self.a - 1e-12 && w <= 1.0 + 1e-12) {
                v.push(format!("omega = {w} must lie in [theta/a, 1]"));
            }
        }
        v
    }
}

/// Empirical constants of an inequality over a sample family.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    pub min_ratio: f64,
}

impl InequalityReport {
    fn from_ratios(ratios: Vec<f64>) -> Self {
        let max_ratio = ratios.iter().cloned().fold(f64::MIN, f64::max);
        let min_ratio = ratios.iter().cloned().fold(f64::MAX, f64::min);
        Self {
            ratios,
            max_ratio,
            min_ratio,
        }
    }

    /// `max/min` over the family.
    pub fn spread(&self) -> f64 {
        self.max_ratio / self.min_ratio
    }
}

fn lp_norm(values: &[f64], p: f64, cell: f64) -> f64 {
    (values.iter().map(|v| v.abs().powf(p)).sum::<f64>() * cell).powf(1.0 / p)
}

/// `‖F⁻¹(|ξ|^s û)‖_{L^p}` on the grid.
fn bessel_lp(u: &SpectralField, s: f64, p: f64) -> Result<f64> {
    let field = if s == 0.0 {
        u.clone()
    } else {
        u.apply_radial_multiplier(|r| if r == 0.0 { 0.0 } else { r.powf(s) })
    };
    let phys = u.grid().inverse(&field)?;
    Ok(lp_norm(&phys, p, u.grid().cell_volume()))
}

/// Randomised test fields: even indices band-limited noise, odd indices Gaussians.
pub fn sample_family(grid: &Grid, seed: u64, count: usize) -> Result<Vec<SpectralField>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = grid.half_width();
    let band = (grid.points() / 8).max(2) as f64;
    (0..count)
        .map(|i| {
            if i % 2 == 0 {
                let mut coeffs: Vec<Complex64> = (0..grid.total_points())
                    .map(|flat| {
                        let k: f64 = grid.wavenumbers(flat).iter().map(|&k| (k * k) as f64).sum::<f64>().sqrt();
                        if k > band || k == 0.0 {
                            Complex64::default()
                        } else {
                            let amp = 1.0 / (1.0 + k);
                            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * amp
                        }
                    })
                    .collect();
                coeffs[0] = Complex64::default();
                let mut f = SpectralField::from_coeffs(grid, coeffs)?;
                f.symmetrize();
                Ok(f)
            } else {
                let centre: Vec<f64> = (0..grid.dim()).map(|_| rng.gen_range(-0.25 * l..0.25 * l)).collect();
                let width = rng.gen_range(0.5..3.0);
                let amp = rng.gen_range(0.5..2.0);
                let samples = grid.sample(|x| {
                    let d2: f64 = x.iter().zip(&centre).map(|(a, b)| (a - b).powi(2)).sum();
                    amp * (-d2 / (width * width)).exp()
                });
                grid.forward(&samples)
            }
        })
        .collect()
}

/// LHS/RHS of the fractional Gagliardo–Nirenberg inequality over `fields`.
pub fn gn_check(fields: &[SpectralField], spec: &GnSpec) -> Result<InequalityReport> {
    let first = fields.first().ok_or_else(|| Error::InsufficientData("no sample fields".into()))?;
    let n = first.grid().dim();
    let v = spec.violations(n);
    if !v.is_empty() {
        return Err(invalid(v.join("; ")));
    }
    let w = spec.omega(n);
    let ratios = fields
        .iter()
        .map(|u| {
            let lhs = bessel_lp(u, spec.theta, spec.p)?;
            let low = bessel_lp(u, 0.0, spec.p0)?;
            let high = bessel_lp(u, spec.a, spec.p1)?;
            Ok(lhs / (low.powf(1.0 - w) * high.powf(w)))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(InequalityReport::from_ratios(ratios))
}

/// `‖I_γ f‖_{L^{η₁}} / ‖f‖_{L^{η₂}}` with `1/η₁ = 1/η₂ - γ/n`, regularized at `μ = π/(2L)`.
pub fn hls_check(fields: &[SpectralField], gamma: f64, eta2: f64) -> Result<InequalityReport> {
    let first = fields.first().ok_or_else(|| Error::InsufficientData("no sample fields".into()))?;
    let grid = first.grid();
    let nf = grid.dim() as f64;
    if !(gamma > 0.0 && gamma < nf) {
        return Err(invalid(format!("HLS needs 0 < gamma < n = {nf}, got {gamma}")));
    }
    let inv1 = 1.0 / eta2 - gamma / nf;
    if !(eta2 > 1.0) || !(inv1 > 0.0) {
        return Err(invalid(format!(
            "HLS needs 1 < eta2 < eta1 < ∞ with 1/eta1 = 1/eta2 - gamma/n; got eta2 = {eta2}"
        )));
    }
    let eta1 = 1.0 / inv1;
    let op = RieszOperator::new(grid, gamma, RieszMode::regularized_for(grid))?;
    let cell = grid.cell_volume();
    let ratios = fields
        .iter()
        .map(|f| {
            let pot = grid.inverse(&op.apply(f)?)?;
            let phys = grid.inverse(f)?;
            Ok(lp_norm(&pot, eta1, cell) / lp_norm(&phys, eta2, cell))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(InequalityReport::from_ratios(ratios))
}
