//! Riesz potential `I_γ = (-Δ)^{-γ/2}` as a Fourier multiplier and the nonlinearity
//! `u ↦ I_γ(|u|^p)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use statrs::function::gamma::gamma as gamma_fn;

use crate::error::{invalid, Result};
use crate::grid::{Grid, SpectralField};

/// Treatment of the singular multiplier at `ξ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RieszMode {
    /// `|ξ|^{-γ}` with the zero mode annihilated.
    ExactZero,
    /// `(|ξ|² + μ²)^{-γ/2}` on every mode.
    Regularized { mu: f64 },
}

impl RieszMode {
    /// Regularized mode softened at the lowest nonzero lattice frequency scale, `μ = π/(2L)`.
    pub fn regularized_for(grid: &Grid) -> Self {
        RieszMode::Regularized {
            mu: PI / (2.0 * grid.half_width()),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            RieszMode::ExactZero => Ok(()),
            RieszMode::Regularized { mu } if mu > 0.0 && mu.is_finite() => Ok(()),
            RieszMode::Regularized { mu } => {
                Err(invalid(format!("regularization frequency must be positive, got {mu}")))
            }
        }
    }
}

/// `Γ((n-γ)/2) / (2^γ π^{n/2} Γ(γ/2))`, the constant of the convolution kernel `c|x|^{γ-n}`.
pub fn riesz_constant(n: usize, gamma: f64) -> Result<f64> {
    let nf = n as f64;
    if n == 0 {
        return Err(invalid("dimension must be positive"));
    }
    if !(gamma > 0.0 && gamma < nf) {
        return Err(invalid(format!(
            "Riesz constant needs 0 < gamma < n = {n}, got {gamma}"
        )));
    }
    Ok(gamma_fn((nf - gamma) / 2.0) / (2f64.powf(gamma) * PI.powf(nf / 2.0) * gamma_fn(gamma / 2.0)))
}

fn check_gamma(grid: &Grid, gamma: f64) -> Result<()> {
    let n = grid.dim() as f64;
    if gamma >= 0.0 && gamma < n {
        Ok(())
    } else {
        Err(invalid(format!("gamma must satisfy 0 <= gamma < n = {n}, got {gamma}")))
    }
}

/// The Riesz multiplier tabulated once per frequency shell of a grid.
#[derive(Debug, Clone)]
pub struct RieszOperator {
    grid: Grid,
    gamma: f64,
    mode: RieszMode,
    table: Vec<f64>,
}

impl RieszOperator {
    pub fn new(grid: &Grid, gamma: f64, mode: RieszMode) -> Result<Self> {
        check_gamma(grid, gamma)?;
        mode.validate()?;
        let table = grid
            .shells()
            .iter()
            .map(|&r| {
                if gamma == 0.0 {
                    return 1.0;
                }
                match mode {
                    RieszMode::ExactZero if r == 0.0 => 0.0,
                    RieszMode::ExactZero => r.powf(-gamma),
                    RieszMode::Regularized { mu } => (r * r + mu * mu).powf(-gamma / 2.0),
                }
            })
            .collect();
        Ok(Self {
            grid: grid.clone(),
            gamma,
            mode,
            table,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn mode(&self) -> RieszMode {
        self.mode
    }

    pub fn apply(&self, f: &SpectralField) -> Result<SpectralField> {
        let mut coeffs = f.coeffs().to_vec();
        self.apply_in_place(&mut coeffs);
        SpectralField::from_coeffs(&self.grid, coeffs)
    }

    pub(crate) fn apply_in_place(&self, coeffs: &mut [Complex64]) {
        if self.gamma == 0.0 {
            return;
        }
        for (c, &s) in coeffs.iter_mut().zip(self.grid.shell_indices()) {
            *c *= self.table[s as usize];
        }
    }
}

/// `I_γ f` on the grid of `f`.
pub fn riesz_apply(f: &SpectralField, gamma: f64, mode: RieszMode) -> Result<SpectralField> {
    check_gamma(f.grid(), gamma)?;
    if gamma == 0.0 {
        return Ok(f.clone());
    }
    RieszOperator::new(f.grid(), gamma, mode)?.apply(f)
}

/// Outcome of one nonlinearity evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum NonlinearTerm {
    Finite {
        field: SpectralField,
        /// Conjugate asymmetry removed by symmetrization.
        asymmetry: f64,
    },
    /// `u` or `|u|^p` was not finite somewhere.
    NonFinite,
}

/// `u ↦ I_γ(|u|^p)` with all per-grid tables prebuilt.
#[derive(Debug, Clone)]
pub struct PowerNonlinearity {
    grid: Grid,
    p: f64,
    riesz: RieszOperator,
    fine: Option<Padding>,
}

#[derive(Debug, Clone)]
struct Padding {
    grid: Grid,
    /// Fine-grid storage index of every coarse mode.
    map: Vec<usize>,
}

impl PowerNonlinearity {
    /// `oversample` evaluates the pointwise power on a grid twice as fine.
    pub fn new(grid: &Grid, p: f64, gamma: f64, mode: RieszMode, oversample: bool) -> Result<Self> {
        if !(p > 0.0) || !p.is_finite() {
            return Err(invalid(format!("power must be positive, got {p}")));
        }
        let riesz = RieszOperator::new(grid, gamma, mode)?;
        let fine = if oversample {
            let fine = grid.refined(2)?;
            let map = (0..grid.total_points())
                .map(|i| fine.mode_index(&grid.wavenumbers(i)).expect("coarse mode fits"))
                .collect();
            Some(Padding { grid: fine, map })
        } else {
            None
        };
        Ok(Self {
            grid: grid.clone(),
            p,
            riesz,
            fine,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn evaluate(&self, u: &SpectralField) -> Result<NonlinearTerm> {
        let mut coeffs = match &self.fine {
            None => match self.pointwise_power(&self.grid, u)? {
                Some(field) => field.into_coeffs(),
                None => return Ok(NonlinearTerm::NonFinite),
            },
            Some(pad) => {
                let mut fine = vec![Complex64::default(); pad.grid.total_points()];
                for (c, &j) in u.coeffs().iter().zip(&pad.map) {
                    fine[j] = *c;
                }
                let fine = SpectralField::from_coeffs(&pad.grid, fine)?;
                match self.pointwise_power(&pad.grid, &fine)? {
                    Some(field) => pad.map.iter().map(|&j| field.coeffs()[j]).collect(),
                    None => return Ok(NonlinearTerm::NonFinite),
                }
            }
        };
        self.riesz.apply_in_place(&mut coeffs);
        let mut field = SpectralField::from_coeffs(&self.grid, coeffs)?;
        let asymmetry = field.symmetrize();
        if asymmetry > 0.0 {
            log::trace!("nonlinearity symmetrized, max asymmetry {asymmetry:e}");
        }
        Ok(NonlinearTerm::Finite { field, asymmetry })
    }

    fn pointwise_power(&self, grid: &Grid, u: &SpectralField) -> Result<Option<SpectralField>> {
        let mut values = grid.inverse(u)?;
        for v in values.iter_mut() {
            if !v.is_finite() {
                return Ok(None);
            }
            let a = v.abs();
            *v = if a == 0.0 { 0.0 } else { (self.p * a.ln()).exp() };
            if !v.is_finite() {
                return Ok(None);
            }
        }
        grid.forward(&values).map(Some)
    }
}

/// One-shot `I_γ(|u|^p)`; prefer [`PowerNonlinearity`] in loops.
pub fn nonlinearity(u: &SpectralField, p: f64, gamma: f64, mode: RieszMode) -> Result<NonlinearTerm> {
    PowerNonlinearity::new(u.grid(), p, gamma, mode, false)?.evaluate(u)
}
