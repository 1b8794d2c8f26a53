//! Periodic lattice standing in for ℝⁿ, spectral representation and norms.
//!
//! Conventions, fixed here and nowhere else:
//!
//! * physical points are `x_j = -L + j·dx` per axis, `dx = 2L/N`;
//! * frequencies are `ξ_k = (π/L)·k` with `k ∈ [-N/2, N/2)`, stored in FFT
//!   order (`0, 1, …, N/2-1, -N/2, …, -1`) along every axis, last axis fastest;
//! * coefficients use the discrete unitary convention
//!   `c_k = (2L)^{n/2} N^{-n} Σ_j g(x_j) e^{-i ξ_k·x_j}`, so the zero mode is the
//!   spatial mean times `(2L)^{n/2}` and `Σ|c_k|² = Σ g(x_j)² dxⁿ` exactly;
//! * continuum samples of the unitary Fourier transform on ℝⁿ are
//!   `f̂(ξ_k) ≈ c_k · (L/π)^{n/2}`, hence `Σ|c_k|² = (π/L)ⁿ Σ|f̂(ξ_k)|²`, the
//!   Riemann sum of `∫|f̂|² dξ` over the frequency cells.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Largest supported total number of lattice points.
pub const MAX_TOTAL_POINTS: usize = 1 << 28;

/// Uniform periodic lattice on `[-L, L)ⁿ` together with its frequency lattice.
#[derive(Clone)]
pub struct Grid {
    inner: Arc<GridInner>,
}

struct GridInner {
    dim: usize,
    points: usize,
    half_width: f64,
    total: usize,
    /// Distinct values of `|ξ|`, ascending.
    shells: Vec<f64>,
    /// Shell index of every mode.
    shell_of: Vec<u32>,
    /// `true` where `Σ_a k_a` is odd.
    odd: Vec<bool>,
    /// Storage index of `-k`.
    conj: Vec<u32>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("dim", &self.inner.dim)
            .field("points", &self.inner.points)
            .field("half_width", &self.inner.half_width)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.dim() == other.dim()
                && self.points() == other.points()
                && self.half_width() == other.half_width())
    }
}

impl Grid {
    /// Builds the lattice with `points` samples per axis on `[-half_width, half_width)^dim`.
    pub fn new(dim: usize, points: usize, half_width: f64) -> Result<Self> {
        let mut problems = Vec::new();
        if !(1..=4).contains(&dim) {
            problems.push(format!("dimension must be 1..=4, got {dim}"));
        }
        if points < 4 || points % 2 != 0 {
            problems.push(format!("points per axis must be even and >= 4, got {points}"));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            problems.push(format!("half-width must be positive, got {half_width}"));
        }
        if !problems.is_empty() {
            return Err(Error::InvalidGrid(problems.join("; ")));
        }
        let total = (0..dim).try_fold(1usize, |acc, _| acc.checked_mul(points));
        let total = match total {
            Some(t) if t <= MAX_TOTAL_POINTS => t,
            _ => {
                return Err(Error::InvalidGrid(format!(
                    "{points}^{dim} points exceeds the limit of 2^28"
                )))
            }
        };

        let mut ksq = Vec::with_capacity(total);
        let mut odd = Vec::with_capacity(total);
        let mut conj = Vec::with_capacity(total);
        let mut idx = vec![0usize; dim];
        for _ in 0..total {
            let mut sum_sq = 0u64;
            let mut sum = 0usize;
            let mut partner = 0usize;
            for &i in &idx {
                let k = wavenumber(i, points);
                sum_sq += (k * k) as u64;
                sum += i;
                partner = partner * points + (points - i) % points;
            }
            ksq.push(sum_sq);
            odd.push(sum % 2 == 1);
            conj.push(partner as u32);
            increment(&mut idx, points);
        }
        let mut distinct = ksq.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let spacing = std::f64::consts::PI / half_width;
        let shells = distinct.iter().map(|&m| spacing * (m as f64).sqrt()).collect();
        let shell_of = ksq
            .iter()
            .map(|m| distinct.binary_search(m).expect("present") as u32)
            .collect();

        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(points);
        let inverse = planner.plan_fft_inverse(points);
        Ok(Self {
            inner: Arc::new(GridInner {
                dim,
                points,
                half_width,
                total,
                shells,
                shell_of,
                odd,
                conj,
                forward,
                inverse,
            }),
        })
    }

    pub fn dim(&self) -> usize {
        self.inner.dim
    }

    /// Points per axis.
    pub fn points(&self) -> usize {
        self.inner.points
    }

    pub fn half_width(&self) -> f64 {
        self.inner.half_width
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.inner.half_width / self.inner.points as f64
    }

    /// Frequency lattice spacing `π/L`.
    pub fn frequency_spacing(&self) -> f64 {
        std::f64::consts::PI / self.inner.half_width
    }

    /// Volume of one physical cell, `dxⁿ`.
    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(self.dim() as i32)
    }

    pub fn total_points(&self) -> usize {
        self.inner.total
    }

    /// Largest frequency magnitude on the lattice, attained at the corner `k = (-N/2, …)`.
    pub fn max_frequency(&self) -> f64 {
        *self.inner.shells.last().expect("non-empty")
    }

    /// Distinct frequency magnitudes, ascending; `shells()[0] == 0`.
    pub fn shells(&self) -> &[f64] {
        &self.inner.shells
    }

    /// Index into [`Grid::shells`] for every mode, in storage order.
    pub fn shell_indices(&self) -> &[u32] {
        &self.inner.shell_of
    }

    pub fn xi_magnitude(&self, flat: usize) -> f64 {
        self.inner.shells[self.inner.shell_of[flat] as usize]
    }

    /// Integer wavenumber vector of a mode.
    pub fn wavenumbers(&self, flat: usize) -> Vec<i64> {
        self.multi_index(flat)
            .into_iter()
            .map(|i| wavenumber(i, self.points()))
            .collect()
    }

    /// Storage index of the mode with integer wavenumbers `k`.
    pub fn mode_index(&self, k: &[i64]) -> Option<usize> {
        if k.len() != self.dim() {
            return None;
        }
        let n = self.points() as i64;
        let mut flat = 0usize;
        for &ka in k {
            if ka < -n / 2 || ka >= n / 2 {
                return None;
            }
            let i = if ka < 0 { ka + n } else { ka } as usize;
            flat = flat * self.points() + i;
        }
        Some(flat)
    }

    /// Index of the mode `-k` for the mode stored at `flat`.
    pub fn conjugate_index(&self, flat: usize) -> usize {
        self.inner.conj[flat] as usize
    }

    /// Physical coordinates of a lattice point.
    pub fn coordinates(&self, flat: usize) -> Vec<f64> {
        let dx = self.dx();
        self.multi_index(flat)
            .into_iter()
            .map(|i| -self.half_width() + i as f64 * dx)
            .collect()
    }

    pub fn radius(&self, flat: usize) -> f64 {
        self.coordinates(flat).iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Samples `f` at every lattice point.
    pub fn sample<F: Fn(&[f64]) -> f64>(&self, f: F) -> Vec<f64> {
        let dx = self.dx();
        let l = self.half_width();
        let mut idx = vec![0usize; self.dim()];
        let mut x = vec![0.0; self.dim()];
        let mut out = Vec::with_capacity(self.total_points());
        for _ in 0..self.total_points() {
            for (xa, &ia) in x.iter_mut().zip(&idx) {
                *xa = -l + ia as f64 * dx;
            }
            out.push(f(&x));
            increment(&mut idx, self.points());
        }
        out
    }

    /// Samples a radial function `g(|x|)`.
    pub fn sample_radial<F: Fn(f64) -> f64>(&self, g: F) -> Vec<f64> {
        self.sample(|x| g(x.iter().map(|v| v * v).sum::<f64>().sqrt()))
    }

    /// Same box refined by `factor` points per axis.
    pub fn refined(&self, factor: usize) -> Result<Grid> {
        Grid::new(self.dim(), self.points() * factor, self.half_width())
    }

    fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let n = self.points();
        let mut idx = vec![0usize; self.dim()];
        for slot in idx.iter_mut().rev() {
            *slot = flat % n;
            flat /= n;
        }
        idx
    }

    /// Physical samples to spectral coefficients.
    pub fn forward(&self, samples: &[f64]) -> Result<SpectralField> {
        self.check_len(samples.len())?;
        let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform_all_axes(&mut buf, true);
        let scale = (2.0 * self.half_width()).powf(self.dim() as f64 / 2.0)
            / self.total_points() as f64;
        for (c, &odd) in buf.iter_mut().zip(&self.inner.odd) {
            *c *= if odd { -scale } else { scale };
        }
        Ok(SpectralField {
            grid: self.clone(),
            coeffs: buf,
        })
    }

    /// Spectral coefficients to complex physical samples.
    pub fn inverse_complex(&self, field: &SpectralField) -> Result<Vec<Complex64>> {
        self.check_len(field.coeffs.len())?;
        let scale = (2.0 * self.half_width()).powf(-(self.dim() as f64) / 2.0);
        let mut buf: Vec<Complex64> = field
            .coeffs
            .iter()
            .zip(&self.inner.odd)
            .map(|(&c, &odd)| c * if odd { -scale } else { scale })
            .collect();
        self.transform_all_axes(&mut buf, false);
        Ok(buf)
    }

    /// Spectral coefficients to real physical samples (imaginary parts dropped).
    pub fn inverse(&self, field: &SpectralField) -> Result<Vec<f64>> {
        Ok(self.inverse_complex(field)?.into_iter().map(|c| c.re).collect())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.total_points() {
            return Err(Error::ShapeMismatch {
                expected: self.total_points(),
                actual: len,
            });
        }
        Ok(())
    }

    fn transform_all_axes(&self, buf: &mut [Complex64], forward: bool) {
        let fft = if forward {
            &self.inner.forward
        } else {
            &self.inner.inverse
        };
        let n = self.points();
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        // Last axis is contiguous.
        fft.process_with_scratch(buf, &mut scratch);
        let mut line = vec![Complex64::default(); n];
        let mut stride = n;
        for _ in 1..self.dim() {
            let block = stride * n;
            for start in (0..buf.len()).step_by(block) {
                for offset in 0..stride {
                    let base = start + offset;
                    for (j, slot) in line.iter_mut().enumerate() {
                        *slot = buf[base + j * stride];
                    }
                    fft.process_with_scratch(&mut line, &mut scratch);
                    for (j, v) in line.iter().enumerate() {
                        buf[base + j * stride] = *v;
                    }
                }
            }
            stride = block;
        }
    }
}

fn wavenumber(i: usize, points: usize) -> i64 {
    if i < points / 2 {
        i as i64
    } else {
        i as i64 - points as i64
    }
}

fn increment(idx: &mut [usize], n: usize) {
    for slot in idx.iter_mut().rev() {
        *slot += 1;
        if *slot < n {
            return;
        }
        *slot = 0;
    }
}

/// Fourier coefficients of a field on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            coeffs: vec![Complex64::default(); grid.total_points()],
        }
    }

    pub fn from_coeffs(grid: &Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        grid.check_len(coeffs.len())?;
        Ok(Self {
            grid: grid.clone(),
            coeffs,
        })
    }

    /// Builds coefficients from samples of the continuum transform, `f̂(ξ_k)`.
    pub fn from_continuum<F: Fn(&[f64]) -> Complex64>(grid: &Grid, fhat: F) -> Self {
        let to_coeff = grid.frequency_spacing().powf(grid.dim() as f64 / 2.0);
        let h = grid.frequency_spacing();
        let coeffs = (0..grid.total_points())
            .map(|flat| {
                let xi: Vec<f64> = grid.wavenumbers(flat).iter().map(|&k| h * k as f64).collect();
                fhat(&xi) * to_coeff
            })
            .collect();
        Self {
            grid: grid.clone(),
            coeffs,
        }
    }

    /// Radial, real continuum transform `f̂(ξ) = g(|ξ|)`.
    pub fn from_radial_continuum<F: Fn(f64) -> f64>(grid: &Grid, g: F) -> Self {
        let to_coeff = grid.frequency_spacing().powf(grid.dim() as f64 / 2.0);
        let table: Vec<f64> = grid.shells().iter().map(|&r| g(r) * to_coeff).collect();
        let coeffs = grid
            .shell_indices()
            .iter()
            .map(|&s| Complex64::new(table[s as usize], 0.0))
            .collect();
        Self {
            grid: grid.clone(),
            coeffs,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Continuum transform sample `f̂(ξ_k)` at storage index `flat`.
    pub fn continuum_value(&self, flat: usize) -> Complex64 {
        self.coeffs[flat] * self.continuum_factor()
    }

    fn continuum_factor(&self) -> f64 {
        (self.grid.half_width() / std::f64::consts::PI).powf(self.grid.dim() as f64 / 2.0)
    }

    pub fn zero_mode(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            coeffs: self.coeffs.iter().map(|&z| z * c).collect(),
        }
    }

    /// Multiplies every mode by `m(|ξ|)`, evaluated once per shell.
    pub fn apply_radial_multiplier<F: Fn(f64) -> f64>(&self, m: F) -> Self {
        let table: Vec<f64> = self.grid.shells().iter().map(|&r| m(r)).collect();
        let coeffs = self
            .coeffs
            .iter()
            .zip(self.grid.shell_indices())
            .map(|(&c, &s)| c * table[s as usize])
            .collect();
        Self {
            grid: self.grid.clone(),
            coeffs,
        }
    }

    /// Largest `|c_k - conj(c_{-k})|` over all modes.
    pub fn max_conjugate_asymmetry(&self) -> f64 {
        (0..self.coeffs.len())
            .map(|i| (self.coeffs[i] - self.coeffs[self.grid.conjugate_index(i)].conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Projects onto conjugate-symmetric coefficients; returns the asymmetry removed.
    pub fn symmetrize(&mut self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.coeffs.len() {
            let j = self.grid.conjugate_index(i);
            if j < i {
                continue;
            }
            let a = self.coeffs[i];
            let b = self.coeffs[j];
            worst = worst.max((a - b.conj()).norm());
            let avg = (a + b.conj()) * 0.5;
            self.coeffs[i] = avg;
            self.coeffs[j] = avg.conj();
        }
        worst
    }

    /// L² norm, converging to the continuum `‖f‖_{L²(ℝⁿ)}`.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `Ḣ^s` (`homogeneous`) or `H^s` norm.
    ///
    /// For homogeneous weights the zero mode contributes nothing when `s > 0`;
    /// when `s < 0` it must vanish, otherwise the norm is infinite and an
    /// [`Error::InfiniteNorm`] is returned.
    pub fn sobolev_norm(&self, s: f64, homogeneous: bool) -> Result<f64> {
        if s == 0.0 {
            return Ok(self.l2_norm());
        }
        if homogeneous && s < 0.0 && self.coeffs[0].norm() != 0.0 {
            return Err(Error::InfiniteNorm(format!(
                "homogeneous norm of order {s} with nonzero zero mode"
            )));
        }
        let weights: Vec<f64> = self
            .grid
            .shells()
            .iter()
            .map(|&r| {
                if homogeneous {
                    if r == 0.0 {
                        0.0
                    } else {
                        r.powf(2.0 * s)
                    }
                } else {
                    (1.0 + r * r).powf(s)
                }
            })
            .collect();
        Ok(self
            .coeffs
            .iter()
            .zip(self.grid.shell_indices())
            .map(|(c, &sh)| weights[sh as usize] * c.norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// `sup_k |ξ_k|^q |f̂(ξ_k)|` over the lattice, with `f̂` the continuum sample.
    ///
    /// For `q > 0` the zero mode contributes nothing; for `q = 0` it contributes `|f̂(0)|`.
    pub fn pseudo_measure_norm(&self, q: f64) -> Result<f64> {
        if !(q >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "pseudo-measure index must be >= 0, got {q}"
            )));
        }
        let shells = self.grid.shells();
        let factor = self.continuum_factor();
        let mut best = 0.0f64;
        for (c, &sh) in self.coeffs.iter().zip(self.grid.shell_indices()) {
            let r = shells[sh as usize];
            let w = if r == 0.0 {
                if q == 0.0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                r.powf(q)
            };
            best = best.max(w * c.norm() * factor);
        }
        Ok(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn grid_arithmetic() {
        let g = Grid::new(1, 8, PI).unwrap();
        assert!((g.dx() - PI / 4.0).abs() < 1e-15);
        assert!((g.frequency_spacing() - 1.0).abs() < 1e-15);
        let ks: Vec<i64> = (0..8).map(|i| g.wavenumbers(i)[0]).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, -4, -3, -2, -1]);

        let g = Grid::new(2, 4, 1.0).unwrap();
        assert_eq!(g.total_points(), 16);
        assert!((g.frequency_spacing() - PI).abs() < 1e-15);

        let g = Grid::new(1, 4096, 512.0).unwrap();
        assert_eq!(g.dx(), 0.25);
        assert!((g.max_frequency() - 4.0 * PI).abs() < 1e-12);
        assert_eq!(g.dx() * g.points() as f64, 2.0 * g.half_width());
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert!(Grid::new(1, 7, 1.0).is_err());
        assert!(Grid::new(0, 8, 1.0).is_err());
        assert!(Grid::new(5, 8, 1.0).is_err());
        assert!(Grid::new(1, 8, 0.0).is_err());
        assert!(Grid::new(1, 2, 1.0).is_err());
        // 2^8 per axis in 4D is 2^32 points.
        assert!(matches!(Grid::new(4, 256, 1.0), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn frequency_magnitude_symmetric() {
        let g = Grid::new(2, 8, 3.0).unwrap();
        for i in 0..g.total_points() {
            let j = g.conjugate_index(i);
            assert_eq!(g.xi_magnitude(i), g.xi_magnitude(j));
            let k: Vec<i64> = g.wavenumbers(i);
            if k.iter().all(|&v| v != -4) {
                let neg: Vec<i64> = k.iter().map(|v| -v).collect();
                assert_eq!(g.mode_index(&neg), Some(j));
            }
        }
    }

    #[test]
    fn constant_field_only_zero_mode() {
        let g = Grid::new(2, 8, 2.0).unwrap();
        let f = g.forward(&vec![1.0; 64]).unwrap();
        let expected = (4.0f64).powf(1.0); // mean 1 times (2L)^{n/2}
        assert!((f.zero_mode().re - expected).abs() < 1e-12);
        for c in &f.coeffs()[1..] {
            assert!(c.norm() < 1e-13);
        }
    }

    #[test]
    fn cosine_two_modes() {
        let l = 5.0;
        let g = Grid::new(1, 32, l).unwrap();
        let f = g.forward(&g.sample(|x| (PI * x[0] / l).cos())).unwrap();
        let plus = g.mode_index(&[1]).unwrap();
        let minus = g.mode_index(&[-1]).unwrap();
        for (i, c) in f.coeffs().iter().enumerate() {
            if i == plus || i == minus {
                assert!(c.norm() > 0.1);
            } else {
                assert!(c.norm() < 1e-13, "mode {i}: {c}");
            }
        }
        assert!((f.coeffs()[plus].norm() - f.coeffs()[minus].norm()).abs() < 1e-14);
    }

    #[test]
    fn round_trip_and_parseval() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (dim, n) in [(1, 64), (2, 16), (3, 8), (4, 4)] {
            let g = Grid::new(dim, n, 3.7).unwrap();
            let data: Vec<f64> = (0..g.total_points()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let f = g.forward(&data).unwrap();
            assert!(f.max_conjugate_asymmetry() < 1e-12);
            let back = g.inverse(&f).unwrap();
            let scale = data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let err = data
                .iter()
                .zip(&back)
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(err <= 1e-12 * scale, "dim {dim}: {err}");
            let quad = (data.iter().map(|v| v * v).sum::<f64>() * g.cell_volume()).sqrt();
            assert!((f.l2_norm() - quad).abs() <= 1e-10 * quad);
        }
    }

    #[test]
    fn shape_mismatch_rejected() {
        let g = Grid::new(1, 8, 1.0).unwrap();
        assert!(matches!(g.forward(&[0.0; 7]), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn l2_examples() {
        let g = Grid::new(1, 16, PI).unwrap();
        assert_eq!(SpectralField::zeros(&g).l2_norm(), 0.0);
        let mut f = SpectralField::zeros(&g);
        f.coeffs_mut()[g.mode_index(&[3]).unwrap()] = Complex64::new(1.0, 0.0);
        assert!((f.l2_norm() - 1.0).abs() < 1e-15);

        // ‖e^{-x²/2}‖ = π^{1/4}.
        let g = Grid::new(1, 4096, 40.0).unwrap();
        let f = g.forward(&g.sample(|x| (-x[0] * x[0] / 2.0).exp())).unwrap();
        assert!((f.l2_norm() - PI.powf(0.25)).abs() < 1e-10);
        // The continuum transform of the Gaussian is itself.
        let zero = f.continuum_value(0);
        assert!((zero.re - 1.0).abs() < 1e-10 && zero.im.abs() < 1e-12);
    }

    #[test]
    fn sobolev_examples() {
        let g = Grid::new(1, 16, PI).unwrap();
        let mut f = SpectralField::zeros(&g);
        f.coeffs_mut()[g.mode_index(&[2]).unwrap()] = Complex64::new(1.0, 0.0);
        assert_eq!(f.sobolev_norm(0.0, true).unwrap(), f.l2_norm());
        assert!((f.sobolev_norm(1.0, true).unwrap() - 2.0).abs() < 1e-14);
        assert!((f.sobolev_norm(1.0, false).unwrap() - 5f64.sqrt()).abs() < 1e-14);

        let mut z = SpectralField::zeros(&g);
        z.coeffs_mut()[0] = Complex64::new(1.0, 0.0);
        assert!(matches!(z.sobolev_norm(-1.0, true), Err(Error::InfiniteNorm(_))));
        assert!(z.sobolev_norm(-1.0, false).is_ok());
        assert_eq!(z.sobolev_norm(1.0, true).unwrap(), 0.0);
    }

    #[test]
    fn pseudo_measure_examples() {
        let g = Grid::new(2, 32, 10.0).unwrap();
        let band = SpectralField::from_radial_continuum(&g, |r| if r <= 1.0 { 1.0 } else { 0.0 });
        let v = band.pseudo_measure_norm(0.5).unwrap();
        // Largest lattice radius inside the unit disc.
        let rmax = g.shells().iter().copied().filter(|&r| r <= 1.0).fold(0.0, f64::max);
        assert!((v - rmax.sqrt()).abs() < 1e-12);
        let exact = SpectralField::from_radial_continuum(&g, |r| if (0.5..=2.0).contains(&r) {
            r.powf(-0.3)
        } else {
            0.0
        });
        assert!((exact.pseudo_measure_norm(0.3).unwrap() - 1.0).abs() < 1e-12);
        assert!((band.scaled(-3.0).pseudo_measure_norm(0.5).unwrap() - 3.0 * v).abs() < 1e-12);
        assert!(band.pseudo_measure_norm(-0.1).is_err());
        // q = 0 includes the zero mode.
        assert!((band.pseudo_measure_norm(0.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unit_disc_on_matching_lattice() {
        // With L = π the lattice spacing is 1 and the sup is attained exactly at |ξ| = 1.
        let g = Grid::new(1, 16, PI).unwrap();
        let band = SpectralField::from_radial_continuum(&g, |r| if r <= 1.0 { 1.0 } else { 0.0 });
        assert!((band.pseudo_measure_norm(0.5).unwrap() - 1.0).abs() < 1e-14);
    }
}
