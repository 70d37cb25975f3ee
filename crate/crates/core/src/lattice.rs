//! Periodic box, grid and truncated mass-shell mode set.
//!
//! Conventions fixed here are used by every other module:
//!
//! * grid points `x_j = j L / N` per axis, flattened row-major (first axis slowest);
//! * modes `k = (2 pi / L) n` with `|n_i| <= n_max`, ordered lexicographically in `n`;
//! * continuum dispersion `k0 = sqrt(m^2 + |k|^2)`;
//! * momentum-space weights `w_k = (2 pi / L)^d / (2 k0)`, the lattice stand-in for
//!   the invariant measure `dk / (2 k0)` on the positive mass shell.
//!
//! Spatial integrals are grid sums `(L/N)^d sum_j`, exact for integrands whose
//! spectrum stays below `N/2`, which `2 n_max + 1 <= N` guarantees for every
//! product of two band-limited fields.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// User-facing lattice parameters, read from JSON with keys `d, L, N, n_max, m, hbar`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeConfig {
    pub d: usize,
    #[serde(rename = "L")]
    pub length: f64,
    #[serde(rename = "N")]
    pub points: usize,
    pub n_max: usize,
    pub m: f64,
    #[serde(default = "default_hbar")]
    pub hbar: f64,
}

fn default_hbar() -> f64 {
    1.0
}

impl Default for LatticeConfig {
    fn default() -> Self {
        LatticeConfig { d: 1, length: 2.0 * PI, points: 32, n_max: 7, m: 1.0, hbar: 1.0 }
    }
}

impl LatticeConfig {
    pub fn new(d: usize, length: f64, points: usize, n_max: usize, m: f64, hbar: f64) -> Self {
        LatticeConfig { d, length, points, n_max, m, hbar }
    }

    pub fn build(&self) -> Result<ModeLattice> {
        ModeLattice::new(self.clone())
    }
}

/// Immutable discretization of space and of the positive mass shell.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeLattice {
    config: LatticeConfig,
    modes: Vec<Vec<i64>>,
    kvec: Vec<Vec<f64>>,
    k0: Vec<f64>,
    weight: Vec<f64>,
    // axis_phase[n + n_max][j] = exp(2 pi i n j / N)
    axis_phase: Vec<Vec<Complex64>>,
    grid_indices: Vec<Vec<usize>>,
    grid_len: usize,
}

impl ModeLattice {
    pub fn new(config: LatticeConfig) -> Result<Self> {
        let LatticeConfig { d, length, points, n_max, m, hbar } = config;
        if d == 0 {
            return Err(Error::InvalidLattice("spatial dimension must be at least 1".into()));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidLattice(format!("box length must be positive, got {length}")));
        }
        if points == 0 || points % 2 != 0 {
            return Err(Error::InvalidLattice(format!(
                "grid points per axis must be a positive even integer, got {points}"
            )));
        }
        if 2 * n_max + 1 > points {
            return Err(Error::InvalidLattice(format!(
                "aliasing: 2 * n_max + 1 = {} exceeds N = {points}",
                2 * n_max + 1
            )));
        }
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::InvalidLattice(format!("mass must be positive, got {m}")));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidLattice(format!("hbar must be positive, got {hbar}")));
        }
        let grid_len = points
            .checked_pow(d as u32)
            .ok_or_else(|| Error::InvalidLattice("grid too large".into()))?;

        let side = 2 * n_max + 1;
        let count = side.pow(d as u32);
        let dk = 2.0 * PI / length;
        let mut modes = Vec::with_capacity(count);
        for flat in 0..count {
            let mut n = vec![0i64; d];
            let mut rest = flat;
            for a in (0..d).rev() {
                n[a] = (rest % side) as i64 - n_max as i64;
                rest /= side;
            }
            modes.push(n);
        }
        let kvec: Vec<Vec<f64>> =
            modes.iter().map(|n| n.iter().map(|&ni| dk * ni as f64).collect()).collect();
        let k0: Vec<f64> =
            kvec.iter().map(|k| (m * m + k.iter().map(|x| x * x).sum::<f64>()).sqrt()).collect();
        let weight = k0.iter().map(|&w0| dk.powi(d as i32) / (2.0 * w0)).collect();

        let axis_phase = (-(n_max as i64)..=n_max as i64)
            .map(|n| {
                (0..points)
                    .map(|j| {
                        // reduce n*j mod N first so the phase argument stays small
                        let r = (n * j as i64).rem_euclid(points as i64) as f64;
                        Complex64::from_polar(1.0, 2.0 * PI * r / points as f64)
                    })
                    .collect()
            })
            .collect();

        let grid_indices = (0..grid_len)
            .map(|j| {
                let mut idx = vec![0; d];
                let mut rest = j;
                for a in (0..d).rev() {
                    idx[a] = rest % points;
                    rest /= points;
                }
                idx
            })
            .collect();

        Ok(ModeLattice { config, modes, kvec, k0, weight, axis_phase, grid_indices, grid_len })
    }

    pub fn config(&self) -> &LatticeConfig {
        &self.config
    }
    pub fn dim(&self) -> usize {
        self.config.d
    }
    pub fn length(&self) -> f64 {
        self.config.length
    }
    pub fn points(&self) -> usize {
        self.config.points
    }
    pub fn n_max(&self) -> usize {
        self.config.n_max
    }
    pub fn mass(&self) -> f64 {
        self.config.m
    }
    pub fn hbar(&self) -> f64 {
        self.config.hbar
    }
    pub fn num_modes(&self) -> usize {
        self.modes.len()
    }
    pub fn grid_len(&self) -> usize {
        self.grid_len
    }
    /// Integer label `n` of mode `i`.
    pub fn mode(&self, i: usize) -> &[i64] {
        &self.modes[i]
    }
    pub fn modes(&self) -> &[Vec<i64>] {
        &self.modes
    }
    /// Spatial wave vector of mode `i`.
    pub fn kvec(&self, i: usize) -> &[f64] {
        &self.kvec[i]
    }
    pub fn k0(&self, i: usize) -> f64 {
        self.k0[i]
    }
    pub fn weight(&self, i: usize) -> f64 {
        self.weight[i]
    }
    pub fn weights(&self) -> &[f64] {
        &self.weight
    }
    pub fn max_k0(&self) -> f64 {
        self.k0.iter().cloned().fold(0.0, f64::max)
    }

    /// Covariant components `k_mu = eta_{mu nu} k^nu = (k0, -k)` of mode `i`.
    pub fn k_lower(&self, i: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dim() + 1);
        out.push(self.k0[i]);
        out.extend(self.kvec[i].iter().map(|k| -k));
        out
    }

    /// Minkowski product `k . zeta` with `zeta` given by contravariant components.
    pub fn k_dot(&self, i: usize, zeta: &[f64]) -> f64 {
        self.k_lower(i).iter().zip(zeta).map(|(k, z)| k * z).sum()
    }

    /// Index of the mode with negated spatial part.
    pub fn neg_mode(&self, i: usize) -> usize {
        self.modes.len() - 1 - i
    }

    /// Index of the mode labelled `n`, if it lies inside the cutoff.
    pub fn mode_index(&self, n: &[i64]) -> Option<usize> {
        if n.len() != self.dim() {
            return None;
        }
        let side = 2 * self.n_max() as i64 + 1;
        let mut flat = 0i64;
        for &ni in n {
            if ni.unsigned_abs() as usize > self.n_max() {
                return None;
            }
            flat = flat * side + ni + self.n_max() as i64;
        }
        Some(flat as usize)
    }

    /// Grid cell volume `(L/N)^d`.
    pub fn cell_volume(&self) -> f64 {
        (self.length() / self.points() as f64).powi(self.dim() as i32)
    }

    /// Box volume `L^d`.
    pub fn volume(&self) -> f64 {
        self.length().powi(self.dim() as i32)
    }

    /// `(2 pi)^{-d/2}`.
    pub fn fourier_norm(&self) -> f64 {
        (2.0 * PI).powf(-(self.dim() as f64) / 2.0)
    }

    /// Multi-index of flat grid point `j`.
    pub fn grid_index(&self, j: usize) -> &[usize] {
        &self.grid_indices[j]
    }

    /// Coordinates of flat grid point `j`.
    pub fn grid_point(&self, j: usize) -> Vec<f64> {
        let h = self.length() / self.points() as f64;
        self.grid_index(j).iter().map(|&i| i as f64 * h).collect()
    }

    /// `exp(i k_mode . x_j)` from the per-axis tables.
    fn plane_wave(&self, mode: usize, grid: &[usize]) -> Complex64 {
        let off = self.n_max() as i64;
        self.modes[mode]
            .iter()
            .zip(grid)
            .map(|(&n, &j)| self.axis_phase[(n + off) as usize][j])
            .product()
    }

    /// Grid values of `sum_k coeffs[k] exp(i k . x)`.
    pub fn synthesize(&self, coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.num_modes(), coeffs.len())?;
        Ok(self
            .grid_indices
            .iter()
            .map(|g| {
                coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
                    .map(|(k, c)| c * self.plane_wave(k, g))
                    .sum()
            })
            .collect())
    }

    /// Projection coefficients `N^{-d} sum_j psi_j exp(-i k . x_j)`; the inverse of
    /// [`synthesize`](Self::synthesize) on band-limited data.
    pub fn analyze(&self, grid: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.grid_len, grid.len())?;
        let scale = 1.0 / self.grid_len as f64;
        Ok((0..self.num_modes())
            .map(|k| {
                let s: Complex64 = self
                    .grid_indices
                    .iter().zip(grid).map(|(g, v)| v * self.plane_wave(k, g).conj()).sum();
                s * scale
            })
            .collect())
    }

    /// Discrete hat transform `(2 pi)^{-d/2} (L/N)^d sum_j psi(x_j) exp(-i k . x_j)`.
    pub fn dft_forward(&self, grid: &[Complex64]) -> Result<Vec<Complex64>> {
        let scale = self.fourier_norm() * self.volume();
        Ok(self.analyze(grid)?.into_iter().map(|c| c * scale).collect())
    }

    pub fn dft_forward_real(&self, grid: &[f64]) -> Result<Vec<Complex64>> {
        let c: Vec<Complex64> = grid.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.dft_forward(&c)
    }

    /// Inverse of [`dft_forward`](Self::dft_forward).
    pub fn dft_inverse(&self, hat: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.num_modes(), hat.len())?;
        let scale = 1.0 / (self.fourier_norm() * self.volume());
        let coeffs: Vec<Complex64> = hat.iter().map(|c| c * scale).collect();
        self.synthesize(&coeffs)
    }

    /// Fraction of the mean-square weight of `grid` not captured by the lattice modes.
    pub fn band_limit_defect(&self, grid: &[Complex64]) -> Result<f64> {
        let total: f64 = grid.iter().map(|v| v.norm_sqr()).sum::<f64>() / self.grid_len as f64;
        if total == 0.0 {
            return Ok(0.0);
        }
        let captured: f64 = self.analyze(grid)?.iter().map(|c| c.norm_sqr()).sum();
        Ok(((total - captured) / total).max(0.0))
    }

    /// Spectral Laplacian of a band-limited grid field.
    pub fn laplacian(&self, grid: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut c = self.analyze(grid)?;
        for (k, ck) in c.iter_mut().enumerate() {
            let k2: f64 = self.kvec[k].iter().map(|x| x * x).sum();
            *ck *= -k2;
        }
        self.synthesize(&c)
    }

    /// Spectral derivative along spatial axis `axis` (0-based) of a band-limited grid field.
    pub fn spatial_derivative(&self, grid: &[Complex64], axis: usize) -> Result<Vec<Complex64>> {
        let mut c = self.analyze(grid)?;
        for (k, ck) in c.iter_mut().enumerate() {
            *ck *= Complex64::new(0.0, self.kvec[k][axis]);
        }
        self.synthesize(&c)
    }

    /// Grid quadrature `(L/N)^d sum_j values_j`.
    pub fn integrate(&self, values: &[Complex64]) -> Complex64 {
        values.iter().sum::<Complex64>() * self.cell_volume()
    }
}

/// `k0 = sqrt(m^2 + |k|^2)` for an arbitrary spatial wave vector.
pub fn dispersion(lat: &ModeLattice, kvec: &[f64]) -> f64 {
    (lat.mass().powi(2) + kvec.iter().map(|k| k * k).sum::<f64>()).sqrt()
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::ShapeMismatch { expected, got });
    }
    Ok(())
}
