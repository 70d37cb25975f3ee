//! Klein-Gordon solutions stored as mass-shell mode data.
//!
//! A solution is
//!
//! ```text
//! phi(x) = (2 pi)^{-d/2} sum_k w_k (u_k e^{-i k.x} + u*_k e^{i k.x}),   k.x = k0 t - k.x
//! ```
//!
//! with independent `u_k`, `u*_k` (complexified solution space). Real solutions
//! satisfy `u*_k = conj(u_k)`. Time only enters through evaluation, so
//! evolution is exact.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{mode_sum_jet, FieldJet, SpacetimeField};
use crate::lattice::{LatticeConfig, ModeLattice};

const REALITY_TOL: f64 = 1e-12;
const BAND_LIMIT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    lat: Arc<ModeLattice>,
    u: Vec<Complex64>,
    ustar: Vec<Complex64>,
    real_flag: bool,
}

impl Solution {
    pub fn from_modes(
        lat: Arc<ModeLattice>,
        u: Vec<Complex64>,
        ustar: Vec<Complex64>,
        real_flag: bool,
    ) -> Result<Self> {
        let m = lat.num_modes();
        for len in [u.len(), ustar.len()] {
            if len != m {
                return Err(Error::ShapeMismatch { expected: m, got: len });
            }
        }
        if real_flag {
            let scale = u.iter().map(|c| c.norm()).fold(1.0, f64::max);
            for (k, (a, b)) in u.iter().zip(&ustar).enumerate() {
                let defect = (b - a.conj()).norm();
                if defect > REALITY_TOL * scale {
                    return Err(Error::RealityViolation { mode: k, defect });
                }
            }
        }
        Ok(Solution { lat, u, ustar, real_flag })
    }

    /// Real solution with `u*_k = conj(u_k)`.
    pub fn real(lat: Arc<ModeLattice>, u: Vec<Complex64>) -> Result<Self> {
        let ustar = u.iter().map(|c| c.conj()).collect();
        Self::from_modes(lat, u, ustar, true)
    }

    pub fn zero(lat: Arc<ModeLattice>) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); lat.num_modes()];
        Solution { lat, u: z.clone(), ustar: z, real_flag: true }
    }

    /// Complex solution with a single nonzero coefficient pair on `mode`.
    pub fn single_mode(lat: Arc<ModeLattice>, mode: usize, u: Complex64, ustar: Complex64) -> Self {
        let mut s = Self::zero(lat);
        s.u[mode] = u;
        s.ustar[mode] = ustar;
        s.real_flag = (ustar - u.conj()).norm() == 0.0;
        s
    }

    /// The plane wave `e^{i k.x}` of `mode` (a pure `u*` coefficient).
    pub fn plane_wave(lat: Arc<ModeLattice>, mode: usize) -> Self {
        let c = 1.0 / (lat.fourier_norm() * lat.weight(mode));
        Self::single_mode(lat, mode, Complex64::new(0.0, 0.0), Complex64::new(c, 0.0))
    }

    /// Solution with Cauchy data `(phi0, pi0) = (phi, d_t phi)` at `t = 0`.
    ///
    /// `u_k = i pi0^(k) + k0 phi0^(k)` and `u*_k = -i pi0^(-k) + k0 phi0^(-k)`.
    pub fn from_cauchy(lat: Arc<ModeLattice>, phi0: &[f64], pi0: &[f64]) -> Result<Self> {
        let phi: Vec<Complex64> = phi0.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let pi: Vec<Complex64> = pi0.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let mut sol = Self::from_cauchy_complex(lat, &phi, &pi)?;
        // conjugacy holds to roundoff; make it exact
        sol.ustar = sol.u.iter().map(|c| c.conj()).collect();
        sol.real_flag = true;
        Ok(sol)
    }

    pub fn from_cauchy_complex(
        lat: Arc<ModeLattice>,
        phi0: &[Complex64],
        pi0: &[Complex64],
    ) -> Result<Self> {
        for grid in [phi0, pi0] {
            let fraction = lat.band_limit_defect(grid)?;
            if fraction > BAND_LIMIT_TOL {
                return Err(Error::NotBandLimited { fraction });
            }
        }
        let phi_hat = lat.dft_forward(phi0)?;
        let pi_hat = lat.dft_forward(pi0)?;
        let i = Complex64::i();
        let m = lat.num_modes();
        let u = (0..m).map(|k| i * pi_hat[k] + lat.k0(k) * phi_hat[k]).collect();
        let ustar = (0..m)
            .map(|k| {
                let kb = lat.neg_mode(k);
                -i * pi_hat[kb] + lat.k0(k) * phi_hat[kb]
            })
            .collect();
        Ok(Solution { lat, u, ustar, real_flag: false })
    }

    pub fn lattice_arc(&self) -> &Arc<ModeLattice> {
        &self.lat
    }
    pub fn u(&self) -> &[Complex64] {
        &self.u
    }
    pub fn ustar(&self) -> &[Complex64] {
        &self.ustar
    }
    pub fn is_real(&self) -> bool {
        self.real_flag
    }

    /// Re-based solution whose `t = 0` slice is this solution's slice at time `t`.
    pub fn evolve_exact(&self, t: f64) -> Solution {
        let u = self
            .u
            .iter()
            .enumerate()
            .map(|(k, c)| c * Complex64::from_polar(1.0, -self.lat.k0(k) * t))
            .collect();
        let ustar = self
            .ustar
            .iter()
            .enumerate()
            .map(|(k, c)| c * Complex64::from_polar(1.0, self.lat.k0(k) * t))
            .collect();
        Solution { lat: self.lat.clone(), u, ustar, real_flag: self.real_flag }
    }

    /// `d_mu phi`, again a solution.
    pub fn derivative(&self, mu: usize) -> Solution {
        let k_lower: Vec<Vec<f64>> = (0..self.lat.num_modes()).map(|k| self.lat.k_lower(k)).collect();
        let i = Complex64::i();
        let u = self.u.iter().zip(&k_lower).map(|(c, kl)| -i * kl[mu] * c).collect();
        let ustar = self.ustar.iter().zip(&k_lower).map(|(c, kl)| i * kl[mu] * c).collect();
        Solution { lat: self.lat.clone(), u, ustar, real_flag: self.real_flag }
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: Complex64, other: &Solution, b: Complex64) -> Solution {
        let mix = |x: &[Complex64], y: &[Complex64]| -> Vec<Complex64> {
            x.iter().zip(y).map(|(x, y)| a * x + b * y).collect()
        };
        let real = self.real_flag && other.real_flag && a.im == 0.0 && b.im == 0.0;
        Solution {
            lat: self.lat.clone(),
            u: mix(&self.u, &other.u),
            ustar: mix(&self.ustar, &other.ustar),
            real_flag: real,
        }
    }

    pub fn scale(&self, a: f64) -> Solution {
        let z = Solution::zero(self.lat.clone());
        self.combine(Complex64::new(a, 0.0), &z, Complex64::new(0.0, 0.0))
    }

    /// Slice data at time `t`.
    pub fn evaluate_fields(&self, t: f64) -> SliceData {
        SliceData::from_jet(&self.jet(t), self.lat.mass())
    }

    pub fn to_file(&self) -> SolutionFile {
        let pairs = |v: &[Complex64]| v.iter().map(|c| [c.re, c.im]).collect();
        SolutionFile {
            lattice: self.lat.config().clone(),
            u: pairs(&self.u),
            ustar: pairs(&self.ustar),
            real_flag: self.real_flag,
        }
    }

    pub fn from_file(file: &SolutionFile) -> Result<Self> {
        let lat = Arc::new(file.lattice.build()?);
        let unpack = |v: &[[f64; 2]]| v.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        Self::from_modes(lat, unpack(&file.u), unpack(&file.ustar), file.real_flag)
    }
}

impl SpacetimeField for Solution {
    fn lattice(&self) -> &ModeLattice {
        &self.lat
    }
    fn jet(&self, t: f64) -> FieldJet {
        let freq: Vec<f64> = (0..self.lat.num_modes()).map(|k| self.lat.k0(k)).collect();
        mode_sum_jet(&self.lat, &self.u, &self.ustar, &freq, t)
    }
}

/// JSON form of a solution: `{lattice, u: [[re, im], ...], ustar: [...], real_flag}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub lattice: LatticeConfig,
    pub u: Vec<[f64; 2]>,
    pub ustar: Vec<[f64; 2]>,
    pub real_flag: bool,
}

/// Fields of the Hamiltonian n-curve over a constant-time slice.
///
/// `dphi[mu]` and `p[mu]` are indexed by spacetime direction (0 = time).
#[derive(Debug, Clone, PartialEq)]
pub struct SliceData {
    pub t: f64,
    pub phi: Vec<Complex64>,
    pub dphi: Vec<Vec<Complex64>>,
    pub p: Vec<Vec<Complex64>>,
    pub e: Vec<Complex64>,
}

impl SliceData {
    /// Lift a field jet to the n-curve: `p^mu = eta^{mu nu} d_nu phi` and
    /// `e = -1/2 eta^{mu nu} d_mu phi d_nu phi - 1/2 m^2 phi^2`.
    pub fn from_jet(jet: &FieldJet, mass: f64) -> Self {
        let p: Vec<Vec<Complex64>> = jet
            .grad
            .iter()
            .enumerate()
            .map(|(mu, g)| if mu == 0 { g.clone() } else { g.iter().map(|x| -x).collect() })
            .collect();
        let kinetic = jet.gradient_pairing(jet);
        let e = kinetic
            .iter()
            .zip(&jet.value)
            .map(|(k, v)| -0.5 * k - 0.5 * mass * mass * v * v)
            .collect();
        SliceData { t: jet.t, phi: jet.value.clone(), dphi: jet.grad.clone(), p, e }
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    /// `H = e + 1/2 eta_{mu nu} p^mu p^nu + 1/2 m^2 phi^2` at each grid point.
    pub fn hamiltonian_density(&self, mass: f64) -> Vec<Complex64> {
        (0..self.len())
            .map(|j| {
                let mut pp = self.p[0][j] * self.p[0][j];
                for mu in 1..self.p.len() {
                    pp -= self.p[mu][j] * self.p[mu][j];
                }
                self.e[j] + 0.5 * pp + 0.5 * mass * mass * self.phi[j] * self.phi[j]
            })
            .collect()
    }

    /// `(phi, pi)` as real grids, taking real parts.
    pub fn cauchy_real(&self) -> (Vec<f64>, Vec<f64>) {
        (self.phi.iter().map(|c| c.re).collect(), self.dphi[0].iter().map(|c| c.re).collect())
    }
}
