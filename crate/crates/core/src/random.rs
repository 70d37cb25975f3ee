//! Seeded generators for random solutions, mode functions and polarized states.
//!
//! Random solutions carry a Gaussian spectral envelope `exp(-|n|^2 / (2 s^2))`
//! so that time quadratures of their quadratic functionals converge quickly.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lattice::ModeLattice;
use crate::solution::Solution;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform complex number in the unit square `[-1, 1] x [-1, 1]`.
pub fn complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn complex_vec<R: Rng>(rng: &mut R, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| complex(rng)).collect()
}

/// Default spectral width, in units of the integer mode label.
pub fn default_width(lat: &ModeLattice) -> f64 {
    (lat.n_max() as f64 / 2.5).max(1.0)
}

fn envelope(lat: &ModeLattice, k: usize, width: f64) -> f64 {
    let n2: f64 = lat.mode(k).iter().map(|&n| (n * n) as f64).sum();
    (-n2 / (2.0 * width * width)).exp()
}

/// Random real solution with the default spectral envelope.
pub fn real_solution<R: Rng>(lat: &Arc<ModeLattice>, rng: &mut R) -> Solution {
    real_solution_with_width(lat, rng, default_width(lat))
}

pub fn real_solution_with_width<R: Rng>(lat: &Arc<ModeLattice>, rng: &mut R, width: f64) -> Solution {
    let u = (0..lat.num_modes()).map(|k| complex(rng) * envelope(lat, k, width)).collect();
    Solution::real(lat.clone(), u).expect("conjugate coefficients by construction")
}

/// Random complexified solution (independent `u`, `u*`).
pub fn complex_solution<R: Rng>(lat: &Arc<ModeLattice>, rng: &mut R) -> Solution {
    let w = default_width(lat);
    let m = lat.num_modes();
    let u = (0..m).map(|k| complex(rng) * envelope(lat, k, w)).collect();
    let ustar = (0..m).map(|k| complex(rng) * envelope(lat, k, w)).collect();
    Solution::from_modes(lat.clone(), u, ustar, false).expect("lengths match the lattice")
}

/// Random smearing function over the mode set.
pub fn mode_function<R: Rng>(lat: &ModeLattice, rng: &mut R) -> Vec<Complex64> {
    complex_vec(rng, lat.num_modes())
}
