//! Grid-space time stepping: an independent leapfrog oracle for the Klein-Gordon
//! equation, energies, and the finite-difference residual on sampled data.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::ModeLattice;
use crate::solution::SliceData;

/// Real Cauchy data `(phi, pi = d_t phi)` on the grid at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    pub t: f64,
    pub phi: Vec<f64>,
    pub pi: Vec<f64>,
}

fn to_complex(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

/// `(Laplacian - m^2) phi`, spectrally.
fn force(lat: &ModeLattice, phi: &[f64]) -> Result<Vec<f64>> {
    let lap = lat.laplacian(&to_complex(phi))?;
    let m2 = lat.mass().powi(2);
    Ok(lap.iter().zip(phi).map(|(l, p)| l.re - m2 * p).collect())
}

/// Kick-drift-kick integration of `phi_tt = Laplacian phi - m^2 phi`.
pub fn leapfrog_evolve(
    lat: &ModeLattice,
    phi0: &[f64],
    pi0: &[f64],
    dt: f64,
    steps: usize,
) -> Result<GridState> {
    let mut out = None;
    leapfrog_trajectory(lat, phi0, pi0, dt, steps, |s| out = Some(s.clone()))?;
    Ok(out.expect("trajectory visits the final state"))
}

/// Like [`leapfrog_evolve`] but hands every state (including the initial one) to `visit`.
pub fn leapfrog_trajectory<F: FnMut(&GridState)>(
    lat: &ModeLattice,
    phi0: &[f64],
    pi0: &[f64],
    dt: f64,
    steps: usize,
    mut visit: F,
) -> Result<()> {
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
    }
    let max_k0 = lat.max_k0();
    if dt * max_k0 >= 2.0 {
        return Err(Error::Unstable { dt, max_k0 });
    }
    for v in [phi0, pi0] {
        if v.len() != lat.grid_len() {
            return Err(Error::ShapeMismatch { expected: lat.grid_len(), got: v.len() });
        }
    }
    let mut state = GridState { t: 0.0, phi: phi0.to_vec(), pi: pi0.to_vec() };
    visit(&state);
    let mut acc = force(lat, &state.phi)?;
    for step in 1..=steps {
        for (p, a) in state.pi.iter_mut().zip(&acc) {
            *p += 0.5 * dt * a;
        }
        for (q, p) in state.phi.iter_mut().zip(&state.pi) {
            *q += dt * p;
        }
        acc = force(lat, &state.phi)?;
        for (p, a) in state.pi.iter_mut().zip(&acc) {
            *p += 0.5 * dt * a;
        }
        state.t = step as f64 * dt;
        visit(&state);
    }
    Ok(())
}

/// Slice data built from real Cauchy data, with spectral spatial derivatives.
pub fn slice_from_cauchy(lat: &ModeLattice, t: f64, phi: &[f64], pi: &[f64]) -> Result<SliceData> {
    let phi_c = to_complex(phi);
    let mut jet = crate::field::FieldJet::zeros(lat.dim(), lat.grid_len(), t);
    jet.value = phi_c.clone();
    jet.grad[0] = to_complex(pi);
    for a in 0..lat.dim() {
        jet.grad[a + 1] = lat.spatial_derivative(&phi_c, a)?;
    }
    Ok(SliceData::from_jet(&jet, lat.mass()))
}

/// `int (pi^2 + |grad phi|^2 + m^2 phi^2) / 2` for real band-limited data.
pub fn energy(lat: &ModeLattice, phi: &[f64], pi: &[f64]) -> Result<f64> {
    let phi_c = to_complex(phi);
    let a = lat.laplacian(&phi_c)?;
    let m2 = lat.mass().powi(2);
    // int |grad phi|^2 = -int phi Laplacian phi on the torus
    let density: Vec<Complex64> = (0..phi.len())
        .map(|j| Complex64::new(0.5 * (pi[j] * pi[j] - phi[j] * a[j].re + m2 * phi[j] * phi[j]), 0.0))
        .collect();
    Ok(lat.integrate(&density).re)
}

/// Energy conserved exactly (to roundoff) by kick-drift-kick stepping with step `dt`:
/// `E - dt^2/8 int ((-Laplacian + m^2) phi)^2`.
pub fn leapfrog_shadow_energy(lat: &ModeLattice, phi: &[f64], pi: &[f64], dt: f64) -> Result<f64> {
    let f = force(lat, phi)?;
    let corr: Vec<Complex64> = f.iter().map(|x| Complex64::new(x * x, 0.0)).collect();
    Ok(energy(lat, phi, pi)? - dt * dt / 8.0 * lat.integrate(&corr).re)
}

/// Max-norm of `phi_tt - Laplacian phi + m^2 phi` on equally spaced time samples,
/// with centered differences in time and a spectral Laplacian. Interior samples only.
pub fn kg_residual_grid(lat: &ModeLattice, samples: &[Vec<f64>], dt: f64) -> Result<f64> {
    if samples.len() < 3 {
        return Err(Error::InvalidArgument("need at least 3 time samples".into()));
    }
    let m2 = lat.mass().powi(2);
    let mut worst = 0.0f64;
    for w in samples.windows(3) {
        let lap = lat.laplacian(&to_complex(&w[1]))?;
        for j in 0..w[1].len() {
            let tt = (w[2][j] - 2.0 * w[1][j] + w[0][j]) / (dt * dt);
            worst = worst.max((tt - lap[j].re + m2 * w[1][j]).abs());
        }
    }
    Ok(worst)
}
