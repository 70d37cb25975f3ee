//! Solution-level checks of the Hamilton system and of the action functional
//! `A = int_Gamma theta_lambda` between constant-time slices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{Combination, Enveloped, FieldJet, SpacetimeField};
use crate::lattice::ModeLattice;
use crate::quadrature::{linspace, simpson};
use crate::solution::{SliceData, Solution};

fn uniform_step(t_grid: &[f64]) -> Result<f64> {
    if t_grid.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 time points, got {}",
            t_grid.len()
        )));
    }
    let dt = t_grid[1] - t_grid[0];
    let uniform = t_grid.windows(2).all(|w| ((w[1] - w[0]) - dt).abs() <= 1e-9 * dt.abs().max(1.0));
    if !(dt > 0.0) || !uniform {
        return Err(Error::InvalidArgument("time grid must be increasing and uniform".into()));
    }
    Ok(dt)
}

/// Max-norm residual of the De Donder-Weyl system
///
/// ```text
/// d_mu phi = eta_{mu nu} p^nu,      d_mu p^mu = -m^2 phi
/// ```
///
/// over slices sampled at uniform times `dt` apart: time derivatives by centered
/// differences, space derivatives spectrally from the grid data. Interior slices only.
pub fn hamilton_residual_slices(lat: &ModeLattice, slices: &[SliceData], dt: f64) -> Result<f64> {
    if slices.len() < 3 {
        return Err(Error::InvalidArgument("need at least 3 slices".into()));
    }
    let d = lat.dim();
    let m2 = lat.mass().powi(2);
    let mut worst = 0.0f64;
    for w in slices.windows(3) {
        let (prev, cur, next) = (&w[0], &w[1], &w[2]);
        let mut div = vec![Complex64::new(0.0, 0.0); cur.len()];
        for a in 0..d {
            let dphi = lat.spatial_derivative(&cur.phi, a)?;
            let dp = lat.spatial_derivative(&cur.p[a + 1], a)?;
            for j in 0..cur.len() {
                // d_a phi = eta_{a a} p^a = -p^a
                worst = worst.max((dphi[j] + cur.p[a + 1][j]).norm());
                div[j] += dp[j];
            }
        }
        for j in 0..cur.len() {
            let phi_t = (next.phi[j] - prev.phi[j]) / (2.0 * dt);
            worst = worst.max((phi_t - cur.p[0][j]).norm());
            let p0_t = (next.p[0][j] - prev.p[0][j]) / (2.0 * dt);
            worst = worst.max((p0_t + div[j] + m2 * cur.phi[j]).norm());
        }
    }
    Ok(worst)
}

/// [`hamilton_residual_slices`] on the slices of `field` at the times of `t_grid`.
pub fn hamilton_residual<F: SpacetimeField + ?Sized>(field: &F, t_grid: &[f64]) -> Result<f64> {
    let dt = uniform_step(t_grid)?;
    let lat = field.lattice();
    let slices: Vec<SliceData> =
        t_grid.iter().map(|&t| SliceData::from_jet(&field.jet(t), lat.mass())).collect();
    hamilton_residual_slices(lat, &slices, dt)
}

/// Pullback of `theta_lambda` to the n-curve over one slice:
/// `e + lambda p^mu d_mu phi - (1 - lambda) phi d_mu p^mu`, with `p` and `e`
/// the Legendre lift of the jet.
pub fn action_density(jet: &FieldJet, mass: f64, lambda: f64) -> Vec<Complex64> {
    let kinetic = jet.gradient_pairing(jet);
    let div_p = jet.wave_operator();
    (0..jet.len())
        .map(|j| {
            let phi = jet.value[j];
            let e = -0.5 * kinetic[j] - 0.5 * mass * mass * phi * phi;
            // p^mu d_mu phi = eta^{mu nu} d_mu phi d_nu phi
            e + lambda * kinetic[j] - (1.0 - lambda) * phi * div_p[j]
        })
        .collect()
}

fn time_integral<F: Fn(f64) -> Complex64>(f: F, t1: f64, t2: f64, n_t: usize) -> Result<Complex64> {
    if !(t2 > t1) {
        return Err(Error::InvalidArgument(format!("need t1 < t2, got [{t1}, {t2}]")));
    }
    let ts = linspace(t1, t2, n_t);
    let values: Vec<Complex64> = ts.iter().map(|&t| f(t)).collect();
    simpson(&values, (t2 - t1) / (n_t - 1).max(1) as f64)
}

/// `int_{t1}^{t2} dt int dx (pullback of theta_lambda)`: spatial integrals by grid
/// quadrature, time by composite Simpson on `n_t` (odd) points.
pub fn action_between_slices<F: SpacetimeField + ?Sized>(
    field: &F,
    lambda: f64,
    t1: f64,
    t2: f64,
    n_t: usize,
) -> Result<Complex64> {
    let lat = field.lattice();
    time_integral(|t| lat.integrate(&action_density(&field.jet(t), lat.mass(), lambda)), t1, t2, n_t)
}

/// `int int (1/2 eta^{mu nu} d_mu phi d_nu phi - 1/2 m^2 phi^2)`, straight from the field.
pub fn lagrangian_action<F: SpacetimeField + ?Sized>(field: &F, t1: f64, t2: f64, n_t: usize) -> Result<Complex64> {
    let lat = field.lattice();
    let m2 = lat.mass().powi(2);
    time_integral(
        |t| {
            let jet = field.jet(t);
            let dens: Vec<Complex64> = jet
                .gradient_pairing(&jet)
                .iter()
                .zip(&jet.value)
                .map(|(k, v)| 0.5 * k - 0.5 * m2 * v * v)
                .collect();
            lat.integrate(&dens)
        },
        t1,
        t2,
        n_t,
    )
}

/// `|d/ds A(phi + s eta)|_{s=0}` by a central difference of step `eps`, where
/// `eta = chi(t) psi` is compactly supported in the envelope window and the action
/// is integrated over that window with `n_t` Simpson points.
pub fn action_criticality<F: SpacetimeField + ?Sized>(
    base: &F,
    variation: &Enveloped<Solution>,
    lambda: f64,
    eps: f64,
    n_t: usize,
) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    let (t1, t2) = (variation.envelope.t1, variation.envelope.t2);
    let base: &dyn SpacetimeField = &ForwardRef(base);
    let plus = Combination::new(base).plus(eps, variation);
    let minus = Combination::new(base).plus(-eps, variation);
    let a_plus = action_between_slices(&plus, lambda, t1, t2, n_t)?;
    let a_minus = action_between_slices(&minus, lambda, t1, t2, n_t)?;
    Ok(((a_plus - a_minus) / (2.0 * eps)).norm())
}

// Lets an unsized `F` be used where a `&dyn SpacetimeField` is needed.
struct ForwardRef<'a, F: ?Sized>(&'a F);

impl<F: SpacetimeField + ?Sized> SpacetimeField for ForwardRef<'_, F> {
    fn lattice(&self) -> &ModeLattice {
        self.0.lattice()
    }
    fn jet(&self, t: f64) -> FieldJet {
        self.0.jet(t)
    }
}
