//! Covariant phase space: Jacobi fields along a solution, the slice 1-form
//! `Theta^Sigma`, the symplectic form `Omega` and the action-difference identity.
//!
//! Sign convention: `xi_1 ^ xi_2 -| omega = omega(xi_1, xi_2, ...)`, which on a
//! constant-time slice gives
//!
//! ```text
//! Omega(d1, d2) = int (d1 p^0 d2 phi - d2 p^0 d1 phi)
//! ```
//!
//! and makes `Omega(Xi_F, Xi_G)` equal to the slice integral of `{F, G}`.

use num_complex::Complex64;

use crate::action::action_between_slices;
use crate::error::{Error, Result};
use crate::field::{FieldJet, SpacetimeField};
use crate::forms::{KgForms, MTangent};
use crate::solution::Solution;

const PATH_TOL: f64 = 1e-10;

/// A tangent vector to the space of solutions at a base solution.
///
/// The vertical part is the Jacobi field `delta` (for the free field, itself a
/// solution); `tangential[mu]` adds `c_mu X_mu`, a multiple of the canonical frame
/// of the base n-curve, which represents the same deformation.
#[derive(Debug, Clone)]
pub struct Deformation {
    pub delta: Solution,
    pub tangential: Vec<f64>,
}

impl Deformation {
    pub fn vertical(delta: Solution) -> Self {
        let n = delta.lattice().dim() + 1;
        Deformation { delta, tangential: vec![0.0; n] }
    }

    pub fn with_tangential(mut self, mu: usize, c: f64) -> Self {
        self.tangential[mu] = c;
        self
    }

    pub fn is_vertical(&self) -> bool {
        self.tangential.iter().all(|&c| c == 0.0)
    }

    /// Tangent vectors over every grid point of the slice through `base_jet`.
    fn tangents(&self, forms: &KgForms, base_jet: &FieldJet) -> Vec<MTangent<Complex64>> {
        let n = forms.n();
        let dj = self.delta.jet(base_jet.t);
        let m2 = forms.mass * forms.mass;
        let pairing = base_jet.gradient_pairing(&dj);
        (0..dj.len())
            .map(|j| {
                let mut v = MTangent::<Complex64>::zero(n);
                v.dphi = dj.value[j];
                v.dp = (0..n).map(|mu| if mu == 0 { dj.grad[0][j] } else { -dj.grad[mu][j] }).collect();
                v.de = -pairing[j] - m2 * base_jet.value[j] * dj.value[j];
                if !self.is_vertical() {
                    let frame = forms.graph_frame(base_jet, j);
                    for (mu, &c) in self.tangential.iter().enumerate() {
                        if c != 0.0 {
                            v = v.plus(&frame[mu].scaled(Complex64::new(c, 0.0)));
                        }
                    }
                }
                v
            })
            .collect()
    }
}

fn forms_for(sol: &Solution) -> KgForms {
    KgForms::new(sol.lattice().dim(), sol.lattice().mass())
}

/// `Theta^Sigma(delta) = int_Sigma xi -| theta_lambda` on the slice at time `t`,
/// by pointwise evaluation of `theta_lambda(xi, X_1, ..., X_d)`.
pub fn theta_sigma(sol: &Solution, delta: &Deformation, lambda: f64, t: f64) -> Result<Complex64> {
    let lat = sol.lattice();
    let forms = forms_for(sol);
    let jet = sol.jet(t);
    let xis = delta.tangents(&forms, &jet);
    let mut dens = Vec::with_capacity(xis.len());
    for (j, xi) in xis.into_iter().enumerate() {
        let point = forms.graph_point(&jet, lat.grid_point(j), j);
        let frame = forms.graph_frame(&jet, j);
        let mut args = vec![xi];
        args.extend(frame.into_iter().skip(1));
        dens.push(forms.theta_eval(lambda, &point, &args)?);
    }
    Ok(lat.integrate(&dens))
}

/// Closed-form vertical reduction `int (lambda p^0 d phi - (1 - lambda) phi d p^0)`.
pub fn theta_sigma_vertical(sol: &Solution, delta: &Solution, lambda: f64, t: f64) -> Complex64 {
    let lat = sol.lattice();
    let base = sol.jet(t);
    let dj = delta.jet(t);
    let dens: Vec<Complex64> = (0..base.len())
        .map(|j| lambda * base.grad[0][j] * dj.value[j] - (1.0 - lambda) * base.value[j] * dj.grad[0][j])
        .collect();
    lat.integrate(&dens)
}

/// Closed-form slice reduction `int (d1 p^0 d2 phi - d2 p^0 d1 phi)` of `Omega`.
pub fn omega_sigma_closed(sol: &Solution, d1: &Solution, d2: &Solution, t: f64) -> Complex64 {
    let lat = sol.lattice();
    let a = d1.jet(t);
    let b = d2.jet(t);
    let dens: Vec<Complex64> =
        (0..a.len()).map(|j| a.grad[0][j] * b.value[j] - b.grad[0][j] * a.value[j]).collect();
    lat.integrate(&dens)
}

/// `int_Sigma omega(xi_1, xi_2, X_1, ..., X_d)` with the full tangent vectors
/// (including `de` and any tangential part).
pub fn omega_sigma_pointwise(sol: &Solution, d1: &Deformation, d2: &Deformation, t: f64) -> Result<Complex64> {
    let lat = sol.lattice();
    let forms = forms_for(sol);
    let jet = sol.jet(t);
    let x1 = d1.tangents(&forms, &jet);
    let x2 = d2.tangents(&forms, &jet);
    let mut dens = Vec::with_capacity(x1.len());
    for (j, (a, b)) in x1.into_iter().zip(x2).enumerate() {
        let frame = forms.graph_frame(&jet, j);
        let mut args = vec![a, b];
        args.extend(frame.into_iter().skip(1));
        dens.push(forms.omega_eval(&args)?);
    }
    Ok(lat.integrate(&dens))
}

/// `Omega(d1, d2)` on the slice at time `t`, computed by the closed-form
/// reduction and by pointwise evaluation of `omega`; disagreement beyond
/// `1e-10` (relative to the scale of the integrands) is an error.
pub fn omega_sigma(sol: &Solution, d1: &Deformation, d2: &Deformation, t: f64) -> Result<Complex64> {
    let a = omega_sigma_closed(sol, &d1.delta, &d2.delta, t);
    let b = omega_sigma_pointwise(sol, d1, d2, t)?;
    let scale = 1.0f64.max(a.norm()).max(b.norm());
    if (a - b).norm() > PATH_TOL * scale {
        return Err(Error::Inconsistent { what: "omega_sigma paths", lhs: a.norm(), rhs: b.norm() });
    }
    Ok(a)
}

/// `delta Theta(d1, d2) = d1.Theta(d2) - d2.Theta(d1)`, the directional derivatives
/// taken by central differences of step `eps` in mode coordinates.
pub fn fd_delta_theta(
    sol: &Solution,
    d1: &Solution,
    d2: &Solution,
    lambda: f64,
    t: f64,
    eps: f64,
) -> Result<Complex64> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    let one = Complex64::new(1.0, 0.0);
    let e = Complex64::new(eps, 0.0);
    let directional = |along: &Solution, arg: &Solution| {
        let plus = sol.combine(one, along, e);
        let minus = sol.combine(one, along, -e);
        (theta_sigma_vertical(&plus, arg, lambda, t) - theta_sigma_vertical(&minus, arg, lambda, t)) / (2.0 * eps)
    };
    Ok(directional(d1, d2) - directional(d2, d1))
}

/// `(Theta^{Sigma_2}(delta) - Theta^{Sigma_1}(delta), delta S)` where `delta S` is the
/// central difference of the action between the slices along `delta`.
pub fn theta_difference_vs_action(
    sol: &Solution,
    delta: &Solution,
    lambda: f64,
    t1: f64,
    t2: f64,
    eps: f64,
    n_t: usize,
) -> Result<(Complex64, Complex64)> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    let lhs = theta_sigma_vertical(sol, delta, lambda, t2) - theta_sigma_vertical(sol, delta, lambda, t1);
    let one = Complex64::new(1.0, 0.0);
    let e = Complex64::new(eps, 0.0);
    let plus = action_between_slices(&sol.combine(one, delta, e), lambda, t1, t2, n_t)?;
    let minus = action_between_slices(&sol.combine(one, delta, -e), lambda, t1, t2, n_t)?;
    Ok((lhs, (plus - minus) / (2.0 * eps)))
}

/// Real basis of the truncated solution space: for each mode the real solutions
/// with `u_k = 1` and `u_k = i`.
pub fn real_basis(sol: &Solution) -> Vec<Solution> {
    let lat = sol.lattice_arc();
    let m = lat.num_modes();
    let mut out = Vec::with_capacity(2 * m);
    for k in 0..m {
        for c in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
            let mut u = vec![Complex64::new(0.0, 0.0); m];
            u[k] = c;
            out.push(Solution::real(lat.clone(), u).expect("conjugate by construction"));
        }
    }
    out
}

/// Singular-value summary of the Gram matrix `G_ab = Omega(e_a, e_b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramSpectrum {
    pub dim: usize,
    pub max_singular: f64,
    pub min_singular: f64,
    pub max_antisymmetry_defect: f64,
}

impl GramSpectrum {
    /// `min / max` singular value.
    pub fn normalized_min(&self) -> f64 {
        if self.max_singular == 0.0 {
            0.0
        } else {
            self.min_singular / self.max_singular
        }
    }
}

/// Gram matrix of `Omega` over [`real_basis`] on the slice at time `t`.
pub fn gram_matrix(sol: &Solution, t: f64) -> nalgebra::DMatrix<f64> {
    let basis = real_basis(sol);
    let jets: Vec<FieldJet> = basis.iter().map(|b| b.jet(t)).collect();
    let lat = sol.lattice();
    let dim = basis.len();
    let mut g = nalgebra::DMatrix::<f64>::zeros(dim, dim);
    for a in 0..dim {
        for b in 0..dim {
            let (ja, jb) = (&jets[a], &jets[b]);
            let dens: Vec<Complex64> =
                (0..ja.len()).map(|j| ja.grad[0][j] * jb.value[j] - jb.grad[0][j] * ja.value[j]).collect();
            g[(a, b)] = lat.integrate(&dens).re;
        }
    }
    g
}

pub fn gram_spectrum(sol: &Solution, t: f64) -> GramSpectrum {
    let g = gram_matrix(sol, t);
    let defect = (&g + g.transpose()).amax();
    let sv = g.singular_values();
    GramSpectrum {
        dim: g.nrows(),
        max_singular: sv.max(),
        min_singular: sv.min(),
        max_antisymmetry_defect: defect,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeConfig;
    use crate::random;
    use std::sync::Arc;

    fn lat() -> Arc<crate::ModeLattice> {
        Arc::new(LatticeConfig::default().build().unwrap())
    }

    #[test]
    fn vertical_theta_matches_closed_form() {
        let l = lat();
        let mut r = random::rng(3);
        let sol = random::real_solution(&l, &mut r);
        let d = random::real_solution(&l, &mut r);
        for lambda in [0.0, 0.3, 1.0] {
            let a = theta_sigma(&sol, &Deformation::vertical(d.clone()), lambda, 0.4).unwrap();
            let b = theta_sigma_vertical(&sol, &d, lambda, 0.4);
            assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn omega_is_antisymmetric_and_slice_independent() {
        let l = lat();
        let mut r = random::rng(4);
        let sol = random::real_solution(&l, &mut r);
        let d1 = Deformation::vertical(random::real_solution(&l, &mut r));
        let d2 = Deformation::vertical(random::real_solution(&l, &mut r));
        let w0 = omega_sigma(&sol, &d1, &d2, 0.0).unwrap();
        let w1 = omega_sigma(&sol, &d2, &d1, 2.3).unwrap();
        assert!(w0.norm() > 1e-3);
        assert!((w0 + w1).norm() < 1e-12 * w0.norm().max(1.0));
        assert_eq!(omega_sigma(&sol, &d1, &d1, 0.5).unwrap().norm(), 0.0);
    }

    #[test]
    fn single_mode_pairing() {
        let l = lat();
        let sol = Solution::zero(l.clone());
        let k = l.mode_index(&[2]).unwrap();
        let a = Complex64::new(0.3, -1.1);
        let b = Complex64::new(-0.7, 0.4);
        let mk = |c: Complex64| {
            let mut u = vec![Complex64::new(0.0, 0.0); l.num_modes()];
            u[k] = c;
            Solution::real(l.clone(), u).unwrap()
        };
        let w = omega_sigma_closed(&sol, &mk(a), &mk(b), 0.9);
        let expected = 2.0 * l.weight(k) * (a * b.conj()).im;
        assert!((w.re - expected).abs() < 1e-13 && w.im.abs() < 1e-13);
    }

    #[test]
    fn gram_matrix_has_full_rank() {
        let spec = gram_spectrum(&Solution::zero(lat()), 0.0);
        assert_eq!(spec.dim, 30);
        assert!(spec.normalized_min() > 1e-3);
        assert!(spec.max_antisymmetry_defect < 1e-13);
    }
}
