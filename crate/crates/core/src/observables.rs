//! Observable (n-1)-forms, their slice integrals and brackets.
//!
//! For a solution `Phi` of the field equation,
//!
//! ```text
//! F_Phi = (p^mu Phi - phi eta^{mu nu} d_nu Phi) beta_mu
//! ```
//!
//! integrates on a constant-time slice to `int (p^0 Phi - phi d_t Phi)`. The
//! creation and annihilation functionals are special cases:
//!
//! | form        | generator `Phi`                    | mode data of `Phi`  |
//! |-------------|------------------------------------|---------------------|
//! | `alpha_k`   | `i e^{ik.x} / (2 pi)^{d/2}`        | `u* = i / w_k` on k |
//! | `alpha*_k`  | `-i e^{-ik.x} / (2 pi)^{d/2}`      | `u = -i / w_k` on k |
//! | `alpha_f`   | `sum_k w_k f_k (alpha_k generator)`| `u* = i f`          |
//! | `alpha*_g`  | `sum_k w_k g_k (alpha*_k generator)`| `u = -i g`         |
//!
//! Bracket signs are fixed by `Omega(Xi_F, Xi_G) = int {F, G}`; the Hamiltonian
//! vector fields are `Xi_{F_Phi}: d phi = Phi` and `Xi_{P_mu}: d phi = -d_mu phi`.
//! With this orientation `-int P_0^{(1)}` is the (nonnegative) energy.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{FieldJet, SpacetimeField};
use crate::lattice::ModeLattice;
use crate::phase_space::omega_sigma_closed;
use crate::solution::Solution;

#[derive(Debug, Clone)]
pub enum ObservableForm {
    FPhi(Solution),
    AlphaK(usize),
    AlphaStarK(usize),
    AlphaF(Vec<Complex64>),
    AlphaStarG(Vec<Complex64>),
    Pmu { mu: usize, lambda: f64 },
    BracketForm(Solution, Solution),
}

fn zeros(m: usize) -> Vec<Complex64> {
    vec![Complex64::new(0.0, 0.0); m]
}

fn check_len(lat: &ModeLattice, v: &[Complex64]) -> Result<()> {
    if v.len() != lat.num_modes() {
        return Err(Error::ShapeMismatch { expected: lat.num_modes(), got: v.len() });
    }
    Ok(())
}

/// Generator of `alpha_f`.
pub fn alpha_generator(lat: &Arc<ModeLattice>, f: &[Complex64]) -> Result<Solution> {
    check_len(lat, f)?;
    let ustar = f.iter().map(|c| Complex64::i() * c).collect();
    Solution::from_modes(lat.clone(), zeros(lat.num_modes()), ustar, false)
}

/// Generator of `alpha*_g`.
pub fn alpha_star_generator(lat: &Arc<ModeLattice>, g: &[Complex64]) -> Result<Solution> {
    check_len(lat, g)?;
    let u = g.iter().map(|c| -Complex64::i() * c).collect();
    Solution::from_modes(lat.clone(), u, zeros(lat.num_modes()), false)
}

fn indicator_over_weight(lat: &ModeLattice, k: usize) -> Vec<Complex64> {
    let mut f = zeros(lat.num_modes());
    f[k] = Complex64::new(1.0 / lat.weight(k), 0.0);
    f
}

impl ObservableForm {
    /// The generating solution `Phi` for forms of type `F_Phi`.
    pub fn generator(&self, lat: &Arc<ModeLattice>) -> Result<Option<Solution>> {
        let check_mode = |k: usize| {
            if k >= lat.num_modes() {
                Err(Error::InvalidArgument(format!("mode index {k} out of range")))
            } else {
                Ok(())
            }
        };
        Ok(match self {
            ObservableForm::FPhi(phi) => Some(phi.clone()),
            ObservableForm::AlphaK(k) => {
                check_mode(*k)?;
                Some(alpha_generator(lat, &indicator_over_weight(lat, *k))?)
            }
            ObservableForm::AlphaStarK(k) => {
                check_mode(*k)?;
                Some(alpha_star_generator(lat, &indicator_over_weight(lat, *k))?)
            }
            ObservableForm::AlphaF(f) => Some(alpha_generator(lat, f)?),
            ObservableForm::AlphaStarG(g) => Some(alpha_star_generator(lat, g)?),
            ObservableForm::Pmu { .. } | ObservableForm::BracketForm(..) => None,
        })
    }

    /// Hamiltonian vector field `Xi_F` at `sol`, as a Jacobi field. `None` for
    /// bracket forms, whose vector field is not needed here.
    pub fn hamiltonian_field(&self, sol: &Solution) -> Result<Option<Solution>> {
        if let ObservableForm::Pmu { mu, .. } = self {
            check_mu(sol.lattice(), *mu)?;
            return Ok(Some(sol.derivative(*mu).scale(-1.0)));
        }
        self.generator(sol.lattice_arc())
    }
}

fn check_mu(lat: &ModeLattice, mu: usize) -> Result<()> {
    if mu > lat.dim() {
        return Err(Error::InvalidArgument(format!("direction {mu} out of range 0..={}", lat.dim())));
    }
    Ok(())
}

/// `int (p^0 Phi - phi d_t Phi)` for arbitrary jets of `phi` and `Phi`.
fn f_phi_integral(lat: &ModeLattice, base: &FieldJet, gen: &FieldJet) -> Complex64 {
    let dens: Vec<Complex64> =
        (0..base.len()).map(|j| base.grad[0][j] * gen.value[j] - base.value[j] * gen.grad[0][j]).collect();
    lat.integrate(&dens)
}

/// Slice pullback of `P_mu^{(lambda)} = d/dx^mu -| theta_lambda`:
/// `delta_{mu 0} [e + lambda p^nu d_nu phi - (1 - lambda) phi d_nu p^nu]
///  - lambda p^0 d_mu phi + (1 - lambda) phi d_mu p^0`.
fn pmu_density(jet: &FieldJet, mass: f64, mu: usize, lambda: f64) -> Vec<Complex64> {
    let mut dens = if mu == 0 {
        crate::action::action_density(jet, mass, lambda)
    } else {
        vec![Complex64::new(0.0, 0.0); jet.len()]
    };
    for (j, d) in dens.iter_mut().enumerate() {
        let p0 = jet.grad[0][j];
        *d += -lambda * p0 * jet.grad[mu][j] + (1.0 - lambda) * jet.value[j] * jet.second(mu, 0)[j];
    }
    dens
}

/// `int_{Sigma_t} F` on the n-curve of `sol`.
pub fn slice_integral(form: &ObservableForm, sol: &Solution, t: f64) -> Result<Complex64> {
    let lat = sol.lattice_arc();
    match form {
        ObservableForm::Pmu { mu, lambda } => {
            check_mu(lat, *mu)?;
            Ok(lat.integrate(&pmu_density(&sol.jet(t), lat.mass(), *mu, *lambda)))
        }
        ObservableForm::BracketForm(phi, psi) => Ok(bracket_integral(phi, psi, t)),
        _ => {
            let gen = form.generator(lat)?.expect("F_Phi type form");
            Ok(f_phi_integral(lat, &sol.jet(t), &gen.jet(t)))
        }
    }
}

/// `a_k(Gamma)`, the slice integral of `alpha_k` (equal to `u_k`).
pub fn a_k(sol: &Solution, k: usize, t: f64) -> Result<Complex64> {
    slice_integral(&ObservableForm::AlphaK(k), sol, t)
}

/// `a*_k(Gamma)` (equal to `u*_k`).
pub fn a_star_k(sol: &Solution, k: usize, t: f64) -> Result<Complex64> {
    slice_integral(&ObservableForm::AlphaStarK(k), sol, t)
}

/// `{F_Phi, F_Psi}`, the form `eta^{mu nu}(d_nu Phi Psi - Phi d_nu Psi) beta_mu`.
pub fn bracket_form(phi: &Solution, psi: &Solution) -> ObservableForm {
    ObservableForm::BracketForm(phi.clone(), psi.clone())
}

/// `int (d_t Phi Psi - Phi d_t Psi)` on the slice at `t`.
pub fn bracket_integral(phi: &Solution, psi: &Solution, t: f64) -> Complex64 {
    omega_sigma_closed(phi, phi, psi, t)
}

/// `{a_f, a*_g}` computed as `i sum_k w_k f_k g_k` and as the slice integral of
/// the bracket form of the two generators; returns `(weight_sum, form_value)`.
pub fn bracket_regularized(
    lat: &Arc<ModeLattice>,
    f: &[Complex64],
    g: &[Complex64],
    t: f64,
) -> Result<(Complex64, Complex64)> {
    check_len(lat, f)?;
    check_len(lat, g)?;
    let sum: Complex64 = (0..lat.num_modes()).map(|k| lat.weight(k) * f[k] * g[k]).sum();
    let form = bracket_integral(&alpha_generator(lat, f)?, &alpha_star_generator(lat, g)?, t);
    Ok((Complex64::i() * sum, form))
}

/// Max-norm over interior slices of `d_mu J^mu` with `J^mu = p^mu Phi - phi eta^{mu nu} d_nu Phi`.
///
/// `d_t J^0` is a centered difference in time; the spatial divergence uses the
/// product rule on exact (mode-space) derivatives, where the first-order cross
/// terms cancel: `d_i J^i = -(d_i d_i phi Phi - phi d_i d_i Phi)`.
pub fn noether_divergence<G: SpacetimeField + ?Sized>(gen: &G, sol: &Solution, t_grid: &[f64]) -> Result<f64> {
    if t_grid.len() < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 time points, got {}", t_grid.len())));
    }
    let dt = t_grid[1] - t_grid[0];
    let lat = sol.lattice();
    let n = lat.dim() + 1;
    let jets: Vec<(FieldJet, FieldJet)> = t_grid.iter().map(|&t| (sol.jet(t), gen.jet(t))).collect();
    let j0 = |(b, g): &(FieldJet, FieldJet), j: usize| b.grad[0][j] * g.value[j] - b.value[j] * g.grad[0][j];
    let mut worst = 0.0f64;
    for s in 1..jets.len() - 1 {
        let (b, g) = &jets[s];
        for j in 0..lat.grid_len() {
            let mut div = (j0(&jets[s + 1], j) - j0(&jets[s - 1], j)) / (2.0 * dt);
            for i in 1..n {
                div -= b.second(i, i)[j] * g.value[j] - b.value[j] * g.second(i, i)[j];
            }
            worst = worst.max(div.norm());
        }
    }
    Ok(worst)
}

/// `(Omega(Xi_{P_mu}, Xi_{F_Phi}), int F_{d_mu Phi})` on the slice at `t`.
pub fn pmu_bracket_identity(mu: usize, phi: &Solution, sol: &Solution, t: f64) -> Result<(Complex64, Complex64)> {
    check_mu(sol.lattice(), mu)?;
    let xi_p = sol.derivative(mu).scale(-1.0);
    let lhs = omega_sigma_closed(sol, &xi_p, phi, t);
    let rhs = slice_integral(&ObservableForm::FPhi(phi.derivative(mu)), sol, t)?;
    Ok((lhs, rhs))
}

/// Classical bracket `int {F, G}` for the implemented pairs of forms of type
/// `F_Phi` and `P_mu`: `{F_Phi, F_Psi}` is the bracket form, `{P_mu, F_Phi} = F_{d_mu Phi}`
/// up to an exact term, and translations commute.
pub fn classical_bracket(f: &ObservableForm, g: &ObservableForm, sol: &Solution, t: f64) -> Result<Complex64> {
    let lat = sol.lattice_arc();
    match (f, g) {
        (ObservableForm::Pmu { .. }, ObservableForm::Pmu { .. }) => Ok(Complex64::new(0.0, 0.0)),
        (ObservableForm::Pmu { mu, .. }, other) => {
            let phi = other.generator(lat)?.ok_or_else(|| unsupported(other))?;
            check_mu(lat, *mu)?;
            slice_integral(&ObservableForm::FPhi(phi.derivative(*mu)), sol, t)
        }
        (_, ObservableForm::Pmu { .. }) => Ok(-classical_bracket(g, f, sol, t)?),
        _ => {
            let phi = f.generator(lat)?.ok_or_else(|| unsupported(f))?;
            let psi = g.generator(lat)?.ok_or_else(|| unsupported(g))?;
            Ok(bracket_integral(&phi, &psi, t))
        }
    }
}

fn unsupported(f: &ObservableForm) -> Error {
    Error::InvalidArgument(format!("no bracket defined for {f:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeConfig;
    use crate::random;

    fn lat() -> Arc<ModeLattice> {
        Arc::new(LatticeConfig::default().build().unwrap())
    }

    #[test]
    fn a_k_recovers_mode_coefficients() {
        let l = lat();
        let mut r = random::rng(11);
        let sol = random::complex_solution(&l, &mut r);
        for k in 0..l.num_modes() {
            for t in [0.0, 1.7] {
                assert!((a_k(&sol, k, t).unwrap() - sol.u()[k]).norm() < 1e-12);
                assert!((a_star_k(&sol, k, t).unwrap() - sol.ustar()[k]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn energy_is_minus_p0() {
        let l = lat();
        let mut r = random::rng(12);
        let sol = random::real_solution(&l, &mut r);
        let s = sol.evaluate_fields(0.3);
        let (phi, pi) = s.cauchy_real();
        let e = crate::evolution::energy(&l, &phi, &pi).unwrap();
        let p0 = slice_integral(&ObservableForm::Pmu { mu: 0, lambda: 1.0 }, &sol, 0.3).unwrap();
        assert!((-p0.re - e).abs() < 1e-12 * e.max(1.0) && e > 0.0);
    }

    #[test]
    fn hamiltonian_fields_generate_slice_integrals() {
        // d(int F)(delta) = -Omega(Xi_F, delta)
        let l = lat();
        let mut r = random::rng(13);
        let sol = random::real_solution(&l, &mut r);
        let delta = random::real_solution(&l, &mut r);
        let f = random::mode_function(&l, &mut r);
        let forms = [
            ObservableForm::AlphaF(f.clone()),
            ObservableForm::AlphaStarG(f),
            ObservableForm::Pmu { mu: 0, lambda: 1.0 },
            ObservableForm::Pmu { mu: 1, lambda: 0.4 },
            ObservableForm::FPhi(random::complex_solution(&l, &mut r)),
        ];
        let one = Complex64::new(1.0, 0.0);
        let eps = Complex64::new(1e-3, 0.0);
        for form in &forms {
            let plus = slice_integral(form, &sol.combine(one, &delta, eps), 0.2).unwrap();
            let minus = slice_integral(form, &sol.combine(one, &delta, -eps), 0.2).unwrap();
            let dir = (plus - minus) / 2e-3;
            let xi = form.hamiltonian_field(&sol).unwrap().unwrap();
            let om = omega_sigma_closed(&sol, &xi, &delta, 0.2);
            assert!((dir + om).norm() < 1e-9 * dir.norm().max(1.0), "{form:?}: {dir} vs {om}");
        }
    }

    #[test]
    fn regularized_bracket_single_mode() {
        let l = Arc::new(LatticeConfig::new(1, 2.0 * std::f64::consts::PI, 16, 3, 1.0, 1.0).build().unwrap());
        let k0 = l.mode_index(&[0]).unwrap();
        let mut f = zeros(l.num_modes());
        f[k0] = Complex64::new(1.0, 0.0);
        let (a, b) = bracket_regularized(&l, &f, &f, 0.0).unwrap();
        assert!((a - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        assert!((b - a).norm() < 1e-12);
    }

    #[test]
    fn noether_current_of_non_solution_is_not_conserved() {
        let l = lat();
        let mut r = random::rng(14);
        let sol = random::real_solution(&l, &mut r);
        let gen = crate::field::PolynomialInTime::linear(l.clone());
        let ts = crate::quadrature::linspace(1.0, 1.2, 5);
        assert!(noether_divergence(&gen, &sol, &ts).unwrap() > 1e-2);
        let zero = Solution::zero(l.clone());
        assert_eq!(noether_divergence(&gen, &zero, &ts).unwrap(), 0.0);
    }
}
