use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;

use multisymp_core::phase_space::omega_sigma_closed;
use multisymp_core::prequant::{commutator, inner_product, monomials_up_to, Operator, PolarizedState};
use multisymp_core::{random, LatticeConfig, ModeLattice, Solution};

fn lattice(d: usize) -> Arc<ModeLattice> {
    let cfg = if d == 1 { LatticeConfig::new(1, 4.0, 16, 4, 0.8, 1.0) } else { LatticeConfig::new(2, 3.0, 8, 2, 1.3, 0.5) };
    Arc::new(cfg.build().unwrap())
}

fn random_state(lat: &Arc<ModeLattice>, seed: u64, max_degree: u32, terms: usize) -> PolarizedState {
    let basis = monomials_up_to(lat.num_modes(), max_degree);
    let mut r = random::rng(seed);
    let mut s = PolarizedState::zero(lat.clone());
    for i in 0..terms {
        let idx = (seed as usize).wrapping_mul(31).wrapping_add(i * 17) % basis.len();
        s.insert(basis[idx].clone(), random::complex(&mut r)).unwrap();
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cauchy_round_trip(seed in any::<u64>(), d in 1usize..=2, t in -3.0f64..3.0) {
        let lat = lattice(d);
        let sol = random::real_solution(&lat, &mut random::rng(seed));
        let (phi, pi) = sol.evaluate_fields(t).cauchy_real();
        let back = Solution::from_cauchy(lat.clone(), &phi, &pi).unwrap();
        // data at time t, read back as data at time 0
        let moved = sol.evolve_exact(t);
        for k in 0..lat.num_modes() {
            prop_assert!((back.u()[k] - moved.u()[k]).norm() < 1e-11);
        }
    }

    #[test]
    fn omega_is_antisymmetric_bilinear_and_conserved(seed in any::<u64>(), d in 1usize..=2, a in -2.0f64..2.0) {
        let lat = lattice(d);
        let mut r = random::rng(seed);
        let sol = random::real_solution(&lat, &mut r);
        let x = random::real_solution(&lat, &mut r);
        let y = random::real_solution(&lat, &mut r);
        let z = random::real_solution(&lat, &mut r);
        let w = omega_sigma_closed(&sol, &x, &y, 0.0);
        prop_assert!((w + omega_sigma_closed(&sol, &y, &x, 0.0)).norm() < 1e-13);
        prop_assert!(omega_sigma_closed(&sol, &x, &x, 0.0).norm() < 1e-13);
        let lhs = omega_sigma_closed(&sol, &x.combine(Complex64::new(a, 0.0), &z, Complex64::new(1.0, 0.0)), &y, 0.0);
        let rhs = w * a + omega_sigma_closed(&sol, &z, &y, 0.0);
        prop_assert!((lhs - rhs).norm() < 1e-12);
        prop_assert!((omega_sigma_closed(&sol, &x, &y, 2.3) - w).norm() < 1e-12);
    }

    #[test]
    fn inner_product_is_hermitian(seed in any::<u64>(), d in 1usize..=2) {
        let lat = lattice(d);
        let s1 = random_state(&lat, seed, 3, 6);
        let s2 = random_state(&lat, seed ^ 0x55, 3, 6);
        prop_assert!((inner_product(&s1, &s2) - inner_product(&s2, &s1).conj()).norm() < 1e-12);
        prop_assert!(inner_product(&s1, &s1).re > 0.0);
        prop_assert!(inner_product(&s1, &s1).im.abs() < 1e-12);
    }

    #[test]
    fn quantum_ccr_on_random_states(seed in any::<u64>(), d in 1usize..=2) {
        let lat = lattice(d);
        let mut r = random::rng(seed);
        let f = random::mode_function(&lat, &mut r);
        let g = random::mode_function(&lat, &mut r);
        let psi = random_state(&lat, seed, 3, 5);
        let c: Complex64 = (0..lat.num_modes()).map(|k| lat.hbar() * lat.weight(k) * f[k] * g[k]).sum();
        let got = commutator(&Operator::A(f.clone()), &Operator::AStar(g.clone()), &psi).unwrap();
        prop_assert!(got.sub(&psi.scale(c)).max_abs() < 1e-12 * (1.0 + c.norm()) * psi.max_abs());
    }

    #[test]
    fn translation_shifts_creators(seed in any::<u64>(), d in 1usize..=2) {
        let lat = lattice(d);
        let mut r = random::rng(seed);
        let g = random::mode_function(&lat, &mut r);
        let zeta: Vec<f64> = (0..=d).map(|i| 0.3 * i as f64 - 0.7).collect();
        let psi = random_state(&lat, seed, 2, 4);
        let kg: Vec<Complex64> = (0..lat.num_modes()).map(|k| g[k] * lat.k_dot(k, &zeta)).collect();
        let lhs = commutator(&Operator::P(zeta.clone()), &Operator::AStar(g), &psi).unwrap();
        let rhs = Operator::AStar(kg).apply(&psi).unwrap().scale(Complex64::new(-lat.hbar(), 0.0));
        prop_assert!(lhs.sub(&rhs).max_abs() < 1e-12 * (1.0 + rhs.max_abs()));
    }
}
