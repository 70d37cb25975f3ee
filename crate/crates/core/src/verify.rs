//! Verification suites: every identity of the theory as a numerical check with a
//! tolerance, collected into a [`Report`].

use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::action::{action_between_slices, action_criticality, hamilton_residual, lagrangian_action};
use crate::error::{Error, Result};
use crate::evolution::{leapfrog_evolve, leapfrog_shadow_energy, leapfrog_trajectory};
use crate::field::{DetunedField, Envelope, Enveloped, SpacetimeField};
use crate::forms::{exterior_derivative_fd, Coord, KgForms, MPoint, MTangent};
use crate::lattice::ModeLattice;
use crate::observables::{
    bracket_integral, bracket_regularized, classical_bracket, noether_divergence, pmu_bracket_identity,
    slice_integral, ObservableForm,
};
use crate::phase_space::{
    fd_delta_theta, gram_spectrum, omega_sigma, omega_sigma_closed, omega_sigma_pointwise, theta_difference_vs_action,
    theta_sigma, Deformation,
};
use crate::prequant::{
    commutator, inner_product, monomials_up_to, op_a, op_a_star, op_p, p_eigenvalue, MultiIndex, Operator,
    PolarizedState,
};
use crate::quadrature::observed_order;
use crate::random::{self, SeededRng};
use crate::report::{CheckRecord, Report, RunConfig};
use crate::solution::Solution;

/// Simpson points for every action quadrature.
pub const ACTION_POINTS: usize = 257;
/// Time steps of the convergence-order studies.
pub const ORDER_STEPS: [f64; 3] = [0.1, 0.05, 0.025];
/// Highest monomial degree used by the prequantization checks.
pub const PREQUANT_DEGREE: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Msymp,
    Observables,
    PhaseSpace,
    Prequant,
    All,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Msymp => "msymp",
            Suite::Observables => "observables",
            Suite::PhaseSpace => "phase-space",
            Suite::Prequant => "prequant",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "msymp" => Suite::Msymp,
            "observables" => Suite::Observables,
            "phase-space" => Suite::PhaseSpace,
            "prequant" => Suite::Prequant,
            "all" => Suite::All,
            other => return Err(Error::InvalidArgument(format!("unknown suite `{other}`"))),
        })
    }
}

/// Runs a suite and assembles its report.
pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let ctx = Ctx::new(cfg)?;
    let mut checks = Vec::new();
    if matches!(suite, Suite::Msymp | Suite::All) {
        checks.extend(msymp_checks(&ctx)?);
    }
    if matches!(suite, Suite::Observables | Suite::All) {
        checks.extend(observable_checks(&ctx)?);
    }
    if matches!(suite, Suite::PhaseSpace | Suite::All) {
        checks.extend(phase_space_checks(&ctx)?);
    }
    if matches!(suite, Suite::Prequant | Suite::All) {
        checks.extend(prequant_checks(&ctx)?);
    }
    Ok(Report::new(suite.name(), cfg, checks))
}

/// The bracket identity table: classical brackets and their two-path checks.
pub fn run_brackets(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let ctx = Ctx::new(cfg)?;
    let mut checks = bracket_checks(&ctx)?;
    checks.extend(poisson_checks(&ctx)?);
    Ok(Report::new("brackets", cfg, checks))
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    lat: Arc<ModeLattice>,
}

impl<'a> Ctx<'a> {
    fn new(cfg: &'a RunConfig) -> Result<Self> {
        Ok(Ctx { cfg, lat: Arc::new(cfg.lattice.build()?) })
    }

    /// Independent, reproducible stream per check.
    fn rng(&self, tag: u64) -> SeededRng {
        random::rng(self.cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(tag))
    }

    fn eq(&self, name: &str, lhs: impl Into<crate::report::Value>, rhs: impl Into<crate::report::Value>, tol: f64) -> CheckRecord {
        CheckRecord::equal(name, lhs, rhs, self.cfg.tolerance(name, tol))
    }

    fn ge(&self, name: &str, lhs: f64, bound: f64) -> CheckRecord {
        CheckRecord::at_least(name, lhs, bound, self.cfg.tolerance(name, 0.0))
    }

    fn lambda(&self) -> f64 {
        self.cfg.lambda
    }
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Max of `f` over items, keeping the pair with the largest difference.
struct Worst {
    lhs: Complex64,
    rhs: Complex64,
    diff: f64,
}

impl Worst {
    fn new() -> Self {
        Worst { lhs: zero(), rhs: zero(), diff: -1.0 }
    }
    fn push(&mut self, lhs: Complex64, rhs: Complex64) {
        let d = (lhs - rhs).norm();
        if d > self.diff || d.is_nan() {
            *self = Worst { lhs, rhs, diff: d };
        }
    }
    fn record(&self, ctx: &Ctx, name: &str, tol: f64) -> CheckRecord {
        ctx.eq(name, self.lhs, self.rhs, tol)
    }
}

fn three_point_grid(center: f64, dt: f64) -> [f64; 3] {
    [center - dt, center, center + dt]
}

fn msymp_checks(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    let lat = &ctx.lat;
    let forms = KgForms::new(lat.dim(), lat.mass());
    let mut out = Vec::new();

    // pointwise forms
    let mut r = ctx.rng(1);
    let n = forms.n();
    let mut dtheta = Worst::new();
    for lambda in [0.0, 0.5, 1.0, ctx.lambda()] {
        for _ in 0..10 {
            let mut pt = MPoint::origin(n);
            pt.phi = r.gen_range(-1.0..1.0);
            pt.e = r.gen_range(-1.0..1.0);
            pt.p = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
            let vs: Vec<MTangent<f64>> = (0..=n)
                .map(|_| {
                    let mut v = MTangent::zero(n);
                    for c in Coord::all(n) {
                        *v.component_mut(c) = r.gen_range(-1.0..1.0);
                    }
                    v
                })
                .collect();
            let d = exterior_derivative_fd(|p, a| forms.theta_eval(lambda, p, a).expect("arity n"), &pt, &vs, 0.5);
            dtheta.push(d.into(), forms.omega_eval(&vs)?.into());
        }
    }
    out.push(dtheta.record(ctx, "msymp.dtheta_equals_omega", 1e-12));
    out.push(ctx.ge("msymp.omega_nondegenerate", forms.contraction_min_singular_value(), 1e-8));

    // on-shell slices
    let mut hzero = 0.0f64;
    let mut h2 = 0.0f64;
    let grid: Vec<Vec<f64>> = (0..lat.grid_len()).map(|j| lat.grid_point(j)).collect();
    for _ in 0..5 {
        let sol = random::real_solution(lat, &mut r);
        for t in [0.0, 0.7, 3.1] {
            let s = sol.evaluate_fields(t);
            hzero = s.hamiltonian_density(lat.mass()).iter().fold(hzero, |m, v| m.max(v.norm()));
            h2 = h2.max(forms.hamilton2_defect(&sol.jet(t), &grid)?);
        }
    }
    out.push(ctx.eq("msymp.hamiltonian_on_shell", hzero, 0.0, 1e-12));
    out.push(ctx.eq("msymp.hamilton_curve_equation", h2, 0.0, 1e-10));

    // Hamilton system residual, centered differences
    let sols: Vec<Solution> = (0..5).map(|_| random::real_solution(lat, &mut r)).collect();
    let errs: Vec<f64> = ORDER_STEPS
        .iter()
        .map(|&dt| {
            sols.iter()
                .map(|s| hamilton_residual(s, &three_point_grid(0.5, dt)))
                .try_fold(0.0f64, |m, e| e.map(|e| m.max(e)))
        })
        .collect::<Result<_>>()?;
    out.push(ctx.eq("msymp.hamilton_residual_order", observed_order(&ORDER_STEPS, &errs), 2.0, 0.1));

    // action between slices
    let mut r = ctx.rng(2);
    let (t1, t2) = (0.0, 1.0);
    let mut lagr = Worst::new();
    let mut half = Worst::new();
    let mut zero_lambda = Worst::new();
    for _ in 0..20 {
        let sol = random::real_solution(lat, &mut r);
        let l = lagrangian_action(&sol, t1, t2, ACTION_POINTS)?;
        lagr.push(action_between_slices(&sol, 1.0, t1, t2, ACTION_POINTS)?, l);
        half.push(action_between_slices(&sol, 0.5, t1, t2, ACTION_POINTS)?, zero());
        zero_lambda.push(action_between_slices(&sol, 0.0, t1, t2, ACTION_POINTS)?, -l);
    }
    out.push(lagr.record(ctx, "msymp.action_equals_lagrangian", 1e-8));
    out.push(half.record(ctx, "msymp.action_half_vanishes", 1e-8));
    out.push(zero_lambda.record(ctx, "msymp.action_lambda0_is_minus_lagrangian", 1e-8));

    // criticality
    let mut r = ctx.rng(3);
    let mut crit = 0.0f64;
    let env = Envelope::new(0.2, 1.8, 8);
    for _ in 0..10 {
        let sol = random::real_solution(lat, &mut r);
        let var = Enveloped { field: random::real_solution(lat, &mut r), envelope: env };
        crit = crit.max(action_criticality(&sol, &var, ctx.lambda(), 1e-2, ACTION_POINTS)?);
    }
    out.push(ctx.eq("msymp.criticality_on_shell", crit, 0.0, 1e-8));
    let base = random::real_solution(lat, &mut r);
    let var = Enveloped { field: random::real_solution(lat, &mut r), envelope: env };
    let off = action_criticality(&DetunedField::new(&base, 1.1), &var, ctx.lambda(), 1e-2, ACTION_POINTS)?;
    out.push(ctx.ge("msymp.criticality_off_shell", off, 1e-3));

    out.extend(kg_checks(ctx)?);
    Ok(out)
}

fn kg_checks(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    let lat = &ctx.lat;
    let mut out = Vec::new();
    let mut r = ctx.rng(4);

    let mut round = Worst::new();
    for _ in 0..5 {
        let sol = random::real_solution(lat, &mut r);
        let (phi, pi) = sol.evaluate_fields(0.0).cauchy_real();
        let back = Solution::from_cauchy(lat.clone(), &phi, &pi)?;
        for k in 0..lat.num_modes() {
            round.push(back.u()[k], sol.u()[k]);
        }
    }
    out.push(round.record(ctx, "kg.cauchy_round_trip", 1e-12));

    let sol = random::real_solution(lat, &mut r);
    let (phi0, pi0) = sol.evaluate_fields(0.0).cauchy_real();
    let (phi1, _) = sol.evaluate_fields(1.0).cauchy_real();
    let steps: [f64; 3] = [0.02, 0.01, 0.005];
    let errs: Vec<f64> = steps
        .iter()
        .map(|&dt| {
            let n = (1.0 / dt).round() as usize;
            let s = leapfrog_evolve(lat, &phi0, &pi0, dt, n)?;
            Ok(s.phi.iter().zip(&phi1).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
        })
        .collect::<Result<_>>()?;
    out.push(ctx.eq("kg.leapfrog_order", observed_order(&steps, &errs), 2.0, 0.1));

    let dt = 0.01;
    let e0 = leapfrog_shadow_energy(lat, &phi0, &pi0, dt)?;
    let mut drift = 0.0f64;
    let mut err = None;
    leapfrog_trajectory(lat, &phi0, &pi0, dt, 1000, |s| match leapfrog_shadow_energy(lat, &s.phi, &s.pi, dt) {
        Ok(e) => drift = drift.max((e - e0).abs()),
        Err(e) => err = Some(e),
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    out.push(ctx.eq("kg.leapfrog_energy_drift", drift, 0.0, 1e-6));
    Ok(out)
}

fn observable_checks(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    let lat = &ctx.lat;
    let mut out = Vec::new();
    let mut r = ctx.rng(10);

    let mut ak = Worst::new();
    for _ in 0..3 {
        let sol = random::complex_solution(lat, &mut r);
        for k in 0..lat.num_modes() {
            for t in [0.0, 1.7] {
                ak.push(crate::observables::a_k(&sol, k, t)?, sol.u()[k]);
                ak.push(crate::observables::a_star_k(&sol, k, t)?, sol.ustar()[k]);
            }
        }
    }
    out.push(ak.record(ctx, "obs.a_k_equals_mode_data", 1e-12));

    let mut energy = Worst::new();
    for _ in 0..3 {
        let sol = random::real_solution(lat, &mut r);
        let (phi, pi) = sol.evaluate_fields(0.4).cauchy_real();
        let e = crate::evolution::energy(lat, &phi, &pi)?;
        let p0 = slice_integral(&ObservableForm::Pmu { mu: 0, lambda: 1.0 }, &sol, 0.4)?;
        energy.push(-p0, e.into());
    }
    out.push(energy.record(ctx, "obs.energy_is_minus_p0", 1e-12));

    // slice independence of all forms
    let sol = random::complex_solution(lat, &mut r);
    let forms = sample_forms(ctx, &mut r);
    let mut indep = Worst::new();
    for f in &forms {
        let base = slice_integral(f, &sol, 0.0)?;
        for t in [1.0, 2.5, 7.0] {
            indep.push(slice_integral(f, &sol, t)?, base);
        }
    }
    out.push(indep.record(ctx, "obs.slice_independence", 1e-12));

    // Noether currents
    let mut r = ctx.rng(11);
    let sol = random::real_solution(lat, &mut r);
    let gen = random::complex_solution(lat, &mut r);
    let errs: Vec<f64> = ORDER_STEPS
        .iter()
        .map(|&dt| noether_divergence(&gen, &sol, &three_point_grid(0.5, dt)))
        .collect::<Result<_>>()?;
    out.push(ctx.eq("obs.noether_divergence_order", observed_order(&ORDER_STEPS, &errs), 2.0, 0.1));
    let lin = crate::field::PolynomialInTime::linear(lat.clone());
    out.push(ctx.ge(
        "obs.noether_non_solution",
        noether_divergence(&lin, &sol, &three_point_grid(1.0, 0.025))?,
        1e-3,
    ));

    out.extend(bracket_checks(ctx)?);
    out.extend(poisson_checks(ctx)?);
    Ok(out)
}

fn sample_forms(ctx: &Ctx, r: &mut SeededRng) -> Vec<ObservableForm> {
    let lat = &ctx.lat;
    let mut forms = vec![
        ObservableForm::FPhi(random::complex_solution(lat, r)),
        ObservableForm::AlphaK(r.gen_range(0..lat.num_modes())),
        ObservableForm::AlphaStarK(r.gen_range(0..lat.num_modes())),
        ObservableForm::AlphaF(random::mode_function(lat, r)),
        ObservableForm::AlphaStarG(random::mode_function(lat, r)),
    ];
    for mu in 0..=lat.dim() {
        forms.push(ObservableForm::Pmu { mu, lambda: ctx.lambda() });
    }
    forms.push(ObservableForm::BracketForm(random::complex_solution(lat, r), random::complex_solution(lat, r)));
    forms
}

fn bracket_checks(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    let lat = &ctx.lat;
    let mut out = Vec::new();
    let mut r = ctx.rng(12);

    let mut indep = Worst::new();
    let mut anti = Worst::new();
    for _ in 0..5 {
        let phi = random::complex_solution(lat, &mut r);
        let psi = random::complex_solution(lat, &mut r);
        let b0 = bracket_integral(&phi, &psi, 0.0);
        for t in [1.0, 2.5, 7.0] {
            indep.push(bracket_integral(&phi, &psi, t), b0);
        }
        anti.push(bracket_integral(&psi, &phi, 0.0), -b0);
    }
    out.push(indep.record(ctx, "obs.bracket_slice_independence", 1e-12));
    out.push(anti.record(ctx, "obs.bracket_antisymmetry", 0.0));

    let mut ccr = Worst::new();
    let mut aa = Worst::new();
    let mut asas = Worst::new();
    for _ in 0..20 {
        let f = random::mode_function(lat, &mut r);
        let g = random::mode_function(lat, &mut r);
        let (sum, form) = bracket_regularized(lat, &f, &g, 0.0)?;
        ccr.push(form, sum);
        let gf = crate::observables::alpha_generator(lat, &f)?;
        let gg = crate::observables::alpha_generator(lat, &g)?;
        aa.push(bracket_integral(&gf, &gg, 0.0), zero());
        let sf = crate::observables::alpha_star_generator(lat, &f)?;
        let sg = crate::observables::alpha_star_generator(lat, &g)?;
        asas.push(bracket_integral(&sf, &sg, 0.0), zero());
    }
    out.push(ccr.record(ctx, "obs.ccr_two_path", 1e-10));
    out.push(aa.record(ctx, "obs.annihilators_commute", 1e-12));
    out.push(asas.record(ctx, "obs.creators_commute", 1e-12));

    let mut pmu = Worst::new();
    let sol = random::real_solution(lat, &mut r);
    for _ in 0..5 {
        let phi = random::complex_solution(lat, &mut r);
        for mu in 0..=lat.dim() {
            let (a, b) = pmu_bracket_identity(mu, &phi, &sol, 0.3)?;
            pmu.push(a, b);
        }
    }
    out.push(pmu.record(ctx, "obs.translation_bracket", 1e-10));
    Ok(out)
}

fn poisson_checks(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    let lat = &ctx.lat;
    let mut r = ctx.rng(13);
    let sol = random::real_solution(lat, &mut r);
    let mut forms = vec![
        ObservableForm::FPhi(random::complex_solution(lat, &mut r)),
        ObservableForm::AlphaF(random::mode_function(lat, &mut r)),
        ObservableForm::AlphaStarG(random::mode_function(lat, &mut r)),
    ];
    for mu in 0..=lat.dim() {
        forms.push(ObservableForm::Pmu { mu, lambda: ctx.lambda() });
    }
    let mut w = Worst::new();
    for f in &forms {
        for g in &forms {
            let xf = Deformation::vertical(f.hamiltonian_field(&sol)?.expect("F_Phi or P_mu"));
            let xg = Deformation::vertical(g.hamiltonian_field(&sol)?.expect("F_Phi or P_mu"));
            w.push(omega_sigma(&sol, &xf, &xg, 0.6)?, classical_bracket(f, g, &sol, 0.6)?);
        }
    }
    Ok(vec![w.record(ctx, "obs.omega_equals_poisson_bracket", 1e-10)])
}

fn phase_space_checks(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    let lat = &ctx.lat;
    let mut out = Vec::new();
    let mut r = ctx.rng(20);
    let lambda = ctx.lambda();

    let mut paths = Worst::new();
    let mut tind = Worst::new();
    let mut lind = Worst::new();
    let mut fd = Worst::new();
    let mut eps = Worst::new();
    let mut lin = Worst::new();
    let mut rep_theta = Worst::new();
    let mut rep_omega = Worst::new();
    for _ in 0..5 {
        let sol = random::real_solution(lat, &mut r);
        let d1 = random::real_solution(lat, &mut r);
        let d2 = random::real_solution(lat, &mut r);
        let v1 = Deformation::vertical(d1.clone());
        let v2 = Deformation::vertical(d2.clone());
        let w0 = omega_sigma_closed(&sol, &d1, &d2, 0.0);
        paths.push(omega_sigma_pointwise(&sol, &v1, &v2, 0.0)?, w0);
        for t in [1.0, 2.5, 7.0] {
            tind.push(omega_sigma_closed(&sol, &d1, &d2, t), w0);
        }
        let fd0 = fd_delta_theta(&sol, &d1, &d2, 0.0, 0.0, 0.5)?;
        let fd1 = fd_delta_theta(&sol, &d1, &d2, 1.0, 0.0, 0.5)?;
        lind.push(fd1, fd0);
        let fdl = fd_delta_theta(&sol, &d1, &d2, lambda, 0.0, 0.5)?;
        fd.push(fdl, w0);
        eps.push(fd_delta_theta(&sol, &d1, &d2, lambda, 0.0, 0.25)?, fdl);

        let (a, b) = (0.7, -1.3);
        let comb = Deformation::vertical(d1.combine(a.into(), &d2, b.into()));
        let th = |d: &Deformation| theta_sigma(&sol, d, lambda, 0.9);
        lin.push(th(&comb)?, a * th(&v1)? + b * th(&v2)?);
        for i in 1..=lat.dim() {
            rep_theta.push(th(&v1.clone().with_tangential(i, 0.8))?, th(&v1)?);
        }
        for mu in 0..=lat.dim() {
            let shifted = v1.clone().with_tangential(mu, -0.6);
            rep_omega.push(omega_sigma_pointwise(&sol, &shifted, &v2, 0.9)?, omega_sigma_closed(&sol, &d1, &d2, 0.9));
        }
    }
    out.push(paths.record(ctx, "ps.omega_two_paths", 1e-10));
    out.push(tind.record(ctx, "ps.omega_slice_independence", 1e-12));
    out.push(lind.record(ctx, "ps.omega_lambda_independence", 1e-12));
    out.push(fd.record(ctx, "ps.delta_theta_equals_omega", 1e-10));
    out.push(eps.record(ctx, "ps.delta_theta_step_independence", 1e-11));
    out.push(lin.record(ctx, "ps.theta_linearity", 1e-12));
    out.push(rep_theta.record(ctx, "ps.theta_representative_independence", 1e-10));
    out.push(rep_omega.record(ctx, "ps.omega_representative_independence", 1e-10));

    // single-mode canonical pairing
    let mut pair = Worst::new();
    let zero_sol = Solution::zero(lat.clone());
    for k in 0..lat.num_modes() {
        let (a, b) = (random::complex(&mut r), random::complex(&mut r));
        let mk = |c: Complex64| {
            let mut u = vec![zero(); lat.num_modes()];
            u[k] = c;
            Solution::real(lat.clone(), u)
        };
        let w = omega_sigma_closed(&zero_sol, &mk(a)?, &mk(b)?, 0.3);
        pair.push(w, (2.0 * lat.weight(k) * (a * b.conj()).im).into());
    }
    out.push(pair.record(ctx, "ps.single_mode_pairing", 1e-12));

    let spec = gram_spectrum(&zero_sol, 0.0);
    out.push(ctx.ge("ps.gram_full_rank", spec.normalized_min(), 1e-8));

    let mut diff = Worst::new();
    for _ in 0..10 {
        let sol = random::real_solution(lat, &mut r);
        let delta = random::real_solution(lat, &mut r);
        let (a, b) = theta_difference_vs_action(&sol, &delta, lambda, 0.0, 1.0, 0.5, ACTION_POINTS)?;
        diff.push(a, b);
    }
    out.push(diff.record(ctx, "ps.theta_difference_equals_action_variation", 1e-8));
    Ok(out)
}

/// Dyadic rationals in `[-1, 1]`: products and sums of a few of them are exact.
fn dyadic_function(lat: &ModeLattice, r: &mut SeededRng) -> Vec<Complex64> {
    (0..lat.num_modes())
        .map(|_| Complex64::new(r.gen_range(-8..=8) as f64 / 8.0, r.gen_range(-8..=8) as f64 / 8.0))
        .collect()
}

/// Unit-norm state with a random coefficient on every monomial of `basis`.
fn random_state(lat: &Arc<ModeLattice>, basis: &[MultiIndex], r: &mut SeededRng) -> Result<PolarizedState> {
    let mut s = PolarizedState::zero(lat.clone());
    for alpha in basis {
        s.insert(alpha.clone(), random::complex(r))?;
    }
    let norm = inner_product(&s, &s).re.sqrt();
    Ok(s.scale(Complex64::new(1.0 / norm, 0.0)))
}

/// Smearing functions and translation for the prequantization checks; `None`
/// entries are drawn from the seeded generator.
#[derive(Debug, Clone, Default)]
pub struct PrequantInputs {
    pub f: Option<Vec<Complex64>>,
    pub g: Option<Vec<Complex64>>,
    pub zeta: Option<Vec<f64>>,
    pub degree: Option<u32>,
}

/// The prequantization checks alone, on the given inputs.
pub fn run_prequant(cfg: &RunConfig, inputs: &PrequantInputs) -> Result<Report> {
    cfg.validate()?;
    let ctx = Ctx::new(cfg)?;
    Ok(Report::new("prequant", cfg, prequant_checks_with(&ctx, inputs)?))
}

fn prequant_checks(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    prequant_checks_with(ctx, &PrequantInputs::default())
}

fn prequant_checks_with(ctx: &Ctx, inputs: &PrequantInputs) -> Result<Vec<CheckRecord>> {
    let lat = &ctx.lat;
    let hbar = lat.hbar();
    let mut out = Vec::new();
    let mut r = ctx.rng(30);
    let degree = inputs.degree.unwrap_or(PREQUANT_DEGREE);
    if degree + 2 > crate::prequant::DEFAULT_DEGREE_BOUND {
        return Err(Error::InvalidArgument(format!(
            "degree {degree} leaves no room below the degree bound {}",
            crate::prequant::DEFAULT_DEGREE_BOUND
        )));
    }
    let basis = monomials_up_to(lat.num_modes(), degree);
    let unit = |alpha: &MultiIndex| PolarizedState::monomial(lat.clone(), alpha.clone(), one());

    // CCR on every monomial
    let f = random::mode_function(lat, &mut r);
    let g = random::mode_function(lat, &mut r);
    let f = inputs.f.clone().unwrap_or(f);
    let g = inputs.g.clone().unwrap_or(g);
    let c: Complex64 = (0..lat.num_modes()).map(|k| hbar * lat.weight(k) * f[k] * g[k]).sum();
    let (af, asg) = (Operator::A(f.clone()), Operator::AStar(g.clone()));
    let mut ccr = 0.0f64;
    let mut aa = 0.0f64;
    let mut asas = 0.0f64;
    let f2 = random::mode_function(lat, &mut r);
    let g2 = random::mode_function(lat, &mut r);
    for alpha in &basis {
        let m = unit(alpha)?;
        let lhs = commutator(&af, &asg, &m)?;
        ccr = ccr.max(lhs.sub(&m.scale(c)).max_abs());
        aa = aa.max(commutator(&af, &Operator::A(f2.clone()), &m)?.max_abs());
        asas = asas.max(commutator(&asg, &Operator::AStar(g2.clone()), &m)?.max_abs());
    }
    out.push(ctx.eq("pq.ccr_on_monomials", ccr, 0.0, 1e-12));
    out.push(ctx.eq("pq.annihilators_commute", aa, 0.0, 1e-12));
    out.push(ctx.eq("pq.creators_commute", asas, 0.0, 1e-12));

    // exact cancellation on dyadic data: count surviving terms
    let (fd1, fd2) = (dyadic_function(lat, &mut r), dyadic_function(lat, &mut r));
    let (gd1, gd2) = (dyadic_function(lat, &mut r), dyadic_function(lat, &mut r));
    let mut aa_terms = 0usize;
    let mut asas_terms = 0usize;
    for alpha in &basis {
        let m = unit(alpha)?;
        aa_terms += commutator(&Operator::A(fd1.clone()), &Operator::A(fd2.clone()), &m)?.coeffs().len();
        asas_terms += commutator(&Operator::AStar(gd1.clone()), &Operator::AStar(gd2.clone()), &m)?.coeffs().len();
    }
    out.push(ctx.eq("pq.annihilators_commute_exactly", aa_terms as f64, 0.0, 0.0));
    out.push(ctx.eq("pq.creators_commute_exactly", asas_terms as f64, 0.0, 0.0));

    // translations
    let mut zetas = vec![{
        let mut z = vec![0.0; lat.dim() + 1];
        z[0] = 1.0;
        z
    }];
    let zeta: Vec<f64> = (0..=lat.dim()).map(|_| r.gen_range(-1.0..1.0)).collect();
    let zeta = inputs.zeta.clone().unwrap_or(zeta);
    if zeta.len() != lat.dim() + 1 {
        return Err(Error::ShapeMismatch { expected: lat.dim() + 1, got: zeta.len() });
    }
    zetas.push(zeta);
    let vac = PolarizedState::vacuum(lat.clone());
    let vac_terms: usize = zetas.iter().map(|z| op_p(z, &vac).map(|s| s.coeffs().len())).sum::<Result<_>>()?;
    out.push(ctx.eq("pq.vacuum_energy_vanishes", vac_terms as f64, 0.0, 0.0));
    let mut eig = 0.0f64;
    let mut min_energy = f64::INFINITY;
    let mut p_comm = 0.0f64;
    for alpha in &basis {
        let m = unit(alpha)?;
        for z in &zetas {
            let expected: f64 = -hbar * alpha.iter().map(|&(k, e)| e as f64 * lat.k_dot(k, z)).sum::<f64>();
            let got = op_p(z, &m)?;
            eig = eig.max(got.sub(&m.scale(expected.into())).max_abs());
            let gp: Vec<Complex64> = (0..lat.num_modes()).map(|k| lat.k_dot(k, z) * g[k]).collect();
            let lhs = commutator(&Operator::P(z.clone()), &asg, &m)?;
            let rhs = op_a_star(&gp, &m)?.scale((-hbar).into());
            p_comm = p_comm.max(lhs.sub(&rhs).max_abs());
        }
        min_energy = min_energy.min(-p_eigenvalue(lat, &zetas[0], alpha));
    }
    out.push(ctx.eq("pq.translation_eigenvalues", eig, 0.0, 1e-12));
    out.push(ctx.ge("pq.energy_nonnegative", min_energy, 0.0));
    out.push(ctx.eq("pq.translation_creator_commutator", p_comm, 0.0, 1e-12));

    // adjointness on dense states
    let mut adj = Worst::new();
    for _ in 0..5 {
        let s1 = random_state(lat, &basis, &mut r)?;
        let s2 = random_state(lat, &basis, &mut r)?;
        let h = random::mode_function(lat, &mut r);
        let h_conj: Vec<Complex64> = h.iter().map(|c| c.conj()).collect();
        adj.push(inner_product(&op_a(&h, &s1)?, &s2), inner_product(&s1, &op_a_star(&h_conj, &s2)?));
    }
    out.push(adj.record(ctx, "pq.adjointness", 1e-12));

    // quantum commutator against the classical bracket: [F, G] = (hbar / i) {F, G}
    let (_, classical) = bracket_regularized(lat, &f, &g, 0.0)?;
    let quantum = commutator(&af, &asg, &vac)?.coeff(&MultiIndex::new());
    out.push(ctx.eq("pq.commutator_matches_bracket", quantum, hbar / Complex64::i() * classical, 1e-10));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in [Suite::Msymp, Suite::Observables, Suite::PhaseSpace, Suite::Prequant, Suite::All] {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }
}
