//! Spacetime fields sampled on constant-time slices.
//!
//! Everything downstream (slice data, action densities, Noether currents) is
//! computed from a [`FieldJet`]: the value of a scalar field together with its
//! first and second spacetime derivatives on the spatial grid at one instant.
//! On-shell fields come from [`Solution`](crate::Solution); the auxiliary
//! fields in this module are deliberately allowed to be off shell so that the
//! criticality and residual checks have something to fail on.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::lattice::ModeLattice;

/// Field value with first and second derivatives on the grid at time `t`.
///
/// `grad[mu][j]` holds `d_mu phi` and `hess[mu * (d + 1) + nu][j]` holds
/// `d_mu d_nu phi` at grid point `j`, with `mu = 0` the time direction.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldJet {
    pub t: f64,
    pub value: Vec<Complex64>,
    pub grad: Vec<Vec<Complex64>>,
    pub hess: Vec<Vec<Complex64>>,
}

impl FieldJet {
    pub fn zeros(dim: usize, len: usize, t: f64) -> Self {
        let n = dim + 1;
        let z = vec![Complex64::new(0.0, 0.0); len];
        FieldJet { t, value: z.clone(), grad: vec![z.clone(); n], hess: vec![z; n * n] }
    }

    /// Number of spacetime directions `n = d + 1`.
    pub fn spacetime_dim(&self) -> usize {
        self.grad.len()
    }

    pub fn len(&self) -> usize {
        self.value.len()
    }

    pub fn is_empty(&self) -> bool {
        self.value.is_empty()
    }

    pub fn second(&self, mu: usize, nu: usize) -> &[Complex64] {
        &self.hess[mu * self.spacetime_dim() + nu]
    }

    /// `self += scale * other`.
    pub fn add_scaled(&mut self, scale: Complex64, other: &FieldJet) {
        fn axpy(y: &mut [Complex64], a: Complex64, x: &[Complex64]) {
            y.iter_mut().zip(x).for_each(|(y, x)| *y += a * x);
        }
        axpy(&mut self.value, scale, &other.value);
        for (g, o) in self.grad.iter_mut().zip(&other.grad) {
            axpy(g, scale, o);
        }
        for (h, o) in self.hess.iter_mut().zip(&other.hess) {
            axpy(h, scale, o);
        }
    }

    /// Wave operator `box phi = eta^{mu nu} d_mu d_nu phi` at each grid point.
    pub fn wave_operator(&self) -> Vec<Complex64> {
        let n = self.spacetime_dim();
        (0..self.len())
            .map(|j| {
                let mut s = self.hess[0][j];
                for i in 1..n {
                    s -= self.hess[i * n + i][j];
                }
                s
            })
            .collect()
    }

    /// Minkowski contraction `eta^{mu nu} d_mu a d_nu b` of two jets, pointwise.
    pub fn gradient_pairing(&self, other: &FieldJet) -> Vec<Complex64> {
        let n = self.spacetime_dim();
        (0..self.len())
            .map(|j| {
                let mut s = self.grad[0][j] * other.grad[0][j];
                for i in 1..n {
                    s -= self.grad[i][j] * other.grad[i][j];
                }
                s
            })
            .collect()
    }
}

/// A scalar field on spacetime that can be sampled on the lattice grid.
pub trait SpacetimeField {
    fn lattice(&self) -> &ModeLattice;
    fn jet(&self, t: f64) -> FieldJet;
}

impl<F: SpacetimeField + ?Sized> SpacetimeField for &F {
    fn lattice(&self) -> &ModeLattice {
        (**self).lattice()
    }
    fn jet(&self, t: f64) -> FieldJet {
        (**self).jet(t)
    }
}

/// Jet of `sum_k c w_k (u_k e^{-i(w_k t - k.x)} + u*_k e^{i(w_k t - k.x)})` with
/// per-mode temporal frequencies `freq` (on shell when `freq = k0`).
pub(crate) fn mode_sum_jet(
    lat: &ModeLattice,
    u: &[Complex64],
    ustar: &[Complex64],
    freq: &[f64],
    t: f64,
) -> FieldJet {
    let d = lat.dim();
    let n = d + 1;
    let m = lat.num_modes();
    let c = lat.fourier_norm();
    let i = Complex64::i();
    // Spatial coefficients of exp(i k.x): the u-term of mode k and the u*-term of mode -k.
    let mut first = Vec::with_capacity(m);
    let mut second = Vec::with_capacity(m);
    for k in 0..m {
        let kb = lat.neg_mode(k);
        let wf = freq[k];
        first.push(u[k] * c * lat.weight(k) * Complex64::from_polar(1.0, -wf * t));
        second.push(ustar[kb] * c * lat.weight(kb) * Complex64::from_polar(1.0, freq[kb] * t));
    }
    // derivative factor of each term along direction mu
    let factor = |k: usize, mu: usize, which: usize| -> Complex64 {
        if mu == 0 {
            let w = if which == 0 { freq[k] } else { freq[lat.neg_mode(k)] };
            if which == 0 {
                -i * w
            } else {
                i * w
            }
        } else {
            i * lat.kvec(k)[mu - 1]
        }
    };
    let build = |dirs: &[usize]| -> Vec<Complex64> {
        let coeffs: Vec<Complex64> = (0..m)
            .map(|k| {
                let mut a = first[k];
                let mut b = second[k];
                for &mu in dirs {
                    a *= factor(k, mu, 0);
                    b *= factor(k, mu, 1);
                }
                a + b
            })
            .collect();
        lat.synthesize(&coeffs).expect("coefficient vector has one entry per mode")
    };
    let value = build(&[]);
    let grad: Vec<Vec<Complex64>> = (0..n).map(|mu| build(&[mu])).collect();
    let mut hess = vec![Vec::new(); n * n];
    for mu in 0..n {
        for nu in mu..n {
            let h = build(&[mu, nu]);
            if nu != mu {
                hess[nu * n + mu] = h.clone();
            }
            hess[mu * n + nu] = h;
        }
    }
    FieldJet { t, value, grad, hess }
}

/// Mode-sum field whose temporal frequencies are `factor * k0`: off shell unless `factor = 1`.
#[derive(Debug, Clone)]
pub struct DetunedField {
    lat: Arc<ModeLattice>,
    u: Vec<Complex64>,
    ustar: Vec<Complex64>,
    freq: Vec<f64>,
}

impl DetunedField {
    pub fn new(sol: &crate::Solution, factor: f64) -> Self {
        let lat = sol.lattice_arc().clone();
        let freq = (0..lat.num_modes()).map(|k| factor * lat.k0(k)).collect();
        DetunedField { lat, u: sol.u().to_vec(), ustar: sol.ustar().to_vec(), freq }
    }
}

impl SpacetimeField for DetunedField {
    fn lattice(&self) -> &ModeLattice {
        &self.lat
    }
    fn jet(&self, t: f64) -> FieldJet {
        mode_sum_jet(&self.lat, &self.u, &self.ustar, &self.freq, t)
    }
}

/// Spatially constant field `phi(t) = sum_n c_n t^n`.
#[derive(Debug, Clone)]
pub struct PolynomialInTime {
    lat: Arc<ModeLattice>,
    coeffs: Vec<f64>,
}

impl PolynomialInTime {
    pub fn new(lat: Arc<ModeLattice>, coeffs: Vec<f64>) -> Self {
        PolynomialInTime { lat, coeffs }
    }

    /// `phi(t) = t`.
    pub fn linear(lat: Arc<ModeLattice>) -> Self {
        Self::new(lat, vec![0.0, 1.0])
    }

    fn eval(&self, t: f64, order: usize) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(order)
            .map(|(p, c)| {
                let falling: f64 = (0..order).map(|q| (p - q) as f64).product();
                c * falling * t.powi((p - order) as i32)
            })
            .sum()
    }
}

impl SpacetimeField for PolynomialInTime {
    fn lattice(&self) -> &ModeLattice {
        &self.lat
    }
    fn jet(&self, t: f64) -> FieldJet {
        let len = self.lat.grid_len();
        let mut jet = FieldJet::zeros(self.lat.dim(), len, t);
        let fill = |v: f64| vec![Complex64::new(v, 0.0); len];
        jet.value = fill(self.eval(t, 0));
        jet.grad[0] = fill(self.eval(t, 1));
        jet.hess[0] = fill(self.eval(t, 2));
        jet
    }
}

/// Smooth time window `sin^p(pi (t - t1) / (t2 - t1))` on `[t1, t2]`, zero outside.
///
/// For `p >= 2` the window and its first derivative vanish at both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub t1: f64,
    pub t2: f64,
    pub power: i32,
}

impl Envelope {
    pub fn new(t1: f64, t2: f64, power: i32) -> Self {
        Envelope { t1, t2, power }
    }

    /// Window value and its first two time derivatives.
    pub fn eval(&self, t: f64) -> [f64; 3] {
        if t <= self.t1 || t >= self.t2 {
            return [0.0; 3];
        }
        let a = PI / (self.t2 - self.t1);
        let x = a * (t - self.t1);
        let (s, c) = x.sin_cos();
        let p = self.power as f64;
        let v = s.powi(self.power);
        let d1 = p * a * s.powi(self.power - 1) * c;
        let d2 = p * a * a * ((p - 1.0) * s.powi(self.power - 2) * c * c - s.powi(self.power));
        [v, d1, d2]
    }
}

/// `chi(t) * psi(t, x)` for an envelope `chi` and any field `psi`.
#[derive(Debug, Clone)]
pub struct Enveloped<F> {
    pub field: F,
    pub envelope: Envelope,
}

impl<F: SpacetimeField> SpacetimeField for Enveloped<F> {
    fn lattice(&self) -> &ModeLattice {
        self.field.lattice()
    }
    fn jet(&self, t: f64) -> FieldJet {
        let inner = self.field.jet(t);
        let [chi, dchi, ddchi] = self.envelope.eval(t);
        let n = inner.spacetime_dim();
        let mut out = FieldJet::zeros(n - 1, inner.len(), t);
        let r = |x: f64| Complex64::new(x, 0.0);
        out.add_scaled(r(chi), &inner);
        // product rule corrections from the time dependence of chi
        for j in 0..inner.len() {
            out.grad[0][j] += dchi * inner.value[j];
            out.hess[0][j] += ddchi * inner.value[j] + 2.0 * dchi * inner.grad[0][j];
            for mu in 1..n {
                let extra = dchi * inner.grad[mu][j];
                out.hess[mu][j] += extra;
                out.hess[mu * n][j] += extra;
            }
        }
        out
    }
}

/// Linear combination `sum_i c_i phi_i` of fields on a common lattice.
pub struct Combination<'a> {
    terms: Vec<(Complex64, &'a dyn SpacetimeField)>,
}

impl<'a> Combination<'a> {
    pub fn new(first: &'a dyn SpacetimeField) -> Self {
        Combination { terms: vec![(Complex64::new(1.0, 0.0), first)] }
    }

    pub fn plus(mut self, coeff: f64, field: &'a dyn SpacetimeField) -> Self {
        self.terms.push((Complex64::new(coeff, 0.0), field));
        self
    }
}

impl SpacetimeField for Combination<'_> {
    fn lattice(&self) -> &ModeLattice {
        self.terms[0].1.lattice()
    }
    fn jet(&self, t: f64) -> FieldJet {
        let lat = self.lattice();
        let mut out = FieldJet::zeros(lat.dim(), lat.grid_len(), t);
        for (c, f) in &self.terms {
            out.add_scaled(*c, &f.jet(t));
        }
        out
    }
}

/// Max-norm of the Klein-Gordon residual `box phi + m^2 phi` on the slice at `t`,
/// using the exact second derivatives carried by the jet.
pub fn kg_residual<F: SpacetimeField + ?Sized>(field: &F, t: f64) -> f64 {
    let m2 = field.lattice().mass().powi(2);
    let jet = field.jet(t);
    jet.wave_operator()
        .iter()
        .zip(&jet.value)
        .map(|(b, v)| (b + m2 * v).norm())
        .fold(0.0, f64::max)
}
