//! Prequantization on polarized sections `psi = h(u*) |0>`, where
//! `|0> = exp(-(1/2 hbar) sum_k w_k u_k u*_k)` and `h` is a polynomial.
//!
//! On such sections the `u_k`-multiplication terms of the prequantum operators
//! cancel against the derivatives of the Gaussian:
//!
//! * `a_f psi = hbar sum f_k dpsi/du*_k + (1/2) sum w_k f_k u_k psi`; the derivative of
//!   `|0>` contributes `-(1/2) sum w_k f_k u_k psi`, leaving `hbar sum f_k dh/du*_k |0>`.
//! * `a*_g psi = -hbar sum g_k dpsi/du_k + (1/2) sum w_k g_k u*_k psi`; only the Gaussian
//!   depends on `u_k`, giving `(sum w_k g_k u*_k) h |0>`.
//! * `P_zeta psi = hbar sum (k.zeta)(u_k d/du_k - u*_k d/du*_k) psi`; the Gaussian
//!   terms cancel between the two halves, leaving `-hbar sum (k.zeta) u*_k dh/du*_k |0>`.
//!
//! No metaplectic correction is applied, so `P_zeta |0> = 0`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::ModeLattice;

pub const DEFAULT_DEGREE_BOUND: u32 = 6;

/// Exponents of a monomial `prod_k (u*_k)^{alpha_k}`, as `(mode, exponent)`
/// pairs sorted by mode with nonzero exponents.
pub type MultiIndex = Vec<(usize, u32)>;

pub fn degree(alpha: &MultiIndex) -> u32 {
    alpha.iter().map(|&(_, e)| e).sum()
}

fn shift(alpha: &MultiIndex, k: usize, up: bool) -> Option<MultiIndex> {
    let mut out = alpha.clone();
    match out.binary_search_by_key(&k, |&(m, _)| m) {
        Ok(i) => {
            if up {
                out[i].1 += 1;
            } else if out[i].1 == 1 {
                out.remove(i);
            } else {
                out[i].1 -= 1;
            }
        }
        Err(i) => {
            if !up {
                return None;
            }
            out.insert(i, (k, 1));
        }
    }
    Some(out)
}

/// Sparse polynomial `h(u*)`, implicitly multiplied by the vacuum Gaussian.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizedState {
    lat: Arc<ModeLattice>,
    coeffs: BTreeMap<MultiIndex, Complex64>,
    degree_bound: u32,
}

impl PolarizedState {
    /// The zero section.
    pub fn zero(lat: Arc<ModeLattice>) -> Self {
        PolarizedState { lat, coeffs: BTreeMap::new(), degree_bound: DEFAULT_DEGREE_BOUND }
    }

    /// `|0>`.
    pub fn vacuum(lat: Arc<ModeLattice>) -> Self {
        Self::monomial(lat, MultiIndex::new(), Complex64::new(1.0, 0.0)).expect("degree 0")
    }

    pub fn monomial(lat: Arc<ModeLattice>, alpha: MultiIndex, c: Complex64) -> Result<Self> {
        let mut s = Self::zero(lat);
        s.insert(alpha, c)?;
        Ok(s)
    }

    pub fn with_degree_bound(mut self, bound: u32) -> Result<Self> {
        if let Some(d) = self.coeffs.keys().map(degree).max() {
            if d > bound {
                return Err(Error::DegreeOverflow { degree: d, bound });
            }
        }
        self.degree_bound = bound;
        Ok(self)
    }

    pub fn lattice(&self) -> &Arc<ModeLattice> {
        &self.lat
    }
    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }
    pub fn coeffs(&self) -> &BTreeMap<MultiIndex, Complex64> {
        &self.coeffs
    }
    pub fn coeff(&self, alpha: &MultiIndex) -> Complex64 {
        self.coeffs.get(alpha).copied().unwrap_or_default()
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn max_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(degree).max()
    }

    /// Sets the coefficient of `u*^alpha` (zero removes the term).
    pub fn insert(&mut self, alpha: MultiIndex, c: Complex64) -> Result<()> {
        self.validate(&alpha)?;
        if c == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&alpha);
        } else {
            self.coeffs.insert(alpha, c);
        }
        Ok(())
    }

    fn validate(&self, alpha: &MultiIndex) -> Result<()> {
        let d = degree(alpha);
        if d > self.degree_bound {
            return Err(Error::DegreeOverflow { degree: d, bound: self.degree_bound });
        }
        let sorted = alpha.windows(2).all(|w| w[0].0 < w[1].0);
        let valid = alpha.iter().all(|&(k, e)| k < self.lat.num_modes() && e > 0);
        if !sorted || !valid {
            return Err(Error::InvalidArgument(format!("malformed multi-index {alpha:?}")));
        }
        Ok(())
    }

    fn accumulate(&mut self, alpha: MultiIndex, c: Complex64) {
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(alpha) {
            Entry::Vacant(v) => {
                if c != Complex64::new(0.0, 0.0) {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == Complex64::new(0.0, 0.0) {
                    o.remove();
                }
            }
        }
    }

    fn empty_like(&self) -> Self {
        PolarizedState { lat: self.lat.clone(), coeffs: BTreeMap::new(), degree_bound: self.degree_bound }
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: Complex64, other: &PolarizedState, b: Complex64) -> Self {
        let mut out = self.empty_like();
        out.degree_bound = self.degree_bound.max(other.degree_bound);
        for (alpha, c) in &self.coeffs {
            out.accumulate(alpha.clone(), a * c);
        }
        for (alpha, c) in &other.coeffs {
            out.accumulate(alpha.clone(), b * c);
        }
        out
    }

    pub fn sub(&self, other: &PolarizedState) -> Self {
        self.combine(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
    }

    pub fn scale(&self, a: Complex64) -> Self {
        let z = self.empty_like();
        self.combine(a, &z, Complex64::new(0.0, 0.0))
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().fold(0.0, |m, c| m.max(c.norm()))
    }
}

/// The prequantum operators acting on polarized sections.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    /// `a_f`
    A(Vec<Complex64>),
    /// `a*_g`
    AStar(Vec<Complex64>),
    /// `P_zeta` for a constant spacetime vector `zeta`
    P(Vec<f64>),
}

impl Operator {
    pub fn apply(&self, state: &PolarizedState) -> Result<PolarizedState> {
        match self {
            Operator::A(f) => op_a(f, state),
            Operator::AStar(g) => op_a_star(g, state),
            Operator::P(zeta) => op_p(zeta, state),
        }
    }
}

fn check_modes(lat: &ModeLattice, f: &[Complex64]) -> Result<()> {
    if f.len() != lat.num_modes() {
        return Err(Error::ShapeMismatch { expected: lat.num_modes(), got: f.len() });
    }
    Ok(())
}

/// `a_f h|0> = hbar sum_k f_k dh/du*_k |0>`.
pub fn op_a(f: &[Complex64], state: &PolarizedState) -> Result<PolarizedState> {
    let lat = state.lattice();
    check_modes(lat, f)?;
    let hbar = lat.hbar();
    let mut out = state.empty_like();
    for (alpha, c) in &state.coeffs {
        for &(k, e) in alpha {
            let lowered = shift(alpha, k, false).expect("mode present");
            out.accumulate(lowered, hbar * f[k] * e as f64 * c);
        }
    }
    Ok(out)
}

/// `a*_g h|0> = (sum_k w_k g_k u*_k) h |0>`.
pub fn op_a_star(g: &[Complex64], state: &PolarizedState) -> Result<PolarizedState> {
    let lat = state.lattice();
    check_modes(lat, g)?;
    let mut out = state.empty_like();
    for (alpha, c) in &state.coeffs {
        for (k, gk) in g.iter().enumerate() {
            if *gk == Complex64::new(0.0, 0.0) {
                continue;
            }
            let raised = shift(alpha, k, true).expect("raising always succeeds");
            let d = degree(&raised);
            if d > state.degree_bound {
                return Err(Error::DegreeOverflow { degree: d, bound: state.degree_bound });
            }
            out.accumulate(raised, lat.weight(k) * gk * c);
        }
    }
    Ok(out)
}

/// Eigenvalue `-hbar sum_k alpha_k (k.zeta)` of `P_zeta` on `u*^alpha |0>`.
pub fn p_eigenvalue(lat: &ModeLattice, zeta: &[f64], alpha: &MultiIndex) -> f64 {
    -lat.hbar() * alpha.iter().map(|&(k, e)| e as f64 * lat.k_dot(k, zeta)).sum::<f64>()
}

/// `P_zeta h|0> = -hbar sum_k (k.zeta) u*_k dh/du*_k |0>`, diagonal on monomials.
pub fn op_p(zeta: &[f64], state: &PolarizedState) -> Result<PolarizedState> {
    let lat = state.lattice();
    if zeta.len() != lat.dim() + 1 {
        return Err(Error::ShapeMismatch { expected: lat.dim() + 1, got: zeta.len() });
    }
    let mut out = state.empty_like();
    for (alpha, c) in &state.coeffs {
        out.accumulate(alpha.clone(), p_eigenvalue(lat, zeta, alpha) * c);
    }
    Ok(out)
}

/// `[A, B] state = A(B state) - B(A state)`.
pub fn commutator(a: &Operator, b: &Operator, state: &PolarizedState) -> Result<PolarizedState> {
    let ab = a.apply(&b.apply(state)?)?;
    let ba = b.apply(&a.apply(state)?)?;
    Ok(ab.sub(&ba))
}

/// `<u*^alpha |0>, u*^alpha |0>> = prod_k alpha_k! (hbar / w_k)^{alpha_k}`.
pub fn monomial_norm(lat: &ModeLattice, alpha: &MultiIndex) -> f64 {
    alpha
        .iter()
        .map(|&(k, e)| {
            let r = lat.hbar() / lat.weight(k);
            (1..=e).map(|i| i as f64 * r).product::<f64>()
        })
        .product()
}

/// Pairing on polarized sections, antilinear in the first argument, for which
/// the monomials are orthogonal and `a*_{conj f}` is the adjoint of `a_f`.
pub fn inner_product(s1: &PolarizedState, s2: &PolarizedState) -> Complex64 {
    let lat = s1.lattice();
    s1.coeffs
        .iter()
        .filter_map(|(alpha, c1)| s2.coeffs.get(alpha).map(|c2| c1.conj() * c2 * monomial_norm(lat, alpha)))
        .sum()
}

/// All multi-indices over `modes` of total degree at most `max_degree`, in
/// increasing degree, lexicographic within a degree.
pub fn monomials_up_to(num_modes: usize, max_degree: u32) -> Vec<MultiIndex> {
    fn rec(start: usize, m: usize, left: u32, cur: &mut MultiIndex, out: &mut Vec<MultiIndex>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for k in start..m {
            match cur.last_mut() {
                Some((last, e)) if *last == k => {
                    *e += 1;
                    rec(k, m, left - 1, cur, out);
                    let (_, e) = cur.last_mut().expect("just incremented");
                    *e -= 1;
                }
                _ => {
                    cur.push((k, 1));
                    rec(k, m, left - 1, cur, out);
                    cur.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    for deg in 0..=max_degree {
        rec(0, num_modes, deg, &mut MultiIndex::new(), &mut out);
    }
    out
}

/// `(alpha, degree, eigenvalue of P_zeta)` on every monomial up to `max_degree`.
pub fn p_spectrum(lat: &ModeLattice, zeta: &[f64], max_degree: u32) -> Vec<(MultiIndex, u32, f64)> {
    monomials_up_to(lat.num_modes(), max_degree)
        .into_iter()
        .map(|alpha| {
            let ev = p_eigenvalue(lat, zeta, &alpha);
            let d = degree(&alpha);
            (alpha, d, ev)
        })
        .collect()
}

/// `(3:1,5:2)`-style label (mode index : exponent) of a multi-index; `()` for the vacuum.
pub fn format_multi_index(alpha: &MultiIndex) -> String {
    let parts: Vec<String> = alpha.iter().map(|(k, e)| format!("{k}:{e}")).collect();
    format!("({})", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeConfig;

    fn lat() -> Arc<ModeLattice> {
        Arc::new(LatticeConfig::new(1, 2.0 * std::f64::consts::PI, 16, 3, 1.0, 1.0).build().unwrap())
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn annihilator_kills_vacuum() {
        let l = lat();
        let f = vec![c(0.5, 0.25); l.num_modes()];
        assert!(op_a(&f, &PolarizedState::vacuum(l)).unwrap().is_zero());
    }

    #[test]
    fn single_quanta() {
        let l = lat();
        let k = 2;
        let mut f = vec![c(0.0, 0.0); l.num_modes()];
        f[k] = c(1.5, -0.5);
        let one = PolarizedState::monomial(l.clone(), vec![(k, 1)], c(1.0, 0.0)).unwrap();
        let out = op_a(&f, &one).unwrap();
        assert_eq!(out, PolarizedState::vacuum(l.clone()).scale(f[k]));
        let created = op_a_star(&f, &PolarizedState::vacuum(l.clone())).unwrap();
        assert_eq!(created.coeff(&vec![(k, 1)]), l.weight(k) * f[k]);
        assert_eq!(created.coeffs().len(), 1);
    }

    #[test]
    fn p_is_diagonal_and_vacuum_energy_vanishes() {
        let l = lat();
        let zeta = [1.0, 0.0];
        assert!(op_p(&zeta, &PolarizedState::vacuum(l.clone())).unwrap().is_zero());
        let alpha = vec![(1, 2), (4, 1)];
        let st = PolarizedState::monomial(l.clone(), alpha.clone(), c(1.0, 0.0)).unwrap();
        let out = op_p(&zeta, &st).unwrap();
        let ev = -(2.0 * l.k0(1) + l.k0(4));
        assert!((out.coeff(&alpha) - ev).norm() < 1e-14);
    }

    #[test]
    fn degree_bound_is_enforced() {
        let l = lat();
        let st = PolarizedState::monomial(l.clone(), vec![(0, 6)], c(1.0, 0.0)).unwrap();
        let g = vec![c(1.0, 0.0); l.num_modes()];
        assert!(matches!(op_a_star(&g, &st), Err(Error::DegreeOverflow { degree: 7, bound: 6 })));
        assert!(PolarizedState::monomial(l.clone(), vec![(0, 7)], c(1.0, 0.0)).is_err());
        assert!(PolarizedState::monomial(l, vec![(1, 1), (0, 1)], c(1.0, 0.0)).is_err());
    }

    #[test]
    fn monomial_enumeration() {
        // C(m + d, d) monomials of degree <= d in m variables
        assert_eq!(monomials_up_to(3, 2).len(), 10);
        assert_eq!(monomials_up_to(7, 4).len(), 330);
        assert_eq!(monomials_up_to(2, 2)[3], vec![(0, 2)]);
    }

    #[test]
    fn norms() {
        let l = lat();
        let v = PolarizedState::vacuum(l.clone());
        assert_eq!(inner_product(&v, &v), c(1.0, 0.0));
        let one = PolarizedState::monomial(l.clone(), vec![(3, 1)], c(1.0, 0.0)).unwrap();
        assert!((inner_product(&one, &one).re - 1.0 / l.weight(3)).abs() < 1e-14);
    }
}
