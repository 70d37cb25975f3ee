//! Constant-coefficient forms on the Klein-Gordon multisymplectic space
//! `(x^mu, phi, e, p^mu)`:
//!
//! ```text
//! omega    = de ^ beta + dp^mu ^ dphi ^ beta_mu
//! theta_l  = e beta + l p^mu dphi ^ beta_mu - (1 - l) phi dp^mu ^ beta_mu
//! H        = e + 1/2 eta_{mu nu} p^mu p^nu + 1/2 m^2 phi^2
//! ```
//!
//! with `beta = dx^0 ^ ... ^ dx^d` and `beta_mu = d/dx^mu -| beta`. Forms are
//! evaluated by expanding wedges of 1-forms into determinants, which is exact
//! and cheap in the `2(d + 1) + 2` dimensional space. All evaluators are
//! generic over real and complex scalars so that complexified solutions can be
//! handled by multilinearity.

use std::fmt::Debug;
use std::ops::Neg;

use num_complex::Complex64;
use num_traits::Num;

use crate::error::{Error, Result};
use crate::field::FieldJet;

/// Scalars the forms can be evaluated over.
pub trait Scalar: Copy + Num + Neg<Output = Self> + From<f64> + Debug + Send + Sync + 'static {}
impl Scalar for f64 {}
impl Scalar for Complex64 {}

/// Point of the multisymplectic space.
#[derive(Debug, Clone, PartialEq)]
pub struct MPoint<T = f64> {
    pub x: Vec<f64>,
    pub phi: T,
    pub e: T,
    pub p: Vec<T>,
}

/// Tangent vector in coordinate components.
#[derive(Debug, Clone, PartialEq)]
pub struct MTangent<T = f64> {
    pub dx: Vec<T>,
    pub dphi: T,
    pub de: T,
    pub dp: Vec<T>,
}

/// Coordinate directions of the multisymplectic space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coord {
    X(usize),
    Phi,
    E,
    P(usize),
}

impl Coord {
    /// All `2 n + 2` coordinates for spacetime dimension `n`.
    pub fn all(n: usize) -> Vec<Coord> {
        let mut v: Vec<Coord> = (0..n).map(Coord::X).collect();
        v.push(Coord::Phi);
        v.push(Coord::E);
        v.extend((0..n).map(Coord::P));
        v
    }
}

impl<T: Scalar> MPoint<T> {
    pub fn origin(n: usize) -> Self {
        MPoint { x: vec![0.0; n], phi: T::zero(), e: T::zero(), p: vec![T::zero(); n] }
    }

    /// `self + eps * v` (spacetime components use the real part of `v` only for real `T`).
    pub fn displaced(&self, v: &MTangent<T>, eps: T) -> Self
    where
        T: Into<Complex64>,
    {
        MPoint {
            x: self.x.iter().zip(&v.dx).map(|(x, d)| x + (eps * *d).into().re).collect(),
            phi: self.phi + eps * v.dphi,
            e: self.e + eps * v.de,
            p: self.p.iter().zip(&v.dp).map(|(p, d)| *p + eps * *d).collect(),
        }
    }
}

impl<T: Scalar> MTangent<T> {
    pub fn zero(n: usize) -> Self {
        MTangent { dx: vec![T::zero(); n], dphi: T::zero(), de: T::zero(), dp: vec![T::zero(); n] }
    }

    pub fn basis(n: usize, c: Coord) -> Self {
        let mut v = Self::zero(n);
        *v.component_mut(c) = T::one();
        v
    }

    pub fn component(&self, c: Coord) -> T {
        match c {
            Coord::X(mu) => self.dx[mu],
            Coord::Phi => self.dphi,
            Coord::E => self.de,
            Coord::P(mu) => self.dp[mu],
        }
    }

    pub fn component_mut(&mut self, c: Coord) -> &mut T {
        match c {
            Coord::X(mu) => &mut self.dx[mu],
            Coord::Phi => &mut self.dphi,
            Coord::E => &mut self.de,
            Coord::P(mu) => &mut self.dp[mu],
        }
    }

    pub fn scaled(&self, a: T) -> Self {
        MTangent {
            dx: self.dx.iter().map(|x| a * *x).collect(),
            dphi: a * self.dphi,
            de: a * self.de,
            dp: self.dp.iter().map(|x| a * *x).collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        MTangent {
            dx: self.dx.iter().zip(&other.dx).map(|(a, b)| *a + *b).collect(),
            dphi: self.dphi + other.dphi,
            de: self.de + other.de,
            dp: self.dp.iter().zip(&other.dp).map(|(a, b)| *a + *b).collect(),
        }
    }
}

/// Determinant by cofactor expansion; matrices here are at most a few rows.
fn det<T: Scalar>(m: &[Vec<T>]) -> T {
    match m.len() {
        0 => T::one(),
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        n => {
            let mut acc = T::zero();
            for col in 0..n {
                if m[0][col] == T::zero() {
                    continue;
                }
                let minor: Vec<Vec<T>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, v)| *v).collect())
                    .collect();
                let term = m[0][col] * det(&minor);
                acc = if col % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

/// `(a_1 ^ ... ^ a_r)(v_1, ..., v_r) = det[a_i(v_j)]` for coordinate 1-forms `a_i`.
fn wedge<T: Scalar>(covectors: &[Coord], vectors: &[&MTangent<T>]) -> T {
    let m: Vec<Vec<T>> =
        covectors.iter().map(|c| vectors.iter().map(|v| v.component(*c)).collect()).collect();
    det(&m)
}

fn sign(mu: usize) -> f64 {
    if mu % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The forms of the Klein-Gordon theory in `d` spatial dimensions with mass `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KgForms {
    pub d: usize,
    pub mass: f64,
}

impl KgForms {
    pub fn new(d: usize, mass: f64) -> Self {
        KgForms { d, mass }
    }

    /// Spacetime dimension `n = d + 1`.
    pub fn n(&self) -> usize {
        self.d + 1
    }

    fn check_arity<T>(&self, vectors: &[MTangent<T>], expected: usize) -> Result<()> {
        if vectors.len() != expected {
            return Err(Error::Arity { expected, got: vectors.len() });
        }
        Ok(())
    }

    /// `dx^0 ^ ... ^ dx^d` with `dx^skip` removed (or nothing removed), prefixed by `head`.
    fn rows(&self, head: &[Coord], skip: Option<usize>) -> Vec<Coord> {
        let mut rows = head.to_vec();
        rows.extend((0..self.n()).filter(|mu| Some(*mu) != skip).map(Coord::X));
        rows
    }

    /// `beta(v_1, ..., v_n)`.
    pub fn beta<T: Scalar>(&self, vectors: &[MTangent<T>]) -> Result<T> {
        self.check_arity(vectors, self.n())?;
        let v: Vec<&MTangent<T>> = vectors.iter().collect();
        Ok(wedge(&self.rows(&[], None), &v))
    }

    /// `omega(v_0, ..., v_n)` on `n + 1` tangent vectors.
    pub fn omega_eval<T: Scalar>(&self, vectors: &[MTangent<T>]) -> Result<T> {
        self.check_arity(vectors, self.n() + 1)?;
        let v: Vec<&MTangent<T>> = vectors.iter().collect();
        let mut acc = wedge(&self.rows(&[Coord::E], None), &v);
        for mu in 0..self.n() {
            let term = wedge(&self.rows(&[Coord::P(mu), Coord::Phi], Some(mu)), &v);
            acc = acc + T::from(sign(mu)) * term;
        }
        Ok(acc)
    }

    /// `theta_lambda` at `point` on `n` tangent vectors.
    pub fn theta_eval<T: Scalar>(&self, lambda: f64, point: &MPoint<T>, vectors: &[MTangent<T>]) -> Result<T> {
        self.check_arity(vectors, self.n())?;
        let v: Vec<&MTangent<T>> = vectors.iter().collect();
        let mut acc = point.e * wedge(&self.rows(&[], None), &v);
        let l = T::from(lambda);
        let one_minus = T::from(1.0 - lambda);
        for mu in 0..self.n() {
            let s = T::from(sign(mu));
            let a = wedge(&self.rows(&[Coord::Phi], Some(mu)), &v);
            let b = wedge(&self.rows(&[Coord::P(mu)], Some(mu)), &v);
            acc = acc + s * (l * point.p[mu] * a - one_minus * point.phi * b);
        }
        Ok(acc)
    }

    /// `eta_{mu nu} a^mu b^nu`.
    pub fn minkowski<T: Scalar>(&self, a: &[T], b: &[T]) -> T {
        let mut s = a[0] * b[0];
        for mu in 1..self.n() {
            s = s - a[mu] * b[mu];
        }
        s
    }

    pub fn hamiltonian<T: Scalar>(&self, point: &MPoint<T>) -> T {
        let half = T::from(0.5);
        point.e
            + half * self.minkowski(&point.p, &point.p)
            + half * T::from(self.mass * self.mass) * point.phi * point.phi
    }

    /// `dH(xi)` at `point`.
    pub fn dh<T: Scalar>(&self, point: &MPoint<T>, xi: &MTangent<T>) -> T {
        xi.de + self.minkowski(&point.p, &xi.dp) + T::from(self.mass * self.mass) * point.phi * xi.dphi
    }

    /// Point of the n-curve over grid point `j` of a jet sampled at `jet.t`.
    pub fn graph_point(&self, jet: &FieldJet, x: Vec<f64>, j: usize) -> MPoint<Complex64> {
        let n = self.n();
        let phi = jet.value[j];
        let grad: Vec<Complex64> = (0..n).map(|mu| jet.grad[mu][j]).collect();
        let p: Vec<Complex64> = (0..n).map(|mu| if mu == 0 { grad[0] } else { -grad[mu] }).collect();
        let e = -0.5 * self.minkowski(&grad, &grad) - 0.5 * self.mass * self.mass * phi * phi;
        MPoint { x, phi, e, p }
    }

    /// Canonical tangent frame `X_mu = d_mu + d_mu phi d_phi + d_mu e d_e + d_mu p^nu d_{p^nu}`
    /// of the n-curve over grid point `j`.
    pub fn graph_frame(&self, jet: &FieldJet, j: usize) -> Vec<MTangent<Complex64>> {
        let n = self.n();
        let m2 = self.mass * self.mass;
        let grad: Vec<Complex64> = (0..n).map(|mu| jet.grad[mu][j]).collect();
        (0..n)
            .map(|mu| {
                let hrow: Vec<Complex64> = (0..n).map(|nu| jet.second(mu, nu)[j]).collect();
                let mut v = MTangent::basis(n, Coord::X(mu));
                v.dphi = grad[mu];
                v.dp = (0..n).map(|nu| if nu == 0 { hrow[0] } else { -hrow[nu] }).collect();
                v.de = -self.minkowski(&hrow, &grad) - m2 * jet.value[j] * grad[mu];
                v
            })
            .collect()
    }
}

/// Exterior derivative of an `n`-form field `form(point, vectors)` evaluated on
/// `n + 1` constant vectors at `point`, by central differences of step `eps`:
/// `d f(v_0..v_n) = sum_i (-1)^i v_i [f(v_0..^v_i..v_n)]`.
pub fn exterior_derivative_fd<F>(form: F, point: &MPoint<f64>, vectors: &[MTangent<f64>], eps: f64) -> f64
where
    F: Fn(&MPoint<f64>, &[MTangent<f64>]) -> f64,
{
    let mut acc = 0.0;
    for (i, vi) in vectors.iter().enumerate() {
        let rest: Vec<MTangent<f64>> =
            vectors.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, v)| v.clone()).collect();
        let plus = form(&point.displaced(vi, eps), &rest);
        let minus = form(&point.displaced(vi, -eps), &rest);
        acc += sign(i) * (plus - minus) / (2.0 * eps);
    }
    acc
}

impl KgForms {
    /// Largest `|omega(xi, X_0..X_d) - dH(xi) beta(X_0..X_d)|` over the coordinate
    /// directions `xi` and grid points of a slice, with `X_mu` the canonical frame
    /// of the n-curve. Vanishes exactly on Hamiltonian n-curves.
    pub fn hamilton2_defect(&self, jet: &FieldJet, grid_points: &[Vec<f64>]) -> Result<f64> {
        let n = self.n();
        let mut worst = 0.0f64;
        for (j, x) in grid_points.iter().enumerate() {
            let point = self.graph_point(jet, x.clone(), j);
            let frame = self.graph_frame(jet, j);
            let vol = self.beta(&frame)?;
            for c in Coord::all(n) {
                let xi = MTangent::<Complex64>::basis(n, c);
                let mut args = vec![xi.clone()];
                args.extend(frame.iter().cloned());
                let lhs = self.omega_eval(&args)?;
                let rhs = self.dh(&point, &xi) * vol;
                worst = worst.max((lhs - rhs).norm());
            }
        }
        Ok(worst)
    }

    /// Smallest singular value of the map `xi -> xi -| omega`, tabulated on all
    /// increasing n-tuples of coordinate directions. Positive iff `omega` is
    /// non-degenerate.
    pub fn contraction_min_singular_value(&self) -> f64 {
        let n = self.n();
        let coords = Coord::all(n);
        let dim = coords.len();
        let tuples = increasing_tuples(dim, n);
        let mut mat = nalgebra::DMatrix::<f64>::zeros(tuples.len(), dim);
        for (col, &c) in coords.iter().enumerate() {
            let xi = MTangent::<f64>::basis(n, c);
            for (row, tuple) in tuples.iter().enumerate() {
                let mut args = vec![xi.clone()];
                args.extend(tuple.iter().map(|&i| MTangent::basis(n, coords[i])));
                mat[(row, col)] = self.omega_eval(&args).expect("arity n + 1");
            }
        }
        mat.singular_values().iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

fn increasing_tuples(dim: usize, len: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, dim: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            rec(i + 1, dim, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, dim, len, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: usize, c: Coord) -> MTangent<f64> {
        MTangent::basis(n, c)
    }

    #[test]
    fn omega_coordinate_values_d1() {
        let f = KgForms::new(1, 1.0);
        let v = [b(2, Coord::E), b(2, Coord::X(0)), b(2, Coord::X(1))];
        assert_eq!(f.omega_eval(&v).unwrap(), 1.0);
        let v = [b(2, Coord::P(0)), b(2, Coord::Phi), b(2, Coord::X(1))];
        assert_eq!(f.omega_eval(&v).unwrap(), 1.0);
        // beta_1 = -dx^0
        let v = [b(2, Coord::P(1)), b(2, Coord::Phi), b(2, Coord::X(0))];
        assert_eq!(f.omega_eval(&v).unwrap(), -1.0);
        let v = [b(2, Coord::E), b(2, Coord::E), b(2, Coord::X(1))];
        assert_eq!(f.omega_eval(&v).unwrap(), 0.0);
    }

    #[test]
    fn arity_is_checked() {
        let f = KgForms::new(1, 1.0);
        assert_eq!(
            f.omega_eval(&[b(2, Coord::E)]),
            Err(Error::Arity { expected: 3, got: 1 })
        );
        assert!(f.theta_eval(0.5, &MPoint::origin(2), &[b(2, Coord::E)]).is_err());
    }

    #[test]
    fn theta_on_horizontal_frame_is_e() {
        let f = KgForms::new(2, 1.0);
        let mut pt = MPoint::origin(3);
        pt.e = 1.0;
        let v: Vec<_> = (0..3).map(|mu| b(3, Coord::X(mu))).collect();
        assert_eq!(f.theta_eval(0.3, &pt, &v).unwrap(), 1.0);
    }

    #[test]
    fn hamiltonian_values() {
        let f = KgForms::new(1, 2.0);
        assert_eq!(f.hamiltonian(&MPoint::<f64>::origin(2)), 0.0);
        let mut pt = MPoint::origin(2);
        pt.e = 3.0;
        assert_eq!(f.hamiltonian(&pt), 3.0);
        pt.phi = 1.0;
        pt.p = vec![1.0, 2.0];
        assert_eq!(f.hamiltonian(&pt), 3.0 + 0.5 * (1.0 - 4.0) + 2.0);
    }

    #[test]
    fn determinant_matches_known_values() {
        let m = vec![vec![2.0, 0.0, 1.0], vec![1.0, 3.0, 2.0], vec![1.0, 1.0, 2.0]];
        assert!((det(&m) - 6.0).abs() < 1e-15);
        let id: Vec<Vec<f64>> = (0..5).map(|i| (0..5).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        assert_eq!(det(&id), 1.0);
    }

    #[test]
    fn omega_is_nondegenerate() {
        for d in 1..=3 {
            assert!(KgForms::new(d, 1.0).contraction_min_singular_value() > 0.5);
        }
    }

    #[test]
    fn d_theta_is_omega_for_all_lambda() {
        let f = KgForms::new(1, 1.3);
        let n = f.n();
        let mut seed = 7u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut point = MPoint::origin(n);
        point.phi = next();
        point.e = next();
        point.p = vec![next(), next()];
        for lambda in [0.0, 0.5, 1.0, 0.37] {
            for _ in 0..5 {
                let vs: Vec<MTangent<f64>> = (0..n + 1)
                    .map(|_| {
                        let mut v = MTangent::zero(n);
                        for c in Coord::all(n) {
                            *v.component_mut(c) = next();
                        }
                        v
                    })
                    .collect();
                let d_theta = exterior_derivative_fd(
                    |pt, args| f.theta_eval(lambda, pt, args).unwrap(),
                    &point,
                    &vs,
                    1e-3,
                );
                let om = f.omega_eval(&vs).unwrap();
                assert!((d_theta - om).abs() < 1e-11, "{d_theta} vs {om}");
            }
        }
    }
}
