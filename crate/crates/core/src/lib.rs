//! Multisymplectic (De Donder-Weyl) description of the free Klein-Gordon field
//! on a periodic box, its covariant phase space, and the prequantization of
//! the creation, annihilation and translation observables.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod action;
pub mod error;
pub mod evolution;
pub mod field;
pub mod forms;
pub mod lattice;
pub mod observables;
pub mod phase_space;
pub mod prequant;
pub mod quadrature;
pub mod random;
pub mod report;
pub mod simulate;
pub mod solution;
pub mod verify;

pub use error::{Error, Result};
pub use field::{kg_residual, Combination, DetunedField, Envelope, Enveloped, FieldJet, PolynomialInTime, SpacetimeField};
pub use lattice::{dispersion, LatticeConfig, ModeLattice};
pub use observables::ObservableForm;
pub use phase_space::Deformation;
pub use prequant::{MultiIndex, Operator, PolarizedState};
pub use report::{CheckRecord, Report, RunConfig};
pub use solution::{SliceData, Solution, SolutionFile};
