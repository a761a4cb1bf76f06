//! Revealed-preference toolkit for supply correspondences.
//!
//! Given finitely many observations `price -> set of production plans`, the
//! crate tests the law of supply, homogeneity of degree zero, the weak axiom
//! of profit maximization, constant profit on each supply set and cyclic
//! monotonicity; builds the production set that rationalizes data passing
//! the first two; decides strong rationalizability against a given
//! production set and searches for monotone extensions that rule it out.
//! Ground-truth oracles generate test corpora, and a finite-difference
//! harness checks the smooth (Jacobian) characterization.

pub mod checks;
pub mod dataset;
pub mod forward;
pub mod geometry;
pub mod io;
pub mod rational;
pub mod rationalize;
pub mod scalar;
pub mod smooth;

pub use checks::{CheckKind, CheckName, CheckReport, Checker, Witness};
pub use dataset::{Dataset, Observation, PriceDomain, SetKind};
pub use geometry::{dot, PolytopeV, Vector};
pub use rational::Rational;
pub use scalar::{Arith, Scalar, ScalarMode};
