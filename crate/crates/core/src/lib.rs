//! Exact computer algebra for graded bundles and their algebraic duals.
//!
//! The crate models graded spaces ℝ^𝐝 with their monoid action, the
//! graded polynomial algebras 𝒜(ℝ^𝐝) dual to them, free graded Weil
//! algebras 𝒜^[k](ℝ^𝐝), graded polynomial coalgebras, multi-chart graded
//! bundle atlases, and the rank conditions characterizing graded bundles,
//! double vector bundles and degree-2 N-manifolds. All arithmetic is over
//! arbitrary-precision rationals.

pub mod bundle;
pub mod characterization;
pub mod coalgebra;
pub mod duality;
pub mod error;
pub mod grading;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod space;
pub mod superalg;
pub mod weil;

pub use error::{Error, Result};
pub use grading::{
    component_dimension, enumerate_monomials, weight_of, Multidegree, Parity, RankVector,
    SuperRankVector, Variable, VariableTable, Weight,
};
pub use linalg::Matrix;
pub use poly::{GradedPolyMap, Polynomial};
pub use rational::Rational;
