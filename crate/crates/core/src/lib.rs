//! Exact-arithmetic engine for algebras of Jacobi diagrams and their Lie
//! algebra weight systems.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod diagram;
pub mod error;
pub mod lie;
pub mod maps;
pub mod rational;
pub mod series;
pub mod verify;

pub use diagram::{canonicalize, enumerate_diagrams, is_isomorphic, validate, CanonicalForm, Diagram, Grading, Piece, Space};
pub use error::{DiagramError, Error, Result};
pub use rational::Rational;
pub use algebra::{compute_basis, BasisStore, DiagramVector, QuotientBasis};
pub use maps::{chi, closure, cap, connect_sum, disjoint_union, exp_truncated, omega, verify_wheeling, WheelsElement};
pub use series::bernoulli_coeff;
pub use lie::{contraction_plan, sl2, ContractionPlan, EvalOptions, MetricLieAlgebra, Representation, WeightSystem};
