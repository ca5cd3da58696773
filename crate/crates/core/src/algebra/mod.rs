//! Rational linear algebra over diagram spaces: vectors, relation
//! generators and quotient bases.

mod basis;
mod elimination;
pub mod relations;
mod vector;

pub use basis::{compute_basis, compute_basis_with, BasisStore, QuotientBasis, CONVENTIONS_VERSION};
pub use elimination::{primitive as primitive_row, Echelon};
pub use relations::{generate_ihx, generate_ihx_with, generate_stu, generate_stu_with, piece_relations, RelationSet};
pub use vector::{DiagramVector, Term, VectorJson};
