//! Dense linear algebra over prime fields.

mod basis;
mod field;
mod matrix;

pub use basis::SpanBasis;
pub use field::{is_prime, PrimeField, MAX_MODULUS};
pub use matrix::{in_span, independent_columns, rank, subspace_dims, FieldMatrix, SubspaceDims};
