//! Symmetric Barvinok rank, star tree rank and tree rank of matrices over the
//! min-plus semiring `(ℝ, min, +)`, with exact rational arithmetic.

pub mod catalog;
pub mod coloring;
pub mod covers;
pub mod deficiency;
pub mod error;
pub mod experiments;
pub mod io;
pub mod matrix;
pub mod membership;
pub mod polynomial;
pub mod rank;
pub mod scalar;
pub mod secant_dim;
pub mod small_cases;
pub mod table;
pub mod tree;

pub use error::{Error, Result};
pub use matrix::{DissimilarityMatrix, Matrix, RowVector, SymmetricMatrix};
pub use scalar::Scalar;
