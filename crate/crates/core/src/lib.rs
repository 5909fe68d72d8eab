//! Exact construction of generalized ideal matrices, double ideal matrices
//! and φ-quasi-cyclic codes, with gcd-based predictions for rank, kernel and
//! code dimension cross-checked against independent brute-force oracles.
//!
//! All arithmetic is exact: prime fields `F_p` and the rationals `Q`.

pub mod cli;
pub mod error;
pub mod field;
pub mod ideal;
pub mod matrix;
pub mod oracle;
pub mod poly;
pub mod quasi_cyclic;
pub mod text;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use matrix::DenseMatrix;
pub use poly::{find_roots, Polynomial, RootSet, Squarefreeness};
