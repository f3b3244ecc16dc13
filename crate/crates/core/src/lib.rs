//! Exact chain-level algebra for A∞ categories: Hochschild and cyclic
//! homology, S¹-complexes and their equivariant homology, enhancement
//! obstructions, the Hodge–de Rham spectral sequence, and Calabi-Yau checks.

pub mod ainfty;
pub mod complex;
pub mod cli;
pub mod cy;
pub mod cyclic;
pub mod equivariant;
pub mod error;
pub mod field;
pub mod graded;
pub mod hochschild;
pub mod io;
pub mod linalg;
pub mod report;
pub mod s1mod;
pub mod sparse;

pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use graded::{GradedSpace, Grading};
pub use sparse::{SparseMap, SparseVec};
