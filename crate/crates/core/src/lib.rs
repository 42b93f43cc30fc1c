//! Second eigenvalues of Cayley graphs on symmetric groups: permutations
//! and connection sets, exact spectra of normal Cayley graphs from the
//! character table, equitable quotients, and matrix-free Lanczos for the
//! graphs themselves.

pub mod bounds;
pub mod characters;
pub mod dense;
pub mod error;
pub mod graph;
pub mod lanczos;
pub mod matrix;
pub mod partition;
pub mod perm;
pub mod quotient;
pub mod scalar;
pub mod sets;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{build_graph, CayleyGraph};
pub use lanczos::{LanczosConfig, LanczosResult};
pub use matrix::Matrix;
pub use perm::{Permutation, VertexIndex};
pub use scalar::Scalar;
pub use sets::{ClassId, ConnectionSet, FamilyIndex, StabilizerScope};

pub type MatrixF64 = Matrix<f64>;
pub type MatrixF32 = Matrix<f32>;
pub type IntMatrix = Matrix<i64>;
pub type SymmetricEigenF64 = dense::SymmetricEigen<f64>;
