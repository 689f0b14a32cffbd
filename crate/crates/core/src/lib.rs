//! Exact-arithmetic deformation theory: differential graded Lie algebras,
//! Maurer-Cartan and gauge calculus over Artin rings, semicosimplicial
//! totalization and Čech models of coherent sheaves on covers.

pub mod artin;
pub mod dgla;
pub mod error;
pub mod graded;
pub mod linalg;
pub mod pipelines;
pub mod scalar;
pub mod semicosimplicial;
pub mod sheaf;
pub mod sparse;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use sparse::{SparseMatrix, SparseVec};
