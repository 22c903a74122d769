//! Finite-dimensional W*-algebras and normal *-homomorphisms as an exact,
//! checkable computer-algebra engine.
//!
//! Every finite-dimensional W*-algebra is a direct sum of full matrix
//! algebras `M_{n_1} ⊕ … ⊕ M_{n_k}`, so objects are block-size lists and
//! morphisms are dense matrices acting on matrix-unit coordinates. On top of
//! that the crate builds products and orthogonal sums, the Kronecker-block
//! tensor product with its universal mediator, min/max C*-norm checks, the
//! algebra/predual duality, the symmetric monoidal structure, and a small
//! line-oriented script language that drives all of it and emits JSON
//! reports.

pub mod algebra;
pub mod category;
pub mod duality;
pub mod error;
pub mod monoidal;
pub mod morphism;
pub mod random;
pub mod report;
pub mod runner;
pub mod script;
pub mod suites;
pub mod tensor;

pub use algebra::{AlgebraElement, BlockStructure, Functional, WStarAlgebra};
pub use error::{Error, Result};
pub use morphism::{MultiplicityData, StarHom};
pub use report::{CheckReport, Status};
pub use tensor::TensorStructure;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix used for blocks and morphism coordinates.
pub type CMatrix = nalgebra::DMatrix<C64>;
