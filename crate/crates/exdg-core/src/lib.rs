//! Exact computer algebra for dg categories of bounded complexes of
//! projectives over finite-dimensional path algebras.
//!
//! The engine decides homotopy exactness of three-term homotopy complexes,
//! computes homotopy (co)kernels and (co)cartesian squares, realizes the
//! extension bifunctor with its extriangulated structure (almost-split
//! sequences, defects, lattices of exact substructures), and models the
//! stable super-vector-space category.
//!
//! Everything is computed over exact fields (arbitrary-precision rationals
//! or prime fields), so every verdict is exact: no tolerances anywhere.

pub mod field;
pub mod matrix;
pub mod quiver;
pub mod algebra;
pub mod module;
pub mod complex;
pub mod homcx;
pub mod sample;
pub mod h3;
pub mod exact;
pub mod ext;
pub mod sv;
pub mod fixture;

pub use field::{FieldSpec, Scalar};
pub use matrix::Mat;
