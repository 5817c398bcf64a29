//! Exact Hochschild and cyclic homology of finite-dimensional superalgebras,
//! the supermatrix superalgebra `M_{p,q}(A)`, and the generalized supertrace
//! as a morphism of cyclic bicomplexes.
//!
//! Everything is computed exactly, over the rationals or a prime field.

pub mod chain;
pub mod linalg;
pub mod morphism;
pub mod par;
pub mod report;
pub mod suite;
pub mod superalgebra;
