//! Exact engine for homological (BRST) reduction in deformation quantization.
//!
//! Everything here is pure algebra over Gaussian rationals: sparse
//! polynomials and truncated formal power series in the deformation
//! parameter `ν`, the Moyal-type star product for constant Poisson
//! structures, the ghost/antighost super algebra, the Koszul complex of a
//! homogeneous moment map together with constructive contracting homotopies,
//! the two perturbation lemmas, and the classical and quantum BRST
//! reduction built from them.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod check;
pub mod classical;
pub mod error;
pub mod hpt;
pub mod koszul;
pub mod lie;
pub mod linalg;
pub mod operator;
pub mod poisson;
pub mod poly;
pub mod probe;
pub mod quantum;
pub mod reduction;
pub mod scalar;
pub mod series;
pub mod superalg;

pub use error::{Error, Result};
pub use poly::{Monomial, Poly, VarContext};
pub use scalar::Scalar;
pub use series::Series;
pub use lie::LieAlgebraData;
pub use superalg::SuperElement;
