//! Expected hyperbolic volumes and beta integrals of random beta polytopes in
//! the Klein ball model, with quadrature, exact-rational and Monte-Carlo
//! cross-checks.

// `!(x >= y)` is used on purpose so that NaN arguments are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod abcore;
pub mod error;
pub mod exact;
pub mod expect;
pub mod mcsim;
pub mod par;
pub mod quad;
pub mod specfun;
pub mod trigpoly;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{PiPoly, Rational};
pub use par::Execution;
pub use quad::{QuadConfig, ValueWithError};
