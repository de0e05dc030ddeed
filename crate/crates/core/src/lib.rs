//! Exact computation of the dual canonical basis of the quantum matrix
//! coordinate ring `O_q(M(n))`, its `O_q(SL(n))` quotient and the
//! `U_q(sl_n)` bimodule action on matrix coefficients.
//!
//! All coefficients live in `Z[q, q^-1]` (see [`laurent`]); nothing is ever
//! specialized or approximated.

pub mod canon;
pub mod element;
pub mod error;
pub mod io;
pub mod laurent;
pub mod matrix;
pub mod qmatrix;
pub mod slquotient;
pub mod uqaction;

pub use canon::{CanonElement, CanonicalBasis};
pub use element::{Element, Word};
pub use error::{Error, Result};
pub use laurent::LaurentPoly;
pub use matrix::{ExpMatrix, Letter};
pub use qmatrix::QMatrix;
pub use slquotient::{SLElement, SLQuotient};
