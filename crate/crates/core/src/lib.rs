//! Certified high-precision evaluation of multiple polylogarithms, Nielsen
//! polylogarithms, iterated-integral words and Apéry-like central-binomial
//! sums with harmonic-number weights, together with a registry of identities
//! among them that can be checked numerically.

pub mod apery;
pub mod error;
pub mod iterint;
pub mod mpl;
pub mod precision;
pub mod registry;
pub mod stuffle;

pub use error::{Error, Result};
pub use precision::{make_context, CertifiedReal, Mag, PrecisionContext};
