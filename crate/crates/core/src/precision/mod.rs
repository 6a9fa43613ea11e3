//! Arbitrary-precision balls, exact rationals and fundamental constants.

mod consts;
mod context;
mod mag;
mod real;
mod zeta;

pub use consts::{golden, golden_ratio, ln, ln2, pi, sqrt5, GoldenValues};
pub use context::{make_context, pow10_upper, PrecisionContext, DEFAULT_GUARD_BITS, MAX_TARGET_DIGITS};
pub use mag::Mag;
pub use real::CertifiedReal;
pub use zeta::{bernoulli, zeta, zeta_even, zeta_int, BernoulliTable};

/// Exact rationals (normalised, positive denominator).
pub type ExactRational = num_rational::BigRational;
