//! Central-binomial sums Σ u^n w(n) / (n^s C(2n,n)) with harmonic-number
//! weights, the y(u) substitution, and the closed forms in y.

mod dk;
mod sum;
mod weight;

pub use dk::{dk_rhs, dk_rhs_counted, DkKind};
pub use sum::{
    apery_partial, apery_sum, apery_sum_counted, apery_tail_bound, central_binomial, harmonic_tables, y_of_u,
    AperySumSpec, HarmonicTables, MAX_APERY_TERMS, MAX_TABLE_SIZE,
};
pub use weight::{HarmonicFactor, HarmonicWeight, WeightTerm};
