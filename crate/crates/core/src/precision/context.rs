use std::sync::{Arc, OnceLock};

use super::mag::Mag;
use super::real::CertifiedReal;
use crate::error::{Error, Result};

pub const DEFAULT_GUARD_BITS: u32 = 32;
pub const MAX_TARGET_DIGITS: u32 = 1_000_000;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision and truncation budget threaded through every evaluation.
///
/// `working_bits >= ceil(target_digits * log2(10)) + guard_bits` and
/// `epsilon <= 10^-(target_digits + 2)`. Constants that are expensive to
/// rebuild are memoised per context; clones share the memo.
#[derive(Clone, Debug)]
pub struct PrecisionContext {
    target_digits: u32,
    working_bits: u32,
    guard_bits: u32,
    epsilon: Mag,
    cache: Arc<ConstCache>,
}

#[derive(Debug, Default)]
pub(crate) struct ConstCache {
    pub(crate) pi: OnceLock<CertifiedReal>,
    pub(crate) ln2: OnceLock<CertifiedReal>,
    pub(crate) sqrt5: OnceLock<CertifiedReal>,
}

pub(crate) fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * LOG2_10).ceil() as u32
}

/// Builds a context for `target_digits` decimal digits with the default guard.
pub fn make_context(target_digits: u32) -> Result<PrecisionContext> {
    PrecisionContext::with_guard(target_digits, DEFAULT_GUARD_BITS)
}

impl PrecisionContext {
    pub fn new(target_digits: u32) -> Result<Self> {
        make_context(target_digits)
    }

    pub fn with_guard(target_digits: u32, guard_bits: u32) -> Result<Self> {
        if target_digits == 0 {
            return Err(Error::Capacity("target_digits must be at least 1".into()));
        }
        if target_digits > MAX_TARGET_DIGITS {
            return Err(Error::Capacity(format!(
                "target_digits {target_digits} exceeds the limit of {MAX_TARGET_DIGITS}"
            )));
        }
        let working_bits = bits_for_digits(target_digits) + guard_bits;
        // 2^-ceil((d+2) log2 10) <= 10^-(d+2)
        let epsilon = Mag::pow2(-(bits_for_digits(target_digits + 2) as i64));
        Ok(PrecisionContext {
            target_digits,
            working_bits,
            guard_bits,
            epsilon,
            cache: Arc::default(),
        })
    }

    pub fn target_digits(&self) -> u32 {
        self.target_digits
    }

    pub fn working_bits(&self) -> u32 {
        self.working_bits
    }

    pub fn guard_bits(&self) -> u32 {
        self.guard_bits
    }

    /// Certified truncation threshold for series tails.
    pub fn epsilon(&self) -> Mag {
        self.epsilon
    }

    pub(crate) fn cache(&self) -> &ConstCache {
        &self.cache
    }

    /// A fresh context with the same target and `extra` more guard bits.
    pub fn widened(&self, extra: u32) -> PrecisionContext {
        PrecisionContext::with_guard(self.target_digits, self.guard_bits + extra)
            .expect("already validated")
    }

    pub fn zero(&self) -> CertifiedReal {
        CertifiedReal::zero(self.working_bits)
    }

    pub fn one(&self) -> CertifiedReal {
        CertifiedReal::one(self.working_bits)
    }

    pub fn int(&self, n: i64) -> CertifiedReal {
        CertifiedReal::from_i64(n, self.working_bits)
    }

    pub fn rational(&self, num: i64, den: i64) -> CertifiedReal {
        let q = num_rational::BigRational::new(num.into(), den.into());
        CertifiedReal::from_rational(&q, self.working_bits)
    }

    /// `10^-(target_digits - 5)`, the agreement threshold used for identity checks.
    pub fn agreement_threshold(&self) -> Mag {
        pow10_upper(-(self.target_digits as i64 - 5))
    }
}

/// Upper bound on `10^e`.
pub fn pow10_upper(e: i64) -> Mag {
    let l2 = e as f64 * LOG2_10;
    let whole = l2.floor();
    Mag::pow2(whole as i64).mul(Mag::from_f64(2f64.powf(l2 - whole) * (1.0 + 1e-12)))
}
