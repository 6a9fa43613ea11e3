//! Upward-rounded magnitudes with an unbounded binary exponent.
//!
//! Error radii and tail bounds routinely fall below `f64::MIN_POSITIVE` at a
//! few hundred digits, so a magnitude is stored as `mant * 2^exp` with the
//! mantissa normalised to `[0.5, 1)`. Every operation that can lose accuracy
//! rounds away from zero, so a `Mag` computed from upper bounds stays an
//! upper bound.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

const UP: f64 = 1.0 + 1.0 / (1u64 << 50) as f64;
const DOWN: f64 = 1.0 - 1.0 / (1u64 << 50) as f64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mag {
    mant: f64,
    exp: i64,
}

/// Splits a positive finite `x` into `(m, e)` with `m` in `[0.5, 1)` and `x = m * 2^e`.
fn frexp(x: f64) -> (f64, i64) {
    debug_assert!(x > 0.0 && x.is_finite());
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    if raw_exp == 0 {
        // subnormal: rescale first
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (m, raw_exp - 1022)
}

fn ldexp(m: f64, e: i64) -> f64 {
    if e > 1000 {
        return f64::INFINITY;
    }
    if e < -1070 {
        return 0.0;
    }
    let e = e as i32;
    if e < -1000 {
        m * 2f64.powi(e + 100) * 2f64.powi(-100)
    } else {
        m * 2f64.powi(e)
    }
}

impl Mag {
    pub const ZERO: Mag = Mag { mant: 0.0, exp: 0 };

    fn normalized(mant: f64, exp: i64) -> Mag {
        if mant == 0.0 {
            return Mag::ZERO;
        }
        assert!(mant.is_finite() && mant > 0.0, "magnitude must be finite and non-negative");
        let (m, e) = frexp(mant);
        Mag { mant: m, exp: exp + e }
    }

    /// Upper bound for a non-negative float (which must be finite).
    pub fn from_f64(x: f64) -> Mag {
        assert!(x >= 0.0 && x.is_finite(), "Mag::from_f64 needs a finite non-negative value");
        Mag::normalized(x, 0)
    }

    pub fn from_u64(n: u64) -> Mag {
        Mag::normalized(n as f64 * if n > (1 << 53) { UP } else { 1.0 }, 0)
    }

    /// Exactly `2^e`.
    pub fn pow2(e: i64) -> Mag {
        Mag { mant: 0.5, exp: e + 1 }
    }

    /// Upper bound on `|n| * 2^scale`.
    pub fn from_bigint_scaled(n: &BigInt, scale: i64) -> Mag {
        if n.is_zero() {
            return Mag::ZERO;
        }
        let bits = n.bits() as i64;
        if bits <= 53 {
            let v = n.abs().to_f64().expect("fits");
            Mag::normalized(v, scale)
        } else {
            let shift = bits - 53;
            let top: BigInt = n.abs() >> (shift as usize);
            let v = top.to_f64().expect("fits") + 1.0;
            Mag::normalized(v, scale + shift)
        }
    }

    /// Lower bound on `|n| * 2^scale`.
    pub fn from_bigint_scaled_down(n: &BigInt, scale: i64) -> Mag {
        if n.is_zero() {
            return Mag::ZERO;
        }
        let bits = n.bits() as i64;
        if bits <= 53 {
            Mag::normalized(n.abs().to_f64().expect("fits"), scale)
        } else {
            let shift = bits - 53;
            let top: BigInt = n.abs() >> (shift as usize);
            Mag::normalized(top.to_f64().expect("fits"), scale + shift)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant == 0.0
    }

    /// Nearest `f64`; saturates to infinity or flushes to zero outside the range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            ldexp(self.mant, self.exp)
        }
    }

    /// Base-2 logarithm (approximate; `-inf` for zero).
    pub fn log2(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mant.log2() + self.exp as f64
        }
    }

    pub fn add(self, other: Mag) -> Mag {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (hi, lo) = if self.exp >= other.exp { (self, other) } else { (other, self) };
        let diff = hi.exp - lo.exp;
        let lo_scaled = if diff > 1100 { f64::MIN_POSITIVE } else { ldexp(lo.mant, -diff) };
        Mag::normalized((hi.mant + lo_scaled) * UP, hi.exp)
    }

    pub fn mul(self, other: Mag) -> Mag {
        if self.is_zero() || other.is_zero() {
            return Mag::ZERO;
        }
        Mag::normalized(self.mant * other.mant * UP, self.exp + other.exp)
    }

    pub fn mul_f64(self, x: f64) -> Mag {
        self.mul(Mag::from_f64(x))
    }

    /// Upper bound on `self / other`; `other` should be a lower bound of the true divisor.
    pub fn div(self, other: Mag) -> Mag {
        assert!(!other.is_zero(), "Mag division by zero");
        if self.is_zero() {
            return Mag::ZERO;
        }
        Mag::normalized(self.mant / other.mant * UP, self.exp - other.exp)
    }

    pub fn sqrt(self) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        let (m, e) = if self.exp % 2 == 0 {
            (self.mant, self.exp)
        } else {
            (self.mant * 2.0, self.exp - 1)
        };
        Mag::normalized(m.sqrt() * UP, e / 2)
    }

    pub fn powi(self, n: u64) -> Mag {
        let mut acc = Mag::from_u64(1);
        let mut base = self;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            n >>= 1;
        }
        acc
    }

    /// Lower bound on `self - other`, or `None` when that is not certainly positive.
    pub fn sub_lower(self, other: Mag) -> Option<Mag> {
        if other.is_zero() {
            return if self.is_zero() { None } else { Some(self.round_down()) };
        }
        if self.partial_cmp(&other) != Some(Ordering::Greater) {
            return None;
        }
        let diff = self.exp - other.exp;
        let o = if diff > 1100 { 0.0 } else { ldexp(other.mant, -diff) * UP };
        let m = (self.mant - o) * DOWN;
        if m <= 0.0 {
            None
        } else {
            Some(Mag::normalized(m, self.exp))
        }
    }

    /// Upper bound on `self - other` (saturating at zero).
    pub fn sub_upper(self, other: Mag) -> Mag {
        if other.is_zero() || self.is_zero() {
            return self;
        }
        if self.partial_cmp(&other) != Some(Ordering::Greater) {
            return Mag::ZERO;
        }
        let diff = self.exp - other.exp;
        let o = if diff > 1100 { 0.0 } else { ldexp(other.mant, -diff) * DOWN };
        Mag::normalized(((self.mant - o) * UP).max(0.0), self.exp)
    }

    fn round_down(self) -> Mag {
        if self.is_zero() {
            self
        } else {
            Mag::normalized(self.mant * DOWN, self.exp)
        }
    }

    pub fn max(self, other: Mag) -> Mag {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: Mag) -> Mag {
        if self <= other {
            self
        } else {
            other
        }
    }

    /// Scientific notation with three significant digits, rounded upward.
    pub fn to_sci_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let l10 = self.mant.log10() + self.exp as f64 * std::f64::consts::LOG10_2;
        let mut e10 = l10.floor();
        let mut m10 = 10f64.powf(l10 - e10);
        m10 = (m10 * 100.0 - 1e-9).ceil() / 100.0;
        if m10 >= 10.0 {
            m10 /= 10.0;
            e10 += 1.0;
        }
        format!("{:.2}e{}", m10, e10 as i64)
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Mag) -> Option<Ordering> {
        Some(match (self.is_zero(), other.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => self
                .exp
                .cmp(&other.exp)
                .then(self.mant.partial_cmp(&other.mant).unwrap_or(Ordering::Equal)),
        })
    }
}

impl fmt::Display for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_magnitudes_survive() {
        let a = Mag::pow2(-5000);
        let b = a.mul(Mag::pow2(-5000));
        assert!(b.log2() < -9999.0 && b.log2() > -10001.0);
        assert!(b > Mag::ZERO);
        assert_eq!(b.to_f64(), 0.0);
    }

    #[test]
    fn operations_round_up() {
        let third = Mag::from_f64(1.0).div(Mag::from_f64(3.0));
        assert!(third.mul(Mag::from_f64(3.0)).to_f64() >= 1.0);
        let s = Mag::from_f64(0.1).add(Mag::from_f64(0.2));
        assert!(s.to_f64() >= 0.3);
        assert!(Mag::from_f64(2.0).sqrt().to_f64() >= std::f64::consts::SQRT_2);
    }

    #[test]
    fn subtraction_bounds() {
        let a = Mag::from_f64(1.0);
        let b = Mag::from_f64(0.25);
        assert!(a.sub_lower(b).unwrap().to_f64() <= 0.75);
        assert!(a.sub_upper(b).to_f64() >= 0.75);
        assert!(b.sub_lower(a).is_none());
        assert!(a.sub_lower(a).is_none());
    }

    #[test]
    fn bigint_bounds_bracket_value() {
        let n: BigInt = BigInt::from(3u8).pow(100);
        let up = Mag::from_bigint_scaled(&n, -10);
        let down = Mag::from_bigint_scaled_down(&n, -10);
        let exact = 100.0 * 3f64.log2() - 10.0;
        assert!(up.log2() >= exact - 1e-9);
        assert!(down.log2() <= exact + 1e-9);
    }

    #[test]
    fn sci_string() {
        assert_eq!(Mag::ZERO.to_sci_string(), "0");
        assert_eq!(Mag::from_f64(1.5e-40).to_sci_string(), "1.50e-40");
        let s = Mag::pow2(-400).to_sci_string();
        assert!(s.ends_with("e-121"), "{s}");
    }
}
