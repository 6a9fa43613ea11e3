//! Fixed-point balls: a binary fixed-point midpoint plus an absolute radius.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::mag::Mag;
use crate::error::{Error, Result};

/// A real number `mant * 2^-bits` known to lie within `error` of the true value.
///
/// All values taking part in one computation share the same `bits`; mixing
/// precisions is a programming error and panics.
#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedReal {
    mant: BigInt,
    bits: u32,
    error: Mag,
}

fn floor_shift(n: BigInt, by: u32) -> (BigInt, bool) {
    if by == 0 {
        return (n, true);
    }
    let exact = n.is_zero() || n.trailing_zeros().map_or(true, |tz| tz >= by as u64);
    (n >> by as usize, exact)
}

impl CertifiedReal {
    pub fn zero(bits: u32) -> Self {
        Self::exact(BigInt::zero(), bits)
    }

    pub fn one(bits: u32) -> Self {
        Self::from_i64(1, bits)
    }

    pub(crate) fn exact(mant: BigInt, bits: u32) -> Self {
        CertifiedReal { mant, bits, error: Mag::ZERO }
    }

    pub(crate) fn from_parts(mant: BigInt, bits: u32, error: Mag) -> Self {
        CertifiedReal { mant, bits, error }
    }

    pub fn from_i64(n: i64, bits: u32) -> Self {
        Self::exact(BigInt::from(n) << bits as usize, bits)
    }

    pub fn from_bigint(n: &BigInt, bits: u32) -> Self {
        Self::exact(n << bits as usize, bits)
    }

    pub fn from_rational(q: &BigRational, bits: u32) -> Self {
        let scaled: BigInt = q.numer() << bits as usize;
        let (quot, rem) = scaled.div_mod_floor(q.denom());
        let error = if rem.is_zero() { Mag::ZERO } else { Mag::pow2(-(bits as i64)) };
        CertifiedReal { mant: quot, bits, error }
    }

    /// Nearest representable ball around an `f64` (exact for dyadic inputs that fit).
    pub fn from_f64(x: f64, bits: u32) -> Self {
        let q = BigRational::from_float(x).expect("finite float");
        Self::from_rational(&q, bits)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn error(&self) -> Mag {
        self.error
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn ulp(&self) -> Mag {
        Mag::pow2(-(self.bits as i64))
    }

    /// The centre of the ball as an exact value.
    pub fn midpoint(&self) -> Self {
        CertifiedReal::exact(self.mant.clone(), self.bits)
    }

    pub fn is_exact(&self) -> bool {
        self.error.is_zero()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.is_exact() && self.mant.is_zero()
    }

    /// True when this is exactly the integer `n`.
    pub fn is_exactly(&self, n: i64) -> bool {
        self.is_exact() && self.mant == (BigInt::from(n) << self.bits as usize)
    }

    pub fn midpoint_sign(&self) -> Sign {
        self.mant.sign()
    }

    /// Upper bound on `|x|` over the ball.
    pub fn abs_upper(&self) -> Mag {
        Mag::from_bigint_scaled(&self.mant, -(self.bits as i64)).add(self.error)
    }

    /// Lower bound on `|x|` over the ball (zero when the ball touches zero).
    pub fn abs_lower(&self) -> Mag {
        Mag::from_bigint_scaled_down(&self.mant, -(self.bits as i64))
            .sub_lower(self.error)
            .unwrap_or(Mag::ZERO)
    }

    pub fn midpoint_abs(&self) -> Mag {
        Mag::from_bigint_scaled(&self.mant, -(self.bits as i64))
    }

    pub fn certainly_positive(&self) -> bool {
        self.mant.is_positive() && !self.abs_lower().is_zero()
    }

    pub fn certainly_negative(&self) -> bool {
        self.mant.is_negative() && !self.abs_lower().is_zero()
    }

    /// `self < other` for every pair of points in the two balls.
    pub fn certainly_lt(&self, other: &Self) -> bool {
        (other - self).certainly_positive()
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.mant.bits() as i64;
        if bits <= 60 {
            self.mant.to_f64().unwrap_or(0.0) * 2f64.powi(-(self.bits as i32))
        } else {
            let shift = bits - 60;
            let top: BigInt = &self.mant >> shift as usize;
            let e = shift - self.bits as i64;
            top.to_f64().unwrap_or(0.0) * 2f64.powi(e.clamp(-1100, 1100) as i32)
        }
    }

    pub fn with_error(mut self, extra: Mag) -> Self {
        self.error = self.error.add(extra);
        self
    }

    /// Re-expresses the ball at another precision, widening the radius by the rounding step.
    pub fn with_bits(&self, bits: u32) -> Self {
        match bits.cmp(&self.bits) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => CertifiedReal {
                mant: &self.mant << (bits - self.bits) as usize,
                bits,
                error: self.error,
            },
            Ordering::Less => {
                let (mant, exact) = floor_shift(self.mant.clone(), self.bits - bits);
                let error = if exact { self.error } else { self.error.add(Mag::pow2(-(bits as i64))) };
                CertifiedReal { mant, bits, error }
            }
        }
    }

    fn check_bits(&self, other: &Self) {
        assert_eq!(self.bits, other.bits, "mixed-precision arithmetic");
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        let scale = Mag::from_bigint_scaled(n, 0);
        CertifiedReal { mant: &self.mant * n, bits: self.bits, error: self.error.mul(scale) }
    }

    pub fn mul_i64(&self, n: i64) -> Self {
        self.mul_int(&BigInt::from(n))
    }

    /// Exact multiplication by a power of two (which may be negative).
    pub fn mul_pow2(&self, e: i64) -> Self {
        if e >= 0 {
            CertifiedReal {
                mant: &self.mant << e as usize,
                bits: self.bits,
                error: self.error.mul(Mag::pow2(e)),
            }
        } else {
            let (mant, exact) = floor_shift(self.mant.clone(), (-e) as u32);
            let mut error = self.error.mul(Mag::pow2(e));
            if !exact {
                error = error.add(self.ulp());
            }
            CertifiedReal { mant, bits: self.bits, error }
        }
    }

    pub fn div_int(&self, n: &BigInt) -> Self {
        assert!(!n.is_zero(), "division by zero integer");
        let (quot, rem) = self.mant.div_mod_floor(n);
        let mut error = self.error.div(Mag::from_bigint_scaled_down(n, 0));
        if !rem.is_zero() {
            error = error.add(self.ulp());
        }
        CertifiedReal { mant: quot, bits: self.bits, error }
    }

    pub fn div_u64(&self, n: u64) -> Self {
        self.div_int(&BigInt::from(n))
    }

    pub fn mul_rational(&self, q: &BigRational) -> Self {
        if q.denom().is_one() {
            self.mul_int(q.numer())
        } else {
            self.mul_int(q.numer()).div_int(q.denom())
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_bits(other);
        let lower = other.abs_lower();
        if lower.is_zero() {
            return Err(Error::PrecisionLoss("divisor ball contains zero".into()));
        }
        let scaled: BigInt = &self.mant << self.bits as usize;
        let (quot, rem) = scaled.div_mod_floor(&other.mant);
        let quotient = CertifiedReal::exact(quot, self.bits);
        // |a/b - ã/b̃| <= (ra + |ã/b̃| rb) / (|b̃| - rb)
        let mut error = self
            .error
            .add(quotient.midpoint_abs().mul(other.error))
            .div(lower);
        if !rem.is_zero() {
            error = error.add(self.ulp());
        }
        Ok(CertifiedReal { error, ..quotient })
    }

    pub fn recip(&self) -> Result<Self> {
        CertifiedReal::one(self.bits).div(self)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Integer power; negative exponents go through a reciprocal.
    pub fn powi(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.recip()?.powi(-n);
        }
        let mut acc = CertifiedReal::one(self.bits);
        let mut base = self.clone();
        let mut n = n as u64;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = base.square();
            }
        }
        Ok(acc)
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.mant.is_negative() && !self.abs_lower().is_zero() {
            return Err(Error::Domain("square root of a negative number".into()));
        }
        let radicand = if self.mant.is_negative() { BigInt::zero() } else { self.mant.clone() };
        let scaled: BigInt = radicand << self.bits as usize;
        let root = scaled.sqrt();
        let exact_root = &root * &root == scaled;
        let mid = CertifiedReal::exact(root, self.bits);
        // |√a - √ã| <= min(ra / √(ã - ra), √ra)
        let mut error = self.error.sqrt();
        let lower = Mag::from_bigint_scaled_down(&self.mant, -(self.bits as i64)).sub_lower(self.error);
        if let Some(lo) = lower {
            error = error.min(self.error.div(lo.sqrt()));
        }
        if !exact_root {
            error = error.add(self.ulp());
        }
        Ok(CertifiedReal { error, ..mid })
    }

    pub fn abs(&self) -> Self {
        CertifiedReal { mant: self.mant.abs(), bits: self.bits, error: self.error }
    }

    /// Union of two balls (used when a value is known to lie in either).
    pub fn hull(&self, other: &Self) -> Self {
        self.check_bits(other);
        let mid: BigInt = (&self.mant + &other.mant) >> 1usize;
        let c = CertifiedReal::exact(mid, self.bits);
        let r1 = (self - &c).abs_upper();
        let r2 = (other - &c).abs_upper();
        CertifiedReal { error: r1.max(r2), ..c }
    }

    /// Decimal string with `digits` digits after the point, rounded half-up.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let scale = BigInt::from(10u8).pow(digits as u32);
        let scaled: BigInt = &self.mant * scale;
        let half = if self.bits == 0 { BigInt::zero() } else { BigInt::one() << (self.bits - 1) as usize };
        let rounded: BigInt = (scaled + half) >> self.bits as usize;
        let negative = rounded.is_negative();
        let s = rounded.abs().to_string();
        let s = if s.len() <= digits { format!("{}{}", "0".repeat(digits + 1 - s.len()), s) } else { s };
        let (int_part, frac_part) = s.split_at(s.len() - digits);
        let sign = if negative { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.bits as f64) * std::f64::consts::LOG10_2).floor() as usize;
        write!(f, "{} ± {}", self.to_decimal_string(digits.min(60)), self.error)
    }
}

impl<'a> Add<&'a CertifiedReal> for &'a CertifiedReal {
    type Output = CertifiedReal;
    fn add(self, rhs: &CertifiedReal) -> CertifiedReal {
        self.check_bits(rhs);
        CertifiedReal { mant: &self.mant + &rhs.mant, bits: self.bits, error: self.error.add(rhs.error) }
    }
}

impl<'a> Sub<&'a CertifiedReal> for &'a CertifiedReal {
    type Output = CertifiedReal;
    fn sub(self, rhs: &CertifiedReal) -> CertifiedReal {
        self.check_bits(rhs);
        CertifiedReal { mant: &self.mant - &rhs.mant, bits: self.bits, error: self.error.add(rhs.error) }
    }
}

impl<'a> Mul<&'a CertifiedReal> for &'a CertifiedReal {
    type Output = CertifiedReal;
    fn mul(self, rhs: &CertifiedReal) -> CertifiedReal {
        self.check_bits(rhs);
        let (mant, exact) = floor_shift(&self.mant * &rhs.mant, self.bits);
        // |ab - ãb̃| <= |ã| rb + |b̃| ra + ra rb
        let mut error = self
            .midpoint_abs()
            .mul(rhs.error)
            .add(rhs.midpoint_abs().mul(self.error))
            .add(self.error.mul(rhs.error));
        if !exact {
            error = error.add(self.ulp());
        }
        CertifiedReal { mant, bits: self.bits, error }
    }
}

impl Neg for &CertifiedReal {
    type Output = CertifiedReal;
    fn neg(self) -> CertifiedReal {
        CertifiedReal { mant: -&self.mant, bits: self.bits, error: self.error }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CertifiedReal> for CertifiedReal {
            type Output = CertifiedReal;
            fn $m(self, rhs: CertifiedReal) -> CertifiedReal {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CertifiedReal> for CertifiedReal {
            type Output = CertifiedReal;
            fn $m(self, rhs: &CertifiedReal) -> CertifiedReal {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CertifiedReal {
    type Output = CertifiedReal;
    fn neg(self) -> CertifiedReal {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_conversion_is_certified() {
        let third = CertifiedReal::from_rational(&q(1, 3), 100);
        assert!(!third.is_exact());
        assert!((third.to_f64() - 1.0 / 3.0).abs() < 1e-15);
        let half = CertifiedReal::from_rational(&q(-1, 2), 100);
        assert!(half.is_exact());
        assert!(half.is_exactly(0) == false);
    }

    #[test]
    fn multiplication_and_division() {
        let bits = 128;
        let a = CertifiedReal::from_rational(&q(2, 7), bits);
        let b = CertifiedReal::from_rational(&q(-5, 3), bits);
        let p = &a * &b;
        assert!((p.to_f64() + 10.0 / 21.0).abs() < 1e-15);
        let back = p.div(&b).unwrap();
        assert!((&back - &a).abs_upper().log2() < -120.0);
        let zero = CertifiedReal::zero(bits);
        assert!(a.div(&zero).is_err());
    }

    #[test]
    fn exact_products_stay_exact() {
        let a = CertifiedReal::from_i64(-1, 64);
        let b = CertifiedReal::from_rational(&q(3, 4), 64);
        assert!((&a * &b).is_exact());
        assert!(a.powi(7).unwrap().is_exactly(-1));
    }

    #[test]
    fn sqrt_of_two() {
        let two = CertifiedReal::from_i64(2, 200);
        let r = two.sqrt().unwrap();
        let sq = r.square();
        assert!((&sq - &two).abs_upper().log2() < -195.0);
        assert!(CertifiedReal::from_i64(-1, 64).sqrt().is_err());
    }

    #[test]
    fn decimal_rendering() {
        let x = CertifiedReal::from_rational(&q(-1, 8), 64);
        assert_eq!(x.to_decimal_string(3), "-0.125");
        assert_eq!(x.to_decimal_string(2), "-0.12");
        let y = CertifiedReal::from_rational(&q(2, 3), 64);
        assert_eq!(y.to_decimal_string(5), "0.66667");
        assert_eq!(CertifiedReal::from_i64(42, 16).to_decimal_string(0), "42");
        assert_eq!(CertifiedReal::zero(16).to_decimal_string(2), "0.00");
    }

    #[test]
    fn precision_change() {
        let x = CertifiedReal::from_rational(&q(1, 3), 200);
        let y = x.with_bits(100);
        assert_eq!(y.bits(), 100);
        assert!((&y.with_bits(200) - &x).abs_upper() <= y.error().add(x.error()).add(Mag::pow2(-99)));
    }
}
