//! π, ln 2, √5, the golden ratio and the natural logarithm at working precision.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::context::PrecisionContext;
use super::mag::Mag;
use super::real::CertifiedReal;
use crate::error::{Error, Result};

const EXTRA_BITS: u32 = 40;

/// Rounds an extended-precision mantissa with `err_ulps` of error down to `bits`.
fn finish(mant: BigInt, ext_bits: u32, err_ulps: f64, bits: u32) -> CertifiedReal {
    let err = Mag::from_f64(err_ulps).mul(Mag::pow2(-(ext_bits as i64)));
    CertifiedReal::from_parts(mant, ext_bits, err).with_bits(bits)
}

/// `atan(1/m) * 2^b` as an integer with its error in units of `2^-b`.
fn atan_inv(m: u64, b: u32) -> (BigInt, f64) {
    let m = BigInt::from(m);
    let m2 = &m * &m;
    let mut p = (BigInt::one() << b as usize).div_floor(&m);
    let mut err_p = 1.0;
    let mut sum = BigInt::zero();
    let mut err = 0.0;
    let mut j: u64 = 0;
    while !p.is_zero() {
        let term = p.div_floor(&BigInt::from(2 * j + 1));
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        err += err_p / (2 * j + 1) as f64 + 1.0;
        p = p.div_floor(&m2);
        err_p = err_p / 4.0 + 1.0;
        j += 1;
    }
    // alternating tail below the first omitted term
    (sum, err + err_p + 1.0)
}

/// `atanh(1/m) * 2^b` for an integer `m >= 2`.
fn atanh_inv(m: u64, b: u32) -> (BigInt, f64) {
    let m = BigInt::from(m);
    let m2 = &m * &m;
    let mut p = (BigInt::one() << b as usize).div_floor(&m);
    let mut err_p = 1.0;
    let mut sum = BigInt::zero();
    let mut err = 0.0;
    let mut j: u64 = 0;
    while !p.is_zero() {
        sum += p.div_floor(&BigInt::from(2 * j + 1));
        err += err_p / (2 * j + 1) as f64 + 1.0;
        p = p.div_floor(&m2);
        err_p = err_p / 4.0 + 1.0;
        j += 1;
    }
    (sum, err + 2.0 * (err_p + 1.0))
}

fn compute_pi(bits: u32) -> CertifiedReal {
    // π = 16 atan(1/5) - 4 atan(1/239)
    let b = bits + EXTRA_BITS;
    let (a5, e5) = atan_inv(5, b);
    let (a239, e239) = atan_inv(239, b);
    let mant = a5 * 16 - a239 * 4;
    finish(mant, b, 16.0 * e5 + 4.0 * e239, bits)
}

fn compute_ln2(bits: u32) -> CertifiedReal {
    // ln 2 = 2 atanh(1/3)
    let b = bits + EXTRA_BITS;
    let (s, e) = atanh_inv(3, b);
    finish(s * 2, b, 2.0 * e, bits)
}

/// π at the context's working precision.
pub fn pi(ctx: &PrecisionContext) -> CertifiedReal {
    ctx.cache().pi.get_or_init(|| compute_pi(ctx.working_bits())).clone()
}

pub fn ln2(ctx: &PrecisionContext) -> CertifiedReal {
    ctx.cache().ln2.get_or_init(|| compute_ln2(ctx.working_bits())).clone()
}

pub fn sqrt5(ctx: &PrecisionContext) -> CertifiedReal {
    ctx.cache()
        .sqrt5
        .get_or_init(|| ctx.int(5).sqrt().expect("5 is positive"))
        .clone()
}

/// The golden-ratio quantities used throughout: φ = (√5 − 1)/2, φ² and ln φ.
#[derive(Clone, Debug)]
pub struct GoldenValues {
    pub phi: CertifiedReal,
    pub phi_squared: CertifiedReal,
    pub ln_phi: CertifiedReal,
}

pub fn golden_ratio(ctx: &PrecisionContext) -> CertifiedReal {
    (&sqrt5(ctx) - &ctx.one()).mul_pow2(-1)
}

pub fn golden(ctx: &PrecisionContext) -> GoldenValues {
    let s5 = sqrt5(ctx);
    let phi = golden_ratio(ctx);
    // (3 − √5)/2
    let phi_squared = (&ctx.int(3) - &s5).mul_pow2(-1);
    let ln_phi = ln(&phi, ctx).expect("φ > 0");
    GoldenValues { phi, phi_squared, ln_phi }
}

/// `atanh(z) * 2^b` for `|z| <= 0.18` given as a `b`-bit mantissa; error in ulps.
fn atanh_small(z: &BigInt, b: u32) -> (BigInt, f64) {
    if z.is_negative() {
        let (s, e) = atanh_small(&-z, b);
        return (-s, e);
    }
    let z2 = (z * z) >> b as usize;
    let mut p = z.clone();
    let mut err_p = 0.0;
    let mut sum = BigInt::zero();
    let mut err = 0.0;
    let mut j: u64 = 0;
    while !p.is_zero() {
        sum += p.div_floor(&BigInt::from(2 * j + 1));
        err += err_p / (2 * j + 1) as f64 + 1.0;
        p = (&p * &z2) >> b as usize;
        err_p = err_p * 0.04 + 2.0;
        j += 1;
    }
    (sum, err + 1.1 * (err_p + 1.0))
}

/// Natural logarithm of a positive `mant * 2^-bits` as an extended-precision value
/// `k ln 2 + 2 atanh(z)`; returns the atanh part rounded to `bits` together with `k`.
fn ln_reduced(mant: &BigInt, bits: u32) -> (CertifiedReal, i64) {
    let b = bits + EXTRA_BITS;
    let x: BigInt = mant << EXTRA_BITS as usize;
    let one = BigInt::one() << b as usize;
    let mut k = x.bits() as i64 - 1 - b as i64;
    let reduce = |k: i64| -> (BigInt, bool) {
        if k >= 0 {
            let shifted: BigInt = &x >> k as usize;
            let exact = (&shifted << k as usize) == x;
            (shifted, exact)
        } else {
            (&x << (-k) as usize, true)
        }
    };
    let (mut m, mut exact) = reduce(k);
    // keep m in [1/√2, √2]
    if (&m * &m) > (&one * &one) * 2 {
        k += 1;
        (m, exact) = reduce(k);
    }
    let num: BigInt = (&m - &one) << b as usize;
    let den = &m + &one;
    let z = num.div_floor(&den);
    let err_z = if exact { 1.0 } else { 2.0 };
    let (s, err_s) = atanh_small(&z, b);
    // series approximates atanh(z̃); |atanh(z) - atanh(z̃)| <= err_z / (1 - z²)
    let total = 2.0 * (err_s + 1.04 * err_z);
    (finish(s * 2, b, total, bits), k)
}

/// ln x for a ball certainly contained in (0, ∞).
pub fn ln(x: &CertifiedReal, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    assert_eq!(x.bits(), ctx.working_bits(), "ln: precision mismatch");
    if !x.certainly_positive() {
        return Err(Error::Domain(format!(
            "logarithm needs a positive argument, got {:.6e} ± {}",
            x.to_f64(),
            x.error()
        )));
    }
    let (atanh_part, k) = ln_reduced(x.mantissa(), x.bits());
    let propagated = x.error().div(x.abs_lower());
    let result = if k == 0 { atanh_part } else { &atanh_part + &ln2(ctx).mul_i64(k) };
    Ok(result.with_error(propagated))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::context::make_context;

    // 60 digits of π, ln 2 and φ (published constants)
    const PI_60: &str = "3.141592653589793238462643383279502884197169399375105820974944";
    const LN2_60: &str = "0.693147180559945309417232121458176568075500134360255254120680";
    const PHI_50: &str = "0.61803398874989484820458683436563811772030917980576";

    fn agrees(x: &CertifiedReal, reference: &str, digits: usize) {
        let s = x.to_decimal_string(digits);
        assert_eq!(&s[..s.len() - 1], &reference[..s.len() - 1], "value {s}");
    }

    #[test]
    fn pi_and_ln2_digits() {
        let ctx = make_context(60).unwrap();
        let p = pi(&ctx);
        agrees(&p, PI_60, 58);
        assert!(p.error().log2() < -(ctx.working_bits() as f64) + 2.0);
        agrees(&ln2(&ctx), LN2_60, 58);
    }

    #[test]
    fn golden_quadratic() {
        let ctx = make_context(50).unwrap();
        let g = golden(&ctx);
        let q = &(&g.phi.square() + &g.phi) - &ctx.one();
        assert!(q.abs_upper().log2() < -48.0 * std::f64::consts::LOG2_10);
        let d = &(&ctx.one() - &g.phi_squared) - &g.phi;
        assert!(d.abs_upper().log2() < -48.0 * std::f64::consts::LOG2_10);
        assert!(g.ln_phi.certainly_negative());
        let v = g.phi.to_f64();
        assert!(v > 0.6 && v < 0.62);
    }

    #[test]
    fn golden_newton_oracle() {
        // Newton iteration on x² + x − 1 in exact rationals
        use num_rational::BigRational;
        let ctx = make_context(30).unwrap();
        let mut x = BigRational::new(3.into(), 5.into());
        for _ in 0..8 {
            let f = &x * &x + &x - BigRational::one();
            let df = &x * BigRational::from_integer(2.into()) + BigRational::one();
            x = &x - f / df;
        }
        let oracle = CertifiedReal::from_rational(&x, ctx.working_bits());
        let phi = golden_ratio(&ctx);
        assert!((&phi - &oracle).abs_upper().log2() < -100.0);
        agrees(&phi, PHI_50, 30);
    }

    #[test]
    fn logarithm_identities() {
        let ctx = make_context(40).unwrap();
        let three = ctx.int(3);
        let seven = ctx.rational(7, 1000);
        let l3 = ln(&three, &ctx).unwrap();
        let l7 = ln(&seven, &ctx).unwrap();
        let l21 = ln(&ctx.rational(21, 1000), &ctx).unwrap();
        let d = &(&l3 + &l7) - &l21;
        assert!(d.midpoint_abs() <= l3.error().add(l7.error()).add(l21.error()));
        assert!(d.abs_upper().log2() < -140.0);
        assert!(ln(&ctx.one(), &ctx).unwrap().abs_upper().log2() < -150.0);
        assert!(ln(&ctx.zero(), &ctx).is_err());
        assert!(ln(&ctx.int(-2), &ctx).is_err());
        let e1 = (l3.to_f64() - 3f64.ln()).abs();
        assert!(e1 < 1e-15);
    }

    #[test]
    fn log_of_huge_and_tiny() {
        let ctx = make_context(30).unwrap();
        let big = ctx.int(1 << 40);
        let l = ln(&big, &ctx).unwrap();
        let expect = &ln2(&ctx).mul_i64(40);
        assert!((&l - expect).abs_upper().log2() < -90.0);
        let tiny = ctx.rational(1, 1 << 50);
        let lt = ln(&tiny, &ctx).unwrap();
        assert!((lt.to_f64() + 50.0 * 2f64.ln()).abs() < 1e-12);
    }
}
