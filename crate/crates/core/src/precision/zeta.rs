//! Bernoulli numbers and Riemann zeta at integer arguments.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::consts::pi;
use super::context::PrecisionContext;
use super::mag::Mag;
use super::real::CertifiedReal;
use crate::error::{Error, Result};

/// Bernoulli numbers (with B₁ = −1/2) from Σ_{k=0}^{n} C(n+1, k) B_k = 0,
/// extended on demand.
#[derive(Clone, Debug)]
pub struct BernoulliTable {
    values: Vec<BigRational>,
}

impl Default for BernoulliTable {
    fn default() -> Self {
        Self::new()
    }
}

impl BernoulliTable {
    pub fn new() -> Self {
        BernoulliTable { values: vec![BigRational::one()] }
    }

    pub fn get(&mut self, n: usize) -> &BigRational {
        while self.values.len() <= n {
            self.extend_one();
        }
        &self.values[n]
    }

    fn extend_one(&mut self) {
        let m = self.values.len();
        if m >= 3 && m % 2 == 1 {
            self.values.push(BigRational::zero());
            return;
        }
        // B_m = -(1/(m+1)) Σ_{k<m} C(m+1, k) B_k
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (k, b) in self.values.iter().enumerate() {
            if !b.is_zero() {
                acc += b * BigRational::from_integer(binom.clone());
            }
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        self.values.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
}

/// Exact Bernoulli number B_n.
pub fn bernoulli(n: usize) -> BigRational {
    BernoulliTable::new().get(n).clone()
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// ζ(2k) = −B_{2k} (2πi)^{2k} / (2 (2k)!) with (2πi)^{2k} = (−1)^k (2π)^{2k}.
pub fn zeta_even(k: u32, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    if k == 0 {
        return Err(Error::Domain("zeta_even needs k >= 1".into()));
    }
    let n = 2 * k as usize;
    let b = bernoulli(n);
    let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    let two_pow = BigInt::one() << n;
    let coef = -b * BigRational::new(sign * two_pow, BigInt::from(2) * factorial(n as u64));
    let pow = pi(ctx).powi(n as i64)?;
    Ok(pow.mul_rational(&coef))
}

/// Rising factorial s (s+1) ⋯ (s+len−1).
fn rising(s: u64, len: u64) -> BigInt {
    (0..len).fold(BigInt::one(), |acc, i| acc * BigInt::from(s + i))
}

/// ζ(s) for integer s ≥ 2 by direct summation plus an Euler–Maclaurin tail.
pub fn zeta_int(s: i64, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    if s <= 1 {
        return Err(Error::Divergence(format!("zeta({s}) diverges")));
    }
    let s_u = s as u64;
    let n_cut = ctx.target_digits() as u64 + 10;
    let one = ctx.one();
    let mut sum = ctx.zero();
    for n in 1..n_cut {
        sum = &sum + &one.div_int(&BigInt::from(n).pow(s as u32));
    }
    let big_n = BigInt::from(n_cut);
    let bits = ctx.working_bits();
    let n_pow_s = big_n.pow(s as u32);
    // N^{1-s}/(s-1) + N^{-s}/2, exactly then rounded once
    let head = BigRational::new(big_n.clone(), &n_pow_s * BigInt::from(s_u - 1))
        + BigRational::new(BigInt::one(), &n_pow_s * 2);
    sum = &sum + &CertifiedReal::from_rational(&head, bits);

    let mut bern = BernoulliTable::new();
    let n2 = &big_n * &big_n;
    let mut denom = &n_pow_s / &big_n; // N^{s+2j-1}, advanced below
    let budget = ctx.epsilon().mul(Mag::pow2(-2));
    let mut j: u64 = 1;
    loop {
        denom = &denom * &n2;
        let coef = bern.get(2 * j as usize) * BigRational::new(rising(s_u, 2 * j - 1), factorial(2 * j));
        let exact = coef / BigRational::from_integer(denom.clone());
        let term = CertifiedReal::from_rational(&exact, bits);
        if term.abs_upper() <= budget {
            // remainder after j-1 correction terms is bounded by the first omitted one
            return Ok(sum.with_error(term.abs_upper().mul(Mag::from_u64(2))));
        }
        sum = &sum + &term;
        j += 1;
        if j > 4 * n_cut + 64 {
            return Err(Error::Capacity("Euler–Maclaurin correction did not settle".into()));
        }
    }
}

/// ζ(k) via the cheapest route: the even-argument closed form or the series.
pub fn zeta(k: i64, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    if k >= 2 && k % 2 == 0 {
        zeta_even((k / 2) as u32, ctx)
    } else {
        zeta_int(k, ctx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::context::make_context;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn first_bernoulli_numbers() {
        assert_eq!(bernoulli(0), q(1, 1));
        assert_eq!(bernoulli(1), q(-1, 2));
        assert_eq!(bernoulli(2), q(1, 6));
        assert_eq!(bernoulli(4), q(-1, 30));
        assert_eq!(bernoulli(6), q(1, 42));
        assert_eq!(bernoulli(12), q(-691, 2730));
    }

    #[test]
    fn bernoulli_from_series_expansion() {
        // independent oracle: invert the power series (e^t - 1)/t = Σ t^n/(n+1)!
        let n_max = 14;
        let a: Vec<BigRational> = (0..=n_max)
            .map(|n| BigRational::new(1.into(), factorial(n as u64 + 1)))
            .collect();
        let mut inv = vec![BigRational::zero(); n_max + 1];
        inv[0] = BigRational::one();
        for n in 1..=n_max {
            let mut acc = BigRational::zero();
            for k in 1..=n {
                acc += &a[k] * &inv[n - k];
            }
            inv[n] = -acc;
        }
        for (n, c) in inv.iter().enumerate() {
            let b = c * BigRational::from_integer(factorial(n as u64));
            assert_eq!(b, bernoulli(n), "B_{n}");
        }
    }

    #[test]
    fn odd_bernoulli_vanish() {
        let mut t = BernoulliTable::new();
        for n in 1..=20 {
            assert!(t.get(2 * n + 1).is_zero());
        }
    }

    #[test]
    fn even_zeta_closed_forms() {
        let ctx = make_context(40).unwrap();
        let p = pi(&ctx);
        let z2 = zeta_even(1, &ctx).unwrap();
        let expect = p.square().div_u64(6);
        assert!((&z2 - &expect).abs_upper().log2() < -140.0);
        let z4 = zeta_even(2, &ctx).unwrap();
        let expect4 = p.powi(4).unwrap().div_u64(90);
        assert!((&z4 - &expect4).abs_upper().log2() < -140.0);
        let z6 = zeta_even(3, &ctx).unwrap();
        let expect6 = p.powi(6).unwrap().div_u64(945);
        assert!((&z6 - &expect6).abs_upper().log2() < -140.0);
    }

    #[test]
    fn series_agrees_with_closed_form() {
        let ctx = make_context(40).unwrap();
        for k in 1..=6u32 {
            let a = zeta_int(2 * k as i64, &ctx).unwrap();
            let b = zeta_even(k, &ctx).unwrap();
            assert!((&a - &b).midpoint_abs() <= a.error().add(b.error()).add(Mag::pow2(-150)), "k={k}");
        }
    }

    #[test]
    fn apery_constant() {
        let ctx = make_context(45).unwrap();
        let z3 = zeta_int(3, &ctx).unwrap();
        assert_eq!(
            z3.to_decimal_string(45),
            "1.202056903159594285399738161511449990764986292"
        );
        assert!(z3.error() <= ctx.epsilon());
        assert!(matches!(zeta_int(1, &ctx), Err(Error::Divergence(_))));
    }
}
