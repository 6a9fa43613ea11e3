use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::weight::{HarmonicFactor, HarmonicWeight};
use crate::error::{Error, Result};
use crate::mpl::SeriesValue;
use crate::precision::{CertifiedReal, Mag, PrecisionContext};

/// Largest table the exact harmonic tables will build.
pub const MAX_TABLE_SIZE: usize = 20_000;
/// Largest cutoff the central-binomial summation will attempt.
pub const MAX_APERY_TERMS: u64 = 5_000_000;

/// Exact H_n, H^{(2)}_n and ζ_n(1,1) for 0 ≤ n ≤ N.
#[derive(Clone, Debug)]
pub struct HarmonicTables {
    pub h: Vec<BigRational>,
    pub h2: Vec<BigRational>,
    pub z11: Vec<BigRational>,
}

pub fn harmonic_tables(n: usize) -> Result<HarmonicTables> {
    if n == 0 {
        return Err(Error::Domain("harmonic tables need N >= 1".into()));
    }
    if n > MAX_TABLE_SIZE {
        return Err(Error::Capacity(format!("exact harmonic tables are limited to N <= {MAX_TABLE_SIZE}")));
    }
    let mut h = vec![BigRational::zero()];
    let mut h2 = vec![BigRational::zero()];
    let mut z11 = vec![BigRational::zero()];
    for k in 1..=n {
        let inv = BigRational::new(BigInt::one(), BigInt::from(k));
        // ζ_k(1,1) = ζ_{k−1}(1,1) + H_{k−1}/k
        z11.push(&z11[k - 1] + &h[k - 1] * &inv);
        h2.push(&h2[k - 1] + &inv * &inv);
        h.push(&h[k - 1] + inv);
    }
    Ok(HarmonicTables { h, h2, z11 })
}

/// C(2n, n) by the multiplicative recurrence C(2k, k) = C(2k−2, k−1)·2(2k−1)/k.
pub fn central_binomial(n: u64) -> BigInt {
    let mut c = BigInt::one();
    for k in 1..=n {
        c = c * BigInt::from(2 * (2 * k - 1)) / BigInt::from(k);
    }
    c
}

/// Σ_{n≥1} u^n / (n^s C(2n,n)) · w(n).
#[derive(Clone, Debug)]
pub struct AperySumSpec {
    pub u: CertifiedReal,
    pub s: u32,
    pub weight: HarmonicWeight,
}

impl AperySumSpec {
    pub fn new(u: CertifiedReal, s: u32, weight: HarmonicWeight) -> Self {
        AperySumSpec { u, s, weight }
    }
}

fn factor_bound(f: HarmonicFactor, n: u64) -> Mag {
    let lg = |m: f64| Mag::from_f64((1.0 + m.ln()) * (1.0 + 1e-12));
    match f {
        HarmonicFactor::One => Mag::from_u64(1),
        // H_{2n} ≤ 1 + ln 2n covers all four first-order harmonic numbers
        HarmonicFactor::H | HarmonicFactor::HPrev | HarmonicFactor::HDouble | HarmonicFactor::HDoublePrev => {
            lg(2.0 * n as f64)
        }
        HarmonicFactor::H2Prev => Mag::from_u64(2),
        HarmonicFactor::Z11Prev => lg(n as f64).powi(2).mul(Mag::pow2(-1)),
        HarmonicFactor::InvN => Mag::from_f64(1.0 / n as f64).mul(Mag::from_f64(1.0 + 1e-15)),
    }
}

/// Upper bound on |w(n)| from the per-factor bounds.
fn weight_bound(w: &HarmonicWeight, n: u64) -> Mag {
    w.terms().iter().fold(Mag::ZERO, |acc, t| {
        let coef = Mag::from_f64(rational_to_f64_upper(&t.coefficient));
        let prod = t.factors.iter().fold(coef, |p, f| p.mul(factor_bound(*f, n)));
        acc.add(prod)
    })
}

fn rational_to_f64_upper(q: &BigRational) -> f64 {
    let num = Mag::from_bigint_scaled(q.numer(), 0);
    let den = Mag::from_bigint_scaled_down(q.denom(), 0);
    num.div(den).to_f64()
}

/// Bound on Σ_{n>N} |term_n|.
///
/// |u^n / C(2n,n)| ≤ (|u|/4)^n · 2√n, and the ratio of consecutive majorant
/// terms is at most σ = (|u|/4)(1 + 1/(N+1))^{D+1} for n > N, where D is the
/// logarithmic degree of the weight (each harmonic bound grows by at most a
/// factor 1 + 1/n per step).
pub fn apery_tail_bound(u_abs: Mag, s: u32, weight: &HarmonicWeight, n: u64) -> Option<Mag> {
    if u_abs.is_zero() {
        return Some(Mag::ZERO);
    }
    let quarter = u_abs.mul(Mag::pow2(-2));
    let m = n + 1;
    let growth = Mag::from_f64(1.0 + 1.0 / m as f64).powi(weight.log_degree() as u64 + 1);
    let sigma = quarter.mul(growth);
    let gap = Mag::from_u64(1).sub_lower(sigma)?;
    let central = quarter.powi(m).mul(Mag::from_u64(2)).mul(Mag::from_u64(m).sqrt());
    let lead = central
        .div(Mag::from_f64(m as f64).powi(s as u64).mul(Mag::from_f64(1.0 - 1e-15)))
        .mul(weight_bound(weight, m));
    Some(lead.div(gap))
}

struct Running {
    h: CertifiedReal,
    h_prev: CertifiedReal,
    h_double: CertifiedReal,
    h_double_prev: CertifiedReal,
    h2_prev: CertifiedReal,
    z11_prev: CertifiedReal,
    inv_n: CertifiedReal,
}

impl Running {
    fn new(bits: u32) -> Self {
        let z = CertifiedReal::zero(bits);
        Running {
            h: z.clone(),
            h_prev: z.clone(),
            h_double: z.clone(),
            h_double_prev: z.clone(),
            h2_prev: z.clone(),
            z11_prev: z.clone(),
            inv_n: z,
        }
    }

    /// Advance from n−1 to n.
    fn step(&mut self, n: u64) {
        let bits = self.h.bits();
        let one = CertifiedReal::one(bits);
        if n > 1 {
            let m = BigInt::from(n - 1);
            // ζ_{n−1}(1,1) = ζ_{n−2}(1,1) + H_{n−2}/(n−1), with h_prev = H_{n−2} here
            self.z11_prev = &self.z11_prev + &self.h_prev.div_int(&m);
            self.h2_prev = &self.h2_prev + &one.div_int(&(&m * &m));
        }
        self.h_prev = self.h.clone();
        self.inv_n = one.div_u64(n);
        self.h = &self.h + &self.inv_n;
        self.h_double_prev = &self.h_double + &one.div_u64(2 * n - 1);
        self.h_double = &self.h_double_prev + &one.div_u64(2 * n);
    }

    fn get(&self, f: HarmonicFactor) -> Option<&CertifiedReal> {
        Some(match f {
            HarmonicFactor::One => return None,
            HarmonicFactor::H => &self.h,
            HarmonicFactor::HPrev => &self.h_prev,
            HarmonicFactor::HDouble => &self.h_double,
            HarmonicFactor::HDoublePrev => &self.h_double_prev,
            HarmonicFactor::H2Prev => &self.h2_prev,
            HarmonicFactor::Z11Prev => &self.z11_prev,
            HarmonicFactor::InvN => &self.inv_n,
        })
    }

    fn weight(&self, w: &HarmonicWeight) -> CertifiedReal {
        let bits = self.h.bits();
        let mut acc = CertifiedReal::zero(bits);
        for t in w.terms() {
            let mut prod = CertifiedReal::one(bits);
            for f in &t.factors {
                if let Some(v) = self.get(*f) {
                    prod = &prod * v;
                }
            }
            acc = &acc + &prod.mul_rational(&t.coefficient);
        }
        acc
    }
}

fn check_spec(spec: &AperySumSpec, ctx: &PrecisionContext) -> Result<()> {
    if spec.s < 2 {
        return Err(Error::Domain(format!("central-binomial sums need s >= 2, got {}", spec.s)));
    }
    if spec.u.bits() != ctx.working_bits() {
        return Err(Error::Structure("base u has a precision different from the context".into()));
    }
    if spec.u.abs_upper() >= Mag::from_u64(4) {
        return Err(Error::Divergence(format!(
            "central-binomial sum needs |u| < 4 (got {:.6})",
            spec.u.to_f64()
        )));
    }
    Ok(())
}

/// Σ_{n=1}^{N} of the series, without tail.
fn partial_sum(spec: &AperySumSpec, n_max: u64, ctx: &PrecisionContext) -> CertifiedReal {
    let bits = ctx.working_bits();
    let unit = if spec.u.is_exactly(1) {
        Some(1)
    } else if spec.u.is_exactly(-1) {
        Some(-1)
    } else {
        None
    };
    let mut running = Running::new(bits);
    // b = u^n / C(2n, n)
    let mut b = CertifiedReal::one(bits);
    let mut sum = CertifiedReal::zero(bits);
    for n in 1..=n_max {
        b = match unit {
            Some(1) => b,
            Some(_) => -b,
            None => &b * &spec.u,
        };
        b = b.mul_int(&BigInt::from(n)).div_int(&BigInt::from(2 * (2 * n - 1)));
        running.step(n);
        let term = &b.div_int(&BigInt::from(n).pow(spec.s)) * &running.weight(&spec.weight);
        sum = &sum + &term;
    }
    sum
}

/// Partial sum through n = N together with the certified bound on the rest.
pub fn apery_partial(spec: &AperySumSpec, n: u64, ctx: &PrecisionContext) -> Result<(CertifiedReal, Mag)> {
    check_spec(spec, ctx)?;
    let tail = apery_tail_bound(spec.u.abs_upper(), spec.s, &spec.weight, n)
        .ok_or_else(|| Error::Unsupported(format!("cutoff {n} too small for a geometric tail bound")))?;
    Ok((partial_sum(spec, n, ctx), tail))
}

pub fn apery_sum_counted(spec: &AperySumSpec, ctx: &PrecisionContext) -> Result<SeriesValue> {
    check_spec(spec, ctx)?;
    if spec.u.is_exact_zero() {
        return Ok(SeriesValue { value: ctx.zero(), terms: 0 });
    }
    let u_abs = spec.u.abs_upper();
    let budget = ctx.epsilon().mul(Mag::pow2(-1));
    let per_term = 2.0 - u_abs.log2();
    let mut n = ((-budget.log2()) / per_term).ceil().max(1.0) as u64;
    let tail = loop {
        if n > MAX_APERY_TERMS {
            return Err(Error::Capacity(format!("central-binomial sum needs more than {MAX_APERY_TERMS} terms")));
        }
        if let Some(t) = apery_tail_bound(u_abs, spec.s, &spec.weight, n) {
            if t <= budget {
                break t;
            }
        }
        n += (n / 16).max(1);
    };
    let value = partial_sum(spec, n, ctx).with_error(tail);
    Ok(SeriesValue { value, terms: n })
}

pub fn apery_sum(spec: &AperySumSpec, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    apery_sum_counted(spec, ctx).map(|v| v.value)
}

/// y(u) = (1 − q)/(1 + q) with q = √(u/(u − 4)), for u < 0.
pub fn y_of_u(u: &CertifiedReal, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    if !u.certainly_negative() {
        return Err(Error::Domain(format!(
            "y(u) is supported for u < 0 only (got {:.6}); 0 <= u <= 4 has no real branch and u > 4 needs complex y",
            u.to_f64()
        )));
    }
    let one = ctx.one();
    let q = u.div(&(u - &ctx.int(4)))?.sqrt()?;
    (&one - &q).div(&(&one + &q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::{golden, make_context, zeta_even};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn tables() {
        let t = harmonic_tables(5).unwrap();
        assert_eq!(t.h[3], q(11, 6));
        assert_eq!(t.z11[2], q(1, 2));
        // brute force Σ_{5≥k>j≥1} 1/(kj)
        let mut brute = BigRational::zero();
        for k in 1..=5i64 {
            for j in 1..k {
                brute += q(1, k * j);
            }
        }
        assert_eq!(t.z11[5], brute);
        assert_eq!(t.h2[2], q(5, 4));
        assert!(harmonic_tables(0).is_err());
        assert!(matches!(harmonic_tables(MAX_TABLE_SIZE + 1), Err(Error::Capacity(_))));
    }

    #[test]
    fn binomials() {
        assert_eq!(central_binomial(0), BigInt::one());
        assert_eq!(central_binomial(5), BigInt::from(252));
        let fact = |n: u64| (1..=n).fold(BigInt::one(), |a, k| a * k);
        assert_eq!(central_binomial(30), fact(60) / (fact(30) * fact(30)));
    }

    #[test]
    fn running_values_match_tables() {
        let ctx = make_context(30).unwrap();
        let t = harmonic_tables(40).unwrap();
        let mut r = Running::new(ctx.working_bits());
        let bits = ctx.working_bits();
        for n in 1..=20u64 {
            r.step(n);
            let k = n as usize;
            let pairs = [
                (&r.h, &t.h[k]),
                (&r.h_prev, &t.h[k - 1]),
                (&r.h_double, &t.h[2 * k]),
                (&r.h_double_prev, &t.h[2 * k - 1]),
                (&r.h2_prev, &t.h2[k - 1]),
                (&r.z11_prev, &t.z11[k - 1]),
            ];
            for (got, want) in pairs {
                let w = CertifiedReal::from_rational(want, bits);
                assert!((got - &w).abs_upper().log2() < -(bits as f64) + 16.0, "n={n}");
            }
        }
    }

    #[test]
    fn second_order_harmonic_weight_gives_zeta4() {
        let ctx = make_context(50).unwrap();
        let spec = AperySumSpec::new(ctx.one(), 2, "H2(n-1)".parse().unwrap());
        let v = apery_sum_counted(&spec, &ctx).unwrap();
        let want = zeta_even(2, &ctx).unwrap().mul_i64(5).div_u64(108);
        assert!((&v.value - &want).abs_upper().to_f64() < 1e-45);
        assert!(v.terms < 200);
    }

    #[test]
    fn zero_base_and_errors() {
        let ctx = make_context(20).unwrap();
        let w = HarmonicWeight::one();
        assert!(apery_sum(&AperySumSpec::new(ctx.zero(), 2, w.clone()), &ctx).unwrap().is_exact_zero());
        assert!(matches!(apery_sum(&AperySumSpec::new(ctx.int(4), 2, w.clone()), &ctx), Err(Error::Divergence(_))));
        assert!(matches!(apery_sum(&AperySumSpec::new(ctx.int(-5), 2, w.clone()), &ctx), Err(Error::Divergence(_))));
        assert!(apery_sum(&AperySumSpec::new(ctx.one(), 1, w), &ctx).is_err());
    }

    #[test]
    fn tail_bound_is_sound() {
        let ctx = make_context(25).unwrap();
        for (u, w) in [((-7, 2), "H(2n-1)"), ((7, 2), "Z11(n-1)+H(n)^2"), ((1, 1), "10*H(n)-3*INV_N")] {
            let spec = AperySumSpec::new(ctx.rational(u.0, u.1), 3, w.parse().unwrap());
            let (a, tail) = apery_partial(&spec, 30, &ctx).unwrap();
            let (b, _) = apery_partial(&spec, 50, &ctx).unwrap();
            assert!((&a - &b).midpoint_abs() <= tail);
        }
    }

    #[test]
    fn y_map() {
        let ctx = make_context(40).unwrap();
        let y = y_of_u(&ctx.int(-1), &ctx).unwrap();
        assert!((&y - &golden(&ctx).phi_squared).abs_upper().log2() < -125.0);
        let half = y_of_u(&ctx.rational(-1, 2), &ctx).unwrap();
        assert!((&half - &ctx.rational(1, 2)).abs_upper().log2() < -125.0);
        // inverse map u = −(1 − y)²/y
        for u in [-2, -3] {
            let y = y_of_u(&ctx.int(u), &ctx).unwrap();
            let back = -(ctx.one() - y.clone()).square().div(&y).unwrap();
            assert!((&back - &ctx.int(u)).abs_upper().log2() < -120.0);
        }
        let near = y_of_u(&ctx.rational(-1, 1_000_000), &ctx).unwrap();
        assert!(near.to_f64() > 0.99);
        assert!(y_of_u(&ctx.zero(), &ctx).is_err());
        assert!(y_of_u(&ctx.int(2), &ctx).is_err());
        assert!(y_of_u(&ctx.int(5), &ctx).is_err());
    }
}
