//! Adaptive Gauss–Legendre quadrature used as an independent oracle for the
//! integral representations. The returned radius is an error *estimate* from
//! panel refinement, not a certified bound.

use crate::error::{Error, Result};
use crate::mpl::li;
use crate::precision::{ln, CertifiedReal, Mag, PrecisionContext};

pub trait Integrand: Sync {
    fn eval(&self, t: &CertifiedReal, ctx: &PrecisionContext) -> Result<CertifiedReal>;
}

impl<F> Integrand for F
where
    F: Fn(&CertifiedReal, &PrecisionContext) -> Result<CertifiedReal> + Sync,
{
    fn eval(&self, t: &CertifiedReal, ctx: &PrecisionContext) -> Result<CertifiedReal> {
        self(t, ctx)
    }
}

/// Nodes and weights on [−1, 1] stored as exact midpoints.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<CertifiedReal>,
    weights: Vec<CertifiedReal>,
}

/// P_m(x) and P_{m−1}(x) by the three-term recurrence, on midpoints.
fn legendre_pair(m: usize, x: &CertifiedReal) -> (CertifiedReal, CertifiedReal) {
    let bits = x.bits();
    let mut p0 = CertifiedReal::one(bits);
    let mut p1 = x.clone();
    for j in 1..m {
        let j = j as u64;
        let next = (&(x * &p1).mul_i64(2 * j as i64 + 1) - &p0.mul_i64(j as i64)).div_u64(j + 1);
        p0 = p1;
        p1 = next.midpoint();
    }
    (p1, p0)
}

impl GaussLegendre {
    pub fn new(m: usize, bits: u32) -> Self {
        assert!(m >= 2, "Gauss–Legendre needs at least two nodes");
        let one = CertifiedReal::one(bits);
        let mut nodes = Vec::with_capacity(m);
        let mut weights = Vec::with_capacity(m);
        for i in 0..m / 2 {
            let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
            let mut x = CertifiedReal::from_f64(guess, bits);
            for _ in 0..64 {
                let (pm, pm1) = legendre_pair(m, &x);
                // P'_m = m (x P_m − P_{m−1}) / (x² − 1)
                let deriv = (&(&x * &pm) - &pm1).mul_i64(m as i64).div(&(&x.square() - &one)).expect("interior node").midpoint();
                let step = pm.div(&deriv).expect("simple root").midpoint();
                x = (&x - &step).midpoint();
                if step.abs_upper().log2() < -(bits as f64) + 8.0 {
                    break;
                }
            }
            let (pm, pm1) = legendre_pair(m, &x);
            let deriv = (&(&x * &pm) - &pm1).mul_i64(m as i64).div(&(&x.square() - &one)).expect("interior node").midpoint();
            let w = &(&one - &x.square()) * &deriv.square();
            let w = one.mul_i64(2).div(&w).expect("positive weight").midpoint();
            nodes.push(x.clone());
            weights.push(w.clone());
            nodes.push(-x);
            weights.push(w);
        }
        if m % 2 == 1 {
            let zero = CertifiedReal::zero(bits);
            let (_, pm1) = legendre_pair(m, &zero);
            // P'_m(0) = m P_{m−1}(0)
            let deriv = pm1.mul_i64(m as i64);
            let w = one.mul_i64(2).div(&deriv.square()).expect("positive weight").midpoint();
            nodes.push(zero);
            weights.push(w);
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// ∫_a^b f on one panel.
    fn panel(&self, f: &dyn Integrand, a: &CertifiedReal, b: &CertifiedReal, ctx: &PrecisionContext) -> Result<CertifiedReal> {
        let half = (b - a).mul_pow2(-1);
        let mid = (a + b).mul_pow2(-1);
        let mut acc = ctx.zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let t = &mid + &(&half * x);
            let v = f.eval(&t.midpoint(), ctx)?;
            acc = &acc + &(w * &v.midpoint());
        }
        Ok((&acc * &half).midpoint())
    }
}

#[derive(Clone, Debug)]
pub struct QuadratureOptions {
    pub order: usize,
    pub tolerance: Mag,
    pub max_depth: u32,
    pub max_panels: usize,
}

impl QuadratureOptions {
    pub fn for_context(ctx: &PrecisionContext) -> Self {
        QuadratureOptions { order: 30, tolerance: ctx.epsilon(), max_depth: 240, max_panels: 20_000 }
    }
}

#[derive(Clone, Debug)]
pub struct QuadratureResult {
    pub value: CertifiedReal,
    pub error_estimate: Mag,
    pub panels: usize,
}

/// ∫_a^b f(t) dt with the default options for `ctx`; the ball radius carries
/// the refinement estimate.
pub fn quadrature(f: &dyn Integrand, a: &CertifiedReal, b: &CertifiedReal, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    let r = quadrature_with(f, a, b, &QuadratureOptions::for_context(ctx), ctx)?;
    Ok(r.value.with_error(r.error_estimate))
}

/// Adaptive bisection: a panel is accepted once halving it changes its value
/// by less than its share of the tolerance (or a small absolute floor, which
/// lets panels pile up at an integrable logarithmic endpoint).
pub fn quadrature_with(
    f: &dyn Integrand,
    a: &CertifiedReal,
    b: &CertifiedReal,
    opts: &QuadratureOptions,
    ctx: &PrecisionContext,
) -> Result<QuadratureResult> {
    let rule = GaussLegendre::new(opts.order, ctx.working_bits());
    let total_width = (b - a).abs_upper();
    if total_width.is_zero() {
        return Ok(QuadratureResult { value: ctx.zero(), error_estimate: Mag::ZERO, panels: 0 });
    }
    let floor = opts.tolerance.mul(Mag::pow2(-12));
    let mut value = ctx.zero();
    let mut estimate = Mag::ZERO;
    let mut panels = 0usize;
    let whole = rule.panel(f, a, b, ctx)?;
    let mut stack = vec![(a.clone(), b.clone(), whole, 0u32)];
    while let Some((lo, hi, q, depth)) = stack.pop() {
        let mid = (&lo + &hi).mul_pow2(-1).midpoint();
        let left = rule.panel(f, &lo, &mid, ctx)?;
        let right = rule.panel(f, &mid, &hi, ctx)?;
        let refined = &left + &right;
        let diff = (&refined - &q).midpoint_abs();
        let share = opts.tolerance.mul((&hi - &lo).abs_upper()).div(total_width);
        if diff <= share || diff <= floor {
            value = &value + &refined;
            estimate = estimate.add(diff);
            panels += 2;
            continue;
        }
        if depth >= opts.max_depth || panels + stack.len() >= opts.max_panels {
            return Err(Error::NonConvergence(format!(
                "quadrature refinement stalled at depth {depth} (panel change {diff})"
            )));
        }
        stack.push((lo, mid.clone(), left, depth + 1));
        stack.push((mid, hi, right, depth + 1));
    }
    Ok(QuadratureResult { value: value.midpoint(), error_estimate: estimate, panels })
}

/// Integrand of the defining integral of S_{a,b}(z) on [0, 1]:
/// ln^{a−1}(t) ln^b(1 − zt) / t.
#[derive(Clone, Debug)]
pub struct NielsenKernel {
    pub a: u32,
    pub b: u32,
    pub z: CertifiedReal,
}

impl Integrand for NielsenKernel {
    fn eval(&self, t: &CertifiedReal, ctx: &PrecisionContext) -> Result<CertifiedReal> {
        let lt = ln(t, ctx)?;
        let l1 = ln(&(&ctx.one() - &(&self.z * t)), ctx)?;
        let num = &lt.powi(self.a as i64 - 1)? * &l1.powi(self.b as i64)?;
        num.div(t)
    }
}

fn factorial(n: u32) -> num_bigint::BigInt {
    (1..=n).fold(num_bigint::BigInt::from(1), |acc, k| acc * k)
}

/// S_{a,b}(z) = (−1)^{a−1+b} / ((a−1)! b!) ∫_0^1 ln^{a−1}(t) ln^b(1 − zt) dt/t by quadrature.
pub fn nielsen_quadrature(a: u32, b: u32, z: &CertifiedReal, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    if a == 0 || b == 0 {
        return Err(Error::Domain("Nielsen indices a, b must be positive".into()));
    }
    let kernel = NielsenKernel { a, b, z: z.clone() };
    let integral = quadrature(&kernel, &ctx.zero(), &ctx.one(), ctx)?;
    let scaled = integral.div_int(&(factorial(a - 1) * factorial(b)));
    Ok(if (a - 1 + b) % 2 == 1 { -scaled } else { scaled })
}

/// ∫_0^{−y} Li3(x)/(1 + x) dx by quadrature.
pub fn h_m1001_quadrature(y: &CertifiedReal, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    let f = |x: &CertifiedReal, c: &PrecisionContext| -> Result<CertifiedReal> {
        li(3, x, c)?.div(&(&c.one() + x))
    };
    quadrature(&f, &ctx.zero(), &-y, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::{golden, ln2, make_context};

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let ctx = make_context(40).unwrap();
        let rule = GaussLegendre::new(10, ctx.working_bits());
        assert_eq!(rule.order(), 10);
        // ∫_{-1}^{1} x^18 = 2/19 exactly for a 10-point rule
        let f = |x: &CertifiedReal, _: &PrecisionContext| x.powi(18);
        let v = rule.panel(&f, &ctx.int(-1), &ctx.one(), &ctx).unwrap();
        let want = ctx.rational(2, 19);
        assert!((&v - &want).abs_upper().log2() < -120.0);
        let odd = GaussLegendre::new(7, ctx.working_bits());
        let v7 = odd.panel(&f, &ctx.zero(), &ctx.one(), &ctx).unwrap();
        assert!((v7.to_f64() - 1.0 / 19.0).abs() < 1e-3);
    }

    #[test]
    fn log_two_from_reciprocal() {
        let ctx = make_context(35).unwrap();
        let f = |t: &CertifiedReal, c: &PrecisionContext| (&c.one() - t).recip();
        let v = quadrature(&f, &ctx.zero(), &ctx.rational(1, 2), &ctx).unwrap();
        assert!((&v - &ln2(&ctx)).abs_upper().to_f64() < 1e-35);
    }

    #[test]
    fn logarithmic_endpoint() {
        // ∫_0^1 ln t dt = −1
        let ctx = make_context(30).unwrap();
        let f = |t: &CertifiedReal, c: &PrecisionContext| ln(t, c);
        let v = quadrature(&f, &ctx.zero(), &ctx.one(), &ctx).unwrap();
        assert!((&v + &ctx.one()).midpoint_abs().to_f64() < 1e-30);
    }

    #[test]
    fn nielsen_reference_value() {
        // S_{1,2}(0.3) from a 50-digit mpmath quadrature
        let ctx = make_context(32).unwrap();
        let v = nielsen_quadrature(1, 2, &ctx.rational(3, 10), &ctx).unwrap();
        assert_eq!(&v.to_decimal_string(32)[..30], "0.0281913410841070266329069165");
        let g = golden(&ctx);
        let w = nielsen_quadrature(2, 2, &g.phi_squared, &ctx).unwrap();
        assert_eq!(&w.to_decimal_string(32)[..30], "0.0221230410024230624005007829");
    }

    #[test]
    fn stalled_refinement_is_reported() {
        let ctx = make_context(30).unwrap();
        // 1/t is not integrable at 0
        let f = |t: &CertifiedReal, _: &PrecisionContext| t.recip();
        let opts = QuadratureOptions { max_depth: 30, ..QuadratureOptions::for_context(&ctx) };
        let r = quadrature_with(&f, &ctx.zero(), &ctx.one(), &opts, &ctx);
        assert!(matches!(r, Err(Error::NonConvergence(_))));
    }
}
