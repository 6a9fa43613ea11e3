//! Multiple polylogarithms
//!
//! ```text
//! Li_{k1,…,kr}(x1,…,xr) = Σ_{n1>n2>…>nr>0} x1^n1 ⋯ xr^nr / (n1^k1 ⋯ nr^kr)
//! ```
//!
//! evaluated by inner-to-outer prefix accumulation with a certified tail
//! bound. When every prefix product `|x1⋯xj|` is below one the series is
//! summed directly. When all arguments are exactly ±1 (multiple zeta values
//! and their alternating cousins) convergence is only polynomial, so the
//! value is rewritten by splitting the iterated-integral path at 1/2 into
//! products of series with ratio at most 1/2.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::precision::{CertifiedReal, Mag, PrecisionContext};

/// Largest outer cutoff the direct summation will attempt.
pub const MAX_TERMS: u64 = 20_000_000;

/// An admissible index (k1, …, kr): non-empty, every part at least one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Structure("composition must have at least one part".into()));
        }
        if parts.iter().any(|&k| k == 0) {
            return Err(Error::Structure(format!("composition parts must be positive: {parts:?}")));
        }
        Ok(Composition(parts))
    }

    /// (a, 1, …, 1) with `ones` trailing ones.
    pub fn with_trailing_ones(first: u32, ones: usize) -> Result<Self> {
        let mut parts = vec![first];
        parts.extend(std::iter::repeat(1).take(ones));
        Composition::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl std::str::FromStr for Composition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = trimmed
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad index part {p:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Composition::new(parts)
    }
}

/// Argument tuple (x1, …, xr) paired with a composition of the same depth.
#[derive(Clone, Debug)]
pub struct MplArgument(pub Vec<CertifiedReal>);

impl MplArgument {
    /// (x, 1, …, 1) for the single-variable function of depth `depth`.
    pub fn single(x: &CertifiedReal, depth: usize) -> Self {
        let mut args = vec![x.clone()];
        args.extend(std::iter::repeat(CertifiedReal::one(x.bits())).take(depth - 1));
        MplArgument(args)
    }
}

/// A series value together with the number of outer terms that produced it.
#[derive(Clone, Debug)]
pub struct SeriesValue {
    pub value: CertifiedReal,
    pub terms: u64,
}

fn unit_sign(x: &CertifiedReal) -> Option<i8> {
    if x.is_exactly(1) {
        Some(1)
    } else if x.is_exactly(-1) {
        Some(-1)
    } else {
        None
    }
}

/// Upper bounds on the prefix moduli |x1⋯xj|.
fn prefix_moduli(args: &[CertifiedReal]) -> Vec<Mag> {
    let mut acc = Mag::from_u64(1);
    args.iter()
        .map(|x| {
            acc = acc.mul(x.abs_upper());
            acc
        })
        .collect()
}

fn prefix_moduli_lower(args: &[CertifiedReal]) -> Vec<Mag> {
    let mut acc = Mag::from_u64(1);
    args.iter()
        .map(|x| {
            acc = acc.mul(x.abs_lower()).mul(Mag::from_f64(1.0 - 1e-15));
            acc
        })
        .collect()
}

/// Tail bound after outer cutoff `n`:
/// ρ^{n+1} (1 + ln(n+1))^{r−1} / ((n+1)^{k1} (1 − σ)), σ = ρ (1 + 1/n)^{r−1}.
///
/// Each term is bounded by ρ^{n1} / Π nj^kj and the inner sums by
/// H_{n1−1}^{r−1} ≤ (1 + ln n1)^{r−1}; the ratio of consecutive majorant
/// terms is then at most σ. Returns `None` when σ ≥ 1.
pub fn direct_tail_bound(rho: Mag, k1: u32, depth: usize, n: u64) -> Option<Mag> {
    if rho.is_zero() {
        return Some(Mag::ZERO);
    }
    let n1 = (n + 1) as f64;
    let growth = Mag::from_f64(1.0 + 1.0 / n as f64).powi(depth as u64 - 1);
    let sigma = rho.mul(growth);
    let one = Mag::from_u64(1);
    let gap = one.sub_lower(sigma)?;
    let log_factor = Mag::from_f64(1.0 + n1.ln() * (1.0 + 1e-12)).powi(depth as u64 - 1);
    let lead = rho
        .powi(n + 1)
        .mul(log_factor)
        .div(Mag::from_f64(n1).powi(k1 as u64).mul(Mag::from_f64(1.0 - 1e-15)));
    Some(lead.div(gap))
}

fn choose_cutoff(rho: Mag, k1: u32, depth: usize, budget: Mag) -> Result<u64> {
    if rho.is_zero() {
        return Ok(1);
    }
    let per_term = -rho.log2();
    let mut n = ((-budget.log2()) / per_term).ceil().max(1.0) as u64;
    loop {
        if n > MAX_TERMS {
            return Err(Error::Capacity(format!(
                "series needs more than {MAX_TERMS} terms (prefix modulus {:.6})",
                rho.to_f64()
            )));
        }
        if let Some(t) = direct_tail_bound(rho, k1, depth, n) {
            if t <= budget {
                return Ok(n);
            }
        }
        n += (n / 16).max(1);
    }
}

/// Partial sum over n1 ≤ n of the nested series (no tail added).
///
/// With prefix products yj = x1⋯xj (y0 = 1) and Tj(n) the nested sum of
/// levels j..r restricted to nj < n, the scaled quantities
/// Uj(n) = y_{j−1}^n Tj(n) obey
///
/// ```text
/// Uj(n+1) = y_{j−1} (Uj(n) + U_{j+1}(n) / n^kj),   U_{r+1}(n) = yr^n,
/// ```
///
/// and every Uj stays bounded when the prefix moduli are at most one, so no
/// intermediate quantity amplifies rounding error even if some xj > 1.
fn nested_partial_sum(ks: &[u32], args: &[CertifiedReal], n_max: u64) -> CertifiedReal {
    let bits = args[0].bits();
    let r = ks.len();
    let mut prefix: Vec<CertifiedReal> = Vec::with_capacity(r + 1);
    prefix.push(CertifiedReal::one(bits));
    for x in args {
        let next = prefix.last().unwrap() * x;
        prefix.push(next);
    }
    let unit: Vec<i8> = prefix.iter().map(|y| unit_sign(y).unwrap_or(0)).collect();
    let scale = |v: CertifiedReal, j: usize| -> CertifiedReal {
        match unit[j] {
            1 => v,
            -1 => -v,
            _ => &v * &prefix[j],
        }
    };
    let mut u: Vec<CertifiedReal> = vec![CertifiedReal::zero(bits); r];
    let mut top = prefix[r].clone();
    for n in 1..=n_max {
        let big_n = BigInt::from(n);
        for j in 0..r {
            let inner = if j + 1 < r { &u[j + 1] } else { &top };
            let step = inner.div_int(&big_n.pow(ks[j]));
            u[j] = scale(&u[j] + &step, j);
        }
        top = scale(top, r);
    }
    // u[0] = U1(n_max + 1) with y0 = 1
    u.swap_remove(0)
}

/// Direct summation up to an explicit cutoff, returning the partial sum and the
/// certified bound on everything beyond it.
pub fn mpl_truncated(
    idx: &Composition,
    arg: &MplArgument,
    n: u64,
    _ctx: &PrecisionContext,
) -> Result<(CertifiedReal, Mag)> {
    check_shape(idx, arg)?;
    let rho = prefix_moduli(&arg.0).into_iter().fold(Mag::ZERO, Mag::max);
    if rho >= Mag::from_u64(1) {
        return Err(Error::Unsupported("explicit cutoffs need every prefix modulus below one".into()));
    }
    let tail = direct_tail_bound(rho, idx.parts()[0], idx.depth(), n)
        .ok_or_else(|| Error::Unsupported(format!("cutoff {n} too small for a geometric tail bound")))?;
    Ok((nested_partial_sum(idx.parts(), &arg.0, n), tail))
}

fn check_shape(idx: &Composition, arg: &MplArgument) -> Result<()> {
    if idx.depth() != arg.0.len() {
        return Err(Error::Structure(format!(
            "index {} has depth {} but {} arguments were given",
            idx,
            idx.depth(),
            arg.0.len()
        )));
    }
    Ok(())
}

fn direct(idx: &Composition, args: &[CertifiedReal], rho: Mag, ctx: &PrecisionContext) -> Result<SeriesValue> {
    if args.iter().any(|x| x.is_exact_zero()) && args[0].is_exact_zero() {
        return Ok(SeriesValue { value: ctx.zero(), terms: 0 });
    }
    let budget = ctx.epsilon().mul(Mag::pow2(-1));
    let n = choose_cutoff(rho, idx.parts()[0], idx.depth(), budget)?;
    let tail = direct_tail_bound(rho, idx.parts()[0], idx.depth(), n).expect("cutoff was certified");
    let value = nested_partial_sum(idx.parts(), args, n).with_error(tail);
    Ok(SeriesValue { value, terms: n })
}

/// G(b1, …, bm; 1/2) for letters in {0, ±1, 2} whose last letter is nonzero,
/// as (−1)^d Li_{m1,…,md}(z/c1, c1/c2, …) with z = 1/2.
fn g_at_half(
    letters: &[i8],
    ctx: &PrecisionContext,
    memo: &mut HashMap<Vec<i8>, SeriesValue>,
) -> Result<SeriesValue> {
    if letters.is_empty() {
        return Ok(SeriesValue { value: ctx.one(), terms: 0 });
    }
    if let Some(v) = memo.get(letters) {
        return Ok(SeriesValue { value: v.value.clone(), terms: 0 });
    }
    debug_assert!(*letters.last().unwrap() != 0);
    let mut parts = Vec::new();
    let mut nodes: Vec<i64> = Vec::new();
    let mut zeros = 0;
    for &b in letters {
        if b == 0 {
            zeros += 1;
        } else {
            parts.push(zeros + 1);
            nodes.push(b as i64);
            zeros = 0;
        }
    }
    let bits = ctx.working_bits();
    let mut args = Vec::with_capacity(nodes.len());
    let mut prev = BigRational::new(BigInt::one(), BigInt::from(2));
    for &c in &nodes {
        let c = BigRational::from_integer(BigInt::from(c));
        args.push(CertifiedReal::from_rational(&(&prev / &c), bits));
        prev = c;
    }
    let idx = Composition::new(parts)?;
    let rho = prefix_moduli(&args).into_iter().fold(Mag::ZERO, Mag::max);
    let mut v = direct(&idx, &args, rho, ctx)?;
    if nodes.len() % 2 == 1 {
        v.value = -v.value;
    }
    memo.insert(letters.to_vec(), v.clone());
    Ok(v)
}

/// All arguments exactly ±1: split the path 0 → 1 at 1/2,
///
/// G(a1…aw; 1) = Σ_i (−1)^i G(1−ai, …, 1−a1; 1/2) · G(a_{i+1}…aw; 1/2).
fn unit_arguments(idx: &Composition, signs: &[i8], ctx: &PrecisionContext) -> Result<SeriesValue> {
    let mut word: Vec<i8> = Vec::with_capacity(idx.weight() as usize);
    let mut prefix: i8 = 1;
    for (k, s) in idx.parts().iter().zip(signs) {
        prefix *= s;
        word.extend(std::iter::repeat(0).take(*k as usize - 1));
        word.push(prefix); // 1/(x1⋯xj) = x1⋯xj for unit arguments
    }
    let mut memo = HashMap::new();
    let mut total = ctx.zero();
    let mut terms = 0;
    for i in 0..=word.len() {
        let head: Vec<i8> = word[..i].iter().rev().map(|a| 1 - a).collect();
        let left = g_at_half(&head, ctx, &mut memo)?;
        let right = g_at_half(&word[i..], ctx, &mut memo)?;
        terms += left.terms + right.terms;
        let prod = &left.value * &right.value;
        total = if i % 2 == 0 { &total + &prod } else { &total - &prod };
    }
    // Li = (−1)^depth G
    if idx.depth() % 2 == 1 {
        total = -total;
    }
    Ok(SeriesValue { value: total, terms })
}

/// Multi-variable MPL with the number of terms used.
pub fn mpl_counted(idx: &Composition, arg: &MplArgument, ctx: &PrecisionContext) -> Result<SeriesValue> {
    check_shape(idx, arg)?;
    let args = &arg.0;
    for x in args {
        if x.bits() != ctx.working_bits() {
            return Err(Error::Structure("argument precision differs from the context".into()));
        }
    }
    let k1 = idx.parts()[0];
    let upper = prefix_moduli(args);
    let rho = upper.iter().copied().fold(Mag::ZERO, Mag::max);
    if rho < Mag::from_u64(1) {
        return direct(idx, args, rho, ctx);
    }
    let signs: Option<Vec<i8>> = args.iter().map(unit_sign).collect();
    if let Some(signs) = signs {
        if k1 == 1 {
            return Err(Error::Admissibility(format!(
                "Li{idx} with |x1| = 1 needs k1 >= 2"
            )));
        }
        return unit_arguments(idx, &signs, ctx);
    }
    let lower = prefix_moduli_lower(args);
    if lower.iter().any(|m| *m > Mag::from_u64(1)) {
        return Err(Error::Divergence(format!("a prefix product of the arguments of Li{idx} exceeds one in modulus")));
    }
    if k1 == 1 && (unit_sign(&args[0]).is_some() || args[0].abs_lower() >= Mag::from_u64(1)) {
        return Err(Error::Admissibility(format!("Li{idx} with |x1| = 1 needs k1 >= 2")));
    }
    Err(Error::Unsupported(format!(
        "Li{idx}: prefix modulus reaches one with arguments other than exact ±1"
    )))
}

pub fn mpl(idx: &Composition, arg: &MplArgument, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    mpl_counted(idx, arg, ctx).map(|v| v.value)
}

/// Single-variable Li_{k1,…,kr}(x) = Li_{k1,…,kr}(x, 1, …, 1).
pub fn mpl_single_counted(idx: &Composition, x: &CertifiedReal, ctx: &PrecisionContext) -> Result<SeriesValue> {
    if x.is_exactly(1) && idx.parts()[0] == 1 {
        return Err(Error::Admissibility(format!("Li{idx}(1) diverges: k1 = 1")));
    }
    mpl_counted(idx, &MplArgument::single(x, idx.depth()), ctx)
}

pub fn mpl_single(idx: &Composition, x: &CertifiedReal, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    mpl_single_counted(idx, x, ctx).map(|v| v.value)
}

/// Classical polylogarithm Li_k(x).
pub fn li_counted(k: u32, x: &CertifiedReal, ctx: &PrecisionContext) -> Result<SeriesValue> {
    let idx = Composition::new(vec![k])?;
    if k == 1 && x.is_exactly(1) {
        return Err(Error::Divergence("Li_1(1) is the harmonic series".into()));
    }
    mpl_counted(&idx, &MplArgument(vec![x.clone()]), ctx)
}

pub fn li(k: u32, x: &CertifiedReal, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    li_counted(k, x, ctx).map(|v| v.value)
}

/// Multiple zeta value ζ(k1, …, kr) = Li_{k1,…,kr}(1).
pub fn mzv(idx: &Composition, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    if idx.parts()[0] < 2 {
        return Err(Error::Admissibility(format!("zeta{idx} needs k1 >= 2")));
    }
    mpl_single(idx, &ctx.one(), ctx)
}

/// Nielsen generalized polylogarithm S_{a,b}(z) = Li_{a+1,{1}^{b−1}}(z) on 0 ≤ z ≤ 1.
pub fn nielsen_counted(a: u32, b: u32, z: &CertifiedReal, ctx: &PrecisionContext) -> Result<SeriesValue> {
    if a == 0 || b == 0 {
        return Err(Error::Domain("Nielsen indices a, b must be positive".into()));
    }
    if z.certainly_negative() || (!z.is_exact_zero() && z.mantissa().is_negative()) {
        return Err(Error::Domain("Nielsen S_{a,b}(z) is supported for 0 <= z <= 1 only".into()));
    }
    if !z.is_exactly(1) && !z.certainly_lt(&ctx.one()) {
        return Err(Error::Domain("Nielsen S_{a,b}(z) is supported for 0 <= z <= 1 only".into()));
    }
    let idx = Composition::with_trailing_ones(a + 1, b as usize - 1)?;
    mpl_single_counted(&idx, z, ctx)
}

pub fn nielsen(a: u32, b: u32, z: &CertifiedReal, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    nielsen_counted(a, b, z, ctx).map(|v| v.value)
}
