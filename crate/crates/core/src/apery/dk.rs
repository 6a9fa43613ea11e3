use num_rational::BigRational;

use super::sum::y_of_u;
use crate::error::Result;
use crate::iterint::h_m1001_counted;
use crate::mpl::{li_counted, mpl_single_counted, Composition, SeriesValue};
use crate::precision::{ln, zeta_even, zeta_int, CertifiedReal, PrecisionContext};

/// Which closed form in the variable y = y(u) to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DkKind {
    /// Σ u^n H_{n−1} / (n³ C(2n,n))
    H,
    /// Σ u^n H_{2n−1} / (n³ C(2n,n))
    H2,
    /// Σ u^n (H_{n−1} − H_{2n−1}) / (n³ C(2n,n))
    Diff,
}

impl std::str::FromStr for DkKind {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "H" => Ok(DkKind::H),
            "H2" => Ok(DkKind::H2),
            "DIFF" => Ok(DkKind::Diff),
            other => Err(crate::Error::Parse(format!("unknown DK kind {other:?}"))),
        }
    }
}

/// Values shared by the three right-hand sides.
struct Pieces<'a> {
    ctx: &'a PrecisionContext,
    y: CertifiedReal,
    terms: u64,
}

impl Pieces<'_> {
    fn take(&mut self, v: Result<SeriesValue>) -> Result<CertifiedReal> {
        let v = v?;
        self.terms += v.terms;
        Ok(v.value)
    }

    fn li(&mut self, k: u32, x: &CertifiedReal) -> Result<CertifiedReal> {
        let v = li_counted(k, x, self.ctx);
        self.take(v)
    }

    fn li_k1(&mut self, k: u32, x: &CertifiedReal) -> Result<CertifiedReal> {
        let idx = Composition::new(vec![k, 1])?;
        let v = mpl_single_counted(&idx, x, self.ctx);
        self.take(v)
    }
}

/// Σ (num/den)·value.
fn combine(ctx: &PrecisionContext, parts: &[(i64, i64, CertifiedReal)]) -> CertifiedReal {
    parts.iter().fold(ctx.zero(), |acc, (n, d, v)| {
        let q = BigRational::new((*n).into(), (*d).into());
        &acc + &v.mul_rational(&q)
    })
}

pub fn dk_rhs_counted(kind: DkKind, u: &CertifiedReal, ctx: &PrecisionContext) -> Result<SeriesValue> {
    let y = y_of_u(u, ctx)?;
    let mut p = Pieces { ctx, y: y.clone(), terms: 0 };
    let my = -&y;
    let ly = ln(&y, ctx)?;
    let l1 = ln(&(&ctx.one() - &y), ctx)?;
    let z2 = zeta_even(1, ctx)?;
    let z3 = zeta_int(3, ctx)?;
    let z4 = zeta_even(2, ctx)?;
    let ly2 = ly.square();
    let ly3 = &ly2 * &ly;
    let ly4 = ly2.square();

    let li2 = p.li(2, &y)?;
    let li3 = p.li(3, &y)?;
    let li4 = p.li(4, &y)?;
    let l21 = p.li_k1(2, &y)?;
    let l31 = p.li_k1(3, &y)?;

    let value = match kind {
        DkKind::Diff => combine(
            ctx,
            &[
                (4, 1, l31),
                (-4, 1, li4),
                (1, 1, li2.square()),
                (-4, 1, &l21 * &ly),
                (2, 1, &li3 * &ly),
                (-1, 2, &li2 * &ly2),
                (4, 1, &li3 * &l1),
                (-2, 1, &(&li2 * &ly) * &l1),
                (-1, 6, &ly3 * &l1),
                (1, 48, ly4),
                (-2, 1, &z2 * &li2),
                (1, 2, &z2 * &ly2),
                (-2, 1, &(&z2 * &ly) * &l1),
                (-4, 1, &z3 * &l1),
                (2, 1, &z3 * &ly),
                (11, 2, z4),
            ],
        ),
        DkKind::H | DkKind::H2 => {
            let yy = p.y.square();
            let h = {
                let v = h_m1001_counted(&p.y, ctx);
                p.take(v)?
            };
            let l31_sq = p.li_k1(3, &yy)?;
            let l31_m = p.li_k1(3, &my)?;
            let l21_m = p.li_k1(2, &my)?;
            let l21_sq = p.li_k1(2, &yy)?;
            let li4_m = p.li(4, &my)?;
            let li3_m = p.li(3, &my)?;
            let li2_m = p.li(2, &my)?;
            let common = [
                (4, 1, h),
                (1, 1, l31_sq),
                (-4, 1, l31_m),
                (-6, 1, li4_m),
                (4, 1, &l21_m * &ly),
                (-2, 1, &l21_sq * &ly),
                (4, 1, &li3_m * &l1),
                (2, 1, &li3_m * &ly),
                (-4, 1, &(&li2_m * &ly) * &l1),
            ];
            let specific: Vec<(i64, i64, CertifiedReal)> = if kind == DkKind::H {
                vec![
                    (-4, 1, l31),
                    (-2, 1, li4),
                    (4, 1, &l21 * &ly),
                    (2, 1, &li3 * &ly),
                    (-1, 1, &li2 * &ly2),
                    (-1, 3, &ly3 * &l1),
                    (1, 24, ly4),
                    (2, 1, &z2 * &li2),
                    (-1, 2, &z2 * &ly2),
                    (2, 1, &(&z2 * &ly) * &l1),
                    (6, 1, &z3 * &l1),
                    (-3, 1, &z3 * &ly),
                    (-4, 1, z4),
                ]
            } else {
                vec![
                    (-8, 1, l31),
                    (2, 1, li4),
                    (-1, 1, li2.square()),
                    (8, 1, &l21 * &ly),
                    (1, 48, ly4),
                    (-4, 1, &li3 * &l1),
                    (2, 1, &(&li2 * &ly) * &l1),
                    (-1, 2, &li2 * &ly2),
                    (-1, 6, &ly3 * &l1),
                    (4, 1, &(&z2 * &ly) * &l1),
                    (-1, 1, &z2 * &ly2),
                    (10, 1, &z3 * &l1),
                    (-5, 1, &z3 * &ly),
                    (4, 1, &z2 * &li2),
                    (-19, 2, z4),
                ]
            };
            &combine(ctx, &common) + &combine(ctx, &specific)
        }
    };
    Ok(SeriesValue { value, terms: p.terms })
}

/// The closed form in y(u) of the chosen central-binomial sum, for u < 0.
pub fn dk_rhs(kind: DkKind, u: &CertifiedReal, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    dk_rhs_counted(kind, u, ctx).map(|v| v.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apery::{apery_sum, AperySumSpec};
    use crate::precision::make_context;

    fn lhs(u: &CertifiedReal, w: &str, ctx: &PrecisionContext) -> CertifiedReal {
        apery_sum(&AperySumSpec::new(u.clone(), 3, w.parse().unwrap()), ctx).unwrap()
    }

    #[test]
    fn three_encodings_are_consistent() {
        let ctx = make_context(30).unwrap();
        for u in [ctx.rational(-1, 2), ctx.int(-2)] {
            let h = dk_rhs(DkKind::H, &u, &ctx).unwrap();
            let h2 = dk_rhs(DkKind::H2, &u, &ctx).unwrap();
            let d = dk_rhs(DkKind::Diff, &u, &ctx).unwrap();
            assert!((&(&h - &h2) - &d).abs_upper().to_f64() < 1e-28);
        }
    }

    #[test]
    fn golden_point_matches_direct_sum() {
        let ctx = make_context(40).unwrap();
        let u = ctx.int(-1);
        let rhs = dk_rhs(DkKind::H, &u, &ctx).unwrap();
        assert!((&rhs - &lhs(&u, "H(n-1)", &ctx)).abs_upper().to_f64() < 1e-38);
        let rhs2 = dk_rhs(DkKind::H2, &u, &ctx).unwrap();
        assert!((&rhs2 - &lhs(&u, "H(2n-1)", &ctx)).abs_upper().to_f64() < 1e-38);
    }

    #[test]
    fn whole_grid() {
        let ctx = make_context(25).unwrap();
        for u in [ctx.rational(-1, 2), ctx.int(-1), ctx.int(-2), ctx.int(-3)] {
            for (kind, w) in [(DkKind::H, "H(n-1)"), (DkKind::H2, "H(2n-1)"), (DkKind::Diff, "H(n-1)-H(2n-1)")] {
                let d = (&dk_rhs(kind, &u, &ctx).unwrap() - &lhs(&u, w, &ctx)).abs_upper();
                assert!(d.to_f64() < 1e-20, "{kind:?} at u={}: {d}", u.to_f64());
            }
        }
    }

    #[test]
    fn positive_u_is_rejected() {
        let ctx = make_context(20).unwrap();
        assert!(dk_rhs(DkKind::H, &ctx.one(), &ctx).is_err());
        assert!("diff".parse::<DkKind>().is_ok());
        assert!("x".parse::<DkKind>().is_err());
    }
}
