use std::fmt;

use crate::error::{Error, Result};
use crate::mpl::{mpl_counted, Composition, MplArgument, SeriesValue};
use crate::precision::{CertifiedReal, Mag, PrecisionContext};

/// One node of an iterated integral over the path 0 → 1.
///
/// Nonzero nodes keep their reciprocal alongside the value: the series side
/// only ever needs 1/a, and carrying it avoids a round trip through division
/// when a word was built from polylogarithm arguments.
#[derive(Clone, Debug, PartialEq)]
pub enum Letter {
    Zero,
    Node { value: CertifiedReal, reciprocal: CertifiedReal },
}

impl Letter {
    pub fn node(value: CertifiedReal) -> Result<Self> {
        let reciprocal = value.recip()?;
        Ok(Letter::Node { value, reciprocal })
    }

    /// The node 1/x, stored exactly through x.
    pub fn inverse_of(x: CertifiedReal) -> Result<Self> {
        let value = x.recip()?;
        Ok(Letter::Node { value, reciprocal: x })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Letter::Zero)
    }
}

/// Iterated integral G(a1, …, an; 1), where G(a1, …, an; z) =
/// ∫_0^z dt/(t − a1) · G(a2, …, an; t), in MZIteratedIntegral letter order.
///
/// Convergent words have a1 ≠ 1 and an ≠ 0; nonzero letters must satisfy
/// |a| ≥ 1 so the series side converges.
#[derive(Clone, Debug, PartialEq)]
pub struct IteratedWord {
    letters: Vec<Letter>,
}

impl IteratedWord {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Structure("iterated word must be non-empty".into()));
        }
        if letters.last().is_some_and(Letter::is_zero) {
            return Err(Error::Structure("iterated word must not end in the letter 0".into()));
        }
        if let Letter::Node { value, .. } = &letters[0] {
            if value.is_exactly(1) {
                return Err(Error::Admissibility("iterated word starting with the letter 1 diverges".into()));
            }
        }
        for l in &letters {
            if let Letter::Node { reciprocal, .. } = l {
                if reciprocal.abs_lower() > Mag::from_u64(1) {
                    return Err(Error::Domain(
                        "nonzero letters must have modulus at least one".into(),
                    ));
                }
            }
        }
        Ok(IteratedWord { letters })
    }

    /// Builds a word from letter values, 0 meaning the `dt/t` kernel.
    pub fn from_values(values: Vec<CertifiedReal>) -> Result<Self> {
        let letters = values
            .into_iter()
            .map(|v| if v.is_exact_zero() { Ok(Letter::Zero) } else { Letter::node(v) })
            .collect::<Result<Vec<_>>>()?;
        IteratedWord::new(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl fmt::Display for IteratedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| match l {
                Letter::Zero => "0".to_string(),
                Letter::Node { value, .. } => format!("{:.12}", value.to_f64()),
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Word of the single-variable Li_{k1,…,kr}(x): 0^{k1−1}, x⁻¹, 0^{k2−1}, x⁻¹, ….
pub fn word_from_mpl(idx: &Composition, x: &CertifiedReal) -> Result<IteratedWord> {
    if x.abs_lower().is_zero() {
        return Err(Error::Domain("word_from_mpl needs x certainly nonzero".into()));
    }
    let node = Letter::inverse_of(x.clone())?;
    let mut letters = Vec::with_capacity(idx.weight() as usize);
    for &k in idx.parts() {
        letters.extend(std::iter::repeat(Letter::Zero).take(k as usize - 1));
        letters.push(node.clone());
    }
    IteratedWord::new(letters)
}

/// Inverse of [`word_from_mpl`] extended to arbitrary nonzero letters:
/// the block structure gives the composition, and x1 = 1/a1, xj = a_{j−1}/aj.
/// Identical consecutive letters give exactly 1.
pub fn mpl_from_word(word: &IteratedWord) -> Result<(Composition, MplArgument)> {
    let mut parts = Vec::new();
    let mut args: Vec<CertifiedReal> = Vec::new();
    let mut zeros = 0u32;
    let mut prev: Option<&Letter> = None;
    for l in word.letters() {
        match l {
            Letter::Zero => zeros += 1,
            Letter::Node { reciprocal, .. } => {
                parts.push(zeros + 1);
                zeros = 0;
                let x = match prev {
                    None => reciprocal.clone(),
                    Some(p) if p == l => CertifiedReal::one(reciprocal.bits()),
                    Some(Letter::Node { reciprocal: prev_rec, .. }) => reciprocal.div(prev_rec)?,
                    Some(Letter::Zero) => unreachable!("prev tracks nonzero letters only"),
                };
                args.push(x);
                prev = Some(l);
            }
        }
    }
    Ok((Composition::new(parts)?, MplArgument(args)))
}

pub fn eval_word_counted(word: &IteratedWord, ctx: &PrecisionContext) -> Result<SeriesValue> {
    let (idx, arg) = mpl_from_word(word)?;
    mpl_counted(&idx, &arg, ctx)
}

/// Value of the word with the sign fixed so that G-words of Li_{2,1}(φ²) and
/// Li_{3,1}(φ²) evaluate to those polylogarithms themselves.
pub fn eval_word(word: &IteratedWord, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    eval_word_counted(word, ctx).map(|v| v.value)
}

/// H_{−1,0,0,1}(−y) = ∫_0^{−y} Li3(x)/(1+x) dx = −Li_{1,3}(y, −1) for 0 < y < 1.
///
/// Expanding Li3(−t)/(1−t) = Σ_n t^n Σ_{m≤n} (−1)^m/m³ and integrating from
/// 0 to y gives Σ_{n>m} y^n (−1)^m /(n m³) after the substitution x = −t.
pub fn h_m1001_counted(y: &CertifiedReal, ctx: &PrecisionContext) -> Result<SeriesValue> {
    if !y.certainly_positive() || !y.certainly_lt(&ctx.one()) {
        return Err(Error::Domain("H_{-1,0,0,1}(-y) needs 0 < y < 1".into()));
    }
    let idx = Composition::new(vec![1, 3])?;
    let mut v = mpl_counted(&idx, &MplArgument(vec![y.clone(), ctx.int(-1)]), ctx)?;
    v.value = -v.value;
    Ok(v)
}

pub fn h_m1001(y: &CertifiedReal, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    h_m1001_counted(y, ctx).map(|v| v.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpl::{li, mpl_single};
    use crate::precision::{golden, ln, make_context, pi, zeta_int};

    fn comp(p: &[u32]) -> Composition {
        Composition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn golden_anchor_words() {
        let ctx = make_context(40).unwrap();
        let g = golden(&ctx);
        let w = word_from_mpl(&comp(&[2, 1]), &g.phi_squared).unwrap();
        assert_eq!(w.len(), 3);
        assert!(w.letters()[0].is_zero());
        assert_eq!(w.letters()[1], w.letters()[2]);
        if let Letter::Node { value, .. } = &w.letters()[1] {
            // φ⁻² = φ⁻¹ + 1 ≈ 2.618
            assert!((value.to_f64() - 2.618033988749895).abs() < 1e-14);
        }
        let v = eval_word(&w, &ctx).unwrap();
        let rhs = &(&zeta_int(3, &ctx).unwrap() + &(&pi(&ctx).square().div_u64(10) * &g.ln_phi))
            - &li(3, &g.phi, &ctx).unwrap();
        assert!((&v - &rhs).abs_upper().log2() < -125.0);

        let w31 = word_from_mpl(&comp(&[3, 1]), &g.phi_squared).unwrap();
        assert_eq!(w31.len(), 4);
        let v31 = eval_word(&w31, &ctx).unwrap();
        let direct = mpl_single(&comp(&[3, 1]), &g.phi_squared, &ctx).unwrap();
        assert!((&v31 - &direct).abs_upper().log2() < -125.0);
    }

    #[test]
    fn words_from_values_match() {
        let ctx = make_context(30).unwrap();
        let g = golden(&ctx);
        let inv = g.phi_squared.recip().unwrap();
        let w = IteratedWord::from_values(vec![ctx.zero(), inv.clone(), inv]).unwrap();
        let (idx, arg) = mpl_from_word(&w).unwrap();
        assert_eq!(idx, comp(&[2, 1]));
        assert!(arg.0[1].is_exactly(1));
        assert!((&arg.0[0] - &g.phi_squared).abs_upper().log2() < -100.0);
    }

    #[test]
    fn single_letter_is_log() {
        let ctx = make_context(30).unwrap();
        let w = IteratedWord::from_values(vec![ctx.int(2)]).unwrap();
        let v = eval_word(&w, &ctx).unwrap();
        let l2 = ln(&ctx.int(2), &ctx).unwrap();
        assert!((&v - &l2).abs_upper().log2() < -100.0);
        let (idx, _) = mpl_from_word(&word_from_mpl(&comp(&[1]), &g_phi(&ctx)).unwrap()).unwrap();
        assert_eq!(idx, comp(&[1]));
    }

    fn g_phi(ctx: &PrecisionContext) -> CertifiedReal {
        golden(ctx).phi
    }

    #[test]
    fn round_trip_is_exact() {
        let ctx = make_context(20).unwrap();
        for parts in [&[1u32][..], &[2, 1], &[3, 1, 2], &[1, 1, 1], &[4]] {
            for x in [ctx.rational(3, 10), g_phi(&ctx), ctx.rational(-1, 2), ctx.one()] {
                if parts[0] == 1 && x.is_exactly(1) {
                    assert!(word_from_mpl(&comp(parts), &x).is_err());
                    continue;
                }
                let w = word_from_mpl(&comp(parts), &x).unwrap();
                let (idx, arg) = mpl_from_word(&w).unwrap();
                assert_eq!(idx, comp(parts));
                assert_eq!(arg.0[0], x);
                assert!(arg.0[1..].iter().all(|a| a.is_exactly(1)));
            }
        }
    }

    #[test]
    fn invalid_words() {
        let ctx = make_context(20).unwrap();
        assert!(IteratedWord::new(vec![]).is_err());
        assert!(IteratedWord::from_values(vec![ctx.int(2), ctx.zero()]).is_err());
        assert!(IteratedWord::from_values(vec![ctx.one()]).is_err());
        assert!(IteratedWord::from_values(vec![ctx.rational(1, 2)]).is_err());
        assert!(word_from_mpl(&comp(&[2]), &ctx.zero()).is_err());
    }

    #[test]
    fn h_domain() {
        let ctx = make_context(20).unwrap();
        assert!(h_m1001(&ctx.zero(), &ctx).is_err());
        assert!(h_m1001(&ctx.one(), &ctx).is_err());
        // tiny y: H ≈ ∫_0^{-y} x dx = y²/2
        let y = ctx.rational(1, 1_000_000);
        let h = h_m1001(&y, &ctx).unwrap();
        assert!((h.to_f64() - 5e-13).abs() < 1e-17);
    }

    #[test]
    fn h_reference_values() {
        // mpmath quadrature of ∫_0^{-y} Li3(x)/(1+x) dx at 50 digits
        let ctx = make_context(40).unwrap();
        let cases = [
            (ctx.rational(1, 5), "0.0227671622953285988318940750735870704151863"),
            (ctx.rational(1, 2), "0.1854694951759600224524337728005768279472268"),
            (golden(&ctx).phi_squared, "0.0962123873093670949408763271319199621194610"),
        ];
        for (y, want) in cases {
            let h = h_m1001(&y, &ctx).unwrap();
            assert!(h.certainly_positive());
            let s = h.to_decimal_string(43);
            assert_eq!(&s[..40], &want[..40]);
        }
    }
}
