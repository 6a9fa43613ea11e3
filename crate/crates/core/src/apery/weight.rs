use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Harmonic-number symbols a weight may contain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HarmonicFactor {
    One,
    /// H_n
    H,
    /// H_{n−1}
    HPrev,
    /// H_{2n}
    HDouble,
    /// H_{2n−1}
    HDoublePrev,
    /// H^{(2)}_{n−1}
    H2Prev,
    /// ζ_{n−1}(1,1)
    Z11Prev,
    /// 1/n
    InvN,
}

impl HarmonicFactor {
    pub const ALL: [HarmonicFactor; 8] = [
        HarmonicFactor::One,
        HarmonicFactor::H,
        HarmonicFactor::HPrev,
        HarmonicFactor::HDouble,
        HarmonicFactor::HDoublePrev,
        HarmonicFactor::H2Prev,
        HarmonicFactor::Z11Prev,
        HarmonicFactor::InvN,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            HarmonicFactor::One => "1",
            HarmonicFactor::H => "H(n)",
            HarmonicFactor::HPrev => "H(n-1)",
            HarmonicFactor::HDouble => "H(2n)",
            HarmonicFactor::HDoublePrev => "H(2n-1)",
            HarmonicFactor::H2Prev => "H2(n-1)",
            HarmonicFactor::Z11Prev => "Z11(n-1)",
            HarmonicFactor::InvN => "INV_N",
        }
    }

    /// Growth in powers of ln n: the harmonic numbers are O(ln n), ζ_{n−1}(1,1)
    /// is O(ln² n), the rest are bounded.
    pub fn log_degree(self) -> u32 {
        match self {
            HarmonicFactor::H | HarmonicFactor::HPrev | HarmonicFactor::HDouble | HarmonicFactor::HDoublePrev => 1,
            HarmonicFactor::Z11Prev => 2,
            _ => 0,
        }
    }

    fn parse(token: &str) -> Option<Self> {
        let t = token.to_ascii_lowercase();
        Some(match t.as_str() {
            "1" | "one" => HarmonicFactor::One,
            "h(n)" | "h_n" => HarmonicFactor::H,
            "h(n-1)" | "h_{n-1}" => HarmonicFactor::HPrev,
            "h(2n)" | "h_{2n}" => HarmonicFactor::HDouble,
            "h(2n-1)" | "h_{2n-1}" => HarmonicFactor::HDoublePrev,
            "h2(n-1)" => HarmonicFactor::H2Prev,
            "z11(n-1)" => HarmonicFactor::Z11Prev,
            "inv_n" | "1/n" => HarmonicFactor::InvN,
            _ => return None,
        })
    }
}

/// One monomial: a rational coefficient times a product of factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightTerm {
    pub coefficient: BigRational,
    pub factors: Vec<HarmonicFactor>,
}

impl WeightTerm {
    pub fn log_degree(&self) -> u32 {
        self.factors.iter().map(|f| f.log_degree()).sum()
    }
}

/// A weight w(n) as a linear combination of products of harmonic symbols,
/// e.g. `10*H(n) - 3*INV_N` or `3*H(n-1)^2 + 4*INV_N*H(n-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicWeight {
    terms: Vec<WeightTerm>,
}

impl HarmonicWeight {
    pub fn new(terms: Vec<WeightTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Structure("harmonic weight needs at least one term".into()));
        }
        let terms = terms
            .into_iter()
            .map(|mut t| {
                t.factors.retain(|f| *f != HarmonicFactor::One);
                t.factors.sort();
                t
            })
            .collect();
        Ok(HarmonicWeight { terms })
    }

    pub fn one() -> Self {
        HarmonicWeight::factor(HarmonicFactor::One)
    }

    pub fn factor(f: HarmonicFactor) -> Self {
        HarmonicWeight::new(vec![WeightTerm { coefficient: BigRational::one(), factors: vec![f] }])
            .expect("non-empty")
    }

    pub fn terms(&self) -> &[WeightTerm] {
        &self.terms
    }

    pub fn log_degree(&self) -> u32 {
        self.terms.iter().map(WeightTerm::log_degree).max().unwrap_or(0)
    }

    /// Every factor appearing anywhere in the weight.
    pub fn uses(&self, f: HarmonicFactor) -> bool {
        self.terms.iter().any(|t| t.factors.contains(&f))
    }

    /// The same weight with every coefficient multiplied by `q`.
    pub fn scaled(&self, q: &BigRational) -> Self {
        HarmonicWeight {
            terms: self
                .terms
                .iter()
                .map(|t| WeightTerm { coefficient: &t.coefficient * q, factors: t.factors.clone() })
                .collect(),
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else if let Some((w, f)) = s.split_once('.') {
        if !w.chars().chain(f.chars()).all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits: BigInt = format!("{w}{f}").parse().ok()?;
        Some(BigRational::new(digits, BigInt::from(10).pow(f.len() as u32)))
    } else {
        s.parse::<BigInt>().ok().map(BigRational::from_integer)
    }
}

fn parse_term(text: &str, negative: bool) -> Result<WeightTerm> {
    let mut coefficient = if negative { -BigRational::one() } else { BigRational::one() };
    let mut factors = Vec::new();
    for piece in text.split('*') {
        if piece.is_empty() {
            return Err(Error::Parse(format!("empty factor in weight term {text:?}")));
        }
        if let Some(f) = HarmonicFactor::parse(piece) {
            factors.push(f);
            continue;
        }
        if let Some(q) = parse_rational(piece) {
            coefficient *= q;
            continue;
        }
        if let Some((base, exp)) = piece.rsplit_once('^') {
            let f = HarmonicFactor::parse(base)
                .ok_or_else(|| Error::Parse(format!("unknown harmonic symbol {base:?}")))?;
            let e: usize = exp.parse().map_err(|_| Error::Parse(format!("bad exponent {exp:?}")))?;
            factors.extend(std::iter::repeat(f).take(e));
            continue;
        }
        return Err(Error::Parse(format!("unknown harmonic symbol {piece:?}")));
    }
    Ok(WeightTerm { coefficient, factors })
}

impl FromStr for HarmonicWeight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(Error::Parse("empty weight".into()));
        }
        let mut terms = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        let mut negative = false;
        let bytes = text.as_bytes();
        for (i, &c) in bytes.iter().enumerate() {
            match c {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' | b'-' if depth == 0 => {
                    if i > start {
                        terms.push(parse_term(&text[start..i], negative)?);
                    } else if i > 0 {
                        return Err(Error::Parse(format!("dangling operator in {s:?}")));
                    }
                    negative = c == b'-';
                    start = i + 1;
                }
                _ => {}
            }
            if depth < 0 {
                return Err(Error::Parse(format!("unbalanced parentheses in {s:?}")));
            }
        }
        if depth != 0 || start >= text.len() {
            return Err(Error::Parse(format!("malformed weight {s:?}")));
        }
        terms.push(parse_term(&text[start..], negative)?);
        HarmonicWeight::new(terms)
    }
}

impl fmt::Display for HarmonicWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coefficient.is_negative();
            let mag = t.coefficient.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || t.factors.is_empty() {
                parts.push(mag.to_string());
            }
            parts.extend(t.factors.iter().map(|x| x.symbol().to_string()));
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_combinations() {
        let w: HarmonicWeight = "10*H(n)-3*INV_N".parse().unwrap();
        assert_eq!(w.terms().len(), 2);
        assert_eq!(w.terms()[1].coefficient, BigRational::from_integer((-3).into()));
        assert_eq!(w.log_degree(), 1);

        let w: HarmonicWeight = "3*H(n-1)^2 + 4*INV_N*H(n-1)".parse().unwrap();
        assert_eq!(w.terms()[0].factors, vec![HarmonicFactor::HPrev, HarmonicFactor::HPrev]);
        assert_eq!(w.log_degree(), 2);

        let w: HarmonicWeight = "H2(n-1)".parse().unwrap();
        assert!(w.uses(HarmonicFactor::H2Prev));
        let w: HarmonicWeight = "1".parse().unwrap();
        assert!(w.terms()[0].factors.is_empty());
        let w: HarmonicWeight = "-H(2n) - 4*H(n)".parse().unwrap();
        assert_eq!(w.to_string(), "-H(2n) - 4*H(n)");
        let w: HarmonicWeight = "1/2*1/n".parse().unwrap();
        assert_eq!(w.terms()[0].coefficient, BigRational::new(1.into(), 2.into()));
        let w: HarmonicWeight = "2*Z11(n-1)".parse().unwrap();
        assert_eq!(w.log_degree(), 2);
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "H(m)", "3*", "+", "H(n-1", "H(n)^x", "2**H(n)"] {
            assert!(bad.parse::<HarmonicWeight>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn display_round_trip() {
        for s in ["10*H(n) - 3*INV_N", "3*H(n-1)*H(n-1) + 4*H(n-1)*INV_N", "1", "5/2*H2(n-1)"] {
            let w: HarmonicWeight = s.parse().unwrap();
            let again: HarmonicWeight = w.to_string().parse().unwrap();
            assert_eq!(w, again);
        }
    }
}
