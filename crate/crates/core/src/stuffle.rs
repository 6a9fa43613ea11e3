//! Quasi-shuffle (stuffle) products of nested harmonic partial sums
//!
//! ```text
//! ζ_M(c1, …, cr) = Σ_{M ≥ m1 > m2 > … > mr > 0} 1/(m1^c1 ⋯ mr^cr)
//! ```
//!
//! where every symbol in this module is taken at the bound M = n − 1. The
//! product of two such sums is an integer combination of others, given by
//! the recursion (a1,a')⋆(b1,b') = (a1, a'⋆b) + (b1, a⋆b') + (a1+b1, a'⋆b').

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::mpl::Composition;

/// Largest depth accepted by [`quasi_shuffle`].
pub const MAX_STUFFLE_DEPTH: usize = 4;

/// A nested partial sum ζ_{n−1}(c); the empty composition is the constant 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialSumSymbol(pub Vec<u32>);

impl PartialSumSymbol {
    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for PartialSumSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_slice() {
            [] => write!(f, "1"),
            [1] => write!(f, "H_{{n-1}}"),
            [k] => write!(f, "H^({k})_{{n-1}}"),
            parts => {
                let p: Vec<String> = parts.iter().map(|k| k.to_string()).collect();
                write!(f, "ζ_{{n-1}}({})", p.join(","))
            }
        }
    }
}

/// Integer combination of partial-sum symbols with nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalSum {
    terms: BTreeMap<PartialSumSymbol, i64>,
}

impl FormalSum {
    pub fn zero() -> Self {
        FormalSum::default()
    }

    pub fn symbol(c: &[u32]) -> Self {
        let mut s = FormalSum::zero();
        s.add_term(c.to_vec(), 1);
        s
    }

    pub fn add_term(&mut self, c: Vec<u32>, coefficient: i64) {
        let key = PartialSumSymbol(c);
        let v = self.terms.entry(key.clone()).or_insert(0);
        *v += coefficient;
        if *v == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn add(&mut self, other: &FormalSum, scale: i64) {
        for (k, v) in &other.terms {
            self.add_term(k.0.clone(), v * scale);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PartialSumSymbol, i64)> {
        self.terms.iter().map(|(k, v)| (k, *v))
    }

    pub fn coefficient(&self, c: &[u32]) -> i64 {
        self.terms.get(&PartialSumSymbol(c.to_vec())).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Bilinear extension of the product.
    pub fn stuffle(&self, other: &FormalSum) -> FormalSum {
        let mut memo = HashMap::new();
        let mut out = FormalSum::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let p = shuffle_rec(&a.0, &b.0, &mut memo);
                out.add(&p, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, v)) in self.terms.iter().enumerate() {
            match (i, *v < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if v.abs() != 1 {
                write!(f, "{}·", v.abs())?;
            }
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

fn shuffle_rec(a: &[u32], b: &[u32], memo: &mut HashMap<(Vec<u32>, Vec<u32>), FormalSum>) -> FormalSum {
    if a.is_empty() {
        return FormalSum::symbol(b);
    }
    if b.is_empty() {
        return FormalSum::symbol(a);
    }
    let key = (a.to_vec(), b.to_vec());
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let mut out = FormalSum::zero();
    let prepend = |first: u32, rest: &FormalSum, out: &mut FormalSum| {
        for (k, v) in rest.terms() {
            let mut c = Vec::with_capacity(k.depth() + 1);
            c.push(first);
            c.extend_from_slice(&k.0);
            out.add_term(c, v);
        }
    };
    let left = shuffle_rec(&a[1..], b, memo);
    prepend(a[0], &left, &mut out);
    let right = shuffle_rec(a, &b[1..], memo);
    prepend(b[0], &right, &mut out);
    let both = shuffle_rec(&a[1..], &b[1..], memo);
    prepend(a[0] + b[0], &both, &mut out);
    memo.insert(key, out.clone());
    out
}

/// Stuffle product of two (possibly empty) compositions.
pub fn quasi_shuffle(a: &[u32], b: &[u32]) -> Result<FormalSum> {
    if a.len() > MAX_STUFFLE_DEPTH || b.len() > MAX_STUFFLE_DEPTH {
        return Err(Error::Capacity(format!(
            "stuffle products are limited to depth {MAX_STUFFLE_DEPTH}"
        )));
    }
    if a.iter().chain(b).any(|&k| k == 0) {
        return Err(Error::Structure("composition parts must be positive".into()));
    }
    Ok(shuffle_rec(a, b, &mut HashMap::new()))
}

pub fn quasi_shuffle_compositions(a: &Composition, b: &Composition) -> Result<FormalSum> {
    quasi_shuffle(a.parts(), b.parts())
}

/// Exact values ζ_M(c) for every suffix c of the given compositions, advanced
/// one bound at a time by ζ_M(c) = ζ_{M−1}(c) + ζ_{M−1}(c')/M^{c1}.
struct ExactPartialSums {
    keys: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    values: Vec<BigRational>,
    bound: u64,
}

impl ExactPartialSums {
    fn new<'a>(compositions: impl IntoIterator<Item = &'a [u32]>) -> Self {
        let mut keys: Vec<Vec<u32>> = Vec::new();
        let mut index = HashMap::new();
        for c in compositions {
            for start in 0..=c.len() {
                let suffix = c[start..].to_vec();
                if !index.contains_key(&suffix) {
                    index.insert(suffix.clone(), keys.len());
                    keys.push(suffix);
                }
            }
        }
        // shorter suffixes first, so an update reads only already-old values
        let values = keys
            .iter()
            .map(|k| if k.is_empty() { BigRational::one() } else { BigRational::zero() })
            .collect();
        ExactPartialSums { keys, index, values, bound: 0 }
    }

    fn advance(&mut self) {
        self.bound += 1;
        let m = BigInt::from(self.bound);
        let old = self.values.clone();
        for (i, k) in self.keys.iter().enumerate() {
            if k.is_empty() {
                continue;
            }
            let tail = &old[self.index[&k[1..]]];
            if !tail.is_zero() {
                self.values[i] = &old[i] + tail / BigRational::from_integer(m.pow(k[0]));
            }
        }
    }

    fn get(&self, c: &[u32]) -> &BigRational {
        &self.values[self.index[c]]
    }
}

/// Checks ζ_{n−1}(a)·ζ_{n−1}(b) = Σ coefficient·ζ_{n−1}(c) exactly for every n ≤ N.
pub fn verify_stuffle_numeric(a: &[u32], b: &[u32], n: u64) -> bool {
    let product = shuffle_rec(a, b, &mut HashMap::new());
    let symbols: Vec<Vec<u32>> = product.terms().map(|(k, _)| k.0.clone()).collect();
    let mut sums = ExactPartialSums::new(
        [a, b].into_iter().chain(symbols.iter().map(|v| v.as_slice())),
    );
    // bound M = n − 1 runs over 0..N−1
    for m in 0..n {
        if m > 0 {
            sums.advance();
        }
        let lhs = sums.get(a) * sums.get(b);
        let rhs = product.terms().fold(BigRational::zero(), |acc, (k, v)| {
            acc + sums.get(&k.0) * BigRational::from_integer(BigInt::from(v))
        });
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// All compositions of weight exactly `w` (the empty one for w = 0).
pub fn compositions_of_weight(w: u32) -> Vec<Vec<u32>> {
    if w == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=w {
        for mut rest in compositions_of_weight(w - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}
