use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::apery::{DkKind, HarmonicWeight};
use crate::error::{Error, Result};
use crate::mpl::Composition;

/// Named constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Named {
    Pi,
    /// φ = (√5 − 1)/2
    Gf,
    /// ln φ
    LnGf,
}

impl Named {
    pub fn token(self) -> &'static str {
        match self {
            Named::Pi => "pi",
            Named::Gf => "gf",
            Named::LnGf => "ln_gf",
        }
    }
}

/// Evaluator primitives. Integer-valued arguments (Nielsen indices, zeta
/// arguments) are ordinary subexpressions that must evaluate to exact integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Func {
    Ln,
    Sqrt,
    /// Li_k(x)
    Li(u32),
    /// Li_{k1,…,kr}(x) single-variable
    MplSingle(Composition),
    /// Li_{k1,…,kr}(x1, …, xr)
    Mpl(Composition),
    Mzv(Composition),
    /// S_{a,b}(z) through its multiple-polylogarithm series; args (a, b, z)
    Nielsen,
    /// S_{a,b}(z) through quadrature of its defining integral; args (a, b, z)
    NielsenIntegral,
    /// Iterated-integral word with the given letters (0 is the dt/t kernel)
    Word,
    /// H_{−1,0,0,1}(−y)
    HM1001,
    /// Σ u^n w(n) / (n^s C(2n,n)); arg u
    AperySum { s: u32, weight: HarmonicWeight },
    /// Closed form in y(u) of a Davydychev–Kalmykov sum; arg u
    DkRhs(DkKind),
    /// ζ(s) for integer s ≥ 2 by summation
    ZetaInt,
    /// ζ(2k) from Bernoulli numbers; arg k
    ZetaEven,
}

impl Func {
    pub fn name(&self) -> String {
        match self {
            Func::Ln => "ln".into(),
            Func::Sqrt => "sqrt".into(),
            Func::Li(k) => format!("li{k}"),
            Func::MplSingle(c) => format!("li{c}"),
            Func::Mpl(c) => format!("mpl{c}"),
            Func::Mzv(c) => format!("zeta{c}"),
            Func::Nielsen => "nielsen".into(),
            Func::NielsenIntegral => "nielsen_integral".into(),
            Func::Word => "word".into(),
            Func::HM1001 => "h1001".into(),
            Func::AperySum { s, weight } => format!("apery[s={s}; {weight}]"),
            Func::DkRhs(k) => format!("dk_{}", format!("{k:?}").to_lowercase()),
            Func::ZetaInt => "zeta".into(),
            Func::ZetaEven => "zeta_even".into(),
        }
    }

    /// Required argument count, `None` for variadic.
    pub fn arity(&self) -> Option<usize> {
        match self {
            Func::Mzv(_) => Some(0),
            Func::Mpl(c) => Some(c.depth()),
            Func::Nielsen | Func::NielsenIntegral => Some(3),
            Func::Word => None,
            _ => Some(1),
        }
    }

    /// Coarse grouping used for the structural independence check.
    pub fn family(&self) -> FuncFamily {
        match self {
            Func::AperySum { .. } => FuncFamily::AperySeries,
            Func::DkRhs(_) => FuncFamily::Mixed,
            Func::Ln | Func::Sqrt | Func::ZetaInt | Func::ZetaEven => FuncFamily::Elementary,
            _ => FuncFamily::Polylog,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FuncFamily {
    Elementary,
    Polylog,
    AperySeries,
    /// Evaluates an Apéry sum by way of polylogarithms.
    Mixed,
}

/// Expression tree over exact rationals, named constants, grid parameters and
/// evaluator primitives.
#[derive(Clone, Debug, PartialEq)]
pub enum ConstExpr {
    Rational(BigRational),
    Const(Named),
    Param(String),
    Sum(Vec<ConstExpr>),
    Product(Vec<ConstExpr>),
    Neg(Box<ConstExpr>),
    Pow(Box<ConstExpr>, i32),
    Call(Func, Vec<ConstExpr>),
}

pub fn q(num: i64, den: i64) -> ConstExpr {
    ConstExpr::Rational(BigRational::new(num.into(), den.into()))
}

pub fn int(n: i64) -> ConstExpr {
    q(n, 1)
}

pub fn pi() -> ConstExpr {
    ConstExpr::Const(Named::Pi)
}

pub fn gf() -> ConstExpr {
    ConstExpr::Const(Named::Gf)
}

pub fn ln_gf() -> ConstExpr {
    ConstExpr::Const(Named::LnGf)
}

pub fn param(name: &str) -> ConstExpr {
    ConstExpr::Param(name.into())
}

pub fn call(f: Func, args: Vec<ConstExpr>) -> ConstExpr {
    ConstExpr::Call(f, args)
}

pub fn ln(x: ConstExpr) -> ConstExpr {
    call(Func::Ln, vec![x])
}

pub fn sqrt(x: ConstExpr) -> ConstExpr {
    call(Func::Sqrt, vec![x])
}

pub fn li(k: u32, x: ConstExpr) -> ConstExpr {
    call(Func::Li(k), vec![x])
}

fn comp(parts: &[u32]) -> Composition {
    Composition::new(parts.to_vec()).expect("builtin composition")
}

pub fn li_multi(parts: &[u32], x: ConstExpr) -> ConstExpr {
    call(Func::MplSingle(comp(parts)), vec![x])
}

pub fn mpl(parts: &[u32], xs: Vec<ConstExpr>) -> ConstExpr {
    call(Func::Mpl(comp(parts)), xs)
}

pub fn mzv(parts: &[u32]) -> ConstExpr {
    call(Func::Mzv(comp(parts)), vec![])
}

pub fn zeta(s: i64) -> ConstExpr {
    call(Func::ZetaInt, vec![int(s)])
}

pub fn apery(u: ConstExpr, s: u32, weight: &str) -> ConstExpr {
    let weight = weight.parse().expect("builtin weight");
    call(Func::AperySum { s, weight }, vec![u])
}

impl ConstExpr {
    pub fn pow(self, k: i32) -> ConstExpr {
        ConstExpr::Pow(Box::new(self), k)
    }

    pub fn recip(self) -> ConstExpr {
        self.pow(-1)
    }

    /// Nesting depth; leaves have depth 1.
    pub fn depth(&self) -> usize {
        1 + match self {
            ConstExpr::Rational(_) | ConstExpr::Const(_) | ConstExpr::Param(_) => 0,
            ConstExpr::Sum(v) | ConstExpr::Product(v) | ConstExpr::Call(_, v) => {
                v.iter().map(ConstExpr::depth).max().unwrap_or(0)
            }
            ConstExpr::Neg(e) | ConstExpr::Pow(e, _) => e.depth(),
        }
    }

    pub fn children(&self) -> &[ConstExpr] {
        match self {
            ConstExpr::Sum(v) | ConstExpr::Product(v) | ConstExpr::Call(_, v) => v,
            ConstExpr::Neg(e) | ConstExpr::Pow(e, _) => std::slice::from_ref(e.as_ref()),
            _ => &[],
        }
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a ConstExpr)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    pub fn functions(&self) -> Vec<&Func> {
        let mut out = Vec::new();
        self.visit(&mut |e| {
            if let ConstExpr::Call(func, _) = e {
                out.push(func);
            }
        });
        out
    }

    pub fn families(&self) -> BTreeSet<FuncFamily> {
        self.functions().into_iter().map(Func::family).collect()
    }

    pub fn params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| {
            if let ConstExpr::Param(p) = e {
                out.insert(p.clone());
            }
        });
        out
    }

    pub fn rational_literal_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |e| {
            if matches!(e, ConstExpr::Rational(_)) {
                n += 1;
            }
        });
        n
    }

    /// Copy with the `index`-th rational literal (pre-order) shifted by `delta`.
    pub fn perturb_literal(&self, index: usize, delta: &BigRational) -> ConstExpr {
        fn go(e: &ConstExpr, index: usize, seen: &mut usize, delta: &BigRational) -> ConstExpr {
            let rebuild = |v: &[ConstExpr], seen: &mut usize| -> Vec<ConstExpr> {
                v.iter().map(|c| go(c, index, seen, delta)).collect()
            };
            match e {
                ConstExpr::Rational(r) => {
                    let here = *seen;
                    *seen += 1;
                    if here == index {
                        ConstExpr::Rational(r + delta)
                    } else {
                        e.clone()
                    }
                }
                ConstExpr::Sum(v) => ConstExpr::Sum(rebuild(v, seen)),
                ConstExpr::Product(v) => ConstExpr::Product(rebuild(v, seen)),
                ConstExpr::Call(f, v) => ConstExpr::Call(f.clone(), rebuild(v, seen)),
                ConstExpr::Neg(x) => ConstExpr::Neg(Box::new(go(x, index, seen, delta))),
                ConstExpr::Pow(x, k) => ConstExpr::Pow(Box::new(go(x, index, seen, delta)), *k),
                ConstExpr::Const(_) | ConstExpr::Param(_) => e.clone(),
            }
        }
        go(self, index, &mut 0, delta)
    }

    /// Checks arities and that every node has something to evaluate.
    pub fn validate(&self) -> Result<()> {
        match self {
            ConstExpr::Sum(v) | ConstExpr::Product(v) if v.is_empty() => {
                Err(Error::Structure("empty sum or product".into()))
            }
            ConstExpr::Call(f, args) => {
                match f.arity() {
                    Some(n) if n != args.len() => {
                        return Err(Error::Structure(format!(
                            "{} takes {n} argument(s), got {}",
                            f.name(),
                            args.len()
                        )))
                    }
                    None if args.is_empty() => {
                        return Err(Error::Structure(format!("{} needs arguments", f.name())))
                    }
                    _ => {}
                }
                args.iter().try_for_each(ConstExpr::validate)
            }
            ConstExpr::Param(p) if p.is_empty() => Err(Error::Structure("unnamed parameter".into())),
            _ => self.children().iter().try_for_each(ConstExpr::validate),
        }
    }

    /// Replaces parameters by the given expressions.
    pub fn substitute(&self, bindings: &[(String, ConstExpr)]) -> ConstExpr {
        match self {
            ConstExpr::Param(p) => bindings
                .iter()
                .find(|(n, _)| n == p)
                .map(|(_, v)| v.clone())
                .unwrap_or_else(|| self.clone()),
            ConstExpr::Sum(v) => ConstExpr::Sum(v.iter().map(|c| c.substitute(bindings)).collect()),
            ConstExpr::Product(v) => ConstExpr::Product(v.iter().map(|c| c.substitute(bindings)).collect()),
            ConstExpr::Call(f, v) => ConstExpr::Call(f.clone(), v.iter().map(|c| c.substitute(bindings)).collect()),
            ConstExpr::Neg(x) => ConstExpr::Neg(Box::new(x.substitute(bindings))),
            ConstExpr::Pow(x, k) => ConstExpr::Pow(Box::new(x.substitute(bindings)), *k),
            _ => self.clone(),
        }
    }
}

impl Add for ConstExpr {
    type Output = ConstExpr;
    fn add(self, rhs: ConstExpr) -> ConstExpr {
        let mut v = match self {
            ConstExpr::Sum(v) => v,
            other => vec![other],
        };
        match rhs {
            ConstExpr::Sum(w) => v.extend(w),
            other => v.push(other),
        }
        ConstExpr::Sum(v)
    }
}

impl Sub for ConstExpr {
    type Output = ConstExpr;
    fn sub(self, rhs: ConstExpr) -> ConstExpr {
        self + (-rhs)
    }
}

impl Neg for ConstExpr {
    type Output = ConstExpr;
    fn neg(self) -> ConstExpr {
        ConstExpr::Neg(Box::new(self))
    }
}

impl Mul for ConstExpr {
    type Output = ConstExpr;
    fn mul(self, rhs: ConstExpr) -> ConstExpr {
        let mut v = match self {
            ConstExpr::Product(v) => v,
            other => vec![other],
        };
        match rhs {
            ConstExpr::Product(w) => v.extend(w),
            other => v.push(other),
        }
        ConstExpr::Product(v)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for ConstExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atomic = |e: &ConstExpr| {
            matches!(e, ConstExpr::Const(_) | ConstExpr::Param(_) | ConstExpr::Call(..))
                || matches!(e, ConstExpr::Rational(r) if r.is_integer() && !r.is_negative())
        };
        match self {
            ConstExpr::Rational(r) => write!(f, "{}", fmt_rational(r)),
            ConstExpr::Const(c) => write!(f, "{}", c.token()),
            ConstExpr::Param(p) => write!(f, "{p}"),
            ConstExpr::Sum(v) => {
                write!(f, "(")?;
                for (i, e) in v.iter().enumerate() {
                    match (i, e) {
                        (0, e) => write!(f, "{e}")?,
                        (_, ConstExpr::Neg(inner)) => write!(f, " - {inner}")?,
                        (_, e) => write!(f, " + {e}")?,
                    }
                }
                write!(f, ")")
            }
            ConstExpr::Product(v) => {
                for (i, e) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    // a leading a/b needs no parentheses: a/b*x reads left to right
                    let lead_ratio = i == 0 && matches!(e, ConstExpr::Rational(r) if !r.is_negative());
                    if lead_ratio || atomic(e) || matches!(e, ConstExpr::Sum(_) | ConstExpr::Pow(..)) {
                        write!(f, "{e}")?;
                    } else {
                        write!(f, "({e})")?;
                    }
                }
                Ok(())
            }
            ConstExpr::Neg(e) => {
                if atomic(e) || matches!(e.as_ref(), ConstExpr::Sum(_)) {
                    write!(f, "-{e}")
                } else {
                    write!(f, "-({e})")
                }
            }
            ConstExpr::Pow(e, k) => {
                if atomic(e) || matches!(e.as_ref(), ConstExpr::Sum(_)) {
                    write!(f, "{e}^{k}")
                } else {
                    write!(f, "({e})^{k}")
                }
            }
            ConstExpr::Call(func, args) => {
                let a: Vec<String> = args.iter().map(|e| e.to_string()).collect();
                write!(f, "{}({})", func.name(), a.join(", "))
            }
        }
    }
}

/// Arithmetic over numbers and the constant tokens `gf`, `pi`, `ln_gf` and
/// `zeta3` (also `zeta<k>` for any k ≥ 2): `+ - * / ^`, parentheses, integer
/// exponents, exact decimals.
impl FromStr for ConstExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens = tokenize(s)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!("unexpected trailing input in {s:?}")));
        }
        Ok(e)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(parse_decimal(&text)?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    if out.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    Ok(out)
}

fn parse_decimal(text: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("malformed number {text:?}"));
    let (w, f) = text.split_once('.').unwrap_or((text, ""));
    if (w.is_empty() && f.is_empty()) || f.contains('.') {
        return Err(bad());
    }
    let digits: BigInt = format!("{w}{f}").parse().map_err(|_| bad())?;
    Ok(BigRational::new(digits, BigInt::from(10).pow(f.len() as u32)))
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ConstExpr> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ConstExpr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc * self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                acc = match (acc, d) {
                    (ConstExpr::Rational(a), ConstExpr::Rational(b)) if !b.is_zero() => ConstExpr::Rational(a / b),
                    (a, b) => a * b.recip(),
                };
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<ConstExpr> {
        if self.eat('-') {
            return Ok(match self.unary()? {
                ConstExpr::Rational(r) => ConstExpr::Rational(-r),
                e => -e,
            });
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<ConstExpr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        match self.tokens.get(self.pos).cloned() {
            Some(Tok::Num(n)) if n.is_integer() => {
                self.pos += 1;
                let k: i32 = n
                    .to_integer()
                    .try_into()
                    .map_err(|_| Error::Parse("exponent out of range".into()))?;
                Ok(base.pow(if negative { -k } else { k }))
            }
            _ => Err(Error::Parse("exponent must be an integer".into())),
        }
    }

    fn atom(&mut self) -> Result<ConstExpr> {
        match self.tokens.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(ConstExpr::Rational(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "gf" | "phi" => Ok(gf()),
                    "pi" => Ok(pi()),
                    "ln_gf" => Ok(ln_gf()),
                    z if z.starts_with("zeta") => match z[4..].parse::<i64>() {
                        Ok(k) if k >= 2 => Ok(zeta(k)),
                        _ => Err(Error::Parse(format!("unknown constant {name:?}"))),
                    },
                    _ => Err(Error::Parse(format!("unknown constant {name:?}"))),
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing closing parenthesis".into()));
                }
                Ok(e)
            }
            _ => Err(Error::Parse("expected a number, constant or parenthesis".into())),
        }
    }
}

/// The literal as an exact rational if the expression is one.
pub fn as_rational(e: &ConstExpr) -> Option<BigRational> {
    match e {
        ConstExpr::Rational(r) => Some(r.clone()),
        ConstExpr::Neg(x) => as_rational(x).map(|r| -r),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders_and_display() {
        let e = q(5, 108) * zeta(4);
        assert_eq!(e.to_string(), "5/108*zeta(4)");
        let e = int(1) - gf();
        assert_eq!(e.to_string(), "(1 - gf)");
        assert_eq!(gf().pow(-2).to_string(), "gf^-2");
        assert_eq!(li(2, gf()).depth(), 2);
    }

    #[test]
    fn parse_tokens() {
        let e: ConstExpr = "gf^-2".parse().unwrap();
        assert_eq!(e, gf().pow(-2));
        let e: ConstExpr = "-0.3".parse().unwrap();
        assert_eq!(e, q(-3, 10));
        let e: ConstExpr = "1/2".parse().unwrap();
        assert_eq!(e, q(1, 2));
        let e: ConstExpr = "pi^2/6 - ln_gf*zeta3".parse().unwrap();
        assert_eq!(e.params().len(), 0);
        assert_eq!(e.functions().len(), 1);
        for bad in ["", "gf^x", "foo", "(1", "1..2", "2 3", "zeta1"] {
            assert!(bad.parse::<ConstExpr>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn literal_perturbation() {
        let e = q(12, 5) * li(3, gf()) + q(3, 20);
        assert_eq!(e.rational_literal_count(), 2);
        let d = BigRational::new(1.into(), 1_000_000.into());
        let p = e.perturb_literal(1, &d);
        assert_eq!(as_rational(&p.children()[1]), Some(BigRational::new(3.into(), 20.into()) + d));
        assert_eq!(p.children()[0], e.children()[0]);
    }

    #[test]
    fn structure_checks() {
        assert!(ConstExpr::Sum(vec![]).validate().is_err());
        assert!(call(Func::Li(2), vec![]).validate().is_err());
        assert!(mpl(&[2, 1], vec![gf(), gf()]).validate().is_ok());
        assert!(call(Func::Mpl(comp(&[2, 1])), vec![gf()]).validate().is_err());
        assert!(call(Func::Word, vec![]).validate().is_err());
    }
}
