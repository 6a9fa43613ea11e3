use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::expr::{ConstExpr, Func, Named};
use crate::apery::{apery_sum_counted, dk_rhs_counted, AperySumSpec};
use crate::error::{Error, Result};
use crate::iterint::{eval_word_counted, h_m1001_counted, nielsen_quadrature, IteratedWord, Letter};
use crate::mpl::{li_counted, mpl_counted, mpl_single_counted, mzv, nielsen_counted, MplArgument, SeriesValue};
use crate::precision::{golden, ln, pi, zeta_even, zeta_int, CertifiedReal, PrecisionContext};

/// Bottom-up evaluator with parameter bindings, a per-evaluator memo of
/// primitive calls and a running count of series terms.
pub struct Evaluator<'a> {
    ctx: &'a PrecisionContext,
    env: HashMap<String, CertifiedReal>,
    cache: HashMap<String, CertifiedReal>,
    terms: u64,
}

impl<'a> Evaluator<'a> {
    pub fn new(ctx: &'a PrecisionContext) -> Self {
        Evaluator { ctx, env: HashMap::new(), cache: HashMap::new(), terms: 0 }
    }

    pub fn bind(&mut self, name: &str, value: CertifiedReal) {
        self.env.insert(name.to_string(), value);
    }

    /// Series terms summed so far across all primitive calls.
    pub fn terms(&self) -> u64 {
        self.terms
    }

    pub fn eval(&mut self, e: &ConstExpr) -> Result<CertifiedReal> {
        let ctx = self.ctx;
        match e {
            ConstExpr::Rational(r) => Ok(CertifiedReal::from_rational(r, ctx.working_bits())),
            ConstExpr::Const(c) => self.memo(&e.to_string(), |_| {
                Ok(match c {
                    Named::Pi => pi(ctx),
                    Named::Gf => golden(ctx).phi,
                    Named::LnGf => golden(ctx).ln_phi,
                })
            }),
            ConstExpr::Param(p) => self
                .env
                .get(p)
                .cloned()
                .ok_or_else(|| Error::Structure(format!("unbound parameter {p:?}"))),
            ConstExpr::Sum(v) => {
                if v.is_empty() {
                    return Err(Error::Structure("empty sum".into()));
                }
                let mut acc = ctx.zero();
                for x in v {
                    acc = &acc + &self.eval(x)?;
                }
                Ok(acc)
            }
            ConstExpr::Product(v) => {
                if v.is_empty() {
                    return Err(Error::Structure("empty product".into()));
                }
                let mut acc = ctx.one();
                for x in v {
                    acc = &acc * &self.eval(x)?;
                }
                Ok(acc)
            }
            ConstExpr::Neg(x) => Ok(-&self.eval(x)?),
            ConstExpr::Pow(x, k) => self.eval(x)?.powi(*k as i64),
            ConstExpr::Call(f, args) => {
                let key = e.to_string();
                self.memo(&key, |me| me.call(f, args)).map_err(|err| err.at(f.name()))
            }
        }
    }

    fn memo(
        &mut self,
        key: &str,
        compute: impl FnOnce(&mut Self) -> Result<CertifiedReal>,
    ) -> Result<CertifiedReal> {
        if let Some(v) = self.cache.get(key) {
            return Ok(v.clone());
        }
        let v = compute(self)?;
        self.cache.insert(key.to_string(), v.clone());
        Ok(v)
    }

    fn counted(&mut self, v: Result<SeriesValue>) -> Result<CertifiedReal> {
        let v = v?;
        self.terms += v.terms;
        Ok(v.value)
    }

    fn integer_arg(&mut self, e: &ConstExpr) -> Result<i64> {
        let v = self.eval(e)?;
        exact_integer(&v).ok_or_else(|| Error::Domain(format!("{e} must be an exact integer")))
    }

    fn small_positive(&mut self, e: &ConstExpr) -> Result<u32> {
        match self.integer_arg(e)? {
            n @ 1..=64 => Ok(n as u32),
            n => Err(Error::Domain(format!("index {n} out of range 1..=64"))),
        }
    }

    fn letter(&mut self, e: &ConstExpr) -> Result<Letter> {
        // φ^-2 and the like are stored through their exact reciprocal
        if let ConstExpr::Pow(base, k) = e {
            if *k < 0 {
                let inv = self.eval(&ConstExpr::Pow(base.clone(), -k))?;
                return Letter::inverse_of(inv);
            }
        }
        let v = self.eval(e)?;
        if v.is_exact_zero() {
            Ok(Letter::Zero)
        } else {
            Letter::node(v)
        }
    }

    fn call(&mut self, f: &Func, args: &[ConstExpr]) -> Result<CertifiedReal> {
        let ctx = self.ctx;
        if let Some(n) = f.arity() {
            if n != args.len() {
                return Err(Error::Structure(format!("expected {n} argument(s), got {}", args.len())));
            }
        }
        match f {
            Func::Ln => ln(&self.eval(&args[0])?, ctx),
            Func::Sqrt => self.eval(&args[0])?.sqrt(),
            Func::Li(k) => {
                let x = self.eval(&args[0])?;
                self.counted(li_counted(*k, &x, ctx))
            }
            Func::MplSingle(c) => {
                let x = self.eval(&args[0])?;
                self.counted(mpl_single_counted(c, &x, ctx))
            }
            Func::Mpl(c) => {
                let xs = args.iter().map(|a| self.eval(a)).collect::<Result<Vec<_>>>()?;
                self.counted(mpl_counted(c, &MplArgument(xs), ctx))
            }
            Func::Mzv(c) => mzv(c, ctx),
            Func::Nielsen | Func::NielsenIntegral => {
                let a = self.small_positive(&args[0])?;
                let b = self.small_positive(&args[1])?;
                let z = self.eval(&args[2])?;
                if *f == Func::Nielsen {
                    self.counted(nielsen_counted(a, b, &z, ctx))
                } else {
                    nielsen_quadrature(a, b, &z, ctx)
                }
            }
            Func::Word => {
                if args.is_empty() {
                    return Err(Error::Structure("word needs at least one letter".into()));
                }
                let letters = args.iter().map(|a| self.letter(a)).collect::<Result<Vec<_>>>()?;
                let w = IteratedWord::new(letters)?;
                self.counted(eval_word_counted(&w, ctx))
            }
            Func::HM1001 => {
                let y = self.eval(&args[0])?;
                self.counted(h_m1001_counted(&y, ctx))
            }
            Func::AperySum { s, weight } => {
                let u = self.eval(&args[0])?;
                let spec = AperySumSpec::new(u, *s, weight.clone());
                self.counted(apery_sum_counted(&spec, ctx))
            }
            Func::DkRhs(kind) => {
                let u = self.eval(&args[0])?;
                self.counted(dk_rhs_counted(*kind, &u, ctx))
            }
            Func::ZetaInt => {
                let s = self.integer_arg(&args[0])?;
                zeta_int(s, ctx)
            }
            Func::ZetaEven => {
                let k = self.small_positive(&args[0])?;
                zeta_even(k, ctx)
            }
        }
    }
}

/// The integer a ball denotes, if it is exact and integral.
pub fn exact_integer(v: &CertifiedReal) -> Option<i64> {
    if !v.is_exact() {
        return None;
    }
    let unit = BigInt::from(1) << v.bits() as usize;
    let (quot, rem) = v.mantissa().div_rem(&unit);
    if rem.is_zero() {
        quot.to_i64()
    } else {
        None
    }
}

/// Evaluates a closed expression (no parameters) in `ctx`.
pub fn eval_expr(e: &ConstExpr, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    e.validate()?;
    Evaluator::new(ctx).eval(e)
}
