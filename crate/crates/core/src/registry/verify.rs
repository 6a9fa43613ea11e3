use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::eval::Evaluator;
use super::expr::ConstExpr;
use super::records::{builtin_registry, IdentityBody, IdentityRecord, LimitCheck, ParamPoint};
use crate::error::{Error, Result};
use crate::precision::{pow10_upper, CertifiedReal, Mag, PrecisionContext, DEFAULT_GUARD_BITS};
use crate::stuffle::{quasi_shuffle, verify_stuffle_numeric};

pub const MIN_VERIFY_DIGITS: u32 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "UNCERTAIN")]
    Uncertain,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Uncertain => "UNCERTAIN",
        })
    }
}

/// PASS needs both the observed difference and the certified bound under the
/// threshold; a bound too loose to decide gives UNCERTAIN; a difference the
/// bound cannot explain is a FAIL.
pub fn classify(difference: Mag, bound: Mag, threshold: Mag) -> Verdict {
    if difference <= threshold && bound <= threshold {
        Verdict::Pass
    } else if bound > threshold && difference <= bound {
        Verdict::Uncertain
    } else {
        Verdict::Fail
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub paper_ref: String,
    pub digits: u32,
    /// |mid(lhs) − mid(rhs)|, as a decimal string.
    pub abs_difference: String,
    /// Sum of the two certified radii.
    pub certified_bound: String,
    pub terms_used: u64,
    pub elapsed_seconds: f64,
    pub verdict: Verdict,
    #[serde(skip)]
    pub difference: Mag,
    #[serde(skip)]
    pub bound: Mag,
    #[serde(skip)]
    pub diagnostic: Option<String>,
}

impl VerificationReport {
    fn new(rec: &IdentityRecord, id: String, digits: u32) -> Self {
        VerificationReport {
            id,
            paper_ref: rec.paper_ref.clone(),
            digits,
            abs_difference: String::new(),
            certified_bound: String::new(),
            terms_used: 0,
            elapsed_seconds: 0.0,
            verdict: Verdict::Fail,
            difference: Mag::ZERO,
            bound: Mag::ZERO,
            diagnostic: None,
        }
    }

    fn set_numbers(&mut self, difference: Mag, bound: Mag) {
        self.difference = difference;
        self.bound = bound;
        self.abs_difference = difference.to_sci_string();
        self.certified_bound = bound.to_sci_string();
    }

    fn failed(mut self, err: &Error) -> Self {
        self.verdict = Verdict::Fail;
        self.abs_difference = "NaN".into();
        self.certified_bound = "NaN".into();
        self.diagnostic = Some(err.to_string());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn text_line(&self) -> String {
        let mut s = format!(
            "{:<28} {:<9} |diff| = {:<9} bound = {:<9} terms = {:<8} {:.3}s",
            self.id,
            self.verdict.to_string(),
            self.abs_difference,
            self.certified_bound,
            self.terms_used,
            self.elapsed_seconds
        );
        if let Some(d) = &self.diagnostic {
            s.push_str("  ");
            s.push_str(d);
        }
        s
    }
}

/// Midpoint distance and combined radius of two balls.
fn compare(a: &CertifiedReal, b: &CertifiedReal) -> (Mag, Mag) {
    ((&a.midpoint() - &b.midpoint()).abs_upper(), a.error().add(b.error()))
}

fn context_for(digits: u32, exprs: &[&ConstExpr]) -> Result<PrecisionContext> {
    let depth = exprs.iter().map(|e| e.depth()).max().unwrap_or(0) as u32;
    PrecisionContext::with_guard(digits, DEFAULT_GUARD_BITS + 8 * depth)
}

fn bind_point(ev: &mut Evaluator, point: &ParamPoint) -> Result<()> {
    for (name, value) in &point.bindings {
        let v = ev.eval(value)?;
        ev.bind(name, v);
    }
    Ok(())
}

fn check_equation(lhs: &ConstExpr, rhs: &ConstExpr, point: Option<&ParamPoint>, ctx: &PrecisionContext) -> Result<(Mag, Mag, u64)> {
    lhs.validate()?;
    rhs.validate()?;
    let mut ev = Evaluator::new(ctx);
    if let Some(p) = point {
        bind_point(&mut ev, p)?;
    }
    let l = ev.eval(lhs).map_err(|e| e.at("lhs"))?;
    let r = ev.eval(rhs).map_err(|e| e.at("rhs"))?;
    let (d, b) = compare(&l, &r);
    Ok((d, b, ev.terms()))
}

/// ε(1 + ln²ε) for ε = 10^−e, rounded up.
pub fn limit_envelope(e: u32) -> Mag {
    let ln_eps = e as f64 * std::f64::consts::LN_10;
    pow10_upper(-(e as i64)).mul(Mag::from_f64(1.0 + ln_eps * ln_eps))
}

fn check_limit(lim: &LimitCheck, e: u32, digits: u32) -> Result<(Mag, Mag, u64)> {
    let ctx = context_for(digits, &[&lim.expr, &lim.target])?;
    let mut ev = Evaluator::new(&ctx);
    let eps = CertifiedReal::from_rational(
        &num_rational::BigRational::new(1.into(), num_bigint::BigInt::from(10).pow(e)),
        ctx.working_bits(),
    );
    ev.bind(&lim.param, &ctx.one() - &eps);
    let v = ev.eval(&lim.expr)?;
    let t = ev.eval(&lim.target)?;
    let (d, b) = compare(&v, &t);
    Ok((d, b, ev.terms()))
}

/// Grid to use: the override if it binds exactly the record's parameters.
fn grid_for<'a>(rec: &'a IdentityRecord, over: Option<&'a [ParamPoint]>) -> &'a [ParamPoint] {
    let names = rec.param_names();
    match over {
        Some(pts) if !names.is_empty() && pts.iter().all(|p| p.names() == names) => pts,
        _ => rec.default_params(),
    }
}

/// Verifies one record, producing one report per grid point (plus one per
/// limit offset). Evaluation failures become FAIL reports with a diagnostic.
pub fn verify(rec: &IdentityRecord, digits: u32, params: Option<&[ParamPoint]>) -> Vec<VerificationReport> {
    if digits < MIN_VERIFY_DIGITS {
        let err = Error::Capacity(format!("verification needs at least {MIN_VERIFY_DIGITS} digits"));
        return vec![VerificationReport::new(rec, rec.id.clone(), digits).failed(&err)];
    }
    let threshold = pow10_upper(-(digits as i64 - 5));
    let mut out = Vec::new();
    match &rec.body {
        IdentityBody::Equation { lhs, rhs, .. } => {
            let grid = grid_for(rec, params);
            let points: Vec<Option<&ParamPoint>> =
                if grid.is_empty() { vec![None] } else { grid.iter().map(Some).collect() };
            for p in points {
                let id = match p {
                    Some(p) => format!("{}[{p}]", rec.id),
                    None => rec.id.clone(),
                };
                let start = Instant::now();
                let report = VerificationReport::new(rec, id, digits);
                let result = context_for(digits, &[lhs, rhs]).and_then(|ctx| check_equation(lhs, rhs, p, &ctx));
                out.push(finish(report, result, start, |d, b| classify(d, b, threshold)));
            }
        }
        IdentityBody::Stuffle { a, b, stated, up_to } => {
            let start = Instant::now();
            let mut report = VerificationReport::new(rec, rec.id.clone(), digits);
            let result = quasi_shuffle(a, b).map(|product| {
                let exact = product == *stated && verify_stuffle_numeric(a, b, *up_to);
                (exact, product)
            });
            report.terms_used = *up_to;
            report.elapsed_seconds = start.elapsed().as_secs_f64();
            match result {
                Ok((true, _)) => {
                    report.set_numbers(Mag::ZERO, Mag::ZERO);
                    report.verdict = Verdict::Pass;
                }
                Ok((false, product)) => {
                    report.set_numbers(Mag::from_u64(1), Mag::ZERO);
                    report.diagnostic = Some(format!("stuffle product is {product}, stated {stated}"));
                    report.verdict = Verdict::Fail;
                }
                Err(e) => report = report.failed(&e),
            }
            out.push(report);
        }
    }
    if let Some(lim) = &rec.limit {
        for &e in &lim.offsets {
            let start = Instant::now();
            let report = VerificationReport::new(rec, format!("{}[limit {}=1-10^-{e}]", rec.id, lim.param), digits);
            let envelope = limit_envelope(e);
            out.push(finish(report, check_limit(lim, e, digits), start, |d, b| {
                if d.add(b) <= envelope {
                    Verdict::Pass
                } else if d <= envelope {
                    Verdict::Uncertain
                } else {
                    Verdict::Fail
                }
            }));
        }
    }
    out
}

fn finish(
    mut report: VerificationReport,
    result: Result<(Mag, Mag, u64)>,
    start: Instant,
    judge: impl Fn(Mag, Mag) -> Verdict,
) -> VerificationReport {
    report.elapsed_seconds = start.elapsed().as_secs_f64();
    match result {
        Ok((d, b, terms)) => {
            report.set_numbers(d, b);
            report.terms_used = terms;
            report.verdict = judge(d, b);
            report
        }
        Err(e) => report.failed(&e),
    }
}

/// Verifies every record concurrently; reports come back in catalogue order.
pub fn verify_all(digits: u32) -> Vec<VerificationReport> {
    verify_records(&builtin_registry(), digits, None)
}

pub fn verify_records(records: &[IdentityRecord], digits: u32, params: Option<&[ParamPoint]>) -> Vec<VerificationReport> {
    let nested: Vec<Vec<VerificationReport>> = records.par_iter().map(|r| verify(r, digits, params)).collect();
    nested.into_iter().flatten().collect()
}

/// Aggregate verdict: PASS only if every report passes; FAIL dominates UNCERTAIN.
pub fn aggregate(reports: &[VerificationReport]) -> Verdict {
    if reports.iter().any(|r| r.verdict == Verdict::Fail) {
        Verdict::Fail
    } else if reports.iter().any(|r| r.verdict == Verdict::Uncertain) {
        Verdict::Uncertain
    } else {
        Verdict::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_rule() {
        let t = Mag::pow2(-100);
        let small = Mag::pow2(-120);
        let big = Mag::pow2(-60);
        assert_eq!(classify(small, small, t), Verdict::Pass);
        assert_eq!(classify(small, big, t), Verdict::Uncertain);
        assert_eq!(classify(big, small, t), Verdict::Fail);
        assert_eq!(classify(big.mul(Mag::from_u64(4)), big, t), Verdict::Fail);
    }

    #[test]
    fn envelope_values() {
        let e4 = limit_envelope(4).to_f64();
        assert!(e4 > 1e-4 * (1.0 + 9.21f64.powi(2)) && e4 < 1e-4 * (1.0 + 9.22f64.powi(2)));
    }
}
