//! Catalogue of identities as pairs of expression trees, with numeric
//! verification and reporting.

mod eval;
mod expr;
mod records;
mod verify;

pub use eval::{eval_expr, exact_integer, Evaluator};
pub use expr::{
    apery, as_rational, call, gf, int, li, li_multi, ln, ln_gf, mpl, mzv, param, pi, q, sqrt, zeta, ConstExpr, Func,
    FuncFamily, Named,
};
pub use records::{builtin_registry, lookup, IdentityBody, IdentityRecord, LimitCheck, ParamPoint};
pub use verify::{
    aggregate, classify, limit_envelope, verify, verify_all, verify_records, Verdict, VerificationReport,
    MIN_VERIFY_DIGITS,
};
