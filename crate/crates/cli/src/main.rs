//! `apery`: evaluate polylogarithms and Apéry-like sums, and verify the
//! identity catalogue, from the command line.

use std::process::ExitCode;

use apery_core::apery::{apery_sum_counted, AperySumSpec, HarmonicWeight};
use apery_core::mpl::Composition;
use apery_core::precision::{CertifiedReal, PrecisionContext, DEFAULT_GUARD_BITS};
use apery_core::registry::{
    aggregate, builtin_registry, call, int, li, lookup, mpl, verify_records, ConstExpr, Evaluator, Func,
    IdentityRecord, ParamPoint, Verdict,
};
use apery_core::Error;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_EVAL: u8 = 3;
const EXIT_UNCERTAIN: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "apery", version, about = "Certified polylogarithm and Apéry-sum evaluation")]
struct Cli {
    /// Decimal digits of the result (10 to 1000)
    #[arg(long, global = true, default_value_t = 30, value_parser = clap::value_parser!(u32).range(10..=1000))]
    digits: u32,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a function or constant:
    ///   li K X | mpl K1,..,Kr X1,..,Xr | nielsen A B Z | word A1,..,An | h1001 Y | const EXPR
    #[command(allow_hyphen_values = true)]
    Eval {
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        target: Vec<String>,
    },
    /// Sum Σ u^n w(n) / (n^s C(2n,n))
    Sum {
        #[arg(short, long, allow_hyphen_values = true)]
        u: String,
        #[arg(short, long)]
        s: u32,
        /// Harmonic weight, e.g. "H2(n-1)" or "10*H(n) - 3*INV_N"
        #[arg(short, long, default_value = "1", allow_hyphen_values = true)]
        w: String,
    },
    /// Verify catalogue identities
    Verify {
        /// Identity ids such as I3
        ids: Vec<String>,
        #[arg(long)]
        all: bool,
        /// Comma-separated u values replacing the default grid of u-parameterised identities
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        u_grid: Option<Vec<String>>,
    },
    /// List the catalogue
    List,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Eval(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => CliError::Usage(e.to_string()),
            other => CliError::Eval(other),
        }
    }
}

fn parse_expr(s: &str) -> Result<ConstExpr, CliError> {
    s.parse::<ConstExpr>().map_err(|e| CliError::Usage(format!("{s:?}: {e}")))
}

fn parse_list<T>(s: &str, f: impl Fn(&str) -> Result<T, CliError>) -> Result<Vec<T>, CliError> {
    s.split(',').map(|p| f(p.trim())).collect()
}

fn parse_u32(s: &str) -> Result<u32, CliError> {
    s.parse().map_err(|_| CliError::Usage(format!("expected a positive integer, got {s:?}")))
}

fn eval_target(args: &[String]) -> Result<ConstExpr, CliError> {
    let want = |n: usize| -> Result<(), CliError> {
        if args.len() == n + 1 {
            Ok(())
        } else {
            Err(CliError::Usage(format!("`{}` takes {n} argument(s)", args[0])))
        }
    };
    Ok(match args[0].as_str() {
        "li" => {
            want(2)?;
            li(parse_u32(&args[1])?, parse_expr(&args[2])?)
        }
        "mpl" => {
            want(2)?;
            let parts = parse_list(&args[1], parse_u32)?;
            let xs = parse_list(&args[2], parse_expr)?;
            if parts.len() != xs.len() {
                return Err(CliError::Usage("index and argument lists differ in length".into()));
            }
            let c = Composition::new(parts).map_err(|e| CliError::Usage(e.to_string()))?;
            if xs.len() == 1 {
                li(c.parts()[0], xs[0].clone())
            } else {
                mpl(c.parts(), xs)
            }
        }
        "nielsen" => {
            want(3)?;
            let a = parse_u32(&args[1])?;
            let b = parse_u32(&args[2])?;
            call(Func::Nielsen, vec![int(a.into()), int(b.into()), parse_expr(&args[3])?])
        }
        "word" => {
            want(1)?;
            call(Func::Word, parse_list(&args[1], parse_expr)?)
        }
        "h1001" => {
            want(1)?;
            call(Func::HM1001, vec![parse_expr(&args[1])?])
        }
        "const" => {
            if args.len() < 2 {
                return Err(CliError::Usage("`const` needs an expression".into()));
            }
            parse_expr(&args[1..].join(" "))?
        }
        other => return Err(CliError::Usage(format!("unknown evaluation target {other:?}"))),
    })
}

struct Printer {
    format: Format,
    digits: u32,
}

impl Printer {
    fn value(&self, label: &str, v: &CertifiedReal, terms: u64) {
        let value = v.to_decimal_string(self.digits as usize);
        let bound = v.error().to_sci_string();
        match self.format {
            Format::Text => println!("{label} = {value} ± {bound}  ({terms} terms)"),
            Format::Machine => println!(
                "{}",
                json!({ "target": label, "digits": self.digits, "value": value, "certified_bound": bound, "terms_used": terms })
            ),
        }
    }
}

fn context(digits: u32, depth: usize) -> Result<PrecisionContext, CliError> {
    Ok(PrecisionContext::with_guard(digits, DEFAULT_GUARD_BITS + 8 * depth as u32)?)
}

fn cmd_eval(p: &Printer, target: &[String]) -> Result<u8, CliError> {
    let e = eval_target(target)?;
    e.validate()?;
    let ctx = context(p.digits, e.depth())?;
    let mut ev = Evaluator::new(&ctx);
    let v = ev.eval(&e).map_err(CliError::Eval)?;
    p.value(&target.join(" "), &v, ev.terms());
    Ok(0)
}

fn cmd_sum(p: &Printer, u: &str, s: u32, w: &str) -> Result<u8, CliError> {
    let weight: HarmonicWeight = w.parse()?;
    let u_expr = parse_expr(u)?;
    let ctx = context(p.digits, u_expr.depth())?;
    let u_val = Evaluator::new(&ctx).eval(&u_expr).map_err(CliError::Eval)?;
    let spec = AperySumSpec::new(u_val, s, weight.clone());
    let r = apery_sum_counted(&spec, &ctx).map_err(CliError::Eval)?;
    p.value(&format!("sum u={u} s={s} w={weight}"), &r.value, r.terms);
    Ok(0)
}

fn cmd_verify(p: &Printer, ids: &[String], all: bool, u_grid: Option<&[String]>) -> Result<u8, CliError> {
    let records: Vec<IdentityRecord> = if all {
        builtin_registry()
    } else if ids.is_empty() {
        return Err(CliError::Usage("give identity ids or --all".into()));
    } else {
        ids.iter()
            .map(|id| lookup(id).ok_or_else(|| CliError::Usage(format!("unknown identity {id:?}"))))
            .collect::<Result<_, _>>()?
    };
    let grid = match u_grid {
        Some(us) => Some(
            us.iter()
                .map(|u| Ok(ParamPoint::new(&[("u", parse_expr(u)?)])))
                .collect::<Result<Vec<_>, CliError>>()?,
        ),
        None => None,
    };
    let reports = verify_records(&records, p.digits, grid.as_deref());
    for r in &reports {
        match p.format {
            Format::Text => println!("{}", r.text_line()),
            Format::Machine => println!("{}", r.to_json()),
        }
    }
    if p.format == Format::Text {
        let pass = reports.iter().filter(|r| r.verdict == Verdict::Pass).count();
        println!("{} identities, {} checks, {} passed", records.len(), reports.len(), pass);
    }
    Ok(match aggregate(&reports) {
        Verdict::Pass => 0,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Uncertain => EXIT_UNCERTAIN,
    })
}

fn cmd_list(p: &Printer) -> Result<u8, CliError> {
    for r in builtin_registry() {
        let points: Vec<String> = r.default_params().iter().map(|q| q.to_string()).collect();
        match p.format {
            Format::Text => println!("{:<4} {}  [{}]", r.id, r.description, r.paper_ref),
            Format::Machine => println!(
                "{}",
                json!({ "id": r.id, "description": r.description, "paper_ref": r.paper_ref, "grid": points })
            ),
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let p = Printer { format: cli.format, digits: cli.digits };
    let result = match &cli.command {
        Command::Eval { target } => cmd_eval(&p, target),
        Command::Sum { u, s, w } => cmd_sum(&p, u, *s, w),
        Command::Verify { ids, all, u_grid } => cmd_verify(&p, ids, *all, u_grid.as_deref()),
        Command::List => cmd_list(&p),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}\n\nRun `apery --help` for usage.");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Eval(e)) => {
            eprintln!("evaluation failed: {e}");
            ExitCode::from(EXIT_EVAL)
        }
    }
}
