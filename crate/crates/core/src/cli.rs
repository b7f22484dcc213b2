//! Command-line front end: `bound`, `sweep`, `verify` and `figure`.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bounds::{p_alpha, p_infty, Regime};
use crate::error::{BoundError, Result};
use crate::laws::{Count, Family, MomentBudget, ReferenceLaw};
use crate::report::{self, AlphaTag};
use crate::verify::{self, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONSTRAINT: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "tailbound", version, about = "Optimal left-tail bounds for sums of nonnegative random variables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one bound at a threshold.
    Bound(BoundArgs),
    /// Stream bound rows over a z grid for the budget's λ = m²/s.
    Sweep(SweepArgs),
    /// Run the randomized invariant checks against the oracles.
    Verify(VerifyArgs),
    /// Emit the λ ∈ {3, 10}, n ∈ {11, 30, inf} comparison dataset.
    Figure(FigureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    /// Mean budget; any real for the normal family, positive otherwise.
    #[arg(long, allow_negative_numbers = true)]
    pub m: f64,
    #[arg(long)]
    pub s: f64,
    /// Number of summands, or "inf" (binomial needs a finite value).
    #[arg(long)]
    pub n: Option<Count>,
    #[arg(long, conflicts_with = "z", required_unless_present = "z", allow_negative_numbers = true)]
    pub x: Option<f64>,
    /// Standardized threshold; translated to x = m + z√s.
    #[arg(long, allow_negative_numbers = true)]
    pub z: Option<f64>,
    /// 2, 3 or inf; 0 gives the exact tail. Defaults to 3 for lattice laws and 2 for the normal law.
    #[arg(long)]
    pub alpha: Option<AlphaTag>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub m: f64,
    #[arg(long)]
    pub s: f64,
    #[arg(long, default_value = "inf")]
    pub n: Count,
    /// Restrict to one bound order (all orders by default).
    #[arg(long)]
    pub alpha: Option<AlphaTag>,
    /// Restrict to one family (lattice and normal rows by default).
    #[arg(long, value_parser = parse_family)]
    pub family: Option<Family>,
    /// Number of z points inside (-√λ, 0).
    #[arg(long, default_value_t = 50)]
    pub grid: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Size of the brute-force w grid.
    #[arg(long, default_value_t = 2000)]
    pub grid: usize,
    /// Relative tolerance for the brute-force comparison.
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Number of z points per λ.
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse()
}

fn io_err(e: std::io::Error) -> BoundError {
    BoundError::NumericFailure(format!("output error: {e}"))
}

fn run_bound(args: &BoundArgs, out: &mut dyn Write) -> Result<()> {
    let law = match (args.family, args.n) {
        (Family::ScaledBinomial, None) => {
            return Err(BoundError::ConstraintViolation("the binomial family needs --n".into()))
        }
        (Family::ScaledBinomial, Some(n)) => ReferenceLaw::new(Family::ScaledBinomial, MomentBudget::new(args.m, args.s, n)?)?,
        (family, n) => {
            if let Some(n @ Count::Finite(_)) = n {
                MomentBudget::new(args.m, args.s, n)?;
            }
            if family == Family::ScaledPoisson {
                ReferenceLaw::poisson(args.m, args.s)?
            } else {
                ReferenceLaw::normal(args.m, args.s)?
            }
        }
    };
    let budget = *law.budget();
    let x = match (args.x, args.z) {
        (Some(x), None) => x,
        (None, Some(z)) => budget.x_of(z),
        _ => return Err(BoundError::ConstraintViolation("give exactly one of --x and --z".into())),
    };
    let alpha = args.alpha.unwrap_or(if args.family.is_lattice() { AlphaTag::Three } else { AlphaTag::Two });
    let (value, regime, w_x, j_x) = match alpha {
        AlphaTag::Two | AlphaTag::Three => {
            let r = p_alpha(&law, if alpha == AlphaTag::Two { 2 } else { 3 }, x)?;
            (r.value, Some(r.regime), r.w_x, r.j_x)
        }
        AlphaTag::Infinite => (p_infty(&law, x), None, None, None),
        AlphaTag::True => (report::true_tail(&law, x), None, None, None),
    };
    let regime = regime.unwrap_or(if x >= law.mean() {
        Regime::AtOrAboveMean
    } else if x <= law.support_infimum() {
        Regime::BelowSupport
    } else {
        Regime::Interior
    });
    let z = budget.z_of(x);
    let opt = |v: Option<String>| v.unwrap_or_default();
    match args.format {
        Format::Csv => {
            writeln!(out, "family,m,s,n,alpha,x,z,value,regime,w_x,j_x").map_err(io_err)?;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                args.family,
                args.m,
                args.s,
                law.budget().n(),
                alpha,
                x,
                z,
                value,
                regime,
                opt(w_x.map(|w| w.to_string())),
                opt(j_x.map(|j| j.to_string()))
            )
            .map_err(io_err)?;
        }
        Format::Json => {
            let n = match law.budget().n() {
                Count::Finite(n) => json!(n),
                Count::Infinite => json!("inf"),
            };
            let row = json!({
                "family": args.family.tag(),
                "m": args.m,
                "s": args.s,
                "n": n,
                "alpha": alpha.as_str(),
                "x": x,
                "z": z,
                "value": value,
                "regime": regime.to_string(),
                "w_x": w_x,
                "j_x": j_x,
            });
            writeln!(out, "{row}").map_err(io_err)?;
        }
    }
    Ok(())
}

fn emit_rows(rows: &[report::SweepRow], format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Csv => report::write_csv(rows, out),
        Format::Json => report::write_jsonl(rows, out),
    }
    .map_err(io_err)
}

fn run_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<()> {
    let budget = MomentBudget::new(args.m, args.s, args.n)?;
    let lambda = budget.lambda();
    let alphas: Vec<AlphaTag> = match args.alpha {
        Some(a) => vec![a],
        None => AlphaTag::ALL.to_vec(),
    };
    let mut rows = report::sweep(&[lambda], &[args.n], &alphas, &report::open_z_grid(lambda, args.grid))?;
    if let Some(family) = args.family {
        rows.retain(|r| r.family == family);
    }
    emit_rows(&rows, args.format, out)
}

fn run_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<bool> {
    if args.grid < 1000 {
        return Err(BoundError::Domain(format!("--grid {} must be at least 1000", args.grid)));
    }
    let cfg = VerifyConfig { seed: args.seed, grid: args.grid, tol: args.tol, ..VerifyConfig::default() };
    let outcomes = verify::run_all(&cfg)?;
    for o in &outcomes {
        writeln!(out, "{o}").map_err(io_err)?;
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    writeln!(out, "{} checks, {} failed", outcomes.len(), failed).map_err(io_err)?;
    Ok(failed == 0)
}

/// Executes a parsed command, writing results to `out` and errors to `err`.
/// Returns the process exit status.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Bound(a) => run_bound(a, out).map(|_| true),
        Command::Sweep(a) => run_sweep(a, out).map(|_| true),
        Command::Verify(a) => run_verify(a, out),
        Command::Figure(a) => report::comparison_dataset(a.grid).and_then(|rows| emit_rows(&rows, a.format, out)).map(|_| true),
    };
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_NUMERIC,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONSTRAINT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            code
        }
    }
}
