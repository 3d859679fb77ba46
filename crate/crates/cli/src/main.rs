//! `wmwg`: compute generalized inverses, emit cross-check tables and verify
//! residuals from the command line.
//!
//! Exit codes: 0 success, 1 verification or numerical failure, 2 usage or
//! inapplicable method, 3 nonexistent inverse, 4 matrix-file error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wmwg_core::geninv::{self, Residual};
use wmwg_core::harness::{self, CrossCheckOptions};
use wmwg_core::{io, wmwg, ComplexMatrix, Error, FixtureName, RandomSpec, ReprMethod, ToleranceConfig, WeightedPair};

#[derive(Parser)]
#[command(name = "wmwg", version, about = "W-weighted m-weak group inverse toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one inverse and print it (optionally writing a matrix file).
    Compute(ComputeArgs),
    /// Frobenius distance of every representation from the definition.
    Table(TableArgs),
    /// Residuals of the defining equations, projectors and reductions.
    Verify(VerifyArgs),
    /// Write a built-in pair as two matrix files.
    Fixture(FixtureArgs),
}

#[derive(Args)]
struct Source {
    /// Matrix file holding A.
    #[arg(long, conflicts_with_all = ["fixture", "seed"])]
    matrix: Option<PathBuf>,
    /// Matrix file holding W (overrides a fixture's weight).
    #[arg(long)]
    weight: Option<PathBuf>,
    /// Built-in pair.
    #[arg(long, conflicts_with = "seed")]
    fixture: Option<String>,
    /// Generate a random pair with a planted index from this seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Rows of a generated A.
    #[arg(long, default_value_t = 4, requires = "seed")]
    rows: usize,
    /// Columns of a generated A.
    #[arg(long, default_value_t = 4, requires = "seed")]
    cols: usize,
    /// Planted index of a generated pair.
    #[arg(long, default_value_t = 2, requires = "seed")]
    index: usize,
    /// Relative singular-value cut-off for rank decisions.
    #[arg(long)]
    rank_tol: Option<f64>,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    source: Source,
    /// pinv, drazin, group, core, core-ep, weak-group, m-weak-group, w-drazin,
    /// w-core-ep, w-weak-group, w-group, w-core, wmwg, or wmwg:<Method>.
    #[arg(long)]
    method: String,
    #[arg(long)]
    m: Option<usize>,
    /// Write the result as a matrix file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    source: Source,
    /// Comma-separated orders.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    m: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Add a PinvPower row at l = k next to the l = 2k row.
    #[arg(long)]
    pinv_at_k: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    m: usize,
    /// Largest acceptable residual.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args)]
struct FixtureArgs {
    name: String,
    /// Output file for A.
    #[arg(long)]
    out_a: PathBuf,
    /// Output file for W.
    #[arg(long)]
    out_w: PathBuf,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::VerificationFailed { .. }
        | Error::SvdNoConvergence { .. }
        | Error::IndexNotStabilized { .. }
        | Error::IndexMismatch { .. }
        | Error::NonComplementary { .. } => 1,
        Error::Nonexistent { .. } => 3,
        Error::MatrixFile(_) | Error::DataLength { .. } | Error::NonFinite { .. } => 4,
        _ => 2,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

fn load(path: &Path) -> Outcome<ComplexMatrix> {
    io::parse_matrix(path).map_err(|e| Failure {
        code: 4,
        message: format!("{}: {e}", path.display()),
    })
}

impl Source {
    fn tolerance(&self, check_tol: Option<f64>) -> Outcome<ToleranceConfig> {
        let defaults = ToleranceConfig::default();
        Ok(ToleranceConfig::new(
            self.rank_tol,
            check_tol.unwrap_or(defaults.check_tol),
        )?)
    }

    /// `A` and, when available, `W`.
    fn matrices(&self) -> Outcome<(ComplexMatrix, Option<ComplexMatrix>)> {
        let weight = self.weight.as_deref().map(load).transpose()?;
        if let Some(path) = &self.matrix {
            return Ok((load(path)?, weight));
        }
        if let Some(name) = &self.fixture {
            let (a, w) = name.parse::<FixtureName>()?.matrices();
            return Ok((a, Some(weight.unwrap_or(w))));
        }
        if let Some(seed) = self.seed {
            let spec = RandomSpec::new(seed, self.rows, self.cols, self.index);
            let p = harness::random_weighted_pair(&spec)?;
            return Ok((p.a().clone(), Some(weight.unwrap_or_else(|| p.w().clone()))));
        }
        Err(Failure::usage("one of --matrix, --fixture or --seed is required"))
    }

    fn pair(&self, check_tol: Option<f64>) -> Outcome<WeightedPair> {
        let tol = self.tolerance(check_tol)?;
        match self.matrices()? {
            (a, Some(w)) => Ok(WeightedPair::with_tolerance(a, w, tol)?),
            (_, None) => Err(Failure::usage("--weight is required with --matrix")),
        }
    }
}

fn require_m(m: Option<usize>, method: &str) -> Outcome<usize> {
    m.ok_or_else(|| Failure::usage(format!("--m is required for {method}")))
}

fn compute(args: &ComputeArgs) -> Outcome<ComplexMatrix> {
    let method = args.method.as_str();
    let src = &args.source;
    let tol = src.tolerance(None)?;
    let plain = || -> Outcome<ComplexMatrix> { Ok(src.matrices()?.0) };
    let pair = || src.pair(None);
    let x = match method {
        "pinv" => geninv::moore_penrose(&plain()?, &tol)?,
        "drazin" => geninv::drazin(&plain()?, &tol)?,
        "group" => geninv::group_inverse(&plain()?, &tol)?,
        "core" => geninv::core_inverse(&plain()?, &tol)?,
        "core-ep" => geninv::core_ep(&plain()?, &tol)?,
        "weak-group" => geninv::weak_group(&plain()?, &tol)?,
        "m-weak-group" => geninv::m_weak_group(&plain()?, require_m(args.m, method)?, &tol)?,
        "w-drazin" => geninv::weighted_drazin(&pair()?)?,
        "w-core-ep" => geninv::weighted_core_ep(&pair()?)?,
        "w-weak-group" => geninv::weighted_weak_group(&pair()?)?,
        "w-group" => geninv::weighted_group(&pair()?)?,
        "w-core" => geninv::weighted_core(&pair()?)?,
        "wmwg" => wmwg::wmwg(&pair()?, require_m(args.m, method)?)?,
        other => match other.strip_prefix("wmwg:") {
            Some(tag) => {
                let repr: ReprMethod = tag.parse()?;
                wmwg::represent(&pair()?, require_m(args.m, method)?, repr)?
            }
            None => {
                return Err(Error::UnknownName {
                    kind: "method",
                    name: other.to_string(),
                }
                .into())
            }
        },
    };
    Ok(x)
}

fn cmd_compute(args: &ComputeArgs) -> Outcome<()> {
    let x = compute(args)?;
    if let Some(out) = &args.out {
        io::write_matrix(out, &x).map_err(|e| Failure {
            code: 4,
            message: e.to_string(),
        })?;
    }
    print!("{x}");
    Ok(())
}

fn emit(text: &str, out: Option<&Path>) -> Outcome<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure {
            code: 4,
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_table(args: &TableArgs) -> Outcome<()> {
    let p = args.source.pair(None)?;
    let opts = CrossCheckOptions {
        pinv_power_at_k: args.pinv_at_k,
    };
    let report = harness::cross_check_with(&p, &args.m, opts)?;
    let text = match args.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json() + "\n",
    };
    emit(&text, args.out.as_deref())
}

fn cmd_verify(args: &VerifyArgs) -> Outcome<()> {
    let p = args.source.pair(Some(args.tol))?;
    let mut residuals: Vec<Residual> = harness::residual_suite(&p, args.m)?;
    residuals.extend(harness::reduction_suite(&p, args.m)?);
    let width = residuals.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut offenders = Vec::new();
    for r in &residuals {
        let ok = r.value <= args.tol;
        println!("{:<width$}  {:.3e}  {}", r.name, r.value, if ok { "ok" } else { "FAIL" });
        if !ok {
            offenders.push(r.name.as_str());
        }
    }
    if offenders.is_empty() {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            message: format!("residuals above {:e}: {}", args.tol, offenders.join(", ")),
        })
    }
}

fn cmd_fixture(args: &FixtureArgs) -> Outcome<()> {
    let (a, w) = args.name.parse::<FixtureName>()?.matrices();
    for (path, m) in [(&args.out_a, &a), (&args.out_w, &w)] {
        io::write_matrix(path, m).map_err(|e| Failure {
            code: 4,
            message: e.to_string(),
        })?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Compute(args) => cmd_compute(args),
        Command::Table(args) => cmd_table(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Fixture(args) => cmd_fixture(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
