//! `hyperbisect` command line.
//!
//! Exit codes: 0 success, 1 no solution found (or a non-`IN` verdict with
//! `--expect-in`), 2 usage or argument error, 3 malformed input.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::gf2poly::{ideal_member, truncated_power_of_sum};
use crate::lambda::{frontier_table_with_bound, verdict, Status, DEFAULT_SEARCH_FACTOR};
use crate::momentcurve::{count_bisections, enumerate_bisections, Arrangement, IntervalFamily};
use crate::parity::{lemma_i_parity, lemma_ii_parity};
use crate::rational::{parse_rational_list, serde_str_vec, Rational};
use crate::testmap::{solve_bisection, MeasureInput, SolveOutcome, SolverConfig};

pub const SEED_ENV: &str = "HYPERBISECT_SEED";

#[derive(Debug, Parser)]
#[command(name = "hyperbisect", version, about = "Bisecting measures with hyperplane arrangements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide or tabulate membership of (d, j, k).
    #[command(subcommand)]
    Lambda(LambdaCommand),
    /// Power-of-sum ideal membership over F_2.
    #[command(subcommand)]
    Ideal(IdealCommand),
    /// Parities of the bisection counts.
    #[command(subcommand)]
    Parity(ParityCommand),
    /// Closed-form number of bisecting arrangements on the moment curve.
    Count {
        d: u64,
        k: u64,
        #[arg(long, default_value_t = 0)]
        ell: u64,
    },
    /// Exact bisecting arrangements for intervals on the moment curve.
    Enumerate {
        d: usize,
        k: usize,
        #[arg(long, default_value_t = 0)]
        ell: usize,
        /// Interval endpoints `t1,t2,...` (integers, `p/q` or decimals).
        #[arg(long, allow_hyphen_values = true)]
        params: String,
    },
    /// Numerically search for a bisecting arrangement of point clouds.
    Solve(SolveArgs),
}

#[derive(Debug, Subcommand)]
pub enum LambdaCommand {
    Check {
        d: u64,
        j: u64,
        k: u64,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
        /// Exit with status 1 unless the verdict is IN.
        #[arg(long)]
        expect_in: bool,
    },
    Table {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        jmax: u64,
        /// Search bound factor: dimensions up to B * j are tried.
        #[arg(long = "dmax-search", default_value_t = DEFAULT_SEARCH_FACTOR)]
        dmax_search: u64,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
    Figure {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        jmax: u64,
        #[arg(long = "dmax-search", default_value_t = DEFAULT_SEARCH_FACTOR)]
        dmax_search: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum IdealCommand {
    Member { d: u32, j: u32, k: usize },
}

#[derive(Debug, Subcommand)]
pub enum ParityCommand {
    Lemma1 { d: u64, k: u64 },
    Lemma2 { d: u64, k: u64, ell: u64 },
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 1e-2)]
    pub tol: f64,
    /// Falls back to the HYPERBISECT_SEED environment variable, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TextFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

/// Output of `enumerate`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct EnumerateReport {
    pub d: usize,
    pub k: usize,
    pub ell: usize,
    #[serde(with = "serde_str_vec")]
    pub parameters: Vec<Rational>,
    pub candidates: usize,
    pub rejected: usize,
    pub arrangements: Vec<Arrangement>,
}

enum Failure {
    Usage(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InputFormat(_) => Failure::Input(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable output")
}

/// Runs one command; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            3
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let mut emit = |s: &str| -> Result<(), Failure> {
        writeln!(out, "{s}").map_err(|e| Failure::Usage(e.to_string()))
    };
    match command {
        Command::Lambda(LambdaCommand::Check {
            d,
            j,
            k,
            format,
            expect_in,
        }) => {
            let v = verdict(d, j, k)?;
            match format {
                TextFormat::Text => emit(&v.to_string())?,
                TextFormat::Json => emit(&json(&v))?,
            }
            Ok(if expect_in && v.status != Status::In { 1 } else { 0 })
        }
        Command::Lambda(LambdaCommand::Table {
            k,
            jmax,
            dmax_search,
            format,
        }) => {
            let table = frontier_table_with_bound(k, jmax, dmax_search)?;
            match format {
                TableFormat::Csv => emit(table.to_csv().trim_end())?,
                TableFormat::Json => emit(&json(&table))?,
            }
            Ok(0)
        }
        Command::Lambda(LambdaCommand::Figure {
            k,
            jmax,
            dmax_search,
            out: path,
        }) => {
            let table = frontier_table_with_bound(k, jmax, dmax_search)?;
            std::fs::write(&path, table.to_svg())
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            Ok(0)
        }
        Command::Ideal(IdealCommand::Member { d, j, k }) => {
            if k == 0 {
                return Err(Failure::Usage("k must be positive".into()));
            }
            let member = ideal_member(j as u64, k as u64, d as u64);
            let surviving = truncated_power_of_sum(j, k, d).len();
            emit(&format!("member={member}\nsurviving_monomials={surviving}"))?;
            Ok(0)
        }
        Command::Parity(ParityCommand::Lemma1 { d, k }) => {
            emit(&lemma_i_parity(d, k)?.to_string())?;
            Ok(0)
        }
        Command::Parity(ParityCommand::Lemma2 { d, k, ell }) => {
            emit(&lemma_ii_parity(d, k, ell)?.to_string())?;
            Ok(0)
        }
        Command::Count { d, k, ell } => {
            emit(&count_bisections(d, k, ell)?.to_string())?;
            Ok(0)
        }
        Command::Enumerate { d, k, ell, params } => {
            let parameters = parse_rational_list(&params)?;
            let family = IntervalFamily::new(d, parameters.clone(), ell)?;
            let e = enumerate_bisections(&family, k)?;
            if !e.is_generic() {
                let _ = writeln!(
                    err,
                    "warning: {} of {} candidate arrangements failed verification; the interval family is not generic",
                    e.rejected, e.candidates
                );
            }
            emit(&json(&EnumerateReport {
                d,
                k,
                ell,
                parameters,
                candidates: e.candidates,
                rejected: e.rejected,
                arrangements: e.arrangements,
            }))?;
            Ok(0)
        }
        Command::Solve(args) => {
            let seed = match args.seed {
                Some(s) => s,
                None => match std::env::var(SEED_ENV) {
                    Ok(v) => v.trim().parse().map_err(|_| {
                        Failure::Usage(format!("{SEED_ENV} must be an unsigned integer, got {v:?}"))
                    })?,
                    Err(_) => 0,
                },
            };
            let text = std::fs::read_to_string(&args.input)
                .map_err(|e| Failure::Input(format!("cannot read {}: {e}", args.input.display())))?;
            let input = MeasureInput::from_json(&text)?;
            let config = SolverConfig {
                tolerance: args.tol,
                max_restarts: args.restarts,
                seed,
                ..SolverConfig::default()
            };
            let outcome = solve_bisection(&input.measures, args.k, input.d, &config)?;
            emit(&json(&outcome))?;
            Ok(match outcome {
                SolveOutcome::Found(_) => 0,
                SolveOutcome::NotFound { .. } => 1,
            })
        }
    }
}
