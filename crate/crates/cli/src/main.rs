mod cache;
mod commands;
mod report;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use charvar::epoly::SRangeConvention;
use charvar::grouporacle::Caps;
use clap::{Parser, Subcommand, ValueEnum};

use report::{Format, Report};

#[derive(Parser, Debug)]
#[command(name = "charvar", version, about = "Exact E-polynomials of parabolic SL_n character varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Directory for cached group enumerations.
    #[arg(long, env = "CHARVAR_CACHE_DIR", global = true)]
    cache: Option<PathBuf>,

    #[arg(long, default_value_t = Caps::default().max_group_order, global = true)]
    max_group_order: usize,

    #[arg(long, default_value_t = Caps::default().max_pair_iterations, global = true)]
    max_pair_iterations: u64,

    /// Divisibility condition selecting the s-range of twisted counts.
    #[arg(long, value_enum, default_value_t = Convention::EA, global = true)]
    s_range_convention: Convention,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Convention {
    #[value(name = "eA")]
    EA,
    Theorem,
}

impl From<Convention> for SRangeConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::EA => SRangeConvention::EA,
            Convention::Theorem => SRangeConvention::Theorem,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Stringy E-polynomial with its structural checks.
    Epoly { n: u32, d: u32, g: u32, k: u64 },
    /// Contribution of the sectors of order A, Fermionic shift included.
    Sector { n: u32, d: u32, g: u32, k: u64, a: u32 },
    /// Isotypic piece by both routes, with an agreement flag.
    Isotypic { n: u32, d: u32, g: u32, k: u64, xi_order: u32 },
    /// Point-count polynomial S_{a,b}; a and b are 2g entries each, a first.
    Count {
        n: u32,
        g: u32,
        d: u32,
        #[arg(allow_negative_numbers = true)]
        entries: Vec<i64>,
    },
    /// C, Č, ν, ϑ, d_τ and Q_τ for every type of size dividing n.
    Constants { n: u32 },
    /// Run a named verification suite.
    Verify {
        suite: verify::Suite,
        #[arg(long, default_value_t = 6)]
        n_max: u32,
        /// Genera, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        g: Vec<u32>,
        /// Field size for the twisted-count suite.
        #[arg(long, default_value_t = 13)]
        q: u32,
    },
    /// Brute-force the count lines of a fixture file.
    Oracle { fixture: PathBuf },
}

/// Failure classes, each with its own exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Cap(String),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Cap(_) => 3,
        }
    }
}

impl From<charvar::epoly::EpolyError> for CliError {
    fn from(e: charvar::epoly::EpolyError) -> Self {
        use charvar::epoly::EpolyError;
        match e {
            EpolyError::InvalidParameters(_) | EpolyError::Combinat(_) | EpolyError::Arith(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<charvar::grouporacle::OracleError> for CliError {
    fn from(e: charvar::grouporacle::OracleError) -> Self {
        use charvar::grouporacle::OracleError;
        match e {
            OracleError::CapExceeded { .. } | OracleError::TooLarge { .. } => CliError::Cap(e.to_string()),
            OracleError::InvalidParameters(_)
            | OracleError::Parse { .. }
            | OracleError::NotPrime(_)
            | OracleError::NotGenerating
            | OracleError::NotRegular
            | OracleError::NotNice => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<charvar::combinat::CombinatError> for CliError {
    fn from(e: charvar::combinat::CombinatError) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub struct Context {
    pub caps: Caps,
    pub cache: Option<PathBuf>,
    pub convention: SRangeConvention,
}

fn dispatch(cli: &Cli, ctx: &Context) -> Result<Report, CliError> {
    match &cli.command {
        Command::Epoly { n, d, g, k } => commands::epoly(*n, *d, *g, *k),
        Command::Sector { n, d, g, k, a } => commands::sector(*n, *d, *g, *k, *a),
        Command::Isotypic { n, d, g, k, xi_order } => commands::isotypic(*n, *d, *g, *k, *xi_order),
        Command::Count { n, g, d, entries } => commands::count(*n, *g, *d, entries, ctx.convention),
        Command::Constants { n } => commands::constants(*n),
        Command::Verify { suite, n_max, g, q } => verify::run(*suite, *n_max, g, *q, ctx),
        Command::Oracle { fixture } => commands::oracle(fixture, ctx),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Failure(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Context {
        caps: Caps { max_group_order: cli.max_group_order, max_pair_iterations: cli.max_pair_iterations },
        cache: cli.cache.clone(),
        convention: cli.s_range_convention.into(),
    };
    let result = dispatch(&cli, &ctx).and_then(|report| {
        emit(&cli, &report.render(cli.format))?;
        if report.pass {
            Ok(())
        } else {
            Err(CliError::Failure(String::new()))
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failure(msg)) if msg.is_empty() => ExitCode::from(1),
        Err(e) => {
            let report = Report::error(&e);
            let _ = emit(&cli, &report.render(cli.format));
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
