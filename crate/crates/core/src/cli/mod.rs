//! Command-line front end: argument parsing, dispatch and table output.
//!
//! Exit codes: 0 success, 1 usage, 2 configuration or I/O, 3 math domain.
//! Every failure writes exactly one line `error: <code>: <detail>` to stderr.

pub mod config;
mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::nc_lattice::{enumerate_nc, NcLattice, DEFAULT_LATTICE_CAP};
use crate::rational::parse_rational;
use crate::series::{
    boxed_convolution, check_even, check_freeness, compress_r_transform, free_family_sparsity, r_transform,
    BSeries, IndexWord,
};
use crate::toeplitz::{t_cumulant, t_moment, TVariable};

pub use config::{load_config, parse_config, Config, ConfigError};
pub use table::{Row, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_MATH: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "toepfree", version, about = "Exact Toeplitz-valued free probability calculator")]
struct Cli {
    /// Configuration file (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Noncrossing partition tables.
    Nc {
        #[command(subcommand)]
        command: NcCommand,
    },
    /// Toeplitz moments of every word of the given length.
    Moments(WordQuery),
    /// Toeplitz cumulants of every word of the given length.
    Cumulants(WordQuery),
    /// R-transform of a family of variables.
    Rtransform {
        #[arg(long, value_delimiter = ',', required = true)]
        vars: Vec<String>,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Boxed convolution of two R-transforms.
    Boxconv {
        #[arg(long, value_delimiter = ',', required = true)]
        left: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        right: Vec<String>,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Vanishing of mixed cumulants between two groups.
    CheckFree {
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<String>,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Vanishing of odd cumulants (cross-checked against odd moments).
    CheckEven {
        #[arg(long)]
        var: String,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// R-transform of the compression by a projection of trace alpha.
    Compress {
        #[arg(long)]
        var: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// R-transform of a tuple of free generators against the sparsity pattern.
    Sparsity {
        #[arg(long)]
        var: String,
        #[arg(long)]
        degree: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum NcCommand {
    /// All of NC(n) in canonical order.
    List {
        #[arg(long)]
        n: usize,
    },
    /// Every nonzero mu(theta, pi) on NC(n).
    Mobius {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, clap::Args)]
struct WordQuery {
    #[arg(long, value_delimiter = ',', required = true)]
    vars: Vec<String>,
    #[arg(long)]
    degree: usize,
    /// Restrict to one 1-based index word, e.g. 1,2,3.
    #[arg(long, value_delimiter = ',')]
    word: Option<Vec<usize>>,
}

/// A failure destined for stderr and the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub exit: i32,
    pub line: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure { exit: EXIT_USAGE, line: format!("usage: {}", msg.into()) }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { exit: EXIT_MATH, line: e.to_string() }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure { exit: EXIT_CONFIG, line: e.to_string() }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or_default();
            let first = first.strip_prefix("error: ").unwrap_or(first);
            let _ = writeln!(stderr, "error: usage: {first}");
            return EXIT_USAGE;
        }
    };
    match execute(&cli) {
        Ok(table) => {
            let rendered = match cli.format {
                Format::Json => table.to_json_string(),
                Format::Csv => table.to_csv(),
            };
            let written = match &cli.out {
                Some(path) => std::fs::write(path, rendered)
                    .map_err(|e| format!("io-error: {}: {e}", path.display())),
                None => stdout.write_all(rendered.as_bytes()).map_err(|e| format!("io-error: {e}")),
            };
            match written {
                Ok(()) => EXIT_OK,
                Err(line) => {
                    let _ = writeln!(stderr, "error: {line}");
                    EXIT_CONFIG
                }
            }
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.line);
            f.exit
        }
    }
}

fn execute(cli: &Cli) -> Result<Table, Failure> {
    if let Command::Nc { command } = &cli.command {
        return nc_table(command);
    }
    let path = cli.config.as_ref().ok_or_else(|| Failure::usage("--config is required for this command"))?;
    let config = load_config(path)?;
    match &cli.command {
        Command::Nc { .. } => unreachable!("handled above"),
        Command::Moments(q) => word_table(&config, "moments", q, t_moment),
        Command::Cumulants(q) => word_table(&config, "cumulants", q, t_cumulant),
        Command::Rtransform { vars, degree } => {
            let vars = lookup(&config, vars)?;
            let degree = degree_or_cap(&config, *degree)?;
            let series = r_transform(&config.functional, &vars, degree)?;
            Ok(Table::from_series("rtransform", &series))
        }
        Command::Boxconv { left, right, degree } => {
            if left.len() != right.len() {
                return Err(Failure::usage("--left and --right need the same number of variables"));
            }
            let (left, right) = (lookup(&config, left)?, lookup(&config, right)?);
            let degree = degree_or_cap(&config, *degree)?;
            let rl = r_transform(&config.functional, &left, degree)?;
            let rr = r_transform(&config.functional, &right, degree)?;
            Ok(Table::from_series("boxconv", &boxed_convolution(&rl, &rr)?))
        }
        Command::CheckFree { a, b, degree } => {
            let (a, b) = (lookup(&config, a)?, lookup(&config, b)?);
            let degree = degree_or_cap(&config, *degree)?;
            let report = check_freeness(&config.functional, &a, &b, degree)?;
            let mut table = Table::new("check-free");
            let witness = report.witness.as_ref().map(IndexWord::one_based).unwrap_or_default();
            table.push(Row::flag("check-free", serde_json::json!(witness), report.free));
            table.extra("free", serde_json::json!(report.free));
            table.extra("witness", report.witness.map(|w| serde_json::json!(w.one_based())).into());
            Ok(table)
        }
        Command::CheckEven { var, degree } => {
            let x = lookup_one(&config, var)?;
            let degree = degree_or_cap(&config, *degree)?;
            let even = check_even(&config.functional, &x, degree)?;
            let mut table = Table::new("check-even");
            table.push(Row::flag("check-even", serde_json::json!([]), even));
            table.extra("even", serde_json::json!(even));
            Ok(table)
        }
        Command::Compress { var, alpha, degree } => {
            let alpha = parse_rational(alpha.trim())
                .ok_or_else(|| Failure::usage(format!("--alpha {alpha:?} is not a rational p or p/q")))?;
            let x = lookup_one(&config, var)?;
            let degree = degree_or_cap(&config, *degree)?;
            if alpha == num_traits::Zero::zero() {
                return Err(Error::ZeroTrace.into());
            }
            let r = r_transform(&config.functional, std::slice::from_ref(&x), degree)?;
            Ok(Table::from_series("compress", &compress_r_transform(&r, &alpha)?))
        }
        Command::Sparsity { var, degree } => {
            let a = lookup_one(&config, var)?;
            let degree = degree_or_cap(&config, *degree)?;
            let report = free_family_sparsity(&config.functional, &a, degree)?;
            let mut table = Table::from_series("rtransform", &report.series);
            table.query = "sparsity".into();
            let mut checks = Vec::new();
            for c in &report.checks {
                let word = serde_json::json!(vec![1; c.degree]);
                table.push_scalar("sparsity-stated", &word, &c.stated);
                table.push_scalar("sparsity-exact", &word, &c.exact);
                table.push(Row::flag("sparsity-stated-holds", word.clone(), c.stated_holds()));
                table.push(Row::flag("sparsity-exact-holds", word, c.exact_holds()));
                checks.push(serde_json::json!({
                    "degree": c.degree,
                    "actual": c.actual.to_json(),
                    "stated": c.stated.to_json(),
                    "exact": c.exact.to_json(),
                    "stated_holds": c.stated_holds(),
                    "exact_holds": c.exact_holds(),
                }));
            }
            table.extra("holds", serde_json::json!(report.holds()));
            table.extra("exact_holds", serde_json::json!(report.exact_holds()));
            table.extra("checks", serde_json::Value::Array(checks));
            Ok(table)
        }
    }
}

fn nc_table(command: &NcCommand) -> Result<Table, Failure> {
    match command {
        NcCommand::List { n } => {
            let elements = enumerate_nc(*n)?;
            let mut table = Table::new("nc-list");
            for (i, pi) in elements.iter().enumerate() {
                table.push(Row {
                    query: "nc-list".into(),
                    word: serde_json::to_value(pi).expect("partitions serialize"),
                    entry: Some(i + 1),
                    value: pi.block_count().to_string(),
                });
            }
            Ok(table)
        }
        NcCommand::Mobius { n } => {
            if *n > DEFAULT_LATTICE_CAP {
                return Err(Error::CapExceeded { requested: *n, cap: DEFAULT_LATTICE_CAP }.into());
            }
            let lattice = NcLattice::get(*n)?;
            let mut table = Table::new("nc-mobius");
            for (i, theta) in lattice.elements().iter().enumerate() {
                for j in 0..lattice.len() {
                    if !lattice.leq_idx(i, j) {
                        continue;
                    }
                    let mu = lattice.mobius_idx(i, j);
                    if num_traits::Zero::is_zero(&mu) {
                        continue;
                    }
                    table.push(Row {
                        query: "nc-mobius".into(),
                        word: serde_json::to_value(theta).expect("partitions serialize"),
                        entry: Some(j + 1),
                        value: crate::rational::format_rational(&mu),
                    });
                }
            }
            Ok(table)
        }
    }
}

fn lookup(config: &Config, names: &[String]) -> Result<Vec<TVariable>, Failure> {
    names.iter().map(|n| lookup_one(config, n)).collect()
}

fn lookup_one(config: &Config, name: &str) -> Result<TVariable, Failure> {
    config
        .variable(name.trim())
        .cloned()
        .ok_or_else(|| Failure::usage(format!("unknown variable {name:?}")))
}

fn degree_or_cap(config: &Config, degree: Option<usize>) -> Result<usize, Failure> {
    match degree {
        Some(0) => Err(Failure::usage("--degree must be at least 1")),
        Some(d) if d > config.degree_cap => {
            Err(Error::CapExceeded { requested: d, cap: config.degree_cap }.into())
        }
        Some(d) => Ok(d),
        None => Ok(config.degree_cap),
    }
}

type WordFn = fn(&crate::scalar_space::MomentFunctional, &[TVariable], &[usize]) -> crate::Result<crate::BScalar>;

fn word_table(config: &Config, query: &str, q: &WordQuery, f: WordFn) -> Result<Table, Failure> {
    let vars = lookup(config, &q.vars)?;
    let degree = degree_or_cap(config, Some(q.degree))?;
    let words = match &q.word {
        Some(letters) => {
            let w = IndexWord::from_one_based(letters)
                .ok_or_else(|| Failure::usage("--word letters are 1-based"))?;
            if w.len() != degree {
                return Err(Failure::usage(format!("--word has length {}, expected {degree}", w.len())));
            }
            vec![w]
        }
        None => IndexWord::all(vars.len(), degree).into_iter().filter(|w| w.len() == degree).collect(),
    };
    let mut table = Table::new(query);
    for w in &words {
        let value = f(&config.functional, &vars, w.letters())?;
        table.push_scalar(query, &serde_json::json!(w.one_based()), &value);
    }
    Ok(table)
}

impl Table {
    fn from_series(query: &str, series: &BSeries) -> Table {
        let mut table = Table::new(query);
        for (w, c) in series.dense() {
            table.push_scalar(query, &serde_json::json!(w.one_based()), &c);
        }
        table.extra("series", series.to_json());
        table
    }
}
