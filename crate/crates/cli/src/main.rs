use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use twistcode_cli::{
    check_flat_report, distance_report, export_matrices, iso_report, parse_code_spec,
    parse_twist_pool, run_report, search_twists, spec::parse_transpose, to_json, CliError,
    CodeSpec, ExportTarget, Pool, SearchOptions,
};
use twistcode_core::{DistanceOptions, FiberAction};

#[derive(Parser)]
#[command(
    name = "twistcode",
    version,
    about = "Twisted fiber-bundle CSS codes over F2[G]"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Code spec file (TOML)
    spec: PathBuf,
    /// Distance search weight cap
    #[arg(long)]
    cap: Option<usize>,
    /// Certify distances by enumerating the whole kernel when n <= 28
    #[arg(long)]
    full_enum: bool,
    /// Build the complex even if some twist is not flat
    #[arg(long)]
    allow_nonflat: bool,
    /// Transpose convention for the literal lifted-product check
    #[arg(long, value_parser = ["plain", "antipode"])]
    lp_transpose: Option<String>,
    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print wall-clock time to stderr
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum PoolArg {
    GroupScalars,
    LowWeight,
    File,
}

#[derive(Clone, Copy, ValueEnum)]
enum ActionArg {
    Left,
    Right,
}

#[derive(Subcommand)]
enum Command {
    /// Full report: parameters, distances, flatness and isomorphism checks
    Params(Common),
    /// Per-generator flatness verdicts
    CheckFlat(Common),
    /// Export a binary matrix as dense text
    Expand {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        target: ExportTarget,
    },
    /// Minimum distance only
    Distance(Common),
    /// Rank flat per-column twists by encoded dimension
    SearchTwists {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "group-scalars")]
        pool: PoolArg,
        /// Twist list for `--pool file`
        #[arg(long)]
        pool_file: Option<PathBuf>,
        /// Entry support bound for `--pool low-weight`
        #[arg(long, default_value_t = 1)]
        max_support: usize,
        #[arg(long, default_value_t = 4096)]
        max_candidates: usize,
        /// Fiber action of group-scalar twists
        #[arg(long, value_enum, default_value = "left")]
        action: ActionArg,
        /// Number of leading candidates that get a distance
        #[arg(long, default_value_t = 3)]
        top: usize,
        /// Number of candidates listed in the output
        #[arg(long, default_value_t = 20)]
        list: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check the chain isomorphism between twisted and untwisted complexes
    VerifyIso(Common),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        context: format!("reading {}", path.display()),
        source,
    })
}

fn load(common: &Common) -> Result<CodeSpec, CliError> {
    let mut spec = parse_code_spec(&read(&common.spec)?)?;
    if let Some(cap) = common.cap {
        spec.options.weight_cap = cap;
    }
    spec.options.full_enumeration |= common.full_enum;
    spec.options.allow_nonflat |= common.allow_nonflat;
    if let Some(mode) = &common.lp_transpose {
        spec.options.lp_transpose = parse_transpose(mode).map_err(CliError::Validation)?;
    }
    Ok(spec)
}

fn emit(common: &Common, text: &str) -> Result<(), CliError> {
    match &common.out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            context: format!("writing {}", path.display()),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Runs a command; `Ok(false)` means output was produced but the CSS
/// condition failed.
fn run(command: Command) -> Result<bool, CliError> {
    match command {
        Command::Params(c) => {
            let report = run_report(&load(&c)?)?;
            emit(&c, &report.to_json())?;
            Ok(report.css_ok)
        }
        Command::Distance(c) => {
            let report = distance_report(&load(&c)?)?;
            emit(&c, &report.to_json())?;
            Ok(report.css_ok)
        }
        Command::CheckFlat(c) => {
            emit(&c, &to_json(&check_flat_report(&load(&c)?)?))?;
            Ok(true)
        }
        Command::VerifyIso(c) => {
            emit(&c, &to_json(&iso_report(&load(&c)?)?))?;
            Ok(true)
        }
        Command::Expand { common, target } => {
            emit(&common, &export_matrices(&load(&common)?, target)?)?;
            Ok(true)
        }
        Command::SearchTwists {
            common,
            pool,
            pool_file,
            max_support,
            max_candidates,
            action,
            top,
            list,
            seed,
        } => {
            let spec = load(&common)?;
            let pool = match pool {
                PoolArg::GroupScalars => Pool::GroupScalars,
                PoolArg::LowWeight => Pool::LowWeight { max_support },
                PoolArg::File => {
                    let path = pool_file.ok_or_else(|| {
                        CliError::Validation("--pool file needs --pool-file".into())
                    })?;
                    Pool::Explicit(parse_twist_pool(&read(&path)?, &spec)?)
                }
            };
            let options = SearchOptions {
                pool,
                max_candidates,
                seed,
                top,
                action: match action {
                    ActionArg::Left => FiberAction::Left,
                    ActionArg::Right => FiberAction::Right,
                },
                distance: DistanceOptions {
                    weight_cap: spec.options.weight_cap,
                    budget: spec.options.budget,
                    full_enumeration: spec.options.full_enumeration,
                },
                ..SearchOptions::default()
            };
            let outcome = search_twists(&spec, &options)?;
            emit(&common, &to_json(&outcome.to_value(list)))?;
            Ok(true)
        }
    }
}

fn timing_requested(command: &Command) -> bool {
    match command {
        Command::Params(c)
        | Command::CheckFlat(c)
        | Command::Distance(c)
        | Command::VerifyIso(c) => c.timing,
        Command::Expand { common, .. } | Command::SearchTwists { common, .. } => common.timing,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let timing = timing_requested(&cli.command);
    let start = Instant::now();
    let result = run(cli.command);
    if timing {
        eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: CSS condition fails for this spec");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
