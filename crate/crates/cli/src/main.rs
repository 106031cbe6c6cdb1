//! `hms`: command-line access to the Hilbert modular surface invariants.

mod commands;
mod config;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::CliError;
use config::{Format, Mode, Overrides, RunConfig, ZetaArg, CACHE_ENV};

#[derive(Parser, Debug)]
#[command(name = "hms", version, about = "Invariants of Hilbert modular surfaces X0+(p)")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// File of key=value lines (mode, strict_n, precision, cache, format, zeta).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,
    #[arg(long, global = true)]
    strict_n: bool,
    /// Bits of precision for the certified bounds (at least 128).
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Class-number cache file; overrides $HMS_CACHE.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Which zeta value the bound pipeline uses.
    #[arg(long, global = true, value_enum)]
    zeta: Option<ZetaArg>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fundamental unit and small primes of Q(sqrt D).
    Field {
        #[arg(long)]
        disc: i64,
        #[arg(long, default_value_t = 13)]
        primes_up_to: u64,
    },
    /// h(D) for D < 0, narrow h+(D) for D > 0.
    Classnumber {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// zeta_E(-1) and the covolume.
    Zeta {
        #[arg(long)]
        disc: i64,
    },
    /// Resolution cycle of the cusp and the local Chern number c.
    Cusp {
        #[arg(long)]
        disc: i64,
    },
    /// Elliptic points of PSL_2(O) and, with a prime, of (W) Gamma_0(p).
    Elliptic {
        #[arg(long)]
        disc: i64,
        #[arg(long)]
        prime_norm: Option<u64>,
        #[arg(long)]
        height: Option<u32>,
    },
    /// Chern numbers and verdict for X0+(p) with N(p) = q.
    Classify {
        #[arg(long)]
        disc: i64,
        #[arg(long)]
        prime_norm: u64,
    },
    /// Regenerate the general-type table and compare with the published one.
    Table {
        #[arg(long, default_value_t = 853)]
        dmax: i64,
        #[arg(long, default_value_t = 200)]
        n_max: u64,
        /// Write the discrepancy report (JSON) here.
        #[arg(long)]
        diff: Option<PathBuf>,
    },
    /// Centre of a vertex set in a tree given as an edge list.
    TreeCenter {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        set: String,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Field { .. } => "field",
            Command::Classnumber { .. } => "classnumber",
            Command::Zeta { .. } => "zeta",
            Command::Cusp { .. } => "cusp",
            Command::Elliptic { .. } => "elliptic",
            Command::Classify { .. } => "classify",
            Command::Table { .. } => "table",
            Command::TreeCenter { .. } => "tree-center",
        }
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    let g = cli.global;
    let overrides = Overrides {
        mode: g.mode,
        strict_n: g.strict_n,
        precision: g.precision,
        cache: g.cache,
        format: g.format,
        zeta: g.zeta,
    };
    let cfg =
        RunConfig::resolve(g.config.as_deref(), std::env::var(CACHE_ENV).ok(), &overrides).map_err(CliError::Input)?;
    let name = cli.command.name();
    let artifact = match cli.command {
        Command::Field { disc, primes_up_to } => commands::field(disc, primes_up_to),
        Command::Classnumber { disc } => commands::classnumber(&cfg, disc),
        Command::Zeta { disc } => commands::zeta(disc),
        Command::Cusp { disc } => commands::cusp(disc),
        Command::Elliptic { disc, prime_norm, height } => commands::elliptic(&cfg, disc, prime_norm, height),
        Command::Classify { disc, prime_norm } => commands::classify_cmd(&cfg, disc, prime_norm),
        Command::Table { dmax, n_max, diff } => commands::table(&cfg, dmax, n_max, diff.as_deref()),
        Command::TreeCenter { input, set, dot } => commands::tree_center_cmd(&input, &set, dot.as_deref()),
    }?;
    Ok(render::emit(&cfg, name, artifact))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(text) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).is_err() {
                return ExitCode::from(3);
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
