use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use x0maps::cli::{self, DataOptions, LevelRange, Outcome, EXIT_USAGE};
use x0maps::report::Format;

/// Morphisms from X_0(p) and degree-d points, reproduced from bundled data.
///
/// Exit codes: 0 success, 1 verdict mismatch, 2 missing data, 3 usage error.
#[derive(Parser)]
#[command(name = "x0maps", version)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DataArgs {
    /// Bundle directory (defaults to the bundle shipped with the crate).
    #[arg(long)]
    data_dir: Option<PathBuf>,
    /// Alternative literature-facts file.
    #[arg(long)]
    facts: Option<PathBuf>,
    /// Alternative kernel-exponent file (JSON Lines).
    #[arg(long)]
    kernel_data: Option<PathBuf>,
    /// Never contact the database; use the bundle and cache only.
    #[arg(long)]
    offline: bool,
    /// Query cache directory (default: $X0MAPS_CACHE_DIR).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

impl From<DataArgs> for DataOptions {
    fn from(a: DataArgs) -> Self {
        DataOptions {
            data_dir: a.data_dir,
            facts: a.facts,
            kernel_data: a.kernel_data,
            offline: a.offline,
            cache_dir: a.cache_dir,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// ψ, ν₂, ν₃, ν∞, the genus of X_0(N) and, at primes, of X_0^+(N).
    Genus {
        /// `N` or an inclusive range `A..B`.
        range: LevelRange,
        #[arg(long, default_value = "md")]
        format: Format,
    },
    /// Classify the morphisms X_0(p) → Y, g(Y) ≥ 2, at every prime in range.
    ClassifyMorphisms {
        range: LevelRange,
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value = "md")]
        format: Format,
        /// Append the table of candidates settled by the genus-2 tables.
        #[arg(long)]
        show_residual: bool,
    },
    /// Degree-d point density at every prime in range, with evidence.
    ClassifyDegree {
        range: LevelRange,
        #[arg(long, short = 'd', default_value_t = 6)]
        degree: u32,
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value = "md")]
        format: Format,
        /// Compare the infinite set with the known degree-6 classification.
        #[arg(long)]
        expect_theorem17: bool,
    },
    /// How many primes in range have J_0(p) ~ A⁺ ⊕ A⁻ ⊕ A with A^± simple
    /// and dim A ≤ 2.
    Thm13Stats {
        range: LevelRange,
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value = "md")]
        format: Format,
    },
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Genus { range, format } => cli::cmd_genus(range, format),
        Command::ClassifyMorphisms { range, data, format, show_residual } => {
            cli::cmd_classify_morphisms(range, &data.into(), format, show_residual)
        }
        Command::ClassifyDegree { range, degree, data, format, expect_theorem17 } => {
            cli::cmd_classify_degree(range, degree, &data.into(), format, expect_theorem17)
        }
        Command::Thm13Stats { range, data, format } => cli::cmd_thm13_stats(range, &data.into(), format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --jobs: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    }
    let out = run(cli);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
