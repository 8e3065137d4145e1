use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args as ClapArgs, Parser, Subcommand};

mod commands;
mod config;

/// Finite-horizon dynamics of weighted backward shifts.
#[derive(Debug, Parser)]
#[command(name = "ultrashift", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    args: Args,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Write the first weights as CSV (n, w_n, log2_wn).
    Gen,
    /// Run the classifiers and print one JSON report.
    Classify,
    /// Run identity suites or replay a witness bundle.
    Verify,
    /// CSV of ‖S^n x‖ along a subsequence.
    Orbit,
    /// CSV of log2 M_1^n and the windowed minimum of log2 M_i^n.
    Scan,
    /// Build a blocker vector and print it as JSON.
    Witness,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Gen => "gen",
            Command::Classify => "classify",
            Command::Verify => "verify",
            Command::Orbit => "orbit",
            Command::Scan => "scan",
            Command::Witness => "witness",
        }
    }
}

#[derive(Debug, Clone, Default, ClapArgs)]
pub struct Args {
    /// TOML run configuration; flags override its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// literal, block or diamond.
    #[arg(long, global = true)]
    pub family: Option<String>,
    /// Comma-separated literal weights, e.g. "2,1/4,1".
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub values: Option<String>,
    /// Literal weights from a file (a `gen` CSV or one value per line).
    #[arg(long, global = true)]
    pub values_file: Option<PathBuf>,
    /// Continuation of a literal list: ones or repeat.
    #[arg(long, global = true)]
    pub tail: Option<String>,
    /// Number of weights materialised.
    #[arg(long, global = true)]
    pub horizon: Option<usize>,
    /// Largest starting index in infimum scans.
    #[arg(long, global = true)]
    pub imax: Option<usize>,
    #[arg(long, global = true)]
    pub kmax: Option<usize>,
    #[arg(long, global = true)]
    pub mmax: Option<u32>,
    /// c0, l1, l2, l<p>.
    #[arg(long, global = true)]
    pub space: Option<String>,
    /// block, diamond, full, diamond-scaled:<m>, or a list such as "1,5,21".
    #[arg(long, global = true)]
    pub nk: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON instead of CSV for gen, scan and orbit.
    #[arg(long, global = true)]
    pub json: bool,
    /// hypercyclic, mixing, ultra, strong_necessary, strong_sufficient or all.
    #[arg(long, global = true)]
    pub checks: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub growth_log2: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub decay_log2: Option<f64>,
    #[arg(long, global = true)]
    pub tail_window: Option<usize>,
    /// diamond or reciprocal.
    #[arg(long, global = true)]
    pub sh_profile: Option<String>,
    /// Comma-separated tolerances for strong_sufficient.
    #[arg(long, global = true)]
    pub eps: Option<String>,
    /// Comma-separated index caps N for strong_sufficient.
    #[arg(long, global = true)]
    pub caps: Option<String>,
    /// diamond, block, formula, lemma.
    #[arg(long, global = true)]
    pub suite: Option<String>,
    /// Witness bundle to replay (verify).
    #[arg(long, global = true)]
    pub witness: Option<PathBuf>,
    /// Sparse vector JSON (orbit).
    #[arg(long, global = true)]
    pub vector: Option<PathBuf>,
    /// uh or sh (witness).
    #[arg(long, global = true)]
    pub kind: Option<String>,
    /// Samples for formula/lemma suites, pairs for the uh blocker.
    #[arg(long, global = true)]
    pub count: Option<usize>,
    /// Largest exponent for the sh blocker.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

/// 2 for horizon overruns, 1 for witness searches that came up empty, 3 otherwise.
fn exit_code(err: &anyhow::Error) -> u8 {
    use ultrashift_core::Error as E;
    match err.chain().find_map(|e| e.downcast_ref::<E>()) {
        Some(E::HorizonExceeded { .. }) => 2,
        Some(E::NoPairsFound { .. } | E::PreconditionUnmet { .. }) => 1,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = config::Settings::resolve(&cli.args, cli.command.name()).and_then(|s| match cli.command {
        Command::Gen => commands::gen(&s),
        Command::Classify => commands::classify(&s),
        Command::Verify => commands::verify(&s, &cli.args),
        Command::Orbit => commands::orbit(&s, &cli.args),
        Command::Scan => commands::scan(&s),
        Command::Witness => commands::witness(&s, &cli.args),
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
