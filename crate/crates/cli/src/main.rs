use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use twistcover::{cmd_build, cmd_ffcheck, cmd_rank, cmd_verify, Format, DEFAULT_TRIALS};

#[derive(Parser)]
#[command(
    name = "twistcover",
    version,
    about = "Twists of Galois covers: construction, verification, rank predictions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Cover specification file (TOML, or JSON by extension).
    #[arg(long)]
    spec: PathBuf,
    /// Override the number of copies m.
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Write the cover, product, quotient and twist presentations and the points.
    Build {
        #[command(flatten)]
        common: Common,
        /// Directory receiving construction.txt and construction.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every symbolic check and print the verification report.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Predict the Mordell-Weil rank from the spec file's descriptor block.
    Rank {
        #[command(flatten)]
        common: Common,
    },
    /// Check the twist points on random finite-field samples.
    Ffcheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "7,11,13", value_delimiter = ',')]
        primes: Vec<u64>,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    let code = match &cli.command {
        Command::Build { common, out: dir } => {
            cmd_build(&common.spec, common.m, dir.as_deref(), common.format, &mut out, &mut err)
        }
        Command::Verify { common } => cmd_verify(&common.spec, common.m, common.format, &mut out, &mut err),
        Command::Rank { common } => cmd_rank(&common.spec, common.m, common.format, &mut out, &mut err),
        Command::Ffcheck { common, primes, trials, seed } => {
            cmd_ffcheck(&common.spec, common.m, primes, *trials, *seed, common.format, &mut out, &mut err)
        }
    };
    ExitCode::from(code)
}
