//! `critloc`: critical loci of pairs of multi-view projection setups.
//!
//! Exit status: 0 success, 2 usage or input error, 3 domain failure (point
//! off the locus, failed verification check, ...). Results go to stdout,
//! diagnostics to stderr.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "critloc", version, about = "Critical loci of pairs of multi-view projection setups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    X,
    Y,
    U,
}

#[derive(clap::Args, Clone, Debug)]
pub struct FieldArgs {
    /// Coefficient field: Q or GFp (overrides the setup file's "field").
    #[arg(long)]
    pub field: Option<String>,
    /// Prime used by GFp.
    #[arg(long, default_value_t = critloc::DEFAULT_PRIME)]
    pub prime: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Build I(X), I(Y) or the unified ideal of a setup and write it as JSON.
    BuildIdeal {
        #[arg(long)]
        setup: PathBuf,
        #[arg(long, value_enum, ignore_case = true)]
        side: SideArg,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        json: bool,
    },
    /// Expected (formula) and actual (Gröbner) dimension and degree of an ideal file.
    DimDegree {
        /// Ideal JSON file.
        ideal: PathBuf,
        #[command(flatten)]
        field: FieldArgs,
        /// Seed for the slicing forms of bihomogeneous ideals.
        #[arg(long, default_value_t = critloc::verify::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Conjugates of a point: the fibre of a projection of the unified locus.
    Fiber {
        #[arg(long)]
        setup: PathBuf,
        /// Comma-separated homogeneous coordinates, e.g. "1,0,-1/2,3".
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value = "forward")]
        direction: String,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        json: bool,
    },
    /// Run a bundled verification suite: two-views, three-views, formulas, properties.
    Verify {
        suite: String,
        #[arg(long, default_value_t = critloc::verify::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Check I(X_r) ⊆ I(X_n) : (complementary center ideals) for a subset of views.
    Nesting {
        #[arg(long)]
        setup: PathBuf,
        /// Comma-separated 1-based view indices, e.g. "1,2".
        #[arg(long)]
        subset: String,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        json: bool,
    },
    /// Write a seeded random setup with integer entries.
    RandomSetup {
        #[arg(long)]
        k: usize,
        /// Comma-separated target dimensions h_j, e.g. "2,2,1".
        #[arg(long)]
        h: String,
        #[arg(long, default_value_t = critloc::verify::DEFAULT_SEED)]
        seed: u64,
        /// Entries are drawn from [-bound, bound].
        #[arg(long, default_value_t = 10)]
        bound: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::BuildIdeal { setup, side, out, field, json } => commands::build_ideal(&setup, side, out.as_deref(), &field, json),
        Command::DimDegree { ideal, field, seed, json } => commands::dim_degree(&ideal, &field, seed, json),
        Command::Fiber { setup, point, direction, field, json } => commands::fiber(&setup, &point, &direction, &field, json),
        Command::Verify { suite, seed, json } => commands::verify(&suite, seed, json),
        Command::Nesting { setup, subset, field, json } => commands::nesting(&setup, &subset, &field, json),
        Command::RandomSetup { k, h, seed, bound, out } => commands::random_setup(k, &h, seed, bound, out.as_deref()),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
