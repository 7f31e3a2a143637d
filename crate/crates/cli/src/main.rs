use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use valg_cli::{execute, Command, Format, JobSpec};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Check,
    Build,
    Twist,
    Verify,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Fmt {
    Text,
    Json,
}

/// Vertex algebras and twisted modules from vertex algebroids, in exact
/// rational arithmetic.
#[derive(Debug, Parser)]
#[command(name = "valg", version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// Algebroid definition (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Largest degree, in units of 1/T.
    #[arg(long, default_value_t = 4)]
    max_degree: i64,
    /// Fiber to induce from; the trivial fiber when the file lists none.
    #[arg(long, default_value_t = 0)]
    fiber: usize,
    /// Jacobi indices range over -P..=P; negative for an empty grid.
    #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
    grid: i64,
    #[arg(long, value_enum, default_value_t = Fmt::Text)]
    format: Fmt,
    /// Seed for sampled grids.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Grids with more points are sampled down to this size.
    #[arg(long, default_value_t = 729)]
    sample_limit: usize,
    /// List basis monomials of every slice.
    #[arg(long)]
    basis: bool,
}

fn main() -> anyhow::Result<()> {
    let args = Args::parse();
    let command = match args.command {
        Cmd::Check => Command::Check,
        Cmd::Build => Command::Build,
        Cmd::Twist => Command::Twist,
        Cmd::Verify => Command::Verify,
    };
    let mut job = JobSpec::new(command, args.input, args.max_degree);
    job.fiber = args.fiber;
    job.grid = args.grid;
    job.format = match args.format {
        Fmt::Text => Format::Text,
        Fmt::Json => Format::Json,
    };
    job.seed = args.seed;
    job.sample_limit = args.sample_limit;
    job.dump_basis = args.basis;
    let (text, code) = execute(&job);
    print!("{text}");
    std::process::exit(code);
}
