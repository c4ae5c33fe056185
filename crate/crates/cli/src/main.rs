//! `locnash`: periods, classification, addition-theorem certificates and
//! Weierstrass identity checks from the command line.
//!
//! Exit codes: 0 success, 1 negative answer to a positive check
//! (not isomorphic, no relation found, identity check failed), 2 parse or
//! usage error, 3 numeric failure, 4 undetermined.

mod commands;
mod config;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use config::{ConfigFile, RunConfig, CONFIG_ENV};

#[derive(Parser, Debug)]
#[command(
    name = "locnash",
    version,
    about = "Abelian locally Nash structures: periods, classification, relations"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalArgs {
    /// Config file with RunConfig fields (structured text).
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    max_degree: Option<u32>,
    #[arg(long, global = true)]
    max_denominator: Option<u64>,
    #[arg(long, global = true)]
    n_samples: Option<usize>,
    #[arg(long, global = true)]
    trunc_radius_factor: Option<f64>,
    #[arg(long, global = true)]
    target_abs_err: Option<f64>,
    /// Output file; reports and CSV go to stdout otherwise.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a Weierstrass function or a descriptor's map on a square grid.
    Eval(commands::EvalArgs),
    /// Period group of a descriptor.
    Periods { descriptor: PathBuf },
    /// Canonical form (dimension 1) or family (dimension 2).
    Classify { descriptor: PathBuf },
    /// Isomorphism verdict for two descriptors of the same dimension.
    Compare { first: PathBuf, second: PathBuf },
    /// Numerical addition-theorem certificates.
    VerifyAat { descriptor: PathBuf },
    /// Quasi-periodicity, coset-sum, conjugation and scaling checks for a lattice.
    CheckIdentities {
        #[arg(long)]
        lattice: String,
    },
}

fn run_config(g: &GlobalArgs) -> Result<RunConfig, commands::CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &g.config {
        ConfigFile::load(path)
            .map_err(commands::CliError::Parse)?
            .apply(&mut cfg);
    }
    macro_rules! flag {
        ($($f:ident => $field:ident),*) => { $( if let Some(v) = g.$f { cfg.$field = v; } )* };
    }
    flag!(tol => tol, seed => seed, max_denominator => max_denominator, n_samples => n_samples,
          trunc_radius_factor => trunc_radius_factor, target_abs_err => target_abs_err);
    if g.max_degree.is_some() {
        cfg.max_degree = g.max_degree;
    }
    if g.out.is_some() {
        cfg.output_path = g.out.clone();
    }
    cfg.validate().map_err(commands::CliError::Usage)?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run_config(&cli.global).and_then(|cfg| match &cli.command {
        Command::Eval(args) => commands::eval(args, &cfg),
        Command::Periods { descriptor } => commands::periods(descriptor, &cfg),
        Command::Classify { descriptor } => commands::classify(descriptor, &cfg),
        Command::Compare { first, second } => commands::compare(first, second, &cfg),
        Command::VerifyAat { descriptor } => commands::verify_aat(descriptor, &cfg),
        Command::CheckIdentities { lattice } => commands::check_identities(lattice, &cfg),
    });
    match result {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
