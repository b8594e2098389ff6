use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use copolab::{run, RunOptions};

#[derive(Parser)]
#[command(name = "copolab", version, about = "Disordered copolymer experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration; a built-in default is used when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Root seed, overriding the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory, overriding the configuration.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Run only the exact (non-statistical) checks.
    #[arg(long, global = true)]
    fast: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Quenched free energy on a (lambda, h) grid.
    FreeEnergy,
    /// Critical point by bisection for each lambda.
    HcCurve,
    /// Weak-coupling rescaled free energies against the continuum model.
    Collapse,
    /// The five finite-volume free energies linking discrete and continuum.
    PipelineChain,
    /// Excursion decompositions of the regenerative set.
    RegensetSample,
    /// Discrete against continuum return laws.
    RnCheck,
    /// The invariant suite.
    Validate,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::FreeEnergy => "free-energy",
            Command::HcCurve => "hc-curve",
            Command::Collapse => "collapse",
            Command::PipelineChain => "pipeline-chain",
            Command::RegensetSample => "regenset-sample",
            Command::RnCheck => "rn-check",
            Command::Validate => "validate",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("resource limit: cannot start {n} threads: {e}");
            return ExitCode::from(3);
        }
    }
    let opts = RunOptions {
        config: cli.config,
        seed: cli.seed,
        out: cli.out,
        fast: cli.fast,
        dry: false,
    };
    match run(cli.command.name(), &opts) {
        Ok(rec) => {
            let dir = rec.config.output.dir.display();
            eprintln!(
                "{}: wrote {} table(s) to {dir} in {:.1} s",
                rec.experiment,
                rec.tables.len(),
                rec.wall_time_s
            );
            if rec.failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                for f in &rec.failures {
                    eprintln!("FAILED {f}");
                }
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
