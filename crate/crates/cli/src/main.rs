use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

/// Exact checks for Cuntz semigroup models: axioms, Edwards' condition,
/// refinement of functionals, infima with idempotents and dual-cone identities.
#[derive(Parser)]
#[command(name = "cu-kit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// O5, O6, O7 and monoid sanity, exhaustively in scope.
    Axioms(Common),
    /// Edwards' condition and its dual on sampled or listed instances.
    Edwards(EdwardsArgs),
    /// Riesz refinement of sampled functional quadruples with equal sums.
    Refine(Common),
    /// Infima with idempotents, the ρ_w identities and ideal intersections.
    Inf(Common),
    /// Lattice identities of the dual cone at sampled functionals.
    Dual(Common),
}

#[derive(Args, Clone)]
pub struct Common {
    /// `vector:k`, `lsc:<poset file>` or a model file.
    #[arg(long)]
    pub model: String,
    /// Coordinate cap for structured models.
    #[arg(long)]
    pub cap: Option<u64>,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone)]
pub struct EdwardsArgs {
    #[command(flatten)]
    pub common: Common,
    /// JSON array of `{"x", "y", "lambda"}` instances checked after the samples.
    #[arg(long)]
    pub pairs: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = match std::env::var("CU_KIT_THREADS") {
        Ok(v) => match v.parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => {
                eprintln!("error: CU_KIT_THREADS must be a positive integer, got {v:?}");
                return ExitCode::from(2);
            }
        },
        Err(_) => 0,
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let (common, outcome) = pool.install(|| match &cli.command {
        Command::Axioms(c) => (c, commands::axioms(c)),
        Command::Edwards(a) => (&a.common, commands::edwards(a)),
        Command::Refine(c) => (c, commands::refine(c)),
        Command::Inf(c) => (c, commands::inf(c)),
        Command::Dual(c) => (c, commands::dual(c)),
    });
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = serde_json::to_string_pretty(&outcome.report).expect("report serializes") + "\n";
    match &common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    eprintln!("{}", outcome.summary);
    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
