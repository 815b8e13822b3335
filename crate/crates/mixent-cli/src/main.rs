use clap::{Parser, Subcommand};
use mixent_cli::{cmd_concurrence, cmd_omega_c, cmd_sweep, load_state, run_verify, MethodChoice};
use std::path::PathBuf;

/// Two-qubit entanglement under mixing with the maximally mixed state.
///
/// States are JSON files tagged by "kind": pure, ensemble, rank2, rank4, or
/// dense.  See the crate README for the exact format.
#[derive(Parser)]
#[command(name = "mixent", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Concurrence of a state, with its four spectrum ingredients.
    Concurrence {
        /// State file (JSON).
        #[arg(long)]
        state: PathBuf,
    },
    /// Critical mixing weight: the smallest maximally-mixed admixture that
    /// leaves the state separable.
    OmegaC {
        /// State file (JSON).
        #[arg(long)]
        state: PathBuf,
        /// Solution route.
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodChoice,
        /// Bisection tolerance (used by the bisect and auto routes).
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Concurrence and separability along the mixing path, as CSV.
    Sweep {
        /// State file (JSON).
        #[arg(long)]
        state: PathBuf,
        /// First mixing weight.
        #[arg(long, default_value_t = 0.0)]
        from: f64,
        /// Last mixing weight (inclusive).
        #[arg(long, default_value_t = 1.0)]
        to: f64,
        /// Number of grid points.
        #[arg(long, default_value_t = 11)]
        steps: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay every closed form against an independent numerical route on
    /// random states; nonzero exit and a serialized counterexample on failure.
    Verify {
        /// Cases per random suite.
        #[arg(long, default_value_t = 40)]
        trials: usize,
        /// Seed for the deterministic random stream.
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn run(cli: Cli) -> Result<String, mixent_cli::CliError> {
    match cli.command {
        Command::Concurrence { state } => cmd_concurrence(&load_state(&state)?),
        Command::OmegaC { state, method, tol } => cmd_omega_c(&load_state(&state)?, method, tol),
        Command::Sweep {
            state,
            from,
            to,
            steps,
            out,
        } => cmd_sweep(&load_state(&state)?, from, to, steps, out.as_deref()),
        Command::Verify { trials, seed } => run_verify(trials, seed),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(output) => print!("{output}"),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
