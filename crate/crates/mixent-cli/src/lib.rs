//! Library backing the `mixent` binary: the JSON state-file format, the
//! command implementations, and the self-check suites.
//!
//! The binary itself is a thin argument-parsing shell; everything it does is
//! reachable from here so the behavior can be tested directly.

pub mod commands;
pub mod statefile;
pub mod verify;

pub use commands::{
    cmd_concurrence, cmd_omega_c, cmd_sweep, format_concurrence_report, format_omega_report,
    format_sweep_csv, MethodChoice,
};
pub use statefile::{load_state, realize, LoadedState, MemberSpec, StateSpec, SubspaceSpec};
pub use verify::run_verify;

/// Everything that can go wrong in a command, each variant mapped to a
/// distinct process exit code so scripts can branch on failures.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Exit 1: a self-check suite found a counterexample.
    #[error("verification failed\n{0}")]
    VerifyFailed(String),
    /// Exit 2: the input file could not be read.
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    /// Exit 2: the input file is not valid JSON for any known state kind.
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },
    /// Exit 3: the file parsed but describes something that is not a state
    /// (non-normalized amplitudes, bad weights, a matrix that is not a
    /// density matrix), or a computation rejected its inputs.
    #[error("invalid state: {0}")]
    State(#[from] mixent::Error),
    /// Exit 4: a closed-form answer was requested but disagrees with (or was
    /// rejected in favor of) the independent bisection.
    #[error("closed form disagrees with bisection (closed {closed:?}, bisection {bisect:.12})")]
    Disagreement { closed: Option<f64>, bisect: f64 },
    /// Exit 5: `--method closed` on a state kind with no closed form.
    #[error("no closed-form solver applies to a {kind} state; use --method bisect or auto")]
    ClosedUnavailable { kind: &'static str },
    /// Exit 6: the output file could not be written.
    #[error("cannot write {path}: {source}")]
    Out {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed(_) => 1,
            CliError::Io { .. } | CliError::Parse { .. } => 2,
            CliError::State(_) => 3,
            CliError::Disagreement { .. } => 4,
            CliError::ClosedUnavailable { .. } => 5,
            CliError::Out { .. } => 6,
        }
    }
}
