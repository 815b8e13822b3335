//! Implementations of the four subcommands, kept apart from argument
//! parsing so they can be driven directly by tests.
//!
//! Report numbers are printed with twelve digits after the decimal point:
//! comfortably inside f64 precision for these quantities, and coarse enough
//! that reruns on different machines produce identical bytes.

use crate::statefile::LoadedState;
use crate::CliError;
use mixent::entanglement::{concurrence, concurrence_pure, ConcurrenceValue};
use mixent::omega::{
    omega_c_bisect, omega_c_pure, omega_c_rank2, omega_c_rank4, sweep, Method, OmegaResult,
    SweepPoint,
};
use std::path::Path;

/// How `omega-c` should obtain its answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodChoice {
    /// Closed form where the state's structure allows it, bisection otherwise.
    Auto,
    /// Closed form, cross-checked against bisection; error if neither closed
    /// route applies or the two disagree beyond 1e-6.
    Closed,
    /// Bisection on the concurrence sign change only.
    Bisect,
}

pub fn format_concurrence_report(c: &ConcurrenceValue) -> String {
    format!(
        "C = {:.12}\nlambdas = [{:.12}, {:.12}, {:.12}, {:.12}]\n",
        c.value, c.lambdas[0], c.lambdas[1], c.lambdas[2], c.lambdas[3]
    )
}

pub fn format_omega_report(r: &OmegaResult) -> String {
    let tag = match r.branch {
        Some(branch) => format!("{}, {}", r.method, branch),
        None => r.method.to_string(),
    };
    format!(
        "omega_c = {:.12} ({tag})\nresidual = {:.12}\n",
        r.omega_c, r.residual
    )
}

pub fn format_sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from("omega,concurrence,separable\n");
    for p in points {
        out.push_str(&format!(
            "{:.12},{:.12},{}\n",
            p.omega, p.concurrence, p.separable
        ));
    }
    out
}

/// Concurrence of the state itself (no mixing), with the four spectrum
/// ingredients it was built from.
pub fn cmd_concurrence(state: &LoadedState) -> Result<String, CliError> {
    let rho = state.density()?;
    Ok(format_concurrence_report(&concurrence(&rho)))
}

fn solve_closed(state: &LoadedState) -> Result<OmegaResult, CliError> {
    match state {
        LoadedState::Pure(psi) => Ok(omega_c_pure(concurrence_pure(psi))?),
        LoadedState::Rank2(family) => Ok(omega_c_rank2(family)?),
        LoadedState::Rank4(family) => Ok(omega_c_rank4(family)?),
        other => Err(CliError::ClosedUnavailable { kind: other.kind() }),
    }
}

/// The critical mixing weight by the requested route.
pub fn solve_omega(
    state: &LoadedState,
    method: MethodChoice,
    tolerance: f64,
) -> Result<OmegaResult, CliError> {
    match method {
        MethodChoice::Bisect => Ok(omega_c_bisect(&state.density()?, tolerance)?),
        MethodChoice::Auto => match state {
            LoadedState::Ensemble(rho) | LoadedState::Dense(rho) => {
                Ok(omega_c_bisect(rho, tolerance)?)
            }
            structured => solve_closed(structured),
        },
        MethodChoice::Closed => {
            let closed = solve_closed(state)?;
            let bisect = omega_c_bisect(&state.density()?, 1e-9)?;
            if closed.method == Method::Bisection {
                // The rank-4 solver already rejected its own closed form.
                return Err(CliError::Disagreement {
                    closed: None,
                    bisect: bisect.omega_c,
                });
            }
            if (closed.omega_c - bisect.omega_c).abs() > 1e-6 {
                return Err(CliError::Disagreement {
                    closed: Some(closed.omega_c),
                    bisect: bisect.omega_c,
                });
            }
            Ok(closed)
        }
    }
}

pub fn cmd_omega_c(
    state: &LoadedState,
    method: MethodChoice,
    tolerance: f64,
) -> Result<String, CliError> {
    Ok(format_omega_report(&solve_omega(state, method, tolerance)?))
}

/// Concurrence and separability along the mixing path.  With `out` the CSV
/// goes to that file and a one-line confirmation is returned; without it the
/// CSV itself is returned for stdout.
pub fn cmd_sweep(
    state: &LoadedState,
    from: f64,
    to: f64,
    steps: usize,
    out: Option<&Path>,
) -> Result<String, CliError> {
    let rho = state.density()?;
    let points = sweep(&rho, from, to, steps)?;
    let csv = format_sweep_csv(&points);
    match out {
        Some(path) => {
            std::fs::write(path, csv).map_err(|source| CliError::Out {
                path: path.display().to_string(),
                source,
            })?;
            Ok(format!(
                "wrote {} ({} points)\n",
                path.display(),
                points.len()
            ))
        }
        None => Ok(csv),
    }
}
