//! Solvers for the critical mixing weight ω_c: the smallest weight of the
//! maximally mixed state that renders `(1−ω) ρ₀ + ω I/4` separable.
//!
//! Separability along this path is upward-closed — once separable, adding
//! more noise never recreates entanglement — so ω_c is well defined and a
//! bisection on the concurrence converges to it.  Closed forms exist for
//! pure states (`ω_c = C/(C + 1/2)`, maximum 2/3 on Bell states) and for
//! the structured families; every closed-form result returned here has been
//! cross-checked against an internal bisection before being handed back,
//! and falls back to the bisection value if the two disagree.

use crate::entanglement::{
    concurrence, concurrence_rank4_closed, eigs_rank4_mix_closed, is_separable_ppt,
};
use crate::states::{
    mix_with_max_mixed, rank4_stats, structured_rank2_density, structured_rank4_density,
    DensityMatrix, PureState, StructuredRank2, StructuredRank4, Subspace,
};
use crate::{tol, Error, Result};

/// How an ω_c value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    PureClosed,
    Rank2Closed,
    Rank4Closed,
    Bisection,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Method::PureClosed => "PureClosed",
            Method::Rank2Closed => "Rank2Closed",
            Method::Rank4Closed => "Rank4Closed",
            Method::Bisection => "Bisection",
        };
        f.write_str(name)
    }
}

/// Which spectrum pair dominates at the critical point of a rank-4 family:
/// the aligned-subspace pair (λ₁) or the anti-aligned one (λ₃).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Lambda1Dominant,
    Lambda3Dominant,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Branch::Lambda1Dominant => "Lambda1Dominant",
            Branch::Lambda3Dominant => "Lambda3Dominant",
        };
        f.write_str(name)
    }
}

/// A critical mixing weight together with how it was computed and a
/// residual diagnostic: the concurrence measured on the mixing path just
/// above the returned point (at `ω_c + 1e-9`), which should be zero.
#[derive(Debug, Clone, Copy)]
pub struct OmegaResult {
    pub omega_c: f64,
    pub method: Method,
    pub branch: Option<Branch>,
    pub residual: f64,
}

/// Step used for the residual diagnostic.
const RESIDUAL_STEP: f64 = 1e-9;

fn residual_on_path(rho0: &DensityMatrix, omega_c: f64) -> f64 {
    let probe = (omega_c + RESIDUAL_STEP).min(1.0);
    match mix_with_max_mixed(rho0, probe) {
        Ok(mixed) => concurrence(&mixed).value,
        Err(_) => 0.0,
    }
}

fn check_concurrence_range(c0: f64) -> Result<f64> {
    if !c0.is_finite() || !(-1e-9..=1.0 + 1e-9).contains(&c0) {
        return Err(Error::ParamOutOfRange(format!(
            "concurrence must lie in [0, 1] (got {c0})"
        )));
    }
    Ok(c0.clamp(0.0, 1.0))
}

/// Critical weight for a pure state of concurrence `c0`:
/// `ω_c = c0 / (c0 + 1/2)`, ranging from 0 (product states) to 2/3 (Bell
/// states).
pub fn omega_c_pure(c0: f64) -> Result<OmegaResult> {
    let c0 = check_concurrence_range(c0)?;
    if c0 <= tol::CONCURRENCE_ZERO {
        return Ok(OmegaResult {
            omega_c: 0.0,
            method: Method::PureClosed,
            branch: None,
            residual: 0.0,
        });
    }
    let omega_c = c0 / (c0 + 0.5);
    // Residual via the canonical Schmidt representative c1 ≥ c2 with
    // 2 c1 c2 = c0; every pure state of this concurrence mixes identically.
    let c1_sq = 0.5 * (1.0 + (1.0 - c0 * c0).max(0.0).sqrt());
    let rep = PureState::from_schmidt_pair(
        Subspace::Parallel,
        c1_sq.sqrt(),
        (1.0 - c1_sq).max(0.0).sqrt(),
        0.0,
    )
    .expect("canonical Schmidt pair is a valid state");
    let residual = residual_on_path(&crate::states::density_of_pure(&rep), omega_c);
    Ok(OmegaResult {
        omega_c,
        method: Method::PureClosed,
        branch: None,
        residual,
    })
}

/// Critical weight for a rank-2 family: the pure-state law applied to the
/// family's closed-form concurrence `2 |Σ pᵢ c1ᵢ c2ᵢ e^{iχᵢ}|`.
pub fn omega_c_rank2(family: &StructuredRank2) -> Result<OmegaResult> {
    let c0 = crate::entanglement::concurrence_rank2_closed(family, 0.0)?;
    if c0 <= tol::CONCURRENCE_ZERO {
        return Ok(OmegaResult {
            omega_c: 0.0,
            method: Method::Rank2Closed,
            branch: None,
            residual: 0.0,
        });
    }
    let omega_c = c0 / (c0 + 0.5);
    let rho0 = structured_rank2_density(family, 0.0)?;
    Ok(OmegaResult {
        omega_c,
        method: Method::Rank2Closed,
        branch: None,
        residual: residual_on_path(&rho0, omega_c),
    })
}

/// One branch of the rank-4 closed form.  `k` is the difference of squared
/// coherence and opposing population (`F² − B²` for the λ₁ branch), `q` the
/// opposing subspace weight (`Q` for the λ₁ branch):
///
/// ```text
/// ω_c = (8k + q − sqrt(q² + 4k)) / (8k + 2q − 1/2).
/// ```
///
/// Returns `None` when the denominator collapses (a removable 0/0 point) or
/// the radicand goes negative; callers fall back to bisection.
fn rank4_branch_candidate(k: f64, q: f64) -> Option<f64> {
    let radicand = q * q + 4.0 * k;
    if radicand < 0.0 {
        return None;
    }
    let den = 8.0 * k + 2.0 * q - 0.5;
    if den.abs() < 1e-12 {
        return None;
    }
    let omega = (8.0 * k + q - radicand.sqrt()) / den;
    if !omega.is_finite() || !(-1e-9..=1.0 + 1e-9).contains(&omega) {
        return None;
    }
    Some(omega.clamp(0.0, 1.0))
}

/// Critical weight for a rank-4 family via the closed form, with the branch
/// picked by which spectrum pair dominates at the candidate point, verified
/// against an internal bisection.  If no branch validates — degenerate
/// denominator, failed dominance check, or closed/bisection disagreement
/// beyond 1e-6 — the bisection value is returned with
/// [`Method::Bisection`].
pub fn omega_c_rank4(family: &StructuredRank4) -> Result<OmegaResult> {
    let stats = rank4_stats(family);
    let c0 = concurrence_rank4_closed(&stats, 0.0)?;
    if c0 <= tol::CONCURRENCE_ZERO {
        return Ok(OmegaResult {
            omega_c: 0.0,
            method: Method::Rank4Closed,
            branch: None,
            residual: 0.0,
        });
    }

    let rho0 = structured_rank4_density(family, 0.0)?;
    let bisected = omega_c_bisect(&rho0, 1e-9)?;

    let k1 =
        stats.coh_parallel * stats.coh_parallel - stats.pop_antiparallel * stats.pop_antiparallel;
    let k3 =
        stats.coh_antiparallel * stats.coh_antiparallel - stats.pop_parallel * stats.pop_parallel;
    let candidates = [
        (
            Branch::Lambda1Dominant,
            rank4_branch_candidate(k1, stats.weight_antiparallel),
        ),
        (
            Branch::Lambda3Dominant,
            rank4_branch_candidate(k3, stats.weight_parallel),
        ),
    ];

    for (branch, candidate) in candidates {
        let Some(omega) = candidate else { continue };
        // The branch assumed its own pair dominates at the critical point;
        // check that against the closed-form spectrum, and require the
        // concurrence to actually vanish there.
        let lam = eigs_rank4_mix_closed(&stats, omega)?;
        let dominates = match branch {
            Branch::Lambda1Dominant => lam[0] >= lam[2] - 1e-9,
            Branch::Lambda3Dominant => lam[2] >= lam[0] - 1e-9,
        };
        if !dominates {
            continue;
        }
        let boundary = concurrence_rank4_closed(&stats, omega)?;
        if boundary > 1e-7 {
            continue;
        }
        if (omega - bisected.omega_c).abs() > tol::CLOSED_BISECT_AGREEMENT {
            continue;
        }
        return Ok(OmegaResult {
            omega_c: omega,
            method: Method::Rank4Closed,
            branch: Some(branch),
            residual: residual_on_path(&rho0, omega),
        });
    }

    Ok(OmegaResult {
        omega_c: bisected.omega_c,
        method: Method::Bisection,
        branch: None,
        residual: bisected.residual,
    })
}

/// Critical weight by bisection on the concurrence along the mixing path.
///
/// `tolerance` (accepted range [1e-12, 1e-3]) controls the residual probe
/// and the guarantee: the state is separable at `ω_c + tolerance` and, when
/// `ω_c > 0`, entangled at `ω_c − tolerance`.  The bracket itself is always
/// driven to ~1e-18, so the returned value does not depend on `tolerance`.
pub fn omega_c_bisect(rho0: &DensityMatrix, tolerance: f64) -> Result<OmegaResult> {
    if !tolerance.is_finite() || !(1e-12..=1e-3).contains(&tolerance) {
        return Err(Error::ToleranceOutOfRange(tolerance));
    }
    let c0 = concurrence(rho0).value;
    if c0 <= tol::CONCURRENCE_ZERO {
        return Ok(OmegaResult {
            omega_c: 0.0,
            method: Method::Bisection,
            branch: None,
            residual: c0,
        });
    }

    let mut lo = 0.0f64; // entangled side
    let mut hi = 1.0f64; // separable side (I/4 itself)
    for _ in 0..60 {
        if hi - lo <= 1e-18 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let mixed = mix_with_max_mixed(rho0, mid)?;
        if concurrence(&mixed).value > tol::CONCURRENCE_ZERO {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let omega_c = 0.5 * (lo + hi);
    let probe = (omega_c + tolerance).min(1.0);
    let residual = concurrence(&mix_with_max_mixed(rho0, probe)?).value;
    Ok(OmegaResult {
        omega_c,
        method: Method::Bisection,
        branch: None,
        residual,
    })
}

/// One grid point of a mixing sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepPoint {
    pub omega: f64,
    pub concurrence: f64,
    /// Separability decided by the partial-transpose criterion — logically
    /// independent of the concurrence column.
    pub separable: bool,
}

/// Evaluate concurrence and separability on an evenly spaced grid of mixing
/// weights.  `steps ≥ 2`; the final point lands exactly on `to`.
pub fn sweep(rho0: &DensityMatrix, from: f64, to: f64, steps: usize) -> Result<Vec<SweepPoint>> {
    if steps < 2 {
        return Err(Error::GridInvalid(format!(
            "need at least 2 grid points (got {steps})"
        )));
    }
    if !(from.is_finite() && to.is_finite())
        || !(0.0..=1.0).contains(&from)
        || !(0.0..=1.0).contains(&to)
        || from > to
    {
        return Err(Error::GridInvalid(format!(
            "grid endpoints must satisfy 0 <= from <= to <= 1 (got {from}, {to})"
        )));
    }
    let mut points = Vec::with_capacity(steps);
    for i in 0..steps {
        let omega = if i + 1 == steps {
            to
        } else {
            from + (to - from) * (i as f64) / ((steps - 1) as f64)
        };
        let mixed = mix_with_max_mixed(rho0, omega)?;
        points.push(SweepPoint {
            omega,
            concurrence: concurrence(&mixed).value,
            separable: is_separable_ppt(&mixed),
        });
    }
    Ok(points)
}
