//! Self-check suites behind `mixent verify`: every closed form is replayed
//! against an independent numerical route on freshly drawn random states.
//! A failure aborts with the offending state serialized in the error, so a
//! counterexample can be re-examined with the other subcommands.

use crate::statefile::{MemberSpec, StateSpec, SubspaceSpec, WeightedAmplitudes};
use crate::CliError;
use mixent::entanglement::{
    concurrence, concurrence_mix_linear, concurrence_pure, concurrence_rank2_closed,
    eigs_pure_mix_closed, eigs_rank4_mix_closed, partial_transpose_second,
};
use mixent::matcore::eig_hermitian;
use mixent::omega::{omega_c_bisect, omega_c_pure, omega_c_rank2, omega_c_rank4};
use mixent::states::{
    apply_local_unitaries, density_of_pure, mix_with_max_mixed, random_density_with,
    random_pure_with, random_rank2_with, random_rank4_with, random_unitary2_with, rank4_stats,
    structured_rank2_density, structured_rank4_density, DensityMatrix, PureState, StructuredRank2,
    StructuredRank4, Subspace,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spec_of_pure(psi: &PureState) -> StateSpec {
    let a = *psi.amplitudes();
    StateSpec::Pure {
        amplitudes: [
            [a[0].re, a[0].im],
            [a[1].re, a[1].im],
            [a[2].re, a[2].im],
            [a[3].re, a[3].im],
        ],
    }
}

fn member_specs(members: &[mixent::states::Rank2Member]) -> Vec<MemberSpec> {
    members
        .iter()
        .map(|m| MemberSpec {
            weight: m.weight,
            c1: m.c1,
            c2: m.c2,
            chi: m.chi,
        })
        .collect()
}

fn spec_of_rank2(family: &StructuredRank2) -> StateSpec {
    StateSpec::Rank2 {
        subspace: match family.subspace() {
            Subspace::Parallel => SubspaceSpec::Parallel,
            Subspace::Antiparallel => SubspaceSpec::Antiparallel,
        },
        members: member_specs(family.members()),
    }
}

fn spec_of_rank4(family: &StructuredRank4) -> StateSpec {
    StateSpec::Rank4 {
        parallel: member_specs(family.parallel()),
        antiparallel: member_specs(family.antiparallel()),
    }
}

fn spec_of_dense(rho: &DensityMatrix) -> StateSpec {
    let rows = rho.matrix().rows();
    let mut matrix = [[[0.0; 2]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            matrix[i][j] = [rows[i][j].re, rows[i][j].im];
        }
    }
    StateSpec::Dense { matrix }
}

fn fail(suite: &str, case: usize, what: String, spec: &StateSpec) -> String {
    let json = serde_json::to_string_pretty(spec).unwrap_or_else(|_| "<unprintable>".into());
    format!("suite {suite}, case {case}: {what}\nstate:\n{json}")
}

type SuiteResult = Result<usize, String>;

fn pure_closed_vs_bisect(rng: &mut ChaCha8Rng, trials: usize) -> SuiteResult {
    for case in 0..trials {
        let psi = random_pure_with(rng);
        let closed = omega_c_pure(concurrence_pure(&psi)).map_err(|e| e.to_string())?;
        let numeric = omega_c_bisect(&density_of_pure(&psi), 1e-9).map_err(|e| e.to_string())?;
        let diff = (closed.omega_c - numeric.omega_c).abs();
        if diff > 1e-6 {
            return Err(fail(
                "pure_closed_vs_bisect",
                case,
                format!(
                    "closed {:.12} vs bisection {:.12} (diff {diff:.3e})",
                    closed.omega_c, numeric.omega_c
                ),
                &spec_of_pure(&psi),
            ));
        }
    }
    Ok(trials)
}

fn rank2_closed_vs_bisect(rng: &mut ChaCha8Rng, trials: usize) -> SuiteResult {
    for case in 0..trials {
        let subspace = if case % 2 == 0 {
            Subspace::Parallel
        } else {
            Subspace::Antiparallel
        };
        let family = random_rank2_with(rng, subspace, 1 + case % 4);
        let rho0 = structured_rank2_density(&family, 0.0).map_err(|e| e.to_string())?;
        let closed_c = concurrence_rank2_closed(&family, 0.0).map_err(|e| e.to_string())?;
        let generic_c = concurrence(&rho0).value;
        if (closed_c - generic_c).abs() > 1e-9 {
            return Err(fail(
                "rank2_closed_vs_bisect",
                case,
                format!("closed concurrence {closed_c:.12} vs generic {generic_c:.12}"),
                &spec_of_rank2(&family),
            ));
        }
        let closed = omega_c_rank2(&family).map_err(|e| e.to_string())?;
        let numeric = omega_c_bisect(&rho0, 1e-9).map_err(|e| e.to_string())?;
        if (closed.omega_c - numeric.omega_c).abs() > 1e-6 {
            return Err(fail(
                "rank2_closed_vs_bisect",
                case,
                format!(
                    "closed {:.12} vs bisection {:.12}",
                    closed.omega_c, numeric.omega_c
                ),
                &spec_of_rank2(&family),
            ));
        }
    }
    Ok(trials)
}

fn rank4_closed_vs_bisect(rng: &mut ChaCha8Rng, trials: usize) -> SuiteResult {
    let probes = [0.0, 0.33, 0.71];
    for case in 0..trials {
        let family = random_rank4_with(rng, 1 + case % 3, 1 + (case / 3) % 3);
        let stats = rank4_stats(&family);
        for &omega in &probes {
            let mut closed = eigs_rank4_mix_closed(&stats, omega).map_err(|e| e.to_string())?;
            closed.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let rho = structured_rank4_density(&family, omega).map_err(|e| e.to_string())?;
            let generic = concurrence(&rho).lambdas;
            for i in 0..4 {
                if (closed[i] - generic[i]).abs() > 1e-8 {
                    return Err(fail(
                        "rank4_closed_vs_bisect",
                        case,
                        format!(
                            "spectrum mismatch at omega {omega}: closed {:?} vs generic {:?}",
                            closed, generic
                        ),
                        &spec_of_rank4(&family),
                    ));
                }
            }
        }
        let solved = omega_c_rank4(&family).map_err(|e| e.to_string())?;
        let rho0 = structured_rank4_density(&family, 0.0).map_err(|e| e.to_string())?;
        let numeric = omega_c_bisect(&rho0, 1e-9).map_err(|e| e.to_string())?;
        if (solved.omega_c - numeric.omega_c).abs() > 1e-6 {
            return Err(fail(
                "rank4_closed_vs_bisect",
                case,
                format!(
                    "solver {:.12} ({}) vs bisection {:.12}",
                    solved.omega_c, solved.method, numeric.omega_c
                ),
                &spec_of_rank4(&family),
            ));
        }
    }
    Ok(trials)
}

/// Deterministic 20×20 grid over the aligned-subspace pure mix: closed
/// spectrum against the product-eigenvalue route, and the linear concurrence
/// law against the spectrum it came from.  Ignores `trials`.
fn aligned_grid_closed_spectrum(_rng: &mut ChaCha8Rng, _trials: usize) -> SuiteResult {
    let n = 20;
    let mut cases = 0;
    for i in 0..n {
        let c1 = (0.5f64.sqrt() + (1.0 - 0.5f64.sqrt()) * i as f64 / (n - 1) as f64).min(1.0);
        let c2 = (1.0 - c1 * c1).max(0.0).sqrt();
        for j in 0..n {
            let omega = j as f64 / (n - 1) as f64;
            cases += 1;
            let closed = eigs_pure_mix_closed(c1, c2, omega).map_err(|e| e.to_string())?;
            let psi = PureState::from_schmidt_pair(Subspace::Parallel, c1, c2, 0.0)
                .map_err(|e| e.to_string())?;
            let rho =
                mix_with_max_mixed(&density_of_pure(&psi), omega).map_err(|e| e.to_string())?;
            let flip = mixent::entanglement::spin_flip(&rho);
            let squared = mixent::matcore::eig_rho_rhotilde(&rho.matrix().mul(&flip))
                .map_err(|e| e.to_string())?;
            let mut sorted = closed;
            sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for k in 0..4 {
                if (sorted[k] * sorted[k] - squared[k]).abs() > 1e-10 {
                    return Err(fail(
                        "aligned_grid_closed_spectrum",
                        cases,
                        format!(
                            "squared spectrum mismatch at (c1 {c1:.6}, omega {omega:.6}): {:?} vs {:?}",
                            sorted, squared
                        ),
                        &spec_of_pure(&psi),
                    ));
                }
            }
            let wootters = (sorted[0] - sorted[1] - sorted[2] - sorted[3]).max(0.0);
            let linear = concurrence_mix_linear(2.0 * c1 * c2, omega).map_err(|e| e.to_string())?;
            if (wootters - linear).abs() > 1e-10 {
                return Err(fail(
                    "aligned_grid_closed_spectrum",
                    cases,
                    format!(
                        "concurrence mismatch at (c1 {c1:.6}, omega {omega:.6}): spectrum {wootters:.12} vs linear law {linear:.12}"
                    ),
                    &spec_of_pure(&psi),
                ));
            }
        }
    }
    Ok(cases)
}

fn ppt_matches_concurrence(rng: &mut ChaCha8Rng, trials: usize) -> SuiteResult {
    for case in 0..trials {
        let rho = random_density_with(rng, 1 + case % 4);
        let c = concurrence(&rho).value;
        let pt = partial_transpose_second(&rho);
        let min_eig = eig_hermitian(&pt).map_err(|e| e.to_string())?[3];
        let says_entangled = c > 1e-9;
        let says_npt = min_eig < -1e-9;
        let says_ppt = min_eig > 1e-9;
        // Within 1e-9 of either boundary the two witnesses may legitimately
        // straddle zero; outside it they must agree.
        if (says_entangled && says_ppt) || (!says_entangled && says_npt) {
            return Err(fail(
                "ppt_matches_concurrence",
                case,
                format!("concurrence {c:.3e} vs transpose minimum eigenvalue {min_eig:.3e}"),
                &spec_of_dense(&rho),
            ));
        }
    }
    Ok(trials)
}

fn local_unitary_invariance(rng: &mut ChaCha8Rng, trials: usize) -> SuiteResult {
    for case in 0..trials {
        let rho = if case % 2 == 0 {
            density_of_pure(&random_pure_with(rng))
        } else {
            random_density_with(rng, 1 + case % 4)
        };
        let u1 = random_unitary2_with(rng);
        let u2 = random_unitary2_with(rng);
        let rotated = apply_local_unitaries(&rho, &u1, &u2).map_err(|e| e.to_string())?;
        let before = concurrence(&rho).value;
        let after = concurrence(&rotated).value;
        if (before - after).abs() > 1e-9 {
            return Err(fail(
                "local_unitary_invariance",
                case,
                format!("concurrence moved under local unitaries: {before:.12} -> {after:.12}"),
                &spec_of_dense(&rho),
            ));
        }
    }
    Ok(trials)
}

fn upward_closed_separability(rng: &mut ChaCha8Rng, trials: usize) -> SuiteResult {
    use rand::Rng;
    for case in 0..trials {
        let rho = random_density_with(rng, 1 + case % 4);
        let (a, b) = (rng.random::<f64>(), rng.random::<f64>());
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let at_lo = mix_with_max_mixed(&rho, lo).map_err(|e| e.to_string())?;
        let at_hi = mix_with_max_mixed(&rho, hi).map_err(|e| e.to_string())?;
        let c_lo = concurrence(&at_lo).value;
        let c_hi = concurrence(&at_hi).value;
        if c_hi > c_lo + 1e-12 {
            return Err(fail(
                "upward_closed_separability",
                case,
                format!("concurrence rose along the path: {c_lo:.12} at {lo:.6} -> {c_hi:.12} at {hi:.6}"),
                &spec_of_dense(&rho),
            ));
        }
        let sep_lo = mixent::entanglement::is_separable_ppt(&at_lo);
        let sep_hi = mixent::entanglement::is_separable_ppt(&at_hi);
        if sep_lo && !sep_hi {
            return Err(fail(
                "upward_closed_separability",
                case,
                format!("separability lost going up the path ({lo:.6} -> {hi:.6})"),
                &spec_of_dense(&rho),
            ));
        }
    }
    Ok(trials)
}

fn single_subspace_reduction(rng: &mut ChaCha8Rng, trials: usize) -> SuiteResult {
    for case in 0..trials {
        let subspace = if case % 2 == 0 {
            Subspace::Parallel
        } else {
            Subspace::Antiparallel
        };
        let rank2 = random_rank2_with(rng, subspace, 1 + case % 4);
        let members = rank2.members().to_vec();
        let rank4 = match subspace {
            Subspace::Parallel => StructuredRank4::new(members, Vec::new()),
            Subspace::Antiparallel => StructuredRank4::new(Vec::new(), members),
        }
        .map_err(|e| e.to_string())?;
        let via_rank2 = omega_c_rank2(&rank2).map_err(|e| e.to_string())?;
        let via_rank4 = omega_c_rank4(&rank4).map_err(|e| e.to_string())?;
        if (via_rank2.omega_c - via_rank4.omega_c).abs() > 1e-10 {
            return Err(fail(
                "single_subspace_reduction",
                case,
                format!(
                    "two-level family law {:.12} vs four-level solver {:.12} ({})",
                    via_rank2.omega_c, via_rank4.omega_c, via_rank4.method
                ),
                &spec_of_rank4(&rank4),
            ));
        }
    }
    Ok(trials)
}

/// Path-mixture agreement for plain ensembles: an ensemble's density matrix
/// must give the same bisection answer as the same ensemble written densely.
fn ensemble_dense_agreement(rng: &mut ChaCha8Rng, trials: usize) -> SuiteResult {
    use rand::Rng;
    for case in 0..trials {
        let n = 1 + case % 3;
        let mut members = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for _ in 0..n {
            weights.push(rng.random::<f64>() + 0.05);
        }
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        for &w in &weights {
            members.push(WeightedAmplitudes {
                weight: w,
                amplitudes: {
                    let a = *random_pure_with(rng).amplitudes();
                    [
                        [a[0].re, a[0].im],
                        [a[1].re, a[1].im],
                        [a[2].re, a[2].im],
                        [a[3].re, a[3].im],
                    ]
                },
            });
        }
        let spec = StateSpec::Ensemble { members };
        let state = crate::statefile::realize(&spec).map_err(|e| e.to_string())?;
        let rho = state.density().map_err(|e| e.to_string())?;
        let dense_spec = spec_of_dense(&rho);
        let dense_state = crate::statefile::realize(&dense_spec).map_err(|e| e.to_string())?;
        let dense_rho = dense_state.density().map_err(|e| e.to_string())?;
        let a = omega_c_bisect(&rho, 1e-9).map_err(|e| e.to_string())?;
        let b = omega_c_bisect(&dense_rho, 1e-9).map_err(|e| e.to_string())?;
        if (a.omega_c - b.omega_c).abs() > 1e-8 {
            return Err(fail(
                "ensemble_dense_agreement",
                case,
                format!(
                    "ensemble route {:.12} vs dense route {:.12}",
                    a.omega_c, b.omega_c
                ),
                &spec,
            ));
        }
    }
    Ok(trials)
}

/// Run every suite with a deterministic seed.  `trials` scales the random
/// suites; the grid suite has a fixed case count.
pub fn run_verify(trials: usize, seed: u64) -> Result<String, CliError> {
    let suites: [(&str, fn(&mut ChaCha8Rng, usize) -> SuiteResult); 8] = [
        ("pure_closed_vs_bisect", pure_closed_vs_bisect),
        ("rank2_closed_vs_bisect", rank2_closed_vs_bisect),
        ("rank4_closed_vs_bisect", rank4_closed_vs_bisect),
        ("aligned_grid_closed_spectrum", aligned_grid_closed_spectrum),
        ("ppt_matches_concurrence", ppt_matches_concurrence),
        ("local_unitary_invariance", local_unitary_invariance),
        ("upward_closed_separability", upward_closed_separability),
        ("single_subspace_reduction", single_subspace_reduction),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::new();
    let mut total = 0;
    for (name, run) in suites {
        let cases = run(&mut rng, trials).map_err(CliError::VerifyFailed)?;
        total += cases;
        out.push_str(&format!("{name}: {cases} cases ok\n"));
    }
    let cases =
        ensemble_dense_agreement(&mut rng, trials.min(10)).map_err(CliError::VerifyFailed)?;
    total += cases;
    out.push_str(&format!("ensemble_dense_agreement: {cases} cases ok\n"));
    out.push_str(&format!("all checks passed ({total} cases)\n"));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_passes_with_default_style_parameters() {
        let out = run_verify(8, 7).unwrap();
        assert!(out.ends_with("cases)\n"));
        assert!(out.contains("all checks passed"));
        assert_eq!(out.lines().count(), 10);
    }

    #[test]
    fn verify_is_deterministic_for_a_seed() {
        assert_eq!(run_verify(5, 123).unwrap(), run_verify(5, 123).unwrap());
    }
}
