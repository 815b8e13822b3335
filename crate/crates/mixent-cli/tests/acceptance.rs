//! End-to-end acceptance checks for the whole workspace, one test per
//! criterion.  Each test prints a PASS line (visible with --nocapture) after
//! its assertions; tolerances and case counts are pinned and must not be
//! loosened.

use mixent::entanglement::{
    concurrence, concurrence_mix_linear, concurrence_pure, concurrence_rank2_closed,
    eigs_pure_mix_closed, eigs_rank4_mix_closed, partial_transpose_second, spin_flip,
};
use mixent::matcore::{eig_hermitian, eig_rho_rhotilde};
use mixent::omega::{omega_c_bisect, omega_c_pure, omega_c_rank2, omega_c_rank4, Branch, Method};
use mixent::states::{
    apply_local_unitaries, density_of_pure, mix_with_max_mixed, random_density_with,
    random_pure_with, random_rank2_with, random_rank4_with, random_unitary2_with, rank4_stats,
    structured_rank2_density, structured_rank4_density, PureState, Rank2Member, StructuredRank4,
    Subspace,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;
use std::process::Command;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sorted_desc(mut v: [f64; 4]) -> [f64; 4] {
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

#[test]
fn criterion_01_bell_critical_weight() {
    let bell = PureState::phi_plus();
    let closed = omega_c_pure(concurrence_pure(&bell)).unwrap();
    assert!(
        (closed.omega_c - 2.0 / 3.0).abs() <= 1e-12,
        "closed form: {} vs 2/3",
        closed.omega_c
    );
    assert_eq!(closed.method, Method::PureClosed);

    let numeric = omega_c_bisect(&density_of_pure(&bell), 1e-9).unwrap();
    assert!(
        (numeric.omega_c - 2.0 / 3.0).abs() <= 1e-8,
        "bisection: {} vs 2/3",
        numeric.omega_c
    );
    println!("PASS criterion 01: Bell critical weight 2/3 (closed to 1e-12, bisection to 1e-8)");
}

#[test]
fn criterion_02_pure_state_formula_audit() {
    let mut r = rng(0x0201);
    for _ in 0..1000 {
        let psi = random_pure_with(&mut r);
        let closed = omega_c_pure(concurrence_pure(&psi)).unwrap();
        let numeric = omega_c_bisect(&density_of_pure(&psi), 1e-9).unwrap();
        let diff = (closed.omega_c - numeric.omega_c).abs();
        assert!(
            diff <= 1e-6,
            "closed {} vs bisection {} (diff {diff:.3e})",
            closed.omega_c,
            numeric.omega_c
        );
    }
    println!("PASS criterion 02: 1000 random pure states, closed vs bisection within 1e-6");
}

#[test]
fn criterion_03_aligned_mix_spectrum_grid() {
    let n = 20;
    for i in 0..n {
        let c1 = (0.5f64.sqrt() + (1.0 - 0.5f64.sqrt()) * i as f64 / (n - 1) as f64).min(1.0);
        let c2 = (1.0 - c1 * c1).max(0.0).sqrt();
        for j in 0..n {
            let omega = j as f64 / (n - 1) as f64;
            let closed = sorted_desc(eigs_pure_mix_closed(c1, c2, omega).unwrap());
            let psi = PureState::from_schmidt_pair(Subspace::Parallel, c1, c2, 0.0).unwrap();
            let rho = mix_with_max_mixed(&density_of_pure(&psi), omega).unwrap();
            let squared = eig_rho_rhotilde(&rho.matrix().mul(&spin_flip(&rho))).unwrap();
            for k in 0..4 {
                let diff = (closed[k] * closed[k] - squared[k]).abs();
                assert!(
                    diff <= 1e-10,
                    "spectrum mismatch at c1 {c1}, omega {omega}: {closed:?} squared vs {squared:?}"
                );
            }
            let from_spectrum = (closed[0] - closed[1] - closed[2] - closed[3]).max(0.0);
            let linear = concurrence_mix_linear(2.0 * c1 * c2, omega).unwrap();
            assert!(
                (from_spectrum - linear).abs() <= 1e-10,
                "concurrence mismatch at c1 {c1}, omega {omega}: {from_spectrum} vs {linear}"
            );
        }
    }
    println!("PASS criterion 03: 20x20 aligned-mix grid, closed spectrum and linear concurrence law within 1e-10");
}

#[test]
fn criterion_04_rank2_families() {
    let mut r = rng(0x0401);
    for case in 0..300 {
        let subspace = if case % 2 == 0 {
            Subspace::Parallel
        } else {
            Subspace::Antiparallel
        };
        let family = random_rank2_with(&mut r, subspace, 1 + case % 4);
        for &omega in &[0.0, 0.3, 0.6] {
            let closed = concurrence_rank2_closed(&family, omega).unwrap();
            let rho = structured_rank2_density(&family, omega).unwrap();
            let generic = concurrence(&rho).value;
            assert!(
                (closed - generic).abs() <= 1e-9,
                "case {case}, omega {omega}: closed {closed} vs generic {generic}"
            );
        }
        let closed = omega_c_rank2(&family).unwrap();
        let rho0 = structured_rank2_density(&family, 0.0).unwrap();
        let numeric = omega_c_bisect(&rho0, 1e-9).unwrap();
        assert!(
            (closed.omega_c - numeric.omega_c).abs() <= 1e-6,
            "case {case}: closed {} vs bisection {}",
            closed.omega_c,
            numeric.omega_c
        );
    }
    println!("PASS criterion 04: 300 rank-2 families, concurrence within 1e-9 and critical weight within 1e-6");
}

#[test]
fn criterion_05_rank4_families() {
    let mut r = rng(0x0501);
    for case in 0..300 {
        let family = random_rank4_with(&mut r, 1 + case % 3, 1 + (case / 3) % 3);
        let stats = rank4_stats(&family);
        for &omega in &[0.0, 0.4, 0.8] {
            let closed = sorted_desc(eigs_rank4_mix_closed(&stats, omega).unwrap());
            let rho = structured_rank4_density(&family, omega).unwrap();
            let generic = concurrence(&rho).lambdas;
            for k in 0..4 {
                assert!(
                    (closed[k] - generic[k]).abs() <= 1e-8,
                    "case {case}, omega {omega}: closed {closed:?} vs generic {generic:?}"
                );
            }
        }
        let solved = omega_c_rank4(&family).unwrap();
        let rho0 = structured_rank4_density(&family, 0.0).unwrap();
        let numeric = omega_c_bisect(&rho0, 1e-9).unwrap();
        assert!(
            (solved.omega_c - numeric.omega_c).abs() <= 1e-6,
            "case {case}: solver {} ({}) vs bisection {}",
            solved.omega_c,
            solved.method,
            numeric.omega_c
        );
    }

    // Worked point: an equal pair of maximally entangled members weighted
    // 3/4 aligned and 1/4 anti-aligned, whose aggregates are coherence 3/8,
    // opposing population 1/8, opposing weight 1/4.
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let family = StructuredRank4::new(
        vec![Rank2Member {
            weight: 0.75,
            c1: h,
            c2: h,
            chi: 0.0,
        }],
        vec![Rank2Member {
            weight: 0.25,
            c1: h,
            c2: h,
            chi: 0.0,
        }],
    )
    .unwrap();
    let solved = omega_c_rank4(&family).unwrap();
    assert!(
        (solved.omega_c - 0.5).abs() <= 1e-9,
        "worked point: {} vs 0.5",
        solved.omega_c
    );
    assert_eq!(solved.method, Method::Rank4Closed);
    assert_eq!(solved.branch, Some(Branch::Lambda1Dominant));
    println!("PASS criterion 05: 300 rank-4 families (spectrum 1e-8, critical weight 1e-6); worked point 0.5 to 1e-9");
}

#[test]
fn criterion_06_balanced_cross_subspace_mixtures_vanish() {
    let mut r = rng(0x0601);
    for case in 0..100 {
        // Equal weights, equal member entanglement across the two subspaces,
        // free phases: the two spectrum pairs then tie exactly and the
        // mixture carries no entanglement at all.
        let t = 0.05 + (std::f64::consts::FRAC_PI_2 - 0.1) * r.random::<f64>();
        let (c1, c2) = (t.cos(), t.sin());
        let m = c1 * c2;
        let sign = if r.random::<bool>() { 1.0 } else { -1.0 };
        let d1 = ((1.0 + sign * (1.0 - 4.0 * m * m).max(0.0).sqrt()) / 2.0).sqrt();
        let d2 = (1.0 - d1 * d1).max(0.0).sqrt();
        let family = StructuredRank4::new(
            vec![Rank2Member {
                weight: 0.5,
                c1,
                c2,
                chi: r.random::<f64>() * std::f64::consts::TAU,
            }],
            vec![Rank2Member {
                weight: 0.5,
                c1: d1,
                c2: d2,
                chi: r.random::<f64>() * std::f64::consts::TAU,
            }],
        )
        .unwrap();
        let rho0 = structured_rank4_density(&family, 0.0).unwrap();
        let c = concurrence(&rho0).value;
        assert!(c <= 1e-10, "case {case}: concurrence {c:.3e} should vanish");
        let solved = omega_c_rank4(&family).unwrap();
        assert_eq!(
            solved.omega_c, 0.0,
            "case {case}: critical weight must be 0"
        );
        let numeric = omega_c_bisect(&rho0, 1e-9).unwrap();
        assert_eq!(
            numeric.omega_c, 0.0,
            "case {case}: bisection must also give 0"
        );
    }
    println!("PASS criterion 06: 100 balanced equal-entanglement mixtures have zero concurrence and zero critical weight");
}

#[test]
fn criterion_07_single_subspace_reduction() {
    let mut r = rng(0x0701);
    for case in 0..100 {
        let family2 = random_rank2_with(&mut r, Subspace::Parallel, 1 + case % 4);
        let family4 = StructuredRank4::new(family2.members().to_vec(), Vec::new()).unwrap();
        let via_rank2 = omega_c_rank2(&family2).unwrap();
        let via_rank4 = omega_c_rank4(&family4).unwrap();
        assert!(
            (via_rank2.omega_c - via_rank4.omega_c).abs() <= 1e-10,
            "case {case}: {} vs {} ({})",
            via_rank2.omega_c,
            via_rank4.omega_c,
            via_rank4.method
        );
    }
    println!("PASS criterion 07: 100 aligned-only families, four-level solver reduces to the two-level law within 1e-10");
}

#[test]
fn criterion_08_witness_agreement_and_upward_closedness() {
    let mut r = rng(0x0801);
    for case in 0..1000 {
        let rho = random_density_with(&mut r, 1 + case % 4);
        let c = concurrence(&rho).value;
        let min_eig = eig_hermitian(&partial_transpose_second(&rho)).unwrap()[3];
        let says_entangled = c > 1e-9;
        let says_npt = min_eig < -1e-9;
        let says_ppt = min_eig > 1e-9;
        assert!(
            !(says_entangled && says_ppt) && !(!says_entangled && says_npt),
            "case {case}: concurrence {c:.3e} vs transpose minimum {min_eig:.3e}"
        );
    }
    for case in 0..300 {
        let rho = random_density_with(&mut r, 1 + case % 4);
        let (a, b) = (r.random::<f64>(), r.random::<f64>());
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let sep_lo = mixent::entanglement::is_separable_ppt(&mix_with_max_mixed(&rho, lo).unwrap());
        let sep_hi = mixent::entanglement::is_separable_ppt(&mix_with_max_mixed(&rho, hi).unwrap());
        assert!(
            !sep_lo || sep_hi,
            "case {case}: separability lost between {lo} and {hi}"
        );
    }
    println!("PASS criterion 08: 1000 states agree between concurrence and transpose witnesses; 300 pairs stay separable upward");
}

#[test]
fn criterion_09_local_unitary_invariance() {
    let mut r = rng(0x0901);
    for case in 0..500 {
        let rho = if case % 2 == 0 {
            density_of_pure(&random_pure_with(&mut r))
        } else {
            random_density_with(&mut r, 1 + case % 4)
        };
        let u1 = random_unitary2_with(&mut r);
        let u2 = random_unitary2_with(&mut r);
        let rotated = apply_local_unitaries(&rho, &u1, &u2).unwrap();
        let diff = (concurrence(&rho).value - concurrence(&rotated).value).abs();
        assert!(diff <= 1e-9, "case {case}: concurrence moved by {diff:.3e}");
    }
    println!(
        "PASS criterion 09: concurrence invariant under 500 random local unitaries within 1e-9"
    );
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn run_cli(args: &[&str]) -> (String, String, i32) {
    let output = Command::new(env!("CARGO_BIN_EXE_mixent"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(output.stdout).expect("stdout is UTF-8"),
        String::from_utf8(output.stderr).expect("stderr is UTF-8"),
        output.status.code().unwrap_or(-1),
    )
}

#[test]
fn criterion_10_cli_contract() {
    let cases: [(&str, &str); 5] = [
        (
            "bell.json",
            "omega_c = 0.666666666667 (PureClosed)\nresidual = 0.000000000000\n",
        ),
        (
            "product.json",
            "omega_c = 0.000000000000 (PureClosed)\nresidual = 0.000000000000\n",
        ),
        (
            "rank2_two_member.json",
            "omega_c = 0.615384615385 (Rank2Closed)\nresidual = 0.000000000000\n",
        ),
        (
            "rank4_two_bell.json",
            "omega_c = 0.500000000000 (Rank4Closed, Lambda1Dominant)\nresidual = 0.000000000000\n",
        ),
        (
            "dense_max_mixed.json",
            "omega_c = 0.000000000000 (Bisection)\nresidual = 0.000000000000\n",
        ),
    ];
    for (name, expected) in cases {
        let path = fixture(name);
        let (stdout, stderr, code) = run_cli(&["omega-c", "--state", path.to_str().unwrap()]);
        assert_eq!(code, 0, "{name}: {stderr}");
        assert_eq!(stdout, expected, "{name} report drifted");
    }

    let bell = fixture("bell.json");
    let (stdout, stderr, code) = run_cli(&["concurrence", "--state", bell.to_str().unwrap()]);
    assert_eq!(code, 0, "bell concurrence: {stderr}");
    assert_eq!(
        stdout,
        "C = 1.000000000000\nlambdas = [1.000000000000, 0.000000000000, 0.000000000000, 0.000000000000]\n"
    );

    let (stdout, stderr, code) = run_cli(&[
        "sweep",
        "--state",
        bell.to_str().unwrap(),
        "--from",
        "0",
        "--to",
        "1",
        "--steps",
        "5",
    ]);
    assert_eq!(code, 0, "bell sweep: {stderr}");
    assert_eq!(
        stdout,
        "omega,concurrence,separable\n\
         0.000000000000,1.000000000000,false\n\
         0.250000000000,0.625000000000,false\n\
         0.500000000000,0.250000000000,false\n\
         0.750000000000,0.000000000000,true\n\
         1.000000000000,0.000000000000,true\n"
    );
    println!("PASS criterion 10: five fixtures reproduce their documented outputs byte for byte");
}
