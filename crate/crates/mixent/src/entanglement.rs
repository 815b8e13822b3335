//! Concurrence, entanglement entropy, and separability tests for two-qubit
//! states, plus closed-form mixing-path spectra for the structured families.
//!
//! The concurrence of ρ is `max(0, λ₁ − λ₂ − λ₃ − λ₄)` where the λᵢ are the
//! descending eigenvalues of `R = sqrt(sqrt(ρ) ρ̃ sqrt(ρ))` and
//! `ρ̃ = (σy ⊗ σy) ρ* (σy ⊗ σy)` is the spin-flipped state.  Three routes to
//! the λᵢ are implemented:
//!
//! * [`concurrence`] extracts them as the singular values of the
//!   *half-product* `M = sqrt(ρ) (σy⊗σy) sqrt(ρ)*`, which satisfies
//!   `M M† = R²`.  Singular values are computed without ever squaring, so
//!   λᵢ near zero come out with absolute error at machine precision.  This
//!   is the default route.
//! * [`concurrence_lambdas_product`] takes the square roots of the
//!   eigenvalues of the non-Hermitian product `ρ ρ̃` — the classic textbook
//!   route.  The square root halves the significant digits near zero
//!   (errors up to ~1e-8 for exactly vanishing λ), which is why it serves
//!   as the independent cross-check rather than the default.
//! * [`concurrence_lambdas_hermitian`] assembles the Hermitian matrix
//!   `sqrt(ρ) ρ̃ sqrt(ρ) = R²` and takes square roots of its eigenvalues;
//!   same near-zero caveat, fully Hermitian arithmetic.
//!
//! Separability is decided by the positive-partial-transpose criterion,
//! which is both necessary and sufficient in the 2×2 case, giving the
//! bisection solver in [`crate::omega`] a check that is logically
//! independent of the concurrence.

use num_complex::Complex64;

use crate::matcore::{
    eig_hermitian, eig_rho_rhotilde, kron, psd_sqrt, singular_values4, ComplexMat2, ComplexMat4,
};
use crate::states::{DensityMatrix, PureState, RankFourStats, StructuredRank2};
use crate::{tol, Error, Result};

/// Concurrence along with the four spectrum values it came from
/// (descending).
#[derive(Debug, Clone, Copy)]
pub struct ConcurrenceValue {
    pub value: f64,
    pub lambdas: [f64; 4],
}

/// The spin-flipped state `ρ̃ = (σy ⊗ σy) ρ* (σy ⊗ σy)`.
pub fn spin_flip(rho: &DensityMatrix) -> ComplexMat4 {
    let sy = ComplexMat2::sigma_y();
    let flip = kron(&sy, &sy);
    flip.mul(&rho.matrix().conj()).mul(&flip)
}

/// Wootters concurrence of an arbitrary two-qubit density matrix, via the
/// singular values of `M = sqrt(ρ) (σy⊗σy) sqrt(ρ)*`.
pub fn concurrence(rho: &DensityMatrix) -> ConcurrenceValue {
    let root = psd_sqrt(rho.matrix()).expect("validated density matrix has a PSD square root");
    let sy = ComplexMat2::sigma_y();
    let flip = kron(&sy, &sy);
    let half_product = root.mul(&flip).mul(&root.conj());
    let lambdas = singular_values4(&half_product);
    let value = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0);
    ConcurrenceValue { value, lambdas }
}

/// The λᵢ as square roots of the eigenvalues of the non-Hermitian product
/// `ρ ρ̃`, descending.  Propagates [`Error::SpectrumNotReal`] if that
/// spectrum fails to be real and nonnegative beyond tolerance.
pub fn concurrence_lambdas_product(rho: &DensityMatrix) -> Result<[f64; 4]> {
    let product = rho.matrix().mul(&spin_flip(rho));
    let squares = eig_rho_rhotilde(&product)?;
    Ok(squares.map(f64::sqrt))
}

/// The λᵢ as square roots of the eigenvalues of the Hermitian matrix
/// `sqrt(ρ) ρ̃ sqrt(ρ)`, descending.
pub fn concurrence_lambdas_hermitian(rho: &DensityMatrix) -> Result<[f64; 4]> {
    let root = psd_sqrt(rho.matrix())?;
    let r_squared = root.mul(&spin_flip(rho)).mul(&root);
    // Symmetrize away the ~1e-16 asymmetry from the matrix products.
    let r_squared = r_squared.add(&r_squared.adjoint()).scale(0.5);
    let squares = eig_hermitian(&r_squared)?;
    Ok(squares.map(|x| x.max(0.0).sqrt()))
}

/// Concurrence of a pure state: `2 |ad − bc|` for amplitudes
/// `(a, b, c, d)` — twice the product of the Schmidt coefficients.
pub fn concurrence_pure(state: &PureState) -> f64 {
    let m = state.amp_matrix();
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    2.0 * det.norm()
}

/// Reduced state of the first qubit: trace over the second.
pub fn partial_trace_second(rho: &DensityMatrix) -> ComplexMat2 {
    let m = rho.matrix();
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for ip in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..2 {
                acc += m[(2 * i + j, 2 * ip + j)];
            }
            out[i][ip] = acc;
        }
    }
    ComplexMat2::from_rows(out)
}

/// Reduced state of the second qubit: trace over the first.
pub fn partial_trace_first(rho: &DensityMatrix) -> ComplexMat2 {
    let m = rho.matrix();
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for j in 0..2 {
        for jp in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..2 {
                acc += m[(2 * i + j, 2 * i + jp)];
            }
            out[j][jp] = acc;
        }
    }
    ComplexMat2::from_rows(out)
}

fn binary_entropy_bits(p: f64) -> f64 {
    let mut s = 0.0;
    for x in [p, 1.0 - p] {
        if x > 0.0 {
            s -= x * x.log2();
        }
    }
    s
}

/// Entanglement entropy of a pure state in bits: the von Neumann entropy of
/// either reduced single-qubit state (they agree for pure states).
pub fn entropy_pure(state: &PureState) -> f64 {
    let reduced = partial_trace_second(&crate::states::density_of_pure(state));
    let eigs = reduced
        .eig_hermitian()
        .expect("reduced state of a pure state is Hermitian");
    binary_entropy_bits(eigs[0].clamp(0.0, 1.0))
}

/// Partial transpose over the second qubit.
pub fn partial_transpose_second(rho: &DensityMatrix) -> ComplexMat4 {
    let m = rho.matrix();
    let mut out = ComplexMat4::zero();
    for i in 0..2 {
        for ip in 0..2 {
            for j in 0..2 {
                for jp in 0..2 {
                    out.set(2 * i + j, 2 * ip + jp, m[(2 * i + jp, 2 * ip + j)]);
                }
            }
        }
    }
    out
}

/// Separability via the positive-partial-transpose criterion, which for two
/// qubits is necessary *and* sufficient: ρ is separable exactly when the
/// partial transpose has no eigenvalue below −1e-10.
pub fn is_separable_ppt(rho: &DensityMatrix) -> bool {
    let pt = partial_transpose_second(rho);
    let eigs = eig_hermitian(&pt).expect("partial transpose of a Hermitian matrix is Hermitian");
    eigs[3] >= -tol::PPT_BOUNDARY
}

fn check_omega(omega: f64) -> Result<()> {
    if !omega.is_finite() || !(0.0..=1.0).contains(&omega) {
        return Err(Error::ParamOutOfRange(format!(
            "mixing weight must lie in [0, 1] (got {omega})"
        )));
    }
    Ok(())
}

/// Closed-form spectrum values for a pure state with Schmidt coefficients
/// `(c1, c2)` blended with I/4 at weight ω:
///
/// ```text
/// λ₁,₂ = sqrt((1−ω)² c1²c2² + (ω/4)(1−ω) + (ω/4)²) ± (1−ω) c1 c2,
/// λ₃,₄ = ω/4.
/// ```
///
/// Returned in that labeling (not globally sorted).  The pair `(c1, c2)`
/// must be normalized within 1e-6.
pub fn eigs_pure_mix_closed(c1: f64, c2: f64, omega: f64) -> Result<[f64; 4]> {
    check_omega(omega)?;
    if !(c1.is_finite() && c2.is_finite()) || c1 < 0.0 || c2 < 0.0 {
        return Err(Error::ParamOutOfRange(format!(
            "Schmidt coefficients must be finite and nonnegative (got {c1}, {c2})"
        )));
    }
    let norm = (c1 * c1 + c2 * c2).sqrt();
    if (norm - 1.0).abs() > tol::NORMALIZATION_ACCEPT {
        return Err(Error::ParamOutOfRange(format!(
            "Schmidt coefficients must be normalized (got norm {norm})"
        )));
    }
    let (c1, c2) = (c1 / norm, c2 / norm);
    let w = 1.0 - omega;
    let q = 0.25 * omega;
    let cross = w * c1 * c2;
    let radical = (cross * cross + q * w + q * q).sqrt();
    Ok([radical + cross, (radical - cross).max(0.0), q, q])
}

/// Concurrence along the mixing path of any state whose unmixed concurrence
/// is `c0`, for the families where that path is exactly linear-minus-noise:
/// `max(0, (1−ω) c0 − ω/2)`.
///
/// Exact for pure states and for single-subspace (rank-2) families; the
/// general rank-4 families need [`concurrence_rank4_closed`].
pub fn concurrence_mix_linear(c0: f64, omega: f64) -> Result<f64> {
    check_omega(omega)?;
    if !c0.is_finite() || !(-1e-9..=1.0 + 1e-9).contains(&c0) {
        return Err(Error::ParamOutOfRange(format!(
            "concurrence must lie in [0, 1] (got {c0})"
        )));
    }
    Ok(((1.0 - omega) * c0.clamp(0.0, 1.0) - 0.5 * omega).max(0.0))
}

/// Closed-form concurrence of a rank-2 family blended with I/4.  The
/// family's unmixed concurrence is twice its coherence aggregate
/// `|Σ pᵢ c1ᵢ c2ᵢ e^{iχᵢ}|`, and the mixing path is the linear law.
pub fn concurrence_rank2_closed(family: &StructuredRank2, omega: f64) -> Result<f64> {
    let mut coh = Complex64::new(0.0, 0.0);
    for m in family.members() {
        coh += m.weight * m.c1 * m.c2 * Complex64::from_polar(1.0, m.chi);
    }
    concurrence_mix_linear(2.0 * coh.norm(), omega)
}

fn check_stats(stats: &RankFourStats) -> Result<()> {
    let fields = [
        stats.weight_parallel,
        stats.weight_antiparallel,
        stats.pop_parallel,
        stats.pop_antiparallel,
        stats.coh_parallel,
        stats.coh_antiparallel,
    ];
    if fields.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::ParamOutOfRange(
            "family aggregates must be finite and nonnegative".into(),
        ));
    }
    let total = stats.weight_parallel + stats.weight_antiparallel;
    if (total - 1.0).abs() > tol::NORMALIZATION_ACCEPT {
        return Err(Error::ParamOutOfRange(format!(
            "subspace weights must sum to 1 (got {total})"
        )));
    }
    if stats.coh_parallel > stats.pop_parallel + 1e-9
        || stats.coh_antiparallel > stats.pop_antiparallel + 1e-9
    {
        return Err(Error::ParamOutOfRange(
            "coherence aggregate exceeds its population bound".into(),
        ));
    }
    Ok(())
}

/// Closed-form spectrum values for a rank-4 family blended with I/4.  With
/// the aggregates `(P, Q, A, B, F, G)` of [`RankFourStats`]:
///
/// ```text
/// λ₁,₂ = sqrt((1−ω)² A² + (ω/4)(1−ω) P + (ω/4)²) ± (1−ω) F,
/// λ₃,₄ = sqrt((1−ω)² B² + (ω/4)(1−ω) Q + (ω/4)²) ± (1−ω) G.
/// ```
///
/// Returned in that labeling: the aligned-subspace pair first.  Callers
/// deciding dominance between the two pairs must compare λ₁ and λ₃
/// themselves.
pub fn eigs_rank4_mix_closed(stats: &RankFourStats, omega: f64) -> Result<[f64; 4]> {
    check_omega(omega)?;
    check_stats(stats)?;
    let w = 1.0 - omega;
    let q = 0.25 * omega;
    let rad_par =
        (w * w * stats.pop_parallel * stats.pop_parallel + q * w * stats.weight_parallel + q * q)
            .sqrt();
    let rad_anti = (w * w * stats.pop_antiparallel * stats.pop_antiparallel
        + q * w * stats.weight_antiparallel
        + q * q)
        .sqrt();
    let f = w * stats.coh_parallel;
    let g = w * stats.coh_antiparallel;
    Ok([
        rad_par + f,
        (rad_par - f).max(0.0),
        rad_anti + g,
        (rad_anti - g).max(0.0),
    ])
}

/// Closed-form concurrence of a rank-4 family blended with I/4: the
/// spectrum values of [`eigs_rank4_mix_closed`], sorted, fed through
/// `max(0, λ₍₁₎ − λ₍₂₎ − λ₍₃₎ − λ₍₄₎)`.
pub fn concurrence_rank4_closed(stats: &RankFourStats, omega: f64) -> Result<f64> {
    let mut lambdas = eigs_rank4_mix_closed(stats, omega)?;
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}
