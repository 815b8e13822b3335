//! Two-qubit state types: pure states, ensembles, density matrices, and the
//! two structured mixture families with closed-form critical weights.
//!
//! Basis ordering throughout is `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩` (first qubit major),
//! matching [`crate::matcore::kron`].  Inputs whose normalization is off by
//! at most 1e-6 are renormalized silently; anything farther out is rejected —
//! quietly "fixing" a badly scaled input would hide bugs in the caller.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matcore::{cx, eig_hermitian, svd2, ComplexMat2, ComplexMat4};
use crate::{tol, Error, Result};

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A normalized two-qubit state vector.
///
/// Construction renormalizes near-unit input and rejects the rest, so a
/// value of this type is always exactly usable as a quantum state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: [Complex64; 4],
}

impl PureState {
    /// Build from amplitudes in the `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩` order.
    pub fn new(amps: [Complex64; 4]) -> Result<Self> {
        if !amps.iter().all(|a| a.re.is_finite() && a.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tol::NORMALIZATION_ACCEPT {
            return Err(Error::NotNormalized(norm));
        }
        let mut normalized = amps;
        for a in &mut normalized {
            *a /= norm;
        }
        Ok(Self { amps: normalized })
    }

    /// The Bell state (|↑↑⟩ + |↓↓⟩)/√2.
    pub fn phi_plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            amps: [cx(h, 0.0), C_ZERO, C_ZERO, cx(h, 0.0)],
        }
    }

    /// The Bell state (|↑↓⟩ + |↓↑⟩)/√2.
    pub fn psi_plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            amps: [C_ZERO, cx(h, 0.0), cx(h, 0.0), C_ZERO],
        }
    }

    /// `c1 |↑↑⟩ + c2 e^{iχ} |↓↓⟩` (parallel) or `c1 |↑↓⟩ + c2 e^{iχ} |↓↑⟩`
    /// (antiparallel): the member shape used by the structured families.
    pub fn from_schmidt_pair(subspace: Subspace, c1: f64, c2: f64, chi: f64) -> Result<Self> {
        if !(c1.is_finite() && c2.is_finite() && chi.is_finite()) || c1 < 0.0 || c2 < 0.0 {
            return Err(Error::ParamOutOfRange(format!(
                "member amplitudes must be finite and nonnegative (got c1 = {c1}, c2 = {c2})"
            )));
        }
        let first = cx(c1, 0.0);
        let second = Complex64::from_polar(c2, chi);
        let amps = match subspace {
            Subspace::Parallel => [first, C_ZERO, C_ZERO, second],
            Subspace::Antiparallel => [C_ZERO, first, second, C_ZERO],
        };
        Self::new(amps)
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amps
    }

    /// Amplitudes arranged as a 2×2 matrix `M[i][j] = ⟨i j|ψ⟩`, the form in
    /// which the Schmidt decomposition is an SVD.
    pub fn amp_matrix(&self) -> ComplexMat2 {
        ComplexMat2::from_rows([[self.amps[0], self.amps[1]], [self.amps[2], self.amps[3]]])
    }

    /// ⟨self|other⟩.
    pub fn inner_product(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Which two-dimensional subspace a structured-family member lives in:
/// spins aligned (`|↑↑⟩, |↓↓⟩`) or anti-aligned (`|↑↓⟩, |↓↑⟩`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subspace {
    Parallel,
    Antiparallel,
}

/// Schmidt decomposition of a pure two-qubit state:
/// `|ψ⟩ ≃ c1 |α₁⟩|β₁⟩ + c2 e^{iχ} |α₂⟩|β₂⟩` up to a global phase, with
/// `c1 ≥ c2 ≥ 0` and `c1² + c2² = 1`.
///
/// Phase convention: each local basis vector has its largest-magnitude
/// component real and nonnegative, and the global phase is chosen to make
/// the first coefficient real nonnegative; the leftover phase of the second
/// coefficient is `chi`.  When `c2 = 0` (a product state) `chi` is 0 by
/// convention, and when `c1 = c2` the basis itself is not unique — any valid
/// factorization may be returned.
#[derive(Debug, Clone)]
pub struct SchmidtData {
    pub c1: f64,
    pub c2: f64,
    pub chi: f64,
    /// Columns are the first-qubit basis vectors |α₁⟩, |α₂⟩.
    pub basis_a: ComplexMat2,
    /// Columns are the second-qubit basis vectors |β₁⟩, |β₂⟩.
    pub basis_b: ComplexMat2,
}

impl SchmidtData {
    /// Rebuild the state this decomposition came from (up to global phase).
    pub fn reconstruct(&self) -> PureState {
        let k2 = Complex64::from_polar(self.c2, self.chi);
        let mut amps = [C_ZERO; 4];
        for i in 0..2 {
            for j in 0..2 {
                amps[2 * i + j] = self.c1 * self.basis_a[(i, 0)] * self.basis_b[(j, 0)]
                    + k2 * self.basis_a[(i, 1)] * self.basis_b[(j, 1)];
            }
        }
        PureState::new(amps).expect("reconstructed Schmidt state is normalized")
    }
}

/// Rotate a 2-vector so its largest-magnitude component is real ≥ 0.
fn canonicalize_phase(v: [Complex64; 2]) -> [Complex64; 2] {
    let pick = if v[0].norm() >= v[1].norm() {
        v[0]
    } else {
        v[1]
    };
    let mag = pick.norm();
    if mag <= 1e-300 {
        return v;
    }
    let phase = pick.conj() / mag;
    [v[0] * phase, v[1] * phase]
}

/// Schmidt decomposition via SVD of the amplitude matrix.
pub fn schmidt_coefficients(state: &PureState) -> SchmidtData {
    let svd = svd2(&state.amp_matrix());
    // M = U Σ V†, so |ψ⟩ = σ₁|u₁⟩|v̄₁⟩ + σ₂|u₂⟩|v̄₂⟩ with v̄ the conjugated
    // columns of V.  Canonicalizing the basis phases moves the absorbed
    // phases back into the coefficients, where we report them as χ.
    let a1 = canonicalize_phase([svd.u[(0, 0)], svd.u[(1, 0)]]);
    let a2 = canonicalize_phase([svd.u[(0, 1)], svd.u[(1, 1)]]);
    let b1 = canonicalize_phase([svd.v[(0, 0)].conj(), svd.v[(1, 0)].conj()]);
    let b2 = canonicalize_phase([svd.v[(0, 1)].conj(), svd.v[(1, 1)].conj()]);

    let amps = state.amplitudes();
    let project = |a: &[Complex64; 2], b: &[Complex64; 2]| -> Complex64 {
        let mut acc = C_ZERO;
        for i in 0..2 {
            for j in 0..2 {
                acc += (a[i] * b[j]).conj() * amps[2 * i + j];
            }
        }
        acc
    };
    let k1 = project(&a1, &b1);
    let k2 = project(&a2, &b2);

    // Global phase: make k1 real ≥ 0 (fall back to k2 for product states
    // where k1 could only vanish if the state itself were degenerate).
    let reference = if k1.norm() > 1e-300 { k1 } else { k2 };
    let global = if reference.norm() > 1e-300 {
        reference.conj() / reference.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let k2_rot = k2 * global;
    let c1 = svd.s[0];
    let c2 = svd.s[1];
    let chi = if c2 > 1e-300 { k2_rot.arg() } else { 0.0 };

    SchmidtData {
        c1,
        c2,
        chi,
        basis_a: ComplexMat2::from_rows([[a1[0], a2[0]], [a1[1], a2[1]]]),
        basis_b: ComplexMat2::from_rows([[b1[0], b2[0]], [b1[1], b2[1]]]),
    }
}

/// A weighted pure-state member of an [`Ensemble`].
#[derive(Debug, Clone)]
pub struct EnsembleMember {
    pub weight: f64,
    pub state: PureState,
}

/// A finite mixture of pure states with positive weights summing to one.
#[derive(Debug, Clone)]
pub struct Ensemble {
    members: Vec<EnsembleMember>,
}

impl Ensemble {
    /// Weights must be positive and sum to 1 within 1e-6 (the sum is then
    /// renormalized away).
    pub fn new(members: Vec<EnsembleMember>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::WeightsInvalid("ensemble has no members".into()));
        }
        let mut sum = 0.0;
        for m in &members {
            if !m.weight.is_finite() || m.weight <= 0.0 {
                return Err(Error::WeightsInvalid(format!(
                    "weights must be positive (got {})",
                    m.weight
                )));
            }
            sum += m.weight;
        }
        if (sum - 1.0).abs() > tol::NORMALIZATION_ACCEPT {
            return Err(Error::WeightsInvalid(format!(
                "weights must sum to 1 (got {sum})"
            )));
        }
        let members = members
            .into_iter()
            .map(|m| EnsembleMember {
                weight: m.weight / sum,
                state: m.state,
            })
            .collect();
        Ok(Self { members })
    }

    pub fn members(&self) -> &[EnsembleMember] {
        &self.members
    }
}

/// A validated two-qubit density matrix: Hermitian within 1e-10 (stored
/// symmetrized), unit trace within 1e-10, all eigenvalues ≥ −1e-10.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMat4,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMat4) -> Result<Self> {
        if !mat.is_finite() {
            return Err(Error::NonFinite);
        }
        let dev = mat.hermiticity_deviation();
        if dev > tol::HERMITICITY {
            return Err(Error::NotHermitian(dev));
        }
        let sym = mat.add(&mat.adjoint()).scale(0.5);
        let trace = sym.trace().re;
        if (trace - 1.0).abs() > tol::HERMITICITY {
            return Err(Error::TraceNotOne(trace));
        }
        let eigs = eig_hermitian(&sym)?;
        if eigs[3] < -tol::SPECTRUM_CLAMP {
            return Err(Error::NotPsd(eigs[3]));
        }
        Ok(Self { mat: sym })
    }

    pub fn matrix(&self) -> &ComplexMat4 {
        &self.mat
    }

    /// Eigenvalues, descending.  Tiny negatives from roundoff are left as-is;
    /// they are bounded below by −1e-10 by construction.
    pub fn eigenvalues(&self) -> [f64; 4] {
        eig_hermitian(&self.mat).expect("validated density matrix stays Hermitian")
    }
}

/// The projector |ψ⟩⟨ψ|.
pub fn density_of_pure(state: &PureState) -> DensityMatrix {
    let a = state.amplitudes();
    let mut m = ComplexMat4::zero();
    for i in 0..4 {
        for j in 0..4 {
            m.set(i, j, a[i] * a[j].conj());
        }
    }
    DensityMatrix::new(m).expect("projector of a normalized state is a density matrix")
}

/// The weighted sum Σ wᵢ |ψᵢ⟩⟨ψᵢ|.
pub fn density_of_ensemble(ensemble: &Ensemble) -> DensityMatrix {
    let mut m = ComplexMat4::zero();
    for member in ensemble.members() {
        let rho_i = density_of_pure(&member.state);
        m = m.add(&rho_i.matrix().scale(member.weight));
    }
    DensityMatrix::new(m).expect("convex mixture of projectors is a density matrix")
}

/// The maximally mixed state I/4 — the only state left invariant by every
/// local unitary on both qubits.
pub fn max_mixed() -> DensityMatrix {
    DensityMatrix::new(ComplexMat4::identity().scale(0.25)).expect("I/4 is a density matrix")
}

/// The mixing path `(1 − ω) ρ + ω I/4` for ω in [0, 1].
pub fn mix_with_max_mixed(rho: &DensityMatrix, omega: f64) -> Result<DensityMatrix> {
    if !omega.is_finite() || !(0.0..=1.0).contains(&omega) {
        return Err(Error::OmegaOutOfRange(omega));
    }
    let mixed = rho
        .matrix()
        .scale(1.0 - omega)
        .add(&ComplexMat4::identity().scale(0.25 * omega));
    Ok(DensityMatrix::new(mixed).expect("convex mix with I/4 stays a density matrix"))
}

/// One member of a structured family: weight and the member state's
/// coefficients `c1 |x⟩ + c2 e^{iχ} |y⟩` within its two-dimensional subspace.
#[derive(Debug, Clone, Copy)]
pub struct Rank2Member {
    pub weight: f64,
    pub c1: f64,
    pub c2: f64,
    pub chi: f64,
}

fn validate_members(members: &[Rank2Member], renorm_weights_to: f64) -> Result<Vec<Rank2Member>> {
    let mut sum = 0.0;
    for m in members {
        if !m.weight.is_finite() || m.weight <= 0.0 {
            return Err(Error::WeightsInvalid(format!(
                "weights must be positive (got {})",
                m.weight
            )));
        }
        if !(m.c1.is_finite() && m.c2.is_finite() && m.chi.is_finite()) || m.c1 < 0.0 || m.c2 < 0.0
        {
            return Err(Error::ParamOutOfRange(format!(
                "member amplitudes must be finite and nonnegative (got c1 = {}, c2 = {})",
                m.c1, m.c2
            )));
        }
        let norm = (m.c1 * m.c1 + m.c2 * m.c2).sqrt();
        if (norm - 1.0).abs() > tol::NORMALIZATION_ACCEPT {
            return Err(Error::NotNormalized(norm));
        }
        sum += m.weight;
    }
    Ok(members
        .iter()
        .map(|m| {
            let norm = (m.c1 * m.c1 + m.c2 * m.c2).sqrt();
            Rank2Member {
                weight: m.weight / sum * renorm_weights_to,
                c1: m.c1 / norm,
                c2: m.c2 / norm,
                chi: m.chi,
            }
        })
        .collect())
}

/// A mixture of pure states that all live in one aligned-spin subspace.
/// Its density matrix (even after mixing with I/4) has closed-form
/// eigenvalues and concurrence.
#[derive(Debug, Clone)]
pub struct StructuredRank2 {
    subspace: Subspace,
    members: Vec<Rank2Member>,
}

impl StructuredRank2 {
    /// Member weights must be positive and sum to 1 within 1e-6; member
    /// coefficient pairs must be normalized within 1e-6.  Both are
    /// renormalized exactly on acceptance.
    pub fn new(subspace: Subspace, members: Vec<Rank2Member>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::WeightsInvalid("family has no members".into()));
        }
        let total: f64 = members.iter().map(|m| m.weight).sum();
        if (total - 1.0).abs() > tol::NORMALIZATION_ACCEPT {
            return Err(Error::WeightsInvalid(format!(
                "weights must sum to 1 (got {total})"
            )));
        }
        let members = validate_members(&members, 1.0)?;
        Ok(Self { subspace, members })
    }

    pub fn subspace(&self) -> Subspace {
        self.subspace
    }

    pub fn members(&self) -> &[Rank2Member] {
        &self.members
    }

    /// The family as an explicit ensemble of pure states.
    pub fn to_ensemble(&self) -> Ensemble {
        let members = self
            .members
            .iter()
            .map(|m| EnsembleMember {
                weight: m.weight,
                state: PureState::from_schmidt_pair(self.subspace, m.c1, m.c2, m.chi)
                    .expect("validated member is a valid state"),
            })
            .collect();
        Ensemble::new(members).expect("validated family is a valid ensemble")
    }
}

/// A mixture with members in both the aligned and the anti-aligned
/// subspaces.  The generic two-qubit state a local-basis choice can bring
/// to this form; its mixing-path eigenvalues stay closed-form.
#[derive(Debug, Clone)]
pub struct StructuredRank4 {
    parallel: Vec<Rank2Member>,
    antiparallel: Vec<Rank2Member>,
}

impl StructuredRank4 {
    /// The combined weight over both subfamilies must sum to 1 within 1e-6;
    /// either subfamily (but not both) may be empty.
    pub fn new(parallel: Vec<Rank2Member>, antiparallel: Vec<Rank2Member>) -> Result<Self> {
        if parallel.is_empty() && antiparallel.is_empty() {
            return Err(Error::WeightsInvalid("family has no members".into()));
        }
        let total: f64 = parallel
            .iter()
            .chain(antiparallel.iter())
            .map(|m| m.weight)
            .sum();
        if (total - 1.0).abs() > tol::NORMALIZATION_ACCEPT {
            return Err(Error::WeightsInvalid(format!(
                "weights must sum to 1 (got {total})"
            )));
        }
        let weight_parallel: f64 = parallel.iter().map(|m| m.weight).sum::<f64>() / total;
        let parallel = if parallel.is_empty() {
            Vec::new()
        } else {
            validate_members(&parallel, weight_parallel)?
        };
        let antiparallel = if antiparallel.is_empty() {
            Vec::new()
        } else {
            validate_members(&antiparallel, 1.0 - weight_parallel)?
        };
        Ok(Self {
            parallel,
            antiparallel,
        })
    }

    pub fn parallel(&self) -> &[Rank2Member] {
        &self.parallel
    }

    pub fn antiparallel(&self) -> &[Rank2Member] {
        &self.antiparallel
    }

    pub fn to_ensemble(&self) -> Ensemble {
        let mut members = Vec::new();
        for m in &self.parallel {
            members.push(EnsembleMember {
                weight: m.weight,
                state: PureState::from_schmidt_pair(Subspace::Parallel, m.c1, m.c2, m.chi)
                    .expect("validated member is a valid state"),
            });
        }
        for m in &self.antiparallel {
            members.push(EnsembleMember {
                weight: m.weight,
                state: PureState::from_schmidt_pair(Subspace::Antiparallel, m.c1, m.c2, m.chi)
                    .expect("validated member is a valid state"),
            });
        }
        Ensemble::new(members).expect("validated family is a valid ensemble")
    }
}

/// The six aggregates that determine the mixing-path spectrum of a
/// [`StructuredRank4`] family.  With members `(pᵢ, c1ᵢ, c2ᵢ, χᵢ)` in the
/// aligned subspace and `(qᵢ, d1ᵢ, d2ᵢ, φᵢ)` in the anti-aligned one:
///
/// * `weight_parallel = Σ pᵢ` and `weight_antiparallel = Σ qᵢ`;
/// * `pop_parallel = sqrt((Σ pᵢ c1ᵢ²)(Σ pᵢ c2ᵢ²))`, the geometric mean of
///   the two diagonal populations, and `pop_antiparallel` likewise with
///   `(qᵢ, dᵢ)`;
/// * `coh_parallel = |Σ pᵢ c1ᵢ c2ᵢ e^{iχᵢ}|`, the magnitude of the
///   subspace's off-diagonal coherence, and `coh_antiparallel` likewise.
///
/// The Cauchy–Schwarz inequality forces `coh ≤ pop` within each subspace;
/// equality holds exactly when the subfamily is a single pure member (or
/// all members share the same coefficients and phase).
#[derive(Debug, Clone, Copy)]
pub struct RankFourStats {
    pub weight_parallel: f64,
    pub weight_antiparallel: f64,
    pub pop_parallel: f64,
    pub pop_antiparallel: f64,
    pub coh_parallel: f64,
    pub coh_antiparallel: f64,
}

fn subfamily_stats(members: &[Rank2Member]) -> (f64, f64, f64) {
    let mut weight = 0.0;
    let mut pop1 = 0.0;
    let mut pop2 = 0.0;
    let mut coh = C_ZERO;
    for m in members {
        weight += m.weight;
        pop1 += m.weight * m.c1 * m.c1;
        pop2 += m.weight * m.c2 * m.c2;
        coh += m.weight * m.c1 * m.c2 * Complex64::from_polar(1.0, m.chi);
    }
    (weight, (pop1 * pop2).sqrt(), coh.norm())
}

/// Aggregate a [`StructuredRank4`] family into the six closed-form inputs.
pub fn rank4_stats(family: &StructuredRank4) -> RankFourStats {
    let (wp, pop_p, coh_p) = subfamily_stats(family.parallel());
    let (wa, pop_a, coh_a) = subfamily_stats(family.antiparallel());
    RankFourStats {
        weight_parallel: wp,
        weight_antiparallel: wa,
        pop_parallel: pop_p,
        pop_antiparallel: pop_a,
        coh_parallel: coh_p,
        coh_antiparallel: coh_a,
    }
}

fn structured_block(members: &[Rank2Member]) -> (f64, f64, Complex64) {
    let mut d1 = 0.0;
    let mut d2 = 0.0;
    let mut off = C_ZERO;
    for m in members {
        d1 += m.weight * m.c1 * m.c1;
        d2 += m.weight * m.c2 * m.c2;
        // Member projector entry (x, y): c1 · conj(c2 e^{iχ}).
        off += m.weight * m.c1 * m.c2 * Complex64::from_polar(1.0, -m.chi);
    }
    (d1, d2, off)
}

/// Density matrix of a rank-2 family blended with I/4, assembled directly
/// in its closed block form.  Agrees with
/// `mix_with_max_mixed(density_of_ensemble(family.to_ensemble()), omega)`
/// to machine precision.
pub fn structured_rank2_density(family: &StructuredRank2, omega: f64) -> Result<DensityMatrix> {
    if !omega.is_finite() || !(0.0..=1.0).contains(&omega) {
        return Err(Error::OmegaOutOfRange(omega));
    }
    let (d1, d2, off) = structured_block(family.members());
    let w = 1.0 - omega;
    let iso = 0.25 * omega;
    let mut m = ComplexMat4::zero();
    let (hi, lo) = match family.subspace() {
        Subspace::Parallel => (0usize, 3usize),
        Subspace::Antiparallel => (1usize, 2usize),
    };
    for i in 0..4 {
        m.set(i, i, cx(iso, 0.0));
    }
    m.set(hi, hi, cx(w * d1 + iso, 0.0));
    m.set(lo, lo, cx(w * d2 + iso, 0.0));
    m.set(hi, lo, off * w);
    m.set(lo, hi, off.conj() * w);
    DensityMatrix::new(m)
}

/// Density matrix of a rank-4 family blended with I/4; the aligned and
/// anti-aligned blocks are assembled independently.
pub fn structured_rank4_density(family: &StructuredRank4, omega: f64) -> Result<DensityMatrix> {
    if !omega.is_finite() || !(0.0..=1.0).contains(&omega) {
        return Err(Error::OmegaOutOfRange(omega));
    }
    let (p1, p2, off_p) = structured_block(family.parallel());
    let (a1, a2, off_a) = structured_block(family.antiparallel());
    let w = 1.0 - omega;
    let iso = 0.25 * omega;
    let mut m = ComplexMat4::zero();
    m.set(0, 0, cx(w * p1 + iso, 0.0));
    m.set(3, 3, cx(w * p2 + iso, 0.0));
    m.set(0, 3, off_p * w);
    m.set(3, 0, off_p.conj() * w);
    m.set(1, 1, cx(w * a1 + iso, 0.0));
    m.set(2, 2, cx(w * a2 + iso, 0.0));
    m.set(1, 2, off_a * w);
    m.set(2, 1, off_a.conj() * w);
    DensityMatrix::new(m)
}

/// Conjugate by a product of local unitaries: `(u1 ⊗ u2) ρ (u1 ⊗ u2)†`.
/// Entanglement measures are invariant under exactly these maps.
pub fn apply_local_unitaries(
    rho: &DensityMatrix,
    u1: &ComplexMat2,
    u2: &ComplexMat2,
) -> Result<DensityMatrix> {
    for u in [u1, u2] {
        let gram = u.adjoint().mul(u);
        let id = ComplexMat2::identity();
        let mut dev: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                dev = dev.max((gram[(i, j)] - id[(i, j)]).norm());
            }
        }
        if dev > 1e-10 {
            return Err(Error::ParamOutOfRange(format!(
                "local operation is not unitary (max |u†u - 1| entry = {dev:.3e})"
            )));
        }
    }
    let big = crate::matcore::kron(u1, u2);
    let rotated = big.mul(rho.matrix()).mul(&big.adjoint());
    DensityMatrix::new(rotated)
}

/// A Haar-random pure state drawn from the given RNG: four complex Gaussian
/// amplitudes, normalized.
pub fn random_pure_with<R: Rng + ?Sized>(rng: &mut R) -> PureState {
    loop {
        let mut amps = [C_ZERO; 4];
        let mut norm2 = 0.0;
        for a in &mut amps {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *a = cx(re, im);
            norm2 += a.norm_sqr();
        }
        if norm2 > 1e-12 {
            let norm = norm2.sqrt();
            for a in &mut amps {
                *a /= norm;
            }
            return PureState { amps };
        }
    }
}

/// Deterministic Haar-random pure state for a given seed.
pub fn random_pure(seed: u64) -> PureState {
    random_pure_with(&mut ChaCha8Rng::seed_from_u64(seed))
}

/// Uniformly distributed weights on the k-simplex via sorted-uniform
/// spacings.
fn simplex_weights<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<f64> {
    if k == 1 {
        return vec![1.0];
    }
    let mut cuts: Vec<f64> = (0..k - 1).map(|_| rng.random::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    let mut weights = Vec::with_capacity(k);
    let mut prev = 0.0;
    for c in cuts {
        weights.push((c - prev).max(1e-12));
        prev = c;
    }
    weights.push((1.0 - prev).max(1e-12));
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    weights
}

/// A random density matrix of target rank `k`: a mixture of `k` Haar-random
/// pure states with simplex-uniform weights.  `k` outside [1, 6] is clamped.
pub fn random_density_with<R: Rng + ?Sized>(rng: &mut R, k: usize) -> DensityMatrix {
    let k = k.clamp(1, 6);
    let weights = simplex_weights(rng, k);
    let members = weights
        .into_iter()
        .map(|weight| EnsembleMember {
            weight,
            state: random_pure_with(rng),
        })
        .collect();
    density_of_ensemble(&Ensemble::new(members).expect("simplex weights form an ensemble"))
}

/// Deterministic random density matrix for a given seed.
pub fn random_density(seed: u64, k: usize) -> DensityMatrix {
    random_density_with(&mut ChaCha8Rng::seed_from_u64(seed), k)
}

/// A Haar-random 2×2 unitary: Gram–Schmidt applied to a complex Gaussian
/// matrix.
pub fn random_unitary2_with<R: Rng + ?Sized>(rng: &mut R) -> ComplexMat2 {
    loop {
        let mut g = [[C_ZERO; 2]; 2];
        for row in &mut g {
            for e in row {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                *e = cx(re, im);
            }
        }
        // Columns of g.
        let col0 = [g[0][0], g[1][0]];
        let n0 = (col0[0].norm_sqr() + col0[1].norm_sqr()).sqrt();
        if n0 < 1e-6 {
            continue;
        }
        let q0 = [col0[0] / n0, col0[1] / n0];
        let overlap = q0[0].conj() * g[0][1] + q0[1].conj() * g[1][1];
        let mut q1 = [g[0][1] - overlap * q0[0], g[1][1] - overlap * q0[1]];
        let n1 = (q1[0].norm_sqr() + q1[1].norm_sqr()).sqrt();
        if n1 < 1e-6 {
            continue;
        }
        q1 = [q1[0] / n1, q1[1] / n1];
        return ComplexMat2::from_rows([[q0[0], q1[0]], [q0[1], q1[1]]]);
    }
}

/// A random structured rank-2 family with `n` members.
pub fn random_rank2_with<R: Rng + ?Sized>(
    rng: &mut R,
    subspace: Subspace,
    n: usize,
) -> StructuredRank2 {
    let n = n.clamp(1, 6);
    let weights = simplex_weights(rng, n);
    let members = weights
        .into_iter()
        .map(|weight| {
            let theta = rng.random::<f64>() * std::f64::consts::FRAC_PI_2;
            Rank2Member {
                weight,
                c1: theta.cos(),
                c2: theta.sin(),
                chi: rng.random::<f64>() * std::f64::consts::TAU,
            }
        })
        .collect();
    StructuredRank2::new(subspace, members).expect("generated members are valid")
}

/// A random structured rank-4 family with `n_par` aligned and `n_anti`
/// anti-aligned members.
pub fn random_rank4_with<R: Rng + ?Sized>(
    rng: &mut R,
    n_par: usize,
    n_anti: usize,
) -> StructuredRank4 {
    let n_par = n_par.clamp(1, 4);
    let n_anti = n_anti.clamp(1, 4);
    // Keep both subfamily weights bounded away from zero so the families
    // exercised by tests are genuinely rank 4.
    let split = 0.1 + 0.8 * rng.random::<f64>();
    let make = |rng: &mut R, n: usize, total: f64| -> Vec<Rank2Member> {
        let weights = simplex_weights(rng, n);
        weights
            .into_iter()
            .map(|w| {
                let theta = rng.random::<f64>() * std::f64::consts::FRAC_PI_2;
                Rank2Member {
                    weight: w * total,
                    c1: theta.cos(),
                    c2: theta.sin(),
                    chi: rng.random::<f64>() * std::f64::consts::TAU,
                }
            })
            .collect()
    };
    let parallel = make(rng, n_par, split);
    let antiparallel = make(rng, n_anti, 1.0 - split);
    StructuredRank4::new(parallel, antiparallel).expect("generated members are valid")
}
