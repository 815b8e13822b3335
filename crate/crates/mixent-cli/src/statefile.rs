//! The JSON state-file format.
//!
//! Every file holds one object tagged by `"kind"`:
//!
//! * `"pure"` — four complex amplitudes in the `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩`
//!   order, each written as an `[re, im]` pair;
//! * `"ensemble"` — a list of `{weight, amplitudes}` members;
//! * `"rank2"` — a structured family confined to one spin subspace:
//!   `{subspace, members: [{weight, c1, c2, chi}]}` with `subspace` either
//!   `"parallel"` or `"antiparallel"`;
//! * `"rank4"` — `parallel` and `antiparallel` member lists (either may be
//!   absent); anti-aligned members may spell their fields `d1`/`d2`/`phi`
//!   instead of `c1`/`c2`/`chi`;
//! * `"dense"` — an explicit row-major 4×4 matrix of `[re, im]` pairs.
//!
//! Weights must be positive and sum to 1 within 1e-6, amplitude vectors and
//! `(c1, c2)` pairs normalized within 1e-6; both are renormalized exactly on
//! load.  A `dense` matrix must be Hermitian with unit trace and no
//! eigenvalue below −1e-10.

use crate::CliError;
use mixent::matcore::ComplexMat4;
use mixent::states::{
    density_of_ensemble, density_of_pure, structured_rank2_density, structured_rank4_density,
    DensityMatrix, Ensemble, EnsembleMember, PureState, Rank2Member, StructuredRank2,
    StructuredRank4, Subspace,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// One complex number as `[re, im]`.
pub type ComplexPair = [f64; 2];

fn c(p: ComplexPair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateSpec {
    Pure {
        amplitudes: [ComplexPair; 4],
    },
    Ensemble {
        members: Vec<WeightedAmplitudes>,
    },
    Rank2 {
        subspace: SubspaceSpec,
        members: Vec<MemberSpec>,
    },
    Rank4 {
        #[serde(default)]
        parallel: Vec<MemberSpec>,
        #[serde(default)]
        antiparallel: Vec<MemberSpec>,
    },
    Dense {
        matrix: [[ComplexPair; 4]; 4],
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightedAmplitudes {
    pub weight: f64,
    pub amplitudes: [ComplexPair; 4],
}

/// A structured-family member.  `d1`/`d2`/`phi` are accepted as aliases so
/// anti-aligned members can keep their conventional letters.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MemberSpec {
    pub weight: f64,
    #[serde(alias = "d1")]
    pub c1: f64,
    #[serde(alias = "d2")]
    pub c2: f64,
    #[serde(alias = "phi", default)]
    pub chi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubspaceSpec {
    Parallel,
    Antiparallel,
}

impl From<SubspaceSpec> for Subspace {
    fn from(s: SubspaceSpec) -> Subspace {
        match s {
            SubspaceSpec::Parallel => Subspace::Parallel,
            SubspaceSpec::Antiparallel => Subspace::Antiparallel,
        }
    }
}

/// A parsed and validated state, with enough structure retained to route it
/// to the closed-form solvers when one applies.
#[derive(Debug, Clone)]
pub enum LoadedState {
    Pure(PureState),
    Ensemble(DensityMatrix),
    Rank2(StructuredRank2),
    Rank4(StructuredRank4),
    Dense(DensityMatrix),
}

impl LoadedState {
    pub fn kind(&self) -> &'static str {
        match self {
            LoadedState::Pure(_) => "pure",
            LoadedState::Ensemble(_) => "ensemble",
            LoadedState::Rank2(_) => "rank2",
            LoadedState::Rank4(_) => "rank4",
            LoadedState::Dense(_) => "dense",
        }
    }

    /// The state's density matrix (before any mixing).
    pub fn density(&self) -> mixent::Result<DensityMatrix> {
        match self {
            LoadedState::Pure(psi) => Ok(density_of_pure(psi)),
            LoadedState::Ensemble(rho) | LoadedState::Dense(rho) => Ok(rho.clone()),
            LoadedState::Rank2(family) => structured_rank2_density(family, 0.0),
            LoadedState::Rank4(family) => structured_rank4_density(family, 0.0),
        }
    }
}

fn member(spec: &MemberSpec) -> Rank2Member {
    Rank2Member {
        weight: spec.weight,
        c1: spec.c1,
        c2: spec.c2,
        chi: spec.chi,
    }
}

/// Validate a parsed spec into a state, rejecting anything the library
/// would not accept as physical.
pub fn realize(spec: &StateSpec) -> mixent::Result<LoadedState> {
    match spec {
        StateSpec::Pure { amplitudes } => {
            let amps = [
                c(amplitudes[0]),
                c(amplitudes[1]),
                c(amplitudes[2]),
                c(amplitudes[3]),
            ];
            Ok(LoadedState::Pure(PureState::new(amps)?))
        }
        StateSpec::Ensemble { members } => {
            let mut list = Vec::with_capacity(members.len());
            for m in members {
                let amps = [
                    c(m.amplitudes[0]),
                    c(m.amplitudes[1]),
                    c(m.amplitudes[2]),
                    c(m.amplitudes[3]),
                ];
                list.push(EnsembleMember {
                    weight: m.weight,
                    state: PureState::new(amps)?,
                });
            }
            let ensemble = Ensemble::new(list)?;
            Ok(LoadedState::Ensemble(density_of_ensemble(&ensemble)))
        }
        StateSpec::Rank2 { subspace, members } => {
            let members = members.iter().map(member).collect();
            Ok(LoadedState::Rank2(StructuredRank2::new(
                (*subspace).into(),
                members,
            )?))
        }
        StateSpec::Rank4 {
            parallel,
            antiparallel,
        } => {
            let parallel = parallel.iter().map(member).collect();
            let antiparallel = antiparallel.iter().map(member).collect();
            Ok(LoadedState::Rank4(StructuredRank4::new(
                parallel,
                antiparallel,
            )?))
        }
        StateSpec::Dense { matrix } => {
            let mut rows = [[Complex64::new(0.0, 0.0); 4]; 4];
            for i in 0..4 {
                for j in 0..4 {
                    rows[i][j] = c(matrix[i][j]);
                }
            }
            Ok(LoadedState::Dense(DensityMatrix::new(
                ComplexMat4::from_rows(rows),
            )?))
        }
    }
}

/// Read and validate a state file.
pub fn load_state(path: &Path) -> Result<LoadedState, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let spec: StateSpec = serde_json::from_str(&text).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })?;
    Ok(realize(&spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aliases_cover_the_antiparallel_spelling() {
        let json = r#"{
            "kind": "rank4",
            "parallel": [{"weight": 0.5, "c1": 1.0, "c2": 0.0, "chi": 0.0}],
            "antiparallel": [{"weight": 0.5, "d1": 0.6, "d2": 0.8, "phi": 1.25}]
        }"#;
        let spec: StateSpec = serde_json::from_str(json).unwrap();
        let state = realize(&spec).unwrap();
        match state {
            LoadedState::Rank4(family) => {
                let anti = family.antiparallel();
                assert_eq!(anti.len(), 1);
                assert!((anti[0].c1 - 0.6).abs() < 1e-15);
                assert!((anti[0].c2 - 0.8).abs() < 1e-15);
                assert!((anti[0].chi - 1.25).abs() < 1e-15);
            }
            other => panic!("wrong kind: {}", other.kind()),
        }
    }

    #[test]
    fn chi_defaults_to_zero() {
        let json = r#"{
            "kind": "rank2",
            "subspace": "parallel",
            "members": [{"weight": 1.0, "c1": 0.8, "c2": 0.6}]
        }"#;
        let spec: StateSpec = serde_json::from_str(json).unwrap();
        match realize(&spec).unwrap() {
            LoadedState::Rank2(family) => assert_eq!(family.members()[0].chi, 0.0),
            other => panic!("wrong kind: {}", other.kind()),
        }
    }

    #[test]
    fn unnormalized_amplitudes_are_rejected() {
        let json =
            r#"{"kind": "pure", "amplitudes": [[0.9, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]}"#;
        let spec: StateSpec = serde_json::from_str(json).unwrap();
        assert!(matches!(
            realize(&spec),
            Err(mixent::Error::NotNormalized(_))
        ));
    }

    #[test]
    fn dense_must_be_a_density_matrix() {
        // Trace 1 but indefinite.
        let json = r#"{"kind": "dense", "matrix": [
            [[1.5, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
            [[0.0, 0.0], [-0.5, 0.0], [0.0, 0.0], [0.0, 0.0]],
            [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
            [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]
        ]}"#;
        let spec: StateSpec = serde_json::from_str(json).unwrap();
        assert!(matches!(realize(&spec), Err(mixent::Error::NotPsd(_))));
    }

    #[test]
    fn specs_round_trip_through_json() {
        let spec = StateSpec::Rank2 {
            subspace: SubspaceSpec::Antiparallel,
            members: vec![MemberSpec {
                weight: 1.0,
                c1: 0.31622776601683794,
                c2: 0.9486832980505138,
                chi: 2.5,
            }],
        };
        let text = serde_json::to_string(&spec).unwrap();
        let back: StateSpec = serde_json::from_str(&text).unwrap();
        match back {
            StateSpec::Rank2 { members, .. } => {
                // serde_json prints f64 losslessly, so the round trip is exact.
                assert_eq!(members[0].c1, 0.31622776601683794);
                assert_eq!(members[0].c2, 0.9486832980505138);
                assert_eq!(members[0].chi, 2.5);
            }
            _ => panic!("wrong kind after round trip"),
        }
    }
}
