//! Versioned JSON file formats: channel specs, states, observables, and
//! decomposition files. Complex entries are `[re, im]` pairs and matrices
//! row-major nested arrays; every file carries `"format": 1`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use qpd::channel::{KrausSet, LinearMapRep, MixedUnitarySpec, DEFAULT_COND_LIMIT};
use qpd::matrix::{CMatrix, C64};
use qpd::zoo::NamedFamily;

use crate::{CliError, DOMAIN, PARSE};

pub const FORMAT_VERSION: u32 = 1;

fn check_format(format: u32) -> Result<(), CliError> {
    if format != FORMAT_VERSION {
        return Err(CliError::new(
            PARSE,
            format!("unsupported format version {format}, expected {FORMAT_VERSION}"),
        ));
    }
    Ok(())
}

/// A serialized channel description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelFile {
    pub format: u32,
    pub dim: usize,
    #[serde(flatten)]
    pub kind: ChannelKind,
    /// Use the inverse map of the described channel.
    #[serde(default)]
    pub invert: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelKind {
    Kraus {
        operators: Vec<CMatrix>,
    },
    Choi {
        matrix: CMatrix,
    },
    MixedUnitary {
        terms: Vec<MixedTerm>,
    },
    Named {
        family: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixedTerm {
    pub coefficient: f64,
    pub unitary: CMatrix,
}

fn param(params: &BTreeMap<String, f64>, name: &str) -> Result<f64, CliError> {
    params.get(name).copied().ok_or_else(|| {
        CliError::new(
            PARSE,
            format!("named channel is missing parameter '{name}'"),
        )
    })
}

impl ChannelFile {
    /// Build the described linear map, applying `invert` when asked.
    /// Classification implied by the kind is enforced: Kraus sets must be
    /// subchannels, Choi matrices Hermitian, named families in range.
    pub fn to_map(&self) -> Result<LinearMapRep, CliError> {
        check_format(self.format)?;
        if self.dim < 2 {
            return Err(CliError::new(
                DOMAIN,
                format!("dimension {} must be >= 2", self.dim),
            ));
        }
        let map = match &self.kind {
            ChannelKind::Kraus { operators } => {
                let set = KrausSet::new(self.dim, operators.clone()).map_err(CliError::domain)?;
                let map = set.to_map();
                let class = map.classify(1e-8);
                if !class.is_tn && !class.is_tp {
                    return Err(CliError::new(
                        DOMAIN,
                        "Kraus operators describe neither a channel nor a subchannel".to_string(),
                    ));
                }
                map
            }
            ChannelKind::Choi { matrix } => {
                let map =
                    LinearMapRep::from_choi(self.dim, matrix.clone()).map_err(CliError::domain)?;
                if !map.classify(1e-8).is_hp {
                    return Err(CliError::new(
                        DOMAIN,
                        "Choi matrix is not Hermitian".to_string(),
                    ));
                }
                map
            }
            ChannelKind::MixedUnitary { terms } => {
                let spec = MixedUnitarySpec::new(
                    self.dim,
                    terms
                        .iter()
                        .map(|t| (t.coefficient, t.unitary.clone()))
                        .collect(),
                )
                .map_err(CliError::domain)?;
                spec.to_map()
            }
            ChannelKind::Named { family, params } => {
                let family = self.named_family(family, params)?;
                family.to_map().map_err(CliError::domain)?
            }
        };
        if map.dim() != self.dim {
            return Err(CliError::new(
                DOMAIN,
                format!(
                    "payload dimension {} does not match declared {}",
                    map.dim(),
                    self.dim
                ),
            ));
        }
        if self.invert {
            map.inverse(DEFAULT_COND_LIMIT).map_err(CliError::from_core)
        } else {
            Ok(map)
        }
    }

    fn named_family(
        &self,
        family: &str,
        params: &BTreeMap<String, f64>,
    ) -> Result<NamedFamily, CliError> {
        Ok(match family {
            "amplitude_damping" => NamedFamily::AmplitudeDamping {
                epsilon: param(params, "epsilon")?,
            },
            "generalized_amplitude_damping" => NamedFamily::GeneralizedAmplitudeDamping {
                y: param(params, "y")?,
                n: param(params, "n")?,
            },
            "depolarizing" => NamedFamily::Depolarizing {
                dim: self.dim,
                epsilon: param(params, "epsilon")?,
            },
            "dephasing_qubit" => NamedFamily::DephasingQubit {
                epsilon: param(params, "epsilon")?,
            },
            other => {
                return Err(CliError::new(
                    PARSE,
                    format!("unknown channel family '{other}'"),
                ))
            }
        })
    }
}

/// A serialized state: either a ket (auto-promoted and normalized to a pure
/// density matrix) or a density matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub format: u32,
    #[serde(flatten)]
    pub kind: StateKind,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateKind {
    Ket { amplitudes: Vec<[f64; 2]> },
    DensityMatrix { matrix: CMatrix },
}

impl StateFile {
    pub fn to_density(&self) -> Result<CMatrix, CliError> {
        check_format(self.format)?;
        match &self.kind {
            StateKind::Ket { amplitudes } => {
                let d = amplitudes.len();
                if d == 0 {
                    return Err(CliError::new(DOMAIN, "empty ket".to_string()));
                }
                let norm_sq: f64 = amplitudes.iter().map(|[re, im]| re * re + im * im).sum();
                if norm_sq <= 0.0 {
                    return Err(CliError::new(DOMAIN, "ket has zero norm".to_string()));
                }
                let scale = 1.0 / norm_sq.sqrt();
                let psi: Vec<C64> = amplitudes
                    .iter()
                    .map(|[re, im]| C64::new(re * scale, im * scale))
                    .collect();
                Ok(CMatrix::from_fn(d, d, |i, j| psi[i] * psi[j].conj()))
            }
            StateKind::DensityMatrix { matrix } => {
                if !matrix.is_square() {
                    return Err(CliError::new(
                        DOMAIN,
                        "density matrix is not square".to_string(),
                    ));
                }
                Ok(matrix.clone())
            }
        }
    }
}

/// A diagonal observable, sparse over basis indices; absent indices are 0.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObservableFile {
    pub format: u32,
    pub n_qubits: usize,
    pub values: Vec<(u64, f64)>,
}

impl ObservableFile {
    pub fn to_observable(&self) -> Result<qpd::mitigation::DiagObservable, CliError> {
        check_format(self.format)?;
        qpd::mitigation::DiagObservable::from_sparse(self.n_qubits, &self.values)
            .map_err(CliError::domain)
    }
}

/// A serialized quasiprobability decomposition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub format: u32,
    pub dim: usize,
    pub method: String,
    pub nu: f64,
    pub total_cost: f64,
    pub terms: Vec<DecompositionTerm>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionTerm {
    pub eta: f64,
    pub choi: CMatrix,
}

impl DecompositionFile {
    pub fn from_decomposition(
        method: &str,
        dec: &qpd::implementability::QuasiDecomposition,
    ) -> Self {
        Self {
            format: FORMAT_VERSION,
            dim: dec.dim(),
            method: method.to_string(),
            nu: dec.log_cost(),
            total_cost: dec.total_cost(),
            terms: dec
                .terms()
                .iter()
                .map(|(eta, channel)| DecompositionTerm {
                    eta: *eta,
                    choi: channel.choi().clone(),
                })
                .collect(),
        }
    }

    pub fn to_decomposition(&self) -> Result<qpd::implementability::QuasiDecomposition, CliError> {
        check_format(self.format)?;
        let terms = self
            .terms
            .iter()
            .map(|t| LinearMapRep::from_choi(self.dim, t.choi.clone()).map(|m| (t.eta, m)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(CliError::domain)?;
        qpd::implementability::QuasiDecomposition::new(terms).map_err(CliError::domain)
    }
}

/// Read and deserialize a JSON file, mapping IO and syntax problems to the
/// parse exit code.
pub fn load_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(PARSE, format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::new(PARSE, format!("cannot parse {}: {e}", path.display())))
}
