//! Model-file schema and loader.
//!
//! A model file is a single TOML document describing a Lie algebra (by real
//! structure constants or complex coframe differentials), a complex
//! structure, a compatible metric, an optional holomorphic volume form,
//! named connections, and an optional request to check the full coupled
//! system. Indices are 1-based, matching the basis notation `e^1 ... e^{2n}`
//! and the coframe `θ_j = e^{2j-1} + i e^{2j}`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Deserialize;
use thiserror::Error;

use stromcheck_core::complex_structure::AlmostComplexStructure;
use stromcheck_core::exterior::{Form, MetricTensor};
use stromcheck_core::gauge::{self, Connection};
use stromcheck_core::hermitian::HermitianData;
use stromcheck_core::lie::{CoframeTerm, LieAlgebra};
use stromcheck_core::strominger::{AlphaSpec, StromingerModel};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("model file parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("structural invariant violated: {0}")]
    Structural(#[from] stromcheck_core::Error),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub name: String,
    pub dimension: usize,
    /// entries `[i, j, k, value]`: the `e_k`-component of `[e_i, e_j]`
    #[serde(default)]
    pub structure_constants: Option<Vec<(usize, usize, usize, f64)>>,
    /// coframe relations `dθ_target = Σ coeff·θ_i∧θ_j`; negative indices
    /// denote conjugated coframes (`i = -2` means `θ̄₂`)
    #[serde(default)]
    pub coframe_differentials: Option<Vec<CoframeDiffSpec>>,
    #[serde(default)]
    pub complex_structure: Option<ComplexStructureSpec>,
    #[serde(default)]
    pub metric: Option<MetricSpec>,
    #[serde(default)]
    pub omega_form: Option<OmegaSpec>,
    #[serde(default)]
    pub connections: BTreeMap<String, ConnectionSpec>,
    #[serde(default)]
    pub strominger: Option<StromingerSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoframeDiffSpec {
    pub target: usize,
    pub terms: Vec<CoframeTermSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoframeTermSpec {
    pub i: i64,
    pub j: i64,
    /// complex coefficient `[re, im]`
    pub coeff: [f64; 2],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ComplexStructureSpec {
    Standard,
    Matrix { matrix: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MetricSpec {
    Identity,
    Scaled { scale: f64 },
    Matrix { matrix: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OmegaSpec {
    /// `Ω = θ₁ ∧ ... ∧ θ_n`
    CoframeVolume,
    /// sum of coframe monomials `coeff · θ_{i1} ∧ ... ∧ θ_{in}`
    Terms { terms: Vec<OmegaTermSpec> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaTermSpec {
    pub indices: Vec<usize>,
    pub coeff: [f64; 2],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConnectionSpec {
    Bismut,
    Chern,
    LeviCivita,
    Flat {
        rank: usize,
    },
    /// one rank×rank complex matrix (entries `[re, im]`) per basis direction
    Matrices {
        matrices: Vec<Vec<Vec<[f64; 2]>>>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StromingerSpec {
    pub nabla: String,
    pub a: String,
    pub alpha: AlphaField,
    /// constant rescaling of the identity fiber metric on `A`
    /// (informational: flags are invariant under homothety)
    #[serde(default)]
    pub fiber_scale: Option<f64>,
}

/// `alpha = 1.0` or `alpha = "solve"`.
#[derive(Debug, Clone, Copy)]
pub enum AlphaField {
    Number(f64),
    Solve,
}

impl<'de> Deserialize<'de> for AlphaField {
    fn deserialize<D>(de: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(de)? {
            Raw::Number(x) => Ok(AlphaField::Number(x)),
            Raw::Text(s) if s == "solve" => Ok(AlphaField::Solve),
            Raw::Text(s) => Err(serde::de::Error::custom(format!(
                "alpha must be a number or \"solve\", got {s:?}"
            ))),
        }
    }
}

/// Everything the checker needs, assembled and validated.
pub struct BuiltModel {
    pub name: String,
    pub hermitian: HermitianData,
    pub connections: BTreeMap<String, Connection>,
    pub strominger: Option<StromingerModel>,
    pub strict_names: Option<(String, String)>,
    pub fiber_scale: f64,
}

impl ModelFile {
    pub fn parse(src: &str) -> Result<Self, ModelError> {
        Ok(toml::from_str(src)?)
    }

    pub fn build(&self) -> Result<BuiltModel, ModelError> {
        let dim = self.dimension;
        if dim == 0 || dim % 2 != 0 || dim > 12 {
            return Err(ModelError::Schema(format!(
                "dimension must be an even number in 2..=12, got {dim}"
            )));
        }

        let alg = self.build_algebra(dim)?;
        alg.require_jacobi()?;

        let j = match &self.complex_structure {
            None | Some(ComplexStructureSpec::Standard) => AlmostComplexStructure::standard(dim),
            Some(ComplexStructureSpec::Matrix { matrix }) => {
                AlmostComplexStructure::new(to_matrix(matrix, dim, "complex_structure.matrix")?)?
            }
        };
        let standard_j = matches!(
            self.complex_structure,
            None | Some(ComplexStructureSpec::Standard)
        );
        if self.coframe_differentials.is_some() && !standard_j {
            return Err(ModelError::Schema(
                "coframe_differentials fix the coframe θ_j = e^{2j-1} + i e^{2j} and \
                 require the standard complex structure"
                    .into(),
            ));
        }

        let g = match &self.metric {
            None | Some(MetricSpec::Identity) => MetricTensor::identity(dim),
            Some(MetricSpec::Scaled { scale }) => MetricTensor::scaled_identity(dim, *scale)?,
            Some(MetricSpec::Matrix { matrix }) => {
                MetricTensor::new(to_matrix(matrix, dim, "metric.matrix")?)?
            }
        };

        let big_omega = match &self.omega_form {
            None => None,
            Some(spec) => {
                if !standard_j {
                    return Err(ModelError::Schema(
                        "omega_form is declared in coframe monomials and requires the \
                         standard complex structure"
                            .into(),
                    ));
                }
                Some(self.build_omega(spec, dim)?)
            }
        };

        let hermitian = HermitianData::new(alg, j, g, big_omega)?;

        let mut connections = BTreeMap::new();
        for (name, spec) in &self.connections {
            let conn = match spec {
                ConnectionSpec::Bismut => gauge::bismut(&hermitian)?,
                ConnectionSpec::Chern => gauge::chern(&hermitian)?,
                ConnectionSpec::LeviCivita => gauge::levi_civita(&hermitian),
                ConnectionSpec::Flat { rank } => Connection::flat(dim, *rank),
                ConnectionSpec::Matrices { matrices } => {
                    if matrices.len() != dim {
                        return Err(ModelError::Schema(format!(
                            "connection {name:?} needs one matrix per basis direction \
                             ({dim}), got {}",
                            matrices.len()
                        )));
                    }
                    let rank = matrices[0].len();
                    let coeffs = matrices
                        .iter()
                        .map(|m| to_cmatrix(m, rank, name))
                        .collect::<Result<Vec<_>, _>>()?;
                    Connection::new(dim, rank, coeffs, rank == dim)?
                }
            };
            connections.insert(name.clone(), conn);
        }

        let (strominger, strict_names, fiber_scale) = match &self.strominger {
            None => (None, None, 1.0),
            Some(spec) => {
                let nabla = connections.get(&spec.nabla).ok_or_else(|| {
                    ModelError::Schema(format!("strominger.nabla names unknown connection {:?}", spec.nabla))
                })?;
                let a = connections.get(&spec.a).ok_or_else(|| {
                    ModelError::Schema(format!("strominger.a names unknown connection {:?}", spec.a))
                })?;
                let alpha = match spec.alpha {
                    AlphaField::Number(x) => AlphaSpec::Given(x),
                    AlphaField::Solve => AlphaSpec::Solve,
                };
                let scale = spec.fiber_scale.unwrap_or(1.0);
                if scale <= 0.0 {
                    return Err(ModelError::Schema("fiber_scale must be positive".into()));
                }
                let model =
                    StromingerModel::new(hermitian.clone(), nabla.clone(), a.clone(), alpha)?;
                (
                    Some(model),
                    Some((spec.nabla.clone(), spec.a.clone())),
                    scale,
                )
            }
        };

        Ok(BuiltModel {
            name: self.name.clone(),
            hermitian,
            connections,
            strominger,
            strict_names,
            fiber_scale,
        })
    }

    fn build_algebra(&self, dim: usize) -> Result<LieAlgebra, ModelError> {
        match (&self.structure_constants, &self.coframe_differentials) {
            (Some(_), Some(_)) => Err(ModelError::Schema(
                "declare either structure_constants or coframe_differentials, not both".into(),
            )),
            (Some(entries), None) => Ok(LieAlgebra::from_structure_constants(dim, entries)?),
            (None, Some(diffs)) => {
                let converted: Vec<(usize, Vec<CoframeTerm>)> = diffs
                    .iter()
                    .map(|d| {
                        let terms = d
                            .terms
                            .iter()
                            .map(|t| {
                                let conv = |v: i64| -> Result<(usize, bool), ModelError> {
                                    if v == 0 {
                                        return Err(ModelError::Schema(
                                            "coframe indices are 1-based; 0 is invalid".into(),
                                        ));
                                    }
                                    Ok((v.unsigned_abs() as usize, v < 0))
                                };
                                let (i, bar_i) = conv(t.i)?;
                                let (j, bar_j) = conv(t.j)?;
                                Ok(CoframeTerm {
                                    i,
                                    bar_i,
                                    j,
                                    bar_j,
                                    coeff: Complex64::new(t.coeff[0], t.coeff[1]),
                                })
                            })
                            .collect::<Result<Vec<_>, ModelError>>()?;
                        Ok((d.target, terms))
                    })
                    .collect::<Result<Vec<_>, ModelError>>()?;
                Ok(LieAlgebra::from_coframe_differentials(dim, &converted)?)
            }
            (None, None) => Ok(LieAlgebra::abelian(dim)),
        }
    }

    fn build_omega(&self, spec: &OmegaSpec, dim: usize) -> Result<Form, ModelError> {
        let n = dim / 2;
        let theta = |j: usize| -> Form {
            Form::basis_one(dim, 2 * j - 1)
                .add(&Form::basis_one(dim, 2 * j).scale(Complex64::i()))
        };
        match spec {
            OmegaSpec::CoframeVolume => {
                let mut big = Form::scalar_re(dim, 1.0);
                for j in 1..=n {
                    big = big.wedge(&theta(j)).expect("same dimension");
                }
                Ok(big)
            }
            OmegaSpec::Terms { terms } => {
                let mut big = Form::zero(dim);
                for t in terms {
                    if t.indices.len() != n {
                        return Err(ModelError::Schema(format!(
                            "omega_form terms must have {n} coframe indices"
                        )));
                    }
                    let mut mono = Form::scalar(dim, Complex64::new(t.coeff[0], t.coeff[1]));
                    for &i in &t.indices {
                        if i == 0 || i > n {
                            return Err(ModelError::Schema(format!(
                                "omega_form coframe index {i} out of range 1..={n}"
                            )));
                        }
                        mono = mono.wedge(&theta(i)).expect("same dimension");
                    }
                    big = big.add(&mono);
                }
                Ok(big)
            }
        }
    }
}

fn to_matrix(
    rows: &[Vec<f64>],
    dim: usize,
    what: &str,
) -> Result<nalgebra::DMatrix<f64>, ModelError> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(ModelError::Schema(format!("{what} must be {dim}x{dim}")));
    }
    Ok(nalgebra::DMatrix::from_fn(dim, dim, |r, c| rows[r][c]))
}

fn to_cmatrix(
    rows: &[Vec<[f64; 2]>],
    rank: usize,
    name: &str,
) -> Result<nalgebra::DMatrix<Complex64>, ModelError> {
    if rows.len() != rank || rows.iter().any(|r| r.len() != rank) {
        return Err(ModelError::Schema(format!(
            "connection {name:?}: each matrix must be {rank}x{rank}"
        )));
    }
    Ok(nalgebra::DMatrix::from_fn(rank, rank, |r, c| {
        Complex64::new(rows[r][c][0], rows[r][c][1])
    }))
}
