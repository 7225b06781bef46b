//! Orchestration: parse a model file, run every check, assemble the report.

use nalgebra::DMatrix;
use num_complex::Complex64;

use stromcheck_core::{PASS_TOL, PRUNE_EPS, STRUCT_TOL};

use crate::model::{BuiltModel, ModelError, ModelFile};
use crate::report::{
    ClassificationSection, OmegaSection, ReportDocument, StromingerSection, StructureSection,
    Tolerances, REPORT_SCHEMA_VERSION,
};

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub tol: f64,
    pub strict_hym_nabla: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            tol: PASS_TOL,
            strict_hym_nabla: true,
        }
    }
}

/// Parse, validate, and check a model document.
pub fn run_check_str(src: &str, opts: CheckOptions) -> Result<ReportDocument, ModelError> {
    let file = ModelFile::parse(src)?;
    let built = file.build()?;
    run_built(&built, opts)
}

/// Same, reading the document from a file.
pub fn run_check_path(
    path: &std::path::Path,
    opts: CheckOptions,
) -> Result<ReportDocument, ModelError> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| crate::model::ModelError::Schema(format!("cannot read model file: {e}")))?;
    run_check_str(&src, opts)
}

pub fn run_built(built: &BuiltModel, opts: CheckOptions) -> Result<ReportDocument, ModelError> {
    let h = &built.hermitian;
    let alg = h.algebra();
    let (unimodular, adjoint_traces) = alg.is_unimodular();
    let structure = StructureSection {
        jacobi_residual: alg.check_jacobi(),
        d_squared_residual: alg.d_squared_residual(),
        nijenhuis_residual: h.nijenhuis_residual(),
        metric_compat_residual: h.compat_residual(),
        unimodular,
        adjoint_traces,
    };

    let integrable = h.nijenhuis_residual() < STRUCT_TOL;
    let classification = if integrable {
        let class = h.classify_with_tol(opts.tol)?;
        let lee = h.lee_form()?;
        let lee_coefficients: Vec<f64> = (1..=h.dim()).map(|i| lee.coeff(&[i]).re).collect();
        Some(ClassificationSection {
            class,
            lee_coefficients,
        })
    } else {
        None
    };

    let omega = match h.holomorphic_volume() {
        Some(_) => Some(OmegaSection {
            type_residual: h.omega_type_residual(),
            closed_residual: h.omega_closed_residual(),
            norm: h.omega_norm()?,
        }),
        None => None,
    };

    let dilatino = if h.holomorphic_volume().is_some() && integrable {
        Some(h.dilatino_residual()?)
    } else {
        None
    };

    let strominger = match (&built.strominger, &built.strict_names) {
        (Some(model), Some((nabla_name, a_name))) => {
            let report = model.check_system_with(opts.tol, opts.strict_hym_nabla)?;
            let rank = model.a.rank();
            let fiber = DMatrix::<Complex64>::identity(rank, rank)
                .map(|z: Complex64| z * Complex64::new(built.fiber_scale, 0.0));
            let a_unitarity = model.a.unitarity_residual_with_metric(&fiber)?;
            Some(StromingerSection {
                report,
                nabla_name: nabla_name.clone(),
                a_name: a_name.clone(),
                a_unitarity,
            })
        }
        _ => None,
    };

    let structural_ok = structure.jacobi_residual < STRUCT_TOL
        && structure.metric_compat_residual < 1e-12
        && h.omega_type_residual() < opts.tol;
    let pass = structural_ok
        && strominger
            .as_ref()
            .map(|s| s.report.flags.all_pass)
            .unwrap_or(true);

    Ok(ReportDocument {
        schema_version: REPORT_SCHEMA_VERSION.to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        model: built.name.clone(),
        dimension: h.dim(),
        tolerances: Tolerances {
            pass_tol: opts.tol,
            struct_tol: STRUCT_TOL,
            prune_eps: PRUNE_EPS,
        },
        structure,
        classification,
        omega,
        dilatino,
        strominger,
        pass,
    })
}
