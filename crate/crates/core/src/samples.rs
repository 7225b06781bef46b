//! Reference algebras and hermitian structures used across the test suites,
//! the benchmark harness, and the command-line catalog.
//!
//! All structures use the standard complex structure and the coframe
//! `θ_j = e^{2j-1} + i e^{2j}`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::complex_structure::AlmostComplexStructure;
use crate::error::Result;
use crate::exterior::{Form, MetricTensor};
use crate::hermitian::HermitianData;
use crate::lie::{CoframeTerm, LieAlgebra};

/// Complex coframe 1-form `θ_j = e^{2j-1} + i e^{2j}`.
pub fn theta(dim: usize, j: usize) -> Form {
    Form::basis_one(dim, 2 * j - 1).add(&Form::basis_one(dim, 2 * j).scale(Complex64::i()))
}

/// `ω = e^{12} + e^{34} + ...`, the Kähler form of the flat pair (Id, standard J).
pub fn standard_omega(dim: usize) -> Form {
    let mut omega = Form::zero(dim);
    for b in 0..dim / 2 {
        omega = omega.add(&Form::monomial_re(dim, &[2 * b + 1, 2 * b + 2], 1.0));
    }
    omega
}

/// `Ω = θ_1 ∧ ... ∧ θ_n`, the coframe volume form.
pub fn theta_volume(dim: usize) -> Form {
    let mut big = Form::scalar_re(dim, 1.0);
    for j in 1..=dim / 2 {
        big = big.wedge(&theta(dim, j)).expect("same dimension");
    }
    big
}

/// Average a symmetric positive-definite matrix into a J-compatible metric:
/// `g = ½(g₀ + Jᵀ g₀ J)` stays SPD and satisfies `g(J·, J·) = g`.
pub fn compatibilize(g0: DMatrix<f64>, j: &AlmostComplexStructure) -> Result<MetricTensor> {
    let jm = j.matrix();
    let avg = (&g0 + jm.transpose() * &g0 * jm).scale(0.5);
    MetricTensor::new(avg)
}

/// Nilpotent algebra of the Iwasawa coframe relations:
/// `dθ₁ = dθ₃ = 0`, `dθ₂ = θ₁ ∧ θ₃`.
pub fn iwasawa_algebra() -> LieAlgebra {
    LieAlgebra::from_coframe_differentials(6, &[(2, vec![CoframeTerm::holo(1, 3, 1.0)])])
        .expect("valid coframe declaration")
}

/// The same algebra written out as real structure constants
/// (`de³ = e^{15} - e^{26}`, `de⁴ = e^{16} + e^{25}`).
pub fn iwasawa_entries() -> Vec<(usize, usize, usize, f64)> {
    vec![
        (1, 5, 3, -1.0),
        (2, 6, 3, 1.0),
        (1, 6, 4, -1.0),
        (2, 5, 4, -1.0),
    ]
}

/// sl(2,C) as a real 6-dimensional algebra in the rescaled coframe
/// `θ_j = t σ^j`, so `dθ₁ = (1/t) θ₂∧θ₃`, `dθ₂ = -(1/t) θ₁∧θ₃`,
/// `dθ₃ = (1/t) θ₁∧θ₂`. The metric `g = Id` in this basis is the invariant
/// metric `ω_t = (i t²/2) Σ σ^j ∧ σ̄^j`.
pub fn sl2c_algebra(t: f64) -> LieAlgebra {
    let s = 1.0 / t;
    LieAlgebra::from_coframe_differentials(
        6,
        &[
            (1, vec![CoframeTerm::holo(2, 3, s)]),
            (2, vec![CoframeTerm::holo(1, 3, -s)]),
            (3, vec![CoframeTerm::holo(1, 2, s)]),
        ],
    )
    .expect("valid coframe declaration")
}

/// su(2) ⊕ R with `e₄` central: the Hopf-surface algebra.
pub fn hopf4_algebra() -> LieAlgebra {
    LieAlgebra::from_structure_constants(
        4,
        &[(1, 2, 3, 1.0), (2, 3, 1, 1.0), (3, 1, 2, 1.0)],
    )
    .expect("valid structure constants")
}

/// Complex affine algebra `dθ₁ = 0`, `dθ₂ = θ₁∧θ₂`: integrable,
/// non-unimodular, neither balanced nor Gauduchon for any invariant metric
/// in the catalog family.
pub fn affc4_algebra() -> LieAlgebra {
    LieAlgebra::from_coframe_differentials(4, &[(2, vec![CoframeTerm::holo(1, 2, 1.0)])])
        .expect("valid coframe declaration")
}

/// Flat 6-torus data: abelian algebra, identity metric, coframe volume.
pub fn torus6_data() -> HermitianData {
    HermitianData::new(
        LieAlgebra::abelian(6),
        AlmostComplexStructure::standard(6),
        MetricTensor::identity(6),
        Some(theta_volume(6)),
    )
    .expect("flat reference data")
}

/// Iwasawa balanced structure with unit metric and `Ω = θ₁∧θ₂∧θ₃`.
pub fn iwasawa_data() -> HermitianData {
    HermitianData::new(
        iwasawa_algebra(),
        AlmostComplexStructure::standard(6),
        MetricTensor::identity(6),
        Some(theta_volume(6)),
    )
    .expect("Iwasawa reference data")
}

/// SL(2,C) structure at scale `t` in the rescaled basis (g = Id).
pub fn sl2c_data(t: f64) -> HermitianData {
    HermitianData::new(
        sl2c_algebra(t),
        AlmostComplexStructure::standard(6),
        MetricTensor::identity(6),
        Some(theta_volume(6)),
    )
    .expect("SL(2,C) reference data")
}

/// Hopf-surface structure with `Ω = θ₁∧θ₂` (of type (2,0) but not closed;
/// the model is not Calabi-Yau and the dilatino residuals are nonzero).
pub fn hopf4_data() -> HermitianData {
    HermitianData::new(
        hopf4_algebra(),
        AlmostComplexStructure::standard(4),
        MetricTensor::identity(4),
        Some(theta_volume(4)),
    )
    .expect("Hopf reference data")
}

/// Hopf-surface structure with no declared volume form.
pub fn hopf4_data_without_volume() -> HermitianData {
    HermitianData::new(
        hopf4_algebra(),
        AlmostComplexStructure::standard(4),
        MetricTensor::identity(4),
        None,
    )
    .expect("Hopf reference data")
}

/// Complex affine structure (classification counterexample family);
/// `Ω = θ₁∧θ₂` is closed here.
pub fn affc4_data() -> HermitianData {
    HermitianData::new(
        affc4_algebra(),
        AlmostComplexStructure::standard(4),
        MetricTensor::identity(4),
        Some(theta_volume(4)),
    )
    .expect("affine reference data")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coframe_and_structure_constant_declarations_agree() {
        let from_coframe = iwasawa_algebra();
        let from_entries = LieAlgebra::from_structure_constants(6, &iwasawa_entries()).unwrap();
        for k in 1..=6 {
            let a = from_coframe.ce_differential(&Form::basis_one(6, k));
            let b = from_entries.ce_differential(&Form::basis_one(6, k));
            assert!(a.sub(&b).norm_sup() < 1e-15, "de^{k}");
        }
    }

    #[test]
    fn reference_algebras_pass_structural_gates() {
        for (name, alg) in [
            ("iwasawa", iwasawa_algebra()),
            ("sl2c", sl2c_algebra(1.0)),
            ("sl2c_t3", sl2c_algebra(3.0)),
            ("hopf4", hopf4_algebra()),
            ("affc4", affc4_algebra()),
        ] {
            assert!(alg.require_jacobi().is_ok(), "{name}");
            let j = AlmostComplexStructure::standard(alg.dim());
            assert!(j.nijenhuis(&alg) < 1e-12, "{name} integrability");
        }
    }

    #[test]
    fn affc4_is_not_unimodular() {
        let (uni, traces) = affc4_algebra().is_unimodular();
        assert!(!uni);
        assert!(traces.iter().any(|t| t.abs() > 0.5));
    }
}
