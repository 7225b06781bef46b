//! Hermitian structures: Kähler form, Lee form, the
//! Kähler/balanced/Gauduchon classification, `‖Ω‖`, and the dilatino
//! residuals.
//!
//! Conformal rescalings here are by constants only: invariance forces any
//! conformal factor to be constant, so the conformal transformation law of
//! the Lee form (`θ_ω + (n-1)dφ`) is exercised at `dφ = 0`: flags and the
//! Lee form itself are invariant under `g → c·g`, while `‖Ω‖` scales by
//! `c^{-n/2}`.

use num_complex::Complex64;

use crate::complex_structure::AlmostComplexStructure;
use crate::error::{Error, Result};
use crate::exterior::{Form, MetricTensor};
use crate::lie::LieAlgebra;
use crate::{PASS_TOL, PRUNE_EPS};

/// A metric compatible with an almost complex structure on a Lie algebra,
/// with the associated Kähler form `ω(V, W) = g(JV, W)` and an optional
/// holomorphic volume form `Ω` of type `(n, 0)`.
#[derive(Clone, Debug)]
pub struct HermitianData {
    alg: LieAlgebra,
    j: AlmostComplexStructure,
    g: MetricTensor,
    omega: Form,
    big_omega: Option<Form>,
    nijenhuis_residual: f64,
    compat_residual: f64,
    omega_type_residual: f64,
    omega_closed_residual: f64,
    volume_coefficient: f64,
}

/// Residual norms and flags of the Kähler / balanced / Gauduchon chain.
#[derive(Clone, Debug)]
pub struct Classification {
    /// `|dω|`
    pub d_omega_residual: f64,
    /// `|d(ω^{n-1})|`
    pub balanced_residual: f64,
    /// `|dd^c(ω^{n-1})|`
    pub gauduchon_residual: f64,
    /// `|θ_ω|`
    pub lee_norm: f64,
    /// `|d*θ_ω|`
    pub lee_costar_norm: f64,
    pub kahler: bool,
    pub balanced: bool,
    pub gauduchon: bool,
    pub tol: f64,
}

impl HermitianData {
    pub fn new(
        alg: LieAlgebra,
        j: AlmostComplexStructure,
        g: MetricTensor,
        big_omega: Option<Form>,
    ) -> Result<Self> {
        let dim = alg.dim();
        if j.dim() != dim {
            return Err(Error::DimensionMismatch(j.dim(), dim));
        }
        if g.dim() != dim {
            return Err(Error::DimensionMismatch(g.dim(), dim));
        }
        alg.require_jacobi()?;

        // compatibility g(J·, J·) = g
        let jm = j.matrix();
        let compat_residual = (jm.transpose() * g.matrix() * jm - g.matrix()).abs().max();
        if compat_residual > 1e-12 {
            return Err(Error::IncompatibleMetric(compat_residual));
        }

        // ω(e_i, e_j) = g(J e_i, e_j) = (Jᵀ g)_{ij}, antisymmetric by compatibility
        let wm = jm.transpose() * g.matrix();
        let mut omega = Form::zero(dim);
        for a in 0..dim {
            for b in (a + 1)..dim {
                if wm[(a, b)].abs() >= PRUNE_EPS {
                    omega = omega.add(&Form::monomial_re(dim, &[a + 1, b + 1], wm[(a, b)]));
                }
            }
        }

        let n = dim / 2;
        let top = power(&omega, n)?.scale_re(1.0 / factorial(n));
        let all: Vec<usize> = (1..=dim).collect();
        let vol = top.coeff(&all);
        if vol.re <= 0.0 || vol.im.abs() > 1e-12 {
            return Err(Error::OrientationMismatch(vol.re));
        }

        let nijenhuis_residual = j.nijenhuis(&alg);

        let (omega_type_residual, omega_closed_residual) = match &big_omega {
            None => (0.0, 0.0),
            Some(big) => {
                if big.degree() != Some(n) {
                    return Err(Error::OmegaWrongType {
                        n,
                        residual: f64::INFINITY,
                    });
                }
                let proj = j.pq_project(big, n, 0)?;
                let type_res = big.sub(&proj).norm_sup();
                if type_res > PASS_TOL {
                    return Err(Error::OmegaWrongType {
                        n,
                        residual: type_res,
                    });
                }
                (type_res, alg.ce_differential(big).norm_sup())
            }
        };

        Ok(HermitianData {
            alg,
            j,
            g,
            omega,
            big_omega,
            nijenhuis_residual,
            compat_residual,
            omega_type_residual,
            omega_closed_residual,
            volume_coefficient: vol.re,
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.alg
    }

    pub fn complex_structure(&self) -> &AlmostComplexStructure {
        &self.j
    }

    pub fn metric(&self) -> &MetricTensor {
        &self.g
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn n(&self) -> usize {
        self.alg.dim() / 2
    }

    /// The Kähler form `ω = g(J·, ·)`, a real (1,1)-form.
    pub fn kahler_form(&self) -> &Form {
        &self.omega
    }

    pub fn holomorphic_volume(&self) -> Option<&Form> {
        self.big_omega.as_ref()
    }

    pub fn nijenhuis_residual(&self) -> f64 {
        self.nijenhuis_residual
    }

    pub fn compat_residual(&self) -> f64 {
        self.compat_residual
    }

    pub fn omega_type_residual(&self) -> f64 {
        self.omega_type_residual
    }

    /// `|dΩ|`, recorded at construction (not enforced).
    pub fn omega_closed_residual(&self) -> f64 {
        self.omega_closed_residual
    }

    /// Coefficient of `ω^n/n!` on `e^{1...2n}`; positive by construction.
    pub fn volume_coefficient(&self) -> f64 {
        self.volume_coefficient
    }

    pub fn d(&self, a: &Form) -> Form {
        self.alg.ce_differential(a)
    }

    /// `d* = -*d*`.
    pub fn codifferential(&self, a: &Form) -> Result<Form> {
        a.codifferential(&self.g, |f| self.alg.ce_differential(f))
    }

    /// `ω^{n-1}` (no factorial normalization).
    pub fn omega_power(&self, k: usize) -> Result<Form> {
        power(&self.omega, k)
    }

    /// Lee form `θ_ω = Λ_ω dω`, cross-checked against `J d*ω` where `J` acts
    /// on 1-forms by `(Jβ)(X) = -β(JX)`. Disagreement beyond 1e-10 is an
    /// internal convention fault and a hard error.
    pub fn lee_form(&self) -> Result<Form> {
        let d_omega = self.d(&self.omega);
        let theta = d_omega.lambda_contract(&self.omega)?;
        let costar = self.codifferential(&self.omega)?;
        let cross = self.j.weighted_action(&costar);
        let disagreement = theta.sub(&cross).norm_sup();
        if disagreement > 1e-10 {
            return Err(Error::LeeConventionFault(disagreement));
        }
        Ok(theta)
    }

    pub fn classify(&self) -> Result<Classification> {
        self.classify_with_tol(PASS_TOL)
    }

    /// Classification residuals and flags at the given tolerance; flags are
    /// clamped to the monotone chain Kähler ⇒ balanced ⇒ Gauduchon, which
    /// only matters for borderline numerics.
    pub fn classify_with_tol(&self, tol: f64) -> Result<Classification> {
        self.j.require_integrable(&self.alg)?;
        let n = self.n();
        let d_omega_residual = self.d(&self.omega).norm_sup();
        let omega_nm1 = self.omega_power(n - 1)?;
        let balanced_residual = self.d(&omega_nm1).norm_sup();
        let dc_nm1 = self.j.dc(&self.alg, &omega_nm1)?;
        let gauduchon_residual = self.d(&dc_nm1).norm_sup();
        let lee = self.lee_form()?;
        let lee_norm = lee.norm_sup();
        let lee_costar_norm = self.codifferential(&lee)?.norm_sup();

        let kahler = d_omega_residual < tol;
        let balanced = kahler || balanced_residual < tol;
        let gauduchon = balanced || gauduchon_residual < tol;
        Ok(Classification {
            d_omega_residual,
            balanced_residual,
            gauduchon_residual,
            lee_norm,
            lee_costar_norm,
            kahler,
            balanced,
            gauduchon,
            tol,
        })
    }

    /// The positive scalar with `‖Ω‖² ω^n/n! = (-1)^{n(n-1)/2} i^n Ω ∧ Ω̄`.
    /// Constant for invariant data.
    pub fn omega_norm(&self) -> Result<f64> {
        let big = self.big_omega.as_ref().ok_or(Error::MissingOmega)?;
        let n = self.n();
        let pairing = big.wedge(&big.conj())?;
        let all: Vec<usize> = (1..=self.dim()).collect();
        let raw = pairing.coeff(&all);
        let phase = Complex64::new(if n * (n - 1) / 2 % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
            * Complex64::i().powi(n as i32);
        let value = phase * raw;
        if value.im.abs() > 1e-9 * (1.0 + value.re.abs()) || value.re <= 0.0 {
            return Err(Error::OrientationMismatch(value.re));
        }
        Ok((value.re / self.volume_coefficient).sqrt())
    }

    /// Dilatino residual pair:
    /// `(|d*ω - d^c log‖Ω‖|, |d(‖Ω‖ ω^{n-1})|)`.
    ///
    /// For invariant data `‖Ω‖` is constant, so the `d^c log‖Ω‖` term
    /// vanishes and the first component reduces to `|d*ω|`. The two
    /// components vanish together.
    pub fn dilatino_residual(&self) -> Result<(f64, f64)> {
        let norm = self.omega_norm()?;
        self.j.require_integrable(&self.alg)?;
        let costar = self.codifferential(&self.omega)?;
        let r1 = costar.norm_sup();
        let omega_nm1 = self.omega_power(self.n() - 1)?;
        let r2 = norm * self.d(&omega_nm1).norm_sup();
        Ok((r1, r2))
    }

    /// Same data with a replaced metric (used for conformal rescaling).
    pub fn with_metric(&self, g: MetricTensor) -> Result<Self> {
        HermitianData::new(
            self.alg.clone(),
            self.j.clone(),
            g,
            self.big_omega.clone(),
        )
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product::<f64>().max(1.0)
}

fn power(base: &Form, k: usize) -> Result<Form> {
    let mut acc = Form::scalar_re(base.dim(), 1.0);
    for _ in 0..k {
        acc = acc.wedge(base)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use nalgebra::DMatrix;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    const SQRT8: f64 = 2.828427124746190097603377448419396157; // ‖Ω‖ for g = Id

    #[test]
    fn kahler_form_of_flat_data() {
        let h = samples::torus6_data();
        assert!(h
            .kahler_form()
            .sub(&samples::standard_omega(6))
            .norm_sup()
            .eq(&0.0));
    }

    #[test]
    fn kahler_form_of_iwasawa_unit_metric() {
        // ω = (i/2) Σ θ_j ∧ θ̄_j for g = Id; the literature normalization
        // i Σ θ_j ∧ θ̄_j is the same structure at metric 2·Id.
        let h = samples::iwasawa_data();
        let mut expect = Form::zero(6);
        for jj in 1..=3 {
            let t = samples::theta(6, jj);
            expect = expect.add(
                &t.wedge(&t.conj())
                    .unwrap()
                    .scale(Complex64::new(0.0, 0.5)),
            );
        }
        assert!(h.kahler_form().sub(&expect).norm_sup() < 1e-14);
        assert!(h.kahler_form().is_real());
    }

    #[test]
    fn sl2c_kahler_form_scales_as_t_squared() {
        // ω_t = (i t²/2) Σ σ^j ∧ σ̄^j; in the rescaled basis it is the
        // standard form, and the sample uses that basis with g = Id.
        let h = samples::sl2c_data(2.0);
        assert!(h.kahler_form().sub(&samples::standard_omega(6)).norm_sup() < 1e-14);
    }

    #[test]
    fn incompatible_metric_is_rejected() {
        let alg = LieAlgebra::abelian(6);
        let j = AlmostComplexStructure::standard(6);
        let mut m = DMatrix::<f64>::identity(6, 6);
        m[(0, 0)] = 2.0; // breaks g(J·,J·) = g against the (1,2) block pairing
        let g = MetricTensor::new(m).unwrap();
        assert!(matches!(
            HermitianData::new(alg, j, g, None),
            Err(Error::IncompatibleMetric(_))
        ));
    }

    #[test]
    fn lee_form_vanishes_on_flat_and_iwasawa() {
        assert!(samples::torus6_data().lee_form().unwrap().is_zero());
        assert!(samples::iwasawa_data().lee_form().unwrap().is_zero());
    }

    #[test]
    fn lee_form_of_hopf_points_along_the_r_factor() {
        // dω = -e^{124}, Λ_ω dω = -e^4: frozen from the hand expansion of
        // the su(2)⊕R structure with J e₃ = e₄ and g = Id.
        let h = samples::hopf4_data();
        let lee = h.lee_form().unwrap();
        assert!((lee.coeff(&[4]) - Complex64::new(-1.0, 0.0)).norm() < 1e-13);
        assert!(lee.sub(&Form::monomial_re(4, &[4], -1.0)).norm_sup() < 1e-13);
    }

    #[test]
    fn classification_of_reference_models() {
        let torus = samples::torus6_data().classify().unwrap();
        assert!(torus.kahler && torus.balanced && torus.gauduchon);

        let iwa = samples::iwasawa_data().classify().unwrap();
        assert!(!iwa.kahler, "dω ≠ 0");
        assert!(iwa.d_omega_residual > 0.1);
        assert!(iwa.balanced && iwa.gauduchon);

        let hopf = samples::hopf4_data().classify().unwrap();
        assert!(!hopf.kahler && !hopf.balanced);
        assert!(hopf.gauduchon);

        let aff = samples::affc4_data().classify().unwrap();
        assert!(!aff.kahler && !aff.balanced && !aff.gauduchon);
    }

    #[test]
    fn iwasawa_is_balanced_via_d_omega_wedge_omega() {
        let h = samples::iwasawa_data();
        let d_omega = h.d(h.kahler_form());
        assert!(d_omega.norm_sup() > 0.1);
        let wedge = d_omega.wedge(h.kahler_form()).unwrap();
        assert!(wedge.norm_sup() < 1e-14, "dω ∧ ω = 0");
    }

    #[test]
    fn omega_norm_reference_value_and_scaling() {
        // ‖Ω‖² ω³/3! = i³(-1)³ Ω∧Ω̄ gives ‖Ω‖ = √8 for g = Id; identical
        // pointwise algebra on the abelian model.
        let iwa = samples::iwasawa_data();
        assert!((iwa.omega_norm().unwrap() - SQRT8).abs() < 1e-13);
        let torus = samples::torus6_data();
        assert!((torus.omega_norm().unwrap() - SQRT8).abs() < 1e-13);

        // g → c·g multiplies ‖Ω‖ by c^{-n/2}
        for c in [0.5f64, 2.0, 3.7] {
            let scaled = iwa
                .with_metric(MetricTensor::scaled_identity(6, c).unwrap())
                .unwrap();
            let expect = SQRT8 * c.powf(-1.5);
            assert!((scaled.omega_norm().unwrap() - expect).abs() < 1e-12 * (1.0 + expect));
        }
    }

    #[test]
    fn omega_norm_requires_the_volume_form() {
        let h = samples::hopf4_data_without_volume();
        assert!(matches!(h.omega_norm(), Err(Error::MissingOmega)));
    }

    #[test]
    fn omega_of_wrong_type_is_rejected() {
        let alg = samples::iwasawa_algebra();
        let j = AlmostComplexStructure::standard(6);
        let g = MetricTensor::identity(6);
        // θ̄₁ ∧ θ₂ ∧ θ₃ has type (2,1), not (3,0)
        let bad = samples::theta(6, 1)
            .conj()
            .wedge(&samples::theta(6, 2))
            .unwrap()
            .wedge(&samples::theta(6, 3))
            .unwrap();
        assert!(matches!(
            HermitianData::new(alg, j, g, Some(bad)),
            Err(Error::OmegaWrongType { .. })
        ));
    }

    #[test]
    fn dilatino_residuals() {
        let (r1, r2) = samples::iwasawa_data().dilatino_residual().unwrap();
        assert!(r1 < 1e-13 && r2 < 1e-13);
        for t in [0.7f64, 1.0, 2.0] {
            let (r1, r2) = samples::sl2c_data(t).dilatino_residual().unwrap();
            assert!(r1 < 1e-12 && r2 < 1e-12, "t = {t}");
        }
        let (r1, r2) = samples::hopf4_data().dilatino_residual().unwrap();
        assert!(r1 > 0.1 && r2 > 0.1, "nonzero Lee form: {r1}, {r2}");
    }

    #[test]
    fn conformal_rescaling_preserves_flags_and_lee_form() {
        let mut rng = StdRng::seed_from_u64(41);
        for h in [
            samples::iwasawa_data(),
            samples::hopf4_data(),
            samples::affc4_data(),
        ] {
            let base_class = h.classify().unwrap();
            let base_lee = h.lee_form().unwrap();
            for _ in 0..3 {
                let c: f64 = rng.gen_range(0.3..4.0);
                let scaled = h
                    .with_metric(MetricTensor::new(h.metric().matrix().scale(c)).unwrap())
                    .unwrap();
                let class = scaled.classify().unwrap();
                assert_eq!(class.kahler, base_class.kahler);
                assert_eq!(class.balanced, base_class.balanced);
                assert_eq!(class.gauduchon, base_class.gauduchon);
                let lee = scaled.lee_form().unwrap();
                assert!(lee.sub(&base_lee).norm_sup() < 1e-10);
            }
        }
    }

    #[test]
    fn d_omega_power_equals_lee_wedge_omega_power() {
        // dω^{n-1} = θ_ω ∧ ω^{n-1} on random compatible metrics
        let mut rng = StdRng::seed_from_u64(43);
        for base in [
            samples::iwasawa_data(),
            samples::hopf4_data_without_volume(),
            samples::affc4_data(),
            samples::sl2c_data(1.3),
        ] {
            for _ in 0..4 {
                let dim = base.dim();
                let raw = DMatrix::<f64>::from_fn(dim, dim, |_, _| rng.gen_range(-0.6..0.6));
                let g = samples::compatibilize(
                    raw.transpose() * &raw + DMatrix::identity(dim, dim),
                    base.complex_structure(),
                )
                .unwrap();
                let h = base.with_metric(g).unwrap();
                let n = h.n();
                let omega_nm1 = h.omega_power(n - 1).unwrap();
                let lhs = h.d(&omega_nm1);
                let rhs = h.lee_form().unwrap().wedge(&omega_nm1).unwrap();
                assert!(lhs.sub(&rhs).norm_sup() < 1e-10);
            }
        }
    }

    #[test]
    fn dilatino_components_vanish_together() {
        let mut rng = StdRng::seed_from_u64(47);
        for base in [
            samples::iwasawa_data(),
            samples::sl2c_data(1.0),
            samples::hopf4_data(),
            samples::affc4_data(),
        ] {
            for _ in 0..5 {
                let dim = base.dim();
                let raw = DMatrix::<f64>::from_fn(dim, dim, |_, _| rng.gen_range(-0.6..0.6));
                let g = samples::compatibilize(
                    raw.transpose() * &raw + DMatrix::identity(dim, dim),
                    base.complex_structure(),
                )
                .unwrap();
                let h = base.with_metric(g).unwrap();
                let (r1, r2) = h.dilatino_residual().unwrap();
                assert_eq!(r1 < 1e-9, r2 < 1e-9, "r1 = {r1}, r2 = {r2}");
            }
        }
    }
}
