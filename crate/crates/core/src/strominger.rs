//! Assembly of the Strominger-system residuals: both Hermite-Yang-Mills
//! conditions, the conformally-balanced (dilatino) equation, and the Bianchi
//! identity, plus the slope constant and the α-fitting procedure.

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::gauge::{self, Connection, CurvatureForm, Pairing};
use crate::hermitian::{Classification, HermitianData};
use crate::PASS_TOL;

/// Either a prescribed anomaly coefficient or a request to fit one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AlphaSpec {
    Given(f64),
    Solve,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlphaStatus {
    /// `α` was prescribed in the model.
    Given,
    /// Least-squares fit over 4-form coefficients; exact when the fit
    /// residual vanishes.
    Fitted,
    /// Both `dd^cω` and the Pontryagin difference vanish: any `α` works.
    /// Reported with the sentinel `α = 0`.
    Degenerate,
    /// The Pontryagin difference vanishes but `dd^cω` does not: no `α`
    /// exists. Reported with the sentinel `α = 0`.
    NoSolution,
}

#[derive(Clone, Copy, Debug)]
pub struct AlphaOutcome {
    pub alpha: f64,
    pub status: AlphaStatus,
    /// Sup-norm of `dd^cω - α·(Pontryagin difference)` at the reported `α`.
    pub residual: f64,
}

/// Full model for the system: hermitian data, tangent connection `∇`,
/// bundle connection `A`, the combined pairing, and the anomaly coefficient.
#[derive(Clone, Debug)]
pub struct StromingerModel {
    pub h: HermitianData,
    pub nabla: Connection,
    pub a: Connection,
    /// Pairing of the combined formulation on `∇ ⊕ A` at `α = 1`; scaled by
    /// `α` when used.
    pub pairing: Pairing,
    pub alpha: AlphaSpec,
}

/// Per-equation residual norms, flags at tolerance, and the embedded
/// hermitian classification.
#[derive(Clone, Debug)]
pub struct SystemReport {
    /// `(|iΛ_ω F_A|, |F_A^{0,2}|)`
    pub hym_a: (f64, f64),
    /// `(|iΛ_ω R_∇|, |R_∇^{0,2}|)`
    pub hym_nabla: (f64, f64),
    /// `|d(‖Ω‖ ω^{n-1})|`
    pub conf_balanced: f64,
    /// `|d*ω|` (the dilatino form of the same equation; `‖Ω‖` is constant)
    pub dilatino: f64,
    /// sup-norm of the Bianchi 4-form at `alpha_used`
    pub bianchi: f64,
    pub alpha_used: f64,
    pub alpha_status: AlphaStatus,
    /// `|dΩ|`
    pub omega_closed: f64,
    pub omega_norm: f64,
    /// metric-compatibility residual of `∇` (informational; not enforced)
    pub nabla_unitarity: f64,
    pub classification: Classification,
    pub strict_hym_nabla: bool,
    pub tol: f64,
    pub flags: SystemFlags,
}

#[derive(Clone, Copy, Debug)]
pub struct SystemFlags {
    pub hym_a: bool,
    pub hym_nabla: bool,
    pub conf_balanced: bool,
    pub bianchi: bool,
    pub all_pass: bool,
}

impl StromingerModel {
    /// Build a model with the default combined pairing (anomaly traces of
    /// `∇` and `-1` times those of `A`, at unit `α`).
    pub fn new(
        h: HermitianData,
        nabla: Connection,
        a: Connection,
        alpha: AlphaSpec,
    ) -> Result<Self> {
        let dim = h.dim();
        if nabla.dim() != dim || a.dim() != dim {
            return Err(Error::DimensionMismatch(nabla.dim(), dim));
        }
        if !nabla.is_tangent() {
            return Err(Error::Invalid(
                "∇ must be a tangent connection of rank 2n".into(),
            ));
        }
        if h.holomorphic_volume().is_none() {
            return Err(Error::MissingOmega);
        }
        let w_nabla = Pairing::anomaly_trace(&nabla).blocks()[0].1;
        let w_a = Pairing::anomaly_trace(&a).blocks()[0].1;
        let pairing = Pairing::new(vec![(nabla.rank(), w_nabla), (a.rank(), -w_a)])?;
        Ok(StromingerModel {
            h,
            nabla,
            a,
            pairing,
            alpha,
        })
    }

    pub fn curvatures(&self) -> (CurvatureForm, CurvatureForm) {
        (
            gauge::curvature(self.h.algebra(), &self.nabla),
            gauge::curvature(self.h.algebra(), &self.a),
        )
    }

    /// The 4-form `c(R_∇∧R_∇) - c(F_A∧F_A)` with the anomaly traces.
    pub fn pontryagin_difference(&self) -> Result<Form> {
        let (r, f) = self.curvatures();
        let p_nabla = gauge::c_square(&Pairing::anomaly_trace(&self.nabla), &r)?;
        let p_a = gauge::c_square(&Pairing::anomaly_trace(&self.a), &f)?;
        Ok(p_nabla.sub(&p_a))
    }

    /// Bianchi 4-form `dd^cω - α(c(R_∇∧R_∇) - c(F_A∧F_A))`.
    pub fn bianchi_residual(&self, alpha: f64) -> Result<Form> {
        let ddc = self.ddc_omega()?;
        let p = self.pontryagin_difference()?;
        Ok(ddc.sub(&p.scale_re(alpha)))
    }

    /// The same 4-form computed through the combined connection `∇ ⊕ A` and
    /// the model pairing: `dd^cω - c_α(F_θ ∧ F_θ)`. Agrees with
    /// [`Self::bianchi_residual`] by the block-splitting of the pairing.
    pub fn bianchi_residual_combined(&self, alpha: f64) -> Result<Form> {
        let theta = self.nabla.direct_sum(&self.a)?;
        let f = gauge::curvature(self.h.algebra(), &theta);
        let scaled = Pairing::new(
            self.pairing
                .blocks()
                .iter()
                .map(|&(d, w)| (d, w * alpha))
                .collect(),
        )?;
        let csq = gauge::c_square(&scaled, &f)?;
        Ok(self.ddc_omega()?.sub(&csq))
    }

    pub fn ddc_omega(&self) -> Result<Form> {
        let j = self.h.complex_structure();
        let alg = self.h.algebra();
        Ok(alg.ce_differential(&j.dc(alg, self.h.kahler_form())?))
    }

    /// Fit `α` from `dd^cω = α·P` over 4-form coefficients: exact ratio when
    /// the two forms are parallel, least squares otherwise, with the
    /// degenerate and obstructed cases flagged.
    pub fn solve_alpha(&self) -> Result<AlphaOutcome> {
        let ddc = self.ddc_omega()?;
        let p = self.pontryagin_difference()?;
        let p_norm = p.norm_sup();
        let b_norm = ddc.norm_sup();
        if p_norm < 1e-12 {
            if b_norm < 1e-12 {
                return Ok(AlphaOutcome {
                    alpha: 0.0,
                    status: AlphaStatus::Degenerate,
                    residual: 0.0,
                });
            }
            return Ok(AlphaOutcome {
                alpha: 0.0,
                status: AlphaStatus::NoSolution,
                residual: b_norm,
            });
        }
        // real least squares over the coefficient masks of P
        let mut dot_pb = 0.0;
        let mut dot_pp = 0.0;
        for (mask, v) in p.terms() {
            dot_pp += v.norm_sqr();
            let idx: Vec<usize> = (0..32)
                .filter(|q| mask & (1 << q) != 0)
                .map(|q| q + 1)
                .collect();
            let b = ddc.coeff(&idx);
            dot_pb += v.re * b.re + v.im * b.im;
        }
        let alpha = dot_pb / dot_pp;
        let residual = ddc.sub(&p.scale_re(alpha)).norm_sup();
        Ok(AlphaOutcome {
            alpha,
            status: AlphaStatus::Fitted,
            residual,
        })
    }

    pub fn check_system(&self) -> Result<SystemReport> {
        self.check_system_with(PASS_TOL, true)
    }

    /// Evaluate every residual of the system.
    ///
    /// `strict_hym_nabla = false` downgrades the `Λ_ω R_∇` condition to
    /// informational (the condition is often dropped in the literature); the
    /// flag is still reported, it just no longer gates `all_pass`.
    pub fn check_system_with(&self, tol: f64, strict_hym_nabla: bool) -> Result<SystemReport> {
        let omega_norm = self.h.omega_norm()?;
        let (dilatino, conf_balanced) = self.h.dilatino_residual()?;
        let classification = self.h.classify_with_tol(tol)?;
        let (r_nabla, f_a) = self.curvatures();
        let hym_nabla = gauge::hym_residual(&self.h, &r_nabla, 0.0)?;
        let hym_a = gauge::hym_residual(&self.h, &f_a, 0.0)?;

        let (alpha_used, alpha_status) = match self.alpha {
            AlphaSpec::Given(a) => (a, AlphaStatus::Given),
            AlphaSpec::Solve => {
                let out = self.solve_alpha()?;
                (out.alpha, out.status)
            }
        };
        let bianchi = self.bianchi_residual(alpha_used)?.norm_sup();
        let nabla_unitarity = self.nabla.metric_residual(self.h.metric())?;

        let flags = {
            let hym_a_ok = hym_a.0 < tol && hym_a.1 < tol;
            let hym_nabla_ok = hym_nabla.0 < tol && hym_nabla.1 < tol;
            let conf_ok = conf_balanced < tol;
            let bianchi_ok = bianchi < tol;
            SystemFlags {
                hym_a: hym_a_ok,
                hym_nabla: hym_nabla_ok,
                conf_balanced: conf_ok,
                bianchi: bianchi_ok,
                all_pass: hym_a_ok && conf_ok && bianchi_ok && (hym_nabla_ok || !strict_hym_nabla),
            }
        };
        Ok(SystemReport {
            hym_a,
            hym_nabla,
            conf_balanced,
            dilatino,
            bianchi,
            alpha_used,
            alpha_status,
            omega_closed: self.h.omega_closed_residual(),
            omega_norm,
            nabla_unitarity,
            classification,
            strict_hym_nabla,
            tol,
            flags,
        })
    }
}

/// Hermite-Einstein slope constant `λ = 2π/(n-1)! · deg/(r·Vol)`.
pub fn lambda_value(deg: f64, r: usize, vol: f64, n: usize) -> Result<f64> {
    if r == 0 {
        return Err(Error::NonPositive("rank", 0.0));
    }
    if vol <= 0.0 {
        return Err(Error::NonPositive("volume", vol));
    }
    if n == 0 {
        return Err(Error::NonPositive("complex dimension", 0.0));
    }
    let fact: f64 = (1..n).map(|x| x as f64).product::<f64>().max(1.0);
    Ok(2.0 * std::f64::consts::PI / fact * deg / (r as f64 * vol))
}
