//! Almost complex structures, bidegree decomposition, and the operators
//! `∂`, `∂̄`, `d^c`.
//!
//! The weighted action `J α = (-1)^k α(J·, ..., J·)` on k-forms has
//! eigenvalue `i^{q-p}` on `(p,q)`-forms; it is exposed as
//! [`AlmostComplexStructure::weighted_action`] and used both for the Lee-form
//! cross-check and for the identity `d^c = J^{-1} d J`, which this module
//! verifies against the primary definition `d^c = i(∂ - ∂̄)`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::lie::LieAlgebra;
use crate::STRUCT_TOL;

/// Invariant almost complex structure, a real matrix with `J² = -Id`.
#[derive(Clone, Debug)]
pub struct AlmostComplexStructure {
    dim: usize,
    mat: DMatrix<f64>,
}

impl AlmostComplexStructure {
    pub fn new(mat: DMatrix<f64>) -> Result<Self> {
        let dim = mat.nrows();
        if !mat.is_square() {
            return Err(Error::Invalid("J must be square".into()));
        }
        let res = (&mat * &mat + DMatrix::<f64>::identity(dim, dim)).abs().max();
        if res > 1e-12 {
            return Err(Error::NotAlmostComplex(res));
        }
        Ok(AlmostComplexStructure { dim, mat })
    }

    /// The block structure `J e_{2j-1} = e_{2j}`, `J e_{2j} = -e_{2j-1}`, for
    /// which `θ_j = e^{2j-1} + i e^{2j}` is a (1,0)-coframe.
    pub fn standard(dim: usize) -> Self {
        assert!(dim % 2 == 0);
        let mut m = DMatrix::<f64>::zeros(dim, dim);
        for b in 0..dim / 2 {
            m[(2 * b + 1, 2 * b)] = 1.0;
            m[(2 * b, 2 * b + 1)] = -1.0;
        }
        AlmostComplexStructure { dim, mat: m }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    /// `J x` for a real coefficient vector.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|a| (0..self.dim).map(|b| self.mat[(a, b)] * x[b]).sum())
            .collect()
    }

    /// The pullback 1-form `e^i ∘ J`, i.e. row `i` of `J` as a form.
    fn row_form(&self, i: usize) -> Form {
        let mut f = Form::zero(self.dim);
        for b in 0..self.dim {
            let v = self.mat[(i - 1, b)];
            if v != 0.0 {
                f = f.add(&Form::basis_one(self.dim, b + 1).scale_re(v));
            }
        }
        f
    }

    /// (1,0)-part of the basis 1-form `e^i`: `½(e^i - i e^i∘J)`.
    fn pi10(&self, i: usize) -> Form {
        Form::basis_one(self.dim, i)
            .sub(&self.row_form(i).scale(Complex64::new(0.0, 1.0)))
            .scale_re(0.5)
    }

    /// (0,1)-part of the basis 1-form `e^i`: `½(e^i + i e^i∘J)`.
    fn pi01(&self, i: usize) -> Form {
        Form::basis_one(self.dim, i)
            .add(&self.row_form(i).scale(Complex64::new(0.0, 1.0)))
            .scale_re(0.5)
    }

    /// Weighted action `(Jα)_k = (-1)^k α(J·, ..., J·)`; the `(p,q)`
    /// eigenvalue is `i^{q-p}`.
    pub fn weighted_action(&self, a: &Form) -> Form {
        let mut out = Form::zero(self.dim);
        for (mask, coeff) in a.terms() {
            let mut wedge = Form::scalar_re(self.dim, 1.0);
            let mut k = 0usize;
            for p in 0..self.dim {
                if mask & (1 << p) != 0 {
                    wedge = wedge.wedge(&self.row_form(p + 1)).expect("same dim");
                    k += 1;
                }
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            out = out.add(&wedge.scale(coeff * Complex64::new(sign, 0.0)));
        }
        out
    }

    /// Inverse of [`Self::weighted_action`]: `J^{-1} = (-1)^k J` on degree k.
    pub fn weighted_action_inv(&self, a: &Form) -> Form {
        let acted = self.weighted_action(a);
        let mut out = Form::zero(self.dim);
        for k in acted.degrees() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            out = out.add(&acted.component(k).scale_re(sign));
        }
        out
    }

    /// Projection of a homogeneous `(p+q)`-form onto type `(p, q)`.
    ///
    /// The projections over all `(p, q)` with `p + q = k` are idempotent,
    /// mutually annihilating, and sum to the identity.
    pub fn pq_project(&self, a: &Form, p: usize, q: usize) -> Result<Form> {
        match a.degree() {
            None if a.is_zero() => return Ok(Form::zero(self.dim)),
            Some(k) if k == p + q => {}
            Some(k) => {
                return Err(Error::Invalid(format!(
                    "pq_project: form has degree {k}, requested type ({p},{q})"
                )))
            }
            None => {
                return Err(Error::Invalid(
                    "pq_project requires a homogeneous form".into(),
                ))
            }
        }
        let n2 = self.dim;
        let mut out = Form::zero(n2);
        for (mask, coeff) in a.terms() {
            // expand each factor into (1,0) + (0,1) parts, keep track of the
            // number of (1,0) factors chosen so far
            let mut acc: Vec<Form> = vec![Form::zero(n2); p + 2];
            acc[0] = Form::scalar_re(n2, 1.0);
            for b in 0..n2 {
                if mask & (1 << b) == 0 {
                    continue;
                }
                let f10 = self.pi10(b + 1);
                let f01 = self.pi01(b + 1);
                let mut next: Vec<Form> = vec![Form::zero(n2); p + 2];
                for (cnt, partial) in acc.iter().enumerate() {
                    if partial.is_zero() {
                        continue;
                    }
                    next[cnt] = next[cnt].add(&partial.wedge(&f01)?);
                    if cnt <= p {
                        next[cnt + 1] = next[cnt + 1].add(&partial.wedge(&f10)?);
                    }
                }
                acc = next;
            }
            out = out.add(&acc[p].scale(coeff));
        }
        Ok(out)
    }

    /// All nonzero bidegree components of a homogeneous form.
    pub fn bidegree_components(&self, a: &Form) -> Result<Vec<(usize, usize, Form)>> {
        let Some(k) = a.degree() else {
            if a.is_zero() {
                return Ok(vec![]);
            }
            return Err(Error::Invalid(
                "bidegree decomposition requires a homogeneous form".into(),
            ));
        };
        let mut comps = Vec::new();
        for p in 0..=k {
            let c = self.pq_project(a, p, k - p)?;
            if !c.is_zero() {
                comps.push((p, k - p, c));
            }
        }
        Ok(comps)
    }

    /// Max-norm of the Nijenhuis tensor
    /// `N(X,Y) = [JX, JY] - [X, Y] - J[JX, Y] - J[X, JY]` over basis pairs.
    pub fn nijenhuis(&self, alg: &LieAlgebra) -> f64 {
        let dim = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..dim {
            for j in (i + 1)..dim {
                let x = basis(dim, i);
                let y = basis(dim, j);
                let jx = self.apply(&x);
                let jy = self.apply(&y);
                let t1 = alg.bracket(&jx, &jy);
                let t2 = alg.bracket(&x, &y);
                let t3 = self.apply(&alg.bracket(&jx, &y));
                let t4 = self.apply(&alg.bracket(&x, &jy));
                for m in 0..dim {
                    worst = worst.max((t1[m] - t2[m] - t3[m] - t4[m]).abs());
                }
            }
        }
        worst
    }

    /// Bidegree-leakage residual: the norm of the `(0,2)` part of `d` applied
    /// to `(1,0)` basis projections (and conjugate). Vanishes together with
    /// the Nijenhuis tensor; the two characterizations are cross-checked in
    /// the test suite.
    pub fn dbar_leakage(&self, alg: &LieAlgebra) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 1..=self.dim {
            let f10 = self.pi10(i);
            let d = alg.ce_differential(&f10);
            if let Ok(bad) = self.pq_project(&d, 0, 2) {
                worst = worst.max(bad.norm_sup());
            }
            let f01 = self.pi01(i);
            let d = alg.ce_differential(&f01);
            if let Ok(bad) = self.pq_project(&d, 2, 0) {
                worst = worst.max(bad.norm_sup());
            }
        }
        worst
    }

    pub fn require_integrable(&self, alg: &LieAlgebra) -> Result<()> {
        let r = self.nijenhuis(alg);
        if r > STRUCT_TOL {
            return Err(Error::NotIntegrable(r));
        }
        Ok(())
    }

    /// `∂ a`: the `(p+1, q)` parts of `d a` over the bidegree components of `a`.
    /// Requires an integrable structure.
    pub fn partial(&self, alg: &LieAlgebra, a: &Form) -> Result<Form> {
        self.require_integrable(alg)?;
        self.split_d(alg, a, true)
    }

    /// `∂̄ a`: the `(p, q+1)` parts of `d a`.
    pub fn dbar(&self, alg: &LieAlgebra, a: &Form) -> Result<Form> {
        self.require_integrable(alg)?;
        self.split_d(alg, a, false)
    }

    fn split_d(&self, alg: &LieAlgebra, a: &Form, holo: bool) -> Result<Form> {
        let mut out = Form::zero(self.dim);
        for k in a.degrees() {
            for (p, q, comp) in self.bidegree_components(&a.component(k))? {
                let d = alg.ce_differential(&comp);
                if d.is_zero() {
                    continue;
                }
                let proj = if holo {
                    self.pq_project(&d, p + 1, q)?
                } else {
                    self.pq_project(&d, p, q + 1)?
                };
                out = out.add(&proj);
            }
        }
        Ok(out)
    }

    /// `d^c = i(∂ - ∂̄)`, the crate-wide convention (see the crate docs).
    /// Satisfies `d d^c = -d^c d` and `d d^c = 2i ∂̄∂`.
    pub fn dc(&self, alg: &LieAlgebra, a: &Form) -> Result<Form> {
        self.require_integrable(alg)?;
        let mut out = Form::zero(self.dim);
        for k in a.degrees() {
            for (p, q, comp) in self.bidegree_components(&a.component(k))? {
                let d = alg.ce_differential(&comp);
                if d.is_zero() {
                    continue;
                }
                let del = self.pq_project(&d, p + 1, q)?;
                let dbar = self.pq_project(&d, p, q + 1)?;
                out = out.add(&del.sub(&dbar).scale(Complex64::new(0.0, 1.0)));
            }
        }
        Ok(out)
    }

    /// Cross-check route `d^c = J^{-1} d J` through the weighted action;
    /// agrees with [`Self::dc`] on integrable structures.
    pub fn dc_via_weighted_action(&self, alg: &LieAlgebra, a: &Form) -> Form {
        self.weighted_action_inv(&alg.ce_differential(&self.weighted_action(a)))
    }
}

fn basis(dim: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[i] = 1.0;
    v
}
