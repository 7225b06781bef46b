//! Complexified exterior algebra over a fixed real basis `e^1, ..., e^{2n}`.
//!
//! A [`Form`] stores complex coefficients on strictly increasing index tuples,
//! encoded as bitmasks (bit `i-1` set means the factor `e^i` is present), so a
//! term key is canonical by construction and every sign in the module is
//! routed through the single permutation-parity routine [`merge_sign`].
//!
//! Mixed-degree forms are allowed; operations that are degree-sensitive
//! (Hodge star, interior product) act on each homogeneous component.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::PRUNE_EPS;

/// Parity sign of merging the index set `a` in front of the index set `b`:
/// `e^A ∧ e^B = merge_sign(A, B) · e^{A ∪ B}` for disjoint masks.
///
/// Counts pairs `(x, y)` with `x ∈ A`, `y ∈ B`, `x > y`.
pub fn merge_sign(a: u32, b: u32) -> f64 {
    let mut shifted = a >> 1;
    let mut inversions = 0u32;
    while shifted != 0 {
        inversions += (shifted & b).count_ones();
        shifted >>= 1;
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Invariant complex-coefficient exterior-algebra element.
#[derive(Clone, PartialEq)]
pub struct Form {
    dim: usize,
    terms: BTreeMap<u32, Complex64>,
}

impl Form {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= 30, "basis dimension must be at most 30");
        Form {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(dim: usize, value: Complex64) -> Self {
        let mut f = Form::zero(dim);
        f.add_term(0, value);
        f
    }

    pub fn scalar_re(dim: usize, value: f64) -> Self {
        Form::scalar(dim, Complex64::new(value, 0.0))
    }

    /// Basis 1-form `e^i` (1-based index).
    pub fn basis_one(dim: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= dim, "index {i} out of range 1..={dim}");
        let mut f = Form::zero(dim);
        f.add_term(1 << (i - 1), Complex64::new(1.0, 0.0));
        f
    }

    /// Monomial `c · e^{i1} ∧ ... ∧ e^{ik}` for arbitrary index order;
    /// repeated indices give the zero form.
    pub fn monomial(dim: usize, indices: &[usize], coeff: Complex64) -> Self {
        let mut f = Form::zero(dim);
        let mut mask = 0u32;
        let mut sign = 1.0;
        for &i in indices {
            assert!(i >= 1 && i <= dim, "index {i} out of range 1..={dim}");
            let bit = 1u32 << (i - 1);
            if mask & bit != 0 {
                return f;
            }
            sign *= merge_sign(mask, bit);
            mask |= bit;
        }
        f.add_term(mask, coeff * sign);
        f
    }

    /// Real monomial shortcut.
    pub fn monomial_re(dim: usize, indices: &[usize], coeff: f64) -> Self {
        Form::monomial(dim, indices, Complex64::new(coeff, 0.0))
    }

    /// Single term from a canonical index mask (bit `i-1` ↔ factor `e^i`).
    pub fn from_mask(dim: usize, mask: u32, coeff: Complex64) -> Self {
        let mut f = Form::zero(dim);
        f.add_term(mask, coeff);
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn add_term(&mut self, key: u32, value: Complex64) {
        let entry = self.terms.entry(key).or_insert(Complex64::new(0.0, 0.0));
        *entry += value;
        if entry.norm() < PRUNE_EPS {
            self.terms.remove(&key);
        }
    }

    /// Iterate `(mask, coefficient)` pairs in canonical (mask) order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, Complex64)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    /// Evaluate a homogeneous piece on a basis tuple in any order:
    /// `α(e_{i1}, ..., e_{ik})`, i.e. the coefficient with the permutation
    /// sign; repeated indices give zero.
    pub fn eval_indices(&self, indices: &[usize]) -> Complex64 {
        let mut mask = 0u32;
        let mut sign = 1.0;
        for &i in indices {
            let bit = 1u32 << (i - 1);
            if mask & bit != 0 {
                return Complex64::new(0.0, 0.0);
            }
            sign *= merge_sign(mask, bit);
            mask |= bit;
        }
        self.terms
            .get(&mask)
            .map(|&v| v * sign)
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Coefficient on the strictly increasing tuple `indices`.
    pub fn coeff(&self, indices: &[usize]) -> Complex64 {
        let mut mask = 0u32;
        for &i in indices {
            mask |= 1 << (i - 1);
        }
        debug_assert_eq!(mask.count_ones() as usize, indices.len());
        self.terms
            .get(&mask)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sup-norm over stored coefficients.
    pub fn norm_sup(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Degree if homogeneous, `None` for the zero form or mixed degrees.
    pub fn degree(&self) -> Option<usize> {
        let mut deg = None;
        for key in self.terms.keys() {
            let k = key.count_ones() as usize;
            match deg {
                None => deg = Some(k),
                Some(d) if d != k => return None,
                _ => {}
            }
        }
        deg
    }

    /// Degrees present in the form, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self.terms.keys().map(|k| k.count_ones() as usize).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// Homogeneous component of degree `k`.
    pub fn component(&self, k: usize) -> Form {
        let mut f = Form::zero(self.dim);
        for (&key, &v) in &self.terms {
            if key.count_ones() as usize == k {
                f.terms.insert(key, v);
            }
        }
        f
    }

    pub fn scale(&self, c: Complex64) -> Form {
        let mut f = Form::zero(self.dim);
        for (&key, &v) in &self.terms {
            let w = v * c;
            if w.norm() >= PRUNE_EPS {
                f.terms.insert(key, w);
            }
        }
        f
    }

    pub fn scale_re(&self, c: f64) -> Form {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn add(&self, other: &Form) -> Form {
        assert_eq!(self.dim, other.dim);
        let mut f = self.clone();
        for (&key, &v) in &other.terms {
            f.add_term(key, v);
        }
        f
    }

    /// In-place accumulation `self += c·other` (used on hot paths; the
    /// public value semantics stay immutable-by-convention).
    pub fn accumulate(&mut self, other: &Form, c: Complex64) {
        debug_assert_eq!(self.dim, other.dim);
        for (&key, &v) in &other.terms {
            self.add_term(key, v * c);
        }
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.scale_re(-1.0))
    }

    pub fn conj(&self) -> Form {
        let mut f = Form::zero(self.dim);
        for (&key, &v) in &self.terms {
            f.terms.insert(key, v.conj());
        }
        f
    }

    /// `true` when all coefficients are real up to the pruning threshold.
    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.abs() < PRUNE_EPS)
    }

    /// Exterior product. Bilinear, associative, graded-commutative.
    pub fn wedge(&self, other: &Form) -> Result<Form> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let mut f = Form::zero(self.dim);
        for (&ka, &va) in &self.terms {
            for (&kb, &vb) in &other.terms {
                if ka & kb != 0 {
                    continue;
                }
                f.add_term(ka | kb, va * vb * merge_sign(ka, kb));
            }
        }
        Ok(f)
    }

    /// Interior product with the vector `v = Σ v^i e_i` (0-based slice).
    /// A graded derivation of degree -1; `ι_v ι_v = 0`.
    pub fn interior(&self, v: &[Complex64]) -> Result<Form> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch(v.len(), self.dim));
        }
        if self.degree() == Some(0) {
            return Err(Error::DegreeTooLow { min: 1, got: 0 });
        }
        let mut f = Form::zero(self.dim);
        for (&key, &coeff) in &self.terms {
            let mut below = 0u32;
            for p in 0..self.dim {
                let bit = 1u32 << p;
                if key & bit != 0 {
                    if v[p].norm() > 0.0 {
                        let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
                        f.add_term(key & !bit, coeff * v[p] * sign);
                    }
                    below += 1;
                }
            }
        }
        Ok(f)
    }

    /// Interior product with the basis vector `e_i` (1-based).
    pub fn interior_basis(&self, i: usize) -> Form {
        let bit = 1u32 << (i - 1);
        let mut f = Form::zero(self.dim);
        for (&key, &coeff) in &self.terms {
            if key & bit != 0 {
                let below = (key & (bit - 1)).count_ones();
                let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
                f.add_term(key & !bit, coeff * sign);
            }
        }
        f
    }

    /// Riemannian Hodge star for the metric `g`, orientation `e^1∧...∧e^{2n}`.
    ///
    /// Defined by `α ∧ *β = ⟨α, β⟩_g vol_g` on each degree; `vol_g = *1`.
    /// On a 2n-dimensional space `** = (-1)^k` on degree k.
    pub fn hodge_star(&self, g: &MetricTensor) -> Result<Form> {
        if g.dim() != self.dim {
            return Err(Error::DimensionMismatch(g.dim(), self.dim));
        }
        let sqrt_det = g.det().sqrt();
        let full = if self.dim == 32 {
            u32::MAX
        } else {
            (1u32 << self.dim) - 1
        };
        let mut out = Form::zero(self.dim);
        for k in self.degrees() {
            let comp = self.component(k);
            let subsets = masks_of_popcount(self.dim, k);
            for &i_mask in &subsets {
                // coefficient of e^{I^c} in *β is √det(g)·⟨e^I, β⟩·sign(I, I^c)
                let mut inner = Complex64::new(0.0, 0.0);
                for (j_mask, coeff) in comp.terms() {
                    inner += coeff * gram_inner(g, i_mask, j_mask);
                }
                if inner.norm() == 0.0 {
                    continue;
                }
                let comp_mask = full & !i_mask;
                out.add_term(comp_mask, inner * sqrt_det * merge_sign(i_mask, comp_mask));
            }
        }
        Ok(out)
    }

    /// Codifferential-style adjoint `d* = -*d*`, with `d` supplied by the
    /// caller (the Chevalley-Eilenberg differential of the ambient algebra).
    pub fn codifferential<F>(&self, g: &MetricTensor, d: F) -> Result<Form>
    where
        F: Fn(&Form) -> Form,
    {
        let starred = self.hodge_star(g)?;
        let d_starred = d(&starred);
        Ok(d_starred.hodge_star(g)?.scale_re(-1.0))
    }

    /// Contraction `Λ_ω = ι_{ω♯}` against a nondegenerate 2-form, normalized
    /// so that `Λ_ω ω = n`. On degree < 2 the result is the zero form.
    ///
    /// On 4-forms the induced constant is `Λ_ω(ω ∧ ω) = 2(n-1) ω`.
    pub fn lambda_contract(&self, omega: &Form) -> Result<Form> {
        if omega.dim != self.dim {
            return Err(Error::DimensionMismatch(omega.dim, self.dim));
        }
        let w = omega_sharp(omega)?;
        let mut out = Form::zero(self.dim);
        for k in self.degrees() {
            if k < 2 {
                continue;
            }
            let comp = self.component(k);
            for i in 0..self.dim {
                for j in (i + 1)..self.dim {
                    let c = w[(i, j)];
                    if c.abs() < PRUNE_EPS {
                        continue;
                    }
                    // ι_{X∧Y} α = α(X, Y, ...) = ι_Y ι_X α
                    let contracted = comp.interior_basis(i + 1).interior_basis(j + 1);
                    out = out.add(&contracted.scale_re(c));
                }
            }
        }
        Ok(out)
    }

    /// Hermitian inner product `⟨α, β⟩_g` (conjugate-linear in `β`),
    /// extending the Gram inner product on basis forms degree by degree.
    pub fn inner(&self, other: &Form, g: &MetricTensor) -> Result<Complex64> {
        if self.dim != other.dim || g.dim() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (ka, va) in self.terms() {
            for (kb, vb) in other.terms() {
                if ka.count_ones() != kb.count_ones() {
                    continue;
                }
                acc += va * vb.conj() * gram_inner(g, ka, kb);
            }
        }
        Ok(acc)
    }
}

/// Gram inner product `⟨e^I, e^J⟩_g = det[g^{i_a j_b}]` of basis forms.
fn gram_inner(g: &MetricTensor, i_mask: u32, j_mask: u32) -> f64 {
    let i_idx = mask_indices(i_mask);
    let j_idx = mask_indices(j_mask);
    debug_assert_eq!(i_idx.len(), j_idx.len());
    let k = i_idx.len();
    if k == 0 {
        return 1.0;
    }
    let inv = g.inverse();
    let m = DMatrix::<f64>::from_fn(k, k, |a, b| inv[(i_idx[a], j_idx[b])]);
    m.determinant()
}

fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|p| mask & (1 << p) != 0).collect()
}

fn masks_of_popcount(dim: usize, k: usize) -> Vec<u32> {
    let full = 1u32 << dim;
    (0..full).filter(|m| m.count_ones() as usize == k).collect()
}

/// Coefficient matrix `W` of the bivector `ω♯` dual to `ω` under the
/// symplectic duality; `W = -Ω^{-1}` for `Ω_{ij} = ω(e_i, e_j)`.
fn omega_sharp(omega: &Form) -> Result<DMatrix<f64>> {
    let dim = omega.dim;
    let two = omega.component(2);
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for (key, coeff) in two.terms() {
        if coeff.im.abs() > PRUNE_EPS {
            return Err(Error::Invalid(
                "lambda_contract expects a real 2-form".into(),
            ));
        }
        let idx = mask_indices(key);
        m[(idx[0], idx[1])] = coeff.re;
        m[(idx[1], idx[0])] = -coeff.re;
    }
    let inv = m
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Invalid("ω is degenerate, ω♯ does not exist".into()))?;
    Ok(-inv)
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&key, &v) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if key == 0 {
                write!(f, "({:.6}{:+.6}i)", v.re, v.im)?;
            } else {
                let idx: Vec<String> = mask_indices(key)
                    .iter()
                    .map(|p| (p + 1).to_string())
                    .collect();
                write!(f, "({:.6}{:+.6}i)·e^{{{}}}", v.re, v.im, idx.join(""))?;
            }
        }
        Ok(())
    }
}

/// Symmetric positive-definite metric on the fixed basis.
#[derive(Clone, Debug)]
pub struct MetricTensor {
    mat: DMatrix<f64>,
    inv: DMatrix<f64>,
    det: f64,
}

impl MetricTensor {
    pub fn new(mat: DMatrix<f64>) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotPositiveDefinite("matrix is not square".into()));
        }
        let asym = (&mat - mat.transpose()).abs().max();
        if asym > 1e-9 {
            return Err(Error::NotPositiveDefinite(format!(
                "asymmetry {asym:.3e} exceeds tolerance"
            )));
        }
        let sym = (&mat + mat.transpose()).scale(0.5);
        let chol = nalgebra::Cholesky::new(sym.clone())
            .ok_or_else(|| Error::NotPositiveDefinite("Cholesky factorization failed".into()))?;
        let det = chol.determinant();
        let inv = chol.inverse();
        Ok(MetricTensor { mat: sym, inv, det })
    }

    pub fn identity(dim: usize) -> Self {
        MetricTensor::new(DMatrix::identity(dim, dim)).expect("identity is SPD")
    }

    pub fn scaled_identity(dim: usize, c: f64) -> Result<Self> {
        if c <= 0.0 {
            return Err(Error::NonPositive("metric scale", c));
        }
        MetricTensor::new(DMatrix::identity(dim, dim).scale(c))
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn inverse(&self) -> &DMatrix<f64> {
        &self.inv
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.mat[(i, j)]
    }

    /// Pairing `g(x, y)` of two coefficient vectors.
    pub fn pair(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += x[i] * self.mat[(i, j)] * y[j];
            }
        }
        acc
    }
}
