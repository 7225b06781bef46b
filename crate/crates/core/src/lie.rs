//! Lie algebras via structure constants and the Chevalley-Eilenberg
//! differential on invariant forms.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::{PRUNE_EPS, STRUCT_TOL};

/// One summand `coeff · θ_i ∧ θ_j` of a declared coframe differential;
/// `bar_i`/`bar_j` select the conjugate coframe `θ̄`.
#[derive(Clone, Debug)]
pub struct CoframeTerm {
    pub i: usize,
    pub bar_i: bool,
    pub j: usize,
    pub bar_j: bool,
    pub coeff: Complex64,
}

impl CoframeTerm {
    pub fn holo(i: usize, j: usize, coeff: f64) -> Self {
        CoframeTerm {
            i,
            bar_i: false,
            j,
            bar_j: false,
            coeff: Complex64::new(coeff, 0.0),
        }
    }
}

/// Real Lie algebra of dimension `2n`, stored as the antisymmetric constants
/// `c^k_{ij}` with `[e_i, e_j] = Σ_k c^k_{ij} e_k`.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    dim: usize,
    /// structure[k] is the antisymmetric matrix (i, j) ↦ c^k_{ij}
    structure: Vec<DMatrix<f64>>,
    /// cached coframe differentials de^k
    d_one: Vec<Form>,
}

impl LieAlgebra {
    /// Build from a list of entries `(i, j, k, value)` (1-based indices)
    /// meaning the `e_k`-component of `[e_i, e_j]` is `value`. The
    /// antisymmetric partner `c^k_{ji} = -value` is filled automatically;
    /// re-stating it explicitly is allowed if consistent.
    pub fn from_structure_constants(dim: usize, entries: &[(usize, usize, usize, f64)]) -> Result<Self> {
        let mut structure = vec![DMatrix::<f64>::zeros(dim, dim); dim];
        let mut set = vec![vec![false; dim * dim]; dim];
        for &(i, j, k, v) in entries {
            if i < 1 || i > dim || j < 1 || j > dim || k < 1 || k > dim {
                return Err(Error::Invalid(format!(
                    "structure constant index out of range: [{i}, {j}] -> {k}"
                )));
            }
            if i == j && v != 0.0 {
                return Err(Error::Invalid(format!(
                    "nonzero bracket [e_{i}, e_{i}] declared"
                )));
            }
            let (a, b) = (i - 1, j - 1);
            for ((r, c), val) in [((a, b), v), ((b, a), -v)] {
                if set[k - 1][r * dim + c] && (structure[k - 1][(r, c)] - val).abs() > PRUNE_EPS {
                    return Err(Error::Invalid(format!(
                        "conflicting declarations for c^{k}_{{{},{}}}",
                        r + 1,
                        c + 1
                    )));
                }
                structure[k - 1][(r, c)] = val;
                set[k - 1][r * dim + c] = true;
            }
        }
        Ok(LieAlgebra::assemble(dim, structure))
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra::assemble(dim, vec![DMatrix::zeros(dim, dim); dim])
    }

    fn assemble(dim: usize, structure: Vec<DMatrix<f64>>) -> Self {
        let d_one = (0..dim)
            .map(|k| {
                let mut out = Form::zero(dim);
                let m = &structure[k];
                for i in 0..dim {
                    for j in (i + 1)..dim {
                        let c = m[(i, j)];
                        if c != 0.0 {
                            out = out.add(&Form::monomial_re(dim, &[i + 1, j + 1], -c));
                        }
                    }
                }
                out
            })
            .collect();
        LieAlgebra {
            dim,
            structure,
            d_one,
        }
    }

    /// Build from complex coframe relations `dθ_k = Σ terms`, where each term
    /// is a multiple of `θ_i ∧ θ_j` with optional conjugations, and the
    /// coframe is tied to the real basis by `θ_j = e^{2j-1} + i e^{2j}`.
    /// Coframes without a declared differential are closed.
    pub fn from_coframe_differentials(dim: usize, diffs: &[(usize, Vec<CoframeTerm>)]) -> Result<Self> {
        if dim % 2 != 0 {
            return Err(Error::Invalid(format!(
                "coframe declarations require an even dimension, got {dim}"
            )));
        }
        let n = dim / 2;
        let theta = |j: usize, bar: bool| -> Form {
            let re = Form::basis_one(dim, 2 * j - 1);
            let im = Form::basis_one(dim, 2 * j);
            let i_unit = Complex64::new(0.0, if bar { -1.0 } else { 1.0 });
            re.add(&im.scale(i_unit))
        };
        let mut d_real = vec![Form::zero(dim); dim];
        let mut declared = vec![false; n + 1];
        for &(k, ref terms) in diffs {
            if k < 1 || k > n {
                return Err(Error::Invalid(format!(
                    "coframe index {k} out of range 1..={n}"
                )));
            }
            if declared[k] {
                return Err(Error::Invalid(format!("dθ_{k} declared twice")));
            }
            declared[k] = true;
            let mut d_theta = Form::zero(dim);
            for t in terms {
                if t.i < 1 || t.i > n || t.j < 1 || t.j > n {
                    return Err(Error::Invalid(format!(
                        "coframe term index out of range in dθ_{k}"
                    )));
                }
                let w = theta(t.i, t.bar_i).wedge(&theta(t.j, t.bar_j))?;
                d_theta = d_theta.add(&w.scale(t.coeff));
            }
            // dθ_k = de^{2k-1} + i de^{2k} with both differentials real
            let re_part = d_theta.add(&d_theta.conj()).scale_re(0.5);
            let im_part = d_theta.sub(&d_theta.conj()).scale(Complex64::new(0.0, -0.5));
            d_real[2 * k - 2] = re_part;
            d_real[2 * k - 1] = im_part;
        }
        let mut structure = vec![DMatrix::<f64>::zeros(dim, dim); dim];
        for (m, dm) in d_real.iter().enumerate() {
            if !dm.is_real() {
                return Err(Error::Invalid(format!(
                    "differential of e^{} has a residual imaginary part",
                    m + 1
                )));
            }
            for (mask, coeff) in dm.terms() {
                let idx: Vec<usize> = (0..dim).filter(|p| mask & (1 << p) != 0).collect();
                if idx.len() != 2 {
                    return Err(Error::Invalid(format!(
                        "declared dθ is not a 2-form (degree {} term)",
                        idx.len()
                    )));
                }
                // de^m = -Σ_{i<j} c^m_{ij} e^{ij}
                structure[m][(idx[0], idx[1])] = -coeff.re;
                structure[m][(idx[1], idx[0])] = coeff.re;
            }
        }
        Ok(LieAlgebra::assemble(dim, structure))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.structure[k - 1][(i - 1, j - 1)]
    }

    /// `[x, y]` for coefficient vectors (0-based slices).
    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for k in 0..self.dim {
            let m = &self.structure[k];
            let mut acc = 0.0;
            for i in 0..self.dim {
                if x[i] == 0.0 {
                    continue;
                }
                for j in 0..self.dim {
                    acc += x[i] * m[(i, j)] * y[j];
                }
            }
            out[k] = acc;
        }
        out
    }

    fn bracket_basis(&self, i: usize, j: usize) -> Vec<f64> {
        (0..self.dim).map(|k| self.structure[k][(i, j)]).collect()
    }

    /// Chevalley-Eilenberg differential: the degree +1 anti-derivation with
    /// `dα(X, Y) = -α([X, Y])` on 1-forms, hence `de^k = -Σ_{i<j} c^k_{ij} e^{ij}`.
    /// Satisfies `d∘d = 0` exactly when the Jacobi identity holds.
    pub fn ce_differential(&self, a: &Form) -> Form {
        let dim = self.dim;
        let mut out = Form::zero(dim);
        for (mask, coeff) in a.terms() {
            // d(e^{i1...ik}) = Σ_a (-1)^{a-1} de^{ia} ∧ e^{rest of the tuple}
            let mut position = 0u32;
            for p in 0..dim {
                let bit = 1u32 << p;
                if mask & bit == 0 {
                    continue;
                }
                let sign = if position % 2 == 0 { 1.0 } else { -1.0 };
                position += 1;
                let d_one = &self.d_one[p];
                if d_one.is_zero() {
                    continue;
                }
                let rest = Form::from_mask(dim, mask & !bit, Complex64::new(1.0, 0.0));
                let term = d_one.wedge(&rest).expect("same dimension");
                out.accumulate(&term, coeff * Complex64::new(sign, 0.0));
            }
        }
        out
    }

    /// Max-norm of the Jacobi cyclic sums
    /// `[[e_i, e_j], e_k] + [[e_j, e_k], e_i] + [[e_k, e_i], e_j]`
    /// over all basis triples. Equals the max-norm of `d∘d` on basis 1-forms
    /// up to the sign convention of `d`.
    pub fn check_jacobi(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                for k in (j + 1)..self.dim {
                    let ij = self.bracket_basis(i, j);
                    let jk = self.bracket_basis(j, k);
                    let ki = self.bracket_basis(k, i);
                    let ei: Vec<f64> = basis_vec(self.dim, i);
                    let ej: Vec<f64> = basis_vec(self.dim, j);
                    let ek: Vec<f64> = basis_vec(self.dim, k);
                    let t1 = self.bracket(&ij, &ek);
                    let t2 = self.bracket(&jk, &ei);
                    let t3 = self.bracket(&ki, &ej);
                    for m in 0..self.dim {
                        worst = worst.max((t1[m] + t2[m] + t3[m]).abs());
                    }
                }
            }
        }
        worst
    }

    /// Max-norm of `d(d e^k)` over basis 1-forms; the d-side of the Jacobi
    /// equivalence.
    pub fn d_squared_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 1..=self.dim {
            let dd = self.ce_differential(&Form::basis_one(self.dim, k));
            worst = worst.max(self.ce_differential(&dd).norm_sup());
        }
        worst
    }

    /// Structural gate used by model loaders.
    pub fn require_jacobi(&self) -> Result<()> {
        let r = self.check_jacobi();
        if r > STRUCT_TOL {
            return Err(Error::JacobiFailure(r));
        }
        Ok(())
    }

    /// `(unimodular, trace vector)`: the algebra is unimodular iff every
    /// adjoint operator is traceless; `trace[i] = tr(ad_{e_{i+1}})`.
    pub fn is_unimodular(&self) -> (bool, Vec<f64>) {
        let traces: Vec<f64> = (0..self.dim)
            .map(|i| (0..self.dim).map(|k| self.structure[k][(i, k)]).sum())
            .collect();
        let uni = traces.iter().all(|t| t.abs() < STRUCT_TOL);
        (uni, traces)
    }
}

fn basis_vec(dim: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[i] = 1.0;
    v
}
