//! The reduced transitive Courant algebroid on invariant sections of
//! `𝔤 ⊕ 𝔨 ⊕ 𝔤*`: pairing, Dorfman bracket, and the equivalence between the
//! Leibniz axiom and the anomaly equation `dH = c(F_A ∧ F_A)`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::gauge::{self, Connection, Pairing};
use crate::lie::LieAlgebra;

type CMatrix = DMatrix<Complex64>;

/// Invariant section `X + s + ξ`: an algebra vector, the vertical
/// (`𝔨`-valued) part, and an invariant 1-form.
#[derive(Clone, Debug)]
pub struct CourantSection {
    pub x: Vec<f64>,
    pub s: CMatrix,
    pub xi: Form,
}

impl CourantSection {
    pub fn vector(dim: usize, rank: usize, i: usize) -> Self {
        let mut x = vec![0.0; dim];
        x[i - 1] = 1.0;
        CourantSection {
            x,
            s: CMatrix::zeros(rank, rank),
            xi: Form::zero(dim),
        }
    }

    pub fn vertical(dim: usize, s: CMatrix) -> Self {
        CourantSection {
            x: vec![0.0; dim],
            s,
            xi: Form::zero(dim),
        }
    }

    pub fn one_form(dim: usize, rank: usize, xi: Form) -> Self {
        CourantSection {
            x: vec![0.0; dim],
            s: CMatrix::zeros(rank, rank),
            xi,
        }
    }

    pub fn zero(dim: usize, rank: usize) -> Self {
        CourantSection {
            x: vec![0.0; dim],
            s: CMatrix::zeros(rank, rank),
            xi: Form::zero(dim),
        }
    }

    /// Sup-norm across the three components.
    pub fn norm_sup(&self) -> f64 {
        let xv = self.x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let sv = self.s.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        xv.max(sv).max(self.xi.norm_sup())
    }

    fn sub(&self, other: &CourantSection) -> CourantSection {
        CourantSection {
            x: self
                .x
                .iter()
                .zip(&other.x)
                .map(|(a, b)| a - b)
                .collect(),
            s: &self.s - &other.s,
            xi: self.xi.sub(&other.xi),
        }
    }
}

/// Bracket data: the algebra, a real 3-form `H`, a `𝔨`-connection `A`, and
/// the pairing `c` on the vertical part. The anomaly residual
/// `|dH - c(F_A∧F_A)|` is recorded, not enforced.
#[derive(Clone, Debug)]
pub struct CourantData {
    alg: LieAlgebra,
    h3: Form,
    conn: Connection,
    pairing: Pairing,
    /// curvature of `A`, evaluated once: f_dense[i][j] = F(e_{i+1}, e_{j+1})
    f_dense: Vec<Vec<CMatrix>>,
}

impl CourantData {
    pub fn new(alg: LieAlgebra, h3: Form, conn: Connection, pairing: Pairing) -> Result<Self> {
        if conn.dim() != alg.dim() {
            return Err(Error::DimensionMismatch(conn.dim(), alg.dim()));
        }
        if h3.dim() != alg.dim() {
            return Err(Error::DimensionMismatch(h3.dim(), alg.dim()));
        }
        if !h3.is_real() {
            return Err(Error::Invalid("H must be a real 3-form".into()));
        }
        if pairing.total_dim() != conn.rank() {
            return Err(Error::PairingShapeMismatch(
                pairing.total_dim(),
                conn.rank(),
            ));
        }
        let dim = alg.dim();
        let rank = conn.rank();
        let f = gauge::curvature(&alg, &conn);
        let mut f_dense = vec![vec![CMatrix::zeros(rank, rank); dim]; dim];
        for i in 0..dim {
            for jj in 0..dim {
                if i == jj {
                    continue;
                }
                f_dense[i][jj] = CMatrix::from_fn(rank, rank, |a, b| {
                    f.entry(a, b).eval_indices(&[i + 1, jj + 1])
                });
            }
        }
        Ok(CourantData {
            alg,
            h3,
            conn,
            pairing,
            f_dense,
        })
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn rank(&self) -> usize {
        self.conn.rank()
    }

    /// `|dH - c(F_A ∧ F_A)|`, the integrability source of the bracket.
    pub fn bianchi_residual(&self) -> Result<f64> {
        let f = gauge::curvature(&self.alg, &self.conn);
        let csq = gauge::c_square(&self.pairing, &f)?;
        Ok(self.alg.ce_differential(&self.h3).sub(&csq).norm_sup())
    }

    /// `⟨X+s+ξ, Y+t+η⟩ = ½(η(X) + ξ(Y)) + c(s, t)`.
    pub fn pairing(&self, e1: &CourantSection, e2: &CourantSection) -> Result<Complex64> {
        self.check_shapes(e1)?;
        self.check_shapes(e2)?;
        let eval = |xi: &Form, x: &[f64]| -> Complex64 {
            (0..self.dim())
                .map(|i| xi.coeff(&[i + 1]) * Complex64::new(x[i], 0.0))
                .sum()
        };
        let mut acc = (eval(&e2.xi, &e1.x) + eval(&e1.xi, &e2.x)) * Complex64::new(0.5, 0.0);
        acc += self.pairing.apply(&e1.s, &e2.s)?;
        Ok(acc)
    }

    /// Dorfman bracket on invariant sections:
    ///
    /// * vector part `[X, Y]` (the anchor is bracket-preserving);
    /// * vertical part `-[s, t] + ι_X d_A t - ι_Y d_A s - F_A(X, Y)` with
    ///   `d_A s = [A(·), s]`;
    /// * 1-form part `ι_X dη - ι_Y dξ + ι_Y ι_X H + 2c(d_A s, t)
    ///   + 2c(ι_X F_A, t) - 2c(ι_Y F_A, s)`.
    ///
    /// Lie derivatives reduce to `L_X η = ι_X dη` on invariant forms. The
    /// sign of the curvature term is pinned by the bracket of horizontal
    /// lifts on a principal bundle, `θ[X^h, Y^h] = -F(X, Y)`, and certified
    /// by the Leibniz-iff-anomaly test.
    pub fn dorfman(
        &self,
        e1: &CourantSection,
        e2: &CourantSection,
    ) -> Result<CourantSection> {
        self.check_shapes(e1)?;
        self.check_shapes(e2)?;
        let dim = self.dim();
        let (x, s1, xi) = (&e1.x, &e1.s, &e1.xi);
        let (y, s2, eta) = (&e2.x, &e2.s, &e2.xi);

        let x_c: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let y_c: Vec<Complex64> = y.iter().map(|&v| Complex64::new(v, 0.0)).collect();

        // in-place m += c·a, avoiding a temporary per summand
        fn acc(m: &mut CMatrix, a: &CMatrix, c: f64) {
            for (o, v) in m.iter_mut().zip(a.iter()) {
                *o += v * c;
            }
        }
        // A(X) and A(Y)
        let a_of = |v: &[f64]| -> CMatrix {
            let mut m = CMatrix::zeros(self.rank(), self.rank());
            for i in 0..dim {
                if v[i] != 0.0 {
                    acc(&mut m, self.conn.coeff(i), v[i]);
                }
            }
            m
        };
        let ax = a_of(x);
        let ay = a_of(y);
        // F(X, Y) as a matrix
        let mut f_xy = CMatrix::zeros(self.rank(), self.rank());
        for i in 0..dim {
            if x[i] == 0.0 {
                continue;
            }
            for jj in 0..dim {
                if y[jj] == 0.0 || i == jj {
                    continue;
                }
                acc(&mut f_xy, &self.f_dense[i][jj], x[i] * y[jj]);
            }
        }

        let vector = self.alg.bracket(x, y);
        let vertical = -(s1 * s2 - s2 * s1) + (&ax * s2 - s2 * &ax) - (&ay * s1 - s1 * &ay) - f_xy;

        // 1-form part
        let d_eta = self.alg.ce_differential(eta);
        let d_xi = self.alg.ce_differential(xi);
        let mut one_form = d_eta.interior(&x_c)?.sub(&d_xi.interior(&y_c)?);
        let h_contracted = self.h3.interior(&x_c)?.interior(&y_c)?;
        one_form.accumulate(&h_contracted, Complex64::new(1.0, 0.0));
        // 2c(d_A s, t): component on e^i is 2c([A_i, s], t)
        for i in 0..dim {
            let ai = self.conn.coeff(i);
            let da_s = ai * s1 - s1 * ai;
            let v = self.pairing.apply(&da_s, s2)? * Complex64::new(2.0, 0.0);
            if v.norm() > 0.0 {
                one_form.accumulate(&Form::basis_one(dim, i + 1), v);
            }
        }
        // 2c(ι_X F, t) - 2c(ι_Y F, s): component on e^i is 2c(F(X, e_i), t) - ...
        let mut f_buf = CMatrix::zeros(self.rank(), self.rank());
        for i in 0..dim {
            let f_at = |v: &[f64], buf: &mut CMatrix| {
                buf.fill(Complex64::new(0.0, 0.0));
                for p in 0..dim {
                    if v[p] != 0.0 && p != i {
                        acc(buf, &self.f_dense[p][i], v[p]);
                    }
                }
            };
            f_at(x, &mut f_buf);
            let mut v = self.pairing.apply(&f_buf, s2)? * Complex64::new(2.0, 0.0);
            f_at(y, &mut f_buf);
            v -= self.pairing.apply(&f_buf, s1)? * Complex64::new(2.0, 0.0);
            if v.norm() > 0.0 {
                one_form.accumulate(&Form::basis_one(dim, i + 1), v);
            }
        }

        Ok(CourantSection {
            x: vector,
            s: vertical,
            xi: one_form,
        })
    }

    /// Sup-norm of the Jacobiator
    /// `[e₁,[e₂,e₃]] - [[e₁,e₂],e₃] - [e₂,[e₁,e₃]]`.
    pub fn leibniz_residual(
        &self,
        e1: &CourantSection,
        e2: &CourantSection,
        e3: &CourantSection,
    ) -> Result<f64> {
        let lhs = self.dorfman(e1, &self.dorfman(e2, e3)?)?;
        let mid = self.dorfman(&self.dorfman(e1, e2)?, e3)?;
        let rhs = self.dorfman(e2, &self.dorfman(e1, e3)?)?;
        Ok(lhs.sub(&mid).sub(&rhs).norm_sup())
    }

    /// Basis sections: algebra vectors, elementary vertical matrices, and
    /// basis 1-forms.
    pub fn basis_sections(&self) -> Vec<CourantSection> {
        let dim = self.dim();
        let rank = self.rank();
        let mut out = Vec::new();
        for i in 1..=dim {
            out.push(CourantSection::vector(dim, rank, i));
        }
        for p in 0..rank {
            for q in 0..rank {
                let mut m = CMatrix::zeros(rank, rank);
                m[(p, q)] = Complex64::new(1.0, 0.0);
                out.push(CourantSection::vertical(dim, m));
            }
        }
        for i in 1..=dim {
            out.push(CourantSection::one_form(dim, rank, Form::basis_one(dim, i)));
        }
        out
    }

    /// Max Leibniz residual over all basis-section triples. Vanishes for all
    /// invariant triples exactly when `|dH - c(F_A∧F_A)| = 0`.
    pub fn max_leibniz_over_basis(&self) -> Result<f64> {
        let basis = self.basis_sections();
        // brackets of basis pairs are reused across the triple scan
        let m = basis.len();
        let mut pair: Vec<Option<CourantSection>> = vec![None; m * m];
        for a in 0..m {
            for b in 0..m {
                pair[a * m + b] = Some(self.dorfman(&basis[a], &basis[b])?);
            }
        }
        let mut worst: f64 = 0.0;
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let inner = pair[b * m + c].as_ref().unwrap();
                    let lhs = self.dorfman(&basis[a], inner)?;
                    let mid = self.dorfman(pair[a * m + b].as_ref().unwrap(), &basis[c])?;
                    let inner2 = pair[a * m + c].as_ref().unwrap();
                    let rhs = self.dorfman(&basis[b], inner2)?;
                    worst = worst.max(lhs.sub(&mid).sub(&rhs).norm_sup());
                }
            }
        }
        Ok(worst)
    }

    fn check_shapes(&self, e: &CourantSection) -> Result<()> {
        if e.x.len() != self.dim() {
            return Err(Error::DimensionMismatch(e.x.len(), self.dim()));
        }
        if e.s.nrows() != self.rank() || e.s.ncols() != self.rank() {
            return Err(Error::RankMismatch(e.s.nrows(), self.rank()));
        }
        if e.xi.dim() != self.dim() {
            return Err(Error::DimensionMismatch(e.xi.dim(), self.dim()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_section(rng: &mut StdRng, dim: usize, rank: usize) -> CourantSection {
        let x = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let s = CMatrix::from_fn(rank, rank, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let mut xi = Form::zero(dim);
        for i in 1..=dim {
            xi = xi.add(&Form::basis_one(dim, i).scale_re(rng.gen_range(-1.0..1.0)));
        }
        CourantSection { x, s, xi }
    }

    fn sl2c_solution_data(t: f64) -> CourantData {
        let h = samples::sl2c_data(t);
        let nabla = gauge::bismut(&h).unwrap();
        let alpha = t * t / 4.0;
        let pairing = Pairing::trace(6, -0.5 * alpha);
        let h3 = h
            .complex_structure()
            .dc(h.algebra(), h.kahler_form())
            .unwrap();
        CourantData::new(h.algebra().clone(), h3, nabla, pairing).unwrap()
    }

    #[test]
    fn pairing_examples() {
        let alg = LieAlgebra::abelian(4);
        let data = CourantData::new(
            alg,
            Form::zero(4),
            Connection::flat(4, 2),
            Pairing::trace(2, 1.0),
        )
        .unwrap();
        // ξ(X) = 1 gives ⟨e, e⟩ = 1
        let e = CourantSection {
            x: {
                let mut v = vec![0.0; 4];
                v[0] = 1.0;
                v
            },
            s: CMatrix::zeros(2, 2),
            xi: Form::basis_one(4, 1),
        };
        assert_eq!(data.pairing(&e, &e).unwrap(), c(1.0, 0.0));

        // purely vertical sections pair through c
        let s1 = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 2.0), c(0.0, 0.0), c(3.0, 0.0)]);
        let s2 = CMatrix::from_row_slice(2, 2, &[c(0.0, 1.0), c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
        let v1 = CourantSection::vertical(4, s1.clone());
        let v2 = CourantSection::vertical(4, s2.clone());
        let expect = (&s1 * &s2).trace();
        assert_eq!(data.pairing(&v1, &v2).unwrap(), expect);

        // symmetry on random pairs
        let mut rng = StdRng::seed_from_u64(103);
        for _ in 0..10 {
            let a = random_section(&mut rng, 4, 2);
            let b = random_section(&mut rng, 4, 2);
            let ab = data.pairing(&a, &b).unwrap();
            let ba = data.pairing(&b, &a).unwrap();
            assert!((ab - ba).norm() < 1e-14);
        }
    }

    #[test]
    fn dorfman_reduces_to_the_lie_bracket() {
        // H = 0, A flat, vertical and form parts zero
        let alg = samples::sl2c_algebra(1.0);
        let data = CourantData::new(
            alg.clone(),
            Form::zero(6),
            Connection::flat(6, 2),
            Pairing::trace(2, 1.0),
        )
        .unwrap();
        let mut rng = StdRng::seed_from_u64(107);
        for _ in 0..10 {
            let x: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let e1 = CourantSection {
                x: x.clone(),
                s: CMatrix::zeros(2, 2),
                xi: Form::zero(6),
            };
            let e2 = CourantSection {
                x: y.clone(),
                s: CMatrix::zeros(2, 2),
                xi: Form::zero(6),
            };
            let br = data.dorfman(&e1, &e2).unwrap();
            let lie = alg.bracket(&x, &y);
            for m in 0..6 {
                assert!((br.x[m] - lie[m]).abs() < 1e-14);
            }
            assert!(br.s.iter().all(|z| z.norm() < 1e-14));
            assert!(br.xi.is_zero());
        }
    }

    #[test]
    fn dorfman_on_vertical_sections_matches_the_hand_expansion() {
        // dim-2 abelian base, r = 2, explicit A: the bracket of vertical
        // sections is (0, -[s,t], 2c([A_i, s], t) e^i); frozen from expanding
        // the component formula with these matrices by hand
        let alg = LieAlgebra::abelian(2);
        let a1 = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        );
        let a2 = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        );
        let conn = Connection::new(2, 2, vec![a1, a2], true).unwrap();
        let data = CourantData::new(alg, Form::zero(2), conn, Pairing::trace(2, 1.0)).unwrap();
        let s = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        let t = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let e1 = CourantSection::vertical(2, s.clone());
        let e2 = CourantSection::vertical(2, t.clone());
        let got = data.dorfman(&e1, &e2).unwrap();
        assert!(got.x.iter().all(|v| v.abs() < 1e-15));
        // -[s, t]: with s = diag(1,-1), t = E21: [s,t] = st - ts = -2·E21
        let expect_s = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)],
        );
        assert!((got.s.clone() - expect_s).iter().all(|z| z.norm() < 1e-15));
        // 2c([A_1,s],t) = 2 tr([A_1,s]·t): [E12, diag(1,-1)] = -2E12·... by
        // hand: A₁s - sA₁ = -2·E12? E12·s = -E12, s·E12 = E12 → [A₁,s] = -2E12;
        // tr(-2E12·E21) = -2. So component on e^1 is -4. [A₂,s] = 2E21,
        // tr(2E21·E21) = 0 → e² component 0.
        assert!((got.xi.coeff(&[1]) - c(-4.0, 0.0)).norm() < 1e-14);
        assert!(got.xi.coeff(&[2]).norm() < 1e-15);
    }

    #[test]
    fn bracket_of_a_section_with_itself_vanishes() {
        // at the invariant level ⟨e,e⟩ is constant, so [e,e] = 0; the only
        // surviving candidate term 2c(d_A s, s) dies by trace cyclicity
        let data = sl2c_solution_data(2.0);
        let mut rng = StdRng::seed_from_u64(109);
        for _ in 0..10 {
            let e = random_section(&mut rng, 6, 6);
            let br = data.dorfman(&e, &e).unwrap();
            assert!(br.norm_sup() < 1e-12);
        }
    }

    #[test]
    fn anchor_preserves_brackets_on_random_sections() {
        let data = sl2c_solution_data(1.0);
        let mut rng = StdRng::seed_from_u64(113);
        for _ in 0..10 {
            let e1 = random_section(&mut rng, 6, 6);
            let e2 = random_section(&mut rng, 6, 6);
            let br = data.dorfman(&e1, &e2).unwrap();
            let lie = data.alg.bracket(&e1.x, &e2.x);
            for m in 0..6 {
                assert!((br.x[m] - lie[m]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn leibniz_vanishes_on_the_sl2c_solution() {
        let data = sl2c_solution_data(2.0);
        assert!(data.bianchi_residual().unwrap() < 1e-13);
        let mut rng = StdRng::seed_from_u64(127);
        for _ in 0..10 {
            let e1 = random_section(&mut rng, 6, 6);
            let e2 = random_section(&mut rng, 6, 6);
            let e3 = random_section(&mut rng, 6, 6);
            let r = data.leibniz_residual(&e1, &e2, &e3).unwrap();
            assert!(r < 1e-11, "residual {r}");
        }
    }

    #[test]
    fn leibniz_detects_a_perturbed_flux() {
        // non-closed-compatible H with flat A: dH ≠ 0 = c(F∧F)
        let alg = samples::sl2c_algebra(1.0);
        let h3 = Form::monomial_re(6, &[1, 3, 5], 0.3);
        let data = CourantData::new(
            alg,
            h3,
            Connection::flat(6, 2),
            Pairing::trace(2, 1.0),
        )
        .unwrap();
        assert!(data.bianchi_residual().unwrap() > 0.1);
        let worst = data.max_leibniz_over_basis().unwrap();
        assert!(worst > 1e-3, "some basis triple sees the defect: {worst}");
    }

    #[test]
    fn all_zero_sections_bracket_to_zero() {
        let data = sl2c_solution_data(1.0);
        let z = CourantSection::zero(6, 6);
        assert_eq!(data.leibniz_residual(&z, &z, &z).unwrap(), 0.0);
    }

    #[test]
    fn leibniz_iff_bianchi_on_constructed_families() {
        // H = CS(θ) + d(2-form) satisfies dH = c(F∧F) exactly; adding a
        // non-compatible 3-form breaks both sides together
        let mut rng = StdRng::seed_from_u64(131);
        let alg = samples::iwasawa_algebra();
        for trial in 0..6 {
            let rank = 2;
            let coeffs: Vec<CMatrix> = (0..6)
                .map(|_| {
                    CMatrix::from_fn(rank, rank, |_, _| {
                        c(rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6))
                    })
                })
                .collect();
            let conn = Connection::new(6, rank, coeffs, false).unwrap();
            let pairing = Pairing::trace(rank, rng.gen_range(0.3..1.5));
            let cs = gauge::chern_simons(&alg, &pairing, &conn).unwrap();
            let mut two = Form::zero(6);
            for _ in 0..3 {
                let i = rng.gen_range(1..=6);
                let jj = rng.gen_range(1..=6);
                two = two.add(&Form::monomial_re(6, &[i, jj], rng.gen_range(-1.0..1.0)));
            }
            let mut h3 = cs.add(&alg.ce_differential(&two));
            // CS of a complex connection may have an imaginary part; the
            // bracket data wants a real flux, so realize the real part and
            // compensate: build H from a connection with real coefficients
            h3 = h3.add(&h3.conj()).scale_re(0.5);
            let real_coeffs: Vec<CMatrix> = (0..6)
                .map(|i| conn.coeff(i).map(|z| Complex64::new(z.re, 0.0)))
                .collect();
            let real_conn = Connection::new(6, rank, real_coeffs, false).unwrap();
            let cs_real = gauge::chern_simons(&alg, &pairing, &real_conn).unwrap();
            let mut h_real = cs_real.add(&alg.ce_differential(&two));
            let perturbed = trial % 2 == 1;
            if perturbed {
                h_real = h_real.add(&Form::monomial_re(6, &[1, 3, 5], 0.05));
            }
            let data = CourantData::new(alg.clone(), h_real, real_conn, pairing).unwrap();
            let bianchi = data.bianchi_residual().unwrap();
            let leibniz = data.max_leibniz_over_basis().unwrap();
            assert_eq!(
                bianchi < 1e-9,
                leibniz < 1e-9,
                "trial {trial}: bianchi {bianchi}, leibniz {leibniz}"
            );
            assert_eq!(bianchi < 1e-9, !perturbed);
        }
    }
}
