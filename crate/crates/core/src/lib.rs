//! Invariant hermitian geometry on Lie algebras, evaluated numerically.
//!
//! Everything in this crate lives on a fixed real `2n`-dimensional Lie algebra
//! described by structure constants. Differential forms are invariant, so the
//! exterior differential is the Chevalley-Eilenberg differential and every
//! geometric equation (balanced/Gauduchon classification, dilatino equation,
//! Hermite-Yang-Mills, the Bianchi identity of the Strominger system, the
//! Courant-algebroid Leibniz rule) reduces to finite-dimensional linear
//! algebra whose residuals can be computed to machine precision.
//!
//! # Conventions
//!
//! These are fixed once, here, and used everywhere:
//!
//! * basis 1-forms are `e^1, ..., e^{2n}`, the orientation is
//!   `e^1 ∧ ... ∧ e^{2n}`;
//! * the Chevalley-Eilenberg differential acts on 1-forms by
//!   `dα(X, Y) = -α([X, Y])`, so catalog files can state coframe
//!   differentials the way the literature writes them (`dθ₂ = θ₁∧θ₃`);
//! * the standard almost complex structure sends `e_{2j-1} ↦ e_{2j}`, and the
//!   complex coframe is `θ_j = e^{2j-1} + i e^{2j}`;
//! * `d^c = i(∂ - ∂̄)`, equivalently `d^c = J^{-1} d J` for the weighted
//!   action `J α = (-1)^k α(J·, ..., J·)` on k-forms. The opposite sign
//!   `i(∂̄ - ∂)` is also common in the literature; this choice is pinned by
//!   the SL(2,C) reference values (`dd^c ω_t = -(4/t²)(e^{1234} + e^{1256} +
//!   e^{3456})`) so that a drifting sign cannot survive the test suite.
//!   With this choice `dd^c = 2i ∂̄∂`;
//! * the Bismut connection is `∇^B = ∇^g + ½ g^{-1} d^c ω`; its torsion
//!   3-form is `+d^c ω` (texts using the opposite `d^c` write the same
//!   connection as `∇^g - ½ g^{-1} d^c ω` with torsion `-d^c ω`);
//! * curvature is `R(X, Y) = ∇_X ∇_Y - ∇_Y ∇_X - ∇_{[X,Y]}`.
//!
//! Structure equations are read as right-invariant coframe relations; at the
//! level of the coalgebra the left/right distinction is immaterial, the
//! constants are taken exactly as declared.

pub mod complex_structure;
pub mod courant;
pub mod error;
pub mod exterior;
pub mod gauge;
pub mod hermitian;
pub mod hesolver;
pub mod lie;
pub mod samples;
pub mod strominger;

pub use complex_structure::AlmostComplexStructure;
pub use error::{Error, Result};
pub use exterior::{Form, MetricTensor};
pub use gauge::{Connection, CurvatureForm, Pairing};
pub use hermitian::{Classification, HermitianData};
pub use hesolver::GridField;
pub use lie::LieAlgebra;
pub use strominger::{AlphaOutcome, AlphaSpec, AlphaStatus, StromingerModel, SystemReport};

/// Coefficients with magnitude below this are pruned from stored forms.
pub const PRUNE_EPS: f64 = 1e-12;

/// Default pass/fail tolerance for residual sup-norms.
pub const PASS_TOL: f64 = 1e-9;

/// Tolerance for structural checks on exact integer-scale input data
/// (Jacobi identity, integrability of the complex structure).
pub const STRUCT_TOL: f64 = 1e-10;
