//! Exact-arithmetic engine for the twisted N=2 superconformal algebra and
//! its Γ-graded generalization.
//!
//! The crate provides, bottom up:
//!
//! * [`scalar`] — the coefficient field `Q(i)(θ)` with canonical forms;
//! * [`linalg`] — deterministic exact nullspace and span solving;
//! * [`algebra`] — basis vectors, graded elements, and the superbracket;
//! * [`derivation`] — homogeneous-derivation systems on basis windows,
//!   inner-derivation oracles, and the `δ_φ` family;
//! * [`tensor`] — tensor-square/cube maps, coboundaries, and the classical
//!   Yang–Baxter sum;
//! * [`automorphism`] — automorphism tables, their group relations, and
//!   classification.

pub mod algebra;
pub mod automorphism;
pub mod derivation;
pub mod linalg;
pub mod scalar;
pub mod sweep;
pub mod tensor;

pub use algebra::{
    ad, antisymmetry_residual, bracket, bracket_basis, jacobi_residual, AlgebraInstance,
    BasisVector, Element, GammaVector, Homogeneity, Kind, Parity, Sector,
};
pub use automorphism::{
    classify, compose, generalized_auto, homomorphism_residuals, identity_auto, inner_auto,
    odd_sign_auto, reversal_auto, reversal_power, AutoError, AutoSpec, AutoTable,
    GeneralizedAutoSpec,
};
pub use derivation::{
    delta_phi, derivation_residuals, inner_oracle, inner_oracle_name, solve_derivation_space,
    DerivationError, DerivationTable, GammaHom, MatchLine, SolveReport, Window,
};
pub use linalg::{kernel_basis, solve_in_span, ExactMatrix, LinalgError};
pub use scalar::{Gaussian, Poly, Scalar};
pub use sweep::{identity_sweep, SweepReport};
pub use tensor::{
    coboundary, cocycle_residual, cybe, diag_action, skew_check, skew_residual, super_cycle,
    super_twist, Tensor2, Tensor3, TensorError,
};
