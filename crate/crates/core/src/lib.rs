//! Geometry engine for unit vector fields on three-dimensional homogeneous
//! spaces described by an orthonormal frame with constant bracket
//! coefficients.
//!
//! The crate is organized bottom-up:
//!
//! * [`scalar`]: the two scalar kernels (f64 and exact rationals).
//! * [`linalg`]: 3-dimensional array arithmetic.
//! * [`frame`]: structure constants, Levi-Civita connection, curvature.
//! * [`tensor`]: dense frame tensors and covariant differentiation.
//! * [`field`]: unit fields, shape operator, residual and identity suites.
//! * [`classify`]: case analysis and normal-form emission for harmonic
//!   totally geodesic fields, algebra-type detection, conformal rescaling.
//! * [`finder`]: numeric search for harmonic directions (float kernel only).
//! * [`chart`]: coordinate-chart backend with finite-difference curvature
//!   for cross-validating frame models (float kernel only).
//! * [`catalog`]: built-in models with their expected facts.
//!
//! Everything upstream of `finder`/`chart` is generic over the kernel, so a
//! model with rational data can be checked exactly: asserted residuals are
//! literal zeros, not small floats.

pub mod error;
pub mod scalar;
pub mod linalg;
pub mod frame;
pub mod tensor;
pub mod field;
pub mod classify;
pub mod finder;
pub mod chart;
pub mod catalog;

pub use catalog::{
    flat_torus, hopf, hyperbolic_space, hyperbolic_torus, unimodular_entry, verify_entry,
    verify_fact, CatalogEntry, ExpectedFact, FactCheck, FactOutcome, Provenance, VerifiedEntry,
};
pub use chart::{
    christoffel_fd, cross_validate, cube_grid, default_grid, expanding_eigenvalue,
    geodesic_residual, integral_curve, mapping_torus_chart, ricci_fd, ricci_fd_frame,
    round_sphere_chart, twisted_flat_chart, ChartModel, CrossValidation, CurveReport,
    DEFAULT_CURVATURE_STEP, DEFAULT_CURVE_STEP,
};
pub use classify::{
    classify, conformal_rescale, milnor_type, normal_form_brackets, normal_form_ricci,
    ClassificationCase, ClassificationResult, EmittedAlgebra, FrameChecks, HypothesisFailure,
    MilnorType, RescaledModel,
};
pub use error::GeomError;
pub use finder::{
    energy_density, fibonacci_directions, find_all, residual_objective, CriticalDirection,
    FinderConfig, FinderReport,
};
pub use field::{
    analyze, normalized, AdaptedFrame, ContactCheck, FieldAnalysis, FieldFlags, FieldInvariants,
    HarmonicResiduals, HorizontalStructure, KillingChecks, Orientation, ResidualEntry,
    ShapeOperator, UnitField,
};
pub use frame::{
    curvature, killing_form, levi_civita, ConnectionTable, CurvatureBundle, FrameModel,
    StructureConstants,
};
pub use linalg::{M3, T3, T4, V3};
pub use scalar::{Rational, Scalar, Tol};
pub use tensor::Tensor;
