//! Gaussian-state beam-splitter toolkit.
//!
//! Covariances are written over complex amplitudes in the symmetric-ordered
//! convention, where the vacuum has covariance `diag(1/2, 1/2)`. A single mode
//! is `[[a, b], [b*, a]]`; a two-mode state is the 4×4 Hermitian matrix over
//! `(α₁*, α₁, α₂*, α₂)` with blocks `A`, `B` on the diagonal and `C` off it.
//!
//! Modules:
//! - [`covariance`]: state types, constructors, real-quadrature bridge.
//! - [`beamsplitter`]: the BS unitary, covariance transform, partial trace.
//! - [`measures`]: nonclassical depth, `N_noncl`, `S`, `E_N`, `S_N`, `𝒞`.
//! - [`cascade`]: serial depletion and binary splitting trees.
//! - [`symplectic`]: symplectic spectrum, used as an independent check.
//! - [`sampling`]: seeded random states for property sweeps.

pub mod beamsplitter;
pub mod cascade;
pub mod covariance;
mod error;
pub mod measures;
pub mod sampling;
pub mod symplectic;

pub use beamsplitter::BeamSplitterParams;
pub use cascade::{AngleSchedule, CascadeTree, DepletionRun, PhaseChoice};
pub use covariance::{CrossBlock, SingleModeCovariance, TwoModeCovariance};
pub use error::{Error, Result};
pub use measures::MeasureReport;

pub use num_complex::Complex64;
