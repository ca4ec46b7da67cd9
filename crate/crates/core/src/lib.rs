//! Fractional analytic functions on the unit disk.
//!
//! The crate models series of the form `z + Σ a_n z^{μn}` (`μ ≥ 1`), the
//! Ruscheweyh-type and Noor-type coefficient operators acting on them, the
//! Fox-Wright `₂Ψ₁` bounds for the integral operator, grid-based checkers for
//! the starlike / convex / uniformly convex classes, and a finite-dimensional
//! Banach-space model whose one-variable slices carry the class `UCV_{A_μ}`.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the common `f64` instantiation.

// `!(x >= lo)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod banachmodel;
pub mod cli;
pub mod diskcheck;
pub mod error;
pub mod fracseries;
pub mod operators;
pub mod scalar;
pub mod specialfn;

pub use error::{Error, Result};
pub use scalar::Real;

pub use banachmodel::{BanachModel, CoeffFamily, NormKind, PolyFamily, SliceExponent, SliceFamily};
pub use diskcheck::{CheckOptions, CheckReport, Verdict};
pub use fracseries::{DiskGrid, FracPowerSeries, HyperTail, Jet};
pub use specialfn::FoxWrightParams;

/// Complex number over the default scalar.
pub type C64 = num_complex::Complex<f64>;

/// Series over `f64`.
pub type Series = FracPowerSeries<f64>;
/// Series over `f32`.
pub type Series32 = FracPowerSeries<f32>;
/// Sampling grid over `f64`.
pub type Grid = DiskGrid<f64>;
/// Sampling grid over `f32`.
pub type Grid32 = DiskGrid<f32>;
/// Banach-space model over `f64`.
pub type Model = BanachModel<f64>;
/// Fox-Wright parameters over `f64`.
pub type FoxWright = FoxWrightParams<f64>;
