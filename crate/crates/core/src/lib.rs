//! Inverse synthetic aperture Fourier ptychography.
//!
//! A reflective target rotating through small angles shifts its spectrum
//! through a fixed pupil. This crate simulates the resulting dual-plane
//! (image and pupil) intensity measurements and jointly recovers the complex
//! wavefront together with the unknown per-measurement spectrum shifts.
//!
//! Modules:
//! - [`optics`]: centered unitary DFT, pupil masks, forward models and the
//!   rotation to pixel-shift conversion.
//! - [`sim`]: complex targets, rotation grids, noisy dataset synthesis and the
//!   on-disk dataset format.
//! - [`solver`]: regularized phase retrieval with an annealed local k-space
//!   search.
//! - [`init`]: initial k-space estimates (classical localizers, external
//!   prediction files, ground truth).
//! - [`metrics`]: RMSE metrics and aperture overlap geometry.
//!
//! The model assumes a reflective target: a transmissive sample does not
//! change optical path length under rotation and produces no spectrum shift.

pub mod error;
pub mod init;
pub mod io;
pub mod kspace;
pub mod metrics;
pub mod optics;
pub mod presets;
pub mod raster;
pub mod sim;
pub mod solver;

pub use error::{Error, Result};
pub use kspace::{KSpaceEstimate, Provenance};
pub use optics::{ComplexField, Domain, OpticalConfig, PupilMask, RotationAngle, WaveVector};
