//! Measurement synthesis: complex targets, rotation grids, noise, and the
//! on-disk dataset format.

mod dataset;
mod grid;
pub mod io;
mod noise;
pub mod scene;
mod target;

pub use dataset::{synthesize_dataset, MeasurementSet, Record};
pub use grid::{generate_rotation_grid, AngleGrid, GridLayout, ScanAxis};
pub use noise::{add_noise, NoiseConfig, NoiseSpec};
pub use target::{build_complex_target, resize_bilinear, TargetSpec};
