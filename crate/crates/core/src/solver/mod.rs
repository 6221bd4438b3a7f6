//! Joint recovery of the object spectrum and per-measurement k-shifts.
//!
//! Each sweep projects the current spectrum estimate to the image plane for
//! every record, enforces the measured intensity, back-projects, and takes a
//! batch step on the data term plus TV and phase-sparsity regularizers.
//! Periodically each record's shift is refined by an exhaustive local search
//! whose radius shrinks linearly over the run.

mod gradients;
mod kernel;
mod params;
mod projection;
mod reconstruct;
mod search;
mod step;

pub use gradients::{
    data_update, phase_gradient, phase_loss, tv_gradient, tv_loss, DataTermAccumulator,
    PupilRecord,
};
pub use params::{SolverParams, StepRule};
pub use projection::{
    apply_image_constraint, apply_pupil_constraint, default_init_record, image_projection,
    initialize_object,
};
pub use reconstruct::{
    load_result, reconstruct, reconstruct_with, save_result, LossRecord,
    ReconstructionResult, RESULT_FILE,
};
pub use search::{
    annealed_radius, image_misfit, local_k_search, reduced_grid_size, MisfitEvaluator,
    PreparedIntensity,
};
pub use step::{step_size_alpha, update_spectrum};
