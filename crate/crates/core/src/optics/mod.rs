//! Optics primitives: centered unitary DFT, pupil masks, the dual-plane
//! forward model and the rotation/pixel-shift conversion.
//!
//! Frequency-domain rasters keep the DC bin at index `(N/2, N/2)`. Row index
//! is `y`, column index is `x`. A wavevector `k` means the aperture sits at
//! `center + k` in the global spectrum.

mod fft;
mod field;
mod forward;
mod geometry;
mod mask;

pub use fft::{fft_centered, ifft_centered, CenteredFft};
pub(crate) use fft::transpose_into;
pub use field::{ComplexField, Domain};
pub use forward::{
    extract_aperture, simulate_image_intensity, simulate_pupil_intensity, translate,
};
pub use geometry::{
    pixel_shift_to_rotation, rotation_to_pixel_shift, OpticalConfig, PixelShift, RotationAngle,
    WaveVector, SMALL_ANGLE_LIMIT,
};
pub use mask::{make_circular_mask, PupilMask};
