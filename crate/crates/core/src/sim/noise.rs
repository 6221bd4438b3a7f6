use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::RealRaster;

/// Measurement noise model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseSpec {
    #[default]
    None,
    /// Additive Gaussian noise with standard deviation `sigma · max(raster)`.
    Gaussian { sigma: f64 },
    /// Shot noise with the raster maximum mapped to `peak` expected photons.
    Poisson { peak: f64 },
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseSpec::None => Ok(()),
            NoiseSpec::Gaussian { sigma } if sigma.is_finite() && sigma >= 0.0 => Ok(()),
            NoiseSpec::Gaussian { sigma } => Err(Error::validation(format!(
                "gaussian sigma must be finite and nonnegative, got {sigma}"
            ))),
            NoiseSpec::Poisson { peak } if peak.is_finite() && peak > 0.0 => Ok(()),
            NoiseSpec::Poisson { peak } => Err(Error::validation(format!(
                "poisson peak must be positive, got {peak}"
            ))),
        }
    }
}

/// Noise model plus the seed that makes it reproducible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct NoiseConfig {
    pub spec: NoiseSpec,
    pub seed: u64,
}

impl NoiseConfig {
    /// Independent generator for one raster of one record.
    pub(crate) fn rng_for(&self, record: usize, plane: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(record as u64 * 2 + plane);
        rng
    }
}

/// Applies `noise` to a nonnegative raster; the result is clamped at zero.
pub fn add_noise<R: Rng + ?Sized>(raster: &RealRaster, noise: &NoiseSpec, rng: &mut R) -> Result<RealRaster> {
    noise.validate()?;
    let max = raster.iter().copied().fold(0.0, f64::max);
    match *noise {
        NoiseSpec::None => Ok(raster.clone()),
        NoiseSpec::Gaussian { sigma } if sigma == 0.0 || max == 0.0 => Ok(raster.clone()),
        NoiseSpec::Gaussian { sigma } => {
            let normal = Normal::new(0.0, sigma * max)
                .map_err(|e| Error::validation(format!("gaussian noise: {e}")))?;
            Ok(raster.mapv(|v| (v + normal.sample(rng)).max(0.0)))
        }
        NoiseSpec::Poisson { .. } if max == 0.0 => Ok(raster.clone()),
        NoiseSpec::Poisson { peak } => {
            let scale = peak / max;
            let mut out = raster.clone();
            for v in out.iter_mut() {
                let lambda = *v * scale;
                let counts = if lambda > 0.0 {
                    Poisson::new(lambda)
                        .map_err(|e| Error::validation(format!("poisson noise: {e}")))?
                        .sample(rng)
                } else {
                    0.0
                };
                *v = counts / scale;
            }
            Ok(out)
        }
    }
}
