//! Per-measurement spectrum shift estimates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optics::WaveVector;

/// Where a set of k-space estimates came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    GroundTruth,
    Classical,
    External,
    Corrected,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Provenance::GroundTruth => "ground_truth",
            Provenance::Classical => "classical",
            Provenance::External => "external",
            Provenance::Corrected => "corrected",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KSpaceEstimate {
    pub shifts: Vec<WaveVector>,
    pub provenance: Provenance,
    /// Record indices whose estimate fell back to a default (e.g. an empty
    /// pupil raster).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fallback_records: Vec<usize>,
}

impl KSpaceEstimate {
    pub fn new(shifts: Vec<WaveVector>, provenance: Provenance) -> Self {
        Self {
            shifts,
            provenance,
            fallback_records: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }

    /// Checks length against a measurement count and every shift against the on-grid bound.
    pub fn validate(&self, expected_len: usize, max_shift: i64) -> Result<()> {
        if self.shifts.len() != expected_len {
            return Err(Error::validation(format!(
                "k-space estimate has {} entries but the measurement set has {expected_len} records",
                self.shifts.len()
            )));
        }
        for (i, k) in self.shifts.iter().enumerate() {
            if k.kx.abs() > max_shift || k.ky.abs() > max_shift {
                return Err(Error::validation(format!(
                    "estimate for record {i} {k} exceeds the on-grid bound {max_shift}"
                )));
            }
        }
        Ok(())
    }

    /// Number of entries equal to the corresponding entry of `other`.
    pub fn count_equal(&self, other: &KSpaceEstimate) -> usize {
        self.shifts
            .iter()
            .zip(&other.shifts)
            .filter(|(a, b)| a == b)
            .count()
    }
}
