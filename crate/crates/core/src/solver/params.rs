use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the coverage raster α scales the data step in [`crate::solver::reconstruct`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum StepRule {
    /// α is the raw aperture count at each frequency.
    Coverage,
    /// α is the aperture count divided by its maximum, so the step never
    /// exceeds one full projection.
    #[default]
    NormalizedCoverage,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverParams {
    pub iterations: usize,
    /// TV weight.
    pub beta: f64,
    /// Phase-sparsity weight.
    pub gamma: f64,
    /// Initial k-search radius in pixels.
    pub delta_max: u32,
    /// Final k-search radius in pixels.
    pub delta_min: u32,
    /// Run the k-search after every `search_every`-th sweep.
    pub search_every: usize,
    pub epsilon: f64,
    pub use_pupil_constraint: bool,
    #[serde(default)]
    pub step_rule: StepRule,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            iterations: 100,
            beta: 1e-1,
            gamma: 1e-3,
            delta_max: 9,
            delta_min: 1,
            search_every: 10,
            epsilon: 1e-8,
            use_pupil_constraint: false,
            step_rule: StepRule::default(),
        }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::validation("iterations must be at least 1"));
        }
        if self.delta_min > self.delta_max {
            return Err(Error::validation(format!(
                "delta_min ({}) must not exceed delta_max ({})",
                self.delta_min, self.delta_max
            )));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::validation(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        for (name, w) in [("beta", self.beta), ("gamma", self.gamma)] {
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::validation(format!("{name} must be nonnegative, got {w}")));
            }
        }
        if self.search_every == 0 {
            return Err(Error::validation("search_every must be at least 1"));
        }
        Ok(())
    }

    /// True when the schedule can move any estimate.
    pub fn search_enabled(&self) -> bool {
        self.delta_max > 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let p = SolverParams::default();
        p.validate().unwrap();
        assert_eq!((p.beta, p.gamma), (0.1, 1e-3));
        assert_eq!((p.delta_max, p.delta_min, p.search_every), (9, 1, 10));
        assert!(!p.use_pupil_constraint);
    }

    #[test]
    fn invalid_params_are_rejected() {
        let base = SolverParams::default();
        for bad in [
            SolverParams { iterations: 0, ..base },
            SolverParams { delta_min: 10, ..base },
            SolverParams { epsilon: 0.0, ..base },
            SolverParams { beta: -1.0, ..base },
            SolverParams { gamma: f64::NAN, ..base },
            SolverParams { search_every: 0, ..base },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }
}
