use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optics::{RotationAngle, SMALL_ANGLE_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanAxis {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridLayout {
    Grid { nx: usize, ny: usize },
    AxisScan { axis: ScanAxis, n: usize },
    Custom,
}

/// Ordered rotation states, one per measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleGrid {
    pub angles: Vec<RotationAngle>,
    pub layout: GridLayout,
}

fn linspace_symmetric(n: usize, max: f64) -> Vec<f64> {
    if n == 1 {
        return vec![0.0];
    }
    let step = 2.0 * max / (n - 1) as f64;
    (0..n)
        .map(|i| {
            // Mirror the upper half so the values are exactly symmetric about zero.
            let j = n - 1 - i;
            if i <= j {
                -max + step * i as f64
            } else {
                max - step * j as f64
            }
        })
        .collect()
}

fn check_theta_max(theta_max: f64) -> Result<()> {
    if !(theta_max.is_finite() && (0.0..SMALL_ANGLE_LIMIT).contains(&theta_max)) {
        return Err(Error::validation(format!(
            "theta_max must lie in [0, {SMALL_ANGLE_LIMIT}) rad, got {theta_max}"
        )));
    }
    Ok(())
}

/// Cartesian `nx × ny` grid spanning `[-θ_max, θ_max]` on each axis.
///
/// Angles are ordered row by row: `θ_y` is the outer index, `θ_x` the inner.
pub fn generate_rotation_grid(nx: usize, ny: usize, theta_max: f64) -> Result<AngleGrid> {
    if nx == 0 || ny == 0 {
        return Err(Error::validation("grid dimensions must be at least 1"));
    }
    check_theta_max(theta_max)?;
    let xs = linspace_symmetric(nx, theta_max);
    let ys = linspace_symmetric(ny, theta_max);
    let angles = ys
        .iter()
        .flat_map(|&ty| {
            xs.iter().map(move |&tx| RotationAngle {
                theta_x: tx,
                theta_y: ty,
            })
        })
        .collect();
    Ok(AngleGrid {
        angles,
        layout: GridLayout::Grid { nx, ny },
    })
}

impl AngleGrid {
    /// Single-axis scan of `n` angles spanning `[-θ_max, θ_max]`.
    pub fn axis_scan(axis: ScanAxis, n: usize, theta_max: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::validation("scan length must be at least 1"));
        }
        check_theta_max(theta_max)?;
        let angles = linspace_symmetric(n, theta_max)
            .into_iter()
            .map(|t| match axis {
                ScanAxis::X => RotationAngle { theta_x: t, theta_y: 0.0 },
                ScanAxis::Y => RotationAngle { theta_x: 0.0, theta_y: t },
            })
            .collect();
        Ok(Self {
            angles,
            layout: GridLayout::AxisScan { axis, n },
        })
    }

    pub fn custom(angles: Vec<RotationAngle>) -> Result<Self> {
        for a in &angles {
            a.validate()?;
        }
        Ok(Self {
            angles,
            layout: GridLayout::Custom,
        })
    }

    /// Smallest nonzero step between distinct angle values on either axis.
    pub fn spacing(&self) -> Option<f64> {
        let mut vals: Vec<f64> = self
            .angles
            .iter()
            .flat_map(|a| [a.theta_x, a.theta_y])
            .collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        vals.windows(2)
            .map(|w| w[1] - w[0])
            .filter(|d| *d > 0.0)
            .min_by(f64::total_cmp)
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
}
