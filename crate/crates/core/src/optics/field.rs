use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::RealRaster;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Spatial,
    Frequency,
}

/// Square complex raster tagged with the domain it lives in.
///
/// Invariants: N×N with N even and at least 2, every sample finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    data: Array2<Complex64>,
    domain: Domain,
}

impl ComplexField {
    pub fn new(data: Array2<Complex64>, domain: Domain) -> Result<Self> {
        validate_shape(data.dim())?;
        if let Some(v) = data.iter().find(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::validation(format!("field contains non-finite value {v}")));
        }
        Ok(Self { data, domain })
    }

    /// Skips the finiteness scan. Shape is still checked in debug builds.
    pub(crate) fn from_parts(data: Array2<Complex64>, domain: Domain) -> Self {
        debug_assert!(validate_shape(data.dim()).is_ok());
        Self { data, domain }
    }

    pub fn zeros(n: usize, domain: Domain) -> Result<Self> {
        validate_shape((n, n))?;
        Ok(Self::from_parts(Array2::zeros((n, n)), domain))
    }

    pub fn from_real(raster: &RealRaster, domain: Domain) -> Result<Self> {
        Self::new(raster.mapv(|v| Complex64::new(v, 0.0)), domain)
    }

    /// Builds `amplitude · exp(i·phase)` pointwise.
    pub fn from_polar(amplitude: &RealRaster, phase: &RealRaster, domain: Domain) -> Result<Self> {
        crate::raster::check_same_shape(amplitude.dim(), phase.dim())?;
        let data = ndarray::Zip::from(amplitude)
            .and(phase)
            .map_collect(|&a, &p| Complex64::from_polar(a, p));
        Self::new(data, domain)
    }

    pub fn size(&self) -> usize {
        self.data.nrows()
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn data(&self) -> &Array2<Complex64> {
        &self.data
    }

    pub fn into_data(self) -> Array2<Complex64> {
        self.data
    }

    /// Sum of squared moduli.
    pub fn energy(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn amplitude(&self) -> RealRaster {
        self.data.mapv(|v| v.norm())
    }

    pub fn phase(&self) -> RealRaster {
        self.data.mapv(|v| v.arg())
    }

    pub fn intensity(&self) -> RealRaster {
        self.data.mapv(|v| v.norm_sqr())
    }

    /// Multiplies every sample by `exp(i·phi)`.
    pub fn with_global_phase(&self, phi: f64) -> Self {
        let rot = Complex64::from_polar(1.0, phi);
        Self::from_parts(self.data.mapv(|v| v * rot), self.domain)
    }

    pub(crate) fn expect_domain(&self, domain: Domain, what: &str) -> Result<()> {
        if self.domain != domain {
            return Err(Error::validation(format!(
                "{what} must be in the {domain:?} domain, got {:?}",
                self.domain
            )));
        }
        Ok(())
    }
}

fn validate_shape((rows, cols): (usize, usize)) -> Result<()> {
    if rows != cols {
        return Err(Error::validation(format!("field must be square, got {rows}×{cols}")));
    }
    if rows < 2 || rows % 2 != 0 {
        return Err(Error::validation(format!(
            "field size must be even and at least 2, got {rows}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes_and_values() {
        assert!(ComplexField::new(Array2::zeros((4, 6)), Domain::Spatial).is_err());
        assert!(ComplexField::new(Array2::zeros((5, 5)), Domain::Spatial).is_err());
        assert!(ComplexField::new(Array2::zeros((0, 0)), Domain::Spatial).is_err());
        let mut data = Array2::zeros((4, 4));
        data[[1, 2]] = Complex64::new(f64::NAN, 0.0);
        assert!(ComplexField::new(data, Domain::Spatial).is_err());
    }

    #[test]
    fn polar_construction() {
        let a = RealRaster::from_elem((2, 2), 2.0);
        let p = RealRaster::from_elem((2, 2), std::f64::consts::FRAC_PI_2);
        let f = ComplexField::from_polar(&a, &p, Domain::Spatial).unwrap();
        assert!((f.data()[[0, 0]] - Complex64::new(0.0, 2.0)).norm() < 1e-15);
        assert!((f.energy() - 16.0).abs() < 1e-12);
    }
}
