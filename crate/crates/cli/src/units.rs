//! Parsers for the textual argument formats.

use isafp::sim::NoiseSpec;

use crate::error::{CliError, CliResult};

/// `NXxNY`, e.g. `11x11`.
pub fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NXxNY, got {s:?}"))?;
    let nx = a.trim().parse().map_err(|_| format!("bad grid width in {s:?}"))?;
    let ny = b.trim().parse().map_err(|_| format!("bad grid height in {s:?}"))?;
    Ok((nx, ny))
}

/// An angle in radians; a `deg` or `rad` suffix selects the unit.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let (num, deg) = if let Some(v) = t.strip_suffix("deg") {
        (v, true)
    } else if let Some(v) = t.strip_suffix("rad") {
        (v, false)
    } else {
        (t, false)
    };
    let v: f64 = num.trim().parse().map_err(|_| format!("bad angle {s:?}"))?;
    if !v.is_finite() {
        return Err(format!("angle must be finite, got {s:?}"));
    }
    Ok(if deg { v.to_radians() } else { v })
}

/// `none`, `gaussian:<sigma>` or `poisson:<peak>`.
pub fn parse_noise(s: &str) -> Result<NoiseSpec, String> {
    let spec = match s.split_once(':') {
        None if s == "none" => NoiseSpec::None,
        Some(("gaussian", v)) => NoiseSpec::Gaussian {
            sigma: v.parse().map_err(|_| format!("bad sigma in {s:?}"))?,
        },
        Some(("poisson", v)) => NoiseSpec::Poisson {
            peak: v.parse().map_err(|_| format!("bad peak in {s:?}"))?,
        },
        _ => return Err(format!("expected none, gaussian:<sigma> or poisson:<peak>, got {s:?}")),
    };
    spec.validate().map_err(|e| e.to_string())?;
    Ok(spec)
}

/// Initial k-space estimate source.
#[derive(Debug, Clone, PartialEq)]
pub enum InitChoice {
    GroundTruth,
    PupilSupport,
    Coarse,
    File(std::path::PathBuf),
}

pub fn parse_init(s: &str) -> Result<InitChoice, String> {
    match s {
        "ground-truth" => Ok(InitChoice::GroundTruth),
        "pupil-support" => Ok(InitChoice::PupilSupport),
        "coarse" => Ok(InitChoice::Coarse),
        _ => match s.strip_prefix("file:") {
            Some(p) if !p.is_empty() => Ok(InitChoice::File(p.into())),
            _ => Err(format!(
                "expected ground-truth, pupil-support, coarse or file:<path>, got {s:?}"
            )),
        },
    }
}

pub fn positive(v: f64, what: &str) -> CliResult<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::validation(format!("{what} must be positive, got {v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert_eq!(parse_angle("0.5rad").unwrap(), 0.5);
        assert!((parse_angle("180deg").unwrap() - std::f64::consts::PI).abs() < 1e-15);
        assert!(parse_angle("abc").is_err());
        assert!(parse_angle("infdeg").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("11x11").unwrap(), (11, 11));
        assert_eq!(parse_grid("1X3").unwrap(), (1, 3));
        assert!(parse_grid("11").is_err());
    }

    #[test]
    fn noise() {
        assert_eq!(parse_noise("none").unwrap(), NoiseSpec::None);
        assert_eq!(parse_noise("poisson:100").unwrap(), NoiseSpec::Poisson { peak: 100.0 });
        assert!(parse_noise("poisson:-1").is_err());
        assert!(parse_noise("gauss:1").is_err());
    }

    #[test]
    fn inits() {
        assert_eq!(parse_init("coarse").unwrap(), InitChoice::Coarse);
        assert_eq!(parse_init("file:a.json").unwrap(), InitChoice::File("a.json".into()));
        assert!(parse_init("file:").is_err());
        assert!(parse_init("kfinder").is_err());
    }
}
