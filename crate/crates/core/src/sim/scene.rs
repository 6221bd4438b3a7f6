//! Procedural grayscale scenes for simulation when no image file is at hand.
//!
//! All scenes return gray levels in `[0, 1]` and are fully determined by
//! their size and seed.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::raster::RealRaster;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SceneKind {
    /// Spacecraft-like object on a black background.
    Satellite,
    /// Smooth random blobs covering the whole frame.
    Texture,
}

impl std::str::FromStr for SceneKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "satellite" => Ok(SceneKind::Satellite),
            "texture" => Ok(SceneKind::Texture),
            other => Err(format!("unknown scene '{other}' (expected satellite or texture)")),
        }
    }
}

pub fn render(kind: SceneKind, size: usize, seed: u64) -> RealRaster {
    match kind {
        SceneKind::Satellite => satellite(size, seed),
        SceneKind::Texture => texture(size, seed),
    }
}

/// Oriented frame used to place parts relative to the spacecraft body.
struct Frame {
    cx: f64,
    cy: f64,
    cos: f64,
    sin: f64,
}

impl Frame {
    /// Body coordinates (u along the body axis, v across) of image point (x, y).
    fn to_body(&self, x: f64, y: f64) -> (f64, f64) {
        let (dx, dy) = (x - self.cx, y - self.cy);
        (dx * self.cos + dy * self.sin, -dx * self.sin + dy * self.cos)
    }
}

/// Supersampled painter: `shade(u, v)` returns `Some(gray)` inside the shape.
fn paint<F>(canvas: &mut RealRaster, frame: &Frame, shade: F)
where
    F: Fn(f64, f64) -> Option<f64>,
{
    const SS: usize = 4;
    let (h, w) = canvas.dim();
    for r in 0..h {
        for c in 0..w {
            let mut acc = 0.0;
            let mut hits = 0;
            for sy in 0..SS {
                for sx in 0..SS {
                    let x = c as f64 + (sx as f64 + 0.5) / SS as f64;
                    let y = r as f64 + (sy as f64 + 0.5) / SS as f64;
                    let (u, v) = frame.to_body(x, y);
                    if let Some(g) = shade(u, v) {
                        acc += g;
                        hits += 1;
                    }
                }
            }
            if hits > 0 {
                let cover = hits as f64 / (SS * SS) as f64;
                let g = acc / hits as f64;
                let px = &mut canvas[[r, c]];
                *px = *px * (1.0 - cover) + g * cover;
            }
        }
    }
}

/// Spacecraft silhouette: shaded cylindrical body, two segmented solar arrays,
/// booms and a dish antenna, lightly blurred.
pub fn satellite(size: usize, seed: u64) -> RealRaster {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = size as f64;
    let angle = rng.random_range(-0.6..0.6);
    let frame = Frame {
        cx: n * (0.5 + rng.random_range(-0.03..0.03)),
        cy: n * (0.5 + rng.random_range(-0.03..0.03)),
        cos: f64::cos(angle),
        sin: f64::sin(angle),
    };
    let mut canvas = RealRaster::zeros((size, size));

    let body_len = n * rng.random_range(0.36..0.44);
    let body_rad = n * rng.random_range(0.06..0.075);
    let panel_len = n * rng.random_range(0.24..0.30);
    let panel_wid = n * rng.random_range(0.09..0.11);
    let panel_gap = body_rad + n * 0.04;
    let panel_u = rng.random_range(-0.1..0.1) * body_len;
    let cells_u = rng.random_range(4..7) as f64;
    let cells_v = rng.random_range(6..10) as f64;

    // Booms behind the arrays.
    paint(&mut canvas, &frame, |u, v| {
        ((u - panel_u).abs() < n * 0.006 && v.abs() < panel_gap + panel_len).then_some(0.55)
    });

    // Solar arrays, one on each side of the body.
    for side in [-1.0, 1.0] {
        paint(&mut canvas, &frame, |u, v| {
            let along = side * v - panel_gap;
            let across = u - panel_u;
            if !(0.0..panel_len).contains(&along) || across.abs() > panel_wid / 2.0 {
                return None;
            }
            let fu = (across / panel_wid + 0.5) * cells_u;
            let fv = along / panel_len * cells_v;
            let seam = (fu - fu.round()).abs() < 0.06 || (fv - fv.round()).abs() < 0.05;
            Some(if seam { 0.18 } else { 0.42 + 0.06 * (fv.floor() % 2.0) })
        });
    }

    // Body: shaded cylinder with equipment bands.
    let bands: Vec<f64> = (0..3).map(|_| rng.random_range(-0.4..0.4) * body_len).collect();
    paint(&mut canvas, &frame, |u, v| {
        if u.abs() > body_len / 2.0 || v.abs() > body_rad {
            return None;
        }
        let shade = 0.55 + 0.4 * (1.0 - (v / body_rad).powi(2)).sqrt();
        let band = bands.iter().any(|b| (u - b).abs() < n * 0.008);
        Some(if band { shade * 0.6 } else { shade })
    });

    // Aperture door and a dish antenna on a short mast.
    let door_u = body_len / 2.0;
    paint(&mut canvas, &frame, |u, v| {
        let e = ((u - door_u) / (n * 0.02)).powi(2) + (v / body_rad).powi(2);
        (e <= 1.0).then_some(0.98)
    });
    let dish_v = -(body_rad + n * 0.05);
    let dish_u = -body_len * 0.3;
    paint(&mut canvas, &frame, |u, v| {
        ((u - dish_u).abs() < n * 0.004 && (dish_v..-body_rad).contains(&v)).then_some(0.6)
    });
    paint(&mut canvas, &frame, |u, v| {
        let d = ((u - dish_u).powi(2) + (v - dish_v).powi(2)).sqrt();
        (d < n * 0.03).then(|| 0.7 + 0.25 * (1.0 - d / (n * 0.03)))
    });

    let mut out = gaussian_blur(&canvas, 0.7);
    out.mapv_inplace(|v| v.clamp(0.0, 1.0));
    out
}

/// Sum of random Gaussian blobs and ridges rescaled to `[0, 1]`.
pub fn texture(size: usize, seed: u64) -> RealRaster {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = size as f64;
    let blobs: Vec<(f64, f64, f64, f64)> = (0..40)
        .map(|_| {
            (
                rng.random_range(0.0..n),
                rng.random_range(0.0..n),
                n * rng.random_range(0.02..0.15),
                rng.random_range(-0.5..1.0),
            )
        })
        .collect();
    let waves: Vec<(f64, f64, f64)> = (0..6)
        .map(|_| {
            (
                rng.random_range(0.0..2.0 * PI),
                rng.random_range(2.0..12.0) * 2.0 * PI / n,
                rng.random_range(0.0..2.0 * PI),
            )
        })
        .collect();
    let raw = RealRaster::from_shape_fn((size, size), |(r, c)| {
        let (x, y) = (c as f64, r as f64);
        let mut v: f64 = blobs
            .iter()
            .map(|&(bx, by, s, a)| a * (-((x - bx).powi(2) + (y - by).powi(2)) / (2.0 * s * s)).exp())
            .sum();
        for &(dir, freq, ph) in &waves {
            v += 0.08 * (freq * (x * dir.cos() + y * dir.sin()) + ph).sin();
        }
        v
    });
    let lo = raw.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    raw.mapv(|v| if hi > lo { (v - lo) / (hi - lo) } else { 0.0 })
}

/// Separable Gaussian blur with clamped edges.
pub fn gaussian_blur(src: &RealRaster, sigma: f64) -> RealRaster {
    if sigma <= 0.0 {
        return src.clone();
    }
    let half = (3.0 * sigma).ceil() as i64;
    let kernel: Vec<f64> = (-half..=half)
        .map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let norm: f64 = kernel.iter().sum();
    let kernel: Vec<f64> = kernel.iter().map(|k| k / norm).collect();
    let (h, w) = src.dim();
    let pass = |input: &RealRaster, horizontal: bool| {
        RealRaster::from_shape_fn((h, w), |(r, c)| {
            kernel
                .iter()
                .enumerate()
                .map(|(i, k)| {
                    let o = i as i64 - half;
                    let (rr, cc) = if horizontal {
                        (r as i64, (c as i64 + o).clamp(0, w as i64 - 1))
                    } else {
                        ((r as i64 + o).clamp(0, h as i64 - 1), c as i64)
                    };
                    k * input[[rr as usize, cc as usize]]
                })
                .sum()
        })
    };
    pass(&pass(src, true), false)
}
