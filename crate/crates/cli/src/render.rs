//! Static PNG figures.

use std::f64::consts::PI;
use std::io::Cursor;

use image::{GrayImage, ImageFormat, Luma, Rgb, RgbImage};
use isafp::raster::RealRaster;
use isafp::WaveVector;

use crate::error::CliResult;

/// Grayscale amplitude scaled so the maximum maps to 255.
pub fn amplitude_image(amp: &RealRaster) -> GrayImage {
    let (rows, cols) = amp.dim();
    let max = amp.iter().cloned().fold(0.0, f64::max);
    let scale = if max > 0.0 { 255.0 / max } else { 0.0 };
    GrayImage::from_fn(cols as u32, rows as u32, |x, y| {
        Luma([(amp[[y as usize, x as usize]] * scale).round().clamp(0.0, 255.0) as u8])
    })
}

fn hsv(h: f64, v: f64) -> Rgb<u8> {
    let h6 = h.rem_euclid(1.0) * 6.0;
    let f = h6 - h6.floor();
    let (p, q, t) = (0.0, v * (1.0 - f), v * f);
    let (r, g, b) = match h6 as u32 {
        0 => (v, t, p),
        1 => (q, v, p),
        2 => (p, v, t),
        3 => (p, q, v),
        4 => (t, p, v),
        _ => (v, p, q),
    };
    let c = |x: f64| (x * 255.0).round().clamp(0.0, 255.0) as u8;
    Rgb([c(r), c(g), c(b)])
}

/// Phase `phase - offset` as hue, amplitude as brightness.
pub fn phase_image(amp: &RealRaster, phase: &RealRaster, offset: f64) -> RgbImage {
    let (rows, cols) = amp.dim();
    let max = amp.iter().cloned().fold(0.0, f64::max);
    RgbImage::from_fn(cols as u32, rows as u32, |x, y| {
        let ix = [y as usize, x as usize];
        let v = if max > 0.0 { amp[ix] / max } else { 0.0 };
        hsv((phase[ix] - offset) / (2.0 * PI), v)
    })
}

const SIZE: u32 = 512;
const MARGIN: u32 = 40;
const INITIAL: Rgb<u8> = Rgb([70, 110, 230]);
const CORRECTED: Rgb<u8> = Rgb([220, 50, 40]);
const TRUTH: Rgb<u8> = Rgb([30, 160, 60]);
const AXIS: Rgb<u8> = Rgb([0, 0, 0]);
const GUIDE: Rgb<u8> = Rgb([200, 200, 200]);

struct Canvas {
    img: RgbImage,
    extent: f64,
}

impl Canvas {
    fn to_px(&self, kx: f64, ky: f64) -> (i64, i64) {
        let span = f64::from(SIZE - 2 * MARGIN);
        let x = f64::from(MARGIN) + (kx + self.extent) / (2.0 * self.extent) * span;
        let y = f64::from(MARGIN) + (self.extent - ky) / (2.0 * self.extent) * span;
        (x.round() as i64, y.round() as i64)
    }

    fn put(&mut self, x: i64, y: i64, c: Rgb<u8>) {
        if x >= 0 && y >= 0 && x < i64::from(SIZE) && y < i64::from(SIZE) {
            self.img.put_pixel(x as u32, y as u32, c);
        }
    }

    fn line(&mut self, (x0, y0): (i64, i64), (x1, y1): (i64, i64), c: Rgb<u8>) {
        let steps = (x1 - x0).abs().max((y1 - y0).abs()).max(1);
        for s in 0..=steps {
            let t = s as f64 / steps as f64;
            let x = x0 as f64 + t * (x1 - x0) as f64;
            let y = y0 as f64 + t * (y1 - y0) as f64;
            self.put(x.round() as i64, y.round() as i64, c);
        }
    }

    fn square(&mut self, (x, y): (i64, i64), r: i64, c: Rgb<u8>) {
        for d in -r..=r {
            self.put(x + d, y - r, c);
            self.put(x + d, y + r, c);
            self.put(x - r, y + d, c);
            self.put(x + r, y + d, c);
        }
    }

    fn dot(&mut self, (x, y): (i64, i64), r: i64, c: Rgb<u8>) {
        for dy in -r..=r {
            for dx in -r..=r {
                if dx * dx + dy * dy <= r * r {
                    self.put(x + dx, y + dy, c);
                }
            }
        }
    }

    fn cross(&mut self, (x, y): (i64, i64), r: i64, c: Rgb<u8>) {
        for d in -r..=r {
            self.put(x + d, y + d, c);
            self.put(x + d, y - d, c);
        }
    }
}

/// Scatter of initial (blue squares), corrected (red dots) and true (green
/// crosses) shifts, with guides from each initial to its corrected estimate.
pub fn kspace_image(initial: &[WaveVector], corrected: &[WaveVector], truth: Option<&[WaveVector]>) -> RgbImage {
    let all = initial.iter().chain(corrected).chain(truth.unwrap_or(&[]));
    let reach = all.map(|k| k.kx.abs().max(k.ky.abs())).max().unwrap_or(0);
    let mut c = Canvas {
        img: RgbImage::from_pixel(SIZE, SIZE, Rgb([255, 255, 255])),
        extent: (reach as f64 * 1.1).max(5.0),
    };

    // frame, zero axes and ticks every 10 px
    let (lo, hi) = (i64::from(MARGIN), i64::from(SIZE - MARGIN));
    for (a, b) in [((lo, lo), (hi, lo)), ((hi, lo), (hi, hi)), ((hi, hi), (lo, hi)), ((lo, hi), (lo, lo))] {
        c.line(a, b, AXIS);
    }
    let origin = c.to_px(0.0, 0.0);
    c.line((lo, origin.1), (hi, origin.1), GUIDE);
    c.line((origin.0, lo), (origin.0, hi), GUIDE);
    let ticks = (c.extent / 10.0) as i64;
    for t in -ticks..=ticks {
        let (x, _) = c.to_px(10.0 * t as f64, 0.0);
        let (_, y) = c.to_px(0.0, 10.0 * t as f64);
        c.line((x, hi), (x, hi + 5), AXIS);
        c.line((lo - 5, y), (lo, y), AXIS);
    }

    for (a, b) in initial.iter().zip(corrected) {
        if a != b {
            let (pa, pb) = (c.to_px(a.kx as f64, a.ky as f64), c.to_px(b.kx as f64, b.ky as f64));
            c.line(pa, pb, GUIDE);
        }
    }
    for k in initial {
        let p = c.to_px(k.kx as f64, k.ky as f64);
        c.square(p, 3, INITIAL);
    }
    if let Some(t) = truth {
        for k in t {
            let p = c.to_px(k.kx as f64, k.ky as f64);
            c.cross(p, 4, TRUTH);
        }
    }
    for k in corrected {
        let p = c.to_px(k.kx as f64, k.ky as f64);
        c.dot(p, 2, CORRECTED);
    }

    // legend swatches, top left
    let y = i64::from(MARGIN / 2);
    c.square((lo, y), 3, INITIAL);
    c.dot((lo + 16, y), 2, CORRECTED);
    if truth.is_some() {
        c.cross((lo + 32, y), 4, TRUTH);
    }
    c.img
}

pub fn png_bytes(img: impl Into<image::DynamicImage>) -> CliResult<Vec<u8>> {
    let mut buf = Cursor::new(Vec::new());
    img.into().write_to(&mut buf, ImageFormat::Png)?;
    Ok(buf.into_inner())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn brightest_pixel_is_white() {
        let amp = array![[0.0, 0.5], [2.0, 1.0]];
        let img = amplitude_image(&amp);
        assert_eq!(img.get_pixel(0, 1)[0], 255);
        assert_eq!(img.get_pixel(0, 0)[0], 0);
        assert_eq!(img.get_pixel(1, 1)[0], 128);
    }

    #[test]
    fn hue_wheel_endpoints() {
        assert_eq!(hsv(0.0, 1.0), Rgb([255, 0, 0]));
        assert_eq!(hsv(1.0 / 3.0, 1.0), Rgb([0, 255, 0]));
        assert_eq!(hsv(2.0 / 3.0, 1.0), Rgb([0, 0, 255]));
        assert_eq!(hsv(0.25, 0.0), Rgb([0, 0, 0]));
    }

    #[test]
    fn truth_series_is_optional() {
        let k = [WaveVector::new(3, -4)];
        let without = kspace_image(&k, &k, None);
        let with = kspace_image(&k, &k, Some(&k));
        let green = |img: &RgbImage| img.pixels().filter(|p| **p == TRUTH).count();
        assert_eq!(green(&without), 0);
        assert!(green(&with) > 0);
    }
}
