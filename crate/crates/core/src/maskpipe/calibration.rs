//! Pixels-per-centimetre from a strip of coloured tape of known length.

use std::collections::VecDeque;

use image::RgbImage;

use super::{CalibrationFactor, MaskError};
use crate::geom2d::{convex_hull, min_area_rect, P2};

/// Components smaller than this are treated as noise.
pub const MIN_TAPE_PIXELS: usize = 100;

/// Inclusive per-channel bounds, `[r, g, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelThresholds {
    pub min: [u8; 3],
    pub max: [u8; 3],
}

impl ChannelThresholds {
    pub const BLUE_TAPE: ChannelThresholds = ChannelThresholds { min: [0, 0, 120], max: [90, 140, 255] };
    pub const RED_TAPE: ChannelThresholds = ChannelThresholds { min: [150, 0, 0], max: [255, 90, 90] };

    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "blue" => Some(Self::BLUE_TAPE),
            "red" => Some(Self::RED_TAPE),
            _ => None,
        }
    }

    /// Parses `rmin,rmax,gmin,gmax,bmin,bmax`.
    pub fn parse(spec: &str) -> Result<Self, MaskError> {
        let v: Vec<u8> = spec
            .split(',')
            .map(|s| s.trim().parse::<u8>())
            .collect::<Result<_, _>>()
            .map_err(|e| MaskError::Domain(format!("thresholds {spec:?}: {e}")))?;
        if v.len() != 6 {
            return Err(MaskError::Domain(format!(
                "thresholds need 6 values (rmin,rmax,gmin,gmax,bmin,bmax), got {}",
                v.len()
            )));
        }
        let t = Self { min: [v[0], v[2], v[4]], max: [v[1], v[3], v[5]] };
        if (0..3).any(|i| t.min[i] > t.max[i]) {
            return Err(MaskError::Domain(format!("thresholds {spec:?}: a minimum exceeds its maximum")));
        }
        Ok(t)
    }

    pub fn accepts(&self, px: [u8; 3]) -> bool {
        (0..3).all(|i| px[i] >= self.min[i] && px[i] <= self.max[i])
    }
}

/// Largest 8-connected component as (row → (min col, max col)) spans plus
/// its pixel count.
fn largest_component(mask: &[bool], w: usize, h: usize) -> (usize, Vec<(usize, usize, usize)>) {
    let mut label = vec![0u32; w * h];
    let mut best: (usize, u32) = (0, 0);
    let mut next = 0u32;
    let mut queue = VecDeque::new();
    for start in 0..w * h {
        if !mask[start] || label[start] != 0 {
            continue;
        }
        next += 1;
        label[start] = next;
        queue.push_back(start);
        let mut size = 0usize;
        while let Some(i) = queue.pop_front() {
            size += 1;
            let (x, y) = ((i % w) as isize, (i / w) as isize);
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                        continue;
                    }
                    let j = ny as usize * w + nx as usize;
                    if mask[j] && label[j] == 0 {
                        label[j] = next;
                        queue.push_back(j);
                    }
                }
            }
        }
        if size > best.0 {
            best = (size, next);
        }
    }
    let mut spans = Vec::new();
    for row in 0..h {
        let line = &label[row * w..(row + 1) * w];
        if let (Some(a), Some(b)) = (line.iter().position(|&l| l == best.1), line.iter().rposition(|&l| l == best.1)) {
            spans.push((row, a, b));
        }
    }
    (best.0, spans)
}

/// Threshold → largest 8-connected component → convex hull of its pixel
/// squares → minimum-area rectangle. The long side spans `tape_length` cm.
pub fn detect_tape_calibration(
    image: &RgbImage,
    thresholds: ChannelThresholds,
    tape_length: f64,
) -> Result<CalibrationFactor, MaskError> {
    if !(tape_length > 0.0) || !tape_length.is_finite() {
        return Err(MaskError::Domain(format!("tape length must be positive, got {tape_length}")));
    }
    let (w, h) = (image.width() as usize, image.height() as usize);
    if w == 0 || h == 0 {
        return Err(MaskError::Domain("calibration image is empty".into()));
    }
    let mask: Vec<bool> = image.pixels().map(|p| thresholds.accepts(p.0)).collect();
    if !mask.iter().any(|&m| m) {
        return Err(MaskError::NoTape);
    }
    let (size, spans) = largest_component(&mask, w, h);
    if size < MIN_TAPE_PIXELS {
        return Err(MaskError::UnreliableCalibration { pixels: size, min: MIN_TAPE_PIXELS });
    }
    let mut corners = Vec::with_capacity(spans.len() * 4);
    for (row, a, b) in spans {
        let (y0, y1) = (row as f64, row as f64 + 1.0);
        let (x0, x1) = (a as f64, b as f64 + 1.0);
        corners.extend([P2::new(x0, y0), P2::new(x0, y1), P2::new(x1, y0), P2::new(x1, y1)]);
    }
    let rect = min_area_rect(&convex_hull(&corners)).ok_or_else(|| MaskError::Degenerate("tape hull".into()))?;
    CalibrationFactor::new(rect.long / tape_length)
}
