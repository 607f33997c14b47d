//! Closed-form volume models driven by a projected area.
//!
//! The ellipsoid model assumes the shadow is the ellipse through the
//! semi-major axis `a` and one minor axis `b`, with a circular cross-section
//! (`b = c`), so `V = 4/3·π·a·b·c ≈ 4/3·A_proj·c`. The square-cube model
//! scales the area isotropically: `V ≈ A_proj^(3/2)`.

use thiserror::Error;

use crate::geom2d::{convex_hull, min_area_rect};
use crate::sim::Silhouette;

#[derive(Debug, Error, PartialEq)]
pub enum EstimateError {
    #[error("{0}")]
    Domain(String),
    #[error("degenerate silhouette: {0}")]
    Degenerate(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolumeModel {
    Ellipsoid,
    SquareCube,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeEstimate {
    pub model: VolumeModel,
    pub a_proj: f64,
    /// Semi-minor axis used by the ellipsoid model; `None` for square-cube.
    pub c: Option<f64>,
    pub volume: f64,
    pub weight: f64,
}

impl VolumeEstimate {
    pub fn ellipsoid(a_proj: f64, c: f64, density: f64) -> Result<Self, EstimateError> {
        let volume = ellipsoid_volume(a_proj, c)?;
        Ok(Self {
            model: VolumeModel::Ellipsoid,
            a_proj,
            c: Some(c),
            volume,
            weight: weight_from_volume(volume, density)?,
        })
    }

    pub fn square_cube(a_proj: f64, density: f64) -> Result<Self, EstimateError> {
        let volume = square_cube_volume(a_proj)?;
        Ok(Self {
            model: VolumeModel::SquareCube,
            a_proj,
            c: None,
            volume,
            weight: weight_from_volume(volume, density)?,
        })
    }
}

fn positive(name: &str, v: f64) -> Result<(), EstimateError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(EstimateError::Domain(format!("{name} must be positive, got {v}")))
    }
}

pub fn ellipsoid_volume(a_proj: f64, c: f64) -> Result<f64, EstimateError> {
    positive("projected area", a_proj)?;
    positive("semi-minor axis", c)?;
    Ok(4.0 / 3.0 * a_proj * c)
}

pub fn square_cube_volume(a_proj: f64) -> Result<f64, EstimateError> {
    if !(a_proj >= 0.0) || !a_proj.is_finite() {
        return Err(EstimateError::Domain(format!("projected area must be non-negative, got {a_proj}")));
    }
    Ok(a_proj * a_proj.sqrt())
}

pub fn weight_from_volume(volume: f64, density: f64) -> Result<f64, EstimateError> {
    positive("density", density)?;
    if !(volume >= 0.0) || !volume.is_finite() {
        return Err(EstimateError::Domain(format!("volume must be non-negative, got {volume}")));
    }
    Ok(volume * density)
}

/// Half the short side of the minimum-area rectangle around the set
/// pixels, with each pixel treated as a filled square.
pub fn semi_minor_from_silhouette(s: &Silhouette) -> Result<f64, EstimateError> {
    let corners = s.boundary_corners();
    if corners.is_empty() {
        return Err(EstimateError::Degenerate("no set pixels".into()));
    }
    let hull = convex_hull(&corners);
    let rect = min_area_rect(&hull).ok_or_else(|| EstimateError::Degenerate("empty hull".into()))?;
    Ok(0.5 * rect.short)
}

/// Removes a proportional bias: `value / bias`.
pub fn apply_bias_correction(value: f64, bias: f64) -> Result<f64, EstimateError> {
    positive("bias", bias)?;
    Ok(value / bias)
}
