//! Per-root size metrics, sorter minimums and grading.

use std::fmt;

use super::{CalibrationFactor, MaskError, PolygonMask, RootObservation};
use crate::estimate::{ellipsoid_volume, weight_from_volume};
use crate::geom2d::{convex_hull, min_area_rect, signed_area};
use crate::DEFAULT_DENSITY;

/// The sorter drops roots narrower than 1 inch or shorter than 2 inches.
pub const MIN_SORTER_WIDTH_CM: f64 = 2.54;
pub const MIN_SORTER_LENGTH_CM: f64 = 5.08;

const NO1_WIDTH: (f64, f64) = (4.45, 8.89);
const NO1_LENGTH: (f64, f64) = (7.62, 22.86);
const NO1_MAX_WEIGHT: f64 = 567.0;

/// Shoelace area in px².
pub fn polygon_area(mask: &PolygonMask) -> f64 {
    signed_area(mask.points()).abs()
}

pub fn mask_metrics(mask: &PolygonMask, cal: CalibrationFactor, plot_id: &str) -> Result<RootObservation, MaskError> {
    mask_metrics_with_density(mask, cal, plot_id, DEFAULT_DENSITY)
}

/// Length and width are the sides of the hull's minimum-area rectangle;
/// weight comes from the ellipsoid model with `c = width / 2`.
pub fn mask_metrics_with_density(
    mask: &PolygonMask,
    cal: CalibrationFactor,
    plot_id: &str,
    density: f64,
) -> Result<RootObservation, MaskError> {
    let hull = convex_hull(mask.points());
    let rect = min_area_rect(&hull).ok_or_else(|| MaskError::Degenerate("empty outline".into()))?;
    if hull.len() < 3 || !(rect.short > 0.0) {
        return Err(MaskError::Degenerate(format!("outline on {} is collinear", mask.image_id())));
    }
    let k = cal.px_per_cm();
    let length = rect.long / k;
    let width = rect.short / k;
    let area = polygon_area(mask) / (k * k);
    let weight_est = weight_from_volume(ellipsoid_volume(area, width / 2.0)?, density)?;
    let root_id = mask.root_id().map(str::to_string).unwrap_or_default();
    Ok(RootObservation { root_id, plot_id: plot_id.to_string(), length, width, area, weight_est })
}

/// Keeps roots with width ≥ 2.54 cm and length ≥ 5.08 cm; values exactly on
/// a threshold are kept.
pub fn filter_sorter_minimums(obs: &[RootObservation]) -> Vec<RootObservation> {
    obs.iter().filter(|o| o.width >= MIN_SORTER_WIDTH_CM && o.length >= MIN_SORTER_LENGTH_CM).cloned().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UsdaGrade {
    UsNo1,
    Other,
}

impl fmt::Display for UsdaGrade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UsdaGrade::UsNo1 => "US_No1",
            UsdaGrade::Other => "Other",
        })
    }
}

/// U.S. No. 1: diameter 4.45–8.89 cm, length 7.62–22.86 cm, at most 567 g.
/// All bounds inclusive.
pub fn classify_usda_grade(obs: &RootObservation) -> UsdaGrade {
    let within = |v: f64, (lo, hi): (f64, f64)| v >= lo && v <= hi;
    if within(obs.width, NO1_WIDTH) && within(obs.length, NO1_LENGTH) && obs.weight_est <= NO1_MAX_WEIGHT {
        UsdaGrade::UsNo1
    } else {
        UsdaGrade::Other
    }
}
