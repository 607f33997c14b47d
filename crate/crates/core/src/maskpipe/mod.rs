//! Field-image side of the pipeline: polygon annotations, tape calibration,
//! per-root metrics, sorter minimums, grading and plot aggregation.

mod calibration;
mod metrics;
mod sorter;
mod via;

use thiserror::Error;

use crate::estimate::EstimateError;
use crate::geom2d::{ring_self_intersects, signed_area, P2};

pub use calibration::{detect_tape_calibration, ChannelThresholds, MIN_TAPE_PIXELS};
pub use metrics::{
    classify_usda_grade, filter_sorter_minimums, mask_metrics, mask_metrics_with_density, polygon_area, UsdaGrade,
    MIN_SORTER_LENGTH_CM, MIN_SORTER_WIDTH_CM,
};
pub use sorter::{aggregate_plots, parse_sorter_csv, PlotRecord, SorterRecord, SORTER_COLUMNS};
pub use via::{parse_via_annotations, ViaAnnotations, ViaImage};

#[derive(Debug, Error)]
pub enum MaskError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{context}: {message}")]
    Parse { context: String, message: String },
    #[error("invalid polygon: {0}")]
    InvalidMask(String),
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
    #[error("{0}")]
    Domain(String),
    #[error("no pixels pass the tape thresholds")]
    NoTape,
    #[error("largest tape component has {pixels} px (< {min}); calibration unreliable")]
    UnreliableCalibration { pixels: usize, min: usize },
    #[error("sorter CSV is missing column {0:?}")]
    Schema(String),
    #[error("sorter CSV line {line}: {message}")]
    Row { line: u64, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Estimate(#[from] EstimateError),
}

/// A closed outline in pixel coordinates, stored counter-clockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonMask {
    image_id: String,
    root_id: Option<String>,
    points: Vec<P2>,
}

impl PolygonMask {
    /// Validates the ring (≥ 3 distinct vertices, simple, non-zero area)
    /// and reorders it counter-clockwise. A repeated closing vertex and
    /// consecutive duplicates are dropped.
    pub fn new(image_id: impl Into<String>, points: Vec<P2>) -> Result<Self, MaskError> {
        let mut pts: Vec<P2> = Vec::with_capacity(points.len());
        for p in points {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(MaskError::InvalidMask(format!("non-finite vertex ({}, {})", p.x, p.y)));
            }
            if pts.last() != Some(&p) {
                pts.push(p);
            }
        }
        while pts.len() > 1 && pts.first() == pts.last() {
            pts.pop();
        }
        if pts.len() < 3 {
            return Err(MaskError::InvalidMask(format!("{} distinct vertices, need at least 3", pts.len())));
        }
        if ring_self_intersects(&pts) {
            return Err(MaskError::InvalidMask("outline crosses itself".into()));
        }
        let a = signed_area(&pts);
        if a == 0.0 {
            return Err(MaskError::InvalidMask("outline has zero area".into()));
        }
        if a < 0.0 {
            pts.reverse();
        }
        Ok(Self { image_id: image_id.into(), root_id: None, points: pts })
    }

    pub fn with_root_id(mut self, id: impl Into<String>) -> Self {
        self.root_id = Some(id.into());
        self
    }

    pub fn image_id(&self) -> &str {
        &self.image_id
    }

    pub fn root_id(&self) -> Option<&str> {
        self.root_id.as_deref()
    }

    pub fn points(&self) -> &[P2] {
        &self.points
    }

    pub fn map_points(&self, f: impl Fn(&P2) -> P2) -> Result<Self, MaskError> {
        let mut m = Self::new(self.image_id.clone(), self.points.iter().map(f).collect())?;
        m.root_id = self.root_id.clone();
        Ok(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationFactor {
    px_per_cm: f64,
}

impl CalibrationFactor {
    pub fn new(px_per_cm: f64) -> Result<Self, MaskError> {
        if !(px_per_cm > 0.0) || !px_per_cm.is_finite() {
            return Err(MaskError::Domain(format!("px_per_cm must be positive, got {px_per_cm}")));
        }
        Ok(Self { px_per_cm })
    }

    pub fn px_per_cm(&self) -> f64 {
        self.px_per_cm
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootObservation {
    pub root_id: String,
    pub plot_id: String,
    pub length: f64,
    pub width: f64,
    pub area: f64,
    pub weight_est: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> P2 {
        P2::new(x, y)
    }

    #[test]
    fn mask_normalises_orientation() {
        let cw = vec![p(0., 0.), p(0., 1.), p(1., 1.), p(1., 0.)];
        let m = PolygonMask::new("img", cw).unwrap();
        assert!(signed_area(m.points()) > 0.0);
    }

    #[test]
    fn mask_rejects_bad_rings() {
        assert!(PolygonMask::new("i", vec![p(0., 0.), p(1., 0.)]).is_err());
        assert!(PolygonMask::new("i", vec![p(0., 0.), p(1., 0.), p(2., 0.)]).is_err());
        let bowtie = vec![p(0., 0.), p(1., 1.), p(1., 0.), p(0., 1.)];
        assert!(matches!(PolygonMask::new("i", bowtie), Err(MaskError::InvalidMask(_))));
        assert!(PolygonMask::new("i", vec![p(0., 0.), p(f64::NAN, 0.), p(0., 1.)]).is_err());
    }

    #[test]
    fn closing_vertex_is_dropped() {
        let m = PolygonMask::new("i", vec![p(0., 0.), p(2., 0.), p(0., 2.), p(0., 0.)]).unwrap();
        assert_eq!(m.points().len(), 3);
    }

    #[test]
    fn calibration_must_be_positive() {
        assert!(CalibrationFactor::new(0.0).is_err());
        assert!(CalibrationFactor::new(f64::INFINITY).is_err());
        assert_eq!(CalibrationFactor::new(5.0).unwrap().px_per_cm(), 5.0);
    }
}
