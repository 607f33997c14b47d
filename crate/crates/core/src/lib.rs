//! Size and weight estimation of storage roots from 2D silhouettes.
//!
//! The crate is organised around the stages of the pipeline:
//!
//! 1. [`mesh`] – triangle-mesh ingestion (OBJ / ASCII PLY), volume, centroid,
//!    principal axes, weight-based scaling and synthetic test solids.
//! 2. [`sim`] – uniform rotation sampling, quasi-static settling on a plane or
//!    between rollers, orthographic silhouette rasterisation and the Monte
//!    Carlo driver.
//! 3. [`estimate`] – closed-form volumetric models (ellipsoid, square-cube),
//!    weight conversion and proportional-bias correction.
//! 4. [`maskpipe`] – VIA polygon annotations, tape calibration, per-root
//!    metrics, sorter minimum filtering, USDA grading and plot aggregation.
//! 5. [`stats`] – through-origin regression, histograms, SAE, chi-square
//!    goodness of fit and the error-budget arithmetic.
//!
//! All lengths are centimetres, areas cm², volumes cm³ and weights grams
//! unless a name says otherwise (`_px`).

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod estimate;
pub mod geom2d;
pub mod maskpipe;
pub mod mesh;
pub mod sim;
pub mod stats;

pub use estimate::{EstimateError, VolumeEstimate, VolumeModel};
pub use mesh::{MeshError, MeshSummary, TriMesh};
pub use sim::{ConstraintMode, Silhouette, SimError, TrialOutcome, TrialResult, UnitQuaternion};

/// Assumed bulk density of a storage root, g/cm³.
pub const DEFAULT_DENSITY: f64 = 1.0;
