//! Projection Monte Carlo: random orientation, optional settling under a
//! physical constraint, orthographic silhouette, volume estimates.

mod raster;
mod rotation;
mod settle;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::estimate::{self, EstimateError};
use crate::mesh::{mesh_volume, MeshError, TriMesh};

pub use raster::{project_silhouette, silhouette_area, Silhouette};
pub use rotation::{rotate_mesh, shoemake_sample, RandomTriple, UnitQuaternion};
pub use settle::{
    centroid_height, settle_on_plane, settle_on_plane_detailed, settle_on_rollers, settle_on_rollers_detailed,
    PlaneRest, RollerRest, Rollers, MAX_PIVOTS, ROLL_STEP_DEG,
};

pub const DEFAULT_PIXEL_SIZE: f64 = 0.05;
pub const DEFAULT_ROLLER_PITCH: f64 = 7.62;
pub const DEFAULT_ROLLER_RADIUS: f64 = 2.54;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Estimate(#[from] EstimateError),
    #[error("settling failed: {0}")]
    Settle(String),
    #[error("section width {width:.4} cm does not span the {gap:.4} cm roller gap; the body falls through")]
    FallThrough { width: f64, gap: f64 },
    #[error("silhouette has no set pixels")]
    DegenerateSilhouette,
}

/// How the body is posed before imaging.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConstraintMode {
    /// The random rotation is imaged as-is.
    FreeSpace,
    /// Settled on a flat plane.
    Plane,
    /// Settled in the groove between two rollers.
    Rollers(Rollers),
}

impl ConstraintMode {
    pub fn name(&self) -> &'static str {
        match self {
            ConstraintMode::FreeSpace => "free",
            ConstraintMode::Plane => "plane",
            ConstraintMode::Rollers(_) => "rollers",
        }
    }
}

impl fmt::Display for ConstraintMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintMode::Rollers(r) => write!(f, "rollers(pitch={}, radius={})", r.pitch, r.radius),
            other => f.write_str(other.name()),
        }
    }
}

/// One imaged pose.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub trial_index: usize,
    /// Final pose (after settling, when the mode settles).
    pub rotation: UnitQuaternion,
    pub projected_area: f64,
    pub est_volume_ellipsoid: f64,
    pub est_volume_square_cube: f64,
    pub true_volume: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrialOutcome {
    Measured(TrialResult),
    /// The trial could not be imaged; `rotation` is the sampled pose.
    Skipped {
        trial_index: usize,
        rotation: UnitQuaternion,
        reason: String,
    },
}

impl TrialOutcome {
    pub fn trial_index(&self) -> usize {
        match self {
            TrialOutcome::Measured(r) => r.trial_index,
            TrialOutcome::Skipped { trial_index, .. } => *trial_index,
        }
    }

    pub fn measured(&self) -> Option<&TrialResult> {
        match self {
            TrialOutcome::Measured(r) => Some(r),
            TrialOutcome::Skipped { .. } => None,
        }
    }
}

/// The uniform triple for `trial_index`. ChaCha is counter-based: the seed
/// is the key and the trial index selects the stream, so each trial's
/// variates are independent of evaluation order.
pub fn trial_triple(seed: u64, trial_index: u64) -> RandomTriple {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_index);
    let a = rng.sample(rand::distr::Open01);
    let b = rng.sample(rand::distr::Open01);
    let c = rng.sample(rand::distr::Open01);
    RandomTriple::new(a, b, c).expect("Open01 samples lie in (0, 1)")
}

fn run_trial(
    mesh: &TriMesh,
    mode: ConstraintMode,
    trial_index: usize,
    seed: u64,
    pixel_size: f64,
    true_volume: f64,
) -> TrialOutcome {
    let sampled = shoemake_sample(trial_triple(seed, trial_index as u64));
    let attempt = || -> Result<TrialResult, SimError> {
        let rotation = match mode {
            ConstraintMode::FreeSpace => sampled,
            ConstraintMode::Plane => settle_on_plane(mesh, sampled)?,
            ConstraintMode::Rollers(r) => settle_on_rollers(mesh, sampled, r)?,
        };
        let posed = rotate_mesh(mesh, rotation)?;
        let sil = project_silhouette(&posed, pixel_size)?;
        let area = silhouette_area(&sil);
        let c = estimate::semi_minor_from_silhouette(&sil)?;
        Ok(TrialResult {
            trial_index,
            rotation,
            projected_area: area,
            est_volume_ellipsoid: estimate::ellipsoid_volume(area, c)?,
            est_volume_square_cube: estimate::square_cube_volume(area)?,
            true_volume,
        })
    };
    match attempt() {
        Ok(r) => TrialOutcome::Measured(r),
        Err(e) => TrialOutcome::Skipped { trial_index, rotation: sampled, reason: e.to_string() },
    }
}

/// Runs `n_trials` independent trials. Trials are evaluated in parallel on
/// the current rayon pool and returned in trial order; the output depends
/// only on the arguments. Per-trial failures become
/// [`TrialOutcome::Skipped`]; invalid arguments fail the whole run.
pub fn run_monte_carlo(
    mesh: &TriMesh,
    mode: ConstraintMode,
    n_trials: usize,
    seed: u64,
    pixel_size: f64,
) -> Result<Vec<TrialOutcome>, SimError> {
    if !(pixel_size > 0.0) || !pixel_size.is_finite() {
        return Err(SimError::Domain(format!("pixel size must be positive, got {pixel_size}")));
    }
    if let ConstraintMode::Rollers(r) = mode {
        Rollers::new(r.pitch, r.radius)?;
    }
    let true_volume = mesh_volume(mesh)?;
    let out: Vec<TrialOutcome> =
        (0..n_trials).into_par_iter().map(|i| run_trial(mesh, mode, i, seed, pixel_size, true_volume)).collect();
    Ok(out)
}
