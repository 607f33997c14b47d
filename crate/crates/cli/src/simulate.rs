use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use tuberscope_core::mesh::{load_mesh_file, make_ellipsoid, mesh_volume, scale_to_weight};
use tuberscope_core::sim::{
    run_monte_carlo, ConstraintMode, Rollers, TrialOutcome, DEFAULT_PIXEL_SIZE, DEFAULT_ROLLER_PITCH,
    DEFAULT_ROLLER_RADIUS,
};
use tuberscope_core::stats::regress_through_origin;
use tuberscope_core::{TriMesh, DEFAULT_DENSITY};

use crate::output::{create_csv, num};
use crate::{ConfigError, Mode, Status};

pub const TRIAL_COLUMNS: [&str; 10] =
    ["trial", "qw", "qx", "qy", "qz", "area_cm2", "vol_ellipsoid_cm3", "vol_squarecube_cm3", "true_vol_cm3", "status"];

#[derive(clap::Args)]
pub struct Args {
    /// Mesh file (OBJ or ASCII PLY); repeatable.
    #[arg(long = "mesh")]
    meshes: Vec<PathBuf>,
    /// Synthetic ellipsoid semi-axes `a,b,c` in cm; repeatable.
    #[arg(long = "ellipsoid", value_parser = parse_axes)]
    ellipsoids: Vec<[f64; 3]>,
    /// Icosphere subdivisions for synthetic ellipsoids.
    #[arg(long, default_value_t = 3)]
    subdivisions: u32,
    #[arg(long, value_enum, default_value_t = Mode::Plane)]
    mode: Mode,
    #[arg(long, default_value_t = DEFAULT_ROLLER_PITCH)]
    roller_pitch: f64,
    #[arg(long, default_value_t = DEFAULT_ROLLER_RADIUS)]
    roller_radius: f64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Raster pixel size, cm.
    #[arg(long, default_value_t = DEFAULT_PIXEL_SIZE)]
    pixel_size: f64,
    /// g/cm³.
    #[arg(long, default_value_t = DEFAULT_DENSITY)]
    density: f64,
    /// Rescale every mesh to this weight (g) before simulating.
    #[arg(long)]
    target_weight: Option<f64>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

fn parse_axes(s: &str) -> Result<[f64; 3], String> {
    let v: Vec<f64> =
        s.split(',').map(|t| t.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    match v.as_slice() {
        &[a, b, c] if a > 0.0 && b > 0.0 && c > 0.0 => Ok([a, b, c]),
        _ => Err(format!("expected three positive semi-axes a,b,c, got {s:?}")),
    }
}

enum Source {
    File(PathBuf),
    Ellipsoid([f64; 3]),
}

impl Source {
    fn name(&self) -> String {
        match self {
            Source::File(p) => p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "mesh".into()),
            Source::Ellipsoid([a, b, c]) => format!("ellipsoid_{a}_{b}_{c}"),
        }
    }

    fn load(&self, subdivisions: u32) -> Result<TriMesh> {
        match self {
            Source::File(p) => load_mesh_file(p).with_context(|| format!("loading {}", p.display())),
            Source::Ellipsoid([a, b, c]) => Ok(make_ellipsoid(*a, *b, *c, subdivisions)?),
        }
    }
}

fn validate(a: &Args) -> Result<ConstraintMode, ConfigError> {
    if a.meshes.is_empty() && a.ellipsoids.is_empty() {
        return Err(ConfigError("give at least one --mesh or --ellipsoid".into()));
    }
    if !(a.pixel_size > 0.0) || !a.pixel_size.is_finite() {
        return Err(ConfigError(format!("--pixel-size must be positive, got {}", a.pixel_size)));
    }
    if !(a.density > 0.0) || !a.density.is_finite() {
        return Err(ConfigError(format!("--density must be positive, got {}", a.density)));
    }
    if a.subdivisions == 0 {
        return Err(ConfigError("--subdivisions must be at least 1".into()));
    }
    if let Some(w) = a.target_weight {
        if !(w > 0.0) || !w.is_finite() {
            return Err(ConfigError(format!("--target-weight must be positive, got {w}")));
        }
    }
    Ok(match a.mode {
        Mode::Free => ConstraintMode::FreeSpace,
        Mode::Plane => ConstraintMode::Plane,
        Mode::Rollers => ConstraintMode::Rollers(
            Rollers::new(a.roller_pitch, a.roller_radius).map_err(|e| ConfigError(e.to_string()))?,
        ),
    })
}

fn header(a: &Args, mode: ConstraintMode) -> String {
    let mut h = format!(
        "tuberscope simulate mode={} trials={} seed={} pixel_size={} density={} subdivisions={}",
        a.mode.as_str(),
        a.trials,
        a.seed,
        a.pixel_size,
        a.density,
        a.subdivisions
    );
    if let ConstraintMode::Rollers(r) = mode {
        h.push_str(&format!(" roller_pitch={} roller_radius={}", r.pitch, r.radius));
    }
    if let Some(w) = a.target_weight {
        h.push_str(&format!(" target_weight={w}"));
    }
    h
}

impl Mode {
    fn as_str(self) -> &'static str {
        match self {
            Mode::Free => "free",
            Mode::Plane => "plane",
            Mode::Rollers => "rollers",
        }
    }
}

fn write_trials(path: &Path, header: &str, trials: &[TrialOutcome], true_volume: f64) -> Result<()> {
    let mut w = create_csv(path, header, &TRIAL_COLUMNS)?;
    for t in trials {
        match t {
            TrialOutcome::Measured(r) => {
                let [qw, qx, qy, qz] = r.rotation.components();
                w.write_record([
                    r.trial_index.to_string(),
                    format!("{qw:.9}"),
                    format!("{qx:.9}"),
                    format!("{qy:.9}"),
                    format!("{qz:.9}"),
                    num(r.projected_area),
                    num(r.est_volume_ellipsoid),
                    num(r.est_volume_square_cube),
                    num(r.true_volume),
                    "ok".into(),
                ])?;
            }
            TrialOutcome::Skipped { trial_index, rotation, reason } => {
                let [qw, qx, qy, qz] = rotation.components();
                w.write_record([
                    trial_index.to_string(),
                    format!("{qw:.9}"),
                    format!("{qx:.9}"),
                    format!("{qy:.9}"),
                    format!("{qz:.9}"),
                    String::new(),
                    String::new(),
                    String::new(),
                    num(true_volume),
                    format!("skipped: {reason}"),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn run(a: Args) -> Result<Status> {
    let mode = validate(&a)?;
    std::fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    let header = header(&a, mode);

    let sources: Vec<Source> =
        a.meshes.iter().cloned().map(Source::File).chain(a.ellipsoids.iter().copied().map(Source::Ellipsoid)).collect();

    let mut used = BTreeSet::new();
    let mut failures = 0usize;
    // (true weight, ellipsoid weight, square-cube weight) over every measured trial
    let mut pooled: Vec<(f64, f64, f64)> = Vec::new();
    let mut skipped = 0usize;
    for src in &sources {
        let mut name = src.name();
        let mut k = 2;
        while used.contains(&name) {
            name = format!("{}_{k}", src.name());
            k += 1;
        }
        used.insert(name.clone());

        let attempt = || -> Result<Vec<TrialOutcome>> {
            let mut mesh = src.load(a.subdivisions)?;
            if let Some(w) = a.target_weight {
                mesh = scale_to_weight(&mesh, w, a.density)?;
            }
            let true_volume = mesh_volume(&mesh)?;
            let trials = run_monte_carlo(&mesh, mode, a.trials, a.seed, a.pixel_size)?;
            write_trials(&a.out_dir.join(format!("{name}.trials.csv")), &header, &trials, true_volume)?;
            Ok(trials)
        };
        match attempt() {
            Ok(trials) => {
                for t in &trials {
                    match t.measured() {
                        Some(r) => pooled.push((
                            r.true_volume * a.density,
                            r.est_volume_ellipsoid * a.density,
                            r.est_volume_square_cube * a.density,
                        )),
                        None => skipped += 1,
                    }
                }
            }
            Err(e) => {
                log::error!("{name}: {e:#}");
                eprintln!("error: {name}: {e:#}");
                failures += 1;
            }
        }
    }

    write_summary(&a.out_dir.join("summary.csv"), &header, a.mode, &pooled, skipped)?;
    Ok(if failures == 0 { Status::Ok } else { Status::Partial(failures) })
}

pub const SUMMARY_COLUMNS: [&str; 8] = ["model", "mode", "slope", "r2", "rmse_g", "n", "skipped", "note"];

/// Through-origin fit of estimated weight (y) on true weight (x), per model.
fn write_summary(path: &Path, header: &str, mode: Mode, pooled: &[(f64, f64, f64)], skipped: usize) -> Result<()> {
    let mut w = create_csv(path, header, &SUMMARY_COLUMNS)?;
    let truth: Vec<f64> = pooled.iter().map(|p| p.0).collect();
    for (model, est) in [
        ("ellipsoid", pooled.iter().map(|p| p.1).collect::<Vec<_>>()),
        ("squarecube", pooled.iter().map(|p| p.2).collect::<Vec<_>>()),
    ] {
        let row = match regress_through_origin(&truth, &est) {
            Ok(r) => [
                model.to_string(),
                mode.as_str().into(),
                num(r.slope),
                num(r.r_squared),
                num(r.rmse_unbiased),
                r.n.to_string(),
                skipped.to_string(),
                if r.r_squared_is_negative() { "negative r2".into() } else { String::new() },
            ],
            Err(e) => [
                model.to_string(),
                mode.as_str().into(),
                String::new(),
                String::new(),
                String::new(),
                pooled.len().to_string(),
                skipped.to_string(),
                format!("insufficient data: {e}"),
            ],
        };
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
