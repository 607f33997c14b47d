use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use anyhow::{Context, Result};
use tuberscope_core::maskpipe::{
    aggregate_plots, classify_usda_grade, detect_tape_calibration, filter_sorter_minimums, mask_metrics_with_density,
    parse_via_annotations, CalibrationFactor, ChannelThresholds, RootObservation, UsdaGrade,
};
use tuberscope_core::DEFAULT_DENSITY;

use crate::output::{create_csv, num};
use crate::{ConfigError, Status};

pub const OBSERVATION_COLUMNS: [&str; 7] =
    ["plot_id", "root_id", "length_cm", "width_cm", "area_cm2", "weight_g", "grade"];

#[derive(clap::Args)]
pub struct Args {
    /// VIA annotation JSON; repeatable.
    #[arg(long = "via", required = true)]
    via: Vec<PathBuf>,
    /// Known calibration; skips tape detection.
    #[arg(long, conflicts_with = "tape_image")]
    px_per_cm: Option<f64>,
    /// Image containing a reference tape (PNG or PPM).
    #[arg(long, requires = "tape_length")]
    tape_image: Option<PathBuf>,
    /// Tape length in cm.
    #[arg(long)]
    tape_length: Option<f64>,
    /// Tape colour preset.
    #[arg(long, default_value = "blue", conflicts_with = "thresholds")]
    tape_color: String,
    /// Explicit thresholds `rmin,rmax,gmin,gmax,bmin,bmax`.
    #[arg(long)]
    thresholds: Option<String>,
    /// Keep roots below the sorter minimums.
    #[arg(long)]
    no_filter: bool,
    #[arg(long, default_value_t = DEFAULT_DENSITY)]
    density: f64,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

fn thresholds(a: &Args) -> Result<ChannelThresholds, ConfigError> {
    match &a.thresholds {
        Some(spec) => ChannelThresholds::parse(spec).map_err(|e| ConfigError(e.to_string())),
        None => ChannelThresholds::preset(&a.tape_color)
            .ok_or_else(|| ConfigError(format!("unknown --tape-color {:?} (blue, red)", a.tape_color))),
    }
}

fn fmt_thresholds(t: ChannelThresholds) -> String {
    format!("{},{},{},{},{},{}", t.min[0], t.max[0], t.min[1], t.max[1], t.min[2], t.max[2])
}

/// Resolves calibration before any annotation is read.
fn calibrate(a: &Args) -> Result<(CalibrationFactor, String)> {
    if !(a.density > 0.0) || !a.density.is_finite() {
        return Err(ConfigError(format!("--density must be positive, got {}", a.density)).into());
    }
    if let Some(k) = a.px_per_cm {
        let cal = CalibrationFactor::new(k).map_err(|e| ConfigError(e.to_string()))?;
        return Ok((cal, format!("px_per_cm={k}")));
    }
    let Some(path) = &a.tape_image else {
        return Err(ConfigError("no calibration: give --px-per-cm or --tape-image with --tape-length".into()).into());
    };
    let length = a.tape_length.ok_or_else(|| ConfigError("--tape-image needs --tape-length".into()))?;
    let t = thresholds(a)?;
    let img = image::open(path).with_context(|| format!("reading {}", path.display()))?.to_rgb8();
    let cal =
        detect_tape_calibration(&img, t, length).with_context(|| format!("calibrating from {}", path.display()))?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    Ok((
        cal,
        format!(
            "px_per_cm={:.6} tape_image={name} tape_length={length} thresholds={}",
            cal.px_per_cm(),
            fmt_thresholds(t)
        ),
    ))
}

pub fn run(a: Args) -> Result<Status> {
    let (cal, cal_desc) = calibrate(&a)?;
    std::fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    let header = format!(
        "tuberscope analyze {cal_desc} filter={} min_width_cm=2.54 min_length_cm=5.08 density={}",
        if a.no_filter { "off" } else { "on" },
        a.density
    );

    let mut files = a.via.clone();
    files.sort();
    let mut failures = 0usize;
    let mut observations: Vec<RootObservation> = Vec::new();
    for path in &files {
        let parsed = File::open(path).with_context(|| format!("opening {}", path.display())).and_then(|f| {
            parse_via_annotations(BufReader::new(f)).with_context(|| format!("parsing {}", path.display()))
        });
        let doc = match parsed {
            Ok(d) => d,
            Err(e) => {
                eprintln!("error: {e:#}");
                failures += 1;
                continue;
            }
        };
        if doc.skipped_regions > 0 {
            log::warn!("{}: skipped {} non-polygon region(s)", path.display(), doc.skipped_regions);
        }
        for img in doc.images.values() {
            for (i, mask) in img.masks.iter().enumerate() {
                match mask_metrics_with_density(mask, cal, &img.plot_id, a.density) {
                    Ok(mut o) => {
                        if o.root_id.is_empty() {
                            o.root_id = format!("{}#{i}", img.filename);
                        }
                        observations.push(o);
                    }
                    Err(e) => {
                        eprintln!("error: {} region {i}: {e}", img.filename);
                        failures += 1;
                    }
                }
            }
        }
    }

    let kept = if a.no_filter { observations } else { filter_sorter_minimums(&observations) };

    let mut w = create_csv(&a.out_dir.join("observations.csv"), &header, &OBSERVATION_COLUMNS)?;
    let mut no1 = 0usize;
    for o in &kept {
        let grade = classify_usda_grade(o);
        if grade == UsdaGrade::UsNo1 {
            no1 += 1;
        }
        w.write_record([
            o.plot_id.clone(),
            o.root_id.clone(),
            num(o.length),
            num(o.width),
            num(o.area),
            num(o.weight_est),
            grade.to_string(),
        ])?;
    }
    w.flush()?;

    let mut w = create_csv(
        &a.out_dir.join("plots.csv"),
        &header,
        &["plot_id", "count", "mean_length_cm", "mean_width_cm", "total_weight_g"],
    )?;
    for p in aggregate_plots(&kept) {
        let n = p.count as f64;
        w.write_record([
            p.plot_id.clone(),
            p.count.to_string(),
            num(p.observations.iter().map(|o| o.length).sum::<f64>() / n),
            num(p.observations.iter().map(|o| o.width).sum::<f64>() / n),
            num(p.observations.iter().map(|o| o.weight_est).sum::<f64>()),
        ])?;
    }
    w.flush()?;

    let mut w = create_csv(&a.out_dir.join("grades.csv"), &header, &["grade", "count"])?;
    w.write_record([UsdaGrade::UsNo1.to_string(), no1.to_string()])?;
    w.write_record([UsdaGrade::Other.to_string(), (kept.len() - no1).to_string()])?;
    w.flush()?;

    Ok(if failures == 0 { Status::Ok } else { Status::Partial(failures) })
}
