use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use tuberscope_core::maskpipe::{parse_sorter_csv, SorterRecord};
use tuberscope_core::stats::{
    build_histogram, chi_square_gof, regress_through_origin, sum_absolute_error, DEFAULT_MIN_COUNT, LENGTH_BIN_CM,
    WEIGHT_BIN_G,
};

use crate::output::{create_csv, num};
use crate::{ConfigError, Status};

pub const REPORT_COLUMNS: [&str; 9] = ["metric", "slope", "r2", "rmse", "n", "chi2", "df", "p", "sae"];

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum Join {
    Plot,
    Root,
}

#[derive(clap::Args)]
pub struct Args {
    /// Observations CSV (as written by `analyze`).
    #[arg(long)]
    observations: PathBuf,
    /// Sorter CSV: plot_id,root_id,length_cm,width_cm,weight_g.
    #[arg(long)]
    sorter: PathBuf,
    #[arg(long, value_enum, default_value_t = Join::Plot)]
    join: Join,
    #[arg(long, default_value = "validation.csv")]
    out: PathBuf,
    /// Chi-square bins with fewer counts on either side are dropped.
    #[arg(long, default_value_t = DEFAULT_MIN_COUNT)]
    min_count: u64,
    #[arg(long, default_value_t = LENGTH_BIN_CM)]
    length_bin: f64,
    #[arg(long, default_value_t = WEIGHT_BIN_G)]
    weight_bin: f64,
}

/// A model/sorter join failed to pair anything.
#[derive(Debug, thiserror::Error)]
#[error("no {key} matches between observations and sorter; unmatched observation ids: [{obs}]; unmatched sorter ids: [{sorter}]")]
pub struct JoinError {
    key: &'static str,
    obs: String,
    sorter: String,
}

fn read_records(path: &Path) -> Result<Vec<SorterRecord>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    parse_sorter_csv(BufReader::new(f)).with_context(|| format!("reading {}", path.display()))
}

/// Matched pairs, observation first.
struct Matched {
    pairs: Vec<(SorterRecord, SorterRecord)>,
    unmatched_obs: Vec<String>,
    unmatched_sorter: Vec<String>,
}

fn index_by<'a>(
    recs: &'a [SorterRecord],
    key: impl Fn(&SorterRecord) -> Option<&str>,
    what: &str,
) -> (BTreeMap<&'a str, Vec<&'a SorterRecord>>, usize) {
    let mut map: BTreeMap<&str, Vec<&SorterRecord>> = BTreeMap::new();
    let mut unkeyed = 0;
    for r in recs {
        match key(r) {
            Some(k) => map.entry(k).or_default().push(r),
            None => unkeyed += 1,
        }
    }
    if unkeyed > 0 {
        log::warn!("{what}: {unkeyed} row(s) without a join key ignored");
    }
    (map, unkeyed)
}

fn join_roots(obs: &[SorterRecord], sorter: &[SorterRecord]) -> Matched {
    let (o, _) = index_by(obs, |r| r.root_id.as_deref(), "observations");
    let (s, _) = index_by(sorter, |r| r.root_id.as_deref(), "sorter");
    let mut pairs = Vec::new();
    for (k, os) in &o {
        if let Some(ss) = s.get(k) {
            if os.len() > 1 || ss.len() > 1 {
                log::warn!("root_id {k:?} appears more than once; first occurrence used");
            }
            pairs.push((os[0].clone(), ss[0].clone()));
        }
    }
    Matched {
        pairs,
        unmatched_obs: o.keys().filter(|k| !s.contains_key(*k)).map(|k| k.to_string()).collect(),
        unmatched_sorter: s.keys().filter(|k| !o.contains_key(*k)).map(|k| k.to_string()).collect(),
    }
}

/// Per-plot pairs: mean length, mean width, total weight; the count of roots
/// in each plot is returned alongside.
fn join_plots(obs: &[SorterRecord], sorter: &[SorterRecord]) -> (Matched, Vec<(f64, f64)>) {
    let (o, _) = index_by(obs, |r| Some(r.plot_id.as_str()), "observations");
    let (s, _) = index_by(sorter, |r| Some(r.plot_id.as_str()), "sorter");
    let summarize = |plot: &str, rs: &[&SorterRecord]| {
        let n = rs.len() as f64;
        SorterRecord {
            plot_id: plot.to_string(),
            root_id: None,
            length: rs.iter().map(|r| r.length).sum::<f64>() / n,
            width: rs.iter().map(|r| r.width).sum::<f64>() / n,
            weight: rs.iter().map(|r| r.weight).sum::<f64>(),
        }
    };
    let mut pairs = Vec::new();
    let mut counts = Vec::new();
    for (k, os) in &o {
        if let Some(ss) = s.get(k) {
            pairs.push((summarize(k, os), summarize(k, ss)));
            counts.push((os.len() as f64, ss.len() as f64));
        }
    }
    let m = Matched {
        pairs,
        unmatched_obs: o.keys().filter(|k| !s.contains_key(*k)).map(|k| k.to_string()).collect(),
        unmatched_sorter: s.keys().filter(|k| !o.contains_key(*k)).map(|k| k.to_string()).collect(),
    };
    (m, counts)
}

fn check_args(a: &Args) -> Result<(), ConfigError> {
    for (flag, v) in [("--length-bin", a.length_bin), ("--weight-bin", a.weight_bin)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(ConfigError(format!("{flag} must be positive, got {v}")));
        }
    }
    Ok(())
}

pub fn run(a: Args) -> Result<Status> {
    check_args(&a)?;
    let obs = read_records(&a.observations)?;
    let sorter = read_records(&a.sorter)?;

    let (matched, plot_counts, key) = match a.join {
        Join::Root => (join_roots(&obs, &sorter), None, "root_id"),
        Join::Plot => {
            let (m, c) = join_plots(&obs, &sorter);
            (m, Some(c), "plot_id")
        }
    };
    if matched.pairs.is_empty() {
        return Err(JoinError {
            key,
            obs: matched.unmatched_obs.join(", "),
            sorter: matched.unmatched_sorter.join(", "),
        }
        .into());
    }
    if !matched.unmatched_obs.is_empty() || !matched.unmatched_sorter.is_empty() {
        log::warn!(
            "unmatched {key}s: {} in observations, {} in sorter",
            matched.unmatched_obs.len(),
            matched.unmatched_sorter.len()
        );
    }

    // Histograms compare root-level distributions: matched roots for a root
    // join, every root in a matched plot for a plot join.
    let (hist_obs, hist_sorter): (Vec<&SorterRecord>, Vec<&SorterRecord>) = match a.join {
        Join::Root => (matched.pairs.iter().map(|p| &p.0).collect(), matched.pairs.iter().map(|p| &p.1).collect()),
        Join::Plot => {
            let keep = |r: &&SorterRecord| matched.pairs.iter().any(|p| p.0.plot_id == r.plot_id);
            (obs.iter().filter(keep).collect(), sorter.iter().filter(keep).collect())
        }
    };

    let header = format!(
        "tuberscope validate join={key} min_count={} length_bin_cm={} weight_bin_g={} matched={} unmatched_observations={} unmatched_sorter={}",
        a.min_count,
        a.length_bin,
        a.weight_bin,
        matched.pairs.len(),
        matched.unmatched_obs.len(),
        matched.unmatched_sorter.len()
    );
    if let Some(parent) = a.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    let mut w = create_csv(&a.out, &header, &REPORT_COLUMNS)?;

    type Field = fn(&SorterRecord) -> f64;
    let metrics: [(&str, Field, f64); 3] = [
        ("length", |r| r.length, a.length_bin),
        ("width", |r| r.width, a.length_bin),
        ("weight", |r| r.weight, a.weight_bin),
    ];
    for (name, field, bin) in metrics {
        let xs: Vec<f64> = matched.pairs.iter().map(|p| field(&p.0)).collect();
        let ys: Vec<f64> = matched.pairs.iter().map(|p| field(&p.1)).collect();
        let mut row = regression_fields(name, &xs, &ys);
        let ho = build_histogram(&hist_obs.iter().map(|r| field(r)).collect::<Vec<_>>(), bin, 0.0)?;
        let hs = build_histogram(&hist_sorter.iter().map(|r| field(r)).collect::<Vec<_>>(), bin, 0.0)?;
        match chi_square_gof(&ho, &hs, a.min_count) {
            Ok(c) => {
                row[5] = num(c.chi2);
                row[6] = c.df.to_string();
                row[7] = num(c.p);
            }
            Err(e) => log::warn!("{name}: chi-square skipped: {e}"),
        }
        row[8] = sum_absolute_error(&ho, &hs)?.to_string();
        w.write_record(&row)?;
    }
    if let Some(counts) = plot_counts {
        let xs: Vec<f64> = counts.iter().map(|c| c.0).collect();
        let ys: Vec<f64> = counts.iter().map(|c| c.1).collect();
        w.write_record(regression_fields("count", &xs, &ys))?;
    }
    w.flush()?;
    Ok(Status::Ok)
}

/// Regression columns filled; chi-square and SAE left blank.
fn regression_fields(name: &str, xs: &[f64], ys: &[f64]) -> [String; 9] {
    let mut row: [String; 9] = Default::default();
    row[0] = name.to_string();
    match regress_through_origin(xs, ys) {
        Ok(r) => {
            row[1] = num(r.slope);
            row[2] = num(r.r_squared);
            row[3] = num(r.rmse_unbiased);
            row[4] = r.n.to_string();
            if r.r_squared_is_negative() {
                log::warn!("{name}: negative r2 {}", r.r_squared);
            }
        }
        Err(e) => {
            log::warn!("{name}: regression skipped: {e}");
            row[4] = xs.len().to_string();
        }
    }
    row
}
