//! Sorter CSV ingestion and per-plot grouping.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use super::{MaskError, RootObservation};

pub const SORTER_COLUMNS: [&str; 5] = ["plot_id", "root_id", "length_cm", "width_cm", "weight_g"];

#[derive(Debug, Clone, PartialEq)]
pub struct SorterRecord {
    pub plot_id: String,
    pub root_id: Option<String>,
    pub length: f64,
    pub width: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotRecord {
    pub plot_id: String,
    pub observations: Vec<RootObservation>,
    pub count: usize,
}

/// Header `plot_id,root_id,length_cm,width_cm,weight_g` (any order, extra
/// columns ignored, `#` lines skipped). `root_id` may be blank.
pub fn parse_sorter_csv<R: Read>(source: R) -> Result<Vec<SorterRecord>, MaskError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(source);
    let headers = rdr.headers()?.clone();
    let mut idx = [0usize; 5];
    for (slot, col) in idx.iter_mut().zip(SORTER_COLUMNS) {
        *slot = headers.iter().position(|h| h == col).ok_or_else(|| MaskError::Schema(col.to_string()))?;
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let field = |i: usize| rec.get(idx[i]).unwrap_or("");
        let num = |i: usize| -> Result<f64, MaskError> {
            let raw = field(i);
            let v: f64 = raw.parse().map_err(|_| MaskError::Row {
                line,
                message: format!("{} = {raw:?} is not a number", SORTER_COLUMNS[i]),
            })?;
            if !(v > 0.0) || !v.is_finite() {
                return Err(MaskError::Row { line, message: format!("{} = {v} must be positive", SORTER_COLUMNS[i]) });
            }
            Ok(v)
        };
        let plot_id = field(0).to_string();
        if plot_id.is_empty() {
            return Err(MaskError::Row { line, message: "plot_id is blank".into() });
        }
        let root_id = Some(field(1)).filter(|s| !s.is_empty()).map(str::to_string);
        out.push(SorterRecord { plot_id, root_id, length: num(2)?, width: num(3)?, weight: num(4)? });
    }
    Ok(out)
}

/// Groups observations by plot, ordered by `plot_id`, keeping input order
/// within a plot. Duplicate root ids inside a plot are kept and logged.
pub fn aggregate_plots(obs: &[RootObservation]) -> Vec<PlotRecord> {
    let mut groups: BTreeMap<&str, Vec<RootObservation>> = BTreeMap::new();
    for o in obs {
        groups.entry(o.plot_id.as_str()).or_default().push(o.clone());
    }
    groups
        .into_iter()
        .map(|(plot, observations)| {
            let mut seen = BTreeSet::new();
            for o in &observations {
                if !o.root_id.is_empty() && !seen.insert(o.root_id.as_str()) {
                    log::warn!("plot {plot}: duplicate root_id {:?}; both kept", o.root_id);
                }
            }
            PlotRecord { plot_id: plot.to_string(), count: observations.len(), observations }
        })
        .collect()
}
