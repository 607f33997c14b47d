//! VGG Image Annotator exports.
//!
//! Both the project file (`{"_via_img_metadata": {...}}`) and the bare
//! annotation export (a top-level map of image entries) are accepted.
//! `regions` may be an array (VIA 2) or an object keyed by index (VIA 1).

use std::collections::BTreeMap;
use std::io::Read;

use serde_json::Value;

use super::{MaskError, PolygonMask};
use crate::geom2d::P2;

#[derive(Debug, Clone, PartialEq)]
pub struct ViaImage {
    pub filename: String,
    /// `file_attributes.plot_id` if present, else the filename stem.
    pub plot_id: String,
    pub masks: Vec<PolygonMask>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ViaAnnotations {
    /// Keyed by filename.
    pub images: BTreeMap<String, ViaImage>,
    /// Regions that were not polygons.
    pub skipped_regions: usize,
}

fn text_attr(attrs: Option<&Value>, keys: &[&str]) -> Option<String> {
    let obj = attrs?.as_object()?;
    for k in keys {
        match obj.get(*k) {
            Some(Value::String(s)) if !s.trim().is_empty() => return Some(s.trim().to_string()),
            Some(Value::Number(n)) => return Some(n.to_string()),
            _ => {}
        }
    }
    None
}

fn coords(shape: &Value, key: &str, ctx: &str) -> Result<Vec<f64>, MaskError> {
    let arr = shape
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| MaskError::Parse { context: ctx.to_string(), message: format!("missing {key}") })?;
    arr.iter()
        .map(|v| {
            v.as_f64().ok_or_else(|| MaskError::Parse {
                context: ctx.to_string(),
                message: format!("non-numeric entry in {key}"),
            })
        })
        .collect()
}

fn file_stem(name: &str) -> String {
    let base = name.rsplit(['/', '\\']).next().unwrap_or(name);
    match base.rfind('.') {
        Some(i) if i > 0 => base[..i].to_string(),
        _ => base.to_string(),
    }
}

pub fn parse_via_annotations<R: Read>(source: R) -> Result<ViaAnnotations, MaskError> {
    let doc: Value = serde_json::from_reader(source)?;
    let entries = match doc.get("_via_img_metadata") {
        Some(m) => m,
        None => &doc,
    };
    let entries = entries.as_object().ok_or_else(|| MaskError::Parse {
        context: "document".into(),
        message: "expected an object of image entries".into(),
    })?;

    let mut out = ViaAnnotations::default();
    for (key, entry) in entries {
        if !entry.is_object() {
            // project files carry non-image siblings only at the top level
            continue;
        }
        let filename = entry.get("filename").and_then(Value::as_str).unwrap_or(key).to_string();
        let plot_id =
            text_attr(entry.get("file_attributes"), &["plot_id", "plot"]).unwrap_or_else(|| file_stem(&filename));
        let regions: Vec<&Value> = match entry.get("regions") {
            None | Some(Value::Null) => Vec::new(),
            Some(Value::Array(a)) => a.iter().collect(),
            Some(Value::Object(o)) => {
                let mut items: Vec<(&String, &Value)> = o.iter().collect();
                items.sort_by_key(|(k, _)| k.parse::<u64>().unwrap_or(u64::MAX));
                items.into_iter().map(|(_, v)| v).collect()
            }
            Some(_) => {
                return Err(MaskError::Parse {
                    context: filename,
                    message: "regions must be an array or object".into(),
                })
            }
        };

        let mut masks = Vec::new();
        for (i, region) in regions.iter().enumerate() {
            let ctx = format!("{filename} region {i}");
            let shape = region.get("shape_attributes");
            let name = shape.and_then(|s| s.get("name")).and_then(Value::as_str).unwrap_or("");
            if name != "polygon" && name != "polyline" {
                log::warn!("{ctx}: skipping non-polygon region {name:?}");
                out.skipped_regions += 1;
                continue;
            }
            let shape = shape.expect("checked above");
            let xs = coords(shape, "all_points_x", &ctx)?;
            let ys = coords(shape, "all_points_y", &ctx)?;
            if xs.len() != ys.len() {
                return Err(MaskError::Parse {
                    context: ctx,
                    message: format!("all_points_x has {} entries, all_points_y has {}", xs.len(), ys.len()),
                });
            }
            let pts = xs.into_iter().zip(ys).map(|(x, y)| P2::new(x, y)).collect();
            let mask = PolygonMask::new(filename.clone(), pts)
                .map_err(|e| MaskError::Parse { context: ctx, message: e.to_string() })?;
            masks.push(match text_attr(region.get("region_attributes"), &["root_id", "id", "name"]) {
                Some(id) => mask.with_root_id(id),
                None => mask,
            });
        }
        out.images.insert(filename.clone(), ViaImage { filename, plot_id, masks });
    }
    Ok(out)
}
