#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use image::{Rgb, RgbImage};

pub type Row = BTreeMap<String, String>;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn tuberscope(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tuberscope"));
    cmd.args(args).env_remove("TUBERSCOPE_THREADS").env("RUST_LOG", "off");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("failed to spawn tuberscope")
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// First-line `#` header and the rows keyed by column name.
pub fn read_table(path: &Path) -> (String, Vec<Row>) {
    let text = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let header = text.lines().next().unwrap_or("").to_string();
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let cols: Vec<String> = rdr.headers().unwrap().iter().map(str::to_string).collect();
    let rows = rdr
        .records()
        .map(|r| {
            let r = r.unwrap();
            cols.iter().cloned().zip(r.iter().map(str::to_string)).collect()
        })
        .collect();
    (header, rows)
}

pub fn f(row: &Row, col: &str) -> f64 {
    row[col].parse().unwrap_or_else(|_| panic!("column {col} = {:?} is not a number", row[col]))
}

/// Grey image with an axis-aligned blue bar of `len` × `thick` pixels.
pub fn write_tape_png(path: &Path, len: u32, thick: u32) {
    let (w, h) = (len + 80, thick + 120);
    let mut img = RgbImage::from_pixel(w, h, Rgb([128, 128, 128]));
    for y in 60..60 + thick {
        for x in 40..40 + len {
            img.put_pixel(x, y, Rgb([20, 40, 220]));
        }
    }
    img.save(path).unwrap();
}

pub struct Region {
    pub root_id: String,
    pub points: Vec<(f64, f64)>,
}

/// Rectangle `length` × `width` (px) centred at `c`, rotated by `deg`.
pub fn rotated_rect(root_id: &str, c: (f64, f64), length: f64, width: f64, deg: f64) -> Region {
    let (s, co) = deg.to_radians().sin_cos();
    let points = [(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)]
        .iter()
        .map(|&(u, v)| {
            let (x, y) = (u * length, v * width);
            (c.0 + x * co - y * s, c.1 + x * s + y * co)
        })
        .collect();
    Region { root_id: root_id.into(), points }
}

pub fn circle(root_id: &str, c: (f64, f64), r: f64, n: usize) -> Region {
    let points = (0..n)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / n as f64;
            (c.0 + r * t.cos(), c.1 + r * t.sin())
        })
        .collect();
    Region { root_id: root_id.into(), points }
}

/// VIA 2 annotation export with one image.
pub fn via_json(filename: &str, plot_id: &str, regions: &[Region]) -> String {
    let regions: Vec<String> = regions
        .iter()
        .map(|r| {
            let xs: Vec<String> = r.points.iter().map(|p| format!("{}", p.0)).collect();
            let ys: Vec<String> = r.points.iter().map(|p| format!("{}", p.1)).collect();
            format!(
                r#"{{"shape_attributes":{{"name":"polygon","all_points_x":[{}],"all_points_y":[{}]}},"region_attributes":{{"root_id":"{}"}}}}"#,
                xs.join(","),
                ys.join(","),
                r.root_id
            )
        })
        .collect();
    format!(
        r#"{{"{filename}0":{{"filename":"{filename}","size":0,"file_attributes":{{"plot_id":"{plot_id}"}},"regions":[{}]}}}}"#,
        regions.join(",")
    )
}

/// Sorter-format CSV from `(plot, root, length, width, weight)` rows.
pub fn write_sorter(path: &Path, rows: &[(&str, &str, f64, f64, f64)]) {
    let mut s = String::from("plot_id,root_id,length_cm,width_cm,weight_g\n");
    for (p, r, l, w, g) in rows {
        s.push_str(&format!("{p},{r},{l},{w},{g}\n"));
    }
    std::fs::write(path, s).unwrap();
}
