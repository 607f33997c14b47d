use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use anyhow::{Context, Result};
use tuberscope_core::stats::{combine_error_budget, parse_budget_csv};

use crate::output::{create_csv, num, opt};
use crate::Status;

pub const BUDGET_COLUMNS: [&str; 4] = ["name", "category", "bias", "rms_g"];

#[derive(clap::Args)]
pub struct Args {
    /// Error terms CSV: name,category,bias,rms_g (rms_g may be blank).
    #[arg(long)]
    terms: PathBuf,
    #[arg(long, default_value = "budget.csv")]
    out: PathBuf,
}

pub fn run(a: Args) -> Result<Status> {
    let f = File::open(&a.terms).with_context(|| format!("opening {}", a.terms.display()))?;
    let terms = parse_budget_csv(BufReader::new(f)).with_context(|| format!("reading {}", a.terms.display()))?;
    let budget = combine_error_budget(&terms).with_context(|| format!("validating {}", a.terms.display()))?;

    if let Some(parent) = a.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    let header = format!("tuberscope budget terms={} bias=product rms=quadrature", budget.terms.len());
    let mut w = create_csv(&a.out, &header, &BUDGET_COLUMNS)?;
    for t in &budget.terms {
        w.write_record([t.name.clone(), t.category.to_string(), num(t.bias), opt(t.rms)])?;
    }
    w.write_record(["total_bias".into(), String::new(), num(budget.total_bias), String::new()])?;
    w.write_record(["total_rms".into(), String::new(), String::new(), num(budget.total_rms)])?;
    w.flush()?;
    Ok(Status::Ok)
}
