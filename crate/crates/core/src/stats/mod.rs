//! Validation statistics and the error budget.

mod gamma;

use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;

use serde::Deserialize;
use thiserror::Error;

pub use gamma::{chi_square_sf, gamma_q, ln_gamma};

pub const DEFAULT_MIN_COUNT: u64 = 10;
/// Bin widths used for the sorter comparison: 1/4 inch and 2 ounces.
pub const LENGTH_BIN_CM: f64 = 0.635;
pub const WEIGHT_BIN_G: f64 = 56.70;

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("{0}")]
    Domain(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("budget file line {line}: {message}")]
    Budget { line: u64, message: String },
    #[error("budget file: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegressionSummary {
    pub slope: f64,
    /// 1 − SS_res/SS_tot with SS_tot about the mean; negative for fits
    /// worse than the mean.
    pub r_squared: f64,
    /// RMS of residuals about the fitted line.
    pub rmse_unbiased: f64,
    pub n: usize,
}

impl RegressionSummary {
    pub fn r_squared_is_negative(&self) -> bool {
        self.r_squared < 0.0
    }
}

/// Least squares `y = β·x` with no intercept.
pub fn regress_through_origin(xs: &[f64], ys: &[f64]) -> Result<RegressionSummary, StatsError> {
    if xs.len() != ys.len() {
        return Err(StatsError::Domain(format!("x has {} values, y has {}", xs.len(), ys.len())));
    }
    let n = xs.len();
    if n < 2 {
        return Err(StatsError::Domain(format!("need at least 2 points, got {n}")));
    }
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    if !(sxx > 0.0) || !sxx.is_finite() {
        return Err(StatsError::Domain("x values are all zero".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let slope = sxy / sxx;
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x).powi(2)).sum();
    let mean = ys.iter().sum::<f64>() / n as f64;
    let ss_tot: f64 = ys.iter().map(|y| (y - mean).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else if ss_res == 0.0 {
        1.0
    } else {
        f64::NEG_INFINITY
    };
    Ok(RegressionSummary { slope, r_squared, rmse_unbiased: (ss_res / n as f64).sqrt(), n })
}

/// Counts on a regular grid. `counts[i]` covers
/// `[origin + (first_bin+i)·w, origin + (first_bin+i+1)·w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bin_width: f64,
    pub origin: f64,
    pub first_bin: i64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    fn get(&self, bin: i64) -> u64 {
        let i = bin - self.first_bin;
        if i < 0 || i as usize >= self.counts.len() {
            0
        } else {
            self.counts[i as usize]
        }
    }

    fn bin_range(&self) -> Option<(i64, i64)> {
        if self.counts.is_empty() {
            None
        } else {
            Some((self.first_bin, self.first_bin + self.counts.len() as i64 - 1))
        }
    }
}

/// Bins `values` by `floor((v − origin)/bin_width)`; values on a boundary
/// go to the upper bin. Bins span the lowest to highest occupied bin.
pub fn build_histogram(values: &[f64], bin_width: f64, origin: f64) -> Result<Histogram, StatsError> {
    if !(bin_width > 0.0) || !bin_width.is_finite() {
        return Err(StatsError::Domain(format!("bin width must be positive, got {bin_width}")));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(StatsError::Domain(format!("non-finite value {v}")));
    }
    let bins: Vec<i64> = values.iter().map(|v| ((v - origin) / bin_width).floor() as i64).collect();
    let (Some(&lo), Some(&hi)) = (bins.iter().min(), bins.iter().max()) else {
        return Ok(Histogram { bin_width, origin, first_bin: 0, counts: Vec::new() });
    };
    let mut counts = vec![0u64; (hi - lo + 1) as usize];
    for b in bins {
        counts[(b - lo) as usize] += 1;
    }
    Ok(Histogram { bin_width, origin, first_bin: lo, counts })
}

fn check_aligned(a: &Histogram, b: &Histogram) -> Result<(), StatsError> {
    let tol = 1e-12 * a.bin_width.abs().max(1.0);
    if (a.bin_width - b.bin_width).abs() > tol || (a.origin - b.origin).abs() > tol {
        return Err(StatsError::Domain(format!(
            "histograms use different binning (width {} vs {}, origin {} vs {})",
            a.bin_width, b.bin_width, a.origin, b.origin
        )));
    }
    Ok(())
}

fn union_range(a: &Histogram, b: &Histogram) -> Option<(i64, i64)> {
    match (a.bin_range(), b.bin_range()) {
        (None, None) => None,
        (Some(r), None) | (None, Some(r)) => Some(r),
        (Some((l1, h1)), Some((l2, h2))) => Some((l1.min(l2), h1.max(h2))),
    }
}

/// Σ|a_i − b_i| over the union of both ranges, missing bins counted as 0.
pub fn sum_absolute_error(a: &Histogram, b: &Histogram) -> Result<u64, StatsError> {
    check_aligned(a, b)?;
    let Some((lo, hi)) = union_range(a, b) else {
        return Ok(0);
    };
    Ok((lo..=hi).map(|i| a.get(i).abs_diff(b.get(i))).sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareResult {
    pub chi2: f64,
    pub df: usize,
    pub p: f64,
    pub bins_discarded: usize,
}

/// Pearson goodness of fit. Bin pairs where either side has fewer than
/// `min_count` are dropped; the remaining expected counts are rescaled to the
/// remaining observed total.
pub fn chi_square_gof(
    observed: &Histogram,
    expected: &Histogram,
    min_count: u64,
) -> Result<ChiSquareResult, StatsError> {
    check_aligned(observed, expected)?;
    let mut kept = Vec::new();
    let mut discarded = 0usize;
    if let Some((lo, hi)) = union_range(observed, expected) {
        for i in lo..=hi {
            let (o, e) = (observed.get(i), expected.get(i));
            if o < min_count || e < min_count {
                discarded += 1;
            } else {
                kept.push((o as f64, e as f64));
            }
        }
    }
    if kept.len() < 2 {
        return Err(StatsError::InsufficientData(format!(
            "{} bin pair(s) reach {min_count} counts on both sides; need 2",
            kept.len()
        )));
    }
    let o_total: f64 = kept.iter().map(|k| k.0).sum();
    let e_total: f64 = kept.iter().map(|k| k.1).sum();
    let scale = o_total / e_total;
    let chi2: f64 = kept
        .iter()
        .map(|&(o, e)| {
            let e = e * scale;
            (o - e).powi(2) / e
        })
        .sum();
    let df = kept.len() - 1;
    Ok(ChiSquareResult { chi2, df, p: chi_square_sf(chi2, df), bins_discarded: discarded })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorCategory {
    Imaging,
    Masking,
    Modeling,
}

impl fmt::Display for ErrorCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorCategory::Imaging => "imaging",
            ErrorCategory::Masking => "masking",
            ErrorCategory::Modeling => "modeling",
        })
    }
}

impl std::str::FromStr for ErrorCategory {
    type Err = StatsError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "imaging" => Ok(ErrorCategory::Imaging),
            "masking" => Ok(ErrorCategory::Masking),
            "modeling" | "modelling" => Ok(ErrorCategory::Modeling),
            other => Err(StatsError::Domain(format!("unknown error category {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorTerm {
    pub name: String,
    pub category: ErrorCategory,
    /// Proportional factor; 1.0 is unbiased.
    pub bias: f64,
    /// Grams; `None` when the source contributes no random error.
    pub rms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorBudget {
    pub terms: Vec<ErrorTerm>,
    pub total_bias: f64,
    pub total_rms: f64,
}

/// Biases multiply; RMS terms add in quadrature (assumed uncorrelated).
pub fn combine_error_budget(terms: &[ErrorTerm]) -> Result<ErrorBudget, StatsError> {
    let mut total_bias = 1.0;
    let mut sum_sq = 0.0;
    for t in terms {
        if !(t.bias > 0.0) || !t.bias.is_finite() {
            return Err(StatsError::Domain(format!("term {:?}: bias must be positive, got {}", t.name, t.bias)));
        }
        total_bias *= t.bias;
        if let Some(r) = t.rms {
            if !(r >= 0.0) || !r.is_finite() {
                return Err(StatsError::Domain(format!("term {:?}: rms must be non-negative, got {r}", t.name)));
            }
            sum_sq += r * r;
        }
    }
    Ok(ErrorBudget { terms: terms.to_vec(), total_bias, total_rms: sum_sq.sqrt() })
}

#[derive(Deserialize)]
struct BudgetRow {
    name: String,
    category: String,
    bias: f64,
    rms_g: Option<f64>,
}

/// Reads `name,category,bias,rms_g` rows; `rms_g` may be blank.
pub fn parse_budget_csv<R: Read>(source: R) -> Result<Vec<ErrorTerm>, StatsError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(source);
    let headers = rdr.headers()?.clone();
    for col in ["name", "category", "bias", "rms_g"] {
        if !headers.iter().any(|h| h == col) {
            return Err(StatsError::Budget { line: 1, message: format!("missing column {col:?}") });
        }
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let row: BudgetRow =
            rec.deserialize(Some(&headers)).map_err(|e| StatsError::Budget { line, message: e.to_string() })?;
        let category =
            row.category.parse().map_err(|e: StatsError| StatsError::Budget { line, message: e.to_string() })?;
        out.push(ErrorTerm { name: row.name, category, bias: row.bias, rms: row.rms_g });
    }
    Ok(out)
}

/// Per-category product of biases and quadrature sum of RMS, in category
/// order.
pub fn budget_by_category(terms: &[ErrorTerm]) -> Result<BTreeMap<ErrorCategory, ErrorBudget>, StatsError> {
    let mut groups: BTreeMap<ErrorCategory, Vec<ErrorTerm>> = BTreeMap::new();
    for t in terms {
        groups.entry(t.category).or_default().push(t.clone());
    }
    groups.into_iter().map(|(k, v)| Ok((k, combine_error_budget(&v)?))).collect()
}

/// Fraction of the maximum projected area seen by a camera at distance `d`
/// from a sphere of radius `r`: `((d/r + 1)² − 1)/(d/r + 1)²`.
pub fn solid_angle_ratio(distance: f64, radius: f64) -> Result<f64, StatsError> {
    if !(distance > 0.0 && radius > 0.0) || !distance.is_finite() || !radius.is_finite() {
        return Err(StatsError::Domain(format!("distance and radius must be positive, got {distance}, {radius}")));
    }
    let k = distance / radius + 1.0;
    Ok(1.0 - 1.0 / (k * k))
}

/// `√(total² − known²)`: the part of a total RMS not explained by `known`.
pub fn residual_quadrature_subtract(total_rms: f64, known_rms: f64) -> Result<f64, StatsError> {
    if !(known_rms >= 0.0) || !(total_rms >= 0.0) {
        return Err(StatsError::Domain(format!("rms values must be non-negative, got {total_rms}, {known_rms}")));
    }
    if known_rms > total_rms {
        return Err(StatsError::Domain(format!(
            "known rms {known_rms} exceeds total {total_rms}; the budget is inconsistent"
        )));
    }
    Ok(((total_rms - known_rms) * (total_rms + known_rms)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hist(first_bin: i64, counts: &[u64]) -> Histogram {
        Histogram { bin_width: 1.0, origin: 0.0, first_bin, counts: counts.to_vec() }
    }

    fn term(name: &str, bias: f64, rms: Option<f64>) -> ErrorTerm {
        ErrorTerm { name: name.into(), category: ErrorCategory::Imaging, bias, rms }
    }

    #[test]
    fn exact_proportional_fit() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x).collect();
        let r = regress_through_origin(&xs, &ys).unwrap();
        assert_eq!(r.slope, 2.0);
        assert_eq!(r.rmse_unbiased, 0.0);
        assert_eq!(r.r_squared, 1.0);
        assert_eq!(r.n, 4);
    }

    #[test]
    fn hand_computed_fit() {
        let r = regress_through_origin(&[1.0, 2.0, 3.0], &[2.0, 3.0, 7.0]).unwrap();
        let b = 29.0 / 14.0;
        assert!((r.slope - b).abs() < 1e-15);
        // residuals 2−b, 3−2b, 7−3b
        let res = [2.0 - b, 3.0 - 2.0 * b, 7.0 - 3.0 * b];
        let ss: f64 = res.iter().map(|e| e * e).sum();
        assert!((r.rmse_unbiased - (ss / 3.0).sqrt()).abs() < 1e-14);
        // ȳ = 4, SS_tot = 4 + 1 + 9 = 14
        assert!((r.r_squared - (1.0 - ss / 14.0)).abs() < 1e-14);
    }

    #[test]
    fn regression_errors() {
        assert!(regress_through_origin(&[1.0], &[2.0]).is_err());
        assert!(regress_through_origin(&[1.0, 2.0], &[2.0]).is_err());
        assert!(regress_through_origin(&[0.0, 0.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn negative_r_squared_is_reported() {
        let r = regress_through_origin(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap();
        assert!(r.r_squared_is_negative());
    }

    #[test]
    fn histogram_examples() {
        let h = build_histogram(&[0.1, 0.2, 0.9], 0.5, 0.0).unwrap();
        assert_eq!((h.first_bin, h.counts.clone()), (0, vec![2, 1]));
        assert!(build_histogram(&[], 0.5, 0.0).unwrap().counts.is_empty());
        let h = build_histogram(&[0.5], 0.5, 0.0).unwrap();
        assert_eq!(h.first_bin, 1);
        assert!(build_histogram(&[1.0], 0.0, 0.0).is_err());
        let h = build_histogram(&[-0.1, 1.2], 0.5, 0.0).unwrap();
        assert_eq!((h.first_bin, h.counts), (-1, vec![1, 0, 0, 1]));
    }

    #[test]
    fn sae_examples() {
        let a = hist(0, &[3, 4, 5]);
        assert_eq!(sum_absolute_error(&a, &a).unwrap(), 0);
        assert_eq!(sum_absolute_error(&hist(0, &[3, 0]), &hist(0, &[0, 3])).unwrap(), 6);
        assert_eq!(sum_absolute_error(&hist(0, &[5]), &hist(0, &[2, 1])).unwrap(), 4);
        let other = Histogram { bin_width: 2.0, ..hist(0, &[1]) };
        assert!(sum_absolute_error(&a, &other).is_err());
    }

    #[test]
    fn chi_square_examples() {
        let h = hist(0, &[12, 40, 33, 10]);
        let r = chi_square_gof(&h, &h, 10).unwrap();
        assert_eq!(r.chi2, 0.0);
        assert_eq!(r.p, 1.0);
        assert_eq!(r.df, 3);

        let r = chi_square_gof(&hist(0, &[20, 30]), &hist(0, &[25, 25]), 10).unwrap();
        assert!((r.chi2 - 2.0).abs() < 1e-12);
        assert_eq!(r.df, 1);
        assert!((r.p - 0.157_299_207).abs() < 1e-6);

        let e = chi_square_gof(&hist(0, &[20, 5]), &hist(0, &[20, 30]), 10);
        assert!(matches!(e, Err(StatsError::InsufficientData(_))));
    }

    #[test]
    fn chi_square_rescales_and_counts_discards() {
        // expected twice observed everywhere: same shape, χ² = 0
        let r = chi_square_gof(&hist(0, &[10, 20, 30, 2]), &hist(0, &[20, 40, 60, 4]), 10).unwrap();
        assert!(r.chi2.abs() < 1e-12);
        assert_eq!(r.bins_discarded, 1);
        assert_eq!(r.df, 2);
    }

    #[test]
    fn table_one_budget() {
        let terms =
            [term("a", 0.99, None), term("b", 0.95, None), term("c", 0.88, Some(54.98)), term("d", 1.12, Some(50.61))];
        let b = combine_error_budget(&terms).unwrap();
        assert!((b.total_bias - 0.926_956_8).abs() < 1e-12);
        assert_eq!((b.total_bias * 100.0).round() / 100.0, 0.93);
        assert!((b.total_rms - 74.73).abs() < 0.005, "{}", b.total_rms);

        let empty = combine_error_budget(&[]).unwrap();
        assert_eq!((empty.total_bias, empty.total_rms), (1.0, 0.0));
        assert!(combine_error_budget(&[term("x", 0.0, None)]).is_err());
        assert!(combine_error_budget(&[term("x", 1.0, Some(-1.0))]).is_err());
    }

    #[test]
    fn budget_csv() {
        let src = "name,category,bias,rms_g\nperspective,imaging,0.99,\nocclusion,masking,0.88,54.98\n";
        let t = parse_budget_csv(src.as_bytes()).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].rms, None);
        assert_eq!(t[1].category, ErrorCategory::Masking);

        let bad = "name,category,bias,rms_g\nx,imaging,abc,\n";
        assert!(matches!(parse_budget_csv(bad.as_bytes()), Err(StatsError::Budget { line: 2, .. })));
        let missing = "name,category,bias\nx,imaging,1.0\n";
        assert!(matches!(parse_budget_csv(missing.as_bytes()), Err(StatsError::Budget { line: 1, .. })));
        let cat = "name,category,bias,rms_g\nx,weather,1.0,\n";
        assert!(parse_budget_csv(cat.as_bytes()).is_err());
    }

    #[test]
    fn by_category() {
        let mut terms = vec![term("a", 0.5, Some(3.0)), term("b", 0.5, Some(4.0))];
        terms.push(ErrorTerm { category: ErrorCategory::Modeling, ..term("c", 1.1, None) });
        let m = budget_by_category(&terms).unwrap();
        assert_eq!(m[&ErrorCategory::Imaging].total_bias, 0.25);
        assert_eq!(m[&ErrorCategory::Imaging].total_rms, 5.0);
        assert_eq!(m[&ErrorCategory::Modeling].total_rms, 0.0);
    }

    #[test]
    fn solid_angle_examples() {
        let s = solid_angle_ratio(100.0, 3.0).unwrap();
        assert!((s - 0.99915).abs() < 5e-6, "{s}");
        assert_eq!((s * 1000.0).round() / 1000.0, 0.999);
        assert!((solid_angle_ratio(1e9 * 3.0, 3.0).unwrap() - 1.0).abs() < 1e-8);
        assert_eq!(solid_angle_ratio(2.0, 2.0).unwrap(), 0.75);
        assert!(solid_angle_ratio(0.0, 1.0).is_err());
        assert!(solid_angle_ratio(1.0, -1.0).is_err());
    }

    #[test]
    fn quadrature_subtract_examples() {
        let m = residual_quadrature_subtract(74.73, 50.61).unwrap();
        assert!((m - 54.98).abs() < 0.005, "{m}");
        assert_eq!(residual_quadrature_subtract(10.0, 0.0).unwrap(), 10.0);
        assert!(residual_quadrature_subtract(1.0, 2.0).is_err());
    }

    proptest! {
        #[test]
        fn slope_scale_equivariant(
            pts in prop::collection::vec((0.1f64..100.0, 0.1f64..100.0), 2..40),
            k in 0.1f64..10.0,
        ) {
            let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
            let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
            let ky: Vec<f64> = ys.iter().map(|y| k * y).collect();
            let a = regress_through_origin(&xs, &ys).unwrap();
            let b = regress_through_origin(&xs, &ky).unwrap();
            prop_assert!((b.slope - k * a.slope).abs() <= 1e-10 * b.slope.abs().max(1.0));
            prop_assert!((b.rmse_unbiased - k * a.rmse_unbiased).abs() <= 1e-9 * b.rmse_unbiased.max(1.0));
        }

        #[test]
        fn slope_minimises_residuals(
            pts in prop::collection::vec((0.1f64..100.0, 0.1f64..100.0), 2..40),
            d in prop_oneof![-1.0f64..-1e-3, 1e-3f64..1.0],
        ) {
            let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
            let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
            let r = regress_through_origin(&xs, &ys).unwrap();
            let ss = |b: f64| xs.iter().zip(&ys).map(|(x, y)| (y - b * x).powi(2)).sum::<f64>();
            prop_assert!(ss(r.slope + d) > ss(r.slope));
        }

        #[test]
        fn budget_order_invariant_and_associative(
            raw in prop::collection::vec((0.5f64..1.5, prop::option::of(0.0f64..100.0)), 0..8),
        ) {
            let terms: Vec<ErrorTerm> = raw.iter().enumerate().map(|(i, &(b, r))| term(&i.to_string(), b, r)).collect();
            let fwd = combine_error_budget(&terms).unwrap();
            let mut rev = terms.clone();
            rev.reverse();
            let back = combine_error_budget(&rev).unwrap();
            prop_assert!((fwd.total_bias - back.total_bias).abs() <= 1e-12 * fwd.total_bias);
            prop_assert!((fwd.total_rms - back.total_rms).abs() <= 1e-12 * fwd.total_rms.max(1.0));
            let split = terms.len() / 2;
            let left = combine_error_budget(&terms[..split]).unwrap();
            let mut nested = vec![term("left", left.total_bias, Some(left.total_rms))];
            nested.extend_from_slice(&terms[split..]);
            let again = combine_error_budget(&nested).unwrap();
            prop_assert!((again.total_bias - fwd.total_bias).abs() <= 1e-12 * fwd.total_bias);
            prop_assert!((again.total_rms - fwd.total_rms).abs() <= 1e-12 * fwd.total_rms.max(1.0));
        }

        #[test]
        fn subtraction_inverts_two_term_budget(a in 0.0f64..500.0, b in 0.0f64..500.0) {
            let total = combine_error_budget(&[term("a", 1.0, Some(a)), term("b", 1.0, Some(b))]).unwrap().total_rms;
            let back = residual_quadrature_subtract(total, b).unwrap();
            prop_assert!((back - a).abs() <= 1e-9 * total.max(1.0));
        }

        #[test]
        fn self_fit_is_perfect(counts in prop::collection::vec(10u64..1000, 2..20)) {
            let h = hist(3, &counts);
            let r = chi_square_gof(&h, &h, DEFAULT_MIN_COUNT).unwrap();
            prop_assert!(r.chi2.abs() < 1e-12);
            prop_assert!((r.p - 1.0).abs() < 1e-12);
        }

        #[test]
        fn solid_angle_monotone(r in 0.1f64..10.0, d1 in 0.1f64..1000.0, d2 in 0.1f64..1000.0) {
            prop_assume!(d1 < d2);
            prop_assert!(solid_angle_ratio(d1, r).unwrap() <= solid_angle_ratio(d2, r).unwrap());
        }
    }
}
