use std::collections::BTreeMap;

use serde::Serialize;

use super::grid::ExperimentRecord;
use crate::error::{invalid, Error, Result};

/// Errors are clamped to this floor before taking logs.
pub const ERROR_FLOOR: f64 = 1e-16;

/// Summary of the records sharing one horizon.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatePoint {
    pub horizon: usize,
    pub median: f64,
    pub mean: f64,
    pub runs: usize,
    pub aborted: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    /// `-(β - 1)/β`.
    pub target: f64,
    /// Set when some median was at or below [`ERROR_FLOOR`] and got clamped.
    pub clamped: bool,
    pub points: Vec<RatePoint>,
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    })
}

/// Median and mean error per horizon. Aborted runs count as `+inf`.
pub fn summarize(records: &[ExperimentRecord]) -> Vec<RatePoint> {
    let mut by_t: BTreeMap<usize, Vec<&ExperimentRecord>> = BTreeMap::new();
    for r in records {
        by_t.entry(r.horizon).or_default().push(r);
    }
    by_t.into_iter()
        .map(|(horizon, rs)| {
            let errs: Vec<f64> = rs
                .iter()
                .map(|r| if r.aborted { f64::INFINITY } else { r.error })
                .collect();
            RatePoint {
                horizon,
                median: median(&errs).expect("nonempty group"),
                mean: errs.iter().sum::<f64>() / errs.len() as f64,
                runs: errs.len(),
                aborted: rs.iter().filter(|r| r.aborted).count(),
            }
        })
        .collect()
}

/// Least squares line through `(x, y)`: `(slope, intercept, r²)`.
pub fn ols(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r2)
}

/// Fit `log(median error) = intercept + slope · log T`.
pub fn fit_rate(records: &[ExperimentRecord], beta: f64) -> Result<RateFit> {
    if !(beta.is_finite() && beta >= 2.0) {
        return Err(Error::InvalidBeta(beta));
    }
    let points = summarize(records);
    if points.len() < 3 {
        return Err(invalid(
            "records",
            format!("need at least 3 distinct T values, got {}", points.len()),
        ));
    }
    if let Some(p) = points.iter().find(|p| !p.median.is_finite()) {
        return Err(invalid(
            "records",
            format!("median error at T={} is not finite", p.horizon),
        ));
    }
    let clamped = points.iter().any(|p| p.median <= ERROR_FLOOR);
    let x: Vec<f64> = points.iter().map(|p| (p.horizon as f64).ln()).collect();
    let y: Vec<f64> = points.iter().map(|p| p.median.max(ERROR_FLOOR).ln()).collect();
    let (slope, intercept, r2) = ols(&x, &y);
    Ok(RateFit {
        slope,
        intercept,
        r2,
        target: -(beta - 1.0) / beta,
        clamped,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::DriverKind;

    fn synthetic(err: impl Fn(f64) -> f64, horizons: &[usize]) -> Vec<ExperimentRecord> {
        horizons
            .iter()
            .map(|&t| ExperimentRecord {
                driver: DriverKind::Sc,
                objective: "quadratic:a=2,c=0".into(),
                d: 1,
                beta: 2.0,
                horizon: t,
                replication: 0,
                seed: 0,
                error: err(t as f64),
                queries: 2 * t,
                wall_ms: 0.0,
                aborted: false,
            })
            .collect()
    }

    #[test]
    fn exact_power_laws() {
        let ts = [256, 1024, 4096, 16384];
        let f = fit_rate(&synthetic(|t| 10.0 * t.powf(-0.5), &ts), 2.0).unwrap();
        assert!((f.slope + 0.5).abs() < 1e-12);
        assert!((f.intercept - 10f64.ln()).abs() < 1e-10);
        assert!((f.r2 - 1.0).abs() < 1e-12);
        assert_eq!(f.target, -0.5);
        let f = fit_rate(&synthetic(|t| 3.0 * t.powf(-2.0 / 3.0), &ts), 3.0).unwrap();
        assert!((f.slope + 2.0 / 3.0).abs() < 1e-12);
        assert!((f.target + 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn medians_per_horizon() {
        let mut recs = synthetic(|_| 1.0, &[10, 20, 30]);
        let mut extra = synthetic(|_| 5.0, &[10, 20, 30]);
        extra.extend(synthetic(|_| 3.0, &[10, 20, 30]));
        recs.extend(extra);
        let f = fit_rate(&recs, 2.0).unwrap();
        assert!(f.points.iter().all(|p| p.median == 3.0 && p.runs == 3));
        assert_eq!(f.slope, 0.0);
    }

    #[test]
    fn clamps_nonpositive() {
        let f = fit_rate(&synthetic(|t| if t > 20.0 { -1e-12 } else { 1.0 }, &[10, 20, 30]), 2.0).unwrap();
        assert!(f.clamped);
        assert!(f.slope.is_finite());
    }

    #[test]
    fn needs_three_horizons() {
        assert!(fit_rate(&synthetic(|t| 1.0 / t, &[10, 20]), 2.0).is_err());
        assert_eq!(median(&[]), None);
        assert_eq!(median(&[4.0, 1.0]), Some(2.5));
    }
}
