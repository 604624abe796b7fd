use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::RunRecord;

/// Summary of a batch of runs. Times are in minutes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateStats {
    pub run_count: usize,
    pub success_count: usize,
    /// Mean wall time over successful runs.
    pub mean_time_min: Option<f64>,
    /// Q3 - Q1 of successful run times.
    pub iqr_min: Option<f64>,
    /// Mean wall time over all runs, successful or not.
    pub mean_time_all_min: f64,
    /// Best score -> number of runs.
    pub histogram: BTreeMap<i64, usize>,
}

/// Quantile of sorted data by linear interpolation between order
/// statistics at position `(n - 1) * p`.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn interquartile_range(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    quantile(&sorted, 0.75) - quantile(&sorted, 0.25)
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Aggregates run records. Invariant under permutation of `records`.
pub fn aggregate(records: &[RunRecord]) -> Result<AggregateStats> {
    if records.is_empty() {
        return Err(Error::NoRecords);
    }
    let mut histogram = BTreeMap::new();
    for r in records {
        *histogram.entry(r.best_score).or_insert(0) += 1;
    }
    let mut success_times: Vec<f64> = records
        .iter()
        .filter(|r| r.success)
        .map(|r| r.total_wall_time / 60.0)
        .collect();
    // Summation order must not depend on record order.
    success_times.sort_by(f64::total_cmp);
    let mut all_times: Vec<f64> = records.iter().map(|r| r.total_wall_time / 60.0).collect();
    all_times.sort_by(f64::total_cmp);
    let (mean_time_min, iqr_min) = if success_times.is_empty() {
        (None, None)
    } else {
        (Some(mean(&success_times)), Some(interquartile_range(&success_times)))
    };
    Ok(AggregateStats {
        run_count: records.len(),
        success_count: success_times.len(),
        mean_time_min,
        iqr_min,
        mean_time_all_min: mean(&all_times),
        histogram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algo::Algorithm;
    use crate::playout::PlayoutParams;

    fn record(minutes: f64, score: i64, success: bool) -> RunRecord {
        RunRecord {
            molecule: 1,
            algorithm: Algorithm::Playout(PlayoutParams::default()),
            seed: 0,
            restarts: 0,
            total_wall_time: minutes * 60.0,
            best_score: score,
            best_moves: vec![],
            playout_count: 1,
            success,
        }
    }

    #[test]
    fn hand_computed_quartiles() {
        let recs: Vec<_> = [1.0, 2.0, 3.0, 4.0].iter().map(|&t| record(t, 32, true)).collect();
        let s = aggregate(&recs).unwrap();
        assert!((s.mean_time_min.unwrap() - 2.5).abs() < 1e-12);
        assert!((s.iqr_min.unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(s.histogram.get(&32), Some(&4));
    }

    #[test]
    fn single_record_has_zero_iqr() {
        let s = aggregate(&[record(7.0, 30, true)]).unwrap();
        assert_eq!(s.iqr_min, Some(0.0));
        assert_eq!(s.mean_time_min, Some(7.0));
    }

    #[test]
    fn failures_excluded_from_success_mean() {
        let s = aggregate(&[record(1.0, 32, true), record(9.0, 30, false)]).unwrap();
        assert_eq!(s.mean_time_min, Some(1.0));
        assert_eq!(s.mean_time_all_min, 5.0);
        assert_eq!(s.success_count, 1);
        assert_eq!(s.histogram.values().sum::<usize>(), 2);

        let none = aggregate(&[record(1.0, 3, false)]).unwrap();
        assert_eq!(none.mean_time_min, None);
        assert_eq!(none.iqr_min, None);
    }

    #[test]
    fn empty_input_rejected() {
        assert_eq!(aggregate(&[]), Err(Error::NoRecords));
    }

    #[test]
    fn quantile_endpoints() {
        let v = [1.0, 5.0, 9.0];
        assert_eq!(quantile(&v, 0.0), 1.0);
        assert_eq!(quantile(&v, 1.0), 9.0);
        assert_eq!(quantile(&v, 0.5), 5.0);
        assert_eq!(quantile(&v, 0.25), 3.0);
    }
}
