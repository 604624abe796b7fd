//! CSV and JSON serialisation of benchmark results.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::algo::Algorithm;
use crate::error::{Error, Result};
use crate::lattice::Dimension;
use crate::search::Budget;

use super::{AggregateStats, RunRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::InvalidParameter(format!("unknown report format {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    /// Molecule id as text, or the raw sequence for custom inputs.
    pub molecule: String,
    pub sequence: String,
    pub dim: Dimension,
    pub algorithm: Algorithm,
    pub budget: Budget,
    pub restart_cap: u32,
    pub master_seed: u64,
    pub seeds: Vec<u64>,
    pub stats: AggregateStats,
    pub runs: Vec<RunRecord>,
}

const SUMMARY_HEADER: [&str; 6] = ["molecule", "algo", "runs", "successes", "mean_time_min", "iqr_min"];

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.4}")).unwrap_or_default()
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// One summary row per report.
pub fn write_summary_csv<W: Write>(reports: &[Report], w: W) -> Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    out.write_record(SUMMARY_HEADER).map_err(csv_err)?;
    for r in reports {
        out.write_record([
            r.molecule.clone(),
            r.algorithm.id().to_string(),
            r.stats.run_count.to_string(),
            r.stats.success_count.to_string(),
            opt(r.stats.mean_time_min),
            opt(r.stats.iqr_min),
        ])
        .map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// `score,count` rows in ascending score order; header only when empty.
pub fn write_histogram_csv<W: Write>(stats: &AggregateStats, w: W) -> Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    out.write_record(["score", "count"]).map_err(csv_err)?;
    for (score, count) in &stats.histogram {
        out.write_record([score.to_string(), count.to_string()]).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn to_json(reports: &[Report]) -> Result<String> {
    serde_json::to_string_pretty(reports).map_err(|e| Error::Io(e.to_string()))
}

pub fn from_json(text: &str) -> Result<Vec<Report>> {
    serde_json::from_str(text).map_err(|e| Error::Io(e.to_string()))
}

/// Path of the histogram file written next to a CSV summary.
pub fn histogram_path(summary: &Path, molecule: &str, multiple: bool) -> PathBuf {
    let stem = summary.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    let name = if multiple {
        format!("{stem}.m{molecule}.hist.csv")
    } else {
        format!("{stem}.hist.csv")
    };
    summary.with_file_name(name)
}

/// Writes `reports` to `path`. CSV output also writes one `score,count`
/// histogram file per report beside the summary.
pub fn emit_report(reports: &[Report], format: ReportFormat, path: &Path) -> Result<()> {
    match format {
        ReportFormat::Json => fs::write(path, to_json(reports)? + "\n")?,
        ReportFormat::Csv => {
            write_summary_csv(reports, fs::File::create(path)?)?;
            let multiple = reports.len() > 1;
            for r in reports {
                let hist = histogram_path(path, &r.molecule, multiple);
                write_histogram_csv(&r.stats, fs::File::create(hist)?)?;
            }
        }
    }
    Ok(())
}
