//! Experiment runner for the self-embezzlement analysis.
//!
//! Five experiments sweep the primitives of [`embezzle_core`] and emit
//! [`RunReport`]s: sorted rows, a summary, and verdicts that are rules over the
//! rows. Reports serialize to CSV, JSON and an optional SVG chart and are
//! byte-identical across runs with the same configuration and seed.

pub mod chart;
pub mod config;
pub mod error;
pub mod experiments;
pub mod generators;
pub mod number;
pub mod report;
pub mod sampling;

pub use config::{Experiment, ExperimentConfig, Format};
pub use error::{RunError, RunResult};
pub use experiments::run;
pub use report::{Cell, RunReport, Verdict};

use std::path::{Path, PathBuf};

/// Renders `report` in `format`; `None` for an SVG of a report without chart.
pub fn render(report: &RunReport, format: Format) -> RunResult<Option<String>> {
    Ok(match format {
        Format::Json => Some(report.to_json()),
        Format::Csv => Some(report.to_csv()?),
        Format::Svg => chart::render_svg(report),
    })
}

/// Writes `<dir>/<experiment>.<ext>` for every format and returns the paths.
pub fn write_outputs(report: &RunReport, dir: &Path, formats: &[Format]) -> RunResult<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| RunError::io(dir, e))?;
    let mut written = Vec::new();
    for &f in formats {
        let Some(text) = render(report, f)? else { continue };
        let path = dir.join(format!("{}.{}", report.experiment, f.extension()));
        std::fs::write(&path, text).map_err(|e| RunError::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

/// Merged view of several reports with their verdicts re-evaluated.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MergedReport {
    pub reports: Vec<MergedEntry>,
    pub all_pass: bool,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MergedEntry {
    pub experiment: String,
    pub source: String,
    pub rows: usize,
    /// Stored verdicts agree with the ones recomputed from the rows.
    pub consistent: bool,
    pub all_pass: bool,
    pub verdicts: Vec<MergedVerdict>,
    pub summary: std::collections::BTreeMap<String, Cell>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MergedVerdict {
    pub name: String,
    pub passed: bool,
    pub failures: u64,
    pub worst: Option<f64>,
}

/// Reads JSON reports and recomputes every verdict from the stored rows.
/// Entries keep the order of `paths`.
pub fn merge_reports(paths: &[PathBuf]) -> RunResult<MergedReport> {
    let mut reports = Vec::new();
    for path in paths {
        let text = std::fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
        let r = RunReport::from_json(&text).map_err(|e| RunError::Json { path: path.display().to_string(), source: e })?;
        let recomputed = r.recheck();
        let consistent = recomputed.iter().zip(&r.verdicts).all(|(a, b)| a.passed == b.passed && a.failures == b.failures)
            && recomputed.len() == r.verdicts.len();
        let all_pass = consistent && !recomputed.is_empty() && recomputed.iter().all(|v| v.passed);
        reports.push(MergedEntry {
            experiment: r.experiment.clone(),
            source: path.display().to_string(),
            rows: r.rows.len(),
            consistent,
            all_pass,
            verdicts: recomputed
                .into_iter()
                .map(|v| MergedVerdict { name: v.name, passed: v.passed, failures: v.failures, worst: v.worst })
                .collect(),
            summary: r.summary,
        });
    }
    let all_pass = !reports.is_empty() && reports.iter().all(|e| e.all_pass);
    Ok(MergedReport { reports, all_pass })
}
