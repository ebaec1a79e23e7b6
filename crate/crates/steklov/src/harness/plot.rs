//! Plot-data emission: flattens report directories into a single CSV series of
//! bound/eigenvalue columns ordered by the swept parameter.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::runner::{fmt_opt_f64, load_reports, RunReport, RunStatus, ScenarioOutput};

struct PlotRow {
    scenario: String,
    param: Option<f64>,
    lower: Option<f64>,
    value: Option<f64>,
    upper: Option<f64>,
    margin: Option<f64>,
    status: RunStatus,
}

/// The primary plottable payload of a report: its first bound report if any
/// (bound endpoints plus refereed eigenvalue), otherwise its first eigenvalue.
fn primary_row(report: &RunReport) -> PlotRow {
    let payload = &report.payload;
    let mut row = PlotRow {
        scenario: payload.scenario.name.clone(),
        param: payload.scenario.param,
        lower: None,
        value: None,
        upper: None,
        margin: None,
        status: payload.status,
    };
    for output in &payload.outputs {
        match output {
            ScenarioOutput::Bound(b) => {
                row.lower = b.lower;
                row.upper = b.upper;
                row.margin = b.margin;
                row.value = b.mu1_reference.as_ref().map(|m| m.mu1).or(b.lower);
                return row;
            }
            ScenarioOutput::Eigenvalue(e) if row.value.is_none() => {
                row.value = Some(e.mu1);
            }
            _ => {}
        }
    }
    row
}

/// Writes `plot_data.csv` beside the reports and returns its path.
///
/// Rows are sorted by the sweep parameter (reports without one come first),
/// then by scenario name.
pub fn emit_plot_data(report_dir: &Path) -> Result<PathBuf> {
    let reports = load_reports(report_dir)?;
    if reports.is_empty() {
        return Err(Error::Config(format!(
            "no reports found in {}",
            report_dir.display()
        )));
    }
    let mut rows: Vec<PlotRow> = reports.iter().map(|(_, r)| primary_row(r)).collect();
    rows.sort_by(|x, y| {
        let px = x.param.unwrap_or(f64::NEG_INFINITY);
        let py = y.param.unwrap_or(f64::NEG_INFINITY);
        px.total_cmp(&py).then_with(|| x.scenario.cmp(&y.scenario))
    });

    let out_path = report_dir.join("plot_data.csv");
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_path(&out_path)
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", out_path.display())))?;
    writer
        .write_record(["scenario", "param", "lower", "value", "upper", "margin", "status"])
        .map_err(|e| Error::Config(e.to_string()))?;
    for row in rows {
        let status = match row.status {
            RunStatus::Pass => "pass",
            RunStatus::Fail => "fail",
            RunStatus::Error => "error",
        };
        writer
            .write_record([
                row.scenario.as_str(),
                &fmt_opt_f64(row.param),
                &fmt_opt_f64(row.lower),
                &fmt_opt_f64(row.value),
                &fmt_opt_f64(row.upper),
                &fmt_opt_f64(row.margin),
                status,
            ])
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    writer.flush()?;
    Ok(out_path)
}
