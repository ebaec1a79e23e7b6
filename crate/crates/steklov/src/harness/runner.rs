//! Scenario execution and report emission.
//!
//! Each scenario runs independently and never aborts the batch: library errors are
//! recorded as a structured `error` status on that scenario's report. Report files
//! separate the deterministic `payload` (scenario echo, outputs, checks, status)
//! from the measured `wall_time_s`, so identical configs produce byte-identical
//! payloads regardless of timing or thread scheduling.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    curvature_sandwich_report, garcia_montano_bound, kuttler_sigillito_bound, star_shaped_report,
    BoundName, BoundReport, Verdict, VERDICT_REL_TOL,
};
use crate::error::{Error, Result};
use crate::galerkin::{cap_mu1, GalerkinConfig};
use crate::profile::{
    check_curvature_bound, sturm_comparison_report, CurvatureBoundCheck, ProfileFamily,
    RadialProfile, SturmComparisonReport,
};
use crate::radial::{radial_mu1, SteklovResult};
use crate::spaceform::{sine_scaling_sweep, SineSweepSummary};
use crate::star::{domain_scalars, is_geodesic_ball, DomainScalars};

use super::config::{
    parse_config, CatalogParams, Scenario, StarBoundParams, Task,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Pass,
    Fail,
    Error,
}

/// One verified inequality or value comparison, flattened for the summary CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub check: String,
    pub lower: Option<f64>,
    pub value: Option<f64>,
    pub upper: Option<f64>,
    pub margin: Option<f64>,
    pub status: CheckStatus,
}

impl Check {
    /// Margin is the minimum slack against the sides present; passes when the
    /// margin is no worse than `-tol`.
    fn bounded(name: &str, lower: Option<f64>, value: f64, upper: Option<f64>, tol: f64) -> Self {
        let mut margin = f64::INFINITY;
        if let Some(lo) = lower {
            margin = margin.min(value - lo);
        }
        if let Some(up) = upper {
            margin = margin.min(up - value);
        }
        let status = if margin >= -tol { CheckStatus::Pass } else { CheckStatus::Fail };
        Check { check: name.into(), lower, value: Some(value), upper, margin: Some(margin), status }
    }
}

/// Rich per-scenario payloads next to the flat check rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ScenarioOutput {
    Eigenvalue(SteklovResult),
    Bound(BoundReport),
    SineSweep(SineSweepSummary),
    SturmComparison(SturmComparisonReport),
    Scalars(DomainScalars),
    CurvatureCheck(CurvatureBoundCheck),
}

/// Deterministic part of a scenario report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportPayload {
    pub scenario: Scenario,
    pub outputs: Vec<ScenarioOutput>,
    pub checks: Vec<Check>,
    pub status: RunStatus,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub payload: ReportPayload,
    pub wall_time_s: f64,
}

struct TaskResult {
    outputs: Vec<ScenarioOutput>,
    checks: Vec<Check>,
    /// Value compared against `expected`, when the scenario has a natural one.
    primary: Option<f64>,
}

fn run_task(task: &Task) -> Result<TaskResult> {
    match task {
        Task::SineScalingSweep(p) => {
            let sweep = sine_scaling_sweep(p.a_min, p.a_max, p.a_samples, p.x_samples)?;
            let mut checks = Vec::new();
            if sweep.min_gap_scale_le_one.is_finite() {
                checks.push(Check::bounded(
                    "gap_nonnegative_for_scale_le_one",
                    Some(-p.tol),
                    sweep.min_gap_scale_le_one,
                    None,
                    0.0,
                ));
            }
            if sweep.max_gap_scale_ge_one.is_finite() {
                checks.push(Check::bounded(
                    "gap_nonpositive_for_scale_ge_one",
                    None,
                    sweep.max_gap_scale_ge_one,
                    Some(p.tol),
                    0.0,
                ));
            }
            checks.push(Check::bounded(
                "equality_only_on_trivial_lines",
                None,
                sweep.off_line_equalities as f64,
                Some(0.0),
                0.0,
            ));
            Ok(TaskResult {
                outputs: vec![ScenarioOutput::SineSweep(sweep)],
                checks,
                primary: None,
            })
        }
        Task::SturmComparisonCheck(p) => {
            let profile = p.profile.to_profile()?;
            let curvature = check_curvature_bound(&profile, p.k, p.side, p.samples)?;
            let report = sturm_comparison_report(&profile, p.k, p.side, p.samples)?;
            let checks = vec![
                Check::bounded(
                    "sigma_dominated_by_sin_k",
                    None,
                    report.max_ratio_violation,
                    Some(p.comparison_tol),
                    0.0,
                ),
                Check::bounded(
                    "ratio_monotone",
                    None,
                    report.ratio_monotone_violation,
                    Some(p.monotone_tol),
                    0.0,
                ),
                Check::bounded(
                    "ratio_limit_one_at_origin",
                    Some(1.0 - p.limit_tol),
                    report.limit_at_zero,
                    Some(1.0 + p.limit_tol),
                    0.0,
                ),
            ];
            Ok(TaskResult {
                outputs: vec![
                    ScenarioOutput::CurvatureCheck(curvature),
                    ScenarioOutput::SturmComparison(report),
                ],
                checks,
                primary: None,
            })
        }
        Task::RadialMu1(p) => {
            let profile = p.profile.to_profile()?;
            let res = radial_mu1(&profile, p.steps)?;
            let primary = res.mu1;
            Ok(TaskResult {
                outputs: vec![ScenarioOutput::Eigenvalue(res)],
                checks: Vec::new(),
                primary: Some(primary),
            })
        }
        Task::CapMu1(p) => {
            let domain = p.domain.to_domain()?;
            let cfg = GalerkinConfig::new(p.degree, p.quad_points)?;
            let res = cap_mu1(&domain, &cfg)?;
            let primary = res.mu1;
            Ok(TaskResult {
                outputs: vec![ScenarioOutput::Eigenvalue(res)],
                checks: Vec::new(),
                primary: Some(primary),
            })
        }
        Task::StarShapedBoundCheck(p) => run_star_bound(p),
        Task::CurvatureSandwichCheck(p) => {
            let profile = p.profile.to_profile()?;
            let model = RadialProfile::new(
                profile.n(),
                profile.radius(),
                ProfileFamily::ConstantCurvature { k: p.k },
            )?;
            let mu_g = radial_mu1(&profile, p.steps)?;
            let mu_can = radial_mu1(&model, p.steps)?;
            let report = curvature_sandwich_report(&profile, p.k, p.side, &mu_g, &mu_can)?;
            let tol = VERDICT_REL_TOL * mu_g.mu1.abs().max(1.0);
            let checks = vec![Check::bounded(
                "sandwich_chain",
                report.lower,
                mu_g.mu1,
                report.upper,
                tol,
            )];
            let primary = mu_g.mu1;
            Ok(TaskResult {
                outputs: vec![ScenarioOutput::Bound(report)],
                checks,
                primary: Some(primary),
            })
        }
        Task::CatalogEval(p) => run_catalog(p),
    }
}

fn run_star_bound(p: &StarBoundParams) -> Result<TaskResult> {
    let domain = p.domain.to_domain()?;
    let scalars = domain_scalars(&domain)?;
    let ball_profile = RadialProfile::new(
        domain.n(),
        scalars.r_min,
        ProfileFamily::ConstantCurvature { k: 1.0 },
    )?;
    let mu_ball = radial_mu1(&ball_profile, p.steps)?;
    let is_ball = is_geodesic_ball(&domain, p.ball_tol)?;
    let mut outputs = vec![ScenarioOutput::Scalars(scalars.clone())];
    let mut checks = Vec::new();

    let (report, primary) = if domain.n() == 2 {
        let cfg = GalerkinConfig::new(p.degree, p.quad_points)?;
        let mu_domain = cap_mu1(&domain, &cfg)?;
        let report = star_shaped_report(&scalars, 2, &mu_ball, Some(&mu_domain));
        let bound = report.lower.unwrap();
        let tol = VERDICT_REL_TOL * mu_domain.mu1.abs().max(1.0);
        checks.push(Check::bounded("bound_below_mu1", Some(bound), mu_domain.mu1, None, tol));
        if is_ball {
            checks.push(Check::bounded(
                "equality_at_geodesic_ball",
                None,
                (mu_domain.mu1 - bound).abs(),
                Some(p.equality_tol),
                0.0,
            ));
        }
        outputs.push(ScenarioOutput::Eigenvalue(mu_domain));
        (report, bound)
    } else {
        let report = star_shaped_report(&scalars, domain.n(), &mu_ball, None);
        let bound = report.lower.unwrap();
        let tol = VERDICT_REL_TOL * mu_ball.mu1.abs().max(1.0);
        checks.push(Check::bounded("bound_positive", Some(0.0), bound, None, 0.0));
        checks.push(Check::bounded("bound_below_ball", None, bound, Some(mu_ball.mu1), tol));
        if is_ball {
            checks.push(Check::bounded(
                "reduces_to_ball_eigenvalue",
                None,
                (bound - mu_ball.mu1).abs(),
                Some(p.ball_reduction_tol),
                0.0,
            ));
        }
        (report, bound)
    };
    outputs.push(ScenarioOutput::Bound(report));
    Ok(TaskResult { outputs, checks, primary: Some(primary) })
}

fn run_catalog(p: &CatalogParams) -> Result<TaskResult> {
    let (name, value, echo) = match p {
        CatalogParams::KuttlerSigillito { curve, grid } => {
            let c = curve.to_curve()?;
            let v = kuttler_sigillito_bound(&c, *grid)?;
            (BoundName::KuttlerSigillito, v, serde_json::to_value(curve)?)
        }
        CatalogParams::GarciaMontano { r_min, r_max, a, n } => {
            let v = garcia_montano_bound(*r_min, *r_max, *a, *n)?;
            (
                BoundName::GarciaMontano,
                v,
                serde_json::json!({"r_min": r_min, "r_max": r_max, "a": a, "n": n}),
            )
        }
    };
    // no Euclidean PDE solver is in scope, so these stay unrefereed
    let report = BoundReport {
        bound_name: name,
        lower: Some(value),
        upper: None,
        mu1_reference: None,
        verdict: Verdict::NotComparable,
        margin: None,
        inputs_echo: echo,
    };
    Ok(TaskResult {
        outputs: vec![ScenarioOutput::Bound(report)],
        checks: Vec::new(),
        primary: Some(value),
    })
}

/// Runs one scenario, translating library errors into an `error` status.
pub fn run_scenario(scenario: &Scenario) -> ReportPayload {
    match run_task(&scenario.task) {
        Ok(mut result) => {
            if let Some(expected) = &scenario.expected {
                match result.primary {
                    Some(value) => result.checks.push(Check::bounded(
                        "expected_value",
                        Some(expected.value - expected.tol),
                        value,
                        Some(expected.value + expected.tol),
                        0.0,
                    )),
                    None => result.checks.push(Check {
                        check: "expected_value".into(),
                        lower: None,
                        value: None,
                        upper: None,
                        margin: None,
                        status: CheckStatus::Fail,
                    }),
                }
            }
            let failed = result.checks.iter().any(|c| c.status == CheckStatus::Fail);
            ReportPayload {
                scenario: scenario.clone(),
                outputs: result.outputs,
                checks: result.checks,
                status: if failed { RunStatus::Fail } else { RunStatus::Pass },
                error: None,
            }
        }
        Err(e) => ReportPayload {
            scenario: scenario.clone(),
            outputs: Vec::new(),
            checks: Vec::new(),
            status: RunStatus::Error,
            error: Some(e.to_string()),
        },
    }
}

fn sanitize_name(name: &str) -> String {
    let mut s: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect();
    s.truncate(64);
    s
}

/// JSON-style shortest float rendering, shared by the CSV writers.
pub(crate) fn fmt_opt_f64(v: Option<f64>) -> String {
    match v {
        Some(x) => serde_json::Number::from_f64(x)
            .map(|n| n.to_string())
            .unwrap_or_else(|| "null".into()),
        None => String::new(),
    }
}

fn write_summary_csv(path: &Path, reports: &[RunReport]) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_path(path)
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
    writer
        .write_record(["scenario", "check", "lower", "value", "upper", "margin", "status"])
        .map_err(|e| Error::Config(e.to_string()))?;
    for report in reports {
        let payload = &report.payload;
        if payload.status == RunStatus::Error {
            writer
                .write_record([
                    payload.scenario.name.as_str(),
                    "scenario_error",
                    "",
                    "",
                    "",
                    "",
                    "error",
                ])
                .map_err(|e| Error::Config(e.to_string()))?;
            continue;
        }
        for check in &payload.checks {
            let status = match check.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "fail",
            };
            writer
                .write_record([
                    payload.scenario.name.as_str(),
                    check.check.as_str(),
                    &fmt_opt_f64(check.lower),
                    &fmt_opt_f64(check.value),
                    &fmt_opt_f64(check.upper),
                    &fmt_opt_f64(check.margin),
                    status,
                ])
                .map_err(|e| Error::Config(e.to_string()))?;
        }
    }
    writer.flush()?;
    Ok(())
}

/// Executes every scenario in the config, writes per-scenario JSON reports plus an
/// aggregate `summary.csv`, and returns the process exit code: 0 when everything
/// passed, 1 when any check failed, 2 when any scenario errored.
pub fn run_scenarios(config_path: &Path, out_dir: &Path, parallel: bool) -> Result<i32> {
    let text = fs::read_to_string(config_path)?;
    let config = parse_config(&text)?;
    fs::create_dir_all(out_dir)?;

    let timed: Vec<RunReport> = if parallel {
        config
            .scenarios
            .par_iter()
            .map(|s| {
                let start = Instant::now();
                let payload = run_scenario(s);
                RunReport { payload, wall_time_s: start.elapsed().as_secs_f64() }
            })
            .collect()
    } else {
        config
            .scenarios
            .iter()
            .map(|s| {
                let start = Instant::now();
                let payload = run_scenario(s);
                RunReport { payload, wall_time_s: start.elapsed().as_secs_f64() }
            })
            .collect()
    };

    for (idx, report) in timed.iter().enumerate() {
        let file = out_dir
            .join(format!("{idx:03}_{}.json", sanitize_name(&report.payload.scenario.name)));
        fs::write(&file, serde_json::to_string_pretty(report)? + "\n")?;
    }
    write_summary_csv(&out_dir.join("summary.csv"), &timed)?;

    let any_error = timed.iter().any(|r| r.payload.status == RunStatus::Error);
    let any_fail = timed.iter().any(|r| r.payload.status == RunStatus::Fail);
    Ok(if any_error {
        2
    } else if any_fail {
        1
    } else {
        0
    })
}

/// Loads every report in a directory, sorted by file name for determinism.
pub fn load_reports(report_dir: &Path) -> Result<Vec<(PathBuf, RunReport)>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(report_dir)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    let mut reports = Vec::new();
    for path in paths {
        let text = fs::read_to_string(&path)?;
        let report: RunReport = serde_json::from_str(&text).map_err(|e| {
            Error::Config(format!("unreadable report {}: {e}", path.display()))
        })?;
        reports.push((path, report));
    }
    Ok(reports)
}
