//! Configuration schema for the verification harness.
//!
//! A config is a single JSON document `{"scenarios": [...]}`. Each scenario names a
//! kind, carries kind-specific params, and optionally an expected value with
//! tolerance and a sweep coordinate (`param`) used by plot-data emission. Solver
//! defaults (radial steps 2000, Galerkin K=16/M=512, scan grids 10^4) live here and
//! are echoed into every report.

use serde::{Deserialize, Serialize};

use crate::bounds::PlanarCurve;
use crate::error::{Error, Result};
use crate::profile::{BoundSide, ProfileFamily, RadialProfile};
use crate::star::{Mode, StarDomain};

fn default_sweep_samples() -> usize {
    100
}
fn default_gap_tol() -> f64 {
    1e-12
}
fn default_scan_samples() -> usize {
    1000
}
fn default_comparison_tol() -> f64 {
    1e-10
}
fn default_limit_tol() -> f64 {
    1e-6
}
fn default_steps() -> usize {
    crate::radial::DEFAULT_STEPS
}
fn default_degree() -> usize {
    16
}
fn default_quad_points() -> usize {
    512
}
fn default_grid() -> usize {
    crate::star::DEFAULT_SCAN_GRID
}
fn default_side() -> BoundSide {
    BoundSide::AtLeast
}
fn default_equality_tol() -> f64 {
    1e-5
}
fn default_ball_reduction_tol() -> f64 {
    1e-7
}
fn default_ball_tol() -> f64 {
    1e-12
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub scenarios: Vec<Scenario>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    #[serde(flatten)]
    pub task: Task,
    #[serde(default)]
    pub expected: Option<Expected>,
    /// Sweep coordinate echoed into reports and used to order plot series.
    #[serde(default)]
    pub param: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub value: f64,
    pub tol: f64,
}

/// Scenario kinds; each maps onto one library operation pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params")]
pub enum Task {
    SineScalingSweep(SineSweepParams),
    SturmComparisonCheck(SturmParams),
    RadialMu1(RadialParams),
    CapMu1(CapParams),
    StarShapedBoundCheck(StarBoundParams),
    CurvatureSandwichCheck(SandwichParams),
    CatalogEval(CatalogParams),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SineSweepParams {
    pub a_min: f64,
    pub a_max: f64,
    #[serde(default = "default_sweep_samples")]
    pub a_samples: usize,
    #[serde(default = "default_sweep_samples")]
    pub x_samples: usize,
    #[serde(default = "default_gap_tol")]
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SturmParams {
    pub profile: ProfileDesc,
    pub k: f64,
    #[serde(default = "default_side")]
    pub side: BoundSide,
    #[serde(default = "default_scan_samples")]
    pub samples: usize,
    #[serde(default = "default_comparison_tol")]
    pub comparison_tol: f64,
    #[serde(default = "default_comparison_tol")]
    pub monotone_tol: f64,
    #[serde(default = "default_limit_tol")]
    pub limit_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadialParams {
    pub profile: ProfileDesc,
    #[serde(default = "default_steps")]
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapParams {
    pub domain: DomainDesc,
    #[serde(rename = "K", default = "default_degree")]
    pub degree: usize,
    #[serde(rename = "M", default = "default_quad_points")]
    pub quad_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarBoundParams {
    pub domain: DomainDesc,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(rename = "K", default = "default_degree")]
    pub degree: usize,
    #[serde(rename = "M", default = "default_quad_points")]
    pub quad_points: usize,
    /// Tolerance for the equality case at geodesic balls.
    #[serde(default = "default_equality_tol")]
    pub equality_tol: f64,
    /// Tolerance for the bound collapsing to the ball eigenvalue when n = 3.
    #[serde(default = "default_ball_reduction_tol")]
    pub ball_reduction_tol: f64,
    /// Constancy tolerance for classifying the domain as a geodesic ball.
    #[serde(default = "default_ball_tol")]
    pub ball_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SandwichParams {
    pub profile: ProfileDesc,
    pub k: f64,
    pub side: BoundSide,
    #[serde(default = "default_steps")]
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "bound", rename_all = "snake_case", deny_unknown_fields)]
pub enum CatalogParams {
    KuttlerSigillito {
        curve: CurveDesc,
        #[serde(default = "default_grid")]
        grid: usize,
    },
    GarciaMontano {
        r_min: f64,
        r_max: f64,
        a: f64,
        n: u32,
    },
}

/// `{"family": "constant"|"cubic", "k": ..., "eps": ..., "n": ..., "R": ...}`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDesc {
    pub family: FamilyKind,
    pub k: f64,
    #[serde(default)]
    pub eps: f64,
    pub n: u32,
    #[serde(rename = "R")]
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Constant,
    Cubic,
}

impl ProfileDesc {
    pub fn to_profile(&self) -> Result<RadialProfile> {
        let family = match self.family {
            FamilyKind::Constant => {
                if self.eps != 0.0 {
                    return Err(Error::Config(format!(
                        "constant-curvature profiles take no eps, got {}",
                        self.eps
                    )));
                }
                ProfileFamily::ConstantCurvature { k: self.k }
            }
            FamilyKind::Cubic => ProfileFamily::CubicPerturbed { k: self.k, eps: self.eps },
        };
        RadialProfile::new(self.n, self.radius, family)
    }
}

/// `{"n": 2|3, "R0": ..., "modes": [{"eps", "m", "phase"}], "grid": ...}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainDesc {
    pub n: u32,
    #[serde(rename = "R0")]
    pub r0: f64,
    #[serde(default)]
    pub modes: Vec<Mode>,
    #[serde(default = "default_grid")]
    pub grid: usize,
}

impl DomainDesc {
    pub fn to_domain(&self) -> Result<StarDomain> {
        StarDomain::new(self.n, self.r0, self.modes.clone(), self.grid)
    }
}

/// Planar boundary graph for the Euclidean catalog evaluators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDesc {
    #[serde(rename = "R0")]
    pub r0: f64,
    #[serde(default)]
    pub modes: Vec<Mode>,
}

impl CurveDesc {
    pub fn to_curve(&self) -> Result<PlanarCurve> {
        PlanarCurve::new(self.r0, self.modes.clone())
    }
}

pub fn parse_config(text: &str) -> Result<Config> {
    serde_json::from_str(text).map_err(|e| {
        Error::Config(format!("malformed config at line {}, column {}: {e}", e.line(), e.column()))
    })
}
