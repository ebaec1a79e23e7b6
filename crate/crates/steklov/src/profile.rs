//! Warping profiles for rotationally invariant metrics `g = dr^2 + sigma^2(r) du^2`.
//!
//! Profiles are closed-form families only, so that `sigma''` (and hence the radial
//! curvature `K(r) = -sigma''/sigma`) is exact rather than differentiated numerically.
//! Every family is normalized with `sigma(0) = 0`, `sigma'(0) = 1` by construction,
//! and the constructor re-checks both along with positivity of `sigma` on `(0, R]`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::spaceform::{cos_k_raw, sin_k_raw, sinc_k_raw};

/// Number of positivity samples taken at construction.
const VALIDATION_SAMPLES: usize = 1000;

/// Below this radius, curvature and comparison ratios switch to series forms
/// (numerator and denominator both vanish linearly at 0).
const SMALL_RADIUS: f64 = 1e-6;

/// Tolerance for the signed curvature-bound scan.
const CURVATURE_TOL: f64 = 1e-10;

/// Closed-form warping function family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ProfileFamily {
    /// `sigma(r) = sin_k(r)`: the constant-curvature-k model.
    ConstantCurvature { k: f64 },
    /// `sigma(r) = sin_k(r) + eps r^3`. The cubic perturbation vanishes to second
    /// order at 0, so the normalization survives for every `eps`.
    CubicPerturbed { k: f64, eps: f64 },
}

impl ProfileFamily {
    fn k(&self) -> f64 {
        match *self {
            ProfileFamily::ConstantCurvature { k } => k,
            ProfileFamily::CubicPerturbed { k, .. } => k,
        }
    }

    fn eps(&self) -> f64 {
        match *self {
            ProfileFamily::ConstantCurvature { .. } => 0.0,
            ProfileFamily::CubicPerturbed { eps, .. } => eps,
        }
    }

    fn sigma(&self, r: f64) -> f64 {
        sin_k_raw(self.k(), r) + self.eps() * r * r * r
    }

    fn sigma_prime(&self, r: f64) -> f64 {
        cos_k_raw(self.k(), r) + 3.0 * self.eps() * r * r
    }

    fn sigma_second(&self, r: f64) -> f64 {
        -self.k() * sin_k_raw(self.k(), r) + 6.0 * self.eps() * r
    }

    /// `sigma(r) / r`, stable at `r = 0` where it equals `sigma'(0) = 1`.
    fn sigma_over_r(&self, r: f64) -> f64 {
        sinc_k_raw(self.k(), r) + self.eps() * r * r
    }

    /// `-sigma''(r) / sigma(r)` with the common linear factor divided out;
    /// exact at `r = 0` where it equals `k - 6 eps`.
    fn curvature_ratio_form(&self, r: f64) -> f64 {
        let k = self.k();
        match *self {
            ProfileFamily::ConstantCurvature { .. } => k,
            ProfileFamily::CubicPerturbed { eps, .. } => {
                (k * sinc_k_raw(k, r) - 6.0 * eps) / (sinc_k_raw(k, r) + eps * r * r)
            }
        }
    }
}

/// A validated rotationally invariant metric on the ball of radius `R` in dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialProfile {
    n: u32,
    radius: f64,
    #[serde(flatten)]
    family: ProfileFamily,
}

impl RadialProfile {
    pub fn new(n: u32, radius: f64, family: ProfileFamily) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidProfile(format!("dimension must be >= 2, got {n}")));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidProfile(format!("radius must be positive, got {radius}")));
        }
        let k = family.k();
        let eps = family.eps();
        if !k.is_finite() || !eps.is_finite() {
            return Err(Error::InvalidProfile(format!(
                "family parameters must be finite, got k={k}, eps={eps}"
            )));
        }
        if k > 0.0 {
            let limit = PI / k.sqrt();
            if radius > limit * (1.0 + 1e-12) {
                return Err(Error::InvalidProfile(format!(
                    "radius {radius} exceeds pi/sqrt(k) = {limit}"
                )));
            }
        }
        check_normalization(family.sigma(0.0), family.sigma_prime(0.0))?;
        for i in 1..=VALIDATION_SAMPLES {
            let r = radius * i as f64 / VALIDATION_SAMPLES as f64;
            let s = family.sigma(r);
            if !(s > 0.0) {
                return Err(Error::InvalidProfile(format!(
                    "sigma({r}) = {s} is not positive"
                )));
            }
        }
        Ok(Self { n, radius, family })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn family(&self) -> ProfileFamily {
        self.family
    }

    /// `sigma(r)`. Valid for `r` in `[0, R]`.
    pub fn sigma(&self, r: f64) -> f64 {
        self.family.sigma(r)
    }

    pub fn sigma_prime(&self, r: f64) -> f64 {
        self.family.sigma_prime(r)
    }

    pub fn sigma_second(&self, r: f64) -> f64 {
        self.family.sigma_second(r)
    }
}

fn check_normalization(sigma0: f64, dsigma0: f64) -> Result<()> {
    if sigma0 != 0.0 {
        return Err(Error::InvalidProfile(format!("sigma(0) = {sigma0}, expected 0")));
    }
    if (dsigma0 - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidProfile(format!(
            "sigma'(0) = {dsigma0}, expected 1 (profile is not arclength-normalized)"
        )));
    }
    Ok(())
}

/// Radial sectional curvature `K(r) = -sigma''(r) / sigma(r)`.
///
/// Below `r = 1e-6` the family's ratio form is used; numerator and denominator
/// both vanish linearly there.
pub fn radial_curvature(p: &RadialProfile, r: f64) -> Result<f64> {
    if !(r > 0.0) || r > p.radius() * (1.0 + 1e-12) {
        return Err(Error::Domain {
            op: "radial_curvature",
            msg: format!("radius {r} outside (0, {}]", p.radius()),
        });
    }
    if r < SMALL_RADIUS {
        Ok(p.family.curvature_ratio_form(r))
    } else {
        Ok(-p.sigma_second(r) / p.sigma(r))
    }
}

/// Which side of a curvature (or eigenvalue) comparison is being asserted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSide {
    /// `K(r) >= k` everywhere.
    AtLeast,
    /// `K(r) <= k` everywhere.
    AtMost,
}

/// Outcome of scanning `K(r)` against a constant bound on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureBoundCheck {
    /// The constant being compared against.
    pub bound: f64,
    pub side: BoundSide,
    pub holds: bool,
    /// Minimum of the side-signed excess `K(r) - bound` over the grid.
    pub worst_margin: f64,
    /// Grid point attaining the worst margin.
    pub worst_r: f64,
}

/// Scans `radial_curvature` on a uniform grid of `samples` points in `(0, R]`.
pub fn check_curvature_bound(
    p: &RadialProfile,
    bound: f64,
    side: BoundSide,
    samples: usize,
) -> Result<CurvatureBoundCheck> {
    if samples < 100 {
        return Err(Error::InvalidInput(format!(
            "curvature scan needs at least 100 samples, got {samples}"
        )));
    }
    let mut worst_margin = f64::INFINITY;
    let mut worst_r = p.radius();
    for i in 1..=samples {
        let r = p.radius() * i as f64 / samples as f64;
        let curv = radial_curvature(p, r)?;
        let signed = match side {
            BoundSide::AtLeast => curv - bound,
            BoundSide::AtMost => bound - curv,
        };
        if signed < worst_margin {
            worst_margin = signed;
            worst_r = r;
        }
    }
    Ok(CurvatureBoundCheck {
        bound,
        side,
        holds: worst_margin >= -CURVATURE_TOL,
        worst_margin,
        worst_r,
    })
}

/// Grid verification of the Sturm comparison between `sigma` and `sin_k`.
///
/// With `K >= k`: `sigma <= sin_k`, the ratio `sigma/sin_k` is non-increasing, and
/// it tends to 1 at the origin. With `K <= k` the first two statements mirror.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SturmComparisonReport {
    /// Max side-signed excess of `sigma` over `sin_k` (positive means violated).
    pub max_ratio_violation: f64,
    /// Max side-signed forward difference of `r -> sigma/sin_k` (positive means
    /// the required monotonicity fails somewhere).
    pub ratio_monotone_violation: f64,
    /// `sigma/sin_k` evaluated at `r = 1e-4`; must be close to 1.
    pub limit_at_zero: f64,
}

/// `sigma(r) / sin_k(r)` through the shared linear factor, stable near 0.
fn sigma_over_sin_k(p: &RadialProfile, k: f64, r: f64) -> f64 {
    p.family.sigma_over_r(r) / sinc_k_raw(k, r)
}

/// Verifies the comparison properties of `sigma` against `sin_k` on a uniform grid.
///
/// Precondition: the matching curvature bound (`K >= k` for `AtLeast`, `K <= k`
/// for `AtMost`) holds, and `R <= pi/sqrt(k)` when `k > 0`.
pub fn sturm_comparison_report(
    p: &RadialProfile,
    k: f64,
    side: BoundSide,
    samples: usize,
) -> Result<SturmComparisonReport> {
    if k > 0.0 {
        let limit = PI / k.sqrt();
        if p.radius() > limit * (1.0 + 1e-12) {
            return Err(Error::Precondition(format!(
                "comparison needs R <= pi/sqrt(k) = {limit}, got R = {}",
                p.radius()
            )));
        }
    }
    let check = check_curvature_bound(p, k, side, samples)?;
    if !check.holds {
        return Err(Error::Precondition(format!(
            "curvature bound {:?} {k} fails: margin {} at r = {}",
            side, check.worst_margin, check.worst_r
        )));
    }
    let sign = match side {
        BoundSide::AtLeast => 1.0,
        BoundSide::AtMost => -1.0,
    };
    let mut max_excess = f64::NEG_INFINITY;
    let mut max_monotone = f64::NEG_INFINITY;
    let mut prev_ratio = None;
    for i in 1..=samples {
        let r = p.radius() * i as f64 / samples as f64;
        max_excess = max_excess.max(sign * (p.sigma(r) - sin_k_raw(k, r)));
        let ratio = sigma_over_sin_k(p, k, r);
        if let Some(prev) = prev_ratio {
            max_monotone = max_monotone.max(sign * (ratio - prev));
        }
        prev_ratio = Some(ratio);
    }
    Ok(SturmComparisonReport {
        max_ratio_violation: max_excess,
        ratio_monotone_violation: max_monotone,
        limit_at_zero: sigma_over_sin_k(p, k, 1e-4),
    })
}
