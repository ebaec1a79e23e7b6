//! Closed-form eigenvalue bounds and their verification reports.
//!
//! Everything here is a pure function of precomputed scalars; eigenvalues are passed
//! in explicitly so that reports are reproducible and cacheable. Verdicts use a
//! relative tolerance of `1e-8 * max(1, |mu1|)` since eigenvalues span an order of
//! magnitude across scenarios.

use serde::{Deserialize, Serialize};
use serde_json::json;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::profile::{check_curvature_bound, BoundSide, RadialProfile};
use crate::radial::SteklovResult;
use crate::spaceform::sin_k_raw;
use crate::star::{DomainScalars, Mode};

/// Grid used for the curvature precondition inside sandwich reports.
const CURVATURE_SAMPLES: usize = 1000;

/// Relative slack for bound verdicts.
pub const VERDICT_REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    /// No eigenvalue solver applies to the compared quantity (for example
    /// Euclidean non-ball domains), so the inequality was evaluated but not refereed.
    NotComparable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundName {
    StarShapedSphereLower,
    CurvatureSandwich,
    KuttlerSigillito,
    GarciaMontano,
}

/// Evaluated bound(s) against a computed eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_name: BoundName,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    #[serde(rename = "mu1")]
    pub mu1_reference: Option<SteklovResult>,
    pub verdict: Verdict,
    /// Signed slack, minimum over the sides checked; absent when not comparable.
    pub margin: Option<f64>,
    pub inputs_echo: serde_json::Value,
}

fn verdict_for(margin: f64, mu1: f64) -> Verdict {
    if margin >= -VERDICT_REL_TOL * mu1.abs().max(1.0) {
        Verdict::Holds
    } else {
        Verdict::Violated
    }
}

/// `(2 + a - sqrt(a^2 + 4a)) / 2`, the gradient-penalty factor of the spherical
/// star-shaped bound. Lies in `(0, 1]` for `a >= 0`, equals 1 iff `a = 0`.
pub fn gradient_penalty_factor(a: f64) -> f64 {
    (2.0 + a - (a * a + 4.0 * a).sqrt()) / 2.0
}

/// Lower bound for `mu1` of a star-shaped domain in the round sphere:
///
/// ```text
/// (R_min/R_max) * (2 + a - sqrt(a^2 + 4a))/2 * sin^(n-1)(R_min) /
///     (sec(alpha) sin^(n-1)(R_max)) * mu1(ball(R_min))
/// ```
///
/// `mu1_ball` must be the eigenvalue of the geodesic ball of radius `R_min` in the
/// same dimension. Every factor is at most 1, with equality exactly for geodesic
/// balls, where the bound collapses to `mu1(ball)` itself.
pub fn star_shaped_lower_bound(s: &DomainScalars, n: u32, mu1_ball: &SteklovResult) -> f64 {
    let radial = s.r_min / s.r_max;
    let sine = (s.r_min.sin() / s.r_max.sin()).powi(n as i32 - 1);
    radial * gradient_penalty_factor(s.a) * sine / s.sec_alpha * mu1_ball.mu1
}

/// Report for the spherical star-shaped lower bound. `mu1_domain` is the refereed
/// eigenvalue of the domain when a solver applies (n = 2); without it the report is
/// `NotComparable` and carries the evaluated bound only.
pub fn star_shaped_report(
    s: &DomainScalars,
    n: u32,
    mu1_ball: &SteklovResult,
    mu1_domain: Option<&SteklovResult>,
) -> BoundReport {
    let bound = star_shaped_lower_bound(s, n, mu1_ball);
    let inputs_echo = json!({
        "scalars": s,
        "n": n,
        "mu1_ball": mu1_ball,
        "sec_alpha_identification": "sec(alpha) = sqrt(1 + a)",
    });
    match mu1_domain {
        Some(mu) => {
            let margin = mu.mu1 - bound;
            BoundReport {
                bound_name: BoundName::StarShapedSphereLower,
                lower: Some(bound),
                upper: None,
                verdict: verdict_for(margin, mu.mu1),
                margin: Some(margin),
                mu1_reference: Some(mu.clone()),
                inputs_echo,
            }
        }
        None => BoundReport {
            bound_name: BoundName::StarShapedSphereLower,
            lower: Some(bound),
            upper: None,
            mu1_reference: None,
            verdict: Verdict::NotComparable,
            margin: None,
            inputs_echo,
        },
    }
}

/// Two-sided comparison of `mu1(B_R, g)` against the constant-curvature model.
///
/// With `K >= k` (side `AtLeast`):
/// `mu_can <= mu_g <= (sin_k(R)/sigma(R))^(n+1) mu_can`; with `K <= k` the chain
/// reverses. The curvature hypothesis is re-checked on a grid before reporting.
pub fn curvature_sandwich_report(
    p: &RadialProfile,
    k: f64,
    side: BoundSide,
    mu_g: &SteklovResult,
    mu_can: &SteklovResult,
) -> Result<BoundReport> {
    let check = check_curvature_bound(p, k, side, CURVATURE_SAMPLES)?;
    if !check.holds {
        return Err(Error::Precondition(format!(
            "curvature bound {side:?} {k} fails with margin {} at r = {}",
            check.worst_margin, check.worst_r
        )));
    }
    let radius = p.radius();
    let ratio = (sin_k_raw(k, radius) / p.sigma(radius)).powi(p.n() as i32 + 1);
    let (lower, upper) = match side {
        BoundSide::AtLeast => (mu_can.mu1, ratio * mu_can.mu1),
        BoundSide::AtMost => (ratio * mu_can.mu1, mu_can.mu1),
    };
    let margin = (mu_g.mu1 - lower).min(upper - mu_g.mu1);
    Ok(BoundReport {
        bound_name: BoundName::CurvatureSandwich,
        lower: Some(lower),
        upper: Some(upper),
        verdict: verdict_for(margin, mu_g.mu1),
        margin: Some(margin),
        mu1_reference: Some(mu_g.clone()),
        inputs_echo: json!({
            "profile": p,
            "k": k,
            "side": side,
            "ratio_power": ratio,
            "mu1_model": mu_can,
            "curvature_check": check,
        }),
    })
}

/// A planar star-shaped boundary graph `R(theta) = R0 + sum eps_j cos(m_j theta + phase_j)`
/// for the Euclidean bound evaluators (no hemisphere cap here, only `R > 0`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanarCurve {
    r0: f64,
    modes: Vec<Mode>,
}

impl PlanarCurve {
    pub fn new(r0: f64, modes: Vec<Mode>) -> Result<Self> {
        if !r0.is_finite() || modes.iter().any(|m| !m.eps.is_finite() || !m.phase.is_finite()) {
            return Err(Error::InvalidDomain("curve parameters must be finite".into()));
        }
        let c = Self { r0, modes };
        for i in 0..1000 {
            let theta = 2.0 * PI * i as f64 / 1000.0;
            let r = c.radius_at(theta);
            if !(r > 0.0) {
                return Err(Error::InvalidDomain(format!("R({theta}) = {r} is not positive")));
            }
        }
        Ok(c)
    }

    pub fn radius_at(&self, theta: f64) -> f64 {
        let mut r = self.r0;
        for mode in &self.modes {
            r += mode.eps * (mode.m as f64 * theta + mode.phase).cos();
        }
        r
    }

    pub fn radius_deriv(&self, theta: f64) -> f64 {
        let mut d = 0.0;
        for mode in &self.modes {
            d -= mode.eps * mode.m as f64 * (mode.m as f64 * theta + mode.phase).sin();
        }
        d
    }
}

/// Kuttler-Sigillito lower bound for planar star-shaped domains:
///
/// ```text
/// [1 - 2 / (1 + sqrt(1 + 4 min (R/R')^2))] / max sqrt(R^2 + R'^2)
/// ```
///
/// At grid points where `|R'| <= 1e-14` the ratio `(R/R')^2` is taken as `+inf`;
/// a circle then yields factor 1 and bound `1/R`, the known equality case.
pub fn kuttler_sigillito_bound(curve: &PlanarCurve, grid: usize) -> Result<f64> {
    if grid < 10_000 {
        return Err(Error::InvalidInput(format!(
            "scan grid must be at least 10000, got {grid}"
        )));
    }
    let mut min_ratio = f64::INFINITY;
    let mut max_speed: f64 = 0.0;
    for i in 0..grid {
        let theta = 2.0 * PI * i as f64 / grid as f64;
        let r = curve.radius_at(theta);
        if !(r > 0.0) {
            return Err(Error::InvalidDomain(format!("R({theta}) = {r} is not positive")));
        }
        let dr = curve.radius_deriv(theta);
        if dr.abs() > 1e-14 {
            min_ratio = min_ratio.min((r / dr) * (r / dr));
        }
        max_speed = max_speed.max(r.hypot(dr));
    }
    let factor = 1.0 - 2.0 / (1.0 + (1.0 + 4.0 * min_ratio).sqrt());
    Ok(factor / max_speed)
}

/// Lower bound for Euclidean star-shaped domains in terms of the radial extremes and
/// the normal-angle scalar `a = tan^2(alpha)`:
///
/// ```text
/// R_min^(n-2) / R_max^(n-1) * (2 + a - sqrt(a^2 + 4a)) / (2 sqrt(a + 1))
/// ```
///
/// At a ball (`R_min = R_max`, `a = 0`) this is exactly `1/R`.
pub fn garcia_montano_bound(r_min: f64, r_max: f64, a: f64, n: u32) -> Result<f64> {
    if !(r_min > 0.0) || !(r_max >= r_min) {
        return Err(Error::InvalidInput(format!(
            "need 0 < r_min <= r_max, got {r_min}, {r_max}"
        )));
    }
    if !(a >= 0.0) {
        return Err(Error::InvalidInput(format!("need a >= 0, got {a}")));
    }
    if n < 2 {
        return Err(Error::InvalidInput(format!("dimension must be >= 2, got {n}")));
    }
    // grouped as (r_min/r_max)^(n-2) / r_max so the ball case is exact
    let radial = (r_min / r_max).powi(n as i32 - 2) / r_max;
    let angular = (2.0 + a - (a * a + 4.0 * a).sqrt()) / (2.0 * (a + 1.0).sqrt());
    Ok(radial * angular)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::ProfileFamily;
    use crate::radial::{ball_mu1_sphere, radial_mu1, SolveMethod};
    use crate::star::{domain_scalars, StarDomain, DEFAULT_SCAN_GRID};
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_3;

    fn eigen(mu1: f64) -> SteklovResult {
        SteklovResult { mu1, method: SolveMethod::ClosedForm, step_or_degree: 0, err_estimate: 0.0 }
    }

    #[test]
    fn penalty_factor_range() {
        assert_eq!(gradient_penalty_factor(0.0), 1.0);
        for i in 1..=1000 {
            let a = i as f64 * 0.01;
            let f = gradient_penalty_factor(a);
            assert!(f > 0.0 && f < 1.0, "a={a}: {f}");
        }
    }

    #[test]
    fn star_bound_equality_at_cap() {
        let cap = StarDomain::new(2, FRAC_PI_3, vec![], DEFAULT_SCAN_GRID).unwrap();
        let s = domain_scalars(&cap).unwrap();
        let ball = ball_mu1_sphere(2, s.r_min).unwrap();
        let bound = star_shaped_lower_bound(&s, 2, &ball);
        assert_eq!(bound, ball.mu1);
        assert!((bound - 2.0 / 3.0f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn star_bound_below_ball_value() {
        let d = StarDomain::new(
            2,
            std::f64::consts::FRAC_PI_4,
            vec![Mode { eps: 0.05, m: 2, phase: 0.0 }],
            DEFAULT_SCAN_GRID,
        )
        .unwrap();
        let s = domain_scalars(&d).unwrap();
        let ball = ball_mu1_sphere(2, s.r_min).unwrap();
        let bound = star_shaped_lower_bound(&s, 2, &ball);
        assert!(bound < ball.mu1);
        assert!(bound > 0.0);
    }

    #[test]
    fn star_report_verdicts() {
        let cap = StarDomain::new(2, FRAC_PI_3, vec![], DEFAULT_SCAN_GRID).unwrap();
        let s = domain_scalars(&cap).unwrap();
        let ball = ball_mu1_sphere(2, s.r_min).unwrap();
        let rep = star_shaped_report(&s, 2, &ball, Some(&eigen(ball.mu1)));
        assert_eq!(rep.verdict, Verdict::Holds);
        assert!(rep.margin.unwrap().abs() < 1e-12);

        let rep = star_shaped_report(&s, 2, &ball, Some(&eigen(0.5 * ball.mu1)));
        assert_eq!(rep.verdict, Verdict::Violated);

        let rep = star_shaped_report(&s, 3, &ball, None);
        assert_eq!(rep.verdict, Verdict::NotComparable);
        assert!(rep.margin.is_none());
    }

    #[test]
    fn sandwich_constant_family_is_tight() {
        let p = RadialProfile::new(3, 1.0, ProfileFamily::ConstantCurvature { k: -1.0 }).unwrap();
        let mu = radial_mu1(&p, 2000).unwrap();
        let rep = curvature_sandwich_report(&p, -1.0, BoundSide::AtLeast, &mu, &mu).unwrap();
        assert_eq!(rep.verdict, Verdict::Holds);
        assert!(rep.margin.unwrap().abs() <= 2.0 * mu.err_estimate.max(1e-15));
        assert_eq!(rep.lower.unwrap(), mu.mu1);
        assert!((rep.upper.unwrap() - mu.mu1).abs() < 1e-12);
    }

    #[test]
    fn sandwich_cubic_flat_closed_forms() {
        // n=2, sigma = r - 0.1 r^3, R=1: chain 1 <= 1/0.9 <= (1/0.9)^3
        let p = RadialProfile::new(2, 1.0, ProfileFamily::CubicPerturbed { k: 0.0, eps: -0.1 })
            .unwrap();
        let can =
            RadialProfile::new(2, 1.0, ProfileFamily::ConstantCurvature { k: 0.0 }).unwrap();
        let mu_g = radial_mu1(&p, 2000).unwrap();
        let mu_can = radial_mu1(&can, 2000).unwrap();
        let rep = curvature_sandwich_report(&p, 0.0, BoundSide::AtLeast, &mu_g, &mu_can).unwrap();
        assert_eq!(rep.verdict, Verdict::Holds);
        assert!((mu_g.mu1 - 1.0 / 0.9).abs() < 1e-9);
        assert!((rep.lower.unwrap() - 1.0).abs() < 1e-9);
        assert!((rep.upper.unwrap() - 1.3717421124828535).abs() < 1e-8);

        // reversed chain for the outward perturbation
        let p = RadialProfile::new(3, 1.0, ProfileFamily::CubicPerturbed { k: 0.0, eps: 0.1 })
            .unwrap();
        let can =
            RadialProfile::new(3, 1.0, ProfileFamily::ConstantCurvature { k: 0.0 }).unwrap();
        let mu_g = radial_mu1(&p, 2000).unwrap();
        let mu_can = radial_mu1(&can, 2000).unwrap();
        let rep = curvature_sandwich_report(&p, 0.0, BoundSide::AtMost, &mu_g, &mu_can).unwrap();
        assert_eq!(rep.verdict, Verdict::Holds);
        assert!(rep.margin.unwrap() > 0.0);
    }

    #[test]
    fn sandwich_rejects_wrong_side() {
        let p = RadialProfile::new(2, 1.0, ProfileFamily::CubicPerturbed { k: 0.0, eps: -0.1 })
            .unwrap();
        let mu = eigen(1.0);
        assert!(matches!(
            curvature_sandwich_report(&p, 0.0, BoundSide::AtMost, &mu, &mu),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn kuttler_sigillito_circle() {
        let circle = PlanarCurve::new(1.0, vec![]).unwrap();
        let b = kuttler_sigillito_bound(&circle, 10_000).unwrap();
        assert!((b - 1.0).abs() <= 1e-10);
        let circle = PlanarCurve::new(2.0, vec![]).unwrap();
        let b = kuttler_sigillito_bound(&circle, 10_000).unwrap();
        assert!((b - 0.5).abs() <= 1e-10);
    }

    #[test]
    fn kuttler_sigillito_perturbed_guard() {
        let curve = PlanarCurve::new(1.0, vec![Mode { eps: 0.1, m: 1, phase: 0.0 }]).unwrap();
        let b = kuttler_sigillito_bound(&curve, 10_000).unwrap();
        assert!(b > 0.0);
        assert!(b < 1.0 / 1.1, "bound {b} should sit below 1/R_max");
    }

    #[test]
    fn kuttler_sigillito_validation() {
        let circle = PlanarCurve::new(1.0, vec![]).unwrap();
        assert!(kuttler_sigillito_bound(&circle, 100).is_err());
        assert!(PlanarCurve::new(0.5, vec![Mode { eps: 0.9, m: 1, phase: 0.0 }]).is_err());
    }

    #[test]
    fn garcia_montano_values() {
        assert_eq!(garcia_montano_bound(1.0, 1.0, 0.0, 2).unwrap(), 1.0);
        for n in [2u32, 3, 5] {
            for radius in [0.5, 0.7, 2.0] {
                assert_eq!(garcia_montano_bound(radius, radius, 0.0, n).unwrap(), 1.0 / radius);
            }
        }
        // hand-arithmetic oracle: 0.9/1.21 * (2.25 - sqrt(1.0625)) / (2 sqrt(1.25))
        let got = garcia_montano_bound(0.9, 1.1, 0.25, 3).unwrap();
        assert!((got - 0.4055603556274668).abs() < 1e-15, "{got}");
        assert!(garcia_montano_bound(-1.0, 1.0, 0.0, 2).is_err());
        assert!(garcia_montano_bound(1.0, 0.9, 0.0, 2).is_err());
        assert!(garcia_montano_bound(1.0, 1.0, -0.1, 2).is_err());
        assert!(garcia_montano_bound(1.0, 1.0, 0.0, 1).is_err());
    }

    #[test]
    fn report_serializes_with_stable_field_names() {
        let rep = star_shaped_report(
            &DomainScalars {
                r_min: 1.0,
                r_max: 1.0,
                a: 0.0,
                sec_alpha: 1.0,
                boundary_area: 1.0,
            },
            2,
            &eigen(1.0),
            Some(&eigen(1.0)),
        );
        let v = serde_json::to_value(&rep).unwrap();
        let obj = v.as_object().unwrap();
        for key in ["bound_name", "lower", "upper", "mu1", "verdict", "margin", "inputs_echo"] {
            assert!(obj.contains_key(key), "missing {key}");
        }
        assert_eq!(obj["verdict"], "holds");
    }

    proptest! {
        #[test]
        fn penalty_factor_in_unit_interval(a in 0.0..1e6f64) {
            let f = gradient_penalty_factor(a);
            prop_assert!(f > 0.0 && f <= 1.0);
        }

        #[test]
        fn bounds_monotone_in_gradient_scalar(a1 in 0.0..10.0f64, d in 0.0..10.0f64) {
            let a2 = a1 + d;
            prop_assert!(gradient_penalty_factor(a2) <= gradient_penalty_factor(a1) + 1e-12);
            let g1 = garcia_montano_bound(1.0, 1.0, a1, 3).unwrap();
            let g2 = garcia_montano_bound(1.0, 1.0, a2, 3).unwrap();
            prop_assert!(g2 <= g1 + 1e-12);
        }
    }
}
