//! First Steklov eigenvalue of a rotationally invariant ball by radial shooting.
//!
//! The first non-constant Steklov eigenfunction of `(B_R, dr^2 + sigma^2 du^2)`
//! separates as `psi(r) e(u)` where `psi` solves the mu-free radial equation
//!
//! ```text
//! psi'' + (n-1) (sigma'/sigma) psi' - (n-1) psi / sigma^2 = 0,   psi(0) = 0,
//! ```
//!
//! and the eigenvalue appears only in the boundary condition `psi'(R) = mu1 psi(R)`.
//! So a single initial-value integration determines `mu1 = psi'(R) / psi(R)`; no
//! eigenvalue search is needed.
//!
//! The origin is a regular singular point with indicial roots `1` and `-(n-1)`.
//! Integration starts on the regular branch at `r0 = R * 1e-2 / steps` with
//! `psi = r0`, `psi' = 1` (leading series terms); the discarded corrections are
//! `O(r0^3)` and shrink with the step count, and forward integration damps the
//! singular branch. Classical fixed-step RK4 keeps the run deterministic and makes
//! the fourth-order convergence directly measurable. Each call solves at `steps`
//! and `2 * steps`; the finer value is reported and the difference is the error
//! estimate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{ProfileFamily, RadialProfile};

/// Step count used by harness defaults and convenience wrappers.
pub const DEFAULT_STEPS: usize = 2000;

/// How an eigenvalue was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveMethod {
    RadialShooting,
    CapGalerkin,
    ClosedForm,
}

/// A computed first Steklov eigenvalue with solver metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteklovResult {
    /// First non-zero Steklov eigenvalue (units 1/length).
    pub mu1: f64,
    pub method: SolveMethod,
    /// Requested discretization parameter (radial steps or polynomial degree).
    pub step_or_degree: usize,
    /// Absolute difference between the two finest discretization levels.
    pub err_estimate: f64,
}

/// One RK4 pass over `(0, R]` returning `psi'(R) / psi(R)`.
fn shoot(p: &RadialProfile, steps: usize) -> Result<f64> {
    let radius = p.radius();
    let n1 = (p.n() - 1) as f64;
    let r0 = radius * 1e-2 / steps as f64;
    let h = (radius - r0) / steps as f64;

    let rhs = |r: f64, psi: f64, dpsi: f64| -> (f64, f64) {
        let s = p.sigma(r);
        let ds = p.sigma_prime(r);
        (dpsi, -n1 * (ds / s) * dpsi + n1 * psi / (s * s))
    };

    let mut psi = r0;
    let mut dpsi = 1.0;
    for i in 0..steps {
        let r = r0 + i as f64 * h;
        let (k1a, k1b) = rhs(r, psi, dpsi);
        let (k2a, k2b) = rhs(r + 0.5 * h, psi + 0.5 * h * k1a, dpsi + 0.5 * h * k1b);
        let (k3a, k3b) = rhs(r + 0.5 * h, psi + 0.5 * h * k2a, dpsi + 0.5 * h * k2b);
        let (k4a, k4b) = rhs(r + h, psi + h * k3a, dpsi + h * k3b);
        psi += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
        dpsi += h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
    }

    if !psi.is_finite() || !dpsi.is_finite() {
        return Err(Error::Solver(format!(
            "radial integration blew up (psi = {psi}, psi' = {dpsi})"
        )));
    }
    if psi <= 0.0 {
        return Err(Error::Solver(format!(
            "psi(R) = {psi} is not positive; profile is not admissible at {steps} steps"
        )));
    }
    Ok(dpsi / psi)
}

/// First Steklov eigenvalue of `(B_R, g)` by radial shooting.
///
/// Solves at `steps` and `2 * steps`; reports the finer value with the difference
/// as `err_estimate`. Fails if the estimate exceeds `1e-4 * mu1` (step count too
/// small for the profile).
pub fn radial_mu1(p: &RadialProfile, steps: usize) -> Result<SteklovResult> {
    if steps < 100 {
        return Err(Error::InvalidInput(format!(
            "radial solve needs at least 100 steps, got {steps}"
        )));
    }
    let coarse = shoot(p, steps)?;
    let fine = shoot(p, 2 * steps)?;
    let err_estimate = (fine - coarse).abs();
    if err_estimate > 1e-4 * fine.abs() {
        return Err(Error::Solver(format!(
            "step count {steps} too small: error estimate {err_estimate} exceeds 1e-4 * mu1"
        )));
    }
    Ok(SteklovResult {
        mu1: fine,
        method: SolveMethod::RadialShooting,
        step_or_degree: steps,
        err_estimate,
    })
}

/// Eigenvalue of the geodesic ball of radius `R <= pi/2` in the unit round sphere.
pub fn ball_mu1_sphere(n: u32, radius: f64) -> Result<SteklovResult> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("dimension must be >= 2, got {n}")));
    }
    if !(radius > 0.0) || radius > std::f64::consts::FRAC_PI_2 * (1.0 + 1e-12) {
        return Err(Error::InvalidInput(format!(
            "ball radius must lie in (0, pi/2], got {radius}"
        )));
    }
    let p = RadialProfile::new(n, radius, ProfileFamily::ConstantCurvature { k: 1.0 })?;
    radial_mu1(&p, DEFAULT_STEPS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    fn constant(n: u32, radius: f64, k: f64) -> RadialProfile {
        RadialProfile::new(n, radius, ProfileFamily::ConstantCurvature { k }).unwrap()
    }

    fn cubic(n: u32, radius: f64, k: f64, eps: f64) -> RadialProfile {
        RadialProfile::new(n, radius, ProfileFamily::CubicPerturbed { k, eps }).unwrap()
    }

    #[test]
    fn spherical_ball_dim2_closed_form() {
        let res = radial_mu1(&constant(2, FRAC_PI_4, 1.0), 2000).unwrap();
        assert!((res.mu1 - std::f64::consts::SQRT_2).abs() < 1e-9, "{}", res.mu1);
        assert_eq!(res.method, SolveMethod::RadialShooting);
        assert_eq!(res.step_or_degree, 2000);
    }

    #[test]
    fn euclidean_ball_is_exact() {
        // psi(r) = r solves the equation exactly when sigma = r, so mu1 = 1/R
        let res = radial_mu1(&constant(5, 2.0, 0.0), 2000).unwrap();
        assert!((res.mu1 - 0.5).abs() < 1e-12, "{}", res.mu1);
        for n in 2..=6 {
            for radius in [0.5, 1.0, 2.0] {
                let res = radial_mu1(&constant(n, radius, 0.0), 2000).unwrap();
                assert!(
                    (res.mu1 - 1.0 / radius).abs() <= 1e-9,
                    "n={n} R={radius}: {}",
                    res.mu1
                );
            }
        }
    }

    #[test]
    fn hyperbolic_ball_self_convergence() {
        let p = constant(3, 1.0, -1.0);
        let a = radial_mu1(&p, 2000).unwrap();
        let b = radial_mu1(&p, 4000).unwrap();
        assert!((a.mu1 - b.mu1).abs() <= 1e-8);
        assert!(a.err_estimate <= 1e-8);
    }

    #[test]
    fn escobar_closed_form_dim2() {
        // mu1 = 1/sigma(R) in dimension 2, for every profile family
        for (p, tag) in [
            (constant(2, 1.0, 1.0), "sin"),
            (constant(2, 1.0, 0.0), "flat"),
            (constant(2, 1.0, -1.0), "sinh"),
            (cubic(2, 1.0, 0.0, -0.1), "cubic"),
        ] {
            let res = radial_mu1(&p, 2000).unwrap();
            let exact = 1.0 / p.sigma(1.0);
            assert!((res.mu1 - exact).abs() <= 1e-7, "{tag}: {} vs {exact}", res.mu1);
        }
    }

    #[test]
    fn fourth_order_convergence() {
        // strong coefficient growth near the cut radius keeps truncation error
        // well above roundoff at these step counts
        let p = constant(2, 3.0, 1.0);
        let reference = radial_mu1(&p, 8000).unwrap().mu1;
        let mut errs = Vec::new();
        for steps in [250usize, 500, 1000, 2000] {
            errs.push((radial_mu1(&p, steps).unwrap().mu1 - reference).abs());
        }
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!((3.5..=4.5).contains(&order), "errs {errs:?}, order {order}");
        }
    }

    #[test]
    fn scale_covariance_flat() {
        // mu1(R) * R is constant for sigma = r
        let base = radial_mu1(&constant(3, 1.0, 0.0), 2000).unwrap().mu1;
        for radius in [0.5, 2.0] {
            let mu = radial_mu1(&constant(3, radius, 0.0), 2000).unwrap().mu1;
            assert!((mu * radius - base).abs() <= 1e-8);
        }
    }

    #[test]
    fn negative_perturbation_raises_mu1() {
        for n in [2, 3, 4] {
            let res = radial_mu1(&cubic(n, 1.0, 0.0, -0.1), 2000).unwrap();
            assert!(res.mu1 >= 1.0, "n={n}: {}", res.mu1);
        }
    }

    #[test]
    fn ball_mu1_sphere_values() {
        let res = ball_mu1_sphere(2, FRAC_PI_3).unwrap();
        assert!((res.mu1 - 2.0 / 3.0f64.sqrt()).abs() < 1e-9);
        let res = ball_mu1_sphere(2, FRAC_PI_2).unwrap();
        assert!((res.mu1 - 1.0).abs() < 1e-9);
        let res = ball_mu1_sphere(4, 0.7).unwrap();
        assert!(res.err_estimate <= 1e-8);
        assert!(res.mu1 > 0.0);
    }

    #[test]
    fn input_validation() {
        let p = constant(2, 1.0, 0.0);
        assert!(radial_mu1(&p, 99).is_err());
        assert!(ball_mu1_sphere(1, 0.5).is_err());
        assert!(ball_mu1_sphere(2, 2.0).is_err());
        assert!(ball_mu1_sphere(2, 0.0).is_err());
    }
}
