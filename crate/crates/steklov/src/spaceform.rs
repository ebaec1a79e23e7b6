//! Space-form comparison functions.
//!
//! `sin_k` is the solution of `y'' + k y = 0`, `y(0) = 0`, `y'(0) = 1`: the warping
//! function of the simply connected space form with constant sectional curvature `k`.
//! `cos_k` is its derivative. Both switch to a short Taylor series when `|k| r^2` is
//! tiny, because the `sqrt(k)` in the closed forms cancels catastrophically as `k -> 0`.
//!
//! `sine_scaling_gap` measures `sin(a x) - a sin(x)` on `[0, pi/2]`, which is
//! nonnegative for `a <= 1` and nonpositive for `a >= 1`, with equality exactly at
//! `a = 0`, `a = 1`, or `x = 0`. The signed gap (rather than a boolean) lets callers
//! report margins.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Threshold on `|k| r^2` below which the series branch is used.
const SERIES_CUTOFF: f64 = 1e-8;

/// Relative slack applied to the `r <= pi / sqrt(k)` domain check.
const RADIUS_SLACK: f64 = 1e-12;

/// Sectional curvature of a comparison space form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceFormParam {
    k: f64,
}

impl SpaceFormParam {
    pub fn new(k: f64) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::Domain {
                op: "SpaceFormParam::new",
                msg: format!("curvature must be finite, got {k}"),
            });
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> f64 {
        self.k
    }
}

fn check_radius(op: &'static str, k: f64, r: f64) -> Result<()> {
    if !(r >= 0.0) {
        return Err(Error::Domain {
            op,
            msg: format!("radius must be nonnegative, got {r}"),
        });
    }
    if k > 0.0 {
        let limit = PI / k.sqrt();
        if r > limit * (1.0 + RADIUS_SLACK) {
            return Err(Error::Domain {
                op,
                msg: format!("radius {r} exceeds pi/sqrt(k) = {limit} for k = {k}"),
            });
        }
    }
    Ok(())
}

/// `sin_k(r)`: `r` for `k = 0`, `sin(sqrt(k) r)/sqrt(k)` for `k > 0`,
/// `sinh(sqrt(-k) r)/sqrt(-k)` for `k < 0`.
pub fn sin_k(k: SpaceFormParam, r: f64) -> Result<f64> {
    check_radius("sin_k", k.k, r)?;
    Ok(sin_k_raw(k.k, r))
}

/// `cos_k(r) = d/dr sin_k(r)`; satisfies `cos_k' = -k sin_k`.
pub fn cos_k(k: SpaceFormParam, r: f64) -> Result<f64> {
    check_radius("cos_k", k.k, r)?;
    Ok(cos_k_raw(k.k, r))
}

/// Unchecked `sin_k` for call sites that validated their arguments up front.
pub(crate) fn sin_k_raw(k: f64, r: f64) -> f64 {
    let kr2 = k * r * r;
    if kr2.abs() < SERIES_CUTOFF {
        // r (1 - kr^2/6 (1 - kr^2/20 (1 - kr^2/42)))
        r * (1.0 - kr2 / 6.0 * (1.0 - kr2 / 20.0 * (1.0 - kr2 / 42.0)))
    } else if k > 0.0 {
        let s = k.sqrt();
        (s * r).sin() / s
    } else {
        let s = (-k).sqrt();
        (s * r).sinh() / s
    }
}

pub(crate) fn cos_k_raw(k: f64, r: f64) -> f64 {
    let kr2 = k * r * r;
    if kr2.abs() < SERIES_CUTOFF {
        1.0 - kr2 / 2.0 * (1.0 - kr2 / 12.0 * (1.0 - kr2 / 30.0))
    } else if k > 0.0 {
        (k.sqrt() * r).cos()
    } else {
        ((-k).sqrt() * r).cosh()
    }
}

/// `sin_k(r) / r`, stable down to `r = 0` where it equals 1.
pub(crate) fn sinc_k_raw(k: f64, r: f64) -> f64 {
    let kr2 = k * r * r;
    if kr2.abs() < SERIES_CUTOFF {
        1.0 - kr2 / 6.0 * (1.0 - kr2 / 20.0 * (1.0 - kr2 / 42.0))
    } else {
        sin_k_raw(k, r) / r
    }
}

/// Signed gap `sin(a x) - a sin(x)` for `a >= 0`, `x` in `[0, pi/2]`.
///
/// Nonnegative for `0 <= a <= 1`, nonpositive for `a >= 1`, zero exactly when
/// `a` is 0 or 1 or `x` is 0.
pub fn sine_scaling_gap(a: f64, x: f64) -> Result<f64> {
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::Domain {
            op: "sine_scaling_gap",
            msg: format!("scale must satisfy a >= 0, got {a}"),
        });
    }
    if !(x >= 0.0) || x > FRAC_PI_2 * (1.0 + RADIUS_SLACK) {
        return Err(Error::Domain {
            op: "sine_scaling_gap",
            msg: format!("argument must lie in [0, pi/2], got {x}"),
        });
    }
    Ok((a * x).sin() - a * x.sin())
}

/// Grid sweep of [`sine_scaling_gap`] over `a` in `[a_min, a_max]` and `x` in `[0, pi/2]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SineSweepSummary {
    /// Number of grid points evaluated.
    pub points: usize,
    /// Minimum gap over points with `a <= 1` (positive families); `+inf` if none sampled.
    pub min_gap_scale_le_one: f64,
    /// Maximum gap over points with `a >= 1`; `-inf` if none sampled.
    pub max_gap_scale_ge_one: f64,
    /// Exact zeros of the gap away from `a = 0`, `a = 1`, and `x = 0`.
    pub off_line_equalities: usize,
}

/// Sweeps the scaling-gap sign contract on an inclusive `(a_samples+1) x (x_samples+1)` grid.
pub fn sine_scaling_sweep(
    a_min: f64,
    a_max: f64,
    a_samples: usize,
    x_samples: usize,
) -> Result<SineSweepSummary> {
    if !(a_min >= 0.0) || !(a_max >= a_min) {
        return Err(Error::InvalidInput(format!(
            "need 0 <= a_min <= a_max, got [{a_min}, {a_max}]"
        )));
    }
    if a_samples == 0 || x_samples == 0 {
        return Err(Error::InvalidInput("sweep needs at least one interval per axis".into()));
    }
    let mut min_le = f64::INFINITY;
    let mut max_ge = f64::NEG_INFINITY;
    let mut off_line = 0usize;
    let mut points = 0usize;
    for i in 0..=a_samples {
        let a = a_min + (a_max - a_min) * (i as f64 / a_samples as f64);
        for j in 0..=x_samples {
            let x = (j as f64 / x_samples as f64) * FRAC_PI_2;
            let gap = sine_scaling_gap(a, x)?;
            points += 1;
            if a <= 1.0 {
                min_le = min_le.min(gap);
            }
            if a >= 1.0 {
                max_ge = max_ge.max(gap);
            }
            if gap == 0.0 && a != 0.0 && a != 1.0 && x != 0.0 {
                off_line += 1;
            }
        }
    }
    Ok(SineSweepSummary {
        points,
        min_gap_scale_le_one: min_le,
        max_gap_scale_ge_one: max_ge,
        off_line_equalities: off_line,
    })
}
