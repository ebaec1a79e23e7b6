//! Star-shaped domains in the round sphere, given as radial graphs `r < R(u)` in
//! geodesic polar coordinates about a center point.
//!
//! Supported shapes are truncated cosine series: full Fourier families on the
//! direction circle for `n = 2`, and zonal families `R(theta)` on the direction
//! sphere for `n = 3` (which keeps the gradient norm closed-form). The radial-graph
//! form makes the domain star-shaped by construction; validation enforces
//! `0 < R <= pi/2`, the range on which the sine comparison estimates behind the
//! spherical lower bound apply.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// Default angular scan resolution.
pub const DEFAULT_SCAN_GRID: usize = 10_000;

/// One cosine mode of a boundary graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub eps: f64,
    pub m: u32,
    #[serde(default)]
    pub phase: f64,
}

/// A validated star-shaped domain `R(u) = R0 + sum_j eps_j cos(m_j u + phase_j)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarDomain {
    n: u32,
    r0: f64,
    modes: Vec<Mode>,
    scan_grid: usize,
}

/// Geometric scalars of a star-shaped domain entering the spherical lower bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainScalars {
    /// Minimum boundary distance from the center.
    pub r_min: f64,
    /// Maximum boundary distance from the center.
    pub r_max: f64,
    /// `max |grad R|^2 / sin^2(R)` over the direction sphere.
    pub a: f64,
    /// `sqrt(1 + a)`; secant of the worst angle between the radial direction and
    /// the outward normal.
    pub sec_alpha: f64,
    /// `integral sec(theta) sin^(n-1)(R) du` over the direction sphere.
    pub boundary_area: f64,
}

impl StarDomain {
    pub fn new(n: u32, r0: f64, modes: Vec<Mode>, scan_grid: usize) -> Result<Self> {
        if n != 2 && n != 3 {
            return Err(Error::InvalidDomain(format!(
                "only dimensions 2 and 3 are supported, got {n}"
            )));
        }
        if scan_grid < 1000 {
            return Err(Error::InvalidDomain(format!(
                "scan grid must be at least 1000, got {scan_grid}"
            )));
        }
        if !r0.is_finite() || modes.iter().any(|m| !m.eps.is_finite() || !m.phase.is_finite()) {
            return Err(Error::InvalidDomain("shape parameters must be finite".into()));
        }
        if n == 3 {
            if let Some(mode) = modes.iter().find(|m| m.phase != 0.0) {
                return Err(Error::InvalidDomain(format!(
                    "zonal families take no phase, got {} on mode m={}",
                    mode.phase, mode.m
                )));
            }
        }
        let d = Self { n, r0, modes, scan_grid };
        for (u, _) in d.angle_grid() {
            let r = d.radius_at(u);
            if !(r > 0.0) || r > FRAC_PI_2 * (1.0 + 1e-12) {
                return Err(Error::InvalidDomain(format!(
                    "R({u}) = {r} outside (0, pi/2]"
                )));
            }
        }
        Ok(d)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn scan_grid(&self) -> usize {
        self.scan_grid
    }

    /// Boundary distance in direction `u` (polar angle for `n = 3`).
    pub fn radius_at(&self, u: f64) -> f64 {
        let mut r = self.r0;
        for mode in &self.modes {
            r += mode.eps * (mode.m as f64 * u + mode.phase).cos();
        }
        r
    }

    /// First angular derivative of the boundary graph.
    pub fn radius_deriv(&self, u: f64) -> f64 {
        let mut d = 0.0;
        for mode in &self.modes {
            d -= mode.eps * mode.m as f64 * (mode.m as f64 * u + mode.phase).sin();
        }
        d
    }

    /// Scan grid: periodic `[0, 2pi)` for `n = 2`, inclusive `[0, pi]` with
    /// trapezoid weights for `n = 3`.
    fn angle_grid(&self) -> Vec<(f64, f64)> {
        let m = self.scan_grid;
        match self.n {
            2 => (0..m)
                .map(|i| (2.0 * PI * i as f64 / m as f64, 2.0 * PI / m as f64))
                .collect(),
            _ => (0..=m)
                .map(|i| {
                    let w = if i == 0 || i == m { 0.5 } else { 1.0 };
                    (PI * i as f64 / m as f64, w * PI / m as f64)
                })
                .collect(),
        }
    }
}

/// Parabolic vertex through three consecutive samples around an interior extremum.
/// Grid extrema of smooth functions are only O(h^2) accurate; the vertex restores
/// O(h^4), which the rotation-invariance of the scalars relies on.
fn refine_extremum(values: &[f64], idx: usize, periodic: bool, maximize: bool) -> f64 {
    let n = values.len();
    let (fm, f0, fp) = if periodic {
        (values[(idx + n - 1) % n], values[idx], values[(idx + 1) % n])
    } else {
        if idx == 0 || idx == n - 1 {
            return values[idx];
        }
        (values[idx - 1], values[idx], values[idx + 1])
    };
    let denom = fm - 2.0 * f0 + fp;
    let concave_ok = if maximize { denom < 0.0 } else { denom > 0.0 };
    if !concave_ok || denom.abs() < 1e-300 {
        return f0;
    }
    f0 - (fp - fm) * (fp - fm) / (8.0 * denom)
}

/// Scans the boundary graph for `R_min`, `R_max`, the gradient scalar `a`,
/// `sec(alpha) = sqrt(1 + a)`, and the boundary area.
pub fn domain_scalars(d: &StarDomain) -> Result<DomainScalars> {
    let grid = d.angle_grid();
    let periodic = d.n() == 2;
    let mut radii = Vec::with_capacity(grid.len());
    let mut slopes = Vec::with_capacity(grid.len());
    let mut area = 0.0;
    for &(u, w) in &grid {
        let r = d.radius_at(u);
        let dr = d.radius_deriv(u);
        let g = dr * dr / (r.sin() * r.sin());
        radii.push(r);
        slopes.push(g);
        let sec_theta = (1.0 + g).sqrt();
        let sin_pow = r.sin().powi(d.n() as i32 - 1);
        // zonal measure on the direction sphere carries sin(theta); a full
        // revolution in the symmetric direction contributes 2 pi exactly
        let measure = if periodic { 1.0 } else { u.sin() * 2.0 * PI };
        area += w * sec_theta * sin_pow * measure;
    }

    let argmin = (0..radii.len()).min_by(|&i, &j| radii[i].total_cmp(&radii[j])).unwrap();
    let argmax = (0..radii.len()).max_by(|&i, &j| radii[i].total_cmp(&radii[j])).unwrap();
    let arg_a = (0..slopes.len()).max_by(|&i, &j| slopes[i].total_cmp(&slopes[j])).unwrap();

    let r_min = refine_extremum(&radii, argmin, periodic, false);
    let r_max = refine_extremum(&radii, argmax, periodic, true);
    let a = refine_extremum(&slopes, arg_a, periodic, true).max(0.0);

    Ok(DomainScalars {
        r_min,
        r_max,
        a,
        sec_alpha: (1.0 + a).sqrt(),
        boundary_area: area,
    })
}

/// True iff the boundary graph is constant to within `tol`.
pub fn is_geodesic_ball(d: &StarDomain, tol: f64) -> Result<bool> {
    let s = domain_scalars(d)?;
    Ok(s.r_max - s.r_min <= tol)
}
