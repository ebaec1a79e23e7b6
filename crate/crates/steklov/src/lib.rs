//! Numerical toolkit for the first non-zero Steklov eigenvalue on rotationally
//! invariant balls and star-shaped domains in the round sphere.
//!
//! The library computes eigenvalues two independent ways — a radial shooting solve
//! for warped-product metrics ([`radial`]) and a conformal Rayleigh-Ritz solve for
//! star-shaped domains in the 2-sphere ([`galerkin`]) — and evaluates the classical
//! comparison bounds relating them ([`bounds`]): the spherical star-shaped lower
//! bound, the two-sided radial-curvature sandwich, and the Euclidean
//! Kuttler-Sigillito and Garcia-Montano bounds. The [`harness`] module wires these
//! into config-driven verification scenarios with machine-readable reports; the
//! `steklov` binary exposes them on the command line.
//!
//! All computation is pure and deterministic: fixed-step integrators, fixed grids,
//! dense in-module linear algebra. Everything is safe to call concurrently.

// validation predicates use `!(x > 0.0)` so that NaN fails them too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod galerkin;
pub mod harness;
pub mod profile;
pub mod radial;
pub mod spaceform;
pub mod star;

pub use bounds::{
    curvature_sandwich_report, garcia_montano_bound, gradient_penalty_factor,
    kuttler_sigillito_bound, star_shaped_lower_bound, star_shaped_report, BoundName, BoundReport,
    PlanarCurve, Verdict,
};
pub use error::{Error, Result};
pub use galerkin::{assemble_pencil, cap_mu1, solve_sym_geneig, GalerkinConfig, SymmetricPencil};
pub use profile::{
    check_curvature_bound, radial_curvature, sturm_comparison_report, BoundSide,
    CurvatureBoundCheck, ProfileFamily, RadialProfile, SturmComparisonReport,
};
pub use radial::{ball_mu1_sphere, radial_mu1, SolveMethod, SteklovResult, DEFAULT_STEPS};
pub use spaceform::{
    cos_k, sin_k, sine_scaling_gap, sine_scaling_sweep, SineSweepSummary, SpaceFormParam,
};
pub use star::{domain_scalars, is_geodesic_ball, DomainScalars, Mode, StarDomain};
