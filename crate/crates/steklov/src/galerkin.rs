//! First Steklov eigenvalue of a star-shaped domain in the 2-sphere by conformal
//! reduction and Rayleigh-Ritz over harmonic polynomials.
//!
//! Stereographic projection maps the domain to a plane region bounded by
//! `z(phi) = tan(R(phi)/2) e^{i phi}`; the round metric pulls back conformally with
//! factor `lambda(z) = 2 / (1 + |z|^2)`. In two dimensions the Dirichlet energy is a
//! conformal invariant and harmonicity is preserved, so the sphere problem becomes a
//! planar Steklov problem whose boundary measure carries the weight `lambda`:
//!
//! ```text
//! mu1 = inf  integral |grad u|^2 dA  /  integral u^2 lambda ds .
//! ```
//!
//! Over the trial space `{1, Re z^j, Im z^j : j <= K}` this is a symmetric pencil
//! `A c = mu B c`. Since the trial functions are harmonic, the energy matrix is
//! assembled purely on the boundary, `A_pq = cint phi_p d(phi_q)/dn ds`, then
//! symmetrized; `B` is the weighted boundary mass matrix. Both use the periodic
//! trapezoid rule, which is spectrally accurate here. The constant stays in the
//! basis and its zero eigenvalue is discarded afterwards.
//!
//! The pencil is tiny (at most 81 x 81), so the eigensolver is an in-module
//! Cholesky reduction followed by cyclic Jacobi: deterministic and dependency-free.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::radial::{SolveMethod, SteklovResult};
use crate::star::StarDomain;

/// Largest admissible polynomial degree (conditioning guard: with the domain inside
/// the hemisphere, `|z| <= 1` and monomial Gram matrices stay tractable).
pub const MAX_DEGREE: usize = 40;

/// Trial-space degree and boundary quadrature size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GalerkinConfig {
    degree: usize,
    quad_points: usize,
}

impl GalerkinConfig {
    pub fn new(degree: usize, quad_points: usize) -> Result<Self> {
        if degree < 4 {
            return Err(Error::InvalidInput(format!("degree must be >= 4, got {degree}")));
        }
        if degree > MAX_DEGREE {
            return Err(Error::InvalidInput(format!(
                "degree must be <= {MAX_DEGREE}, got {degree}"
            )));
        }
        if quad_points < 16 * degree {
            return Err(Error::InvalidInput(format!(
                "need at least 16 * degree = {} quadrature nodes, got {quad_points}",
                16 * degree
            )));
        }
        Ok(Self { degree, quad_points })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn quad_points(&self) -> usize {
        self.quad_points
    }
}

/// Symmetric generalized eigenproblem `A c = mu B c` with `A` symmetric PSD and
/// `B` symmetric positive definite. Row-major dense storage.
#[derive(Debug, Clone)]
pub struct SymmetricPencil {
    a: Vec<f64>,
    b: Vec<f64>,
    dim: usize,
}

impl SymmetricPencil {
    /// Builds a pencil from raw (possibly slightly asymmetric) assemblies. Rejects
    /// asymmetry above `1e-10`, then symmetrizes both matrices exactly.
    pub fn new(mut a: Vec<f64>, mut b: Vec<f64>, dim: usize) -> Result<Self> {
        if a.len() != dim * dim || b.len() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "pencil storage must be {dim}x{dim}"
            )));
        }
        for (name, m) in [("A", &a), ("B", &b)] {
            let mut defect: f64 = 0.0;
            for p in 0..dim {
                for q in (p + 1)..dim {
                    defect = defect.max((m[p * dim + q] - m[q * dim + p]).abs());
                }
            }
            if defect > 1e-10 {
                return Err(Error::Assembly(format!(
                    "{name} asymmetry {defect} exceeds 1e-10 (quadrature too coarse?)"
                )));
            }
        }
        for m in [&mut a, &mut b] {
            for p in 0..dim {
                for q in (p + 1)..dim {
                    let s = 0.5 * (m[p * dim + q] + m[q * dim + p]);
                    m[p * dim + q] = s;
                    m[q * dim + p] = s;
                }
            }
        }
        Ok(Self { a, b, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn a(&self, p: usize, q: usize) -> f64 {
        self.a[p * self.dim + q]
    }

    pub fn b(&self, p: usize, q: usize) -> f64 {
        self.b[p * self.dim + q]
    }
}

/// Lower Cholesky factor of a dense SPD matrix.
fn cholesky(m: &[f64], dim: usize) -> Result<Vec<f64>> {
    let mut l = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in 0..=i {
            let mut s = m[i * dim + j];
            for k in 0..j {
                s -= l[i * dim + k] * l[j * dim + k];
            }
            if i == j {
                if !(s > 0.0) {
                    return Err(Error::NotSpd(format!("pivot {s} at index {i}")));
                }
                l[i * dim + i] = s.sqrt();
            } else {
                l[i * dim + j] = s / l[j * dim + j];
            }
        }
    }
    Ok(l)
}

/// Solves `L x = rhs` in place for lower-triangular `L`.
fn forward_solve(l: &[f64], dim: usize, rhs: &mut [f64]) {
    for i in 0..dim {
        let mut s = rhs[i];
        for k in 0..i {
            s -= l[i * dim + k] * rhs[k];
        }
        rhs[i] = s / l[i * dim + i];
    }
}

/// Cyclic Jacobi diagonalization of a symmetric matrix; returns eigenvalues ascending.
fn jacobi_eigenvalues(mut c: Vec<f64>, dim: usize) -> Result<Vec<f64>> {
    const OFF_TOL: f64 = 1e-12;
    const MAX_SWEEPS: usize = 100;
    let off_norm = |c: &[f64]| -> f64 {
        let mut s = 0.0;
        for p in 0..dim {
            for q in 0..dim {
                if p != q {
                    s += c[p * dim + q] * c[p * dim + q];
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    while off_norm(&c) > OFF_TOL {
        sweeps += 1;
        if sweeps > MAX_SWEEPS {
            return Err(Error::Solver(format!(
                "Jacobi did not reach off-diagonal norm {OFF_TOL} in {MAX_SWEEPS} sweeps"
            )));
        }
        for p in 0..dim.saturating_sub(1) {
            for q in (p + 1)..dim {
                let apq = c[p * dim + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let tau = (c[q * dim + q] - c[p * dim + p]) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                for k in 0..dim {
                    let ckp = c[k * dim + p];
                    let ckq = c[k * dim + q];
                    c[k * dim + p] = cs * ckp - sn * ckq;
                    c[k * dim + q] = sn * ckp + cs * ckq;
                }
                for k in 0..dim {
                    let cpk = c[p * dim + k];
                    let cqk = c[q * dim + k];
                    c[p * dim + k] = cs * cpk - sn * cqk;
                    c[q * dim + k] = sn * cpk + cs * cqk;
                }
            }
        }
    }
    let mut evs: Vec<f64> = (0..dim).map(|i| c[i * dim + i]).collect();
    evs.sort_by(f64::total_cmp);
    Ok(evs)
}

/// All eigenvalues of the pencil, ascending: Cholesky-reduce `B = L L^T`, form
/// `L^-1 A L^-T`, and diagonalize by cyclic Jacobi.
pub fn solve_sym_geneig(pencil: &SymmetricPencil) -> Result<Vec<f64>> {
    let dim = pencil.dim;
    let l = cholesky(&pencil.b, dim)?;
    // columns of L^-1 A
    let mut c0 = vec![0.0; dim * dim];
    let mut col = vec![0.0; dim];
    for j in 0..dim {
        for (i, c) in col.iter_mut().enumerate() {
            *c = pencil.a[i * dim + j];
        }
        forward_solve(&l, dim, &mut col);
        for i in 0..dim {
            c0[i * dim + j] = col[i];
        }
    }
    // rows of (L^-1 A) L^-T, i.e. forward-solve each row
    let mut c = vec![0.0; dim * dim];
    for i in 0..dim {
        col.copy_from_slice(&c0[i * dim..(i + 1) * dim]);
        forward_solve(&l, dim, &mut col);
        c[i * dim..(i + 1) * dim].copy_from_slice(&col);
    }
    // kill roundoff asymmetry before rotating
    for p in 0..dim {
        for q in (p + 1)..dim {
            let s = 0.5 * (c[p * dim + q] + c[q * dim + p]);
            c[p * dim + q] = s;
            c[q * dim + p] = s;
        }
    }
    jacobi_eigenvalues(c, dim)
}

/// Assembles the boundary-weighted pencil for the trial space
/// `{1, Re z^j, Im z^j : 1 <= j <= degree}` on the stereographic image of the domain.
pub fn assemble_pencil(d: &StarDomain, cfg: &GalerkinConfig) -> Result<SymmetricPencil> {
    if d.n() != 2 {
        return Err(Error::InvalidInput(format!(
            "conformal reduction applies to n = 2 only, got n = {}",
            d.n()
        )));
    }
    let k = cfg.degree;
    let m = cfg.quad_points;
    let dim = 2 * k + 1;
    let mut a = vec![0.0; dim * dim];
    let mut b = vec![0.0; dim * dim];
    let w = 2.0 * PI / m as f64;

    let mut vals = vec![0.0; dim];
    let mut dn = vec![0.0; dim];
    for i in 0..m {
        let phi = 2.0 * PI * i as f64 / m as f64;
        let big_r = d.radius_at(phi);
        let big_dr = d.radius_deriv(phi);
        let half = 0.5 * big_r;
        let rho = half.tan();
        let drho = big_dr / (2.0 * half.cos() * half.cos());
        let (sin_phi, cos_phi) = phi.sin_cos();
        let z_re = rho * cos_phi;
        let z_im = rho * sin_phi;
        // z'(phi) = (rho' + i rho) e^{i phi}
        let zp_re = drho * cos_phi - rho * sin_phi;
        let zp_im = drho * sin_phi + rho * cos_phi;
        let speed = zp_re.hypot(zp_im);
        let lambda = 2.0 / (1.0 + rho * rho);

        vals[0] = 1.0;
        dn[0] = 0.0;
        // z^{j-1} running product; f' = j z^{j-1} for Re z^j, -i j z^{j-1} for Im z^j
        let mut zjm1_re = 1.0;
        let mut zjm1_im = 0.0;
        for j in 1..=k {
            let zj_re = zjm1_re * z_re - zjm1_im * z_im;
            let zj_im = zjm1_re * z_im + zjm1_im * z_re;
            vals[2 * j - 1] = zj_re;
            vals[2 * j] = zj_im;
            // t = j z^{j-1} z'
            let jf = j as f64;
            let t_re = jf * (zjm1_re * zp_re - zjm1_im * zp_im);
            let t_im = jf * (zjm1_re * zp_im + zjm1_im * zp_re);
            // normal-flux times arclength: Re(-i f' z') dphi
            dn[2 * j - 1] = t_im;
            dn[2 * j] = -t_re;
            zjm1_re = zj_re;
            zjm1_im = zj_im;
        }

        for p in 0..dim {
            let vp = vals[p];
            let mass = w * vp * lambda * speed;
            let row_a = &mut a[p * dim..(p + 1) * dim];
            let row_b = &mut b[p * dim..(p + 1) * dim];
            for q in 0..dim {
                row_a[q] += w * vp * dn[q];
                row_b[q] += mass * vals[q];
            }
        }
    }

    let pencil = SymmetricPencil::new(a, b, dim)?;
    // constants are energy-free: column 0 of A must vanish
    let kernel_defect = (0..dim).map(|p| pencil.a(p, 0).abs()).fold(0.0, f64::max);
    if kernel_defect > 1e-9 {
        return Err(Error::Assembly(format!(
            "constant trial function carries energy {kernel_defect} (invalid curve?)"
        )));
    }
    Ok(pencil)
}

fn smallest_positive(evs: &[f64]) -> Result<f64> {
    let scale = evs.last().map(|v| v.abs()).unwrap_or(0.0).max(1.0);
    evs.iter()
        .copied()
        .find(|&e| e > 1e-8 * scale)
        .ok_or_else(|| Error::Solver("pencil has no positive eigenvalue".into()))
}

fn solve_at_degree(d: &StarDomain, degree: usize, quad_points: usize) -> Result<f64> {
    let cfg = GalerkinConfig::new(degree, quad_points)?;
    let pencil = assemble_pencil(d, &cfg)?;
    let evs = solve_sym_geneig(&pencil)?;
    smallest_positive(&evs)
}

/// First Steklov eigenvalue of a star-shaped domain in the 2-sphere.
///
/// Rayleigh-Ritz at degree `K` (reported) and `K - 2`; their difference is the
/// error estimate. Values are upper bounds on the true eigenvalue and decrease
/// as the trial space grows.
pub fn cap_mu1(d: &StarDomain, cfg: &GalerkinConfig) -> Result<SteklovResult> {
    let mu_k = solve_at_degree(d, cfg.degree, cfg.quad_points)?;
    let mu_prev = solve_at_degree(d, cfg.degree - 2, cfg.quad_points)?;
    Ok(SteklovResult {
        mu1: mu_k,
        method: SolveMethod::CapGalerkin,
        step_or_degree: cfg.degree,
        err_estimate: (mu_k - mu_prev).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::star::{Mode, DEFAULT_SCAN_GRID};
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, SQRT_2};

    fn cap(r0: f64) -> StarDomain {
        StarDomain::new(2, r0, vec![], DEFAULT_SCAN_GRID).unwrap()
    }

    fn wobble(r0: f64, eps: f64, m: u32) -> StarDomain {
        StarDomain::new(2, r0, vec![Mode { eps, m, phase: 0.0 }], DEFAULT_SCAN_GRID).unwrap()
    }

    fn cfg(k: usize, m: usize) -> GalerkinConfig {
        GalerkinConfig::new(k, m).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(GalerkinConfig::new(3, 512).is_err());
        assert!(GalerkinConfig::new(41, 1024).is_err());
        assert!(GalerkinConfig::new(16, 255).is_err());
        assert!(GalerkinConfig::new(16, 256).is_ok());
    }

    #[test]
    fn cap_matches_closed_form() {
        // the cap's first eigenfunction tan(r/2) cos(phi) = Re z lies in the basis,
        // so the Ritz value is exact up to quadrature
        let res = cap_mu1(&cap(FRAC_PI_4), &cfg(16, 512)).unwrap();
        assert!((res.mu1 - SQRT_2).abs() < 1e-6, "{}", res.mu1);
        assert!((res.mu1 - SQRT_2).abs() < 1e-12);
        let res = cap_mu1(&cap(FRAC_PI_3), &cfg(16, 512)).unwrap();
        assert!((res.mu1 - 2.0 / 3.0f64.sqrt()).abs() < 1e-6);
        assert_eq!(res.method, SolveMethod::CapGalerkin);
        assert_eq!(res.step_or_degree, 16);
    }

    #[test]
    fn perturbed_domain_converges_and_upper_bounds() {
        let d = wobble(FRAC_PI_4, 0.05, 2);
        let res = cap_mu1(&d, &cfg(20, 640)).unwrap();
        assert!(res.err_estimate <= 1e-6, "{}", res.err_estimate);
        // Ritz values upper-bound the true eigenvalue; cross-check against the
        // spherical lower bound pipeline in the bounds module tests.
        assert!(res.mu1 > 0.0);
    }

    #[test]
    fn ritz_values_nonincreasing_in_degree() {
        let d = wobble(FRAC_PI_4, 0.05, 2);
        let mut prev = f64::INFINITY;
        for k in [8, 12, 16, 20] {
            let mu = solve_at_degree(&d, k, 512).unwrap();
            assert!(mu <= prev + 1e-10, "K={k}: {mu} vs {prev}");
            prev = mu;
        }
    }

    #[test]
    fn quadrature_doubling_is_stable() {
        let d = wobble(FRAC_PI_4, 0.05, 2);
        let a = solve_at_degree(&d, 16, 512).unwrap();
        let b = solve_at_degree(&d, 16, 1024).unwrap();
        assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
    }

    #[test]
    fn upper_bound_property_on_caps() {
        for r0 in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3] {
            let res = cap_mu1(&cap(r0), &cfg(16, 512)).unwrap();
            assert!(res.mu1 >= 1.0 / r0.sin() - 1e-9);
        }
    }

    #[test]
    fn energy_matrix_green_identity() {
        // A_{Re z, Re z} equals the Dirichlet energy of Re z over the disk of
        // radius tan(R0/2), which is pi tan^2(R0/2)
        for r0 in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3] {
            let pencil = assemble_pencil(&cap(r0), &cfg(16, 512)).unwrap();
            let exact = PI * (0.5 * r0).tan().powi(2);
            assert!(
                (pencil.a(1, 1) - exact).abs() / exact <= 1e-8,
                "R0={r0}: {} vs {exact}",
                pencil.a(1, 1)
            );
        }
    }

    #[test]
    fn zero_mode_is_discarded() {
        let pencil = assemble_pencil(&wobble(FRAC_PI_4, 0.05, 2), &cfg(16, 512)).unwrap();
        let evs = solve_sym_geneig(&pencil).unwrap();
        assert_eq!(evs.len(), 33);
        assert!(evs[0].abs() <= 1e-8, "zero mode {}", evs[0]);
        assert!(evs[1] > 0.1);
    }

    #[test]
    fn geneig_diagonal_cases() {
        let pencil = SymmetricPencil::new(
            vec![0.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 3.0],
            vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
            3,
        )
        .unwrap();
        let evs = solve_sym_geneig(&pencil).unwrap();
        assert!((evs[0] - 0.0).abs() < 1e-14);
        assert!((evs[1] - 2.0).abs() < 1e-14);
        assert!((evs[2] - 3.0).abs() < 1e-14);

        // scalar pencil A = I, B = 4I: every eigenvalue 0.25
        let n = 4;
        let mut a = vec![0.0; n * n];
        let mut b = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = 1.0;
            b[i * n + i] = 4.0;
        }
        let evs = solve_sym_geneig(&SymmetricPencil::new(a, b, n).unwrap()).unwrap();
        for e in evs {
            assert!((e - 0.25).abs() < 1e-14);
        }
    }

    /// Deterministic xorshift generator for the seeded random pencil.
    struct Rng(u64);
    impl Rng {
        fn next_f64(&mut self) -> f64 {
            self.0 ^= self.0 << 13;
            self.0 ^= self.0 >> 7;
            self.0 ^= self.0 << 17;
            (self.0 >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        }
    }

    fn random_spd_pair(dim: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
        let mut rng = Rng(seed);
        let mut raw_a = vec![0.0; dim * dim];
        let mut raw_b = vec![0.0; dim * dim];
        for v in raw_a.iter_mut() {
            *v = rng.next_f64();
        }
        for v in raw_b.iter_mut() {
            *v = rng.next_f64();
        }
        // A = Na^T Na (PSD), B = Nb^T Nb + dim * I (SPD)
        let gram = |m: &[f64], shift: f64| -> Vec<f64> {
            let mut g = vec![0.0; dim * dim];
            for i in 0..dim {
                for j in 0..dim {
                    let mut s = if i == j { shift } else { 0.0 };
                    for k in 0..dim {
                        s += m[k * dim + i] * m[k * dim + j];
                    }
                    g[i * dim + j] = s;
                }
            }
            g
        };
        (gram(&raw_a, 0.0), gram(&raw_b, dim as f64))
    }

    /// det(A - lambda B) for a 3x3 sub-pencil: the brute-force spot oracle.
    fn det3(a: &[f64], b: &[f64], dim: usize, lambda: f64) -> f64 {
        let e = |i: usize, j: usize| a[i * dim + j] - lambda * b[i * dim + j];
        e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
            - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
            + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
    }

    #[test]
    fn geneig_matches_characteristic_polynomial_oracle() {
        let (a10, b10) = random_spd_pair(10, 0x5eed);
        let full = solve_sym_geneig(&SymmetricPencil::new(a10.clone(), b10.clone(), 10).unwrap())
            .unwrap();
        assert_eq!(full.len(), 10);
        for w in full.windows(2) {
            assert!(w[0] <= w[1] + 1e-12);
        }

        // 3x3 leading sub-pencil, solved independently by bracketed bisection on
        // the characteristic polynomial
        let mut a3 = vec![0.0; 9];
        let mut b3 = vec![0.0; 9];
        for i in 0..3 {
            for j in 0..3 {
                a3[i * 3 + j] = a10[i * 10 + j];
                b3[i * 3 + j] = b10[i * 10 + j];
            }
        }
        let sub = solve_sym_geneig(&SymmetricPencil::new(a3.clone(), b3.clone(), 3).unwrap())
            .unwrap();

        let mut roots = Vec::new();
        let lo = sub[0] - 1.0;
        let hi = sub[2] + 1.0;
        let scan = 200_000;
        let mut prev_x = lo;
        let mut prev_f = det3(&a3, &b3, 3, lo);
        for i in 1..=scan {
            let x = lo + (hi - lo) * i as f64 / scan as f64;
            let f = det3(&a3, &b3, 3, x);
            if prev_f * f < 0.0 {
                let (mut xa, mut xb, mut fa) = (prev_x, x, prev_f);
                for _ in 0..100 {
                    let mid = 0.5 * (xa + xb);
                    let fm = det3(&a3, &b3, 3, mid);
                    if fa * fm <= 0.0 {
                        xb = mid;
                    } else {
                        xa = mid;
                        fa = fm;
                    }
                }
                roots.push(0.5 * (xa + xb));
            }
            prev_x = x;
            prev_f = f;
        }
        assert_eq!(roots.len(), 3, "oracle found {roots:?}");
        for (got, want) in sub.iter().zip(&roots) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn geneig_rejects_non_spd_mass() {
        let a = vec![1.0, 0.0, 0.0, 1.0];
        let b = vec![1.0, 2.0, 2.0, 1.0]; // indefinite
        let pencil = SymmetricPencil::new(a, b, 2).unwrap();
        assert!(matches!(solve_sym_geneig(&pencil), Err(Error::NotSpd(_))));
    }

    #[test]
    fn pencil_rejects_gross_asymmetry() {
        let a = vec![1.0, 1.0, 0.0, 1.0];
        let b = vec![1.0, 0.0, 0.0, 1.0];
        assert!(matches!(SymmetricPencil::new(a, b, 2), Err(Error::Assembly(_))));
    }

    #[test]
    fn assembly_rejects_zonal_domain() {
        let d = StarDomain::new(3, 0.6, vec![], DEFAULT_SCAN_GRID).unwrap();
        assert!(assemble_pencil(&d, &cfg(8, 512)).is_err());
    }
}
