//! Dense ADMM solver for small semidefinite programs
//!
//! ```text
//! min / max ⟨C, X⟩  s.t.  ⟨A_i, X⟩ = b_i,  X ∈ 𝒮⁺ (or 𝒮⁺ ∩ 𝒩)
//! ```
//!
//! The splitting keeps an affine iterate `X` and a cone iterate `Z` with a
//! scaled dual `U`:
//!
//! ```text
//! X ← Π_aff(Z − U − C/ρ),   Z ← Π_K(X + U),   U ← U + X − Z
//! ```
//!
//! The affine projection overwrites the diagonal when every constraint pins
//! one diagonal entry, and otherwise applies a cached pseudo-inverse of the
//! constraint Gram matrix. The intersection cone 𝒮⁺ ∩ 𝒩 is handled by
//! splitting Z into a PSD copy and a nonnegative copy. The returned matrix
//! is the PSD cone iterate, so it is PSD up to eigen-solver round-off while
//! equality residuals are reported.
//!
//! When the caller supplies a bound on tr X over the feasible set, every
//! convergence check also builds a dual point from `U` and evaluates the
//! weak-duality bound `bᵀy + T·min(0, λ_min(C − 𝒜*y − N))`, which is a
//! rigorous bound on the optimum irrespective of convergence.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cone {
    Psd,
    PsdAndNonneg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    Converged,
    IterationLimit,
    Diverged,
}

/// ⟨matrix, X⟩ = rhs.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub matrix: Mat,
    pub rhs: f64,
}

impl Constraint {
    /// ⟨E, X⟩ = X_ij with E symmetric.
    pub fn entry(d: usize, i: usize, j: usize, rhs: f64) -> Self {
        let mut matrix = Mat::zeros(d, d);
        if i == j {
            matrix[(i, i)] = 1.0;
        } else {
            matrix[(i, j)] = 0.5;
            matrix[(j, i)] = 0.5;
        }
        Self { matrix, rhs }
    }
}

#[derive(Debug, Clone)]
pub struct SdpProblem {
    cost: Mat,
    constraints: Vec<Constraint>,
    sense: Sense,
    cone: Cone,
    trace_bound: Option<f64>,
    face: Option<Mat>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub eps_abs: f64,
    pub eps_rel: f64,
    pub max_iter: usize,
    pub admm_rho: f64,
    /// Unused by ADMM.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { eps_abs: 1e-7, eps_rel: 1e-6, max_iter: 100_000, admm_rho: 1.0, seed: 0 }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.eps_abs > 0.0 && self.eps_rel > 0.0 && self.max_iter > 0 && self.admm_rho > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid(format!("solver settings must be positive: {self:?}")))
        }
    }
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub x: Mat,
    pub objective: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    pub status: SdpStatus,
    /// Weak-duality bound on the optimum (lower for `Min`, upper for `Max`).
    pub certified_bound: Option<f64>,
    /// Largest residual-to-tolerance ratio over the final check window.
    pub recent_residual_ratio: f64,
    pub sense: Sense,
    cost_norm: f64,
}

impl SdpSolution {
    /// primal_residual · ‖C‖_F.
    pub fn inflation(&self) -> f64 {
        self.primal_residual * self.cost_norm
    }

    /// Objective widened by [`Self::inflation`] in the conservative
    /// direction: down for `Min`, up for `Max`.
    pub fn inflated_objective(&self) -> f64 {
        match self.sense {
            Sense::Min => self.objective - self.inflation(),
            Sense::Max => self.objective + self.inflation(),
        }
    }

    pub fn converged(&self) -> bool {
        self.status == SdpStatus::Converged
    }
}

impl SdpProblem {
    pub fn new(cost: Mat, constraints: Vec<Constraint>, sense: Sense, cone: Cone) -> Result<Self> {
        let d = cost.nrows();
        if cost.ncols() != d {
            return Err(Error::Dimension("cost matrix must be square".into()));
        }
        if let Some((i, j)) = linalg::is_symmetric(&cost) {
            return Err(Error::NotSymmetric(i, j));
        }
        for (k, con) in constraints.iter().enumerate() {
            if con.matrix.nrows() != d || con.matrix.ncols() != d {
                return Err(Error::Dimension(format!("constraint {k} is not {d}x{d}")));
            }
            if linalg::is_symmetric(&con.matrix).is_some() {
                return Err(Error::Invalid(format!("constraint {k} is not symmetric")));
            }
        }
        Ok(Self { cost, constraints, sense, cone, trace_bound: None, face: None })
    }

    /// The MAX-CUT family: X_ii = 1 for every i, hence tr X = d.
    pub fn unit_diagonal(cost: Mat, sense: Sense) -> Result<Self> {
        let d = cost.nrows();
        let constraints = (0..d).map(|i| Constraint::entry(d, i, i, 1.0)).collect();
        Ok(Self::new(cost, constraints, sense, Cone::Psd)?.with_trace_bound(d as f64))
    }

    /// Declare tr X ≤ `bound` on the feasible set, enabling the dual bound.
    pub fn with_trace_bound(mut self, bound: f64) -> Self {
        self.trace_bound = Some(bound);
        self
    }

    /// Restrict the PSD cone to the face {V W Vᵀ : W ⪰ 0}; `v` must have
    /// orthonormal columns. Use when the constraints force X·u = 0 for
    /// every u ⟂ range(V), so the problem keeps a relative interior.
    pub fn with_face(mut self, v: Mat) -> Result<Self> {
        if v.nrows() != self.dim() || v.ncols() == 0 {
            return Err(Error::Dimension("face basis must have d rows and at least one column".into()));
        }
        let gram = v.transpose() * &v;
        if (gram - Mat::identity(v.ncols(), v.ncols())).amax() > 1e-9 {
            return Err(Error::Invalid("face basis columns are not orthonormal".into()));
        }
        self.face = Some(v);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.cost.nrows()
    }
    pub fn cost(&self) -> &Mat {
        &self.cost
    }
    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }
    pub fn sense(&self) -> Sense {
        self.sense
    }
    pub fn cone(&self) -> Cone {
        self.cone
    }

    /// SDPA sparse format, written as the SDPA dual `max ⟨F₀, Y⟩`,
    /// `⟨F_i, Y⟩ = c_i`, so F₀ = ∓C and F_i = A_i. Only the PSD cone is
    /// expressible.
    pub fn to_sdpa(&self) -> Result<String> {
        if self.cone != Cone::Psd {
            return Err(Error::Unsupported("SDPA export covers the PSD cone only".into()));
        }
        let d = self.dim();
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.constraints.len());
        let _ = writeln!(out, "1");
        let _ = writeln!(out, "{d}");
        let rhs: Vec<String> = self.constraints.iter().map(|c| crate::fmt::sig(c.rhs, 17)).collect();
        let _ = writeln!(out, "{}", rhs.join(" "));
        let f0 = match self.sense {
            Sense::Min => -&self.cost,
            Sense::Max => self.cost.clone(),
        };
        let mut emit = |k: usize, m: &Mat| {
            for i in 0..d {
                for j in i..d {
                    if m[(i, j)] != 0.0 {
                        let _ = writeln!(out, "{k} 1 {} {} {}", i + 1, j + 1, crate::fmt::sig(m[(i, j)], 17));
                    }
                }
            }
        };
        emit(0, &f0);
        for (k, c) in self.constraints.iter().enumerate() {
            emit(k + 1, &c.matrix);
        }
        Ok(out)
    }
}

/// Frobenius-nearest PSD matrix: clip negative eigenvalues to zero.
pub fn project_psd(s: &Mat) -> Mat {
    let d = s.nrows();
    if d == 0 {
        return Mat::zeros(0, 0);
    }
    let eig = linalg::sym_eigen(s);
    let mut out = Mat::zeros(d, d);
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam > 0.0 {
            let v = eig.eigenvectors.column(k);
            out += (v * v.transpose()) * lam;
        }
    }
    linalg::symmetrize(&out)
}

/// Nearest point of V 𝒮⁺ Vᵀ (or 𝒮⁺ when `face` is `None`).
fn project_cone_psd(s: &Mat, face: Option<&Mat>) -> Mat {
    match face {
        None => project_psd(s),
        Some(v) => linalg::symmetrize(&(v * project_psd(&(v.transpose() * s * v)) * v.transpose())),
    }
}

fn project_nonneg(s: &Mat) -> Mat {
    s.map(|v| v.max(0.0))
}

enum AffineMap {
    /// X_jj = value for each listed (j, value).
    Diagonal(Vec<(usize, f64)>),
    /// Rows of `a` are normalized vec(A_i); `pinv` is the Gram pseudo-inverse.
    General { a: Mat, b: Vec<f64>, pinv: Mat },
}

impl AffineMap {
    fn build(p: &SdpProblem) -> Self {
        let d = p.dim();
        let mut diag = Vec::new();
        let mut seen = vec![false; d];
        let is_diag = p.constraints.iter().all(|c| {
            let nz: Vec<(usize, usize)> =
                (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).filter(|&(i, j)| c.matrix[(i, j)] != 0.0).collect();
            if nz.len() == 1 && nz[0].0 == nz[0].1 && !seen[nz[0].0] {
                let j = nz[0].0;
                seen[j] = true;
                diag.push((j, c.rhs / c.matrix[(j, j)]));
                true
            } else {
                false
            }
        });
        if is_diag {
            return AffineMap::Diagonal(diag);
        }
        let m = p.constraints.len();
        let mut a = Mat::zeros(m, d * d);
        let mut b = vec![0.0; m];
        for (k, c) in p.constraints.iter().enumerate() {
            let norm = c.matrix.norm();
            if norm == 0.0 {
                // 0 = rhs: kept as a zero row; an inconsistent one is caught
                // by the feasibility check.
                b[k] = c.rhs;
                continue;
            }
            for (idx, v) in c.matrix.iter().enumerate() {
                a[(k, idx)] = v / norm;
            }
            b[k] = c.rhs / norm;
        }
        let gram = &a * a.transpose();
        let pinv = linalg::psd_pinv(&gram);
        AffineMap::General { a, b, pinv }
    }

    fn apply_op(a: &Mat, v: &Mat) -> Vec<f64> {
        let flat = nalgebra::DVectorView::from_slice(v.as_slice(), v.len());
        (a * flat).iter().copied().collect()
    }

    fn adjoint(a: &Mat, y: &[f64], d: usize) -> Mat {
        let yv = nalgebra::DVector::from_column_slice(y);
        let flat = a.transpose() * yv;
        Mat::from_column_slice(d, d, flat.as_slice())
    }

    fn project(&self, v: &Mat) -> Mat {
        match self {
            AffineMap::Diagonal(entries) => {
                let mut out = v.clone();
                for &(j, val) in entries {
                    out[(j, j)] = val;
                }
                out
            }
            AffineMap::General { a, b, pinv } => {
                let d = v.nrows();
                let r: Vec<f64> = Self::apply_op(a, v).iter().zip(b).map(|(x, b)| x - b).collect();
                let y = pinv * nalgebra::DVector::from_vec(r);
                v - Self::adjoint(a, y.as_slice(), d)
            }
        }
    }

    /// Least-squares multipliers y with 𝒜*y ≈ g, and the exact 𝒜*y.
    fn fit(&self, g: &Mat) -> (Vec<f64>, Mat) {
        let d = g.nrows();
        match self {
            AffineMap::Diagonal(entries) => {
                let mut adj = Mat::zeros(d, d);
                let y = entries
                    .iter()
                    .map(|&(j, _)| {
                        adj[(j, j)] = g[(j, j)];
                        g[(j, j)]
                    })
                    .collect();
                (y, adj)
            }
            AffineMap::General { a, pinv, .. } => {
                let ag = nalgebra::DVector::from_vec(Self::apply_op(a, g));
                let y = pinv * ag;
                let adj = Self::adjoint(a, y.as_slice(), d);
                (y.iter().copied().collect(), adj)
            }
        }
    }

    fn rhs_dot(&self, y: &[f64]) -> f64 {
        match self {
            AffineMap::Diagonal(entries) => entries.iter().zip(y).map(|(&(_, v), y)| v * y).sum(),
            AffineMap::General { b, .. } => b.iter().zip(y).map(|(b, y)| b * y).sum(),
        }
    }

    fn residual(&self, x: &Mat) -> f64 {
        match self {
            AffineMap::Diagonal(entries) => entries.iter().map(|&(j, v)| (x[(j, j)] - v).abs()).fold(0.0, f64::max),
            AffineMap::General { a, b, .. } => {
                Self::apply_op(a, x).iter().zip(b).map(|(x, b)| (x - b).abs()).fold(0.0, f64::max)
            }
        }
    }
}

const CHECK_EVERY: usize = 100;
const RHO_MIN: f64 = 1e-6;
const RHO_MAX: f64 = 1e6;
/// Divergence is only declared after this many iterations.
const DIVERGENCE_MIN_ITER: usize = 3000;
/// Checks compared when testing for residual stagnation.
const STAGNATION_CHECKS: usize = 10;

fn max_abs_residual(p: &SdpProblem, x: &Mat) -> f64 {
    p.constraints.iter().map(|c| (linalg::dot(&c.matrix, x) - c.rhs).abs()).fold(0.0, f64::max)
}

fn finish(
    p: &SdpProblem,
    z: Mat,
    dual_residual: f64,
    iterations: usize,
    status: SdpStatus,
    bound: Option<f64>,
    ratio: f64,
) -> SdpSolution {
    let objective = linalg::dot(&p.cost, &z);
    let mut primal_residual = max_abs_residual(p, &z);
    if p.cone == Cone::PsdAndNonneg {
        primal_residual = primal_residual.max(-z.min().min(0.0));
    }
    SdpSolution {
        primal_residual,
        objective,
        x: z,
        dual_residual,
        iterations,
        status,
        certified_bound: bound,
        recent_residual_ratio: ratio,
        sense: p.sense,
        cost_norm: p.cost.norm(),
    }
}

/// Solve `p` with scaled ADMM. Never fails: non-convergence and detected
/// infeasibility are reported through [`SdpSolution::status`].
///
/// For 𝒮⁺ ∩ 𝒩 the cone variable is split into a PSD copy and a
/// nonnegative copy, each with its own scaled dual (consensus form), so one
/// eigendecomposition suffices per iteration. The PSD copy is returned.
pub fn solve_sdp(p: &SdpProblem, cfg: &SolverConfig) -> SdpSolution {
    let d = p.dim();
    if d == 0 {
        return finish(p, Mat::zeros(0, 0), 0.0, 0, SdpStatus::Converged, Some(0.0), 0.0);
    }
    let affine = AffineMap::build(p);

    let anchor = affine.project(&Mat::zeros(d, d));
    let rhs_norm: f64 = p.constraints.iter().map(|c| c.rhs * c.rhs).sum::<f64>().sqrt();
    if affine.residual(&anchor) > 1e-8 * (1.0 + rhs_norm) {
        return finish(p, anchor, f64::INFINITY, 0, SdpStatus::Diverged, None, f64::INFINITY);
    }

    let cost_norm = p.cost.norm();
    let scale = if cost_norm > 0.0 { cost_norm } else { 1.0 };
    let sign = match p.sense {
        Sense::Min => 1.0,
        Sense::Max => -1.0,
    };
    let cs = &p.cost * (sign / scale);
    let split = p.cone == Cone::PsdAndNonneg;
    let blocks = if split { 2.0 } else { 1.0 };
    let face = p.face.as_ref();

    let mut z = Mat::zeros(d, d);
    let mut u = Mat::zeros(d, d);
    let mut z2 = Mat::zeros(d, d);
    let mut u2 = Mat::zeros(d, d);
    let mut rho = cfg.admm_rho.clamp(RHO_MIN, RHO_MAX);
    let mut window_ratio: f64 = 0.0;
    let mut last_r = f64::INFINITY;
    let mut last_s = f64::INFINITY;
    let mut last_pri_tol = 1.0;
    let mut last_dual_tol = 1.0;
    let mut history: Vec<f64> = Vec::new();
    let mut bound = None;
    let dim_tol = d as f64 * cfg.eps_abs;

    for it in 1..=cfg.max_iter {
        let target = if split { (&z - &u + &z2 - &u2) / 2.0 } else { &z - &u };
        let x = affine.project(&(target - &cs / (blocks * rho)));
        let shifted = &x + &u;
        let z_new = project_cone_psd(&shifted, face);
        let mut r2 = (&x - &z_new).norm_squared();
        let mut moved = &z_new - &z;
        u = shifted - &z_new;
        z = z_new;
        if split {
            let shifted2 = &x + &u2;
            let z2_new = project_nonneg(&shifted2);
            r2 += (&x - &z2_new).norm_squared();
            moved += &z2_new - &z2;
            u2 = shifted2 - &z2_new;
            z2 = z2_new;
        }
        let r = r2.sqrt();
        let s = rho * moved.norm();

        if !r.is_finite() || !s.is_finite() {
            return finish(p, z, f64::INFINITY, it, SdpStatus::Diverged, None, f64::INFINITY);
        }

        let pri_tol = dim_tol + cfg.eps_rel * x.norm().max(z.norm());
        let dual_tol = dim_tol + cfg.eps_rel * rho * (&u + &u2).norm();
        window_ratio = window_ratio.max(r / pri_tol).max(s / dual_tol);
        last_r = r;
        last_s = s;
        last_pri_tol = pri_tol;
        last_dual_tol = dual_tol;

        if it % CHECK_EVERY != 0 {
            continue;
        }

        let obj = sign * scale * linalg::dot(&cs, &z);
        bound = p.trace_bound.map(|t| {
            let nonneg = split.then(|| u2.map(|v| (-rho * v).max(0.0)));
            let lb = dual_bound(&affine, &cs, &(&u * rho), nonneg.as_ref(), t, face);
            sign * scale * lb
        });
        let gap_ok = match bound {
            Some(b) => (obj - b).abs() <= cfg.eps_rel * (1.0 + obj.abs() + b.abs()),
            None => true,
        };
        if window_ratio <= 1.0 && gap_ok {
            return finish(p, z, s * scale, it, SdpStatus::Converged, bound, window_ratio);
        }

        let r_rel = r / (1.0 + x.norm().max(z.norm()));
        history.push(r_rel);
        if it >= DIVERGENCE_MIN_ITER && history.len() > STAGNATION_CHECKS && r_rel > 1e-3 {
            let earlier = history[history.len() - 1 - STAGNATION_CHECKS];
            if r_rel >= 0.9 * earlier {
                return finish(p, z, s * scale, it, SdpStatus::Diverged, bound, window_ratio);
            }
        }

        let pri_ratio = r / pri_tol;
        let dual_ratio = s / dual_tol;
        if pri_ratio > 10.0 * dual_ratio && rho < RHO_MAX {
            rho *= 2.0;
            u /= 2.0;
            u2 /= 2.0;
        } else if dual_ratio > 10.0 * pri_ratio && rho > RHO_MIN {
            rho /= 2.0;
            u *= 2.0;
            u2 *= 2.0;
        }
        window_ratio = 0.0;
    }
    let ratio = (last_r / last_pri_tol).max(last_s / last_dual_tol);
    finish(p, z, last_s * scale, cfg.max_iter, SdpStatus::IterationLimit, bound, ratio)
}

/// Weak-duality bound for the scaled min-sense problem. With S = −ρU (the
/// PSD-block dual) and N ≥ 0, y fits 𝒜*y ≈ C − S − N and every feasible X
/// with tr X ≤ T gives ⟨C, X⟩ ≥ bᵀy + T·min(0, λ_min(C − 𝒜*y − N)),
/// the eigenvalue taken on the face when one is set.
fn dual_bound(affine: &AffineMap, cs: &Mat, rho_u: &Mat, nonneg: Option<&Mat>, trace: f64, face: Option<&Mat>) -> f64 {
    let mut target = cs + rho_u;
    if let Some(n) = nonneg {
        target -= n;
    }
    let (y, adj) = affine.fit(&target);
    let mut psd_part = cs - adj;
    if let Some(n) = nonneg {
        psd_part -= n;
    }
    let lam = match face {
        None => linalg::min_eigenvalue(&psd_part),
        Some(v) => linalg::min_eigenvalue(&linalg::symmetrize(&(v.transpose() * psd_part * v))),
    };
    affine.rhs_dot(&y) + trace * lam.min(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(a: f64, b: f64, c: f64) -> Mat {
        Mat::from_row_slice(2, 2, &[a, b, b, c])
    }

    #[test]
    fn projection_examples() {
        let p = project_psd(&m2(1.0, 0.0, -1.0));
        assert!((p - m2(1.0, 0.0, 0.0)).norm() < 1e-14);
        let p = project_psd(&m2(0.0, 1.0, 0.0));
        assert!((p - m2(0.5, 0.5, 0.5)).norm() < 1e-14);
        let psd = m2(2.0, 1.0, 2.0);
        assert!((project_psd(&psd) - &psd).norm() < 1e-12);
    }

    #[test]
    fn analytic_two_by_two_cases() {
        let cfg = SolverConfig::default();
        let sol = solve_sdp(&SdpProblem::unit_diagonal(Mat::identity(2, 2), Sense::Min).unwrap(), &cfg);
        assert!(sol.converged());
        assert!((sol.objective - 2.0).abs() < 1e-6);

        let offd = m2(0.0, 1.0, 0.0);
        let sol = solve_sdp(&SdpProblem::unit_diagonal(offd.clone(), Sense::Min).unwrap(), &cfg);
        assert!(sol.converged(), "{:?}", sol.status);
        assert!((sol.objective + 2.0).abs() < 1e-6);
        assert!((sol.x[(0, 1)] + 1.0).abs() < 1e-5);

        let cons = vec![Constraint::entry(2, 0, 0, 1.0), Constraint::entry(2, 1, 1, 1.0)];
        let dnn = SdpProblem::new(offd, cons, Sense::Min, Cone::PsdAndNonneg).unwrap().with_trace_bound(2.0);
        let sol = solve_sdp(&dnn, &cfg);
        assert!(sol.converged(), "{:?}", sol.status);
        assert!(sol.objective.abs() < 1e-6);
    }

    #[test]
    fn max_sense_and_certified_bound() {
        let q = Mat::from_row_slice(3, 3, &[1.0, -2.0, 0.5, -2.0, 0.0, 3.0, 0.5, 3.0, -1.0]);
        let cfg = SolverConfig::default();
        let lo = solve_sdp(&SdpProblem::unit_diagonal(q.clone(), Sense::Min).unwrap(), &cfg);
        let hi = solve_sdp(&SdpProblem::unit_diagonal(q.clone(), Sense::Max).unwrap(), &cfg);
        assert!(lo.converged() && hi.converged());
        assert!(lo.objective < hi.objective);
        assert!(lo.certified_bound.unwrap() <= lo.objective + 1e-9);
        assert!(hi.certified_bound.unwrap() >= hi.objective - 1e-9);
        // Brute force over the 8 sign vectors brackets both values.
        let mut best = f64::INFINITY;
        let mut worst = f64::NEG_INFINITY;
        for mask in 0..8u32 {
            let x: Vec<i8> = (0..3).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect();
            let v = linalg::quad_form_i8(&q, &x);
            best = best.min(v);
            worst = worst.max(v);
        }
        assert!(lo.objective <= best + 1e-6);
        assert!(hi.objective >= worst - 1e-6);
    }

    #[test]
    fn inconsistent_affine_system_diverges() {
        let d = 2;
        let cons = vec![Constraint::entry(d, 0, 1, 1.0), Constraint::entry(d, 1, 0, -1.0)];
        let p = SdpProblem::new(Mat::identity(d, d), cons, Sense::Min, Cone::Psd).unwrap();
        assert_eq!(solve_sdp(&p, &SolverConfig::default()).status, SdpStatus::Diverged);
    }

    #[test]
    fn conically_infeasible_problem_diverges() {
        // X₀₀ = X₁₁ = 1 and X₀₁ = 2 violates PSD.
        let d = 2;
        let cons =
            vec![Constraint::entry(d, 0, 0, 1.0), Constraint::entry(d, 1, 1, 1.0), Constraint::entry(d, 0, 1, 2.0)];
        let p = SdpProblem::new(Mat::zeros(d, d), cons, Sense::Min, Cone::Psd).unwrap();
        let sol = solve_sdp(&p, &SolverConfig::default());
        assert_eq!(sol.status, SdpStatus::Diverged);
    }

    #[test]
    fn deterministic_iteration_path() {
        let q = Mat::from_fn(5, 5, |i, j| ((i * 7 + j * 7) % 5) as f64 - 2.0);
        let p = SdpProblem::unit_diagonal(q, Sense::Min).unwrap();
        let a = solve_sdp(&p, &SolverConfig::default());
        let b = solve_sdp(&p, &SolverConfig::default());
        assert_eq!(a.iterations, b.iterations);
        assert_eq!(a.objective.to_bits(), b.objective.to_bits());
        assert_eq!(a.x, b.x);
    }

    #[test]
    fn sdpa_export_layout() {
        let p = SdpProblem::unit_diagonal(m2(0.0, 1.0, 0.0), Sense::Min).unwrap();
        let text = p.to_sdpa().unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(&lines[..4], &["2", "1", "2", "1 1"]);
        assert!(lines.contains(&"0 1 1 2 -1"));
        assert!(lines.contains(&"2 1 2 2 1"));
    }
}
