//! The penalty constant ρ(c,F).
//!
//! ρ must dominate |cᵀx + xᵀFx| on {−1,1}ⁿ. It is taken from the min and max
//! Shor relaxations over the box: r¹ ≤ min, r² ≥ max, ρ = max(|r¹|, |r²|).
//! For F = 0 both extrema are ±Σᵢ|cᵢ| and no SDP is solved.
//!
//! Solver values are widened before use: r¹ is the smaller of the inflated
//! objective and the weak-duality bound, r² the larger, so ρ stays a valid
//! over-estimate when the ADMM solve is only approximate.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{self, Mat};
use crate::sdp::{self, SdpProblem, SdpSolution, SdpStatus, Sense, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PenaltyMethod {
    ClosedForm,
    Sdp,
    Override,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyBound {
    pub r1: f64,
    pub r2: f64,
    pub rho: f64,
    pub method: PenaltyMethod,
}

impl PenaltyBound {
    /// Weight of ‖Ax − b‖² in the penalized objective.
    pub fn penalty_weight(&self) -> f64 {
        2.0 * self.rho + 1.0
    }

    /// A user-supplied ρ, bypassing the bound computation.
    pub fn fixed(rho: f64) -> Result<Self> {
        if !(rho >= 0.0 && rho.is_finite()) {
            return Err(Error::Invalid(format!("rho override must be a finite nonnegative number, got {rho}")));
        }
        Ok(Self { r1: -rho, r2: rho, rho, method: PenaltyMethod::Override })
    }
}

/// Both box Shor relaxations.
#[derive(Debug, Clone)]
pub struct BoxExtrema {
    pub min: SdpSolution,
    pub max: SdpSolution,
}

impl BoxExtrema {
    /// Solver value of the min-side relaxation.
    pub fn r1(&self) -> f64 {
        self.min.objective
    }

    pub fn r2(&self) -> f64 {
        self.max.objective
    }

    /// r¹ widened downward by residual inflation and the dual bound.
    pub fn r1_sound(&self) -> f64 {
        let mut v = self.min.inflated_objective();
        if let Some(b) = self.min.certified_bound {
            v = v.min(b);
        }
        v
    }

    pub fn r2_sound(&self) -> f64 {
        let mut v = self.max.inflated_objective();
        if let Some(b) = self.max.certified_bound {
            v = v.max(b);
        }
        v
    }
}

/// The moment-block cost [[F, c/2], [cᵀ/2, 0]], constant slot last.
pub fn moment_cost(c: &[f64], f: &Mat) -> Mat {
    let n = c.len();
    let mut cost = Mat::zeros(n + 1, n + 1);
    cost.view_mut((0, 0), (n, n)).copy_from(f);
    for (i, &ci) in c.iter().enumerate() {
        cost[(i, n)] = ci / 2.0;
        cost[(n, i)] = ci / 2.0;
    }
    cost
}

fn check(c: &[f64], f: &Mat) -> Result<()> {
    let n = c.len();
    if f.nrows() != n || f.ncols() != n {
        return Err(Error::Dimension(format!("F must be {n}x{n}")));
    }
    if let Some((i, j)) = linalg::is_symmetric(f) {
        return Err(Error::NotSymmetric(i, j));
    }
    Ok(())
}

/// Min and max of cᵀx + ⟨X,F⟩ over [[X, x], [xᵀ, 1]] ⪰ 0, diag = 1.
pub fn shor_box_extrema(c: &[f64], f: &Mat, cfg: &SolverConfig) -> Result<BoxExtrema> {
    shor_box_extrema_with(c, f, cfg, Exec::default())
}

pub fn shor_box_extrema_with(c: &[f64], f: &Mat, cfg: &SolverConfig, exec: Exec) -> Result<BoxExtrema> {
    check(c, f)?;
    cfg.validate()?;
    let cost = moment_cost(c, f);
    let lo = SdpProblem::unit_diagonal(cost.clone(), Sense::Min)?;
    let hi = SdpProblem::unit_diagonal(cost, Sense::Max)?;
    let (min, max) = exec.join(|| sdp::solve_sdp(&lo, cfg), || sdp::solve_sdp(&hi, cfg));
    if min.status == SdpStatus::Diverged || max.status == SdpStatus::Diverged {
        return Err(Error::Solver("box Shor relaxation diverged".into()));
    }
    Ok(BoxExtrema { min, max })
}

/// ρ(c,F), closed form when F = 0.
pub fn rho(c: &[f64], f: &Mat, cfg: &SolverConfig) -> Result<PenaltyBound> {
    check(c, f)?;
    if linalg::is_zero(f) {
        let total: f64 = c.iter().map(|v| v.abs()).sum();
        return Ok(PenaltyBound { r1: -total, r2: total, rho: total, method: PenaltyMethod::ClosedForm });
    }
    rho_by_sdp(c, f, cfg)
}

/// ρ(c,F) from the two SDPs even when F = 0.
pub fn rho_by_sdp(c: &[f64], f: &Mat, cfg: &SolverConfig) -> Result<PenaltyBound> {
    let ext = shor_box_extrema(c, f, cfg)?;
    let r1 = ext.r1_sound();
    let r2 = ext.r2_sound();
    Ok(PenaltyBound { r1, r2, rho: r1.abs().max(r2.abs()), method: PenaltyMethod::Sdp })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hypercube_max_abs(c: &[f64], f: &Mat) -> f64 {
        let n = c.len();
        (0..1u32 << n)
            .map(|mask| {
                let x: Vec<i8> = (0..n).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect();
                let lin: f64 = c.iter().zip(&x).map(|(c, &v)| c * v as f64).sum();
                (lin + linalg::quad_form_i8(f, &x)).abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn single_linear_term() {
        let cfg = SolverConfig::default();
        let ext = shor_box_extrema(&[1.0], &Mat::zeros(1, 1), &cfg).unwrap();
        assert!((ext.r1() + 1.0).abs() < 1e-6);
        assert!((ext.r2() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn pure_quadratic_two_spins() {
        let f = Mat::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let ext = shor_box_extrema(&[0.0, 0.0], &f, &SolverConfig::default()).unwrap();
        assert!((ext.r1() + 2.0).abs() < 1e-6);
        assert!((ext.r2() - 2.0).abs() < 1e-6);
        assert_eq!(hypercube_max_abs(&[0.0, 0.0], &f), 2.0);
    }

    #[test]
    fn knapsack_closed_form() {
        let c = [13.0, 11.0, 7.0, 3.0];
        let pb = rho(&c, &Mat::zeros(4, 4), &SolverConfig::default()).unwrap();
        assert_eq!(pb.rho, 34.0);
        assert_eq!(pb.method, PenaltyMethod::ClosedForm);
        assert_eq!((pb.r1, pb.r2), (-34.0, 34.0));
        let ext = shor_box_extrema(&c, &Mat::zeros(4, 4), &SolverConfig::default()).unwrap();
        assert!((ext.r1() + 34.0).abs() < 1e-5 * 34.0);
        assert!((ext.r2() - 34.0).abs() < 1e-5 * 34.0);
    }

    #[test]
    fn zero_objective() {
        let pb = rho(&[0.0, 0.0], &Mat::zeros(2, 2), &SolverConfig::default()).unwrap();
        assert_eq!(pb.rho, 0.0);
        assert_eq!(pb.penalty_weight(), 1.0);
    }

    #[test]
    fn quadratic_rho_dominates_hypercube() {
        let f = Mat::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let c = [1.0, 1.0];
        let pb = rho(&c, &f, &SolverConfig::default()).unwrap();
        assert_eq!(pb.method, PenaltyMethod::Sdp);
        assert_eq!(hypercube_max_abs(&c, &f), 4.0);
        assert!(pb.rho >= 4.0);
        assert!(pb.r1 <= pb.r2);
        assert_eq!(pb.rho, pb.r1.abs().max(pb.r2.abs()));
    }

    #[test]
    fn override_validation() {
        assert!(PenaltyBound::fixed(-1.0).is_err());
        assert!(PenaltyBound::fixed(f64::NAN).is_err());
        assert_eq!(PenaltyBound::fixed(3.0).unwrap().penalty_weight(), 7.0);
    }
}
