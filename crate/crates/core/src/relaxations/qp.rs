//! Convex eigen-shift relaxation.
//!
//! On the hypercube xᵀFx = xᵀ(F + θI)x − nθ, so with θ = |λ_min(F)| + 1
//! (0 when F ⪰ 0) the convex QP over box ∩ {Ax = b} minus nθ is a lower
//! bound. The QP is solved by FISTA with projection onto box ∩ affine and
//! reported through a Frank–Wolfe linearization bound, which is a valid
//! lower bound on the QP optimum at any iterate.

use crate::error::Result;
use crate::linalg::{self, Mat};
use crate::model::SignProgram;
use crate::sdp::SolverConfig;

use super::lp::{float_rows, solve_lp, Bounds, LpStatus};
use super::{BoundStatus, Relaxed};

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexQp {
    pub theta: f64,
    /// Lower bound on min cᵀx + xᵀ(F + θI)x over the relaxed set.
    pub psi: f64,
    /// ψ − nθ.
    pub psi_tilde: f64,
    /// Objective of the final iterate; `psi` differs by the linearization gap.
    pub primal: f64,
    pub point: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

enum Projector {
    Box,
    Hyperplane { a: Vec<f64>, b: f64 },
    Dykstra { a: Mat, b: Vec<f64>, pinv: Mat },
}

const DYKSTRA_MAX: usize = 10_000;

fn clip(v: f64) -> f64 {
    v.clamp(-1.0, 1.0)
}

impl Projector {
    fn new(a: &[Vec<f64>], b: &[f64], n: usize) -> Self {
        match a.len() {
            0 => Projector::Box,
            1 => Projector::Hyperplane { a: a[0].clone(), b: b[0] },
            m => {
                let am = Mat::from_fn(m, n, |r, j| a[r][j]);
                let pinv = linalg::psd_pinv(&(&am * am.transpose()));
                Projector::Dykstra { a: am, b: b.to_vec(), pinv }
            }
        }
    }

    fn project(&self, y: &[f64]) -> Vec<f64> {
        match self {
            Projector::Box => y.iter().map(|&v| clip(v)).collect(),
            Projector::Hyperplane { a, b } => project_box_hyperplane(y, a, *b),
            Projector::Dykstra { a, b, pinv } => {
                let affine = |x: &nalgebra::DVector<f64>| {
                    let r = a * x - nalgebra::DVector::from_column_slice(b);
                    x - a.transpose() * (pinv * r)
                };
                let mut x = nalgebra::DVector::from_column_slice(y);
                let n = y.len();
                let mut p = nalgebra::DVector::zeros(n);
                let mut q = nalgebra::DVector::zeros(n);
                for _ in 0..DYKSTRA_MAX {
                    let s = affine(&(&x + &p));
                    p = &x + &p - &s;
                    let next = (&s + &q).map(clip);
                    q = &s + &q - &next;
                    let moved = (&next - &x).norm();
                    x = next;
                    if moved <= 1e-13 * (1.0 + x.norm()) {
                        break;
                    }
                }
                x.iter().copied().collect()
            }
        }
    }
}

/// Exact projection onto {aᵀx = b} ∩ [−1,1]ⁿ: x(λ) = clip(y − λa) with
/// λ solving the piecewise-linear equation aᵀx(λ) = b.
fn project_box_hyperplane(y: &[f64], a: &[f64], b: f64) -> Vec<f64> {
    let at = |lam: f64| -> Vec<f64> { y.iter().zip(a).map(|(y, a)| clip(y - lam * a)).collect() };
    let g = |lam: f64| -> f64 { at(lam).iter().zip(a).map(|(x, a)| x * a).sum::<f64>() - b };
    let mut breaks: Vec<f64> =
        y.iter().zip(a).filter(|(_, &a)| a != 0.0).flat_map(|(&y, &a)| [(y + 1.0) / a, (y - 1.0) / a]).collect();
    if breaks.is_empty() {
        return at(0.0);
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let values: Vec<f64> = breaks.iter().map(|&l| g(l)).collect();
    let Some(k) = values.iter().position(|&v| v <= 0.0) else {
        return at(*breaks.last().unwrap());
    };
    if k == 0 {
        return at(breaks[0]);
    }
    let (l0, l1, g0, g1) = (breaks[k - 1], breaks[k], values[k - 1], values[k]);
    let lam = if g0 == g1 { l1 } else { l0 + g0 * (l1 - l0) / (g0 - g1) };
    at(lam)
}

fn objective(c: &[f64], f: &Mat, x: &[f64]) -> f64 {
    c.iter().zip(x).map(|(c, x)| c * x).sum::<f64>() + linalg::quad_form(f, x)
}

fn gradient(c: &[f64], f: &Mat, x: &[f64]) -> Vec<f64> {
    let fx = f * nalgebra::DVector::from_column_slice(x);
    c.iter().zip(fx.iter()).map(|(c, v)| c + 2.0 * v).collect()
}

/// θ(F) = |λ_min(F)| + 1 when λ_min < 0, else 0.
pub fn eigen_shift(f: &Mat) -> f64 {
    if f.nrows() == 0 {
        return 0.0;
    }
    let lam = linalg::min_eigenvalue(f);
    if lam < 0.0 {
        lam.abs() + 1.0
    } else {
        0.0
    }
}

/// Solve the shifted QP; `None` when box ∩ {Ax = b} is empty.
pub fn convex_qp(q: &SignProgram, cfg: &SolverConfig) -> Result<Option<ConvexQp>> {
    cfg.validate()?;
    let n = q.n();
    let (a, b) = float_rows(q);
    let boxed = Bounds::uniform(n, -1.0, 1.0);
    let start = solve_lp(&vec![0.0; n], &a, &b, &boxed)?;
    if start.status != LpStatus::Optimal {
        return Ok(None);
    }
    let theta = eigen_shift(q.f());
    let shifted = q.f() + Mat::identity(n, n) * theta;
    let c = q.c();
    let finish = |psi: f64, primal: f64, point: Vec<f64>, iterations: usize, converged: bool| ConvexQp {
        theta,
        psi,
        psi_tilde: psi - n as f64 * theta,
        primal,
        point,
        iterations,
        converged,
    };

    let lmax = if n == 0 { 0.0 } else { linalg::max_eigenvalue(&shifted) };
    if lmax <= 0.0 {
        let lp = solve_lp(c, &a, &b, &boxed)?;
        return Ok(Some(finish(lp.value, lp.value, lp.point, 0, true)));
    }

    let proj = Projector::new(&a, &b, n);
    let step = 1.0 / (2.0 * lmax);
    let c_norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
    let tol = 1e-7 * (1.0 + c_norm);
    let mut x = proj.project(&start.point);
    let mut fx = objective(c, &shifted, &x);
    let mut y = x.clone();
    let mut t = 1.0f64;
    let mut iterations = 0;
    let mut converged = false;
    let mut psi = linearization_bound(c, &shifted, &a, &b, &boxed, &x, fx)?;
    while iterations < cfg.max_iter {
        iterations += 1;
        let g = gradient(c, &shifted, &y);
        let trial: Vec<f64> = y.iter().zip(&g).map(|(y, g)| y - step * g).collect();
        let next = proj.project(&trial);
        let mapping = next.iter().zip(&y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt() / step;
        // Gradient-based adaptive restart.
        let restart = y.iter().zip(&next).zip(&x).map(|((y, n), o)| (y - n) * (n - o)).sum::<f64>() > 0.0;
        if restart {
            t = 1.0;
            y = next.clone();
        } else {
            let t_next = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
            let momentum = (t - 1.0) / t_next;
            y = next.iter().zip(&x).map(|(n, o)| n + momentum * (n - o)).collect();
            t = t_next;
        }
        x = next;
        fx = objective(c, &shifted, &x);
        if mapping <= tol {
            converged = true;
        }
        // Keep refining past the gradient-mapping test until the
        // linearization gap closes, so the reported bound is tight.
        if converged && iterations % GAP_CHECK_EVERY == 0 {
            psi = psi.max(linearization_bound(c, &shifted, &a, &b, &boxed, &x, fx)?);
            if fx - psi <= GAP_TOL * (1.0 + fx.abs()) || mapping <= 1e-6 * tol {
                break;
            }
        }
    }
    psi = psi.max(linearization_bound(c, &shifted, &a, &b, &boxed, &x, fx)?);
    Ok(Some(finish(psi, fx, x, iterations, converged)))
}

const GAP_CHECK_EVERY: usize = 25;
const GAP_TOL: f64 = 1e-10;

/// f(z) ≥ f(x) + ∇f(x)ᵀ(z − x) for every z, so minimizing the right side
/// over the relaxed set bounds the QP from below.
fn linearization_bound(
    c: &[f64],
    f: &Mat,
    a: &[Vec<f64>],
    b: &[f64],
    boxed: &Bounds,
    x: &[f64],
    fx: f64,
) -> Result<f64> {
    let g = gradient(c, f, x);
    let lin = solve_lp(&g, a, b, boxed)?;
    let gx: f64 = g.iter().zip(x).map(|(g, x)| g * x).sum();
    Ok((fx + lin.value - gx).min(fx))
}

/// ψ̃ as a [`Relaxed`] value in sign-form units.
pub fn convex_quadratic_relaxation(q: &SignProgram, cfg: &SolverConfig) -> Result<Relaxed> {
    Ok(match convex_qp(q, cfg)? {
        None => Relaxed::infeasible("box ∩ {Ax = b} is empty"),
        Some(r) => {
            let status = if r.converged { BoundStatus::Converged } else { BoundStatus::IterationLimit };
            Relaxed {
                note: format!("theta={} psi={}", crate::fmt::sig(r.theta, 10), crate::fmt::sig(r.psi, 10)),
                status,
                ..Relaxed::exact(r.psi_tilde)
            }
        }
    })
}
