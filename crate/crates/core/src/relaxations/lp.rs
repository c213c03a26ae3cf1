//! Dense two-phase simplex with Bland's rule and the box LP relaxation.

use crate::error::{Error, Result};
use crate::model::SignProgram;

use super::Relaxed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    /// +∞ when infeasible, −∞ when unbounded.
    pub value: f64,
    pub point: Vec<f64>,
    pub status: LpStatus,
}

/// Box bounds l ≤ x ≤ u; `upper` entries may be +∞.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Bounds {
    pub fn uniform(n: usize, lower: f64, upper: f64) -> Self {
        Self { lower: vec![lower; n], upper: vec![upper; n] }
    }
}

const PIVOT_EPS: f64 = 1e-11;

struct Tableau {
    rows: usize,
    cols: usize,
    /// rows × (cols + 1); last column is the right-hand side.
    t: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.t[r * (self.cols + 1) + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.cols + 1;
        let p = self.t[pr * w + pc];
        for c in 0..w {
            self.t[pr * w + c] /= p;
        }
        for r in 0..self.rows {
            if r == pr {
                continue;
            }
            let factor = self.t[r * w + pc];
            if factor != 0.0 {
                for c in 0..w {
                    self.t[r * w + c] -= factor * self.t[pr * w + c];
                }
            }
        }
        self.basis[pr] = pc;
    }

    /// Reduced costs of `cost` for the current basis.
    fn reduced(&self, cost: &[f64]) -> Vec<f64> {
        let mut d = cost.to_vec();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = cost[b];
            if cb != 0.0 {
                for (c, dc) in d.iter_mut().enumerate() {
                    *dc -= cb * self.at(r, c);
                }
            }
        }
        d
    }

    /// Minimize `cost` over columns `allowed`; false when unbounded.
    fn optimize(&mut self, cost: &[f64], allowed: &[bool]) -> bool {
        let scale = 1.0 + cost.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        loop {
            let d = self.reduced(cost);
            // Bland: lowest-index improving column.
            let Some(pc) = (0..self.cols).find(|&c| allowed[c] && d[c] < -1e-10 * scale) else {
                return true;
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, pc);
                if a > PIVOT_EPS {
                    let ratio = self.rhs(r) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - 1e-12 || (ratio <= lratio + 1e-12 && self.basis[r] < self.basis[lr]) {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            match leave {
                None => return false,
                Some((pr, _)) => self.pivot(pr, pc),
            }
        }
    }
}

/// min cᵀx s.t. Ax = b, l ≤ x ≤ u (l finite).
pub fn solve_lp(cost: &[f64], a: &[Vec<f64>], b: &[f64], bounds: &Bounds) -> Result<LpSolution> {
    let n = cost.len();
    if bounds.lower.len() != n || bounds.upper.len() != n || a.len() != b.len() || a.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("LP data sizes disagree".into()));
    }
    if bounds.lower.iter().any(|l| !l.is_finite()) || bounds.upper.iter().any(|u| u.is_nan()) {
        return Err(Error::Invalid("LP lower bounds must be finite".into()));
    }
    let infeasible = || LpSolution { value: f64::INFINITY, point: Vec::new(), status: LpStatus::Infeasible };
    if bounds.lower.iter().zip(&bounds.upper).any(|(l, u)| u < l) {
        return Ok(infeasible());
    }

    // v = x − l ≥ 0; upper rows v_i + w_i = u_i − l_i; equality rows get
    // artificials.
    let upper_rows: Vec<usize> = (0..n).filter(|&i| bounds.upper[i].is_finite()).collect();
    let m_eq = a.len();
    let rows = m_eq + upper_rows.len();
    let n_slack = upper_rows.len();
    let art0 = n + n_slack;
    let cols = art0 + m_eq;
    let mut tab = Tableau { rows, cols, t: vec![0.0; rows * (cols + 1)], basis: vec![0; rows] };
    let w = cols + 1;
    for (k, row) in a.iter().enumerate() {
        let shift: f64 = row.iter().zip(&bounds.lower).map(|(a, l)| a * l).sum();
        let mut rhs = b[k] - shift;
        let sign = if rhs < 0.0 { -1.0 } else { 1.0 };
        rhs *= sign;
        for (j, &v) in row.iter().enumerate() {
            tab.t[k * w + j] = sign * v;
        }
        tab.t[k * w + art0 + k] = 1.0;
        tab.t[k * w + cols] = rhs;
        tab.basis[k] = art0 + k;
    }
    for (s, &i) in upper_rows.iter().enumerate() {
        let r = m_eq + s;
        tab.t[r * w + i] = 1.0;
        tab.t[r * w + n + s] = 1.0;
        tab.t[r * w + cols] = bounds.upper[i] - bounds.lower[i];
        tab.basis[r] = n + s;
    }

    let all = vec![true; cols];
    let mut phase1 = vec![0.0; cols];
    phase1[art0..].iter_mut().for_each(|v| *v = 1.0);
    tab.optimize(&phase1, &all);
    let infeas: f64 = (0..rows).filter(|&r| tab.basis[r] >= art0).map(|r| tab.rhs(r)).sum();
    let b_scale = 1.0 + b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if infeas > 1e-9 * b_scale {
        return Ok(infeasible());
    }
    // Pivot remaining artificials out where a structural column allows.
    for r in 0..rows {
        if tab.basis[r] >= art0 {
            if let Some(c) = (0..art0).find(|&c| tab.at(r, c).abs() > 1e-9) {
                tab.pivot(r, c);
            }
        }
    }

    let mut phase2 = vec![0.0; cols];
    phase2[..n].copy_from_slice(cost);
    let structural: Vec<bool> = (0..cols).map(|c| c < art0).collect();
    if !tab.optimize(&phase2, &structural) {
        return Ok(LpSolution { value: f64::NEG_INFINITY, point: Vec::new(), status: LpStatus::Unbounded });
    }
    let mut point = bounds.lower.clone();
    for (r, &bv) in tab.basis.iter().enumerate() {
        if bv < n {
            point[bv] += tab.rhs(r);
        }
    }
    for (i, x) in point.iter_mut().enumerate() {
        *x = x.clamp(bounds.lower[i], bounds.upper[i]);
    }
    let value = cost.iter().zip(&point).map(|(c, x)| c * x).sum();
    Ok(LpSolution { value, point, status: LpStatus::Optimal })
}

pub(crate) fn float_rows(q: &SignProgram) -> (Vec<Vec<f64>>, Vec<f64>) {
    let a = q.a().iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
    let b = q.b().iter().map(|&v| v as f64).collect();
    (a, b)
}

/// min cᵀx s.t. Ax = b, x ∈ [−1,1]ⁿ; linear objectives only.
pub fn lp_box(q: &SignProgram) -> Result<Relaxed> {
    if !crate::linalg::is_zero(q.f()) {
        return Err(Error::Unsupported("lp_box needs a linear objective (F = 0)".into()));
    }
    let (a, b) = float_rows(q);
    let sol = solve_lp(q.c(), &a, &b, &Bounds::uniform(q.n(), -1.0, 1.0))?;
    Ok(match sol.status {
        LpStatus::Optimal => Relaxed::exact(sol.value),
        _ => Relaxed::infeasible("box LP is infeasible"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Mat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn box_lp(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> LpSolution {
        solve_lp(c, a, b, &Bounds::uniform(c.len(), -1.0, 1.0)).unwrap()
    }

    #[test]
    fn small_examples() {
        let s = solve_lp(&[-1.0], &[], &[], &Bounds::uniform(1, 0.0, 1.0)).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, -1.0);

        let s = box_lp(&[1.0], &[], &[]);
        assert_eq!(s.value, -1.0);

        let s = box_lp(&[1.0, 2.0], &[vec![1.0, 1.0]], &[0.0]);
        assert!((s.value + 1.0).abs() < 1e-12);
        assert_eq!(s.point, vec![1.0, -1.0]);

        let dup = box_lp(&[1.0, 2.0], &[vec![1.0, 1.0], vec![1.0, 1.0]], &[0.0, 0.0]);
        assert_eq!(dup.status, LpStatus::Optimal);
        assert!((dup.value + 1.0).abs() < 1e-12);

        let s = box_lp(&[1.0, 1.0], &[vec![1.0, 1.0]], &[3.0]);
        assert_eq!(s.status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_without_upper_bounds() {
        let s = solve_lp(&[-1.0, 0.0], &[vec![1.0, -1.0]], &[0.0], &Bounds::uniform(2, 0.0, f64::INFINITY)).unwrap();
        assert_eq!(s.status, LpStatus::Unbounded);
    }

    #[test]
    fn knapsack_forced_vertex() {
        let q = crate::instances::knapsack_fixed(4, 34).unwrap();
        let r = lp_box(&q).unwrap();
        assert!((r.value - 34.0).abs() < 1e-9);
        assert!(lp_box(&SignProgram::new(vec![0.0; 2], Mat::identity(2, 2), vec![], vec![]).unwrap()).is_err());
    }

    /// Optimum over vertices: fix n − m coordinates at bounds, solve the rest.
    fn vertex_oracle(c: &[f64], a: &Mat, b: &[f64]) -> Option<f64> {
        let (m, n) = a.shape();
        let mut best: Option<f64> = None;
        for free_mask in 0u32..(1 << n) {
            if free_mask.count_ones() as usize != m {
                continue;
            }
            let free: Vec<usize> = (0..n).filter(|&j| free_mask >> j & 1 == 1).collect();
            let fixed: Vec<usize> = (0..n).filter(|&j| free_mask >> j & 1 == 0).collect();
            let basis = Mat::from_fn(m, m, |r, k| a[(r, free[k])]);
            let Some(inv) = basis.clone().try_inverse() else { continue };
            if basis.determinant().abs() < 1e-9 {
                continue;
            }
            for signs in 0u32..(1 << fixed.len()) {
                let mut x = vec![0.0; n];
                for (k, &j) in fixed.iter().enumerate() {
                    x[j] = if signs >> k & 1 == 1 { 1.0 } else { -1.0 };
                }
                let rhs =
                    nalgebra::DVector::from_fn(m, |r, _| b[r] - fixed.iter().map(|&j| a[(r, j)] * x[j]).sum::<f64>());
                let sol = &inv * rhs;
                if sol.iter().all(|v| v.abs() <= 1.0 + 1e-9) {
                    for (k, &j) in free.iter().enumerate() {
                        x[j] = sol[k];
                    }
                    let v: f64 = c.iter().zip(&x).map(|(c, x)| c * x).sum();
                    best = Some(best.map_or(v, |b: f64| b.min(v)));
                }
            }
        }
        best
    }

    #[test]
    fn random_systems_match_vertex_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let (m, n) = (5, 8);
        for trial in 0..40 {
            let a = Mat::from_fn(m, n, |_, _| rng.random_range(-4i32..=4) as f64);
            let c: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let b: Vec<f64> = if trial % 4 == 0 {
                (0..m).map(|_| rng.random_range(-20.0..20.0)).collect()
            } else {
                let x0: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
                (0..m).map(|r| (0..n).map(|j| a[(r, j)] * x0[j]).sum()).collect()
            };
            let rows: Vec<Vec<f64>> = (0..m).map(|r| a.row(r).iter().copied().collect()).collect();
            let lp = box_lp(&c, &rows, &b);
            match vertex_oracle(&c, &a, &b) {
                Some(v) => {
                    assert_eq!(lp.status, LpStatus::Optimal, "trial {trial}");
                    assert!((lp.value - v).abs() < 1e-7 * (1.0 + v.abs()), "trial {trial}: {} vs {v}", lp.value);
                    for r in 0..m {
                        let ax: f64 = (0..n).map(|j| a[(r, j)] * lp.point[j]).sum();
                        assert!((ax - b[r]).abs() < 1e-7);
                    }
                }
                None => assert_eq!(lp.status, LpStatus::Infeasible, "trial {trial}"),
            }
        }
    }
}
