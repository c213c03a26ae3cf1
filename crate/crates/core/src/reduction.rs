//! From a sign-form program to a MAX-CUT quadratic form.
//!
//! With M = 2ρ + 1 the penalized objective
//!
//! ```text
//! f(x) = cᵀx + xᵀFx + M·‖Ax − b‖²
//! ```
//!
//! equals the objective on feasible points and exceeds ρ everywhere else,
//! because integral data makes every violation cost at least M. Its
//! homogenization Q(x, x₀) = x₀ cᵀx + xᵀFx + M‖Ax − x₀b‖² is a quadratic form
//! on {−1,1}ⁿ⁺¹ with Q(x, 1) = f(x) and Q(−x, −x₀) = Q(x, x₀), so its minimum
//! is the constrained optimum, or is larger than ρ when nothing is feasible.
//!
//! The homogenizing variable x₀ is the last node (index n).

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::model::SignProgram;
use crate::penalty::PenaltyBound;

/// f(x) = cᵀx + xᵀFx + constant.
#[derive(Debug, Clone, PartialEq)]
pub struct PenalizedObjective {
    pub c: Vec<f64>,
    pub f: Mat,
    pub constant: f64,
}

impl PenalizedObjective {
    pub fn eval(&self, x: &[i8]) -> f64 {
        let lin: f64 = self.c.iter().zip(x).map(|(c, &v)| c * v as f64).sum();
        lin + linalg::quad_form_i8(&self.f, x) + self.constant
    }
}

fn gram(q: &SignProgram) -> (Vec<Vec<i64>>, Vec<i64>, i64) {
    let n = q.n();
    let mut ata = vec![vec![0i64; n]; n];
    let mut atb = vec![0i64; n];
    let mut btb = 0i64;
    for (row, &b) in q.a().iter().zip(q.b()) {
        for i in 0..n {
            if row[i] == 0 {
                continue;
            }
            atb[i] += row[i] * b;
            for j in 0..n {
                ata[i][j] += row[i] * row[j];
            }
        }
        btb += b * b;
    }
    (ata, atb, btb)
}

pub fn penalized_objective(q: &SignProgram, pb: &PenaltyBound) -> PenalizedObjective {
    let n = q.n();
    let weight = pb.penalty_weight();
    let (ata, atb, btb) = gram(q);
    let f = Mat::from_fn(n, n, |i, j| q.f()[(i, j)] + weight * ata[i][j] as f64);
    let c = (0..n).map(|i| q.c()[i] - 2.0 * weight * atb[i] as f64).collect();
    PenalizedObjective { c, f, constant: weight * btb as f64 }
}

/// The homogenized form Q on n+1 nodes plus what is needed to map spins
/// back to the source program.
#[derive(Debug, Clone)]
pub struct MaxCutInstance {
    q: Mat,
    rho: f64,
    penalty_m: f64,
    source: SignProgram,
    conditioning: Option<f64>,
}

pub fn homogenize(q: &SignProgram, pb: &PenaltyBound) -> MaxCutInstance {
    let n = q.n();
    let pen = penalized_objective(q, pb);
    let mut mat = Mat::zeros(n + 1, n + 1);
    mat.view_mut((0, 0), (n, n)).copy_from(&pen.f);
    for i in 0..n {
        mat[(i, n)] = pen.c[i] / 2.0;
        mat[(n, i)] = pen.c[i] / 2.0;
    }
    mat[(n, n)] = pen.constant;

    let f_norm = q.f().norm();
    let (ata, _, _) = gram(q);
    let ata_norm = ata.iter().flatten().map(|&v| (v as f64).powi(2)).sum::<f64>().sqrt();
    let conditioning = (f_norm > 0.0).then(|| pb.penalty_weight() * ata_norm / f_norm);
    MaxCutInstance { q: mat, rho: pb.rho, penalty_m: pb.penalty_weight(), source: q.clone(), conditioning }
}

/// A spin vector mapped back to the source program.
#[derive(Debug, Clone, PartialEq)]
pub struct Recovered {
    pub x_sign: Vec<i8>,
    pub x_zero_one: Vec<u8>,
    /// Sign-form objective cᵀx + xᵀFx.
    pub raw_objective: f64,
    /// Objective in source units.
    pub objective: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparsityGraph {
    pub nodes: usize,
    /// (i, j, Q_ij) with i < j, 0-based.
    pub edges: Vec<(usize, usize, f64)>,
}

impl SparsityGraph {
    pub fn density(&self) -> f64 {
        let pairs = self.nodes * self.nodes.saturating_sub(1) / 2;
        if pairs == 0 {
            0.0
        } else {
            self.edges.len() as f64 / pairs as f64
        }
    }

    /// Edges between original variables, i.e. not touching x₀.
    pub fn interior_edges(&self) -> usize {
        let last = self.nodes - 1;
        self.edges.iter().filter(|&&(i, j, _)| i != last && j != last).count()
    }

    /// `n_nodes n_edges`, then `i j w` per edge (1-based, w to 17
    /// significant digits). The form is Σᵢ Q_ii + 2·Σ_{i<j} w_ij xᵢxⱼ.
    pub fn to_rudy(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.nodes, self.edges.len());
        for &(i, j, w) in &self.edges {
            let _ = writeln!(out, "{} {} {}", i + 1, j + 1, crate::fmt::sig(w, 17));
        }
        out
    }
}

#[derive(Debug, Serialize)]
struct MaxCutJson<'a> {
    n_nodes: usize,
    homogenizing_node: usize,
    rho: f64,
    penalty_m: f64,
    offset: f64,
    scale: f64,
    trace: f64,
    edges: usize,
    interior_edges: usize,
    density: f64,
    conditioning: Option<f64>,
    #[serde(rename = "Q")]
    q: &'a [Vec<f64>],
}

impl MaxCutInstance {
    pub fn matrix(&self) -> &Mat {
        &self.q
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn penalty_m(&self) -> f64 {
        self.penalty_m
    }
    pub fn source(&self) -> &SignProgram {
        &self.source
    }
    pub fn n_nodes(&self) -> usize {
        self.q.nrows()
    }

    /// ‖M·AᵀA‖_F / ‖F‖_F, or `None` when F = 0.
    pub fn conditioning(&self) -> Option<f64> {
        self.conditioning
    }

    /// (x, x₀)ᵀ Q (x, x₀).
    pub fn form(&self, spin: &[i8]) -> f64 {
        linalg::quad_form_i8(&self.q, spin)
    }

    pub fn recover_solution(&self, spin: &[i8]) -> Result<Recovered> {
        let n = self.source.n();
        if spin.len() != n + 1 {
            return Err(Error::Dimension(format!("spin vector has {} entries, expected {}", spin.len(), n + 1)));
        }
        if spin.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Invalid("spin entries must be ±1".into()));
        }
        let flip = spin[n];
        let x_sign: Vec<i8> = spin[..n].iter().map(|&s| s * flip).collect();
        let x_zero_one = x_sign.iter().map(|&s| ((s + 1) / 2) as u8).collect();
        let raw_objective = self.source.raw_objective(&x_sign);
        Ok(Recovered {
            feasible: self.source.is_feasible(&x_sign),
            objective: self.source.to_original(raw_objective),
            raw_objective,
            x_zero_one,
            x_sign,
        })
    }

    /// Edges with |Q_ij| > zero_tol.
    pub fn sparsity_graph(&self, zero_tol: f64) -> SparsityGraph {
        let d = self.n_nodes();
        let mut edges = Vec::new();
        for i in 0..d {
            for j in (i + 1)..d {
                let w = self.q[(i, j)];
                if w.abs() > zero_tol {
                    edges.push((i, j, w));
                }
            }
        }
        SparsityGraph { nodes: d, edges }
    }

    pub fn to_json(&self, zero_tol: f64) -> String {
        let graph = self.sparsity_graph(zero_tol);
        let rows: Vec<Vec<f64>> = (0..self.n_nodes()).map(|i| self.q.row(i).iter().copied().collect()).collect();
        let doc = MaxCutJson {
            n_nodes: self.n_nodes(),
            homogenizing_node: self.n_nodes(),
            rho: self.rho,
            penalty_m: self.penalty_m,
            offset: self.source.offset(),
            scale: self.source.scale(),
            trace: self.q.trace(),
            edges: graph.edges.len(),
            interior_edges: graph.interior_edges(),
            density: graph.density(),
            conditioning: self.conditioning,
            q: &rows,
        };
        serde_json::to_string_pretty(&doc).expect("max-cut export serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::penalty::PenaltyMethod;

    fn pb(rho: f64) -> PenaltyBound {
        PenaltyBound { r1: -rho, r2: rho, rho, method: PenaltyMethod::Override }
    }

    fn one_var() -> SignProgram {
        SignProgram::new(vec![1.0], Mat::zeros(1, 1), vec![vec![1]], vec![1]).unwrap()
    }

    #[test]
    fn one_variable_penalty_and_form() {
        let q = one_var();
        let f = penalized_objective(&q, &pb(1.0));
        assert_eq!(f.eval(&[1]), 1.0);
        assert_eq!(f.eval(&[-1]), 11.0);

        let mc = homogenize(&q, &pb(1.0));
        assert_eq!(mc.matrix(), &Mat::from_row_slice(2, 2, &[3.0, -2.5, -2.5, 3.0]));
        assert_eq!(mc.form(&[1, 1]), 1.0);
        assert_eq!(mc.form(&[-1, 1]), 11.0);
        assert_eq!(mc.penalty_m(), 3.0);
    }

    #[test]
    fn zero_data_gives_zero_form() {
        let q = SignProgram::new(vec![0.0; 3], Mat::zeros(3, 3), vec![], vec![]).unwrap();
        let f = penalized_objective(&q, &pb(0.0));
        assert_eq!(f.eval(&[1, -1, 1]), 0.0);
        let mc = homogenize(&q, &pb(0.0));
        assert!(linalg::is_zero(mc.matrix()));
    }

    #[test]
    fn unconstrained_form_is_f_block() {
        let fm = Mat::from_row_slice(2, 2, &[0.0, 2.0, 2.0, 0.0]);
        let q = SignProgram::new(vec![0.0; 2], fm.clone(), vec![], vec![]).unwrap();
        let mc = homogenize(&q, &pb(4.0));
        assert_eq!(mc.matrix().view((0, 0), (2, 2)), fm);
        assert_eq!(mc.matrix().row(2).iter().filter(|&&v| v != 0.0).count(), 0);
        assert_eq!(mc.sparsity_graph(0.0).edges.len(), 1);
    }

    #[test]
    fn recovery_and_sign_symmetry() {
        let mc = homogenize(&one_var(), &pb(1.0));
        let a = mc.recover_solution(&[1, 1]).unwrap();
        assert_eq!(a.x_sign, vec![1]);
        assert_eq!(a.x_zero_one, vec![1]);
        assert!(a.feasible);
        assert_eq!(a.objective, 1.0);
        assert_eq!(mc.recover_solution(&[-1, -1]).unwrap(), a);

        let bad = mc.recover_solution(&[-1, 1]).unwrap();
        assert!(!bad.feasible);
        assert_eq!(bad.objective, -1.0);
        assert!(mc.recover_solution(&[1]).is_err());
        assert!(mc.recover_solution(&[1, 0]).is_err());
    }

    #[test]
    fn disjoint_rows_give_a_star() {
        let q = SignProgram::new(
            vec![1.0, 2.0, 3.0],
            Mat::zeros(3, 3),
            vec![vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 3]],
            vec![1, 2, -3],
        )
        .unwrap();
        let g = homogenize(&q, &pb(6.0)).sparsity_graph(0.0);
        assert_eq!(g.interior_edges(), 0);
        assert!(g.edges.iter().all(|&(_, j, _)| j == 3));
    }

    #[test]
    fn dense_rows_give_a_clique() {
        let q = SignProgram::new(vec![0.0; 4], Mat::zeros(4, 4), vec![vec![1, 2, 3, 4]], vec![0]).unwrap();
        let g = homogenize(&q, &pb(0.0)).sparsity_graph(0.0);
        assert_eq!(g.interior_edges(), 6);
    }

    #[test]
    fn cancelling_columns_drop_the_edge() {
        let q = SignProgram::new(vec![0.0; 2], Mat::zeros(2, 2), vec![vec![1, 1], vec![1, -1]], vec![0, 0]).unwrap();
        let mc = homogenize(&q, &pb(1.0));
        assert_eq!(mc.matrix()[(0, 1)], 0.0);
        assert!(mc.sparsity_graph(0.0).edges.iter().all(|&(i, j, _)| (i, j) != (0, 1)));
    }

    #[test]
    fn rudy_export() {
        let mc = homogenize(&one_var(), &pb(1.0));
        assert_eq!(mc.sparsity_graph(0.0).to_rudy(), "2 1\n1 2 -2.5\n");
        let json: serde_json::Value = serde_json::from_str(&mc.to_json(0.0)).unwrap();
        assert_eq!(json["penalty_m"], 3.0);
        assert_eq!(json["Q"][0][1], -2.5);
    }

    proptest::proptest! {
        #[test]
        fn form_matches_penalized_objective(
            n in 1usize..=6,
            vals in proptest::collection::vec(-4.0..4.0f64, 27),
            a in proptest::collection::vec(-3i64..=3, 6),
            b in -6i64..=6,
        ) {
            let mut f = Mat::zeros(n, n);
            let mut k = 6;
            for i in 0..n {
                for j in i..n {
                    f[(i, j)] = vals[k];
                    f[(j, i)] = vals[k];
                    k += 1;
                }
            }
            let q = SignProgram::new(vals[..n].to_vec(), f, vec![a[..n].to_vec()], vec![b]).unwrap();
            let all: Vec<Vec<i8>> =
                (0..1u32 << n).map(|m| (0..n).map(|i| if (m >> i) & 1 == 1 { 1 } else { -1 }).collect()).collect();
            let rho = all.iter().map(|x| q.raw_objective(x).abs()).fold(0.0, f64::max);
            let mc = homogenize(&q, &pb(rho));
            let pen = penalized_objective(&q, &pb(rho));
            for x in &all {
                let mut spin = x.clone();
                spin.push(1);
                let form = mc.form(&spin);
                proptest::prop_assert!((form - pen.eval(x)).abs() <= 1e-9 * (1.0 + form.abs()));
                let flipped: Vec<i8> = spin.iter().map(|v| -v).collect();
                proptest::prop_assert!((mc.form(&flipped) - form).abs() <= 1e-9 * (1.0 + form.abs()));
                if !q.is_feasible(x) {
                    proptest::prop_assert!(form > rho);
                }
            }
        }
    }
}
