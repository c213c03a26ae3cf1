//! The comparison bounds.
//!
//! Every relaxation returns a [`Relaxed`] value in the units of its input
//! program; [`BoundReport`] collects them and maps sign-form values back to
//! original units.

mod lp;
mod qp;

pub use lp::{lp_box, solve_lp, Bounds, LpSolution, LpStatus};
pub use qp::{convex_qp, convex_quadratic_relaxation, eigen_shift, ConvexQp};

use crate::bounds::Rounded;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::model::{SignProgram, ZeroOneProgram};
use crate::penalty::moment_cost;
use crate::reduction::MaxCutInstance;
use crate::sdp::{self, Cone, Constraint, SdpProblem, SdpSolution, SdpStatus, Sense, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundStatus {
    Converged,
    IterationLimit,
    /// The relaxation itself is infeasible, which certifies the program is.
    Infeasible,
    Skipped,
    Failed,
}

impl BoundStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundStatus::Converged => "converged",
            BoundStatus::IterationLimit => "iteration_limit",
            BoundStatus::Infeasible => "infeasible",
            BoundStatus::Skipped => "skipped",
            BoundStatus::Failed => "failed",
        }
    }

    /// Whether the value may be used as a bound (after inflation).
    pub fn usable(self) -> bool {
        matches!(self, BoundStatus::Converged | BoundStatus::IterationLimit)
    }
}

#[derive(Debug, Clone)]
pub struct Relaxed {
    pub value: f64,
    pub status: BoundStatus,
    /// Widening that makes `value` conservative; zero for exact solves.
    pub inflation: f64,
    pub certified_bound: Option<f64>,
    pub note: String,
    pub sdp: Option<SdpSolution>,
}

impl Relaxed {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            status: BoundStatus::Converged,
            inflation: 0.0,
            certified_bound: None,
            note: String::new(),
            sdp: None,
        }
    }

    pub fn infeasible(note: &str) -> Self {
        Self { status: BoundStatus::Infeasible, note: note.into(), ..Self::exact(f64::INFINITY) }
    }

    pub fn skipped(note: &str) -> Self {
        Self { status: BoundStatus::Skipped, note: note.into(), ..Self::exact(f64::NAN) }
    }

    pub fn failed(note: &str) -> Self {
        Self { status: BoundStatus::Failed, note: note.into(), ..Self::exact(f64::NAN) }
    }

    fn from_sdp(sol: SdpSolution, offset: f64, diverged_means_infeasible: bool) -> Self {
        let status = match sol.status {
            SdpStatus::Converged => BoundStatus::Converged,
            SdpStatus::IterationLimit => BoundStatus::IterationLimit,
            SdpStatus::Diverged if diverged_means_infeasible => BoundStatus::Infeasible,
            SdpStatus::Diverged => BoundStatus::Failed,
        };
        let value = if status == BoundStatus::Infeasible { f64::INFINITY } else { sol.objective + offset };
        let note = format!("iterations={} primal_residual={}", sol.iterations, crate::fmt::sig(sol.primal_residual, 3));
        Self {
            value,
            status,
            inflation: sol.inflation(),
            certified_bound: sol.certified_bound.map(|b| b + offset),
            note,
            sdp: Some(sol),
        }
    }

    /// `value − inflation`, the conservative reading of a lower bound.
    pub fn lower(&self) -> f64 {
        self.value - self.inflation
    }
}

fn add_sym(m: &mut Mat, i: usize, j: usize, v: f64) {
    m[(i, j)] += v / 2.0;
    m[(j, i)] += v / 2.0;
}

/// min Q₊ (`Sense::Min`) or max Q⁺ (`Sense::Max`): ⟨Q, X⟩ over X ⪰ 0 with
/// unit diagonal.
pub fn shor_maxcut(mc: &MaxCutInstance, sense: Sense, cfg: &SolverConfig) -> Result<Relaxed> {
    cfg.validate()?;
    let p = SdpProblem::unit_diagonal(mc.matrix().clone(), sense)?;
    Ok(Relaxed::from_sdp(sdp::solve_sdp(&p, cfg), 0.0, false))
}

/// First moment relaxation of the sign program: [[X, x], [xᵀ, 1]] ⪰ 0,
/// X_ii = 1, Ax = b, and optionally the products of each row with every
/// variable, Σ_j A_kj X_ij = b_k x_i.
pub fn lasserre1(q: &SignProgram, with_redundant: bool, cfg: &SolverConfig) -> Result<Relaxed> {
    cfg.validate()?;
    let n = q.n();
    let d = n + 1;
    let mut cons: Vec<Constraint> = (0..d).map(|i| Constraint::entry(d, i, i, 1.0)).collect();
    for (row, &bk) in q.a().iter().zip(q.b()) {
        let mut m = Mat::zeros(d, d);
        for (j, &akj) in row.iter().enumerate() {
            add_sym(&mut m, j, n, akj as f64);
        }
        cons.push(Constraint { matrix: m, rhs: bk as f64 });
        if with_redundant {
            for i in 0..n {
                let mut m = Mat::zeros(d, d);
                for (j, &akj) in row.iter().enumerate() {
                    add_sym(&mut m, i, j, akj as f64);
                }
                add_sym(&mut m, i, n, -(bk as f64));
                cons.push(Constraint { matrix: m, rhs: 0.0 });
            }
        }
    }
    let p = SdpProblem::new(moment_cost(q.c(), q.f()), cons, Sense::Min, Cone::Psd)?.with_trace_bound(d as f64);
    Ok(Relaxed::from_sdp(sdp::solve_sdp(&p, cfg), 0.0, true))
}

/// Doubly nonnegative relaxation of the completely positive lifting of an
/// all-equality 0/1 program, with z = e − x as extra variables. The value is
/// in the program's units (offset included).
pub fn copositive_dnn(p: &ZeroOneProgram, cfg: &SolverConfig) -> Result<Relaxed> {
    cfg.validate()?;
    if let Some(k) = p.sense().iter().position(|s| *s != crate::model::RowSense::Eq) {
        return Err(Error::InequalityRow(k));
    }
    let n = p.n();
    let big = 2 * n;
    let d = big + 1;
    let last = big;

    let mut rows: Vec<(Vec<f64>, f64)> = p
        .a()
        .iter()
        .zip(p.b())
        .map(|(r, &b)| {
            let mut s = vec![0.0; big];
            for (j, &v) in r.iter().enumerate() {
                s[j] = v as f64;
            }
            (s, b as f64)
        })
        .collect();
    for i in 0..n {
        let mut s = vec![0.0; big];
        s[i] = 1.0;
        s[n + i] = 1.0;
        rows.push((s, 1.0));
    }

    let mut cons = vec![Constraint::entry(d, last, last, 1.0)];
    for (s, beta) in &rows {
        let mut lin = Mat::zeros(d, d);
        let mut quad = Mat::zeros(d, d);
        for (j, &sj) in s.iter().enumerate() {
            if sj == 0.0 {
                continue;
            }
            add_sym(&mut lin, j, last, sj);
            for (l, &sl) in s.iter().enumerate() {
                quad[(j, l)] += sj * sl;
            }
        }
        cons.push(Constraint { matrix: lin, rhs: *beta });
        cons.push(Constraint { matrix: quad, rhs: beta * beta });
    }
    for j in 0..big {
        let mut m = Mat::zeros(d, d);
        m[(j, j)] = 1.0;
        add_sym(&mut m, j, last, -1.0);
        cons.push(Constraint { matrix: m, rhs: 0.0 });
    }

    let mut cost = Mat::zeros(d, d);
    cost.view_mut((0, 0), (n, n)).copy_from(p.f());
    for (i, &ci) in p.c().iter().enumerate() {
        add_sym(&mut cost, i, last, ci);
    }
    // Feasible Y satisfy uᵀYu = 0 for u = (S_i, −b̃_i), hence Yu = 0: solve on
    // the face orthogonal to those vectors.
    let killed: Vec<Vec<f64>> = rows
        .iter()
        .map(|(s, beta)| {
            let mut u = s.clone();
            u.push(-beta);
            u
        })
        .collect();
    let mut prob = SdpProblem::new(cost, cons, Sense::Min, Cone::PsdAndNonneg)?.with_trace_bound(1.0 + n as f64);
    match orthogonal_complement(&killed, d) {
        Some(v) => prob = prob.with_face(v)?,
        None => return Ok(Relaxed::infeasible("lifted constraints leave only Y = 0")),
    }
    Ok(Relaxed::from_sdp(sdp::solve_sdp(&prob, cfg), p.offset(), true))
}

/// Orthonormal basis of the complement of span(`vectors`) in ℝᵈ, or `None`
/// when the vectors span everything.
fn orthogonal_complement(vectors: &[Vec<f64>], d: usize) -> Option<Mat> {
    let mut g = Mat::zeros(d, d);
    for u in vectors {
        let norm2: f64 = u.iter().map(|v| v * v).sum();
        if norm2 == 0.0 {
            continue;
        }
        for i in 0..d {
            for j in 0..d {
                g[(i, j)] += u[i] * u[j] / norm2;
            }
        }
    }
    let eig = crate::linalg::sym_eigen(&g);
    let top = eig.eigenvalues.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let keep: Vec<usize> = (0..d).filter(|&k| eig.eigenvalues[k].abs() <= 1e-10 * top).collect();
    if keep.is_empty() {
        return None;
    }
    Some(Mat::from_fn(d, keep.len(), |i, k| eig.eigenvectors[(i, keep[k])]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundName {
    MaxcutShorMin,
    MaxcutShorMax,
    Lasserre1,
    LpBox,
    ConvexQuadratic,
    CopositiveDnn,
    BruteForce,
}

impl BoundName {
    pub const ALL: [BoundName; 7] = [
        BoundName::MaxcutShorMin,
        BoundName::MaxcutShorMax,
        BoundName::Lasserre1,
        BoundName::LpBox,
        BoundName::ConvexQuadratic,
        BoundName::CopositiveDnn,
        BoundName::BruteForce,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::MaxcutShorMin => "maxcut_shor_min",
            BoundName::MaxcutShorMax => "maxcut_shor_max",
            BoundName::Lasserre1 => "lasserre1",
            BoundName::LpBox => "lp_box",
            BoundName::ConvexQuadratic => "convex_quadratic",
            BoundName::CopositiveDnn => "copositive_dnn",
            BoundName::BruteForce => "brute_force",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|n| n.as_str() == s)
    }

    /// Entries that must not exceed f*.
    pub fn is_lower_bound(self) -> bool {
        !matches!(self, BoundName::MaxcutShorMax | BoundName::BruteForce)
    }
}

#[derive(Debug, Clone)]
pub struct BoundEntry {
    pub name: BoundName,
    /// Sign-form units.
    pub raw: f64,
    /// Original units.
    pub value: f64,
    pub status: BoundStatus,
    /// Sign-form units.
    pub inflation: f64,
    pub seconds: f64,
    pub note: String,
}

/// All bounds for one program, ordered by [`BoundName`].
#[derive(Debug, Clone)]
pub struct BoundReport {
    scale: f64,
    offset: f64,
    entries: Vec<BoundEntry>,
    pub rounding: Option<Rounded>,
}

impl BoundReport {
    /// Values map to original units as `scale·raw + offset`.
    pub fn new(scale: f64, offset: f64) -> Self {
        Self { scale, offset, entries: Vec::new(), rounding: None }
    }

    pub fn for_program(q: &SignProgram) -> Self {
        Self::new(q.scale(), q.offset())
    }

    pub fn to_original(&self, raw: f64) -> f64 {
        self.scale * raw + self.offset
    }

    pub fn to_raw(&self, value: f64) -> f64 {
        (value - self.offset) / self.scale
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Insert or replace an entry given in sign-form units.
    pub fn insert_raw(&mut self, name: BoundName, r: &Relaxed, seconds: f64) {
        let entry = BoundEntry {
            name,
            raw: r.value,
            value: self.to_original(r.value),
            status: r.status,
            inflation: r.inflation,
            seconds,
            note: r.note.clone(),
        };
        self.entries.retain(|e| e.name != name);
        let at = self.entries.partition_point(|e| e.name < name);
        self.entries.insert(at, entry);
    }

    /// Insert an entry given in original units.
    pub fn insert_original(&mut self, name: BoundName, r: &Relaxed, seconds: f64) {
        let raw = Relaxed { value: self.to_raw(r.value), inflation: r.inflation / self.scale, ..r.clone() };
        self.insert_raw(name, &raw, seconds);
    }

    pub fn get(&self, name: BoundName) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn entries(&self) -> &[BoundEntry] {
        &self.entries
    }

    /// Usable lower-bound entries exceeding f* + tol + inflation, if f* is known.
    pub fn chain_violations(&self, rel_tol: f64) -> Vec<BoundName> {
        let Some(bf) = self.get(BoundName::BruteForce).filter(|e| e.raw.is_finite()) else {
            return Vec::new();
        };
        self.entries
            .iter()
            .filter(|e| e.name.is_lower_bound() && e.status == BoundStatus::Converged)
            .filter(|e| e.raw > bf.raw + rel_tol * (1.0 + bf.raw.abs()) + e.inflation)
            .map(|e| e.name)
            .collect()
    }
}
