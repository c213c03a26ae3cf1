//! Nesterov's sandwich, hyperplane rounding and the infeasibility
//! certificate.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{self, Mat};
use crate::penalty::PenaltyBound;
use crate::reduction::{MaxCutInstance, Recovered};
use crate::relaxations::{BoundName, BoundReport};

/// Upper end of the interval [min Q₊, (2/π)·min Q₊ + (1 − 2/π)·max Q⁺]
/// that contains f*.
pub fn nesterov_sandwich(min_q: f64, max_q: f64) -> f64 {
    (2.0 / PI) * min_q + (1.0 - 2.0 / PI) * max_q
}

pub const DEFAULT_TRIALS: usize = 200;
const UNIT_DIAGONAL_TOL: f64 = 1e-3;

/// Best rounded cut. `value` is Q at `spin` (x₀ = +1 last).
#[derive(Debug, Clone, PartialEq)]
pub struct Rounded {
    pub spin: Vec<i8>,
    pub value: f64,
    pub trial: usize,
    pub recovered: Recovered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundingOptions {
    pub trials: usize,
    pub seed: u64,
    /// Single-flip local search after each trial.
    pub polish: bool,
}

impl Default for RoundingOptions {
    fn default() -> Self {
        Self { trials: DEFAULT_TRIALS, seed: 0, polish: false }
    }
}

/// Rows are the node vectors vᵢ with X ≈ VVᵀ.
fn factor(x: &Mat) -> Mat {
    let eig = linalg::sym_eigen(x);
    let d = x.nrows();
    let mut v = Mat::zeros(d, d);
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam > 0.0 {
            let s = lam.sqrt();
            for i in 0..d {
                v[(i, k)] = eig.eigenvectors[(i, k)] * s;
            }
        }
    }
    v
}

fn polish(mc: &MaxCutInstance, spin: &mut [i8]) {
    let q = mc.matrix();
    let d = spin.len();
    loop {
        let mut improved = false;
        for i in 0..d {
            // Flipping i changes xᵀQx by −4·xᵢ·Σ_{j≠i} Q_ij x_j.
            let s: f64 = (0..d).filter(|&j| j != i).map(|j| q[(i, j)] * spin[j] as f64).sum();
            if -4.0 * spin[i] as f64 * s < -1e-12 * (1.0 + s.abs()) {
                spin[i] = -spin[i];
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
}

/// Hyperplane rounding of a unit-diagonal X: trial t draws r ~ N(0, I) from
/// ChaCha8 seeded with `seed` on stream t, sets xᵢ = sign(vᵢᵀr) (0 ↦ +1)
/// and flips globally so x₀ = +1. The lowest Q wins; ties go to the lowest
/// trial.
pub fn gw_round(x: &Mat, mc: &MaxCutInstance, opts: RoundingOptions) -> Result<Rounded> {
    gw_round_with(x, mc, opts, Exec::default())
}

pub fn gw_round_with(x: &Mat, mc: &MaxCutInstance, opts: RoundingOptions, exec: Exec) -> Result<Rounded> {
    let d = mc.n_nodes();
    if x.nrows() != d || x.ncols() != d {
        return Err(Error::Dimension(format!("X must be {d}x{d}")));
    }
    if opts.trials == 0 {
        return Err(Error::Invalid("at least one rounding trial is required".into()));
    }
    if let Some(i) = (0..d).find(|&i| (x[(i, i)] - 1.0).abs() > UNIT_DIAGONAL_TOL) {
        return Err(Error::Invalid(format!("X[{i},{i}] = {} is not 1", x[(i, i)])));
    }
    let v = factor(&linalg::symmetrize(x));
    let last = d - 1;
    let results = exec.map_range(opts.trials, |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(t as u64);
        let r: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
        let mut spin: Vec<i8> = (0..d)
            .map(|i| {
                let p: f64 = (0..d).map(|k| v[(i, k)] * r[k]).sum();
                if p >= 0.0 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        if opts.polish {
            polish(mc, &mut spin);
        }
        if spin[last] < 0 {
            spin.iter_mut().for_each(|s| *s = -*s);
        }
        let value = mc.form(&spin);
        (value, spin)
    });
    let (trial, (value, spin)) = results
        .into_iter()
        .enumerate()
        .reduce(|best, cur| if cur.1 .0 < best.1 .0 { cur } else { best })
        .expect("trials ≥ 1");
    let recovered = mc.recover_solution(&spin)?;
    Ok(Rounded { spin, value, trial, recovered })
}

#[derive(Debug, Clone, PartialEq)]
pub enum CertificateKind {
    /// A rounded feasible point; `value` in original units.
    Feasible {
        point: Vec<u8>,
        value: f64,
    },
    /// Inflated min Q₊ exceeds ρ.
    InfeasibleByGap {
        min_q: f64,
        rho: f64,
    },
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub explanation: String,
}

impl Certificate {
    pub fn label(&self) -> &'static str {
        match self.kind {
            CertificateKind::Feasible { .. } => "Feasible",
            CertificateKind::InfeasibleByGap { .. } => "InfeasibleByGap",
            CertificateKind::Unknown => "Unknown",
        }
    }
}

/// InfeasibleByGap when min Q₊ − inflation > ρ, else Feasible when the
/// report carries a feasible rounded point, else Unknown. A gap is
/// sufficient for infeasibility but not necessary.
pub fn certify(report: &BoundReport, pb: &PenaltyBound) -> Certificate {
    if let Some(e) = report.get(BoundName::MaxcutShorMin).filter(|e| e.status.usable()) {
        let lower = e.raw - e.inflation;
        if lower > pb.rho {
            return Certificate {
                kind: CertificateKind::InfeasibleByGap { min_q: lower, rho: pb.rho },
                explanation: format!(
                    "min Q+ - inflation = {} exceeds rho = {}, so no feasible point exists",
                    crate::fmt::sig(lower, 10),
                    crate::fmt::sig(pb.rho, 10)
                ),
            };
        }
    }
    if let Some(r) = report.rounding.as_ref().filter(|r| r.recovered.feasible) {
        return Certificate {
            kind: CertificateKind::Feasible { point: r.recovered.x_zero_one.clone(), value: r.recovered.objective },
            explanation: format!("rounding trial {} found a feasible point", r.trial),
        };
    }
    let explanation = match report.get(BoundName::MaxcutShorMin) {
        Some(e) if e.status.usable() => format!(
            "min Q+ - inflation = {} does not exceed rho = {} and rounding found no feasible point",
            crate::fmt::sig(e.raw - e.inflation, 10),
            crate::fmt::sig(pb.rho, 10)
        ),
        _ => "no usable min Q+ value and no feasible rounded point".to_string(),
    };
    Certificate { kind: CertificateKind::Unknown, explanation }
}
