//! Instance generators and the exhaustive oracle.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64(seed)`, one
//! stream per field (see the `STREAM_*` constants), so every instance is
//! reproducible across platforms. Uniform draws on [0,1) use rand's
//! 53-bit `f64` conversion.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::Mat;
use crate::model::{RowSense, SignProgram, ZeroOneProgram};
use crate::reduction::MaxCutInstance;

pub const STREAM_ETA: u64 = 1;
pub const STREAM_F_VALUES: u64 = 2;
pub const STREAM_F_MASK: u64 = 3;
pub const STREAM_KCLUSTER_VALUES: u64 = 4;
pub const STREAM_KCLUSTER_MASK: u64 = 5;

/// Largest n accepted by [`brute_force`].
pub const BRUTE_FORCE_CAP: usize = 26;

const KNAPSACK_4_C: [i64; 4] = [13, 11, 7, 3];
const KNAPSACK_4_A: [i64; 4] = [3, 7, 11, 13];
const KNAPSACK_10_C: [i64; 10] = [37, 31, 29, 23, 19, 17, 13, 11, 7, 3];
const KNAPSACK_10_A: [i64; 10] = [3, 7, 11, 13, 17, 19, 23, 29, 31, 37];
// 51 is as published, not a prime.
const KNAPSACK_15_C: [i64; 15] = [53, 51, 47, 43, 41, 37, 31, 29, 23, 19, 17, 13, 11, 7, 3];
const KNAPSACK_15_A: [i64; 15] = [3, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 51, 53];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    KnapsackFixed,
    KnapsackRandom,
    QuadKnapsackRandom,
    KCluster,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::KnapsackFixed => "knapsack_fixed",
            Family::KnapsackRandom => "knapsack_random",
            Family::QuadKnapsackRandom => "quad_knapsack_random",
            Family::KCluster => "kcluster",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    /// Cluster size (k-cluster only).
    pub k: i64,
    /// Knapsack right-hand side, sign form.
    pub b: i64,
    /// Weight of the random cost perturbation.
    pub s: f64,
    /// Probability of zeroing an off-diagonal k-cluster entry.
    pub zero_prob: f64,
    /// Probability of keeping an off-diagonal entry of F.
    pub f_density: f64,
    pub seed: u64,
}

impl Default for GeneratorSpec {
    fn default() -> Self {
        Self { family: Family::KnapsackFixed, n: 4, k: 0, b: 0, s: 10.0, zero_prob: 0.0, f_density: 0.5, seed: 0 }
    }
}

/// A generated program in whichever domain its family is defined in.
#[derive(Debug, Clone)]
pub enum Generated {
    Sign(SignProgram),
    KCluster { zero_one: ZeroOneProgram, sign: SignProgram },
}

impl Generated {
    pub fn sign(&self) -> &SignProgram {
        match self {
            Generated::Sign(q) => q,
            Generated::KCluster { sign, .. } => sign,
        }
    }
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Invalid("n must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.zero_prob) || !(0.0..=1.0).contains(&self.f_density) {
            return Err(Error::Invalid("probabilities must lie in [0, 1]".into()));
        }
        if !self.s.is_finite() {
            return Err(Error::Invalid("s must be finite".into()));
        }
        if self.family == Family::KCluster && self.k < 0 {
            return Err(Error::Invalid("k must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn generate(&self) -> Result<Generated> {
        self.validate()?;
        Ok(match self.family {
            Family::KnapsackFixed => Generated::Sign(knapsack_fixed(self.n, self.b)?),
            Family::KnapsackRandom => Generated::Sign(knapsack_random(self.n, self.s, self.seed, self.b)?),
            Family::QuadKnapsackRandom => {
                Generated::Sign(quadratic_knapsack_random(self.n, self.s, self.seed, self.f_density, self.b)?)
            }
            Family::KCluster => {
                let (zero_one, sign) = kcluster(self.n, self.k, self.zero_prob, self.seed)?;
                Generated::KCluster { zero_one, sign }
            }
        })
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Knapsack weights: the published vectors for n ∈ {4, 10, 15}, otherwise
/// the odd primes with 5 skipped (3, 7, 11, 13, 17, ...), which agrees with
/// the published n = 4 and n = 10 vectors.
pub fn knapsack_weights(n: usize) -> Vec<i64> {
    match n {
        4 => KNAPSACK_4_A.to_vec(),
        10 => KNAPSACK_10_A.to_vec(),
        15 => KNAPSACK_15_A.to_vec(),
        _ => {
            let mut out = Vec::with_capacity(n);
            let mut p = 3i64;
            while out.len() < n {
                if p != 5 && (3..).step_by(2).take_while(|d| d * d <= p).all(|d| p % d != 0) {
                    out.push(p);
                }
                p += 2;
            }
            out
        }
    }
}

fn knapsack(c: Vec<f64>, a: Vec<i64>, f: Mat, b: i64) -> Result<SignProgram> {
    let total: i64 = a.iter().map(|v| v.abs()).sum();
    if b.abs() > total {
        return Err(Error::Invalid(format!("b = {b} outside [-{total}, {total}]")));
    }
    SignProgram::new(c, f, vec![a], vec![b])
}

/// min cᵀx s.t. aᵀx = b over {−1,1}ⁿ with the published data.
pub fn knapsack_fixed(n: usize, b: i64) -> Result<SignProgram> {
    let (c, a): (&[i64], &[i64]) = match n {
        4 => (&KNAPSACK_4_C, &KNAPSACK_4_A),
        10 => (&KNAPSACK_10_C, &KNAPSACK_10_A),
        15 => (&KNAPSACK_15_C, &KNAPSACK_15_A),
        _ => return Err(Error::Unsupported(format!("fixed knapsack data exists for n = 4, 10, 15, not {n}"))),
    };
    knapsack(c.iter().map(|&v| v as f64).collect(), a.to_vec(), Mat::zeros(n, n), b)
}

fn perturbed_costs(a: &[i64], s: f64, seed: u64) -> Vec<f64> {
    let mut r = rng(seed, STREAM_ETA);
    a.iter().map(|&ai| ai as f64 + s * r.random::<f64>()).collect()
}

/// Costs cᵢ = aᵢ + s·ηᵢ with ηᵢ uniform on [0,1).
pub fn knapsack_random(n: usize, s: f64, seed: u64, b: i64) -> Result<SignProgram> {
    let a = knapsack_weights(n);
    let c = perturbed_costs(&a, s, seed);
    knapsack(c, a, Mat::zeros(n, n), b)
}

/// As [`knapsack_random`] plus a symmetric F with zero diagonal and
/// off-diagonal entries uniform on [−1,1), each kept with probability
/// `f_density`.
pub fn quadratic_knapsack_random(n: usize, s: f64, seed: u64, f_density: f64, b: i64) -> Result<SignProgram> {
    let a = knapsack_weights(n);
    let c = perturbed_costs(&a, s, seed);
    let mut values = rng(seed, STREAM_F_VALUES);
    let mut mask = rng(seed, STREAM_F_MASK);
    let mut f = Mat::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 2.0 * values.random::<f64>() - 1.0;
            let keep = mask.random::<f64>() < f_density;
            if keep {
                f[(i, j)] = v;
                f[(j, i)] = v;
            }
        }
    }
    knapsack(c, a, f, b)
}

/// The k-cluster problem min{xᵀAx : eᵀx = k, x ∈ {0,1}ⁿ}.
///
/// A is symmetric with zero diagonal and off-diagonal entries uniform on
/// [0,1), each zeroed with probability `zero_prob`. The sign form is
/// min 2eᵀAx + xᵀAx s.t. eᵀx = 2k − n, which equals 4·(0/1 value) − eᵀAe;
/// it carries scale ¼ and offset eᵀAe/4 so values map back.
pub fn kcluster(n: usize, k: i64, zero_prob: f64, seed: u64) -> Result<(ZeroOneProgram, SignProgram)> {
    if n == 0 {
        return Err(Error::Invalid("n must be positive".into()));
    }
    let mut values = rng(seed, STREAM_KCLUSTER_VALUES);
    let mut mask = rng(seed, STREAM_KCLUSTER_MASK);
    let mut a = Mat::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = values.random::<f64>();
            let zeroed = mask.random::<f64>() < zero_prob;
            if !zeroed {
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
    }
    let ones = vec![1i64; n];
    let zero_one = ZeroOneProgram::new(vec![0.0; n], a.clone(), vec![ones.clone()], vec![k], vec![RowSense::Eq])?;
    let ae: Vec<f64> = (0..n).map(|i| a.row(i).sum()).collect();
    let eae: f64 = ae.iter().sum();
    let sign = SignProgram::new(ae.iter().map(|v| 2.0 * v).collect(), a, vec![ones], vec![2 * k - n as i64])?
        .with_units(0.25, eae / 4.0)?;
    Ok((zero_one, sign))
}

/// Exhaustive result; `value` is +∞ and `argmin` is `None` when nothing is
/// feasible. Values are in sign-form (raw) units.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteForce {
    pub value: f64,
    pub argmin: Option<Vec<i8>>,
}

impl BruteForce {
    pub fn feasible(&self) -> bool {
        self.argmin.is_some()
    }
}

/// Masks per enumeration chunk; fixed so the reduction order never depends
/// on the thread count.
const CHUNK_BITS: usize = 12;

/// Spin vector of `mask`: the first coordinate is the most significant bit
/// and a set bit means +1, so mask order is lexicographic order.
pub fn spins_from_mask(mask: u64, n: usize) -> Vec<i8> {
    (0..n).map(|i| if mask >> (n - 1 - i) & 1 == 1 { 1 } else { -1 }).collect()
}

/// Minimize `eval` over feasible points of {−1,1}ⁿ; ties go to the
/// lexicographically smallest vector.
pub fn enumerate_min<E, F>(n: usize, eval: E, feasible: F, exec: Exec) -> Result<Option<(f64, Vec<i8>)>>
where
    E: Fn(&[i8]) -> f64 + Sync,
    F: Fn(&[i8]) -> bool + Sync,
{
    if n > BRUTE_FORCE_CAP {
        return Err(Error::TooLarge { n, cap: BRUTE_FORCE_CAP });
    }
    let total = 1u64 << n;
    let chunk = 1u64 << CHUNK_BITS.min(n);
    let chunks = (total / chunk) as usize;
    let per_chunk = exec.map_range(chunks, |ci| {
        let start = ci as u64 * chunk;
        let mut best: Option<(f64, u64)> = None;
        for mask in start..start + chunk {
            let x = spins_from_mask(mask, n);
            if !feasible(&x) {
                continue;
            }
            let v = eval(&x);
            if best.is_none_or(|(b, _)| v < b) {
                best = Some((v, mask));
            }
        }
        best
    });
    let best = per_chunk.into_iter().flatten().fold(None::<(f64, u64)>, |acc, (v, m)| match acc {
        Some((b, _)) if b <= v => acc,
        _ => Some((v, m)),
    });
    Ok(best.map(|(v, m)| (v, spins_from_mask(m, n))))
}

/// Exact minimum of the sign-form objective over feasible ±1 vectors.
pub fn brute_force(q: &SignProgram) -> Result<BruteForce> {
    brute_force_with(q, Exec::default())
}

pub fn brute_force_with(q: &SignProgram, exec: Exec) -> Result<BruteForce> {
    let found = enumerate_min(q.n(), |x| q.raw_objective(x), |x| q.is_feasible(x), exec)?;
    Ok(match found {
        Some((value, x)) => BruteForce { value, argmin: Some(x) },
        None => BruteForce { value: f64::INFINITY, argmin: None },
    })
}

/// Exact minimum of Q over {−1,1}ⁿ⁺¹.
pub fn form_minimum(mc: &MaxCutInstance, exec: Exec) -> Result<(f64, Vec<i8>)> {
    let found = enumerate_min(mc.n_nodes(), |x| mc.form(x), |_| true, exec)?;
    Ok(found.expect("unconstrained enumeration is never empty"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_knapsack_n4() {
        let q = knapsack_fixed(4, 34).unwrap();
        let bf = brute_force(&q).unwrap();
        assert_eq!(bf.value, 34.0);
        assert_eq!(bf.argmin, Some(vec![1, 1, 1, 1]));

        // aᵀx = 34 − 2·(flipped weight); b = 20 flips only the 7.
        let bf = brute_force(&knapsack_fixed(4, 20).unwrap()).unwrap();
        assert_eq!(bf.value, 12.0);
        assert_eq!(bf.argmin, Some(vec![1, -1, 1, 1]));

        // No subset of {3,7,11,13} weighs 17, so b = 0 is infeasible.
        assert!(!brute_force(&knapsack_fixed(4, 0).unwrap()).unwrap().feasible());

        for b in [-33, -1, 1, 7, 33] {
            let bf = brute_force(&knapsack_fixed(4, b).unwrap()).unwrap();
            assert!(!bf.feasible());
            assert_eq!(bf.value, f64::INFINITY);
        }
        assert!(knapsack_fixed(5, 0).is_err());
        assert!(knapsack_fixed(4, 35).is_err());
    }

    #[test]
    fn published_vectors_sum_to_their_bounds() {
        assert_eq!(KNAPSACK_10_A.iter().sum::<i64>(), 190);
        assert_eq!(KNAPSACK_10_C.iter().sum::<i64>(), 190);
        assert_eq!(KNAPSACK_15_A.iter().sum::<i64>(), 425);
        assert_eq!(KNAPSACK_15_C.iter().sum::<i64>(), 425);
        assert_eq!(knapsack_weights(6), vec![3, 7, 11, 13, 17, 19]);
        assert_eq!(&knapsack_weights(12)[10..], &[41, 43]);
    }

    #[test]
    fn unconstrained_brute_force() {
        let q = SignProgram::new(vec![1.0], Mat::zeros(1, 1), vec![], vec![]).unwrap();
        let bf = brute_force(&q).unwrap();
        assert_eq!(bf.value, -1.0);
        assert_eq!(bf.argmin, Some(vec![-1]));
    }

    #[test]
    fn random_knapsack_degenerate_weight_and_determinism() {
        let q = knapsack_random(10, 0.0, 3, 0).unwrap();
        let a: Vec<f64> = KNAPSACK_10_A.iter().map(|&v| v as f64).collect();
        assert_eq!(q.c(), a.as_slice());
        let x = knapsack_random(10, 10.0, 42, 2).unwrap();
        let y = knapsack_random(10, 10.0, 42, 2).unwrap();
        assert_eq!(x, y);
        assert_ne!(x, knapsack_random(10, 10.0, 43, 2).unwrap());
        assert!(x.c().iter().zip(&a).all(|(c, a)| *c >= *a && *c < a + 10.0));
    }

    #[test]
    fn quadratic_knapsack_matrix() {
        let q = quadratic_knapsack_random(8, 10.0, 5, 0.5, 0).unwrap();
        assert_eq!(q.f(), &q.f().transpose());
        assert!((0..8).all(|i| q.f()[(i, i)] == 0.0));
        let indefinite = (0..10u64).any(|seed| {
            let q = quadratic_knapsack_random(8, 10.0, seed, 0.5, 0).unwrap();
            crate::linalg::min_eigenvalue(q.f()) < 0.0
        });
        assert!(indefinite);
    }

    #[test]
    fn two_node_kcluster_units() {
        let (p, q) = kcluster(2, 1, 0.0, 0).unwrap();
        let a = p.f()[(0, 1)];
        assert!(a > 0.0 && a < 1.0);
        // 0/1 optimum 0 at x = (1,0); sign optimum −2a at x = (1,−1).
        let bf = brute_force(&q).unwrap();
        assert!((bf.value + 2.0 * a).abs() < 1e-15);
        assert!((q.to_original(bf.value)).abs() < 1e-15);
        assert_eq!(q.c(), &[2.0 * a, 2.0 * a]);
        assert_eq!(q.b(), &[0]);
    }

    #[test]
    fn kcluster_edge_cases() {
        let (_, q) = kcluster(5, 0, 0.3, 1).unwrap();
        let bf = brute_force(&q).unwrap();
        assert_eq!(bf.argmin, Some(vec![-1; 5]));
        assert!(q.to_original(bf.value).abs() < 1e-12);

        let (_, q) = kcluster(5, 6, 0.3, 1).unwrap();
        assert!(!brute_force(&q).unwrap().feasible());
    }

    #[test]
    fn kcluster_sparsity_statistics() {
        let n = 100;
        let p = 0.8;
        let (zo, _) = kcluster(n, 10, p, 11).unwrap();
        let f = zo.f();
        assert_eq!(f, &f.transpose());
        assert!((0..n).all(|i| f[(i, i)] == 0.0));
        let pairs = (n * (n - 1) / 2) as f64;
        let zeros = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).filter(|&(i, j)| f[(i, j)] == 0.0).count();
        let sigma = (pairs * p * (1.0 - p)).sqrt();
        assert!(((zeros as f64) - pairs * p).abs() < 5.0 * sigma);
    }

    #[test]
    fn serial_and_parallel_enumeration_agree() {
        let q = quadratic_knapsack_random(14, 10.0, 9, 0.7, 4).unwrap();
        let a = brute_force_with(&q, Exec::Serial).unwrap();
        let b = brute_force_with(&q, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn ties_break_lexicographically() {
        let q = SignProgram::new(vec![0.0; 3], Mat::zeros(3, 3), vec![vec![1, 1, 1]], vec![1]).unwrap();
        let bf = brute_force(&q).unwrap();
        assert_eq!(bf.argmin, Some(vec![-1, 1, 1]));
    }

    #[test]
    fn cap_is_enforced() {
        let q = SignProgram::new(vec![0.0; 27], Mat::zeros(27, 27), vec![], vec![]).unwrap();
        assert!(matches!(brute_force(&q), Err(Error::TooLarge { .. })));
    }
}
