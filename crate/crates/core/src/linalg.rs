//! Dense helpers shared by the solvers.

use nalgebra::{DMatrix, SymmetricEigen};

pub type Mat = DMatrix<f64>;

/// Eigen-decomposition of the symmetric part of `m`.
pub fn sym_eigen(m: &Mat) -> SymmetricEigen<f64, nalgebra::Dyn> {
    SymmetricEigen::new(symmetrize(m))
}

pub fn symmetrize(m: &Mat) -> Mat {
    (m + m.transpose()) * 0.5
}

pub fn min_eigenvalue(m: &Mat) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    sym_eigen(m).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

pub fn max_eigenvalue(m: &Mat) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    sym_eigen(m).eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Frobenius inner product ⟨a, b⟩.
pub fn dot(a: &Mat, b: &Mat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// xᵀ M x for a ±1 (or 0/1) vector, evaluated row by row.
pub fn quad_form_i8(m: &Mat, x: &[i8]) -> f64 {
    let n = x.len();
    let mut total = 0.0;
    for i in 0..n {
        let xi = x[i] as f64;
        if xi == 0.0 {
            continue;
        }
        let mut row = 0.0;
        for j in 0..n {
            row += m[(i, j)] * x[j] as f64;
        }
        total += xi * row;
    }
    total
}

pub fn quad_form(m: &Mat, x: &[f64]) -> f64 {
    let n = x.len();
    let mut total = 0.0;
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            row += m[(i, j)] * x[j];
        }
        total += x[i] * row;
    }
    total
}

pub fn is_symmetric(m: &Mat) -> Option<(usize, usize)> {
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            if m[(i, j)] != m[(j, i)] {
                return Some((i, j));
            }
        }
    }
    None
}

pub fn is_zero(m: &Mat) -> bool {
    m.iter().all(|&v| v == 0.0)
}

/// Moore-Penrose pseudo-inverse of a symmetric PSD matrix.
pub fn psd_pinv(g: &Mat) -> Mat {
    let n = g.nrows();
    if n == 0 {
        return Mat::zeros(0, 0);
    }
    let eig = sym_eigen(g);
    let top = eig.eigenvalues.iter().fold(0.0_f64, |a, &b| a.max(b.abs()));
    let cutoff = top * 1e-12 * n as f64;
    let mut inv = Mat::zeros(n, n);
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam > cutoff {
            let v = eig.eigenvectors.column(k);
            inv += (v * v.transpose()) / lam;
        }
    }
    inv
}
