//! Program representation and exact reformulations.
//!
//! A [`ZeroOneProgram`] lives on {0,1}ⁿ and may mix `=` and `≤` rows; a
//! [`SignProgram`] lives on {−1,1}ⁿ with equality rows only. Constraint data
//! is integral in both: the penalty argument downstream needs every
//! infeasible point to violate some row by at least one unit.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowSense {
    #[serde(rename = "EQ")]
    Eq,
    #[serde(rename = "LE")]
    Le,
}

/// min offset + cᵀx + xᵀFx  s.t.  A x (=|≤) b,  x ∈ {0,1}ⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroOneProgram {
    c: Vec<f64>,
    f: Mat,
    a: Vec<Vec<i64>>,
    b: Vec<i64>,
    sense: Vec<RowSense>,
    offset: f64,
}

/// min scale·(cᵀx + xᵀFx) + offset  s.t.  A x = b,  x ∈ {−1,1}ⁿ.
///
/// `scale` and `offset` map raw sign-form values back to the units of the
/// program the instance was derived from; `scale` is always positive so
/// lower bounds stay lower bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct SignProgram {
    c: Vec<f64>,
    f: Mat,
    a: Vec<Vec<i64>>,
    b: Vec<i64>,
    offset: f64,
    scale: f64,
}

fn check_shapes(c: &[f64], f: &Mat, a: &[Vec<i64>], b: &[i64]) -> Result<()> {
    let n = c.len();
    if f.nrows() != n || f.ncols() != n {
        return Err(Error::Dimension(format!("F is {}x{}, expected {n}x{n}", f.nrows(), f.ncols())));
    }
    if a.len() != b.len() {
        return Err(Error::Dimension(format!("A has {} rows, b has {}", a.len(), b.len())));
    }
    if let Some((k, row)) = a.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::Dimension(format!("row {k} of A has {} entries, expected {n}", row.len())));
    }
    if let Some((i, j)) = linalg::is_symmetric(f) {
        return Err(Error::NotSymmetric(i, j));
    }
    if c.iter().chain(f.iter()).any(|v| !v.is_finite()) {
        return Err(Error::Invalid("objective data must be finite".into()));
    }
    Ok(())
}

fn row_dot_i8(row: &[i64], x: &[i8]) -> i64 {
    row.iter().zip(x).map(|(&a, &v)| a * v as i64).sum()
}

impl ZeroOneProgram {
    pub fn new(c: Vec<f64>, f: Mat, a: Vec<Vec<i64>>, b: Vec<i64>, sense: Vec<RowSense>) -> Result<Self> {
        check_shapes(&c, &f, &a, &b)?;
        if sense.len() != b.len() {
            return Err(Error::Dimension(format!("{} row senses for {} rows", sense.len(), b.len())));
        }
        Ok(Self { c, f, a, b, sense, offset: 0.0 })
    }

    /// Linear program (F = 0) with equality rows.
    pub fn linear_eq(c: Vec<f64>, a: Vec<Vec<i64>>, b: Vec<i64>) -> Result<Self> {
        let n = c.len();
        let m = b.len();
        Self::new(c, Mat::zeros(n, n), a, b, vec![RowSense::Eq; m])
    }

    pub fn with_offset(mut self, offset: f64) -> Self {
        self.offset = offset;
        self
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }
    pub fn m(&self) -> usize {
        self.b.len()
    }
    pub fn c(&self) -> &[f64] {
        &self.c
    }
    pub fn f(&self) -> &Mat {
        &self.f
    }
    pub fn a(&self) -> &[Vec<i64>] {
        &self.a
    }
    pub fn b(&self) -> &[i64] {
        &self.b
    }
    pub fn sense(&self) -> &[RowSense] {
        &self.sense
    }
    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn all_eq(&self) -> bool {
        self.sense.iter().all(|&s| s == RowSense::Eq)
    }

    /// offset + cᵀx + xᵀFx.
    pub fn objective(&self, x: &[u8]) -> f64 {
        let xi: Vec<i8> = x.iter().map(|&v| v as i8).collect();
        let lin: f64 = self.c.iter().zip(x).map(|(c, &v)| c * v as f64).sum();
        self.offset + lin + linalg::quad_form_i8(&self.f, &xi)
    }

    pub fn is_feasible(&self, x: &[u8]) -> bool {
        self.a.iter().zip(&self.b).zip(&self.sense).all(|((row, &b), sense)| {
            let lhs: i64 = row.iter().zip(x).map(|(&a, &v)| a * v as i64).sum();
            match sense {
                RowSense::Eq => lhs == b,
                RowSense::Le => lhs <= b,
            }
        })
    }

    /// Change of variables x̃ = 2x − e.
    ///
    /// The constraint rows are kept integral as (A, 2b − Ae) rather than
    /// the half-integral (A/2, b − Ae/2); both describe the same set.
    pub fn to_sign_form(&self) -> Result<SignProgram> {
        if let Some(row) = self.sense.iter().position(|&s| s != RowSense::Eq) {
            return Err(Error::InequalityRow(row));
        }
        let n = self.n();
        let fe: Vec<f64> = (0..n).map(|i| self.f.row(i).sum()).collect();
        let c: Vec<f64> = self.c.iter().zip(&fe).map(|(c, fe)| (c + fe) / 2.0).collect();
        let efe: f64 = fe.iter().sum();
        let ce: f64 = self.c.iter().sum();
        let b = self.a.iter().zip(&self.b).map(|(row, &b)| 2 * b - row.iter().sum::<i64>()).collect();
        Ok(SignProgram {
            c,
            f: &self.f / 4.0,
            a: self.a.clone(),
            b,
            offset: self.offset + ce / 2.0 + efe / 4.0,
            scale: 1.0,
        })
    }

    /// Replace every `≤` row by an equality with binary slack bits
    /// Σₖ 2ᵏ z_jk, using the fewest bits whose range [0, 2^{s+1} − 1]
    /// covers M_j = b_j − Σᵢ min(0, A_ji).
    pub fn slack_expand(&self) -> Result<ZeroOneProgram> {
        let n = self.n();
        let mut bits = Vec::with_capacity(self.m());
        for (j, (row, (&b, &sense))) in self.a.iter().zip(self.b.iter().zip(&self.sense)).enumerate() {
            if sense == RowSense::Eq {
                bits.push(0usize);
                continue;
            }
            let slack_bound = b - row.iter().map(|&a| a.min(0)).sum::<i64>();
            if slack_bound < 0 {
                return Err(Error::InfeasibleRow { row: j, slack_bound });
            }
            bits.push(bit_count(slack_bound as u64));
        }
        let total: usize = bits.iter().sum();
        let n_new = n + total;
        let mut c = self.c.clone();
        c.resize(n_new, 0.0);
        let mut f = DMatrix::zeros(n_new, n_new);
        f.view_mut((0, 0), (n, n)).copy_from(&self.f);
        let mut a = Vec::with_capacity(self.m());
        let mut col = n;
        for (row, &k) in self.a.iter().zip(&bits) {
            let mut new_row = row.clone();
            new_row.resize(n_new, 0);
            for bit in 0..k {
                new_row[col + bit] = 1i64 << bit;
            }
            col += k;
            a.push(new_row);
        }
        Ok(ZeroOneProgram { c, f, a, b: self.b.clone(), sense: vec![RowSense::Eq; self.m()], offset: self.offset })
    }
}

/// Smallest bit count s+1 with 2^{s+1} − 1 ≥ bound (zero bits for bound 0).
fn bit_count(bound: u64) -> usize {
    (64 - bound.leading_zeros()) as usize
}

impl SignProgram {
    pub fn new(c: Vec<f64>, f: Mat, a: Vec<Vec<i64>>, b: Vec<i64>) -> Result<Self> {
        check_shapes(&c, &f, &a, &b)?;
        Ok(Self { c, f, a, b, offset: 0.0, scale: 1.0 })
    }

    /// Report objective values as `scale·raw + offset`.
    pub fn with_units(mut self, scale: f64, offset: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) || !offset.is_finite() {
            return Err(Error::Invalid(format!("scale must be positive and finite, got {scale}")));
        }
        self.scale = scale;
        self.offset = offset;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }
    pub fn m(&self) -> usize {
        self.b.len()
    }
    pub fn c(&self) -> &[f64] {
        &self.c
    }
    pub fn f(&self) -> &Mat {
        &self.f
    }
    pub fn a(&self) -> &[Vec<i64>] {
        &self.a
    }
    pub fn b(&self) -> &[i64] {
        &self.b
    }
    pub fn offset(&self) -> f64 {
        self.offset
    }
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// cᵀx + xᵀFx in sign-form units.
    pub fn raw_objective(&self, x: &[i8]) -> f64 {
        let lin: f64 = self.c.iter().zip(x).map(|(c, &v)| c * v as f64).sum();
        lin + linalg::quad_form_i8(&self.f, x)
    }

    /// Objective in the units of the source program.
    pub fn objective(&self, x: &[i8]) -> f64 {
        self.to_original(self.raw_objective(x))
    }

    pub fn to_original(&self, raw: f64) -> f64 {
        self.scale * raw + self.offset
    }

    pub fn is_feasible(&self, x: &[i8]) -> bool {
        self.a.iter().zip(&self.b).all(|(row, &b)| row_dot_i8(row, x) == b)
    }

    /// ‖Ax − b‖², exact.
    pub fn violation(&self, x: &[i8]) -> i64 {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(row, &b)| {
                let r = row_dot_i8(row, x) - b;
                r * r
            })
            .sum()
    }

    /// Inverse of [`ZeroOneProgram::to_sign_form`]; `scale` is folded into
    /// the objective. Rows whose right-hand side would be half-integral are
    /// parity-infeasible and are kept doubled to stay integral.
    pub fn to_zero_one(&self) -> ZeroOneProgram {
        let n = self.n();
        let fe: Vec<f64> = (0..n).map(|i| self.f.row(i).sum()).collect();
        let c = self.c.iter().zip(&fe).map(|(c, fe)| self.scale * (2.0 * c - 4.0 * fe)).collect();
        let efe: f64 = fe.iter().sum();
        let ce: f64 = self.c.iter().sum();
        let mut a = Vec::with_capacity(self.m());
        let mut b = Vec::with_capacity(self.m());
        for (row, &rhs) in self.a.iter().zip(&self.b) {
            let shifted = rhs + row.iter().sum::<i64>();
            if shifted % 2 == 0 {
                a.push(row.clone());
                b.push(shifted / 2);
            } else {
                a.push(row.iter().map(|v| 2 * v).collect());
                b.push(shifted);
            }
        }
        ZeroOneProgram {
            c,
            f: &self.f * (4.0 * self.scale),
            a,
            b,
            sense: vec![RowSense::Eq; self.m()],
            offset: self.scale * (efe - ce) + self.offset,
        }
    }
}

/// Either domain, as read from an instance document.
#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    ZeroOne(ZeroOneProgram),
    Sign(SignProgram),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    ZeroOne,
    Sign,
}

/// JSON instance document.
///
/// `F` may be omitted or `null` for F = 0; `sense` defaults to all `EQ`;
/// `offset`/`scale` default to 0/1.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceDoc {
    pub n: usize,
    pub c: Vec<f64>,
    #[serde(rename = "F", default)]
    pub f: Option<Vec<Vec<f64>>>,
    #[serde(rename = "A", default)]
    pub a: Vec<Vec<serde_json::Number>>,
    #[serde(default)]
    pub b: Vec<serde_json::Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sense: Option<Vec<RowSense>>,
    pub domain: Domain,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
}

fn to_int(v: &serde_json::Number, what: &str) -> Result<i64> {
    if let Some(i) = v.as_i64() {
        return Ok(i);
    }
    match v.as_f64() {
        Some(x) if x.fract() == 0.0 && x.abs() < 9.0e15 => Ok(x as i64),
        _ => Err(Error::NonInteger(format!("{what} entry {v}"))),
    }
}

fn matrix_from_rows(rows: &[Vec<f64>], n: usize) -> Result<Mat> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension(format!("F must be {n}x{n}")));
    }
    Ok(Mat::from_fn(n, n, |i, j| rows[i][j]))
}

fn matrix_rows(m: &Mat) -> Option<Vec<Vec<f64>>> {
    if linalg::is_zero(m) {
        return None;
    }
    Some((0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect())
}

fn int_rows(a: &[Vec<i64>]) -> Vec<Vec<serde_json::Number>> {
    a.iter().map(|r| r.iter().map(|&v| v.into()).collect()).collect()
}

impl InstanceDoc {
    pub fn into_instance(self) -> Result<Instance> {
        if self.c.len() != self.n {
            return Err(Error::Dimension(format!("n = {} but c has {} entries", self.n, self.c.len())));
        }
        let f = match &self.f {
            Some(rows) => matrix_from_rows(rows, self.n)?,
            None => Mat::zeros(self.n, self.n),
        };
        let a = self
            .a
            .iter()
            .map(|row| row.iter().map(|v| to_int(v, "A")).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let b = self.b.iter().map(|v| to_int(v, "b")).collect::<Result<Vec<_>>>()?;
        let sense = self.sense.clone().unwrap_or_else(|| vec![RowSense::Eq; b.len()]);
        match self.domain {
            Domain::ZeroOne => {
                if self.scale.is_some_and(|s| s != 1.0) {
                    return Err(Error::Unsupported("scale is only meaningful in the sign domain".into()));
                }
                let p = ZeroOneProgram::new(self.c, f, a, b, sense)?;
                Ok(Instance::ZeroOne(p.with_offset(self.offset.unwrap_or(0.0))))
            }
            Domain::Sign => {
                if sense.len() != b.len() {
                    return Err(Error::Dimension("sense length differs from b".into()));
                }
                if let Some(row) = sense.iter().position(|&s| s != RowSense::Eq) {
                    return Err(Error::Unsupported(format!(
                        "row {row}: LE rows are only supported in the zero_one domain"
                    )));
                }
                let q = SignProgram::new(self.c, f, a, b)?
                    .with_units(self.scale.unwrap_or(1.0), self.offset.unwrap_or(0.0))?;
                Ok(Instance::Sign(q))
            }
        }
    }

    pub fn from_instance(inst: &Instance) -> Self {
        match inst {
            Instance::ZeroOne(p) => InstanceDoc {
                n: p.n(),
                c: p.c.clone(),
                f: matrix_rows(&p.f),
                a: int_rows(&p.a),
                b: p.b.iter().map(|&v| v.into()).collect(),
                sense: Some(p.sense.clone()),
                domain: Domain::ZeroOne,
                offset: (p.offset != 0.0).then_some(p.offset),
                scale: None,
            },
            Instance::Sign(q) => InstanceDoc {
                n: q.n(),
                c: q.c.clone(),
                f: matrix_rows(&q.f),
                a: int_rows(&q.a),
                b: q.b.iter().map(|&v| v.into()).collect(),
                sense: Some(vec![RowSense::Eq; q.m()]),
                domain: Domain::Sign,
                offset: (q.offset != 0.0).then_some(q.offset),
                scale: (q.scale != 1.0).then_some(q.scale),
            },
        }
    }
}

impl Instance {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: InstanceDoc = serde_json::from_str(text)?;
        doc.into_instance()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&InstanceDoc::from_instance(self)).expect("instance serializes")
    }

    pub fn n(&self) -> usize {
        match self {
            Instance::ZeroOne(p) => p.n(),
            Instance::Sign(q) => q.n(),
        }
    }

    pub fn m(&self) -> usize {
        match self {
            Instance::ZeroOne(p) => p.m(),
            Instance::Sign(q) => q.m(),
        }
    }
}
