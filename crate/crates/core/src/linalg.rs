//! Dense solvers in double-double working precision.
//!
//! Collocation matrices built from equispaced nodes are generalized
//! Vandermonde matrices; at degree 15 their 1-norm condition number is around
//! 1e24, far beyond what `f64` factorizations can absorb. Everything here runs
//! on [`DoubleDouble`] (about 32 significant digits).

use crate::dd::DoubleDouble;

use crate::error::{Error, Result};

pub type Ext = DoubleDouble;

/// Relative unit roundoff of double-double arithmetic (2^-104).
pub const EXT_EPSILON: f64 = crate::dd::EPSILON;

pub(crate) fn ext(v: f64) -> Ext {
    DoubleDouble::from_f64(v)
}

fn zero() -> Ext {
    ext(0.0)
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Ext>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Ext) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Ext {
        self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, v: Ext) {
        self.data[i * self.cols + j] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Rounded copy as nested `f64` rows.
    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| f64::from(self.get(i, j))).collect())
            .collect()
    }

    pub fn mul_vec(&self, x: &[Ext]) -> Vec<Ext> {
        (0..self.rows)
            .map(|i| (0..self.cols).fold(zero(), |acc, j| acc + self.get(i, j) * x[j]))
            .collect()
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..self.cols)
            .map(|j| {
                (0..self.rows)
                    .map(|i| f64::from(self.get(i, j)).abs())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|v| f64::from(*v).abs())
            .fold(0.0, f64::max)
    }
}

/// Something that can apply `A⁻¹` and `A⁻ᵀ`.
trait InverseOperator {
    fn dim(&self) -> usize;
    fn solve(&self, b: &[Ext]) -> Vec<Ext>;
    fn solve_transpose(&self, b: &[Ext]) -> Vec<Ext>;
}

fn norm1_vec(v: &[Ext]) -> f64 {
    v.iter().map(|x| f64::from(*x).abs()).sum()
}

/// Hager's estimate of `‖A⁻¹‖₁` with Higham's extra test vector.
fn estimate_inverse_norm1(op: &impl InverseOperator) -> f64 {
    let n = op.dim();
    if n == 0 {
        return 0.0;
    }
    let mut x = vec![ext(1.0 / n as f64); n];
    let mut est = 0.0f64;
    let mut last_j = usize::MAX;
    for iter in 0..5 {
        let y = op.solve(&x);
        let y_norm = norm1_vec(&y);
        if iter > 0 && y_norm <= est {
            break;
        }
        est = y_norm;
        let sign: Vec<Ext> = y
            .iter()
            .map(|v| ext(if f64::from(*v) >= 0.0 { 1.0 } else { -1.0 }))
            .collect();
        let z = op.solve_transpose(&sign);
        let (j, zmax) = z
            .iter()
            .enumerate()
            .map(|(i, v)| (i, f64::from(*v).abs()))
            .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
        let ztx: f64 = z.iter().zip(&x).map(|(a, b)| f64::from(*a * *b)).sum();
        if zmax <= ztx || j == last_j {
            break;
        }
        last_j = j;
        x = vec![zero(); n];
        x[j] = ext(1.0);
    }
    let alt: Vec<Ext> = (0..n)
        .map(|i| {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            let t = if n > 1 {
                i as f64 / (n - 1) as f64
            } else {
                0.0
            };
            ext(s * (1.0 + t))
        })
        .collect();
    let alt_est = 2.0 * norm1_vec(&op.solve(&alt)) / (3.0 * n as f64);
    est.max(alt_est)
}

/// LU factorization with partial (row) pivoting, `P·A = L·U`.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
    norm1: f64,
}

impl Lu {
    /// Factors a square matrix. A pivot below `n·ε·max|A|` is treated as zero.
    pub fn factor(a: &Matrix) -> Result<Self> {
        if a.rows != a.cols {
            return Err(Error::domain(format!(
                "LU needs a square matrix, got {}x{}",
                a.rows, a.cols
            )));
        }
        let n = a.rows;
        let norm1 = a.norm1();
        let tiny = n as f64 * EXT_EPSILON * a.max_abs();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, f64::from(lu.get(i, k)).abs()))
                .fold((k, -1.0), |a, b| if b.1 > a.1 { b } else { a });
            if pmax <= tiny || pmax == 0.0 {
                return Err(Error::numerical(
                    format!("matrix is numerically singular (pivot {k} is {pmax:.3e})"),
                    Some(f64::INFINITY),
                ));
            }
            lu.swap_rows(k, p);
            perm.swap(k, p);
            let pivot = lu.get(k, k);
            for i in k + 1..n {
                let factor = lu.get(i, k) / pivot;
                lu.set(i, k, factor);
                for j in k + 1..n {
                    let v = lu.get(i, j) - factor * lu.get(k, j);
                    lu.set(i, j, v);
                }
            }
        }
        Ok(Self { lu, perm, norm1 })
    }

    /// 1-norm condition estimate `‖A‖₁ · est(‖A⁻¹‖₁)`.
    pub fn condition_estimate(&self) -> f64 {
        (self.norm1 * estimate_inverse_norm1(self)).max(1.0)
    }
}

impl InverseOperator for Lu {
    fn dim(&self) -> usize {
        self.lu.rows
    }

    fn solve(&self, b: &[Ext]) -> Vec<Ext> {
        let n = self.dim();
        let mut y: Vec<Ext> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = y[i];
            for j in 0..i {
                s -= self.lu.get(i, j) * y[j];
            }
            y[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                s -= self.lu.get(i, j) * y[j];
            }
            y[i] = s / self.lu.get(i, i);
        }
        y
    }

    fn solve_transpose(&self, b: &[Ext]) -> Vec<Ext> {
        // Aᵀ = Uᵀ Lᵀ P
        let n = self.dim();
        let mut z = b.to_vec();
        for i in 0..n {
            let mut s = z[i];
            for j in 0..i {
                s -= self.lu.get(j, i) * z[j];
            }
            z[i] = s / self.lu.get(i, i);
        }
        for i in (0..n).rev() {
            let mut s = z[i];
            for j in i + 1..n {
                s -= self.lu.get(j, i) * z[j];
            }
            z[i] = s;
        }
        let mut out = vec![zero(); n];
        for (k, &p) in self.perm.iter().enumerate() {
            out[p] = z[k];
        }
        out
    }
}

impl Lu {
    pub fn solve_vec(&self, b: &[Ext]) -> Vec<Ext> {
        InverseOperator::solve(self, b)
    }
}

/// Result of a refined dense solve.
#[derive(Debug, Clone)]
pub struct Solution {
    pub x: Vec<Ext>,
    pub condition_estimate: f64,
    pub refined: bool,
}

fn residual(a: &Matrix, x: &[Ext], b: &[Ext]) -> Vec<Ext> {
    a.mul_vec(x)
        .iter()
        .zip(b)
        .map(|(ax, bi)| *bi - *ax)
        .collect()
}

/// Solves `A x = b` by pivoted LU plus one step of iterative refinement.
/// Singular matrices are reported with their condition estimate.
pub fn solve_square(a: &Matrix, b: &[f64]) -> Result<Solution> {
    if b.len() != a.rows {
        return Err(Error::domain(
            "right-hand side length does not match matrix",
        ));
    }
    let lu = Lu::factor(a)?;
    let condition_estimate = lu.condition_estimate();
    let rhs: Vec<Ext> = b.iter().map(|&v| ext(v)).collect();
    let mut x = lu.solve_vec(&rhs);
    let r = residual(a, &x, &rhs);
    let dx = lu.solve_vec(&r);
    for (xi, di) in x.iter_mut().zip(dx) {
        *xi += di;
    }
    if x.iter().any(|v| !f64::from(*v).is_finite()) {
        return Err(Error::numerical(
            "solution is not finite",
            Some(condition_estimate),
        ));
    }
    Ok(Solution {
        x,
        condition_estimate,
        refined: true,
    })
}

/// Householder QR of a tall matrix, `A = Q·R`, Q kept as reflectors.
#[derive(Debug, Clone)]
pub struct Qr {
    /// Reflector vectors below the diagonal, `R` on and above it.
    qr: Matrix,
    /// Householder scalars `β_k` for `H_k = I − β v vᵀ`.
    betas: Vec<Ext>,
    diag: Vec<Ext>,
}

impl Qr {
    pub fn factor(a: &Matrix) -> Result<Self> {
        let (m, n) = (a.rows, a.cols);
        if m < n {
            return Err(Error::domain(format!(
                "least squares needs at least as many rows as columns, got {m}x{n}"
            )));
        }
        let tiny = (m as f64) * EXT_EPSILON * a.max_abs();
        let mut qr = a.clone();
        let mut betas = Vec::with_capacity(n);
        let mut diag = Vec::with_capacity(n);
        for k in 0..n {
            let norm = (k..m)
                .fold(zero(), |acc, i| acc + qr.get(i, k) * qr.get(i, k))
                .sqrt();
            if f64::from(norm) <= tiny {
                return Err(Error::numerical(
                    format!("column {k} is numerically dependent"),
                    Some(f64::INFINITY),
                ));
            }
            let akk = qr.get(k, k);
            let alpha = if f64::from(akk) >= 0.0 { -norm } else { norm };
            // v = x − α e_1, stored in place of the column.
            let v0 = akk - alpha;
            qr.set(k, k, v0);
            let vtv = (k..m).fold(zero(), |acc, i| acc + qr.get(i, k) * qr.get(i, k));
            let beta = ext(2.0) / vtv;
            for j in k + 1..n {
                let dot = (k..m).fold(zero(), |acc, i| acc + qr.get(i, k) * qr.get(i, j));
                let s = beta * dot;
                for i in k..m {
                    let v = qr.get(i, j) - s * qr.get(i, k);
                    qr.set(i, j, v);
                }
            }
            betas.push(beta);
            diag.push(alpha);
        }
        Ok(Self { qr, betas, diag })
    }

    fn r(&self, i: usize, j: usize) -> Ext {
        if i == j {
            self.diag[i]
        } else {
            self.qr.get(i, j)
        }
    }

    /// Minimizes `‖A x − b‖₂`.
    pub fn solve_lstsq(&self, b: &[Ext]) -> Vec<Ext> {
        let (m, n) = (self.qr.rows, self.qr.cols);
        let mut y = b.to_vec();
        for k in 0..n {
            let dot = (k..m).fold(zero(), |acc, i| acc + self.qr.get(i, k) * y[i]);
            let s = self.betas[k] * dot;
            for i in k..m {
                y[i] -= s * self.qr.get(i, k);
            }
        }
        let mut x = vec![zero(); n];
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                s -= self.r(i, j) * x[j];
            }
            x[i] = s / self.r(i, i);
        }
        x
    }

    fn r_norm1(&self) -> f64 {
        let n = self.qr.cols;
        (0..n)
            .map(|j| (0..=j).map(|i| f64::from(self.r(i, j)).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

struct TriangularR<'a>(&'a Qr);

impl InverseOperator for TriangularR<'_> {
    fn dim(&self) -> usize {
        self.0.qr.cols
    }

    fn solve(&self, b: &[Ext]) -> Vec<Ext> {
        let n = self.dim();
        let mut x = vec![zero(); n];
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in i + 1..n {
                s -= self.0.r(i, j) * x[j];
            }
            x[i] = s / self.0.r(i, i);
        }
        x
    }

    fn solve_transpose(&self, b: &[Ext]) -> Vec<Ext> {
        let n = self.dim();
        let mut x = vec![zero(); n];
        for i in 0..n {
            let mut s = b[i];
            for j in 0..i {
                s -= self.0.r(j, i) * x[j];
            }
            x[i] = s / self.0.r(i, i);
        }
        x
    }
}

/// Least-squares solve of a tall system by Householder QR plus one
/// refinement step on the residual. The condition estimate is that of `R`.
pub fn solve_least_squares(a: &Matrix, b: &[f64]) -> Result<Solution> {
    if b.len() != a.rows {
        return Err(Error::domain(
            "right-hand side length does not match matrix",
        ));
    }
    let qr = Qr::factor(a)?;
    let condition_estimate = (qr.r_norm1() * estimate_inverse_norm1(&TriangularR(&qr))).max(1.0);
    let rhs: Vec<Ext> = b.iter().map(|&v| ext(v)).collect();
    let mut x = qr.solve_lstsq(&rhs);
    let r = residual(a, &x, &rhs);
    let dx = qr.solve_lstsq(&r);
    for (xi, di) in x.iter_mut().zip(dx) {
        *xi += di;
    }
    Ok(Solution {
        x,
        condition_estimate,
        refined: true,
    })
}
