//! Polynomial bases: physicists' Hermite and monomial.
//!
//! Hermite polynomials follow the Rodrigues convention
//! `H_n(x) = (-1)^n e^{x²} dⁿ/dxⁿ e^{-x²}`, evaluated through the three-term
//! recurrence `H_{k+1} = 2x·H_k − 2k·H_{k−1}`. Conversions between the two
//! families go through exact rational change-of-basis tables.

use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::quadrature;

/// Highest degree supported by [`to_monomial`] / [`to_hermite`]. The exact
/// tables stay inside `i128` well past this point.
pub const MAX_CONVERSION_DEGREE: usize = 24;

/// Polynomial family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    HermitePhysicists,
    Monomial,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::HermitePhysicists => "hermite_physicists",
            Family::Monomial => "monomial",
        }
    }
}

/// A family plus the highest index used; the basis has `degree + 1` functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisSpec {
    pub family: Family,
    pub degree: usize,
}

impl BasisSpec {
    pub fn new(family: Family, degree: usize) -> Self {
        Self { family, degree }
    }

    pub fn hermite(degree: usize) -> Self {
        Self::new(Family::HermitePhysicists, degree)
    }

    pub fn monomial(degree: usize) -> Self {
        Self::new(Family::Monomial, degree)
    }

    pub fn dim(&self) -> usize {
        self.degree + 1
    }
}

/// Expansion coefficients `b_0..b_n` of a polynomial in a given basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientVector {
    basis: BasisSpec,
    coefficients: Vec<f64>,
}

impl CoefficientVector {
    pub fn new(basis: BasisSpec, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.len() != basis.dim() {
            return Err(Error::domain(format!(
                "expected {} coefficients for degree {}, got {}",
                basis.dim(),
                basis.degree,
                coefficients.len()
            )));
        }
        if let Some(k) = coefficients.iter().position(|c| !c.is_finite()) {
            return Err(Error::domain(format!("coefficient {k} is not finite")));
        }
        Ok(Self {
            basis,
            coefficients,
        })
    }

    /// Builds a vector from a non-empty coefficient list, degree = len − 1.
    pub fn from_coefficients(family: Family, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::domain("coefficient list is empty"));
        }
        Self::new(BasisSpec::new(family, coefficients.len() - 1), coefficients)
    }

    pub fn basis(&self) -> BasisSpec {
        self.basis
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<f64> {
        self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `Σ b_k ω_k(x)` in the vector's own basis.
    pub fn eval(&self, x: f64) -> f64 {
        basis_eval_all(self.basis, x)
            .iter()
            .zip(&self.coefficients)
            .map(|(w, b)| w * b)
            .sum()
    }

    /// Negated copy.
    pub fn neg(&self) -> Self {
        Self {
            basis: self.basis,
            coefficients: self.coefficients.iter().map(|c| -c).collect(),
        }
    }

    /// Copy scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            basis: self.basis,
            coefficients: self.coefficients.iter().map(|c| c * factor).collect(),
        }
    }
}

/// Arithmetic needed by the recurrences, so the same code runs in `f64` and
/// in double-double.
pub(crate) trait Real:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Mul<f64, Output = Self>
{
    fn from_f64(v: f64) -> Self;
}

impl Real for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
}

impl Real for DoubleDouble {
    fn from_f64(v: f64) -> Self {
        DoubleDouble::from_f64(v)
    }
}

/// Writes `ω_0(x)..ω_{out.len()-1}(x)` into `out`.
pub(crate) fn fill_basis<T: Real>(family: Family, x: T, out: &mut [T]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    out[0] = T::from_f64(1.0);
    if n == 1 {
        return;
    }
    match family {
        Family::HermitePhysicists => {
            out[1] = x * 2.0;
            for k in 1..n - 1 {
                out[k + 1] = x * out[k] * 2.0 - out[k - 1] * (2.0 * k as f64);
            }
        }
        Family::Monomial => {
            for k in 1..n {
                out[k] = out[k - 1] * x;
            }
        }
    }
}

/// Value of the `k`-th basis function at `x`.
pub fn basis_eval(spec: BasisSpec, k: usize, x: f64) -> Result<f64> {
    if k > spec.degree {
        return Err(Error::domain(format!(
            "basis index {k} exceeds degree {}",
            spec.degree
        )));
    }
    if !x.is_finite() {
        return Err(Error::domain("evaluation point is not finite"));
    }
    let mut buf = vec![0.0; k + 1];
    fill_basis(spec.family, x, &mut buf);
    Ok(buf[k])
}

/// All basis values `ω_0(x)..ω_n(x)` from one recurrence pass.
pub fn basis_eval_all(spec: BasisSpec, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; spec.dim()];
    fill_basis(spec.family, x, &mut out);
    out
}

type Rational = Ratio<i128>;

struct ConversionTables {
    /// `hermite_in_monomial[k][j]`: coefficient of `x^j` in `H_k`.
    hermite_in_monomial: Vec<Vec<i128>>,
    /// `monomial_in_hermite[m][k]`: coefficient of `H_k` in `x^m`.
    monomial_in_hermite: Vec<Vec<Rational>>,
}

fn tables() -> &'static ConversionTables {
    static TABLES: OnceLock<ConversionTables> = OnceLock::new();
    TABLES.get_or_init(|| build_tables(MAX_CONVERSION_DEGREE))
}

fn build_tables(max_degree: usize) -> ConversionTables {
    let n = max_degree + 1;
    // Integer recurrence on the coefficient arrays.
    let mut h: Vec<Vec<i128>> = vec![vec![0; n]; n];
    h[0][0] = 1;
    if n > 1 {
        h[1][1] = 2;
    }
    for k in 1..n.saturating_sub(1) {
        for j in 0..=k + 1 {
            let shifted = if j > 0 { 2 * h[k][j - 1] } else { 0 };
            h[k + 1][j] = shifted - 2 * (k as i128) * h[k - 1][j];
        }
    }

    // Invert the upper-triangular matrix M[j][k] = h[k][j] one unit vector at a time.
    let mut inv = vec![vec![Rational::from_integer(0); n]; n];
    for (m, row) in inv.iter_mut().enumerate() {
        for j in (0..=m).rev() {
            let mut acc = Rational::from_integer(if j == m { 1 } else { 0 });
            for k in j + 1..=m {
                acc -= row[k] * Rational::from_integer(h[k][j]);
            }
            row[j] = acc / Rational::from_integer(h[j][j]);
        }
    }

    ConversionTables {
        hermite_in_monomial: h,
        monomial_in_hermite: inv,
    }
}

fn rational_to_f64(r: &Rational) -> f64 {
    // Denominators are powers of two, so this division is exact whenever the
    // numerator fits the mantissa.
    *r.numer() as f64 / *r.denom() as f64
}

fn check_conversion_degree(degree: usize) -> Result<()> {
    if degree > MAX_CONVERSION_DEGREE {
        return Err(Error::domain(format!(
            "basis conversion supports degree ≤ {MAX_CONVERSION_DEGREE}, got {degree}"
        )));
    }
    Ok(())
}

/// Monomial coefficients of a Hermite expansion.
pub fn to_monomial(cv: &CoefficientVector) -> Result<CoefficientVector> {
    if cv.basis.family != Family::HermitePhysicists {
        return Err(Error::domain(
            "to_monomial expects a Hermite coefficient vector",
        ));
    }
    check_conversion_degree(cv.basis.degree)?;
    let h = &tables().hermite_in_monomial;
    let n = cv.len();
    let out = (0..n)
        .map(|j| {
            let acc = (j..n).fold(DoubleDouble::from_f64(0.0), |acc, k| {
                acc + DoubleDouble::mul_f64_exact(cv.coefficients[k], h[k][j] as f64)
            });
            f64::from(acc)
        })
        .collect();
    CoefficientVector::new(BasisSpec::monomial(cv.basis.degree), out)
}

/// Hermite coefficients of a monomial expansion (inverse of [`to_monomial`]).
pub fn to_hermite(cv: &CoefficientVector) -> Result<CoefficientVector> {
    if cv.basis.family != Family::Monomial {
        return Err(Error::domain(
            "to_hermite expects a monomial coefficient vector",
        ));
    }
    check_conversion_degree(cv.basis.degree)?;
    let t = &tables().monomial_in_hermite;
    let n = cv.len();
    let out = (0..n)
        .map(|k| {
            let acc = (k..n).fold(DoubleDouble::from_f64(0.0), |acc, m| {
                acc + DoubleDouble::mul_f64_exact(cv.coefficients[m], rational_to_f64(&t[m][k]))
            });
            f64::from(acc)
        })
        .collect();
    CoefficientVector::new(BasisSpec::hermite(cv.basis.degree), out)
}

/// Exact integer coefficients of `H_k` in powers of `x` (index `j` ↦ `x^j`).
pub fn hermite_monomial_coefficients(k: usize) -> Result<Vec<i128>> {
    check_conversion_degree(k)?;
    Ok(tables().hermite_in_monomial[k][..=k].to_vec())
}

/// Evaluates monomial coefficients by Horner's rule.
pub fn horner(coefficients: &[f64], x: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Weight (and integration range) of a Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GramWeight {
    /// `w(x) = 1` on `[a, b]`.
    Unit { a: f64, b: f64 },
    /// `w(x) = e^{−x²}` on the real line, truncated to `[−12, 12]`.
    Gauss,
}

/// Truncation half-width for the Gaussian weight.
pub const GAUSS_TRUNCATION: f64 = 12.0;

/// `G[j][k] = ∫ ω_j ω_k w dx` by composite Simpson refinement.
pub fn gram_matrix(spec: BasisSpec, weight: GramWeight) -> Result<Vec<Vec<f64>>> {
    let (a, b, gauss) = match weight {
        GramWeight::Unit { a, b } => {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(Error::domain(format!("invalid interval [{a}, {b}]")));
            }
            (a, b, false)
        }
        GramWeight::Gauss => (-GAUSS_TRUNCATION, GAUSS_TRUNCATION, true),
    };
    let n = spec.dim();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (j..n).map(move |k| (j, k))).collect();
    let integrate = |&(j, k): &(usize, usize)| -> Result<f64> {
        let f = |x: f64| {
            let w = basis_eval_all(spec, x);
            let v = w[j] * w[k];
            if gauss {
                v * (-x * x).exp()
            } else {
                v
            }
        };
        quadrature::simpson(f, a, b, quadrature::DEFAULT_TOLERANCE)
    };
    let values: Vec<Result<f64>> = crate::par::map(&pairs, integrate);
    let mut g = vec![vec![0.0; n]; n];
    for (&(j, k), v) in pairs.iter().zip(values) {
        let v = v?;
        g[j][k] = v;
        g[k][j] = v;
    }
    Ok(g)
}
