//! τ-covariance (cosine of the angle between coefficient vectors) and
//! Pearson correlation, singly and as labeled pairwise matrices.

use serde::{Deserialize, Serialize};

use crate::basis::{BasisSpec, CoefficientVector};
use crate::dataio::TimeSeries;
use crate::error::{Error, Result};
use crate::fit::{self, check_shared_grid, DomainMap, FitMode};
use crate::par::{self, Execution};

/// Overshoot beyond ±1 that is silently clamped.
pub const CLAMP_SLACK: f64 = 1e-12;

/// Similarity measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    TauCovariance,
    Pearson,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::TauCovariance => "tau_covariance",
            Method::Pearson => "pearson",
        }
    }
}

/// Square labeled matrix of pairwise similarities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityMatrix {
    pub labels: Vec<String>,
    pub method: Method,
    pub entries: Vec<Vec<f64>>,
    /// τ only: whether index 0 enters the sums.
    pub k0_included: bool,
}

impl SimilarityMatrix {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn get(&self, row: &str, col: &str) -> Option<f64> {
        Some(self.entries[self.index_of(row)?][self.index_of(col)?])
    }
}

fn active(v: &CoefficientVector, k0_included: bool) -> &[f64] {
    let c = v.coefficients();
    if k0_included {
        c
    } else {
        &c[1..]
    }
}

fn check_same_basis(a: &CoefficientVector, b: &CoefficientVector) -> Result<()> {
    if a.basis() != b.basis() {
        return Err(Error::domain(format!(
            "basis mismatch: {} degree {} vs {} degree {}",
            a.basis().family.name(),
            a.basis().degree,
            b.basis().family.name(),
            b.basis().degree
        )));
    }
    Ok(())
}

/// `Σ a_k b_k` over `k = 0..n`, or `k = 1..n` when `k0_included` is false.
pub fn dot(a: &CoefficientVector, b: &CoefficientVector, k0_included: bool) -> Result<f64> {
    check_same_basis(a, b)?;
    Ok(active(a, k0_included)
        .iter()
        .zip(active(b, k0_included))
        .map(|(x, y)| x * y)
        .sum())
}

/// Power of two near `max|v|`, so dividing by it is exact.
fn pow2_scale(v: &[f64]) -> f64 {
    let m = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if m == 0.0 {
        return 1.0;
    }
    2f64.powi(m.log2().floor() as i32)
}

/// Cosine of the angle between two coefficient vectors over the active range.
pub fn tau_covariance(
    a: &CoefficientVector,
    b: &CoefficientVector,
    k0_included: bool,
) -> Result<f64> {
    check_same_basis(a, b)?;
    let (av, bv) = (active(a, k0_included), active(b, k0_included));
    cosine(av, bv)
}

/// Cosine similarity of two raw vectors, with power-of-two prescaling so
/// huge or tiny magnitudes neither overflow nor lose sign symmetry.
pub fn cosine(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::domain("vectors differ in length"));
    }
    let (sa, sb) = (pow2_scale(a), pow2_scale(b));
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for (x, y) in a.iter().zip(b) {
        let (x, y) = (x / sa, y / sb);
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return Err(Error::domain("undefined angle: zero-norm vector"));
    }
    clamp_unit(dot / (na.sqrt() * nb.sqrt()))
}

fn clamp_unit(v: f64) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::numerical("similarity is not finite", None));
    }
    if v.abs() <= 1.0 {
        Ok(v)
    } else if v.abs() - 1.0 < CLAMP_SLACK {
        Ok(v.signum())
    } else {
        Err(Error::numerical(
            format!("similarity {v} overshoots [-1, 1]"),
            None,
        ))
    }
}

/// Sample Pearson correlation, two-pass mean-centered.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::domain(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::domain("need at least 2 observations"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::domain("zero variance"));
    }
    clamp_unit(sxy / (sxx.sqrt() * syy.sqrt()))
}

/// Fills a symmetric matrix from a pairwise function evaluated once per
/// unordered pair; diagonal is exactly 1.
fn pairwise<T: Sync>(
    items: &[T],
    exec: Execution,
    f: impl Fn(&T, &T) -> Result<f64> + Sync + Send,
) -> Result<Vec<Vec<f64>>> {
    let n = items.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let values = par::map_with(&pairs, exec, |&(i, j)| f(&items[i], &items[j]));
    let mut m = vec![vec![0.0; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for (&(i, j), v) in pairs.iter().zip(values) {
        let v = v?;
        m[i][j] = v;
        m[j][i] = v;
    }
    Ok(m)
}

/// Pairwise matrix over a dataset. τ fits every series once in `spec`.
pub fn similarity_matrix(
    dataset: &[TimeSeries],
    method: Method,
    spec: BasisSpec,
    map: &DomainMap,
    k0_included: bool,
) -> Result<SimilarityMatrix> {
    similarity_matrix_with(
        dataset,
        method,
        spec,
        map,
        k0_included,
        Execution::default(),
    )
}

/// [`similarity_matrix`] with explicit scheduling.
pub fn similarity_matrix_with(
    dataset: &[TimeSeries],
    method: Method,
    spec: BasisSpec,
    map: &DomainMap,
    k0_included: bool,
    exec: Execution,
) -> Result<SimilarityMatrix> {
    if dataset.len() < 2 {
        return Err(Error::domain("a similarity matrix needs at least 2 series"));
    }
    check_shared_grid(dataset)?;
    let labels: Vec<String> = dataset.iter().map(|s| s.label.clone()).collect();
    let entries = match method {
        Method::TauCovariance => {
            let fits = fit::fit_all_with(dataset, spec, map, FitMode::Interpolation, exec)?;
            let coeffs: Vec<CoefficientVector> = fits.into_iter().map(|f| f.coefficients).collect();
            tau_matrix_entries(&coeffs, &labels, k0_included, exec)?
        }
        Method::Pearson => pairwise(dataset, exec, |a, b| {
            pearson(&a.values, &b.values)
                .map_err(|e| e.in_series(&format!("{} / {}", a.label, b.label)))
        })?,
    };
    Ok(SimilarityMatrix {
        labels,
        method,
        entries,
        k0_included: method == Method::TauCovariance && k0_included,
    })
}

/// τ matrix from already-fitted coefficient vectors.
pub fn tau_matrix(
    labels: &[String],
    coefficients: &[CoefficientVector],
    k0_included: bool,
) -> Result<SimilarityMatrix> {
    if labels.len() != coefficients.len() {
        return Err(Error::domain(
            "labels and coefficient vectors differ in count",
        ));
    }
    Ok(SimilarityMatrix {
        labels: labels.to_vec(),
        method: Method::TauCovariance,
        entries: tau_matrix_entries(coefficients, labels, k0_included, Execution::default())?,
        k0_included,
    })
}

fn tau_matrix_entries(
    coeffs: &[CoefficientVector],
    labels: &[String],
    k0_included: bool,
    exec: Execution,
) -> Result<Vec<Vec<f64>>> {
    let indexed: Vec<(usize, &CoefficientVector)> = coeffs.iter().enumerate().collect();
    pairwise(&indexed, exec, |(i, a), (j, b)| {
        tau_covariance(a, b, k0_included)
            .map_err(|e| e.in_series(&format!("{} / {}", labels[*i], labels[*j])))
    })
}
