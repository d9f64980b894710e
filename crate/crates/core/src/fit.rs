//! Collocation fits of a series onto `[0, 1]` nodes.
//!
//! A series observed at years `y_0..y_n` is mapped affinely onto `[0, 1]`
//! and the coefficients `b_k` are chosen so that `Σ_k b_k ω_k(x_j) = f(x_j)`
//! at every node. The linear system is solved in double-double precision
//! (pivoted LU and one refinement step); the resulting interpolant is kept
//! as `f64` coefficients plus their low-order tails, so evaluation at the
//! nodes reproduces the data even when the coefficients cancel massively.

use serde::{Deserialize, Serialize};

use crate::basis::{fill_basis, BasisSpec, CoefficientVector};
use crate::dataio::TimeSeries;
use crate::error::{Error, Result};
use crate::linalg::{self, ext, Ext, Matrix};
use crate::par::{self, Execution};

/// Affine map from calendar years onto `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainMap {
    year_min: i32,
    year_max: i32,
}

impl DomainMap {
    pub fn new(year_min: i32, year_max: i32) -> Result<Self> {
        if year_max <= year_min {
            return Err(Error::domain(format!(
                "domain map needs year_max > year_min, got {year_min}..{year_max}"
            )));
        }
        Ok(Self { year_min, year_max })
    }

    /// Map spanning the first and last year of `series`.
    pub fn for_series(series: &TimeSeries) -> Result<Self> {
        match (series.years.first(), series.years.last()) {
            (Some(&a), Some(&b)) => Self::new(a, b),
            _ => Err(Error::domain("series has no years")),
        }
    }

    pub fn year_min(&self) -> i32 {
        self.year_min
    }

    pub fn year_max(&self) -> i32 {
        self.year_max
    }

    pub fn to_unit(&self, year: f64) -> f64 {
        (year - self.year_min as f64) / (self.year_max - self.year_min) as f64
    }

    pub fn to_year(&self, x: f64) -> f64 {
        self.year_min as f64 + x * (self.year_max - self.year_min) as f64
    }
}

/// How the coefficients were determined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMode {
    /// Square collocation system, exact interpolation.
    Interpolation,
    /// Overdetermined system solved in the least-squares sense (extension).
    LeastSquares,
}

/// Coefficients of one fitted series plus diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub label: String,
    pub coefficients: CoefficientVector,
    /// Low-order parts: the fitted coefficient `k` is `coefficients[k] + coefficient_tails[k]`.
    pub coefficient_tails: Vec<f64>,
    /// `max_j |reconstructed − observed| / max(1, max|observed|)` at the nodes.
    pub residual_max_rel: f64,
    /// Same residual when only the rounded `f64` coefficients are used with
    /// plain `f64` evaluation.
    pub rounded_residual_max_rel: f64,
    /// 1-norm condition estimate of the system matrix.
    pub condition_estimate: f64,
    pub refined: bool,
    pub mode: FitMode,
}

impl FitResult {
    fn ext_coefficients(&self) -> impl Iterator<Item = Ext> + '_ {
        self.coefficients
            .coefficients()
            .iter()
            .zip(&self.coefficient_tails)
            .map(|(hi, lo)| ext(*hi) + *lo)
    }

    /// Evaluates the fitted expansion at `x ∈ ℝ` (unit-interval coordinates).
    pub fn eval_unit(&self, x: f64) -> f64 {
        let spec = self.coefficients.basis();
        let mut w = vec![ext(0.0); spec.dim()];
        fill_basis(spec.family, ext(x), &mut w);
        let sum = self
            .ext_coefficients()
            .zip(&w)
            .fold(ext(0.0), |acc, (b, wk)| acc + b * *wk);
        f64::from(sum)
    }
}

/// Where to evaluate a reconstruction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Year(f64),
    UnitInterval(f64),
}

/// Value of a fitted expansion at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Reconstruction {
    pub value: f64,
    /// Unit-interval coordinate that was evaluated.
    pub x: f64,
    /// The point lies outside `[0, 1]`.
    pub extrapolated: bool,
}

/// `Σ_k b_k ω_k(x)` at the mapped point.
pub fn reconstruct(fr: &FitResult, map: &DomainMap, at: Point) -> Reconstruction {
    let x = match at {
        Point::Year(y) => map.to_unit(y),
        Point::UnitInterval(x) => x,
    };
    Reconstruction {
        value: fr.eval_unit(x),
        x,
        extrapolated: !(0.0..=1.0).contains(&x),
    }
}

fn check_nodes(nodes: &[f64]) -> Result<()> {
    if let Some(i) = nodes.iter().position(|x| !x.is_finite()) {
        return Err(Error::domain(format!("node {i} is not finite")));
    }
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if nodes[i] == nodes[j] {
                return Err(Error::domain(format!(
                    "duplicate collocation nodes at positions {i} and {j} ({})",
                    nodes[i]
                )));
            }
        }
    }
    Ok(())
}

fn design_matrix(spec: BasisSpec, nodes: &[f64]) -> Matrix {
    let mut rows = Vec::with_capacity(nodes.len());
    for &x in nodes {
        let mut w = vec![ext(0.0); spec.dim()];
        fill_basis(spec.family, ext(x), &mut w);
        rows.push(w);
    }
    Matrix::from_fn(nodes.len(), spec.dim(), |i, j| rows[i][j])
}

/// Square matrix with entry `(j, k) = ω_k(nodes[j])`.
pub fn collocation_matrix(spec: BasisSpec, nodes: &[f64]) -> Result<Vec<Vec<f64>>> {
    if nodes.len() != spec.dim() {
        return Err(Error::domain(format!(
            "need {} nodes for degree {}, got {}",
            spec.dim(),
            spec.degree,
            nodes.len()
        )));
    }
    check_nodes(nodes)?;
    Ok(design_matrix(spec, nodes).to_f64_rows())
}

fn series_nodes(series: &TimeSeries, map: &DomainMap) -> Result<Vec<f64>> {
    if series.years.len() != series.values.len() {
        return Err(Error::domain("years and values differ in length"));
    }
    if let Some(y) = series
        .years
        .iter()
        .find(|&&y| y < map.year_min || y > map.year_max)
    {
        return Err(Error::domain(format!(
            "year {y} lies outside {}..{}",
            map.year_min, map.year_max
        )));
    }
    if series.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("series contains non-finite values"));
    }
    let nodes: Vec<f64> = series
        .years
        .iter()
        .map(|&y| map.to_unit(y as f64))
        .collect();
    check_nodes(&nodes)?;
    Ok(nodes)
}

fn build_result(
    series: &TimeSeries,
    spec: BasisSpec,
    nodes: &[f64],
    solution: linalg::Solution,
    mode: FitMode,
) -> Result<FitResult> {
    let hi: Vec<f64> = solution.x.iter().map(|v| v.hi()).collect();
    let lo: Vec<f64> = solution.x.iter().map(|v| v.lo()).collect();
    let coefficients = CoefficientVector::new(spec, hi).map_err(|_| {
        Error::numerical(
            "solution has non-finite coefficients",
            Some(solution.condition_estimate),
        )
    })?;
    let mut fr = FitResult {
        label: series.label.clone(),
        coefficients,
        coefficient_tails: lo,
        residual_max_rel: 0.0,
        rounded_residual_max_rel: 0.0,
        condition_estimate: solution.condition_estimate,
        refined: solution.refined,
        mode,
    };
    let scale = series.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut res = 0.0f64;
    let mut rounded = 0.0f64;
    for (&x, &f) in nodes.iter().zip(&series.values) {
        res = res.max((fr.eval_unit(x) - f).abs() / scale);
        rounded = rounded.max((fr.coefficients.eval(x) - f).abs() / scale);
    }
    fr.residual_max_rel = res;
    fr.rounded_residual_max_rel = rounded;
    Ok(fr)
}

/// Interpolating fit: the series must have exactly `degree + 1` observations.
pub fn fit_series(series: &TimeSeries, spec: BasisSpec, map: &DomainMap) -> Result<FitResult> {
    if series.len() != spec.dim() {
        return Err(Error::domain(format!(
            "interpolation at degree {} needs {} observations, series has {}",
            spec.degree,
            spec.dim(),
            series.len()
        )));
    }
    let nodes = series_nodes(series, map)?;
    let a = design_matrix(spec, &nodes);
    let solution = linalg::solve_square(&a, &series.values)?;
    build_result(series, spec, &nodes, solution, FitMode::Interpolation)
}

/// Least-squares fit with fewer basis functions than observations.
pub fn fit_series_least_squares(
    series: &TimeSeries,
    spec: BasisSpec,
    map: &DomainMap,
) -> Result<FitResult> {
    if series.len() < spec.dim() {
        return Err(Error::domain(format!(
            "least squares at degree {} needs at least {} observations, series has {}",
            spec.degree,
            spec.dim(),
            series.len()
        )));
    }
    let nodes = series_nodes(series, map)?;
    let a = design_matrix(spec, &nodes);
    let solution = linalg::solve_least_squares(&a, &series.values)?;
    build_result(series, spec, &nodes, solution, FitMode::LeastSquares)
}

/// Fits every series (same year grid required), preserving order. Errors carry the series label.
pub fn fit_all(dataset: &[TimeSeries], spec: BasisSpec, map: &DomainMap) -> Result<Vec<FitResult>> {
    fit_all_with(
        dataset,
        spec,
        map,
        FitMode::Interpolation,
        Execution::default(),
    )
}

/// [`fit_all`] with explicit fit mode and scheduling.
pub fn fit_all_with(
    dataset: &[TimeSeries],
    spec: BasisSpec,
    map: &DomainMap,
    mode: FitMode,
    exec: Execution,
) -> Result<Vec<FitResult>> {
    check_shared_grid(dataset)?;
    par::map_with(dataset, exec, |s| {
        match mode {
            FitMode::Interpolation => fit_series(s, spec, map),
            FitMode::LeastSquares => fit_series_least_squares(s, spec, map),
        }
        .map_err(|e| e.in_series(&s.label))
    })
    .into_iter()
    .collect()
}

pub(crate) fn check_shared_grid(dataset: &[TimeSeries]) -> Result<()> {
    if let Some(first) = dataset.first() {
        if let Some(s) = dataset.iter().find(|s| s.years != first.years) {
            return Err(
                Error::domain(format!("year grid differs from '{}'", first.label))
                    .in_series(&s.label),
            );
        }
    }
    Ok(())
}
