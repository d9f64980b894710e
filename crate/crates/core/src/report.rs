//! Comparison of computed matrices against reference tables, the published
//! coefficient listings and numeric claims, and rendering to Markdown, CSV
//! and JSON.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::basis::BasisSpec;
use crate::dataio::{self, format_number, ReferenceMatrix, ReferenceSource, TimeSeries};
use crate::error::{Error, Result};
use crate::fit::{DomainMap, FitResult};
use crate::similarity::{self, Method, SimilarityMatrix};

/// Version of every JSON document emitted by this crate.
pub const SCHEMA_VERSION: u32 = 1;

pub const FOREST: &str = "Forest area (sq. km)";
pub const CO2: &str = "CO2 emissions (metric tons per capita)";
pub const ELECTRIC: &str = "Electric power consumption (kWh per capita)";
pub const GDP: &str = "GDP (current US$)";
pub const AGRICULTURE: &str = "Agriculture, forestry, and fishing, value added (% of GDP)";
pub const INDUSTRY: &str = "Industry (including construction), value added (% of GDP)";
pub const EXPORTS: &str = "Exports of goods and services (% of GDP)";
pub const IMPORTS: &str = "Imports of goods and services (% of GDP)";

/// One unordered pair `(i, j)`, `i` before `j` in the computed order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairComparison {
    pub label_i: String,
    pub label_j: String,
    pub computed: f64,
    /// Reference cell at row `i`, column `j`.
    pub reference_ij: f64,
    /// Reference cell at row `j`, column `i`.
    pub reference_ji: f64,
    pub delta_ij: f64,
    pub delta_ji: f64,
    pub reference_asymmetric: bool,
    pub sign_mismatch: bool,
}

/// Comparison of one computed matrix (one k0 setting) against the reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonVariant {
    /// `Some` for τ, `None` for Pearson.
    pub k0_included: Option<bool>,
    pub computed: SimilarityMatrix,
    /// `computed(i, j) − reference(i, j)` in the computed label order.
    pub per_cell_delta: Vec<Vec<f64>>,
    pub max_abs_delta: f64,
    pub pairs: Vec<PairComparison>,
    pub sign_mismatches: Vec<(String, String)>,
}

/// A numeric claim quoted in the text, checked against table and computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimCheck {
    pub label_i: String,
    pub label_j: String,
    pub quoted: f64,
    pub table_ij: Option<f64>,
    pub table_ji: Option<f64>,
    /// Computed value (first variant).
    pub computed: Option<f64>,
    pub matches_table: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub version: u32,
    pub method: Method,
    pub reference: ReferenceMatrix,
    pub variants: Vec<ComparisonVariant>,
    pub claims: Vec<ClaimCheck>,
    pub notes: Vec<String>,
}

/// Reference values with a sign opposite to the computed value count as
/// mismatches; exact zeros never do.
fn opposite_sign(a: f64, b: f64) -> bool {
    (a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0)
}

fn align(computed: &SimilarityMatrix, reference: &ReferenceMatrix) -> Result<Vec<usize>> {
    let mut want: Vec<&str> = computed.labels.iter().map(String::as_str).collect();
    let mut have: Vec<&str> = reference.labels.iter().map(|l| l.trim()).collect();
    want.sort_unstable();
    have.sort_unstable();
    if want != have {
        return Err(Error::domain(format!(
            "label sets differ between computed matrix ({} labels) and reference ({} labels)",
            computed.labels.len(),
            reference.labels.len()
        )));
    }
    Ok(computed
        .labels
        .iter()
        .map(|l| reference.index_of(l).expect("label sets checked"))
        .collect())
}

/// Diffs one computed matrix against a reference.
pub fn compare_variant(
    computed: &SimilarityMatrix,
    reference: &ReferenceMatrix,
) -> Result<ComparisonVariant> {
    let idx = align(computed, reference)?;
    let n = computed.dim();
    let refv = |i: usize, j: usize| reference.entries[idx[i]][idx[j]];
    let per_cell_delta: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| computed.entries[i][j] - refv(i, j))
                .collect()
        })
        .collect();
    let max_abs_delta = per_cell_delta
        .iter()
        .flatten()
        .fold(0.0f64, |m, d| m.max(d.abs()));
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    let mut sign_mismatches = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let c = computed.entries[i][j];
            let (rij, rji) = (refv(i, j), refv(j, i));
            let mismatch = opposite_sign(c, rij) || opposite_sign(c, rji);
            if mismatch {
                sign_mismatches.push((computed.labels[i].clone(), computed.labels[j].clone()));
            }
            pairs.push(PairComparison {
                label_i: computed.labels[i].clone(),
                label_j: computed.labels[j].clone(),
                computed: c,
                reference_ij: rij,
                reference_ji: rji,
                delta_ij: per_cell_delta[i][j],
                delta_ji: per_cell_delta[j][i],
                reference_asymmetric: rij != rji,
                sign_mismatch: mismatch,
            });
        }
    }
    Ok(ComparisonVariant {
        k0_included: (computed.method == Method::TauCovariance).then_some(computed.k0_included),
        computed: computed.clone(),
        per_cell_delta,
        max_abs_delta,
        pairs,
        sign_mismatches,
    })
}

/// Which reference table a method is checked against.
pub fn expected_source(method: Method) -> ReferenceSource {
    match method {
        Method::TauCovariance => ReferenceSource::PublishedTable3,
        Method::Pearson => ReferenceSource::PublishedTable2,
    }
}

/// Builds the full report. `computed` holds one matrix per variant, all of
/// the same method.
pub fn compare(
    computed: &[SimilarityMatrix],
    reference: &ReferenceMatrix,
) -> Result<ComparisonReport> {
    let first = computed
        .first()
        .ok_or_else(|| Error::domain("nothing to compare"))?;
    let method = first.method;
    if computed.iter().any(|m| m.method != method) {
        return Err(Error::domain(
            "all compared matrices must use the same method",
        ));
    }
    let variants = computed
        .iter()
        .map(|m| compare_variant(m, reference))
        .collect::<Result<Vec<_>>>()?;

    let mut notes = Vec::new();
    for (i, li) in reference.labels.iter().enumerate() {
        if reference.entries[i][i] != 1.0 {
            notes.push(format!(
                "reference diagonal ({li}) is {}, not 1",
                format_number(reference.entries[i][i])
            ));
        }
        for (j, lj) in reference.labels.iter().enumerate().skip(i + 1) {
            let (a, b) = (reference.entries[i][j], reference.entries[j][i]);
            if a != b {
                notes.push(format!(
                    "reference is asymmetric at ({li}, {lj}): {} vs {}",
                    format_number(a),
                    format_number(b)
                ));
            }
        }
    }

    let claims = if reference.source == expected_source(method) {
        check_claims(method, reference, &first.clone())
    } else {
        Vec::new()
    };
    for c in claims.iter().filter(|c| !c.matches_table) {
        notes.push(format!(
            "quoted value {} for ({}, {}) differs from the table cell {}",
            format_number(c.quoted),
            c.label_i,
            c.label_j,
            c.table_ij
                .map(format_number)
                .unwrap_or_else(|| "n/a".into())
        ));
    }
    for v in &variants {
        if !v.sign_mismatches.is_empty() {
            notes.push(format!(
                "{} pair(s) with opposite sign to the reference{}",
                v.sign_mismatches.len(),
                variant_suffix(v.k0_included)
            ));
        }
    }

    Ok(ComparisonReport {
        version: SCHEMA_VERSION,
        method,
        reference: reference.clone(),
        variants,
        claims,
        notes,
    })
}

fn variant_suffix(k0: Option<bool>) -> &'static str {
    match k0 {
        Some(true) => " (k0 included)",
        Some(false) => " (k0 excluded)",
        None => "",
    }
}

/// Recomputes the requested matrices from a dataset and compares them. For
/// τ both k0 settings are produced.
pub fn compare_dataset(
    dataset: &[TimeSeries],
    method: Method,
    spec: BasisSpec,
    map: &DomainMap,
    reference: &ReferenceMatrix,
) -> Result<ComparisonReport> {
    let computed = match method {
        Method::TauCovariance => vec![
            similarity::similarity_matrix(dataset, method, spec, map, true)?,
            similarity::similarity_matrix(dataset, method, spec, map, false)?,
        ],
        Method::Pearson => vec![similarity::similarity_matrix(
            dataset, method, spec, map, true,
        )?],
    };
    compare(&computed, reference)
}

/// Numeric claims about pairwise coefficients quoted in the discussion of
/// the published results, by method.
pub fn quoted_claims(method: Method) -> &'static [(&'static str, &'static str, f64)] {
    const PEARSON: &[(&str, &str, f64)] = &[
        (CO2, ELECTRIC, 0.15519434),
        (CO2, GDP, 0.321520301),
        (CO2, AGRICULTURE, 0.902132858),
        (CO2, INDUSTRY, 0.902132858),
        (CO2, IMPORTS, 0.501046148),
        (CO2, EXPORTS, 0.888669481),
        (CO2, INDUSTRY, 0.897826088),
        (CO2, AGRICULTURE, 0.888669481),
        (CO2, GDP, 0.973262207),
    ];
    const TAU: &[(&str, &str, f64)] = &[
        (CO2, ELECTRIC, 0.512904347),
        (CO2, GDP, 0.476076253),
        (CO2, AGRICULTURE, 0.427860804),
        (CO2, INDUSTRY, 0.588709296),
        (CO2, IMPORTS, 0.301603765),
    ];
    match method {
        Method::Pearson => PEARSON,
        Method::TauCovariance => TAU,
    }
}

fn check_claims(
    method: Method,
    reference: &ReferenceMatrix,
    computed: &SimilarityMatrix,
) -> Vec<ClaimCheck> {
    quoted_claims(method)
        .iter()
        .map(|&(a, b, quoted)| {
            let table_ij = reference.entry(a, b);
            let table_ji = reference.entry(b, a);
            ClaimCheck {
                label_i: a.to_string(),
                label_j: b.to_string(),
                quoted,
                table_ij,
                table_ji,
                computed: computed.get(a, b),
                matches_table: table_ij == Some(quoted) || table_ji == Some(quoted),
            }
        })
        .collect()
}

/// Published Hermite coefficient listing for one series.
#[derive(Debug, Clone, Copy)]
pub struct CoefficientListing {
    pub label: &'static str,
    /// The listing is printed as `GDP * [...]`.
    pub gdp_share: bool,
    /// The listing is labeled in billions of US$.
    pub billions: bool,
    pub coefficients: [f64; 16],
}

/// The six published degree-15 Hermite listings.
pub const LISTINGS: [CoefficientListing; 6] = [
    CoefficientListing {
        label: GDP,
        gdp_share: false,
        billions: true,
        coefficients: [
            -257467542.7,
            575413342.2,
            -458622107.3,
            330467806.3,
            -77398076.61,
            40935103.59,
            2798056.589,
            1867609.009,
            759418.6949,
            91674.34629,
            29020.11318,
            4933.890807,
            320.7992577,
            114.2072781,
            0.399454495,
            0.8192630,
        ],
    },
    CoefficientListing {
        label: CO2,
        gdp_share: false,
        billions: false,
        coefficients: [
            39873530.21,
            -13026678.67,
            57078760.72,
            37144725.81,
            11039085.96,
            13551517.93,
            2436261.78,
            732990.3244,
            435554.0212,
            -51069.22151,
            29462.00319,
            -4502.029741,
            750.9001231,
            -98.60386495,
            6.139244274,
            0.639471145,
        ],
    },
    CoefficientListing {
        label: AGRICULTURE,
        gdp_share: true,
        billions: false,
        coefficients: [
            273710246.3,
            -619677926.4,
            454615947.5,
            -362411256.6,
            68672792.73,
            57428724.5,
            -1905829.452,
            -5754300.662,
            -314588.4686,
            -453484.2664,
            4508.331813,
            -19286.1096,
            544.8031475,
            -355.6132925,
            6.640203074,
            -2.21323152,
        ],
    },
    CoefficientListing {
        label: INDUSTRY,
        gdp_share: true,
        billions: false,
        coefficients: [
            1605793321.0,
            -3000692173.0,
            2873303333.0,
            -1287329304.0,
            482301642.6,
            14335223.43,
            -21303521.77,
            26264323.72,
            -5493143.094,
            1928950.922,
            -229904.529,
            49959.66988,
            -3222.494027,
            502.7329109,
            -12.53372334,
            1.605166278,
        ],
    },
    CoefficientListing {
        label: EXPORTS,
        gdp_share: true,
        billions: false,
        coefficients: [
            710681348.6,
            -478952899.3,
            1229210418.0,
            429359395.8,
            267948054.4,
            269594341.1,
            25616537.57,
            36111846.37,
            2683508.507,
            1802502.373,
            174656.188,
            38577.84296,
            4559.184981,
            366.5995184,
            37.77925541,
            1.458763605,
        ],
    },
    CoefficientListing {
        label: IMPORTS,
        gdp_share: true,
        billions: false,
        coefficients: [
            -1159776910.0,
            3331728115.0,
            -1986759199.0,
            2280715751.0,
            -205085206.7,
            377380498.2,
            63356761.32,
            24589504.25,
            9541993.567,
            923286.1957,
            433740.5246,
            27166.77358,
            7717.999716,
            506.9179536,
            46.17917842,
            3.632792684,
        ],
    },
];

/// Computed vs listed coefficients under one unit interpretation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitHypothesis {
    pub name: String,
    /// Factor applied to the computed coefficients before comparison.
    pub scale: f64,
    pub computed_scaled: Vec<f64>,
    pub delta: Vec<f64>,
    pub max_abs_delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ListingComparison {
    pub label: String,
    pub listed: Vec<f64>,
    pub computed: Vec<f64>,
    pub hypotheses: Vec<UnitHypothesis>,
}

/// Compares fits against the published listings. Fits without a listing are skipped.
pub fn compare_listings(fits: &[FitResult]) -> Vec<ListingComparison> {
    LISTINGS
        .iter()
        .filter_map(|listing| {
            let fit = fits.iter().find(|f| f.label == listing.label)?;
            let computed = fit.coefficients.coefficients().to_vec();
            if computed.len() != listing.coefficients.len() {
                return None;
            }
            let mut scales = vec![("as_listed".to_string(), 1.0)];
            if listing.billions {
                scales.push(("rescaled_to_billions".to_string(), 1e-9));
            }
            if listing.gdp_share {
                scales.push(("rescaled_to_fraction".to_string(), 1e-2));
            }
            let hypotheses = scales
                .into_iter()
                .map(|(name, scale)| {
                    let computed_scaled: Vec<f64> = computed.iter().map(|c| c * scale).collect();
                    let delta: Vec<f64> = computed_scaled
                        .iter()
                        .zip(&listing.coefficients)
                        .map(|(c, l)| c - l)
                        .collect();
                    let max_abs_delta = delta.iter().fold(0.0f64, |m, d| m.max(d.abs()));
                    UnitHypothesis {
                        name,
                        scale,
                        computed_scaled,
                        delta,
                        max_abs_delta,
                    }
                })
                .collect();
            Some(ListingComparison {
                label: listing.label.to_string(),
                listed: listing.coefficients.to_vec(),
                computed,
                hypotheses,
            })
        })
        .collect()
}

/// Published Pearson value for the integer/exponential sequence example.
pub const EXP_DEMO_PUBLISHED_VALUE: f64 = 0.71687;
/// Allowed deviation from [`EXP_DEMO_PUBLISHED_VALUE`].
pub const EXP_DEMO_TOLERANCE: f64 = 5e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpDemo {
    pub version: u32,
    /// `0, 1, ..., 9`
    pub x: Vec<f64>,
    /// `e^x`
    pub y: Vec<f64>,
    pub computed: f64,
    /// Published value, [`EXP_DEMO_PUBLISHED_VALUE`].
    pub paper: f64,
    pub delta: f64,
    /// Same statistic with the point `x = 10` appended.
    pub computed_with_x10: f64,
}

impl ExpDemo {
    pub fn within_tolerance(&self) -> bool {
        self.delta.abs() <= EXP_DEMO_TOLERANCE
    }
}

fn exp_sequence(n: usize) -> (Vec<f64>, Vec<f64>) {
    let x: Vec<f64> = (0..n).map(|k| k as f64).collect();
    let y = x.iter().map(|v| v.exp()).collect();
    (x, y)
}

/// Pearson correlation of `k` against `e^k` for `k = 0..9`.
pub fn exp_demo() -> Result<ExpDemo> {
    let (x, y) = exp_sequence(10);
    let computed = similarity::pearson(&x, &y)?;
    let (x11, y11) = exp_sequence(11);
    let computed_with_x10 = similarity::pearson(&x11, &y11)?;
    Ok(ExpDemo {
        version: SCHEMA_VERSION,
        x,
        y,
        computed,
        paper: EXP_DEMO_PUBLISHED_VALUE,
        delta: computed - EXP_DEMO_PUBLISHED_VALUE,
        computed_with_x10,
    })
}

/// Output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Markdown,
    Csv,
    Json,
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn md_escape(s: &str) -> String {
    s.replace('|', "\\|")
}

fn md_matrix(out: &mut String, corner: &str, labels: &[String], entries: &[Vec<f64>]) {
    let _ = write!(out, "| {} |", md_escape(corner));
    for l in labels {
        let _ = write!(out, " {} |", md_escape(l));
    }
    out.push('\n');
    out.push('|');
    out.push_str(&"---|".repeat(labels.len() + 1));
    out.push('\n');
    for (l, row) in labels.iter().zip(entries) {
        let _ = write!(out, "| {} |", md_escape(l));
        for v in row {
            let _ = write!(out, " {} |", format_number(*v));
        }
        out.push('\n');
    }
}

/// JSON document for `fit`.
#[derive(Debug, Serialize, Deserialize)]
pub struct FitDocument {
    pub version: u32,
    pub year_min: i32,
    pub year_max: i32,
    pub fits: Vec<FitResult>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub listings: Vec<ListingComparison>,
}

pub fn render_fits(
    fits: &[FitResult],
    map: &DomainMap,
    listings: &[ListingComparison],
    format: Format,
) -> Result<String> {
    Ok(match format {
        Format::Json => json(&FitDocument {
            version: SCHEMA_VERSION,
            year_min: map.year_min(),
            year_max: map.year_max(),
            fits: fits.to_vec(),
            listings: listings.to_vec(),
        }),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let header = [
                "series",
                "family",
                "k",
                "coefficient",
                "tail",
                "residual_max_rel",
                "condition_estimate",
            ];
            w.write_record(header).map_err(csv_err)?;
            for f in fits {
                let basis = f.coefficients.basis();
                for (k, (c, t)) in f
                    .coefficients
                    .coefficients()
                    .iter()
                    .zip(&f.coefficient_tails)
                    .enumerate()
                {
                    w.write_record([
                        f.label.clone(),
                        basis.family.name().to_string(),
                        k.to_string(),
                        format_number(*c),
                        format_number(*t),
                        format_number(f.residual_max_rel),
                        format_number(f.condition_estimate),
                    ])
                    .map_err(csv_err)?;
                }
            }
            finish_csv(w)?
        }
        Format::Markdown => {
            let mut out = String::new();
            for f in fits {
                let basis = f.coefficients.basis();
                let _ = writeln!(out, "## {}\n", f.label);
                let _ = writeln!(
                    out,
                    "basis: {} degree {}, residual_max_rel: {}, rounded_residual_max_rel: {}, condition_estimate: {}\n",
                    basis.family.name(),
                    basis.degree,
                    format_number(f.residual_max_rel),
                    format_number(f.rounded_residual_max_rel),
                    format_number(f.condition_estimate)
                );
                out.push_str("| k | coefficient | tail |\n|---|---|---|\n");
                for (k, (c, t)) in f
                    .coefficients
                    .coefficients()
                    .iter()
                    .zip(&f.coefficient_tails)
                    .enumerate()
                {
                    let _ = writeln!(
                        out,
                        "| {k} | {} | {} |",
                        format_number(*c),
                        format_number(*t)
                    );
                }
                out.push('\n');
            }
            for l in listings {
                let _ = writeln!(out, "## Published listing: {}\n", l.label);
                out.push_str("| k | listed | computed |");
                for h in &l.hypotheses {
                    let _ = write!(out, " {} (×{}) | delta |", h.name, format_number(h.scale));
                }
                out.push('\n');
                out.push('|');
                out.push_str(&"---|".repeat(3 + 2 * l.hypotheses.len()));
                out.push('\n');
                for k in 0..l.listed.len() {
                    let _ = write!(
                        out,
                        "| {k} | {} | {} |",
                        format_number(l.listed[k]),
                        format_number(l.computed[k])
                    );
                    for h in &l.hypotheses {
                        let _ = write!(
                            out,
                            " {} | {} |",
                            format_number(h.computed_scaled[k]),
                            format_number(h.delta[k])
                        );
                    }
                    out.push('\n');
                }
                out.push('\n');
            }
            out
        }
    })
}

/// JSON document for `matrix`.
#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub version: u32,
    pub matrices: Vec<SimilarityMatrix>,
    /// Published tables over the same labels, shown for reference.
    #[serde(default)]
    pub published: Vec<ReferenceMatrix>,
}

/// `reference` reordered to `labels`, or `None` if the label sets differ.
pub fn reorder_reference(
    reference: &ReferenceMatrix,
    labels: &[String],
) -> Option<ReferenceMatrix> {
    if reference.dim() != labels.len() {
        return None;
    }
    let idx: Vec<usize> = labels
        .iter()
        .map(|l| reference.index_of(l))
        .collect::<Option<_>>()?;
    Some(ReferenceMatrix {
        labels: labels.to_vec(),
        entries: idx
            .iter()
            .map(|&i| idx.iter().map(|&j| reference.entries[i][j]).collect())
            .collect(),
        source: reference.source,
    })
}

fn matrix_title(m: &SimilarityMatrix) -> String {
    match m.method {
        Method::TauCovariance => format!(
            "tau_covariance ({})",
            if m.k0_included {
                "k0 included"
            } else {
                "k0 excluded"
            }
        ),
        Method::Pearson => "pearson".to_string(),
    }
}

/// Renders computed matrices. In Markdown and JSON, `published` tables
/// whose type matches a computed method are shown next to it.
pub fn render_matrices(
    matrices: &[SimilarityMatrix],
    published: &[ReferenceMatrix],
    format: Format,
) -> Result<String> {
    Ok(match format {
        Format::Json => json(&MatrixDocument {
            version: SCHEMA_VERSION,
            matrices: matrices.to_vec(),
            published: published.to_vec(),
        }),
        Format::Csv => {
            let mut out = String::new();
            for (i, m) in matrices.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                out.push_str(&dataio::write_matrix_csv(
                    m.method.name(),
                    &m.labels,
                    &m.entries,
                )?);
            }
            out
        }
        Format::Markdown => {
            let mut out = String::new();
            for m in matrices {
                let _ = writeln!(out, "## {}\n", matrix_title(m));
                md_matrix(&mut out, m.method.name(), &m.labels, &m.entries);
                out.push('\n');
                let matching = published
                    .iter()
                    .filter(|r| r.source == expected_source(m.method))
                    .find_map(|r| reorder_reference(r, &m.labels));
                if let Some(r) = matching {
                    let _ = writeln!(out, "### Published values\n");
                    md_matrix(&mut out, "published", &r.labels, &r.entries);
                    out.push('\n');
                }
            }
            out
        }
    })
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits UTF-8"))
}

fn variant_name(k0: Option<bool>) -> &'static str {
    match k0 {
        Some(true) => "k0_included",
        Some(false) => "k0_excluded",
        None => "pearson",
    }
}

pub fn render_comparison(report: &ComparisonReport, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => json(report),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "variant",
                "label_i",
                "label_j",
                "computed",
                "reference_ij",
                "reference_ji",
                "delta_ij",
                "delta_ji",
                "reference_asymmetric",
                "sign_mismatch",
            ])
            .map_err(csv_err)?;
            for v in &report.variants {
                for p in &v.pairs {
                    w.write_record([
                        variant_name(v.k0_included).to_string(),
                        p.label_i.clone(),
                        p.label_j.clone(),
                        format_number(p.computed),
                        format_number(p.reference_ij),
                        format_number(p.reference_ji),
                        format_number(p.delta_ij),
                        format_number(p.delta_ji),
                        p.reference_asymmetric.to_string(),
                        p.sign_mismatch.to_string(),
                    ])
                    .map_err(csv_err)?;
                }
            }
            finish_csv(w)?
        }
        Format::Markdown => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "# Comparison: {} vs {}\n",
                report.method.name(),
                serde_json::to_value(report.reference.source)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default()
            );
            for v in &report.variants {
                let _ = writeln!(out, "## Variant: {}\n", variant_name(v.k0_included));
                let _ = writeln!(
                    out,
                    "pairs: {}, max_abs_delta: {}, sign mismatches: {}\n",
                    v.pairs.len(),
                    format_number(v.max_abs_delta),
                    v.sign_mismatches.len()
                );
                out.push_str(
                    "| series i | series j | computed | reference (i,j) | reference (j,i) | delta (i,j) | delta (j,i) | flags |\n|---|---|---|---|---|---|---|---|\n",
                );
                for p in &v.pairs {
                    let mut flags = Vec::new();
                    if p.sign_mismatch {
                        flags.push("sign");
                    }
                    if p.reference_asymmetric {
                        flags.push("asymmetric");
                    }
                    let _ = writeln!(
                        out,
                        "| {} | {} | {} | {} | {} | {} | {} | {} |",
                        md_escape(&p.label_i),
                        md_escape(&p.label_j),
                        format_number(p.computed),
                        format_number(p.reference_ij),
                        format_number(p.reference_ji),
                        format_number(p.delta_ij),
                        format_number(p.delta_ji),
                        flags.join(", ")
                    );
                }
                out.push('\n');
                if !v.sign_mismatches.is_empty() {
                    out.push_str("Sign mismatches:\n\n");
                    for (a, b) in &v.sign_mismatches {
                        let _ = writeln!(out, "- {a} / {b}");
                    }
                    out.push('\n');
                }
            }
            if !report.claims.is_empty() {
                out.push_str("## Quoted values\n\n| series i | series j | quoted | table (i,j) | table (j,i) | computed | matches table |\n|---|---|---|---|---|---|---|\n");
                let opt = |v: Option<f64>| v.map(format_number).unwrap_or_else(|| "n/a".into());
                for c in &report.claims {
                    let _ = writeln!(
                        out,
                        "| {} | {} | {} | {} | {} | {} | {} |",
                        md_escape(&c.label_i),
                        md_escape(&c.label_j),
                        format_number(c.quoted),
                        opt(c.table_ij),
                        opt(c.table_ji),
                        opt(c.computed),
                        c.matches_table
                    );
                }
                out.push('\n');
            }
            if !report.notes.is_empty() {
                out.push_str("## Notes\n\n");
                for n in &report.notes {
                    let _ = writeln!(out, "- {n}");
                }
            }
            out
        }
    })
}

pub fn render_exp_demo(demo: &ExpDemo, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => json(demo),
        Format::Csv => format!(
            "computed,paper,delta,computed_with_x10\n{},{},{},{}\n",
            format_number(demo.computed),
            format_number(demo.paper),
            format_number(demo.delta),
            format_number(demo.computed_with_x10)
        ),
        Format::Markdown => format!(
            "Pearson(k, e^k), k = 0..9\n\ncomputed: {}\npublished: {}\ndelta: {}\nwith k = 10 appended: {}\n",
            format_number(demo.computed),
            format_number(demo.paper),
            format_number(demo.delta),
            format_number(demo.computed_with_x10)
        ),
    })
}
