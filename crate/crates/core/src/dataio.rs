//! Wide-format indicator CSV (one row per series, one column per year) and
//! the bundled tables.
//!
//! Two dialects are read: the default one (`,` separator, `.` decimals) and a
//! European one (`;` or tab separator, `,` decimals, e.g. `1,19814E+11`).
//! Output is always the default dialect.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Header of the label column.
pub const SERIES_NAME_HEADER: &str = "Series Name";

/// A labeled, year-indexed series of observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub label: String,
    pub years: Vec<i32>,
    pub values: Vec<f64>,
}

impl TimeSeries {
    /// Checks the invariants: equal lengths (≥ 2), strictly increasing years,
    /// finite values.
    pub fn new(label: impl Into<String>, years: Vec<i32>, values: Vec<f64>) -> Result<Self> {
        let label = label.into().trim().to_string();
        if years.len() != values.len() {
            return Err(Error::domain(format!(
                "series '{label}': {} years but {} values",
                years.len(),
                values.len()
            )));
        }
        if years.len() < 2 {
            return Err(Error::domain(format!(
                "series '{label}': need at least 2 observations"
            )));
        }
        if let Some(w) = years.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::domain(format!(
                "series '{label}': years not strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain(format!("series '{label}': non-finite value")));
        }
        Ok(Self {
            label,
            years,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Observation for `year`, if present.
    pub fn value_at(&self, year: i32) -> Option<f64> {
        self.years
            .iter()
            .position(|&y| y == year)
            .map(|i| self.values[i])
    }
}

/// Where a reference matrix came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceSource {
    PublishedTable2,
    PublishedTable3,
    UserFile,
}

/// Square labeled matrix read verbatim from a table. Not required to be symmetric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceMatrix {
    pub labels: Vec<String>,
    pub entries: Vec<Vec<f64>>,
    pub source: ReferenceSource,
}

impl ReferenceMatrix {
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label.trim())
    }

    /// Entry at (row label, column label).
    pub fn entry(&self, row: &str, col: &str) -> Option<f64> {
        Some(self.entries[self.index_of(row)?][self.index_of(col)?])
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }
}

/// Parsing options.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CsvOptions {
    /// `,` is the decimal separator; the field separator is detected (`;` or tab).
    pub decimal_comma: bool,
}

fn detect_delimiter(text: &str, opts: CsvOptions) -> u8 {
    if !opts.decimal_comma {
        return b',';
    }
    let header = text.lines().next().unwrap_or("");
    if header.contains(';') {
        b';'
    } else if header.contains('\t') {
        b'\t'
    } else {
        b','
    }
}

/// Parses one numeric cell in the chosen dialect.
pub fn parse_number(cell: &str, opts: CsvOptions) -> Option<f64> {
    let cell = cell.trim();
    if cell.is_empty() {
        return None;
    }
    let v = if opts.decimal_comma {
        if cell.contains('.') {
            return None;
        }
        cell.replace(',', ".").parse::<f64>().ok()?
    } else {
        cell.parse::<f64>().ok()?
    };
    v.is_finite().then_some(v)
}

/// Raw rows of a rectangular table: header cells and `(label, cells)` rows.
struct RawTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn read_raw(bytes: &[u8], opts: CsvOptions) -> Result<RawTable> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| Error::data(1, None, format!("input is not UTF-8: {e}")))?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .delimiter(detect_delimiter(text, opts))
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::data(i + 1, None, e.to_string()))?;
        let cells: Vec<String> = rec.iter().map(|c| c.trim().to_string()).collect();
        if cells.iter().all(|c| c.is_empty()) {
            continue;
        }
        records.push(cells);
    }
    let mut it = records.into_iter();
    let header = it
        .next()
        .ok_or_else(|| Error::data(1, None, "input is empty"))?;
    let rows: Vec<Vec<String>> = it.collect();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != header.len() {
            return Err(Error::data(
                i + 2,
                None,
                format!(
                    "ragged row: {} cells, header has {}",
                    row.len(),
                    header.len()
                ),
            ));
        }
    }
    Ok(RawTable { header, rows })
}

/// Parses a wide CSV: header `Series Name, <year>, <year>, ...`, one series per row.
pub fn parse_wide_csv(bytes: &[u8], opts: CsvOptions) -> Result<Vec<TimeSeries>> {
    let raw = read_raw(bytes, opts)?;
    if raw.header.first().map(String::as_str) != Some(SERIES_NAME_HEADER) {
        return Err(Error::data(
            1,
            Some(1),
            format!("first header cell must be '{SERIES_NAME_HEADER}'"),
        ));
    }
    let mut years = Vec::with_capacity(raw.header.len() - 1);
    for (c, cell) in raw.header.iter().enumerate().skip(1) {
        let year: i32 = cell
            .parse()
            .map_err(|_| Error::data(1, Some(c + 1), format!("header '{cell}' is not a year")))?;
        if let Some(&prev) = years.last() {
            if year <= prev {
                return Err(Error::data(
                    1,
                    Some(c + 1),
                    format!("years not strictly increasing ({prev} then {year})"),
                ));
            }
        }
        years.push(year);
    }
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(raw.rows.len());
    for (r, row) in raw.rows.iter().enumerate() {
        let line = r + 2;
        let label = row[0].clone();
        if label.is_empty() {
            return Err(Error::data(line, Some(1), "empty series label"));
        }
        if !seen.insert(label.clone()) {
            return Err(Error::data(
                line,
                Some(1),
                format!("duplicate label '{label}'"),
            ));
        }
        let values = row[1..]
            .iter()
            .enumerate()
            .map(|(c, cell)| {
                parse_number(cell, opts).ok_or_else(|| {
                    Error::data(line, Some(c + 2), format!("cannot parse number '{cell}'"))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        out.push(
            TimeSeries::new(label, years.clone(), values)
                .map_err(|e| Error::data(line, None, e.to_string()))?,
        );
    }
    Ok(out)
}

/// Parses a square reference matrix: header `<corner>, <label>...`, rows
/// `<label>, <value>...` with row labels in the same order as columns.
pub fn parse_reference_matrix(
    bytes: &[u8],
    opts: CsvOptions,
    source: ReferenceSource,
) -> Result<ReferenceMatrix> {
    let raw = read_raw(bytes, opts)?;
    let labels: Vec<String> = raw.header[1..].to_vec();
    if raw.rows.len() != labels.len() {
        return Err(Error::data(
            1,
            None,
            format!(
                "matrix is not square: {} columns, {} rows",
                labels.len(),
                raw.rows.len()
            ),
        ));
    }
    let mut entries = Vec::with_capacity(labels.len());
    for (r, row) in raw.rows.iter().enumerate() {
        let line = r + 2;
        if row[0] != labels[r] {
            return Err(Error::data(
                line,
                Some(1),
                format!(
                    "row label '{}' does not match column '{}'",
                    row[0], labels[r]
                ),
            ));
        }
        let values = row[1..]
            .iter()
            .enumerate()
            .map(|(c, cell)| {
                parse_number(cell, opts).ok_or_else(|| {
                    Error::data(line, Some(c + 2), format!("cannot parse number '{cell}'"))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        entries.push(values);
    }
    Ok(ReferenceMatrix {
        labels,
        entries,
        source,
    })
}

/// Shortest decimal that reparses to the same `f64`.
pub fn format_number(v: f64) -> String {
    format!("{v}")
}

/// Writes series in the default dialect. All series must share one year grid.
pub fn write_wide_csv(series: &[TimeSeries]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    let years = series.first().map(|s| s.years.clone()).unwrap_or_default();
    let mut header = vec![SERIES_NAME_HEADER.to_string()];
    header.extend(years.iter().map(|y| y.to_string()));
    write_record(&mut w, &header)?;
    for s in series {
        if s.years != years {
            return Err(Error::domain(format!(
                "series '{}' does not share the year grid",
                s.label
            )));
        }
        let mut rec = vec![s.label.clone()];
        rec.extend(s.values.iter().map(|v| format_number(*v)));
        write_record(&mut w, &rec)?;
    }
    finish(w)
}

/// Writes a labeled square matrix in the default dialect.
pub fn write_matrix_csv(corner: &str, labels: &[String], entries: &[Vec<f64>]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    let mut header = vec![corner.to_string()];
    header.extend(labels.iter().cloned());
    write_record(&mut w, &header)?;
    for (label, row) in labels.iter().zip(entries) {
        let mut rec = vec![label.clone()];
        rec.extend(row.iter().map(|v| format_number(*v)));
        write_record(&mut w, &rec)?;
    }
    finish(w)
}

/// Rewrites default-dialect CSV (`,` separator, `.` decimals) into the
/// decimal-comma dialect (`;` separator). Only cells that parse as numbers
/// are touched.
pub fn to_decimal_comma_dialect(text: &str) -> Result<String> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut w = csv::WriterBuilder::new()
        .delimiter(b';')
        .flexible(true)
        .from_writer(Vec::new());
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Error::data(i + 1, None, e.to_string()))?;
        let out: Vec<String> = rec
            .iter()
            .map(|cell| match parse_number(cell, CsvOptions::default()) {
                Some(_) => cell.replace('.', ","),
                None => cell.to_string(),
            })
            .collect();
        write_record(&mut w, &out)?;
    }
    finish(w)
}

fn write_record(w: &mut csv::Writer<Vec<u8>>, rec: &[String]) -> Result<()> {
    w.write_record(rec)
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits UTF-8"))
}

/// Bundled tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixture {
    /// Indicator series, 8 × 16 years.
    Table1,
    /// Published Pearson matrix.
    Table2,
    /// Published τ-covariance matrix.
    Table3,
}

impl Fixture {
    pub fn file_name(self) -> &'static str {
        match self {
            Fixture::Table1 => "table1.csv",
            Fixture::Table2 => "table2.csv",
            Fixture::Table3 => "table3.csv",
        }
    }

    fn embedded(self) -> &'static str {
        match self {
            Fixture::Table1 => include_str!("../fixtures/table1.csv"),
            Fixture::Table2 => include_str!("../fixtures/table2.csv"),
            Fixture::Table3 => include_str!("../fixtures/table3.csv"),
        }
    }

    pub fn parse_name(name: &str) -> Option<Self> {
        match name {
            "table1" => Some(Fixture::Table1),
            "table2" => Some(Fixture::Table2),
            "table3" => Some(Fixture::Table3),
            _ => None,
        }
    }
}

/// Fixtures are stored in the decimal-comma dialect, as printed.
const FIXTURE_OPTIONS: CsvOptions = CsvOptions {
    decimal_comma: true,
};

/// Loaded fixture content.
#[derive(Debug, Clone, PartialEq)]
pub enum FixtureData {
    Series(Vec<TimeSeries>),
    Matrix(ReferenceMatrix),
}

fn parse_fixture(fixture: Fixture, bytes: &[u8]) -> Result<FixtureData> {
    Ok(match fixture {
        Fixture::Table1 => FixtureData::Series(parse_wide_csv(bytes, FIXTURE_OPTIONS)?),
        Fixture::Table2 => FixtureData::Matrix(parse_reference_matrix(
            bytes,
            FIXTURE_OPTIONS,
            ReferenceSource::PublishedTable2,
        )?),
        Fixture::Table3 => FixtureData::Matrix(parse_reference_matrix(
            bytes,
            FIXTURE_OPTIONS,
            ReferenceSource::PublishedTable3,
        )?),
    })
}

/// Loads a bundled table.
pub fn load_fixture(fixture: Fixture) -> FixtureData {
    parse_fixture(fixture, fixture.embedded().as_bytes()).expect("bundled fixture parses")
}

/// Loads a table from `dir` (same file names and dialect as the bundled ones).
pub fn load_fixture_from_dir(fixture: Fixture, dir: &Path) -> Result<FixtureData> {
    let path = dir.join(fixture.file_name());
    let bytes = std::fs::read(&path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    parse_fixture(fixture, &bytes)
}

/// The bundled Table 1 series.
pub fn table1() -> Vec<TimeSeries> {
    match load_fixture(Fixture::Table1) {
        FixtureData::Series(s) => s,
        FixtureData::Matrix(_) => unreachable!(),
    }
}

/// A bundled reference matrix (Table 2 or Table 3).
pub fn reference_table(fixture: Fixture) -> Option<ReferenceMatrix> {
    match load_fixture(fixture) {
        FixtureData::Matrix(m) => Some(m),
        FixtureData::Series(_) => None,
    }
}
