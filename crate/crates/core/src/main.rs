use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use taucov::dataio::{
    self, CsvOptions, Fixture, FixtureData, ReferenceMatrix, ReferenceSource, TimeSeries,
};
use taucov::fit::{self, FitMode};
use taucov::report::{self, Format};
use taucov::{BasisSpec, DomainMap, Error, Execution, Family, Method};

const FIXTURE_DIR_ENV: &str = "TAUCOV_FIXTURE_DIR";

#[derive(Parser)]
#[command(
    name = "taucov",
    version,
    about = "Hermite fits and pairwise similarity of indicator series"
)]
struct Cli {
    /// Do not print the header line on stderr.
    #[arg(long, global = true)]
    no_banner: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit basis coefficients to each series.
    Fit(FitArgs),
    /// Pairwise similarity matrix.
    Matrix(MatrixArgs),
    /// Compare a computed matrix with a reference table.
    Compare(CompareArgs),
    /// Pearson correlation of k against e^k, k = 0..9.
    DemoExp(DemoArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Bundled table to read series from.
    #[arg(long, conflicts_with = "input", value_parser = ["table1"])]
    fixture: Option<String>,
    /// Wide CSV file, or "-" for stdin.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Restrict to these series (repeatable, exact label).
    #[arg(long)]
    series: Vec<String>,
    /// Input (and CSV output) uses decimal commas with ';' or tab separators.
    #[arg(long)]
    decimal_comma: bool,
    /// Polynomial degree. Defaults to the number of observations minus one.
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long, value_enum, default_value_t = FormatArg::Md)]
    format: FormatArg,
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = FamilyArg::Hermite)]
    family: FamilyArg,
    /// Least-squares fit (requires a degree below points minus one).
    #[arg(long)]
    least_squares: bool,
    /// Also compare against the published coefficient listings.
    #[arg(long)]
    listings: bool,
}

#[derive(Args)]
struct MatrixArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Tau)]
    method: MethodArg,
    /// Drop the constant term from τ.
    #[arg(long)]
    exclude_k0: bool,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Tau)]
    method: MethodArg,
    /// table2, table3 or a path to a square CSV matrix.
    /// Defaults to the table matching the method.
    #[arg(long)]
    reference: Option<String>,
    /// Allow a reference table of the other method.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct DemoArgs {
    /// Shorthand for --format json.
    #[arg(long)]
    json: bool,
    #[arg(long, value_enum, default_value_t = FormatArg::Md)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Md,
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Tau,
    Pearson,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Hermite,
    Monomial,
}

/// Failure with its exit code.
enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = Result<u8, Failure>;

fn exit_code(e: &Error) -> u8 {
    match e.root() {
        Error::Numerical { .. } => 3,
        _ => 2,
    }
}

fn format_of(f: FormatArg) -> Format {
    match f {
        FormatArg::Md => Format::Markdown,
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    }
}

fn fixture_dir() -> Option<PathBuf> {
    std::env::var_os(FIXTURE_DIR_ENV).map(PathBuf::from)
}

fn load_fixture(f: Fixture) -> Result<FixtureData, Error> {
    match fixture_dir() {
        Some(dir) => dataio::load_fixture_from_dir(f, &dir),
        None => Ok(dataio::load_fixture(f)),
    }
}

fn with_path(e: io::Error, path: &Path) -> Error {
    Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, Error> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        std::fs::read(path).map_err(|e| with_path(e, path))
    }
}

struct Loaded {
    series: Vec<TimeSeries>,
    map: DomainMap,
    spec_degree: usize,
}

fn load_series(args: &InputArgs) -> Result<Loaded, Failure> {
    let opts = CsvOptions {
        decimal_comma: args.decimal_comma,
    };
    let all = match &args.input {
        Some(path) => dataio::parse_wide_csv(&read_bytes(path)?, opts)?,
        None => match load_fixture(Fixture::Table1)? {
            FixtureData::Series(s) => s,
            FixtureData::Matrix(_) => unreachable!("table1 holds series"),
        },
    };
    let series = if args.series.is_empty() {
        all
    } else {
        let mut picked = Vec::with_capacity(args.series.len());
        for want in &args.series {
            let s = all.iter().find(|s| s.label == want.trim()).ok_or_else(|| {
                Failure::Lib(Error::Domain(format!("no series labeled '{want}'")))
            })?;
            picked.push(s.clone());
        }
        picked
    };
    let first = series
        .first()
        .ok_or_else(|| Failure::Lib(Error::Domain("input contains no series".into())))?;
    let map = DomainMap::for_series(first)?;
    let spec_degree = args.degree.unwrap_or(first.len() - 1);
    Ok(Loaded {
        series,
        map,
        spec_degree,
    })
}

/// CSV output follows the input dialect.
fn finish_output(text: String, format: Format, decimal_comma: bool) -> Result<String, Error> {
    if format == Format::Csv && decimal_comma {
        dataio::to_decimal_comma_dialect(&text)
    } else {
        Ok(text)
    }
}

fn emit(text: &str) -> Result<(), Error> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn cmd_fit(args: FitArgs) -> CmdResult {
    let loaded = load_series(&args.input)?;
    let family = match args.family {
        FamilyArg::Hermite => Family::HermitePhysicists,
        FamilyArg::Monomial => Family::Monomial,
    };
    let spec = BasisSpec::new(family, loaded.spec_degree);
    let mode = if args.least_squares {
        FitMode::LeastSquares
    } else {
        FitMode::Interpolation
    };
    let fits = fit::fit_all_with(
        &loaded.series,
        spec,
        &loaded.map,
        mode,
        Execution::default(),
    )?;
    let listings = if args.listings {
        report::compare_listings(&fits)
    } else {
        Vec::new()
    };
    let format = format_of(args.input.format);
    let text = report::render_fits(&fits, &loaded.map, &listings, format)?;
    emit(&finish_output(text, format, args.input.decimal_comma)?)?;
    Ok(0)
}

fn cmd_matrix(args: MatrixArgs) -> CmdResult {
    let loaded = load_series(&args.input)?;
    let spec = BasisSpec::hermite(loaded.spec_degree);
    let k0 = !args.exclude_k0;
    let methods: &[Method] = match args.method {
        MethodArg::Tau => &[Method::TauCovariance],
        MethodArg::Pearson => &[Method::Pearson],
        MethodArg::Both => &[Method::TauCovariance, Method::Pearson],
    };
    let matrices = methods
        .iter()
        .map(|&m| taucov::similarity::similarity_matrix(&loaded.series, m, spec, &loaded.map, k0))
        .collect::<Result<Vec<_>, _>>()?;
    let mut published = Vec::new();
    for m in &matrices {
        let fixture = match report::expected_source(m.method) {
            ReferenceSource::PublishedTable2 => Fixture::Table2,
            _ => Fixture::Table3,
        };
        // A fixture directory may hold only the series table.
        let loaded = match load_fixture(fixture) {
            Err(Error::Io(e)) if e.kind() == io::ErrorKind::NotFound => continue,
            other => other?,
        };
        if let FixtureData::Matrix(r) = loaded {
            if let Some(r) = report::reorder_reference(&r, &m.labels) {
                published.push(r);
            }
        }
    }
    let format = format_of(args.input.format);
    let text = report::render_matrices(&matrices, &published, format)?;
    emit(&finish_output(text, format, args.input.decimal_comma)?)?;
    Ok(0)
}

fn load_reference(name: &str, decimal_comma: bool) -> Result<ReferenceMatrix, Error> {
    match Fixture::parse_name(name) {
        Some(Fixture::Table1) => Err(Error::Domain("table1 is not a matrix".into())),
        Some(f) => match load_fixture(f)? {
            FixtureData::Matrix(m) => Ok(m),
            FixtureData::Series(_) => unreachable!("tables 2 and 3 hold matrices"),
        },
        None => dataio::parse_reference_matrix(
            &read_bytes(Path::new(name))?,
            CsvOptions { decimal_comma },
            ReferenceSource::UserFile,
        ),
    }
}

fn cmd_compare(args: CompareArgs) -> CmdResult {
    let method = match args.method {
        MethodArg::Tau => Method::TauCovariance,
        MethodArg::Pearson => Method::Pearson,
        MethodArg::Both => {
            return Err(Failure::Usage(
                "compare takes --method tau or --method pearson".into(),
            ))
        }
    };
    let expected = report::expected_source(method);
    let reference_name = args.reference.clone().unwrap_or_else(|| {
        match expected {
            ReferenceSource::PublishedTable2 => "table2",
            _ => "table3",
        }
        .to_string()
    });
    let reference = load_reference(&reference_name, args.input.decimal_comma)?;
    if reference.source != ReferenceSource::UserFile && reference.source != expected && !args.force
    {
        return Err(Failure::Lib(Error::Domain(format!(
            "reference {reference_name} does not hold {} values (use --force to compare anyway)",
            method.name()
        ))));
    }
    let loaded = load_series(&args.input)?;
    let spec = BasisSpec::hermite(loaded.spec_degree);
    let rep = report::compare_dataset(&loaded.series, method, spec, &loaded.map, &reference)?;
    let format = format_of(args.input.format);
    let text = report::render_comparison(&rep, format)?;
    emit(&finish_output(text, format, args.input.decimal_comma)?)?;
    Ok(0)
}

fn cmd_demo(args: DemoArgs) -> CmdResult {
    let demo = report::exp_demo()?;
    let format = if args.json {
        Format::Json
    } else {
        format_of(args.format)
    };
    emit(&report::render_exp_demo(&demo, format)?)?;
    if demo.within_tolerance() {
        Ok(0)
    } else {
        eprintln!(
            "taucov: computed value deviates from the published one by {} (limit {})",
            demo.delta,
            report::EXP_DEMO_TOLERANCE
        );
        Ok(3)
    }
}

fn banner() {
    eprintln!(
        "taucov {} {}",
        env!("CARGO_PKG_VERSION"),
        humantime::format_rfc3339_seconds(std::time::SystemTime::now())
    );
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if !cli.no_banner {
        banner();
    }
    let result = match cli.command {
        Command::Fit(a) => cmd_fit(a),
        Command::Matrix(a) => cmd_matrix(a),
        Command::Compare(a) => cmd_compare(a),
        Command::DemoExp(a) => cmd_demo(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("taucov: usage error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("taucov: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
