//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any fails. Tolerances are pinned as constants.

#![allow(clippy::needless_range_loop)]

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use taucov::basis::{self, GramWeight};
use taucov::dataio::{self, CsvOptions, Fixture, ReferenceSource};
use taucov::dd::DoubleDouble;
use taucov::fit::{self, Point};
use taucov::report;
use taucov::similarity::{self, tau_covariance};
use taucov::{BasisSpec, CoefficientVector, DomainMap, Family, Method, TimeSeries};

const TIME_LIMIT: Duration = Duration::from_secs(1);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let detail = f()?;
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))?;
    Ok(format!("{detail}; {took:.2?}"))
}

const TABLE1: [(&str, [f64; 16]); 8] = [
    (
        "Forest area (sq. km)",
        [
            26372.9, 26392.99, 26413.08, 26433.17, 26453.26, 26473.35, 26493.44, 26513.53,
            26533.62, 26553.71, 26573.8, 26595.82, 26617.84, 26639.86, 26661.88, 26683.9,
        ],
    ),
    (
        "CO2 emissions (metric tons per capita)",
        [
            12.01065269,
            12.01181802,
            11.6241027,
            12.04336087,
            12.10540157,
            11.750804,
            11.77860313,
            12.00330783,
            11.39282817,
            10.64445418,
            10.71659406,
            10.4010178,
            10.09153928,
            9.620257259,
            9.264302843,
            9.400668002,
        ],
    ),
    (
        "Electric power consumption (kWh per capita)",
        [
            5703.816739,
            5892.172595,
            5894.233119,
            6074.849142,
            6230.398228,
            6357.421095,
            6528.53015,
            6518.217413,
            6489.126257,
            6139.35206,
            6348.424398,
            6298.727678,
            6304.571923,
            6284.790806,
            6258.891037,
            6268.891066,
        ],
    ),
    (
        "GDP (current US$)",
        [
            61828166496.0,
            67808032980.0,
            82196001051.0,
            1.0009e11,
            1.19814e11,
            1.37143e11,
            1.56264e11,
            1.90184e11,
            2.36816e11,
            2.07434e11,
            2.0907e11,
            2.29563e11,
            2.08858e11,
            2.11686e11,
            2.09359e11,
            1.88033e11,
        ],
    ),
    (
        "Agriculture, forestry, and fishing, value added (% of GDP)",
        [
            3.250528331,
            3.203527086,
            2.659586723,
            2.440027314,
            2.415394613,
            2.284635292,
            2.164955432,
            2.088905575,
            1.919927972,
            1.756787513,
            1.540596113,
            1.982510992,
            2.251185645,
            2.364771166,
            2.413452542,
            2.211213873,
        ],
    ),
    (
        "Industry (including construction), value added (% of GDP)",
        [
            33.49120748,
            33.90920025,
            33.2092894,
            32.34225338,
            33.57974959,
            33.61719819,
            34.33321599,
            34.18273662,
            33.65763346,
            32.98769447,
            33.17075187,
            33.65057382,
            32.9223275,
            32.64607051,
            33.83935076,
            33.7818228,
        ],
    ),
    (
        "Exports of goods and services (% of GDP)",
        [
            48.09098982,
            48.85651186,
            45.0041286,
            46.72804779,
            57.05783989,
            61.81322686,
            64.87542344,
            66.10076919,
            62.95164809,
            58.34542981,
            65.54300541,
            70.82186719,
            75.64618657,
            76.05838162,
            81.95427457,
            80.55877811,
        ],
    ),
    (
        "Imports of goods and services (% of GDP)",
        [
            49.95534908,
            50.1559443,
            46.33052172,
            48.24548106,
            56.43112009,
            59.48473354,
            62.15295843,
            63.67824812,
            60.79085103,
            54.45181472,
            62.48590613,
            67.04095169,
            70.88267001,
            70.36403543,
            75.6207076,
            74.61688537,
        ],
    ),
];

// 1. Hermite correctness --------------------------------------------------

const C1_REL_TOL: f64 = 1e-12;

/// Hand-expanded H_0..H_10, coefficients lowest power first.
const HERMITE_CLOSED_FORMS: [&[f64]; 11] = [
    &[1.0],
    &[0.0, 2.0],
    &[-2.0, 0.0, 4.0],
    &[0.0, -12.0, 0.0, 8.0],
    &[12.0, 0.0, -48.0, 0.0, 16.0],
    &[0.0, 120.0, 0.0, -160.0, 0.0, 32.0],
    &[-120.0, 0.0, 720.0, 0.0, -480.0, 0.0, 64.0],
    &[0.0, -1680.0, 0.0, 3360.0, 0.0, -1344.0, 0.0, 128.0],
    &[
        1680.0, 0.0, -13440.0, 0.0, 13440.0, 0.0, -3584.0, 0.0, 256.0,
    ],
    &[
        0.0, 30240.0, 0.0, -80640.0, 0.0, 48384.0, 0.0, -9216.0, 0.0, 512.0,
    ],
    &[
        -30240.0, 0.0, 302400.0, 0.0, -403200.0, 0.0, 161280.0, 0.0, -23040.0, 0.0, 1024.0,
    ],
];

/// Closed form evaluated in double-double so the oracle itself is accurate
/// near roots, where the f64 power sum cancels.
fn closed_form(c: &[f64], x: f64) -> f64 {
    let mut acc = DoubleDouble::ZERO;
    let mut p = DoubleDouble::ONE;
    for ci in c {
        acc += p * *ci;
        p = p * x;
    }
    acc.to_f64()
}

fn criterion_1() -> Outcome {
    timed(TIME_LIMIT, || {
        let spec = BasisSpec::hermite(10);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let x: f64 = rng.gen_range(-3.0..=3.0);
            for (k, c) in HERMITE_CLOSED_FORMS.iter().enumerate() {
                let oracle = closed_form(c, x);
                let got = basis::basis_eval(spec, k, x).map_err(|e| e.to_string())?;
                let rel = (got - oracle).abs() / oracle.abs();
                worst = worst.max(rel);
                ensure(rel <= C1_REL_TOL, || {
                    format!("H_{k}({x}) = {got}, oracle {oracle}, rel {rel:e}")
                })?;
            }
        }
        let h10 = basis::basis_eval(spec, 10, 0.0).map_err(|e| e.to_string())?;
        ensure((h10 + 30240.0).abs() <= C1_REL_TOL * 30240.0, || {
            format!("H_10(0) = {h10}")
        })?;
        Ok(format!(
            "1100 evaluations, worst rel {worst:.2e}, H_10(0) = {h10}"
        ))
    })
}

// 2. Conversion round trip -------------------------------------------------

const C2_ROUND_TRIP_TOL: f64 = 1e-9;
const C2_EXACT_TOL: f64 = 1e-12;

fn criterion_2() -> Outcome {
    timed(TIME_LIMIT, || {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut worst = 0.0f64;
        for _ in 0..200 {
            let degree = rng.gen_range(0..=15usize);
            let c: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let mono = CoefficientVector::from_coefficients(Family::Monomial, c.clone()).unwrap();
            let back = basis::to_hermite(&mono)
                .and_then(|h| basis::to_monomial(&h))
                .map_err(|e| e.to_string())?;
            for (a, b) in back.coefficients().iter().zip(&c) {
                worst = worst.max((a - b).abs());
            }
        }
        ensure(worst <= C2_ROUND_TRIP_TOL, || {
            format!("round-trip error {worst:e}")
        })?;
        let x2 =
            CoefficientVector::from_coefficients(Family::Monomial, vec![0.0, 0.0, 1.0]).unwrap();
        let h = basis::to_hermite(&x2).map_err(|e| e.to_string())?;
        let want = [0.5, 0.0, 0.25];
        for (k, (g, w)) in h.coefficients().iter().zip(want).enumerate() {
            ensure((g - w).abs() <= C2_EXACT_TOL, || {
                format!("x² coefficient {k}: {g} vs {w}")
            })?;
        }
        Ok(format!(
            "200 vectors, worst abs error {worst:.2e}, x² -> {:?}",
            h.coefficients()
        ))
    })
}

// 3. Interpolation exactness ------------------------------------------------

const C3_TOL: f64 = 1e-6;

fn criterion_3() -> Outcome {
    timed(TIME_LIMIT, || {
        let data = dataio::table1();
        let map = DomainMap::new(2000, 2015).map_err(|e| e.to_string())?;
        let fits = fit::fit_all(&data, BasisSpec::hermite(15), &map).map_err(|e| e.to_string())?;
        let mut worst_res = 0.0f64;
        let mut worst_rec = 0.0f64;
        for (f, (label, values)) in fits.iter().zip(TABLE1.iter()) {
            ensure(f.label == *label, || {
                format!("series order: {} vs {label}", f.label)
            })?;
            worst_res = worst_res.max(f.residual_max_rel);
            ensure(f.residual_max_rel <= C3_TOL, || {
                format!("{label}: residual {:e}", f.residual_max_rel)
            })?;
            let r = fit::reconstruct(f, &map, Point::Year(2000.0));
            let rel = (r.value - values[0]).abs() / values[0].abs();
            worst_rec = worst_rec.max(rel);
            ensure(rel <= C3_TOL, || {
                format!("{label}: value at 2000 {} vs {}", r.value, values[0])
            })?;
        }
        Ok(format!(
            "8 fits, worst residual {worst_res:.2e}, worst year-2000 rel error {worst_rec:.2e}"
        ))
    })
}

// 4. Pearson example and oracle ---------------------------------------------

const C4_PUBLISHED_TOL: f64 = 5e-3;
const C4_ORACLE_TOL: f64 = 1e-10;

fn naive_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (sx, sy) = (x.iter().sum::<f64>(), y.iter().sum::<f64>());
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let sxx: f64 = x.iter().map(|a| a * a).sum();
    let syy: f64 = y.iter().map(|b| b * b).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

fn criterion_4() -> Outcome {
    let demo = report::exp_demo().map_err(|e| e.to_string())?;
    ensure(demo.delta.abs() <= C4_PUBLISHED_TOL, || {
        format!("computed {} vs 0.71687", demo.computed)
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(5..=50);
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let y: Vec<f64> = x
            .iter()
            .map(|v| 0.5 * v + rng.gen_range(-5.0..5.0))
            .collect();
        let got = similarity::pearson(&x, &y).map_err(|e| e.to_string())?;
        worst = worst.max((got - naive_pearson(&x, &y)).abs());
    }
    ensure(worst <= C4_ORACLE_TOL, || {
        format!("two-pass vs naive {worst:e}")
    })?;
    Ok(format!(
        "computed {:.7} (delta {:.1e}); 100 random series, worst oracle gap {worst:.1e}",
        demo.computed, demo.delta
    ))
}

// 5. Matrix invariants -------------------------------------------------------

const C5_TOL: f64 = 1e-12;

fn check_matrix(m: &similarity::SimilarityMatrix) -> Result<(), String> {
    let n = m.dim();
    for i in 0..n {
        ensure((m.entries[i][i] - 1.0).abs() <= C5_TOL, || {
            format!("diag {i} = {}", m.entries[i][i])
        })?;
        for j in 0..n {
            let v = m.entries[i][j];
            ensure(v == m.entries[j][i], || format!("asymmetric at ({i},{j})"))?;
            ensure(v.abs() <= 1.0 + C5_TOL, || {
                format!("out of range at ({i},{j}): {v}")
            })?;
        }
    }
    Ok(())
}

fn all_matrices(data: &[TimeSeries]) -> Result<Vec<similarity::SimilarityMatrix>, String> {
    let map = DomainMap::for_series(&data[0]).map_err(|e| e.to_string())?;
    let spec = BasisSpec::hermite(data[0].len() - 1);
    let mut out = Vec::new();
    for (method, k0) in [
        (Method::TauCovariance, true),
        (Method::TauCovariance, false),
        (Method::Pearson, true),
    ] {
        out.push(
            similarity::similarity_matrix(data, method, spec, &map, k0)
                .map_err(|e| e.to_string())?,
        );
    }
    Ok(out)
}

fn criterion_5() -> Outcome {
    for m in all_matrices(&dataio::table1())? {
        check_matrix(&m).map_err(|e| format!("bundled {:?}: {e}", m.method))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let years: Vec<i32> = (2000..2016).collect();
    for d in 0..100 {
        let data: Vec<TimeSeries> = (0..8)
            .map(|s| {
                let scale = 10f64.powi(rng.gen_range(-2..=8));
                let values = (0..16).map(|_| scale * rng.gen_range(0.5..2.0)).collect();
                TimeSeries::new(format!("s{s}"), years.clone(), values).unwrap()
            })
            .collect();
        for m in all_matrices(&data)? {
            check_matrix(&m).map_err(|e| format!("dataset {d} {:?}: {e}", m.method))?;
        }
    }
    Ok("bundled data and 100 seeded 8x16 datasets, tau (both k0) and pearson".into())
}

// 6. τ algebraic properties --------------------------------------------------

const C6_TOL: f64 = 1e-12;
const C6_LAMBDAS: [f64; 6] = [-1e6, -1.0, -1e-6, 1e-6, 1.0, 1e6];

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    let mut check = |got: f64, want: f64, what: &str| -> Result<(), String> {
        let err = (got - want).abs();
        worst = worst.max(err);
        ensure(err <= C6_TOL, || format!("{what}: {got} vs {want}"))
    };
    for _ in 0..100 {
        let mut coeffs = |_| {
            let c: Vec<f64> = (0..16)
                .map(|_| rng.gen_range(-1.0..1.0) * 10f64.powi(rng.gen_range(-3..=9)))
                .collect();
            CoefficientVector::from_coefficients(Family::HermitePhysicists, c).unwrap()
        };
        let (a, b) = (coeffs(0), coeffs(1));
        for k0 in [true, false] {
            let t = |x: &CoefficientVector, y: &CoefficientVector| {
                tau_covariance(x, y, k0).map_err(|e| e.to_string())
            };
            check(t(&a, &a)?, 1.0, "self")?;
            let tab = t(&a, &b)?;
            check(t(&a.neg(), &b)?, -tab, "negation")?;
            for l in C6_LAMBDAS {
                check(
                    t(&a.scaled(l), &b)?,
                    l.signum() * tab,
                    &format!("scale {l}"),
                )?;
            }
        }
    }
    Ok(format!(
        "100 random pairs, both k0 settings, worst error {worst:.1e}"
    ))
}

// 7. Comparison report -------------------------------------------------------

const ASYM_A: f64 = 0.452129202;
const ASYM_B: f64 = 0.973262207;

fn run_cli(args: &[&str]) -> Result<(Vec<u8>, i32), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_taucov"))
        .args(args)
        .env_remove("TAUCOV_FIXTURE_DIR")
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.stdout, out.status.code().unwrap_or(-1)))
}

fn criterion_7() -> Outcome {
    let data = dataio::table1();
    let map = DomainMap::new(2000, 2015).unwrap();
    let spec = BasisSpec::hermite(15);
    let t3 = dataio::reference_table(Fixture::Table3).unwrap();
    let rep = report::compare_dataset(&data, Method::TauCovariance, spec, &map, &t3)
        .map_err(|e| e.to_string())?;
    ensure(rep.variants.len() == 2, || {
        format!("{} variants", rep.variants.len())
    })?;
    let ks: Vec<_> = rep.variants.iter().map(|v| v.k0_included).collect();
    ensure(ks == [Some(true), Some(false)], || {
        format!("variants {ks:?}")
    })?;
    for v in &rep.variants {
        ensure(v.pairs.len() == 28, || format!("{} pairs", v.pairs.len()))?;
        ensure(
            v.per_cell_delta.len() == 8 && v.per_cell_delta.iter().all(|r| r.len() == 8),
            || "delta shape".into(),
        )?;
        let max = v
            .per_cell_delta
            .iter()
            .flatten()
            .fold(0.0f64, |m, d| m.max(d.abs()));
        ensure(max == v.max_abs_delta, || {
            "max_abs_delta inconsistent".into()
        })?;
        let listed = v.pairs.iter().filter(|p| p.sign_mismatch).count();
        ensure(listed == v.sign_mismatches.len(), || {
            "sign mismatch list incomplete".into()
        })?;
    }

    let t2 = dataio::reference_table(Fixture::Table2).unwrap();
    let rep2 = report::compare_dataset(&data, Method::Pearson, spec, &map, &t2)
        .map_err(|e| e.to_string())?;
    ensure(
        rep2.variants.len() == 1 && rep2.variants[0].pairs.len() == 28,
        || "pearson pairs".into(),
    )?;
    let flagged = rep2.variants[0].pairs.iter().any(|p| {
        p.reference_asymmetric
            && [p.reference_ij, p.reference_ji].contains(&ASYM_A)
            && [p.reference_ij, p.reference_ji].contains(&ASYM_B)
    });
    ensure(flagged, || "Table 2 asymmetric pair not flagged".into())?;
    ensure(
        rep2.notes
            .iter()
            .any(|n| n.contains("0.452129202") && n.contains("0.973262207")),
        || "asymmetry note missing".into(),
    )?;

    // Determinism through the binary, every format.
    let mut sizes = Vec::new();
    for (method, reference) in [("tau", "table3"), ("pearson", "table2")] {
        for format in ["md", "csv", "json"] {
            let args = [
                "--no-banner",
                "compare",
                "--method",
                method,
                "--reference",
                reference,
                "--format",
                format,
            ];
            let (a, code_a) = run_cli(&args)?;
            let (b, code_b) = run_cli(&args)?;
            ensure(code_a == 0 && code_b == 0, || {
                format!("{method}/{format} exit {code_a}")
            })?;
            ensure(a == b, || {
                format!("{method}/{format} output differs between runs")
            })?;
            sizes.push(a.len());
        }
    }
    let (json, _) = run_cli(&[
        "--no-banner",
        "compare",
        "--method",
        "tau",
        "--format",
        "json",
    ])?;
    let parsed: report::ComparisonReport =
        serde_json::from_slice(&json).map_err(|e| e.to_string())?;
    ensure(parsed == rep, || {
        "CLI JSON report differs from library report".into()
    })?;
    ensure(
        parsed.reference.source == ReferenceSource::PublishedTable3,
        || "reference source".into(),
    )?;
    Ok(format!(
        "tau: 2 x 28 pairs, {} + {} sign mismatches; pearson asymmetry flagged; 6 CLI outputs byte-identical across runs",
        rep.variants[0].sign_mismatches.len(),
        rep.variants[1].sign_mismatches.len()
    ))
}

// 8. Fixture fidelity ---------------------------------------------------------

fn criterion_8() -> Outcome {
    let t3 = match dataio::load_fixture(Fixture::Table3) {
        dataio::FixtureData::Matrix(m) => m,
        dataio::FixtureData::Series(_) => return Err("table3 loaded as series".into()),
    };
    let forest = "Forest area (sq. km)";
    let co2 = t3.entry(forest, "CO2 emissions (metric tons per capita)");
    let elec = t3.entry(forest, "Electric power consumption (kWh per capita)");
    ensure(co2 == Some(0.553868219), || {
        format!("(Forest, CO2) = {co2:?}")
    })?;
    ensure(elec == Some(-0.998710332), || {
        format!("(Forest, Electric) = {elec:?}")
    })?;
    Ok("(Forest, CO2) = 0.553868219, (Forest, Electric) = -0.998710332, bit-exact".into())
}

// 9. Ingestion ---------------------------------------------------------------

fn criterion_9() -> Outcome {
    let data = dataio::table1();
    ensure(data.len() == 8, || format!("{} series", data.len()))?;
    let mut count = 0;
    for (s, (label, values)) in data.iter().zip(TABLE1.iter()) {
        ensure(s.label == *label, || {
            format!("label {} vs {label}", s.label)
        })?;
        ensure(s.years == (2000..=2015).collect::<Vec<_>>(), || {
            "years".into()
        })?;
        for (i, (got, want)) in s.values.iter().zip(values).enumerate() {
            ensure(got.to_bits() == want.to_bits(), || {
                format!("{label}[{i}] = {got}, want {want}")
            })?;
            count += 1;
        }
    }
    ensure(count == 128, || format!("{count} values"))?;
    let sci = dataio::parse_number(
        "1,19814E+11",
        CsvOptions {
            decimal_comma: true,
        },
    );
    ensure(sci == Some(1.19814e11), || {
        format!("scientific cell -> {sci:?}")
    })?;

    let text = dataio::write_wide_csv(&data).map_err(|e| e.to_string())?;
    let back = dataio::parse_wide_csv(text.as_bytes(), CsvOptions::default())
        .map_err(|e| e.to_string())?;
    ensure(back == data, || {
        "default-dialect round trip lost data".into()
    })?;
    let comma = dataio::to_decimal_comma_dialect(&text).map_err(|e| e.to_string())?;
    let back = dataio::parse_wide_csv(
        comma.as_bytes(),
        CsvOptions {
            decimal_comma: true,
        },
    )
    .map_err(|e| e.to_string())?;
    ensure(back == data, || "decimal-comma round trip lost data".into())?;
    Ok("128 values bit-exact; both CSV dialects round-trip losslessly".into())
}

// 10. Gram matrices ------------------------------------------------------------

const C10_TOL: f64 = 1e-8;
/// Highest degree at which Gauss-weight off-diagonals are checked in absolute
/// terms; above it they are checked relative to `sqrt(G_jj G_kk)`.
const C10_ABS_DEGREE: usize = 8;

fn criterion_10() -> Outcome {
    let unit = basis::gram_matrix(BasisSpec::hermite(15), GramWeight::Unit { a: 0.0, b: 1.0 })
        .map_err(|e| e.to_string())?;
    ensure((unit[0][1] - 1.0).abs() <= C10_TOL, || {
        format!("unit G[0][1] = {}", unit[0][1])
    })?;
    let g = basis::gram_matrix(BasisSpec::hermite(C10_ABS_DEGREE), GramWeight::Gauss)
        .map_err(|e| e.to_string())?;
    let mut worst_abs = 0.0f64;
    for (j, row) in g.iter().enumerate() {
        for (k, v) in row.iter().enumerate() {
            if j != k {
                worst_abs = worst_abs.max(v.abs());
            }
        }
    }
    ensure(worst_abs <= C10_TOL, || {
        format!("Gauss off-diagonal {worst_abs:e}")
    })?;
    let g =
        basis::gram_matrix(BasisSpec::hermite(15), GramWeight::Gauss).map_err(|e| e.to_string())?;
    let mut worst_rel = 0.0f64;
    for j in 0..16 {
        for k in 0..16 {
            if j != k {
                worst_rel = worst_rel.max(g[j][k].abs() / (g[j][j] * g[k][k]).sqrt());
            }
        }
    }
    ensure(worst_rel <= C10_TOL, || {
        format!("Gauss normalized off-diagonal {worst_rel:e}")
    })?;
    Ok(format!(
        "unit G[0][1] = {}; Gauss off-diagonal max {worst_abs:.1e} (degree {C10_ABS_DEGREE}), normalized {worst_rel:.1e} (degree 15)",
        unit[0][1]
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Hermite correctness", criterion_1),
        ("basis conversion round trip", criterion_2),
        ("interpolation exactness", criterion_3),
        ("Pearson example and oracle", criterion_4),
        ("matrix invariants", criterion_5),
        ("tau algebraic properties", criterion_6),
        ("comparison report", criterion_7),
        ("fixture fidelity", criterion_8),
        ("ingestion", criterion_9),
        ("Gram matrices", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
