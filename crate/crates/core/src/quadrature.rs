//! Composite Simpson quadrature with interval halving.

use crate::error::{Error, Result};

/// Successive estimates must agree to `tol · max(1, |S|, S_abs)`, where
/// `S_abs` is the same rule applied to `|f|`. The last term keeps the test
/// attainable when a near-zero integral comes from large cancelling parts.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

const START_INTERVALS: usize = 64;
const MAX_INTERVALS: usize = 1 << 22;

/// Integrates `f` over `[a, b]`, doubling the number of panels until two
/// successive composite Simpson estimates agree. Function values are reused
/// across refinements.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let mut n = START_INTERVALS;
    let h0 = (b - a) / n as f64;
    let (fa, fb) = (f(a), f(b));
    let ends = Sums {
        plain: fa + fb,
        abs: fa.abs() + fb.abs(),
    };
    // Interior points split by parity of their index on the current grid.
    let mut even = Sums::over((1..n / 2).map(|i| f(a + (2 * i) as f64 * h0)));
    let mut odd = Sums::over((0..n / 2).map(|i| f(a + (2 * i + 1) as f64 * h0)));
    let mut prev = Sums::simpson(h0, ends, odd, even).plain;
    loop {
        if n >= MAX_INTERVALS {
            return Err(Error::numerical(
                format!("Simpson refinement did not converge on [{a}, {b}] with {n} panels"),
                None,
            ));
        }
        n *= 2;
        let h = (b - a) / n as f64;
        even = even.add(odd);
        odd = Sums::over((0..n / 2).map(|i| f(a + (2 * i + 1) as f64 * h)));
        let next = Sums::simpson(h, ends, odd, even);
        if !next.plain.is_finite() {
            return Err(Error::numerical("non-finite quadrature estimate", None));
        }
        let scale = next.plain.abs().max(next.abs).max(1.0);
        if (next.plain - prev).abs() < tol * scale {
            return Ok(next.plain);
        }
        prev = next.plain;
    }
}

/// Running sums of `f` and `|f|`.
#[derive(Clone, Copy)]
struct Sums {
    plain: f64,
    abs: f64,
}

impl Sums {
    fn over(values: impl Iterator<Item = f64>) -> Self {
        values.fold(
            Sums {
                plain: 0.0,
                abs: 0.0,
            },
            |s, v| Sums {
                plain: s.plain + v,
                abs: s.abs + v.abs(),
            },
        )
    }

    fn add(self, o: Sums) -> Sums {
        Sums {
            plain: self.plain + o.plain,
            abs: self.abs + o.abs,
        }
    }

    fn simpson(h: f64, ends: Sums, odd: Sums, even: Sums) -> Sums {
        Sums {
            plain: h / 3.0 * (ends.plain + 4.0 * odd.plain + 2.0 * even.plain),
            abs: h / 3.0 * (ends.abs + 4.0 * odd.abs + 2.0 * even.abs),
        }
    }
}
