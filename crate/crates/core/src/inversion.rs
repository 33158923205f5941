//! Inversion of the moduli `x4(q)` and `x3(q)`:
//!
//! ```text
//! q = exp(-K * F(1 - x) / F(x))
//! ```
//!
//! with `K = pi, F = 2F1(1/2, 1/2; 1; .)` at level 4 and
//! `K = 2 pi / sqrt 3, F = 2F1(1/3, 2/3; 1; .)` at level 3, together with
//! the companion identities `F(x4) = theta3^2` and `F(x3) = a(q)`.

use std::f64::consts::PI;
use std::time::Instant;

use serde_json::json;

use crate::error::{check_tol, Error, Result};
use crate::hyper::{hyp2f1_num, hyp2f1_taylor, HypParams, DEFAULT_MAX_TERMS, DEFAULT_TOL};
use crate::qseries::QSeries;
use crate::report::VerificationReport;
use crate::theta::{theta_num, theta_series, x4_complement, x_num, x_series, Level, ThetaKind, ThetaSeriesKind};

/// Summation tolerance for the theta sums feeding numeric checks.
const THETA_TOL: f64 = 1e-15;

impl Level {
    /// `pi` for level 4, `2 pi / sqrt 3` for level 3.
    pub fn constant(self) -> f64 {
        match self {
            Level::Four => PI,
            Level::Three => 2.0 * PI / 3f64.sqrt(),
        }
    }

    pub fn hyp_params(self) -> HypParams {
        match self {
            Level::Four => HypParams::level4(),
            Level::Three => HypParams::level3(),
        }
    }

    /// Upper end of the nome range where numeric roundtrips are validated.
    pub fn validated_q_max(self) -> f64 {
        match self {
            Level::Four => 0.25,
            Level::Three => 0.20,
        }
    }
}

/// The nome belonging to modulus `x` in `(0, 1)`.
pub fn q_of_x(level: Level, x: f64, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::ModulusOutOfRange(x));
    }
    let p = level.hyp_params();
    let f = hyp2f1_num(&p, x, tol, DEFAULT_MAX_TERMS)?;
    let f_comp = hyp2f1_num(&p, 1.0 - x, tol, DEFAULT_MAX_TERMS)?;
    Ok((-level.constant() * f_comp / f).exp())
}

fn suite_name(level: Level) -> &'static str {
    match level {
        Level::Four => "inversion-level4",
        Level::Three => "inversion-level3",
    }
}

/// Max over the grid of `|q_of_x(x(q)) - q|`.
pub fn roundtrip_check(level: Level, q_grid: &[f64], tol: f64) -> VerificationReport {
    let started = Instant::now();
    let mut worst = 0.0f64;
    let mut error = None;
    for &q in q_grid {
        match x_num(level, q, THETA_TOL).and_then(|x| q_of_x(level, x, DEFAULT_TOL)) {
            Ok(back) => worst = worst.max((back - q).abs()),
            Err(e) => {
                worst = f64::NAN;
                error.get_or_insert(format!("q={q}: {e}"));
            }
        }
    }
    let mut r = VerificationReport::numeric(suite_name(level), worst, tol, started)
        .with_param("check", "roundtrip q -> x -> q")
        .with_param("level", level.number())
        .with_param("grid", grid_summary(q_grid));
    if let Some(e) = error {
        r = r.with_param("error", e);
    }
    r
}

/// Max over `xs` of `|x(q_of_x(x)) - x|`.
pub fn reverse_roundtrip_check(level: Level, xs: &[f64], tol: f64) -> VerificationReport {
    let started = Instant::now();
    let worst = max_residual(xs, |x| {
        let q = q_of_x(level, x, DEFAULT_TOL)?;
        Ok((x_num(level, q, THETA_TOL)? - x).abs())
    });
    VerificationReport::numeric(suite_name(level), worst, tol, started)
        .with_param("check", "roundtrip x -> q -> x")
        .with_param("level", level.number())
        .with_param("xs", xs.to_vec())
}

/// `|q_of_x(1/2) - exp(-K)|`.
pub fn symmetry_point_check(level: Level, tol: f64) -> VerificationReport {
    let started = Instant::now();
    let worst = max_residual(&[0.5], |x| Ok((q_of_x(level, x, DEFAULT_TOL)? - (-level.constant()).exp()).abs()));
    VerificationReport::numeric(suite_name(level), worst, tol, started)
        .with_param("check", "symmetry point x = 1/2")
        .with_param("level", level.number())
}

/// `|log q(x) * log q(1 - x) - K^2|`.
pub fn reflection_check(level: Level, xs: &[f64], tol: f64) -> VerificationReport {
    let started = Instant::now();
    let k2 = level.constant().powi(2);
    let worst = max_residual(xs, |x| {
        let a = q_of_x(level, x, DEFAULT_TOL)?.ln();
        let b = q_of_x(level, 1.0 - x, DEFAULT_TOL)?.ln();
        Ok((a * b - k2).abs())
    });
    VerificationReport::numeric(suite_name(level), worst, tol, started)
        .with_param("check", "reflection log q(x) log q(1-x) = K^2")
        .with_param("level", level.number())
        .with_param("xs", xs.to_vec())
}

/// `|F(x4(q)) - theta3(q)^2|` or `|F(x3(q)) - a(q)|` at one nome.
pub fn moreover_check_num(level: Level, q: f64, tol: f64) -> VerificationReport {
    let started = Instant::now();
    let worst = max_residual(&[q], |q| {
        let x = x_num(level, q, THETA_TOL)?;
        let lhs = hyp2f1_num(&level.hyp_params(), x, DEFAULT_TOL, DEFAULT_MAX_TERMS)?;
        let rhs = match level {
            Level::Four => theta_num(ThetaKind::Theta3, q, THETA_TOL)?.powi(2),
            Level::Three => theta_num(ThetaKind::CubicA, q, THETA_TOL)?,
        };
        Ok((lhs - rhs).abs())
    });
    VerificationReport::numeric("moreover-num", worst, tol, started)
        .with_param("level", level.number())
        .with_param("q", q)
}

/// The companion identity as formal q-series through `order`.
pub fn moreover_residual_exact(level: Level, order: usize) -> Result<QSeries> {
    let x = x_series(level, order)?;
    let lhs = QSeries::compose(&hyp2f1_taylor(&level.hyp_params(), order)?, &x)?;
    let rhs = match level {
        Level::Four => theta_series(ThetaSeriesKind::Theta3, order).pow(2),
        Level::Three => theta_series(ThetaSeriesKind::CubicA, order),
    };
    Ok(&lhs - &rhs)
}

pub fn moreover_check_exact(level: Level, order: usize) -> VerificationReport {
    let started = Instant::now();
    let report = match moreover_residual_exact(level, order) {
        Ok(res) => VerificationReport::exact("moreover-exact", res.is_zero(), res.max_abs_coeff(), started),
        Err(e) => VerificationReport::exact("moreover-exact", false, f64::NAN, started).with_param("error", e.to_string()),
    };
    report.with_param("level", level.number()).with_param("order", order)
}

/// Checks that `x(q)` strictly increases along a strictly increasing grid
/// and stays inside `(0, 1)`.
///
/// Where two level-4 values round to the same float (beyond q ~ 0.75 they
/// are all exactly 1.0) the step is decided by the complement `1 - x4`,
/// which must strictly decrease. The residual is the number of failing
/// steps; the report passes only at zero.
pub fn monotonicity_scan(level: Level, grid: &[f64], tol: f64) -> VerificationReport {
    let started = Instant::now();
    let eval = |q: f64| -> Result<(f64, Option<f64>)> {
        let x = x_num(level, q, tol)?;
        let comp = match level {
            Level::Four => Some(x4_complement(q, tol)?),
            Level::Three => None,
        };
        Ok((x, comp))
    };
    let mut violations = 0usize;
    let mut min_step = f64::INFINITY;
    let mut resolved_by_complement = 0usize;
    let mut error = None;
    let mut prev: Option<(f64, f64, Option<f64>)> = None;
    for &q in grid {
        let (x, comp) = match eval(q) {
            Ok(v) => v,
            Err(e) => {
                violations += 1;
                error.get_or_insert(format!("q={q}: {e}"));
                prev = None;
                continue;
            }
        };
        let in_range = x > 0.0 && (x < 1.0 || comp.is_some_and(|c| c > 0.0));
        if !in_range {
            violations += 1;
        }
        if let Some((pq, px, pcomp)) = prev {
            let step = x - px;
            let ok = if q.partial_cmp(&pq) != Some(std::cmp::Ordering::Greater) {
                false
            } else if step > 0.0 {
                min_step = min_step.min(step);
                true
            } else if step == 0.0 {
                match (pcomp, comp) {
                    (Some(a), Some(b)) if b < a => {
                        resolved_by_complement += 1;
                        true
                    }
                    _ => false,
                }
            } else {
                false
            };
            if !ok {
                violations += 1;
            }
        }
        prev = Some((q, x, comp));
    }
    let mut r = VerificationReport::numeric("monotonic", violations as f64, 0.0, started)
        .with_param("level", level.number())
        .with_param("grid", grid_summary(grid))
        .with_param("min_positive_step", if min_step.is_finite() { json!(min_step) } else { json!(null) })
        .with_param("steps_resolved_by_complement", resolved_by_complement);
    if let Some(e) = error {
        r = r.with_param("error", e);
    }
    r
}

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

pub(crate) fn grid_summary(grid: &[f64]) -> serde_json::Value {
    json!({
        "n": grid.len(),
        "first": grid.first(),
        "last": grid.last(),
    })
}

/// Max of `f` over the points; any error poisons the result with NaN.
pub(crate) fn max_residual(points: &[f64], f: impl Fn(f64) -> Result<f64>) -> f64 {
    points
        .iter()
        .map(|&p| f(p).unwrap_or(f64::NAN))
        .fold(0.0, |acc, v| if acc.is_nan() || v.is_nan() { f64::NAN } else { acc.max(v) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetry_points() {
        let q4 = q_of_x(Level::Four, 0.5, DEFAULT_TOL).unwrap();
        assert!((q4 - (-PI).exp()).abs() < 1e-9);
        assert!((q4 - 0.0432139).abs() < 1e-7);
        let q3 = q_of_x(Level::Three, 0.5, DEFAULT_TOL).unwrap();
        assert!((q3 - (-2.0 * PI / 3f64.sqrt()).exp()).abs() < 1e-9);
        assert!((q3 - 0.0266).abs() < 1e-4);
    }

    #[test]
    fn small_modulus_gives_small_nome() {
        // q ~ x/16 as x -> 0
        let q = q_of_x(Level::Four, 1e-3, DEFAULT_TOL).unwrap();
        assert!(q > 0.0 && (q * 16.0 / 1e-3 - 1.0).abs() < 0.01, "{q}");
    }

    #[test]
    fn q_of_x_errors() {
        for x in [0.0, 1.0, -0.5, 2.0] {
            assert_eq!(q_of_x(Level::Four, x, 1e-13), Err(Error::ModulusOutOfRange(x)));
        }
        assert!(matches!(q_of_x(Level::Four, 1e-9, 1e-13), Err(Error::SlowConvergence { .. })));
    }

    #[test]
    fn roundtrips() {
        assert!(roundtrip_check(Level::Four, &[0.05], 1e-8).pass);
        let g4: Vec<f64> = (0..26).map(|i| 0.001 + 0.01 * i as f64).collect();
        assert!(roundtrip_check(Level::Four, &g4, 1e-8).pass);
        let g3: Vec<f64> = (0..21).map(|i| 0.001 + 0.01 * i as f64).collect();
        assert!(roundtrip_check(Level::Three, &g3, 1e-8).pass);
        for level in [Level::Three, Level::Four] {
            assert!(reverse_roundtrip_check(level, &[0.1, 0.3, 0.5, 0.7], 1e-7).pass);
            assert!(reflection_check(level, &[0.2, 0.35, 0.5], 1e-7).pass);
            assert!(symmetry_point_check(level, 1e-9).pass);
        }
    }

    #[test]
    fn moreover_numeric() {
        for level in [Level::Three, Level::Four] {
            assert!(moreover_check_num(level, 0.05, 1e-9).pass);
        }
        // Near q = 0 both sides tend to 1.
        let x = x_num(Level::Four, 1e-8, 1e-16).unwrap();
        let lhs = hyp2f1_num(&HypParams::level4(), x, 1e-15, 100).unwrap();
        assert!((lhs - 1.0).abs() < 1e-6);
    }

    #[test]
    fn moreover_exact_low_and_mid_orders() {
        for level in [Level::Three, Level::Four] {
            for n in [1, 2, 10, 25] {
                assert!(moreover_residual_exact(level, n).unwrap().is_zero(), "{level:?} {n}");
            }
        }
    }

    #[test]
    fn moreover_exact_detects_wrong_parameters() {
        let x = x_series(Level::Four, 8).unwrap();
        let lhs = QSeries::compose(&hyp2f1_taylor(&HypParams::level3(), 8).unwrap(), &x).unwrap();
        let rhs = theta_series(ThetaSeriesKind::Theta3, 8).pow(2);
        assert!(!(&lhs - &rhs).is_zero());
    }

    #[test]
    fn monotone_scans() {
        assert!(monotonicity_scan(Level::Four, &linspace(0.001, 0.9, 1000), 1e-15).pass);
        assert!(monotonicity_scan(Level::Three, &linspace(0.001, 0.6, 1000), 1e-15).pass);
        let r = monotonicity_scan(Level::Four, &[0.2, 0.2], 1e-15);
        assert!(!r.pass);
        assert_eq!(r.max_abs_residual.as_f64(), 1.0);
        assert!(!monotonicity_scan(Level::Three, &[0.3, 0.2], 1e-15).pass);
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(0.001, 0.9, 1000);
        assert_eq!(g.len(), 1000);
        assert_eq!(g[0], 0.001);
        assert!((g[999] - 0.9).abs() < 1e-15);
    }
}
