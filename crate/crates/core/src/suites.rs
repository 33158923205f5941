//! Named verification suites. The defaults are the acceptance thresholds,
//! so `verify all` with no overrides is the full acceptance gate.

use std::time::Instant;

use num_complex::Complex64;

use crate::eisenstein::ode_residuals;
use crate::ellf::{self, FContext};
use crate::inversion::{self, linspace};
use crate::jacobi::{self, JacobiContext};
use crate::report::VerificationReport;
use crate::theta::Level;
use crate::trig::eq1_residual;

pub mod defaults {
    pub const EQ1_EXACT_ORDER: usize = 30;
    pub const EISENSTEIN_ORDER: usize = 500;
    pub const MOREOVER_EXACT_ORDER: usize = 60;
    pub const ROUNDTRIP_TOL: f64 = 1e-8;
    pub const SYMMETRY_TOL: f64 = 1e-9;
    pub const REVERSE_ROUNDTRIP_TOL: f64 = 1e-7;
    pub const REFLECTION_TOL: f64 = 1e-7;
    pub const MOREOVER_NUM_TOL: f64 = 1e-9;
    pub const MONOTONIC_POINTS: usize = 1000;
    pub const MONOTONIC_EVAL_TOL: f64 = 1e-15;
    pub const JACOBI_DERIV_TOL: f64 = 1e-10;
    pub const JACOBI_YS: [f64; 3] = [0.5, 1.0, 2.0];
    pub const JACOBI_GRID_POINTS: usize = 64;
    pub const PYTHAGOREAN_TOL: f64 = 1e-9;
    pub const PYTHAGOREAN_REFIT_TOL: f64 = 1e-8;
    pub const PYTHAGOREAN_FIT: [f64; 2] = [0.7, 2.1];
    pub const PYTHAGOREAN_REFIT: [f64; 2] = [1.1, 2.6];
    pub const QUASI_PERIOD_TOL: f64 = 1e-10;
    pub const FPRIME_TOL: f64 = 1e-10;
    pub const F_NOMES: [f64; 3] = [0.01, 0.05, 0.1];
    pub const F_GRID_POINTS: usize = 32;
    pub const OVERLAP_TOL: f64 = 1e-11;
    pub const OVERLAP_NOMES: [f64; 3] = [0.02, 0.05, 0.1];
    pub const OVERLAP_POINTS: usize = 20;
    pub const EQ1_REAL_TOL: f64 = 1e-10;
    pub const EQ1_COMPLEX_TOL: f64 = 1e-9;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Eq1Exact,
    Eq1Numeric,
    EisensteinOde,
    InversionLevel4,
    InversionLevel3,
    MoreoverNum,
    MoreoverExact,
    Monotonic,
    JacobianDeriv,
    Pythagorean,
    QuasiPeriod,
    FprimeElliptic,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Eq1Exact,
        Suite::Eq1Numeric,
        Suite::EisensteinOde,
        Suite::InversionLevel4,
        Suite::InversionLevel3,
        Suite::MoreoverNum,
        Suite::MoreoverExact,
        Suite::Monotonic,
        Suite::JacobianDeriv,
        Suite::Pythagorean,
        Suite::QuasiPeriod,
        Suite::FprimeElliptic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Eq1Exact => "eq1-exact",
            Suite::Eq1Numeric => "eq1-numeric",
            Suite::EisensteinOde => "eisenstein-ode",
            Suite::InversionLevel4 => "inversion-level4",
            Suite::InversionLevel3 => "inversion-level3",
            Suite::MoreoverNum => "moreover-num",
            Suite::MoreoverExact => "moreover-exact",
            Suite::Monotonic => "monotonic",
            Suite::JacobianDeriv => "jacobian-deriv",
            Suite::Pythagorean => "pythagorean",
            Suite::QuasiPeriod => "quasi-period",
            Suite::FprimeElliptic => "fprime-elliptic",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }
}

/// Overrides for a suite run. `order` applies to the exact suites, `tol`
/// replaces every pass threshold of the suite.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SuiteOptions {
    pub order: Option<usize>,
    pub tol: Option<f64>,
}

impl SuiteOptions {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn order(&self, default: usize) -> usize {
        self.order.unwrap_or(default)
    }
}

/// Nomes `first, first + 0.01, ...` up to `last`.
pub fn nome_grid(first: f64, last: f64) -> Vec<f64> {
    let n = ((last - first) / 0.01).round() as usize;
    (0..=n).map(|i| first + 0.01 * i as f64).collect()
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Vec<VerificationReport> {
    use defaults::*;
    match suite {
        Suite::Eq1Exact => {
            let started = Instant::now();
            let order = opts.order(EQ1_EXACT_ORDER);
            let r = match eq1_residual(order) {
                Ok(res) => VerificationReport::exact("eq1-exact", res.is_zero(), res.max_abs_coeff(), started)
                    .with_param("harmonics", res.harmonic_bound()),
                Err(e) => VerificationReport::exact("eq1-exact", false, f64::NAN, started).with_param("error", e.to_string()),
            };
            vec![r.with_param("order", order)]
        }
        Suite::EisensteinOde => {
            let started = Instant::now();
            let order = opts.order(EISENSTEIN_ORDER);
            ode_residuals(order)
                .iter()
                .zip(["qP' - (P^2 - Q)/12", "qQ' - (PQ - R)/3", "qR' - (PR - Q^2)/2"])
                .map(|(res, name)| {
                    VerificationReport::exact("eisenstein-ode", res.is_zero(), res.max_abs_coeff(), started)
                        .with_param("residual", name)
                        .with_param("order", order)
                })
                .collect()
        }
        Suite::InversionLevel4 | Suite::InversionLevel3 => {
            let (level, last) = if suite == Suite::InversionLevel4 { (Level::Four, 0.251) } else { (Level::Three, 0.201) };
            vec![
                inversion::roundtrip_check(level, &nome_grid(0.001, last), opts.tol(ROUNDTRIP_TOL)),
                inversion::symmetry_point_check(level, opts.tol(SYMMETRY_TOL)),
                inversion::reverse_roundtrip_check(level, &[0.1, 0.3, 0.5, 0.7], opts.tol(REVERSE_ROUNDTRIP_TOL)),
                inversion::reflection_check(level, &[0.2, 0.35, 0.5], opts.tol(REFLECTION_TOL)),
            ]
        }
        Suite::MoreoverNum => [Level::Four, Level::Three]
            .into_iter()
            .flat_map(|level| {
                [0.01, 0.05, 0.1, 0.2]
                    .into_iter()
                    .map(move |q| inversion::moreover_check_num(level, q, opts.tol(MOREOVER_NUM_TOL)))
            })
            .collect(),
        Suite::MoreoverExact => [Level::Four, Level::Three]
            .into_iter()
            .map(|level| inversion::moreover_check_exact(level, opts.order(MOREOVER_EXACT_ORDER)))
            .collect(),
        Suite::Monotonic => vec![
            inversion::monotonicity_scan(Level::Four, &linspace(0.001, 0.9, MONOTONIC_POINTS), MONOTONIC_EVAL_TOL),
            inversion::monotonicity_scan(Level::Three, &linspace(0.001, 0.6, MONOTONIC_POINTS), MONOTONIC_EVAL_TOL),
        ],
        Suite::JacobianDeriv => {
            let grid: Vec<Complex64> = jacobi::period_grid(JACOBI_GRID_POINTS)
                .into_iter()
                .map(|t| Complex64::new(t, 0.0))
                .collect();
            JACOBI_YS
                .iter()
                .map(|&y| {
                    let ctx = JacobiContext::new(y).expect("positive y");
                    jacobi::derivative_identity_check(&ctx, &grid, opts.tol(JACOBI_DERIV_TOL))
                })
                .collect()
        }
        Suite::Pythagorean => {
            let grid = jacobi::period_grid(JACOBI_GRID_POINTS);
            let mut out = Vec::new();
            for &y in &JACOBI_YS {
                let ctx = JacobiContext::new(y).expect("positive y");
                let started = Instant::now();
                let fail = |e: crate::Error| {
                    VerificationReport::numeric("pythagorean", f64::NAN, 0.0, started)
                        .with_param("y", y)
                        .with_param("error", e.to_string())
                };
                out.push(
                    jacobi::pythagorean_probe(&ctx, PYTHAGOREAN_FIT, &grid, opts.tol(PYTHAGOREAN_TOL)).unwrap_or_else(fail),
                );
                out.push(
                    jacobi::pythagorean_refit_check(&ctx, PYTHAGOREAN_FIT, PYTHAGOREAN_REFIT, opts.tol(PYTHAGOREAN_REFIT_TOL))
                        .unwrap_or_else(fail),
                );
            }
            out
        }
        Suite::QuasiPeriod => F_NOMES
            .iter()
            .map(|&q| {
                let ctx = FContext::real(q).expect("nome in range");
                ellf::quasi_period_check(&ctx, &ellf::pole_free_grid(F_GRID_POINTS), opts.tol(QUASI_PERIOD_TOL))
            })
            .collect(),
        Suite::FprimeElliptic => F_NOMES
            .iter()
            .map(|&q| {
                let ctx = FContext::real(q).expect("nome in range");
                ellf::fprime_elliptic_check(&ctx, &ellf::pole_free_grid(F_GRID_POINTS), opts.tol(FPRIME_TOL))
            })
            .collect(),
        Suite::Eq1Numeric => {
            let mut out = Vec::new();
            for &q in &OVERLAP_NOMES {
                let ctx = FContext::real(q).expect("nome in range");
                out.push(ellf::overlap_check(&ctx, &ellf::strip_points(&ctx, OVERLAP_POINTS, 0.8), opts.tol(OVERLAP_TOL)));
                for t in [0.7, 1.0, 1.3, 2.9] {
                    out.push(ellf::eq1_numeric_check(&ctx, Complex64::new(t, 0.0), opts.tol(EQ1_REAL_TOL)));
                }
                let w = ctx.strip_halfwidth();
                for t in [Complex64::new(1.0, 0.5), Complex64::new(2.2, -0.4 * w), Complex64::new(0.6, 0.7 * w)] {
                    out.push(ellf::eq1_numeric_check(&ctx, t, opts.tol(EQ1_COMPLEX_TOL)));
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_roundtrip() {
        for s in Suite::ALL {
            assert_eq!(Suite::from_name(s.name()), Some(s));
        }
        assert_eq!(Suite::from_name("bogus"), None);
    }

    #[test]
    fn nome_grids() {
        let g = nome_grid(0.001, 0.251);
        assert_eq!(g.len(), 26);
        assert!((g[25] - 0.251).abs() < 1e-12);
        assert_eq!(nome_grid(0.001, 0.201).len(), 21);
    }

    #[test]
    fn overrides_apply() {
        let r = run_suite(Suite::Eq1Exact, &SuiteOptions { order: Some(5), tol: None });
        assert_eq!(r[0].params["order"], 5);
        assert!(r[0].pass);
        let r = run_suite(Suite::QuasiPeriod, &SuiteOptions { order: None, tol: Some(1e-30) });
        assert!(r.iter().any(|r| !r.pass));
    }
}
