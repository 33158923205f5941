//! `f(t) = 1/4 cot(t/2) + sum_{n>=1} q^n/(1-q^n) sin nt` and its
//! meromorphic continuation.
//!
//! Writing `z = e^{it}` and resumming the Lambert terms geometrically,
//!
//! ```text
//! f = (i/4)(z+1)/(z-1) - (i/2) sum_{m>=1} [ q^m z/(1 - q^m z) - q^m/(z - q^m) ]
//! ```
//!
//! which converges for every `z` off the pole set `{1} ∪ {q^m, q^-m : m >= 1}`
//! (the lattice `2 pi Z + 2 pi tau Z` in `t`). Shifting `t` by `2 pi tau`
//! is `z -> q z`.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;

use crate::error::{check_tol, Error, Result};
use crate::report::VerificationReport;
use crate::tail::poly_geometric_tail;

const I: Complex64 = Complex64::new(0.0, 1.0);
/// Relative distance below which a point counts as a pole.
const POLE_GUARD: f64 = 1e-8;
/// Summation tolerance used inside the checks.
const EVAL_TOL: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FContext {
    q: Complex64,
}

impl FContext {
    /// `|q| < 1`; `q = 0` is the degenerate limit `f = 1/4 cot(t/2)`.
    pub fn new(q: Complex64) -> Result<Self> {
        if q.norm() < 1.0 && q.is_finite() {
            Ok(Self { q })
        } else {
            Err(Error::NomeOutOfRange(q.norm()))
        }
    }

    pub fn real(q: f64) -> Result<Self> {
        Self::new(Complex64::new(q, 0.0))
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    /// `tau` with `q = exp(2 pi i tau)`, principal branch. `None` at `q = 0`.
    pub fn tau(&self) -> Option<Complex64> {
        (self.q.norm() > 0.0).then(|| self.q.ln() / (2.0 * PI * I))
    }

    /// Half-width of the convergence strip, `2 pi Im tau = -ln|q|`.
    pub fn strip_halfwidth(&self) -> f64 {
        -self.q.norm().ln()
    }
}

fn cot_half(theta: Complex64) -> Complex64 {
    let h = theta / 2.0;
    h.cos() / h.sin()
}

fn check_strip(theta: Complex64, ctx: &FContext) -> Result<()> {
    let bound = ctx.strip_halfwidth();
    let im = theta.im.abs();
    if im >= bound {
        return Err(Error::OutsideStrip { im, bound });
    }
    Ok(())
}

/// Fourier-series evaluation inside the strip `|Im t| < -ln|q|`.
///
/// Terms are bounded by `rho^n / (1 - |q|)` with `rho = |q| e^{|Im t|}`.
pub fn f_strip(theta: Complex64, ctx: &FContext, tol: f64) -> Result<Complex64> {
    check_tol(tol)?;
    check_strip(theta, ctx)?;
    if ((I * theta).exp() - 1.0).norm() < POLE_GUARD {
        return Err(Error::PoleOfF);
    }
    let q = ctx.q;
    let aq = q.norm();
    let mut sum = 0.25 * cot_half(theta);
    if aq == 0.0 {
        return Ok(sum);
    }
    let rho = aq * theta.im.abs().exp();
    let mut qn = Complex64::new(1.0, 0.0);
    let mut n = 1u64;
    loop {
        qn *= q;
        sum += qn / (1.0 - qn) * (theta * n as f64).sin();
        if poly_geometric_tail(rho, n as f64, 1.0, 0.0) / (1.0 - aq) < tol {
            return Ok(sum);
        }
        n += 1;
    }
}

fn guard_pole(z: Complex64, pole: Complex64) -> Result<()> {
    if (z - pole).norm() < POLE_GUARD * pole.norm().max(1.0) {
        Err(Error::PoleOfF)
    } else {
        Ok(())
    }
}

/// Sums `sum_{m>=1} term(m, q^m)` until `|q^m z|, |q^m / z| <= 1/2` and the
/// remainder bound `c (|z| + 1/|z|) |q|^{m+1} / (1 - |q|)` is below `tol`,
/// guarding every pole `q^{+-m}` passed on the way.
fn lattice_sum(z: Complex64, q: Complex64, tol: f64, c: f64, term: impl Fn(Complex64) -> Complex64) -> Result<Complex64> {
    let aq = q.norm();
    let mut sum = Complex64::new(0.0, 0.0);
    if aq == 0.0 {
        return Ok(sum);
    }
    let (az, inv_az) = (z.norm(), 1.0 / z.norm());
    let mut qm = Complex64::new(1.0, 0.0);
    let mut m = 1u64;
    loop {
        qm *= q;
        let aqm = qm.norm();
        guard_pole(z, qm)?;
        guard_pole(z, 1.0 / qm)?;
        sum += term(qm);
        let settled = aqm * az <= 0.5 && aqm * inv_az <= 0.5;
        if settled && c * (az + inv_az) * aqm * aq / (1.0 - aq) < tol {
            return Ok(sum);
        }
        m += 1;
        debug_assert!(m < 1_000_000);
    }
}

/// `f` as a function of `z = e^{it}`.
pub fn f_mero_z(z: Complex64, ctx: &FContext, tol: f64) -> Result<Complex64> {
    check_tol(tol)?;
    guard_pole(z, Complex64::new(1.0, 0.0))?;
    // |q^m z/(1-q^m z)| <= 2|q^m z| and |q^m/(z-q^m)| <= 2|q^m/z| once settled.
    let s = lattice_sum(z, ctx.q, tol, 2.0, |qm| qm * z / (1.0 - qm * z) - qm / (z - qm))?;
    Ok(0.25 * I * (z + 1.0) / (z - 1.0) - 0.5 * I * s)
}

/// Meromorphic continuation, valid at every non-lattice `theta`.
pub fn f_mero(theta: Complex64, ctx: &FContext, tol: f64) -> Result<Complex64> {
    f_mero_z((I * theta).exp(), ctx, tol)
}

/// `f'(t)` from the closed form:
/// `(z/2) [ 1/(z-1)^2 + sum_m ( q^m/(1-q^m z)^2 + q^m/(z-q^m)^2 ) ]`.
pub fn f_prime_z(z: Complex64, ctx: &FContext, tol: f64) -> Result<Complex64> {
    check_tol(tol)?;
    guard_pole(z, Complex64::new(1.0, 0.0))?;
    let half_z = 0.5 * z.norm();
    // Each summand is at most 4|q|^m (1 + 1/|z|^2) once settled.
    let s = lattice_sum(z, ctx.q, tol / half_z, 4.0, |qm| {
        qm / (1.0 - qm * z).powi(2) + qm / (z - qm).powi(2)
    })?;
    Ok(0.5 * z * (1.0 / (z - 1.0).powi(2) + s))
}

pub fn f_prime(theta: Complex64, ctx: &FContext, tol: f64) -> Result<Complex64> {
    f_prime_z((I * theta).exp(), ctx, tol)
}

/// `n` real points `2 pi (j + 1/2) / n`, away from the pole at 0.
pub fn pole_free_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| 2.0 * PI * (j as f64 + 0.5) / n as f64).collect()
}

fn fold_max(values: impl Iterator<Item = Result<f64>>) -> f64 {
    values
        .map(|v| v.unwrap_or(f64::NAN))
        .fold(0.0, |a: f64, v| if a.is_nan() || v.is_nan() { f64::NAN } else { a.max(v) })
}

/// `max |f(t + 2 pi tau) - f(t) + i/2|` over real `t`, via `z -> q z`.
///
/// The `2 pi` shift leaves `z` unchanged, so ordinary periodicity holds by
/// construction and is reported as exact.
pub fn quasi_period_check(ctx: &FContext, theta_grid: &[f64], tol: f64) -> VerificationReport {
    let started = Instant::now();
    let worst = fold_max(theta_grid.iter().map(|&t| {
        let z = (I * t).exp();
        let shifted = f_mero_z(z * ctx.q, ctx, EVAL_TOL)?;
        Ok((shifted - f_mero_z(z, ctx, EVAL_TOL)? + 0.5 * I).norm())
    }));
    VerificationReport::numeric("quasi-period", worst, tol, started)
        .with_param("q", format_q(ctx.q))
        .with_param("grid_points", theta_grid.len())
        .with_param("two_pi_shift", "exact")
}

/// Double periodicity of `f'`: max of `|f'(t + 2 pi) - f'(t)|` and
/// `|f'(t + 2 pi tau) - f'(t)|` over real `t`.
pub fn fprime_elliptic_check(ctx: &FContext, theta_grid: &[f64], tol: f64) -> VerificationReport {
    let started = Instant::now();
    let worst = fold_max(theta_grid.iter().map(|&t| {
        let z = (I * t).exp();
        let base = f_prime_z(z, ctx, EVAL_TOL)?;
        let real_shift = f_prime(Complex64::new(t + 2.0 * PI, 0.0), ctx, EVAL_TOL)?;
        let tau_shift = f_prime_z(z * ctx.q, ctx, EVAL_TOL)?;
        Ok((real_shift - base).norm().max((tau_shift - base).norm()))
    }));
    VerificationReport::numeric("fprime-elliptic", worst, tol, started)
        .with_param("q", format_q(ctx.q))
        .with_param("grid_points", theta_grid.len())
}

/// Both sides of the squared identity at one point inside the strip.
pub fn eq1_sides(ctx: &FContext, theta: Complex64, tol: f64) -> Result<(Complex64, Complex64)> {
    let lhs = f_strip(theta, ctx, tol)?.powi(2);
    let q = ctx.q;
    let aq = q.norm();
    let c = 0.25 * cot_half(theta);
    let mut rhs = c * c;
    if aq > 0.0 {
        let rho = aq * theta.im.abs().exp();
        // |term_n| <= rho^n / (1-|q|)^2 + n rho^n / (1-|q|)
        let (a0, a1) = (1.0 / (1.0 - aq).powi(2), 1.0 / (1.0 - aq));
        let mut qn = Complex64::new(1.0, 0.0);
        let mut n = 1u64;
        loop {
            qn *= q;
            let cos_n = (theta * n as f64).cos();
            let one_minus = 1.0 - qn;
            rhs += qn / (one_minus * one_minus) * cos_n + 0.5 * n as f64 * qn / one_minus * (1.0 - cos_n);
            if poly_geometric_tail(rho, n as f64, a0, a1) < tol {
                break;
            }
            n += 1;
        }
    }
    Ok((lhs, rhs))
}

pub fn eq1_numeric_check(ctx: &FContext, theta: Complex64, tol: f64) -> VerificationReport {
    let started = Instant::now();
    let worst = fold_max(std::iter::once(eq1_sides(ctx, theta, EVAL_TOL).map(|(l, r)| (l - r).norm())));
    VerificationReport::numeric("eq1-numeric", worst, tol, started)
        .with_param("q", format_q(ctx.q))
        .with_param("theta", crate::format::fmt_complex(theta))
}

/// Max `|f_strip - f_mero|` over the given in-strip points.
pub fn overlap_check(ctx: &FContext, points: &[Complex64], tol: f64) -> VerificationReport {
    let started = Instant::now();
    let worst = fold_max(points.iter().map(|&t| Ok((f_strip(t, ctx, EVAL_TOL)? - f_mero(t, ctx, EVAL_TOL)?).norm())));
    VerificationReport::numeric("eq1-numeric", worst, tol, started)
        .with_param("check", "strip/continuation overlap")
        .with_param("q", format_q(ctx.q))
        .with_param("points", points.len())
}

/// Deterministic scattered points inside `|Im t| < frac * halfwidth`,
/// `Re t` in `(0.2, 2 pi - 0.2)`.
pub fn strip_points(ctx: &FContext, n: usize, frac: f64) -> Vec<Complex64> {
    let w = ctx.strip_halfwidth().min(10.0) * frac;
    (0..n)
        .map(|j| {
            let u = (0.5 + j as f64 * 0.618_033_988_749_895) % 1.0;
            let v = (0.5 + j as f64 * 0.754_877_666_246_693) % 1.0;
            Complex64::new(0.2 + u * (2.0 * PI - 0.4), (2.0 * v - 1.0) * w)
        })
        .collect()
}

fn format_q(q: Complex64) -> serde_json::Value {
    if q.im == 0.0 {
        serde_json::json!(q.re)
    } else {
        serde_json::json!(crate::format::fmt_complex(q))
    }
}
