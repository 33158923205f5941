//! The Fourier-series elliptic functions
//!
//! ```text
//! S(t)  = sum_{n>=0} sin((n+1/2) t) / sinh((n+1/2) y)
//! C(t)  = sum_{n>=0} cos((n+1/2) t) / cosh((n+1/2) y)
//! C1(t) = 1/2 + sum_{n>=1} cos(n t) / cosh(n y)
//! ```
//!
//! with `dS/dt = C C1`, `dC/dt = -S C1`, `dC1/dt = -S C`, and the
//! Pythagorean-type relations `C^2 + alpha S^2 = beta`, `C1^2 + gamma S^2 = delta`.

use std::time::Instant;

use num_complex::Complex64;

use crate::error::{check_tol, Error, Result};
use crate::inversion::grid_summary;
use crate::report::VerificationReport;
use crate::tail::poly_geometric_tail;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiContext {
    y: f64,
}

impl JacobiContext {
    pub fn new(y: f64) -> Result<Self> {
        if y > 0.0 && y.is_finite() {
            Ok(Self { y })
        } else {
            Err(Error::InvalidDecay(y))
        }
    }

    /// Context with `y = -ln q`.
    pub fn from_nome(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::NomeOutOfRange(q));
        }
        Self::new(-q.ln())
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn q(&self) -> f64 {
        (-self.y).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobiFn {
    S,
    C,
    C1,
    DS,
    DC,
    DC1,
}

/// `1 / sinh(x)` without overflow for large `x`.
fn csch(x: f64) -> f64 {
    if x > 20.0 {
        let e = (-x).exp();
        2.0 * e / (1.0 - e * e)
    } else {
        1.0 / x.sinh()
    }
}

fn sech(x: f64) -> f64 {
    if x > 20.0 {
        let e = (-x).exp();
        2.0 * e / (1.0 + e * e)
    } else {
        1.0 / x.cosh()
    }
}

/// Evaluates one of the six series at complex `theta` with `|Im theta| < y`.
///
/// With `rho = exp(|Im theta| - y)`, the term at frequency `h` is bounded by
/// `K h^p rho^h` (`p = 1` for derivatives), and summation stops once the
/// closed-form remainder is below `tol`.
pub fn jacobi_eval(f: JacobiFn, theta: Complex64, ctx: &JacobiContext, tol: f64) -> Result<Complex64> {
    check_tol(tol)?;
    let y = ctx.y;
    let im = theta.im.abs();
    if im >= y {
        return Err(Error::OutsideStrip { im, bound: y });
    }
    let rho = (im - y).exp();
    let half_integer = matches!(f, JacobiFn::S | JacobiFn::C | JacobiFn::DS | JacobiFn::DC);
    let derivative = matches!(f, JacobiFn::DS | JacobiFn::DC | JacobiFn::DC1);
    // |1/sinh(hy)| <= 2 e^{-hy} / (1 - e^{-y}) for h >= 1/2; |1/cosh| <= 2 e^{-hy}.
    let k = if matches!(f, JacobiFn::S | JacobiFn::DS) { 2.0 / (1.0 - (-y).exp()) } else { 2.0 };
    let mut sum = match f {
        JacobiFn::C1 => Complex64::new(0.5, 0.0),
        _ => Complex64::new(0.0, 0.0),
    };
    let mut n = if half_integer { 0u64 } else { 1 };
    loop {
        let h = if half_integer { n as f64 + 0.5 } else { n as f64 };
        let arg = theta * h;
        let term = match f {
            JacobiFn::S => arg.sin() * csch(h * y),
            JacobiFn::C => arg.cos() * sech(h * y),
            JacobiFn::C1 => arg.cos() * sech(h * y),
            JacobiFn::DS => arg.cos() * (h * csch(h * y)),
            JacobiFn::DC => -arg.sin() * (h * sech(h * y)),
            JacobiFn::DC1 => -arg.sin() * (h * sech(h * y)),
        };
        sum += term;
        // Remainder over frequencies h + 1, h + 2, ...
        let tail = if derivative {
            k * poly_geometric_tail(rho, h, 0.0, 1.0)
        } else {
            k * poly_geometric_tail(rho, h, 1.0, 0.0)
        };
        if tail < tol {
            return Ok(sum);
        }
        n += 1;
    }
}

fn eval_real(f: JacobiFn, theta: f64, ctx: &JacobiContext, tol: f64) -> Result<f64> {
    jacobi_eval(f, Complex64::new(theta, 0.0), ctx, tol).map(|z| z.re)
}

/// Summation tolerance used inside the checks.
const EVAL_TOL: f64 = 1e-15;

/// Max over the grid and the three differentiation formulas of
/// `|termwise derivative - product|`.
pub fn derivative_identity_check(ctx: &JacobiContext, theta_grid: &[Complex64], tol: f64) -> VerificationReport {
    let started = Instant::now();
    let residual = |t: Complex64| -> Result<f64> {
        let e = |f| jacobi_eval(f, t, ctx, EVAL_TOL);
        let (s, c, c1) = (e(JacobiFn::S)?, e(JacobiFn::C)?, e(JacobiFn::C1)?);
        let (ds, dc, dc1) = (e(JacobiFn::DS)?, e(JacobiFn::DC)?, e(JacobiFn::DC1)?);
        Ok((ds - c * c1).norm().max((dc + s * c1).norm()).max((dc1 + s * c).norm()))
    };
    let worst = theta_grid
        .iter()
        .map(|&t| residual(t).unwrap_or(f64::NAN))
        .fold(0.0, |a: f64, v| if a.is_nan() || v.is_nan() { f64::NAN } else { a.max(v) });
    VerificationReport::numeric("jacobian-deriv", worst, tol, started)
        .with_param("y", ctx.y)
        .with_param("grid_points", theta_grid.len())
}

/// Constants with `C^2 + alpha S^2 = beta` and `C1^2 + gamma S^2 = delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PythagoreanFit {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl PythagoreanFit {
    pub fn max_abs_diff(&self, other: &PythagoreanFit) -> f64 {
        [
            self.alpha - other.alpha,
            self.beta - other.beta,
            self.gamma - other.gamma,
            self.delta - other.delta,
        ]
        .iter()
        .fold(0.0, |m, d| m.max(d.abs()))
    }
}

/// Solves for the four constants from two real fit points.
pub fn fit_pythagorean(ctx: &JacobiContext, fit_thetas: [f64; 2]) -> Result<PythagoreanFit> {
    let values = |t: f64| -> Result<(f64, f64, f64)> {
        Ok((
            eval_real(JacobiFn::S, t, ctx, EVAL_TOL)?,
            eval_real(JacobiFn::C, t, ctx, EVAL_TOL)?,
            eval_real(JacobiFn::C1, t, ctx, EVAL_TOL)?,
        ))
    };
    let (s1, c1, d1) = values(fit_thetas[0])?;
    let (s2, c2, d2) = values(fit_thetas[1])?;
    let (s1sq, s2sq) = (s1 * s1, s2 * s2);
    let ds = s1sq - s2sq;
    let scale = s1sq.abs().max(s2sq.abs());
    if scale == 0.0 || ds.abs() <= 1e-12 * scale {
        return Err(Error::DegenerateFit);
    }
    // x^2 + k s^2 = const at both points  =>  k = (x2^2 - x1^2) / (s1^2 - s2^2)
    let alpha = (c2 * c2 - c1 * c1) / ds;
    let gamma = (d2 * d2 - d1 * d1) / ds;
    Ok(PythagoreanFit {
        alpha,
        beta: c1 * c1 + alpha * s1sq,
        gamma,
        delta: d1 * d1 + gamma * s1sq,
    })
}

/// Fits the constants, then reports the largest residual of either
/// relation across `check_grid`.
pub fn pythagorean_probe(ctx: &JacobiContext, fit_thetas: [f64; 2], check_grid: &[f64], tol: f64) -> Result<VerificationReport> {
    let started = Instant::now();
    let fit = fit_pythagorean(ctx, fit_thetas)?;
    let mut worst = 0.0f64;
    for &t in check_grid {
        let s = eval_real(JacobiFn::S, t, ctx, EVAL_TOL)?;
        let c = eval_real(JacobiFn::C, t, ctx, EVAL_TOL)?;
        let c1 = eval_real(JacobiFn::C1, t, ctx, EVAL_TOL)?;
        let r1 = (c * c + fit.alpha * s * s - fit.beta).abs();
        let r2 = (c1 * c1 + fit.gamma * s * s - fit.delta).abs();
        worst = worst.max(r1).max(r2);
    }
    Ok(VerificationReport::numeric("pythagorean", worst, tol, started)
        .with_param("y", ctx.y)
        .with_param("fit_thetas", fit_thetas.to_vec())
        .with_param("grid", grid_summary(check_grid))
        .with_param("alpha", fit.alpha)
        .with_param("beta", fit.beta)
        .with_param("gamma", fit.gamma)
        .with_param("delta", fit.delta))
}

/// Fits at two point pairs and reports the largest change in any constant.
pub fn pythagorean_refit_check(ctx: &JacobiContext, first: [f64; 2], second: [f64; 2], tol: f64) -> Result<VerificationReport> {
    let started = Instant::now();
    let a = fit_pythagorean(ctx, first)?;
    let b = fit_pythagorean(ctx, second)?;
    Ok(VerificationReport::numeric("pythagorean", a.max_abs_diff(&b), tol, started)
        .with_param("check", "refit constant drift")
        .with_param("y", ctx.y)
        .with_param("first", first.to_vec())
        .with_param("second", second.to_vec()))
}

/// `n` real points `4 pi j / n`, `j = 0..n`, covering one full period.
pub fn period_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| 4.0 * std::f64::consts::PI * j as f64 / n as f64).collect()
}
