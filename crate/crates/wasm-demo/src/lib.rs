//! Browser bindings for three interactive operations: exact q-series,
//! nome/modulus inversion, and the Fourier-series elliptic functions.
//!
//! The `*_impl` functions hold the logic and are tested natively; the
//! exported wrappers only convert errors into `JsError`.

use elliptic_core::eisenstein::{eisenstein_series, Eisenstein};
use elliptic_core::hyper::{hyp2f1_taylor, HypParams};
use elliptic_core::inversion::q_of_x;
use elliptic_core::jacobi::{jacobi_eval, JacobiContext, JacobiFn};
use elliptic_core::theta::{theta_series, x_num, x_series, ThetaSeriesKind};
use elliptic_core::{Level, QSeries};
use num_complex::Complex64;
use wasm_bindgen::prelude::*;

const TOL: f64 = 1e-13;
const MAX_ORDER: usize = 400;
const MAX_POINTS: usize = 4000;

fn level(n: u8) -> Result<Level, String> {
    Level::from_number(n).ok_or_else(|| format!("level must be 3 or 4, got {n}"))
}

pub fn series_impl(name: &str, order: usize) -> Result<String, String> {
    if order > MAX_ORDER {
        return Err(format!("order is capped at {MAX_ORDER} in the browser"));
    }
    let s: QSeries = match name {
        "P" => eisenstein_series(Eisenstein::P, order),
        "Q" => eisenstein_series(Eisenstein::Q, order),
        "R" => eisenstein_series(Eisenstein::R, order),
        "theta3" => theta_series(ThetaSeriesKind::Theta3, order),
        "cubic_a" => theta_series(ThetaSeriesKind::CubicA, order),
        "x4" => x_series(Level::Four, order).map_err(|e| e.to_string())?,
        "x3" => x_series(Level::Three, order).map_err(|e| e.to_string())?,
        "2f1_half" => QSeries::new(hyp2f1_taylor(&HypParams::level4(), order).map_err(|e| e.to_string())?),
        "2f1_third" => QSeries::new(hyp2f1_taylor(&HypParams::level3(), order).map_err(|e| e.to_string())?),
        other => return Err(format!("unknown series '{other}'")),
    };
    Ok(s.to_text())
}

/// `x(q)` at `n` evenly spaced nomes strictly inside `(0, q_max]`.
pub fn modulus_curve_impl(level_n: u8, q_max: f64, n: usize) -> Result<Vec<f64>, String> {
    let lv = level(level_n)?;
    if !(q_max > 0.0 && q_max < 1.0) || !(2..=MAX_POINTS).contains(&n) {
        return Err("need 0 < q_max < 1 and 2 <= n <= 4000".into());
    }
    (1..=n)
        .map(|i| x_num(lv, q_max * i as f64 / n as f64, TOL).map_err(|e| e.to_string()))
        .collect()
}

/// `[q, x(q)]` for the nome belonging to modulus `x`, so the caller can
/// show the roundtrip.
pub fn invert_impl(level_n: u8, x: f64) -> Result<Vec<f64>, String> {
    let lv = level(level_n)?;
    let q = q_of_x(lv, x, TOL).map_err(|e| e.to_string())?;
    let back = x_num(lv, q, TOL).map_err(|e| e.to_string())?;
    Ok(vec![q, back])
}

/// `S, C, C1` interleaved at `n` points of `[0, 4 pi)`.
pub fn jacobi_curves_impl(y: f64, n: usize) -> Result<Vec<f64>, String> {
    let ctx = JacobiContext::new(y).map_err(|e| e.to_string())?;
    if n == 0 || n > MAX_POINTS {
        return Err("need 1 <= n <= 4000".into());
    }
    let mut out = Vec::with_capacity(3 * n);
    for j in 0..n {
        let t = Complex64::new(4.0 * std::f64::consts::PI * j as f64 / n as f64, 0.0);
        for f in [JacobiFn::S, JacobiFn::C, JacobiFn::C1] {
            out.push(jacobi_eval(f, t, &ctx, TOL).map_err(|e| e.to_string())?.re);
        }
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn series(name: &str, order: usize) -> Result<String, JsError> {
    series_impl(name, order).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn modulus_curve(level: u8, q_max: f64, n: usize) -> Result<Vec<f64>, JsError> {
    modulus_curve_impl(level, q_max, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn invert(level: u8, x: f64) -> Result<Vec<f64>, JsError> {
    invert_impl(level, x).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn jacobi_curves(y: f64, n: usize) -> Result<Vec<f64>, JsError> {
    jacobi_curves_impl(y, n).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_text() {
        assert_eq!(series_impl("P", 2).unwrap(), "0\t1/1\n1\t-24/1\n2\t-72/1\n");
        assert!(series_impl("x4", 0).is_err());
        assert!(series_impl("E2", 3).is_err());
        assert!(series_impl("P", MAX_ORDER + 1).is_err());
    }

    #[test]
    fn modulus_curve_increases() {
        let xs = modulus_curve_impl(4, 0.5, 50).unwrap();
        assert_eq!(xs.len(), 50);
        assert!(xs.windows(2).all(|w| w[1] > w[0]));
        assert!(modulus_curve_impl(5, 0.5, 50).is_err());
        assert!(modulus_curve_impl(3, 1.0, 50).is_err());
    }

    #[test]
    fn invert_roundtrips() {
        let v = invert_impl(4, 0.5).unwrap();
        assert!((v[0] - (-std::f64::consts::PI).exp()).abs() < 1e-12);
        assert!((v[1] - 0.5).abs() < 1e-12);
        assert!(invert_impl(3, 1.5).is_err());
    }

    #[test]
    fn jacobi_curves_layout() {
        let v = jacobi_curves_impl(1.0, 8).unwrap();
        assert_eq!(v.len(), 24);
        assert_eq!(v[0], 0.0);
        assert!(jacobi_curves_impl(-1.0, 8).is_err());
    }
}
