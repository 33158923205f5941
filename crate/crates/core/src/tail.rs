//! Remainder bounds for series whose terms are dominated by
//! `(a0 + a1*j) * rho^j`.

/// `sum_{j > n} (a0 + a1 j) rho^j`, closed form. Infinite if `rho >= 1`.
pub(crate) fn poly_geometric_tail(rho: f64, n: f64, a0: f64, a1: f64) -> f64 {
    if rho >= 1.0 {
        return f64::INFINITY;
    }
    let lead = rho.powf(n + 1.0);
    lead * ((a0 + a1 * (n + 1.0)) / (1.0 - rho) + a1 * rho / ((1.0 - rho) * (1.0 - rho)))
}
