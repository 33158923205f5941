//! Level-4 and level-3 theta sums and the moduli `x4(q)`, `x3(q)`.
//!
//! Numeric sums group lattice points by exponent and add the groups in
//! increasing order, stopping once a closed-form remainder bound is below
//! the requested tolerance. The exact path rewrites the fractional-exponent
//! numerators as `q^(1/4) * (integer series)` and `q^(1/3) * (integer series)`
//! so that the fourth and third powers are ordinary power series.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{check_tol, Error, Result};
use crate::qseries::{rat, QSeries};
use crate::tail::poly_geometric_tail;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Three,
    Four,
}

impl Level {
    pub fn number(self) -> u8 {
        match self {
            Level::Three => 3,
            Level::Four => 4,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            3 => Some(Level::Three),
            4 => Some(Level::Four),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaKind {
    /// `sum_n q^(n^2)`
    Theta3,
    /// `sum_n q^((n+1/2)^2)`
    Theta2Num,
    /// `sum_{m,n} q^(m^2+mn+n^2)`
    CubicA,
    /// `sum_{m,n} q^((m+1/3)^2+(m+1/3)(n+1/3)+(n+1/3)^2)`
    CubicCNum,
}

fn check_nome(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::NomeOutOfRange(q))
    }
}

/// Sums `sum_{n>=0} w_n q^(e(n))` where `e` is increasing and the remainder
/// after index `n` is at most `tail(n)`.
fn sum_until(q: f64, tol: f64, weight: impl Fn(u64) -> f64, exponent: impl Fn(u64) -> u64, tail: impl Fn(u64) -> f64) -> f64 {
    let mut sum = 0.0;
    let mut n = 0u64;
    loop {
        let term = q.powf(exponent(n) as f64);
        sum += weight(n) * term;
        if term.abs() < tol / 10.0 && tail(n) < tol {
            return sum;
        }
        n += 1;
    }
}

/// Counts of `m^2+mn+n^2 (+m+n if shifted) = E` for `E = 0..=emax`.
///
/// Uses `Q(u,v) = (v + u/2)^2 + 3u^2/4`, so `|u| <= sqrt(4(E+s)/3)` with
/// `s = 1/3` for the shifted form (`u = m + 1/3`).
fn quadratic_form_counts(emax: u64, shifted: bool) -> Vec<u64> {
    let mut counts = vec![0u64; emax as usize + 1];
    let e = emax as f64 + if shifted { 1.0 / 3.0 } else { 0.0 };
    let mbound = (4.0 * e / 3.0).sqrt().ceil() as i64 + 1;
    let form = |m: i64, n: i64| {
        let base = m * m + m * n + n * n;
        if shifted { base + m + n } else { base }
    };
    for m in -mbound..=mbound {
        let u = m as f64 + if shifted { 1.0 / 3.0 } else { 0.0 };
        // Boundary points can land a rounding error below zero; the exact
        // form check below decides membership.
        let rem = e - 0.75 * u * u;
        if rem < -1e-9 {
            continue;
        }
        let rem = rem.max(0.0);
        let centre = -u / 2.0 - if shifted { 1.0 / 3.0 } else { 0.0 };
        let r = rem.sqrt();
        let lo = (centre - r).floor() as i64 - 1;
        let hi = (centre + r).ceil() as i64 + 1;
        for n in lo..=hi {
            let v = form(m, n);
            if v >= 0 && v as u64 <= emax {
                counts[v as usize] += 1;
            }
        }
    }
    counts
}

/// Remainder bound for the double sums past exponent `emax`. The number of
/// lattice points with exponent at most `E` is below `12 (E + 1)` for both
/// forms, which dominates the count at each single exponent.
fn double_sum_tail(q: f64, emax: u64) -> f64 {
    poly_geometric_tail(q, emax as f64, 12.0, 12.0)
}

fn double_sum(q: f64, tol: f64, shifted: bool) -> f64 {
    let mut emax = 1u64;
    while !(double_sum_tail(q, emax) < tol && q.powf(emax as f64) < tol / 10.0) {
        emax += 1;
    }
    let counts = quadratic_form_counts(emax, shifted);
    let s: f64 = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(e, &c)| c as f64 * q.powf(e as f64))
        .sum();
    if shifted {
        q.cbrt() * s
    } else {
        s
    }
}

/// Numeric theta sum at real `0 < q < 1`, remainder certified below `tol`.
pub fn theta_num(kind: ThetaKind, q: f64, tol: f64) -> Result<f64> {
    check_nome(q)?;
    check_tol(tol)?;
    Ok(match kind {
        ThetaKind::Theta3 => sum_until(
            q,
            tol,
            |n| if n == 0 { 1.0 } else { 2.0 },
            |n| n * n,
            |n| 2.0 * q.powf(((n + 1) * (n + 1)) as f64) / (1.0 - q.powf((2 * n + 3) as f64)),
        ),
        ThetaKind::Theta2Num => {
            let c = 2.0 * q.powf(0.25);
            sum_until(
                q,
                tol,
                |_| c,
                |k| k * (k + 1),
                |k| c * q.powf(((k + 1) * (k + 2)) as f64) / (1.0 - q.powf((2 * k + 4) as f64)),
            )
        }
        ThetaKind::CubicA => double_sum(q, tol, false),
        ThetaKind::CubicCNum => double_sum(q, tol, true),
    })
}

/// `theta4 = sum_n (-1)^n q^(n^2)`, evaluated as the product
/// `prod_{n>=1} (1 - q^(2n)) (1 - q^(2n-1))^2`.
///
/// Every factor is positive, so the value keeps full relative precision even
/// where the alternating sum cancels down to nothing (`q` near 1). The log of
/// the omitted factors is below `3 q^k / (1 - q)` past exponent `k`, and
/// since `theta4 < 1` this bounds the absolute error as well.
pub fn theta4_num(q: f64, tol: f64) -> Result<f64> {
    check_nome(q)?;
    check_tol(tol)?;
    let mut prod = 1.0;
    let mut k = 1i32;
    loop {
        let t = q.powi(k);
        prod *= if k % 2 == 0 { 1.0 - t } else { (1.0 - t) * (1.0 - t) };
        if 3.0 * t * q / (1.0 - q) < tol / 4.0 {
            return Ok(prod);
        }
        k += 1;
    }
}

/// `x4 = (theta2num / theta3)^4` (taken as `1 - (theta4/theta3)^4` once that
/// complement drops below 1/2) or `x3 = (cubic_cnum / cubic_a)^3`.
pub fn x_num(level: Level, q: f64, tol: f64) -> Result<f64> {
    Ok(match level {
        Level::Four => {
            // Near q = 1 the quotient carries rounding noise of an ulp or so,
            // enough to break monotonicity; 1 - (theta4/theta3)^4 does not.
            let comp = x4_complement(q, tol)?;
            if comp < 0.5 {
                1.0 - comp
            } else {
                (theta_num(ThetaKind::Theta2Num, q, tol)? / theta_num(ThetaKind::Theta3, q, tol)?).powi(4)
            }
        }
        Level::Three => (theta_num(ThetaKind::CubicCNum, q, tol)? / theta_num(ThetaKind::CubicA, q, tol)?).powi(3),
    })
}

/// `1 - x4`, computed as `(theta4/theta3)^4` so it keeps full relative
/// precision where `x4` is within an ulp of 1.
pub fn x4_complement(q: f64, tol: f64) -> Result<f64> {
    Ok((theta4_num(q, tol)? / theta_num(ThetaKind::Theta3, q, tol)?).powi(4))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaSeriesKind {
    Theta3,
    CubicA,
}

/// Exact q-expansion: representation counts by `n^2` or `m^2+mn+n^2`.
pub fn theta_series(kind: ThetaSeriesKind, order: usize) -> QSeries {
    match kind {
        ThetaSeriesKind::Theta3 => {
            let mut c = vec![BigRational::zero(); order + 1];
            c[0] = rat(1);
            let mut n = 1;
            while n * n <= order {
                c[n * n] = rat(2);
                n += 1;
            }
            QSeries::new(c)
        }
        ThetaSeriesKind::CubicA => QSeries::from_ints(quadratic_form_counts(order as u64, false)),
    }
}

/// `sum_{k>=0} q^(k^2+k)`, so that `theta2num = 2 q^(1/4) * this`.
fn theta2_reduced(order: usize) -> QSeries {
    let mut c = vec![BigRational::zero(); order + 1];
    let mut k = 0;
    while k * k + k <= order {
        c[k * k + k] = rat(1);
        k += 1;
    }
    QSeries::new(c)
}

/// Exact `x4` or `x3` as a power series.
///
/// * level 4: `16 q * (sum q^(k^2+k))^4 / theta3^4`
/// * level 3: `q * S^3 / a^3` with `S = sum q^(m^2+mn+n^2+m+n)` (so `S(0) = 3`)
pub fn x_series(level: Level, order: usize) -> Result<QSeries> {
    if order == 0 {
        return Err(Error::OrderTooSmall { min: 1, got: 0 });
    }
    let (num, den) = match level {
        Level::Four => (
            theta2_reduced(order).pow(4).scale(&rat(16)).shift_up(1),
            theta_series(ThetaSeriesKind::Theta3, order).pow(4),
        ),
        Level::Three => (
            QSeries::from_ints(quadratic_form_counts(order as u64, true)).pow(3).shift_up(1),
            theta_series(ThetaSeriesKind::CubicA, order).pow(3),
        ),
    };
    num.div_series(&den)
}

/// Lattice points counted by brute force over a generous box; test oracle.
#[cfg(test)]
pub(crate) fn brute_counts(order: usize, shifted: bool) -> Vec<i64> {
    let r = 2 * (order as f64).sqrt().ceil() as i64 + 2;
    let mut c = vec![0i64; order + 1];
    for m in -r..=r {
        for n in -r..=r {
            let e = m * m + m * n + n * n + if shifted { m + n } else { 0 };
            if e >= 0 && (e as usize) <= order {
                c[e as usize] += 1;
            }
        }
    }
    c
}
