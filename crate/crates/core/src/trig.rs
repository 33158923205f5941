//! Exact expansion of the squared cotangent-Lambert identity
//!
//! ```text
//! (1/4 cot(t/2) + sum a_n sin nt)^2
//!     = (1/4 cot(t/2))^2 + sum b_n cos nt + 1/2 sum c_n (1 - cos nt)
//! a_n = q^n/(1-q^n),  b_n = q^n/(1-q^n)^2,  c_n = n q^n/(1-q^n)
//! ```
//!
//! in the basis `{cot^2(t/2)} ∪ {cos kt}` with q-series coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::qseries::{rat, ratio, QSeries};

/// `A(q) cot^2(t/2) + sum_{k=0}^{K} B_k(q) cos kt`, all members sharing one
/// truncation order.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigQSeries {
    pub cot2: QSeries,
    pub cos_coeffs: Vec<QSeries>,
}

impl TrigQSeries {
    pub fn zero(order: usize, harmonic_bound: usize) -> Self {
        Self {
            cot2: QSeries::zero(order),
            cos_coeffs: vec![QSeries::zero(order); harmonic_bound + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.cot2.order()
    }

    pub fn harmonic_bound(&self) -> usize {
        self.cos_coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.cot2.is_zero() && self.cos_coeffs.iter().all(QSeries::is_zero)
    }

    /// Largest absolute coefficient over every component.
    pub fn max_abs_coeff(&self) -> f64 {
        self.cos_coeffs
            .iter()
            .map(QSeries::max_abs_coeff)
            .fold(self.cot2.max_abs_coeff(), f64::max)
    }

    /// Componentwise difference; the shorter harmonic range is zero-padded.
    pub fn sub(&self, other: &TrigQSeries) -> TrigQSeries {
        let n = self.order().min(other.order());
        let k = self.harmonic_bound().max(other.harmonic_bound());
        let zero = QSeries::zero(n);
        let at = |t: &'_ TrigQSeries, i: usize| t.cos_coeffs.get(i).cloned().unwrap_or_else(|| zero.clone());
        TrigQSeries {
            cot2: &self.cot2 - &other.cot2,
            cos_coeffs: (0..=k).map(|i| &at(self, i) - &at(other, i)).collect(),
        }
    }

    /// Substitutes numeric `q` and real `theta`.
    pub fn evaluate(&self, q: f64, theta: f64) -> f64 {
        let cot = 1.0 / (theta / 2.0).tan();
        self.cos_coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.evaluate(q) * (k as f64 * theta).cos())
            .fold(self.cot2.evaluate(q) * cot * cot, |acc, v| acc + v)
    }

    fn add_to(&mut self, k: usize, s: &QSeries) {
        self.cos_coeffs[k] = &self.cos_coeffs[k] + s;
    }
}

/// Cosine coefficients of `cot(t/2) sin nt = 1 + cos nt + 2 sum_{k=1}^{n-1} cos kt`.
///
/// Index `k` of the result is the coefficient of `cos kt`, `k = 0..=n`.
pub fn cot_sin_expand(n: usize) -> Result<Vec<BigRational>> {
    if n == 0 {
        return Err(Error::UndefinedHarmonic);
    }
    let mut c = vec![rat(2); n + 1];
    c[0] = rat(1);
    c[n] = rat(1);
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lhs,
    Rhs,
}

/// `q^n/(1-q^n) = sum_{m>=1} q^{nm}` to `order`.
fn lambert_term(n: usize, order: usize) -> QSeries {
    let mut c = vec![BigRational::zero(); order + 1];
    for p in (n..=order).step_by(n) {
        c[p] = rat(1);
    }
    QSeries::new(c)
}

/// `q^n/(1-q^n)^2 = sum_{m>=1} m q^{nm}` to `order`.
fn lambert_square_term(n: usize, order: usize) -> QSeries {
    let mut c = vec![BigRational::zero(); order + 1];
    for (m, p) in (n..=order).step_by(n).enumerate() {
        c[p] = BigRational::from_integer(BigInt::from(m + 1));
    }
    QSeries::new(c)
}

/// Expands one side to q-order `order` with harmonics up to `2 * order`.
pub fn expand_eq1_side(side: Side, order: usize) -> Result<TrigQSeries> {
    if order == 0 {
        return Err(Error::OrderTooSmall { min: 1, got: 0 });
    }
    let n_max = order;
    let mut out = TrigQSeries::zero(order, 2 * n_max);
    out.cot2 = QSeries::constant(ratio(1, 16), order);
    let half = ratio(1, 2);
    match side {
        Side::Lhs => {
            let a: Vec<QSeries> = (1..=n_max).map(|n| lambert_term(n, order)).collect();
            // Cross term 2 * (1/4) cot(t/2) * sum a_n sin nt.
            for n in 1..=n_max {
                let an = a[n - 1].scale(&half);
                for (k, c) in cot_sin_expand(n)?.iter().enumerate() {
                    out.add_to(k, &an.scale(c));
                }
            }
            // sum_{m,n} a_m a_n sin mt sin nt, with sin m sin n = (cos(m-n) - cos(m+n))/2.
            // a_m a_n = O(q^{m+n}), so only m + n <= order survives.
            for m in 1..=n_max {
                for n in m..=n_max {
                    if m + n > order {
                        break;
                    }
                    let prod = &a[m - 1] * &a[n - 1];
                    // Off-diagonal pairs appear twice in the double sum.
                    let w = if m == n { half.clone() } else { rat(1) };
                    let term = prod.scale(&w);
                    out.add_to(n - m, &term);
                    out.add_to(m + n, &-&term);
                }
            }
        }
        Side::Rhs => {
            for n in 1..=n_max {
                let a = lambert_term(n, order);
                let b = lambert_square_term(n, order);
                let half_c = a.scale(&ratio(n as i64, 2));
                out.add_to(0, &half_c);
                out.add_to(n, &(&b - &half_c));
            }
        }
    }
    Ok(out)
}

/// `LHS - RHS`, componentwise. Every component is zero through `order`.
pub fn eq1_residual(order: usize) -> Result<TrigQSeries> {
    let (lhs, rhs) = rayon::join(
        || expand_eq1_side(Side::Lhs, order),
        || expand_eq1_side(Side::Rhs, order),
    );
    Ok(lhs?.sub(&rhs?))
}
