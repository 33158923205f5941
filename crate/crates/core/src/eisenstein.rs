//! Divisor sums, Lambert series and the Eisenstein series `P`, `Q`, `R`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qseries::{rat, QSeries};

/// `sigma_s(n)`: the sum of `d^s` over the divisors of `n`, by direct
/// enumeration of divisor pairs up to `sqrt(n)`.
pub fn divisor_power_sum(s: u32, n: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::UndefinedDivisorSum);
    }
    let mut total = BigUint::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            total += BigUint::from(d).pow(s);
            let e = n / d;
            if e != d {
                total += BigUint::from(e).pow(s);
            }
        }
        d += 1;
    }
    Ok(total)
}

/// `sum_{n>=1} n^s q^n / (1 - q^n)` to order `order`.
///
/// Expanded with a divisor sieve: `n^s` lands on every multiple of `n`.
pub fn lambert_series(s: u32, order: usize) -> QSeries {
    let mut acc = vec![BigUint::zero(); order + 1];
    for n in 1..=order {
        let p = BigUint::from(n).pow(s);
        for m in (n..=order).step_by(n) {
            acc[m] += &p;
        }
    }
    QSeries::new(
        acc.into_iter()
            .map(|c| BigRational::from_integer(BigInt::from(c)))
            .collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Eisenstein {
    P,
    Q,
    R,
}

impl Eisenstein {
    /// `(sign * weight, s)` in `1 + sign*weight * sum sigma_s(n) q^n`.
    fn normalization(self) -> (i64, u32) {
        match self {
            Eisenstein::P => (-24, 1),
            Eisenstein::Q => (240, 3),
            Eisenstein::R => (-504, 5),
        }
    }
}

pub fn eisenstein_series(kind: Eisenstein, order: usize) -> QSeries {
    let (c, s) = kind.normalization();
    &lambert_series(s, order).scale(&rat(c)) + &QSeries::one(order)
}

/// Residuals of the differential system
///
/// ```text
/// q P' = (P^2 - Q) / 12,   q Q' = (P Q - R) / 3,   q R' = (P R - Q^2) / 2
/// ```
///
/// each truncated to `order`. All three are the zero series.
pub fn ode_residuals(order: usize) -> [QSeries; 3] {
    let p = eisenstein_series(Eisenstein::P, order);
    let q = eisenstein_series(Eisenstein::Q, order);
    let r = eisenstein_series(Eisenstein::R, order);
    let pp = &p * &p;
    let pq = &p * &q;
    let pr = &p * &r;
    let qq = &q * &q;
    let third = BigRational::new(BigInt::one(), BigInt::from(3));
    let twelfth = BigRational::new(BigInt::one(), BigInt::from(12));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    [
        &p.qderiv() - &(&pp - &q).scale(&twelfth),
        &q.qderiv() - &(&pq - &r).scale(&third),
        &r.qderiv() - &(&pr - &qq).scale(&half),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &QSeries) -> Vec<i64> {
        s.coeffs().iter().map(|c| c.to_integer().try_into().unwrap()).collect()
    }

    #[test]
    fn divisor_sums() {
        assert_eq!(divisor_power_sum(1, 1).unwrap(), BigUint::from(1u32));
        assert_eq!(divisor_power_sum(1, 6).unwrap(), BigUint::from(12u32));
        assert_eq!(divisor_power_sum(3, 2).unwrap(), BigUint::from(9u32));
        assert_eq!(divisor_power_sum(5, 2).unwrap(), BigUint::from(33u32));
        assert_eq!(divisor_power_sum(0, 36).unwrap(), BigUint::from(9u32));
        assert_eq!(divisor_power_sum(2, 0), Err(Error::UndefinedDivisorSum));
    }

    #[test]
    fn lambert_examples() {
        assert_eq!(ints(&lambert_series(1, 3)), [0, 1, 3, 4]);
        assert_eq!(ints(&lambert_series(3, 2)), [0, 1, 9]);
        assert_eq!(ints(&lambert_series(0, 2)), [0, 1, 2]);
    }

    #[test]
    fn lambert_matches_divisor_oracle() {
        for s in 0..=5 {
            let l = lambert_series(s, 300);
            for k in 1..=300u64 {
                let expect = BigRational::from_integer(divisor_power_sum(s, k).unwrap().into());
                assert_eq!(l.coeff(k as usize).unwrap(), &expect, "s={s} k={k}");
            }
        }
    }

    #[test]
    fn eisenstein_examples() {
        assert_eq!(ints(&eisenstein_series(Eisenstein::P, 3)), [1, -24, -72, -96]);
        assert_eq!(ints(&eisenstein_series(Eisenstein::Q, 2)), [1, 240, 2160]);
        assert_eq!(ints(&eisenstein_series(Eisenstein::R, 2)), [1, -504, -16632]);
    }

    #[test]
    fn residuals_vanish() {
        for n in [0, 1, 10, 200] {
            for r in ode_residuals(n) {
                assert_eq!(r.order(), n);
                assert!(r.is_zero(), "order {n}: {r}");
            }
        }
    }

    #[test]
    fn perturbed_system_is_detected() {
        // Wrong normalization of Q must leave a nonzero residual.
        let p = eisenstein_series(Eisenstein::P, 5);
        let q = &lambert_series(3, 5).scale(&rat(241)) + &QSeries::one(5);
        let res = &p.qderiv() - &(&(&p * &p) - &q).scale(&BigRational::new(1.into(), 12.into()));
        assert!(!res.is_zero());
    }
}
