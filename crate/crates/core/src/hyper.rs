//! Gauss hypergeometric `2F1(a, b; c; x)`: direct summation on `[0, 1)` and
//! exact Taylor coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{check_tol, Error, Result};
use crate::qseries::{rat, ratio, rational_to_f64};

pub const DEFAULT_TOL: f64 = 1e-13;
pub const DEFAULT_MAX_TERMS: usize = 200_000;

/// Parameters `(a, b; c)`. `c` must not be a nonpositive integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HypParams {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
}

impl HypParams {
    pub fn new(a: BigRational, b: BigRational, c: BigRational) -> Self {
        Self { a, b, c }
    }

    /// `(1/2, 1/2; 1)`
    pub fn level4() -> Self {
        Self::new(ratio(1, 2), ratio(1, 2), rat(1))
    }

    /// `(1/3, 2/3; 1)`
    pub fn level3() -> Self {
        Self::new(ratio(1, 3), ratio(2, 3), rat(1))
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.b.clone(), self.a.clone(), self.c.clone())
    }
}

/// Sums the hypergeometric series at `0 <= x < 1`.
///
/// Stops when both the current term and the geometric remainder estimate
/// `|t_k| r / (1 - r)` fall below `tol`, where `r` is the larger of the
/// current term ratio and `x` (the limiting ratio).
pub fn hyp2f1_num(p: &HypParams, x: f64, tol: f64, max_terms: usize) -> Result<f64> {
    check_tol(tol)?;
    if !(0.0..1.0).contains(&x) {
        return Err(Error::OutsideDisc(x));
    }
    let (a, b, c) = (rational_to_f64(&p.a), rational_to_f64(&p.b), rational_to_f64(&p.c));
    let mut sum = 1.0;
    let mut term = 1.0;
    if x == 0.0 {
        return Ok(sum);
    }
    for k in 0..max_terms {
        let kf = k as f64;
        let den = (c + kf) * (kf + 1.0);
        if den == 0.0 {
            return Err(Error::PoleInRecurrence(k));
        }
        let ratio = (a + kf) * (b + kf) / den * x;
        term *= ratio;
        sum += term;
        let r = ratio.abs().max(x);
        let tail = if r < 1.0 { term.abs() * r / (1.0 - r) } else { f64::INFINITY };
        if term.abs() < tol && tail < tol {
            return Ok(sum);
        }
    }
    Err(Error::SlowConvergence { partial: sum, terms: max_terms })
}

/// Exact coefficients `(a)_k (b)_k / ((c)_k k!)` for `k = 0..=order`.
pub fn hyp2f1_taylor(p: &HypParams, order: usize) -> Result<Vec<BigRational>> {
    let mut out = Vec::with_capacity(order + 1);
    let mut coeff = BigRational::one();
    out.push(coeff.clone());
    for k in 0..order {
        let kk = BigRational::from_integer(BigInt::from(k));
        let den = (&p.c + &kk) * (&kk + BigRational::one());
        if den.is_zero() {
            return Err(Error::PoleInRecurrence(k));
        }
        coeff = coeff * (&p.a + &kk) * (&p.b + &kk) / den;
        out.push(coeff.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    /// Pochhammer-ratio oracle in floating point, summed naively.
    fn naive(a: f64, b: f64, c: f64, x: f64, n: usize) -> f64 {
        let (mut t, mut s) = (1.0, 1.0);
        for k in 0..n {
            let k = k as f64;
            t *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
            s += t;
        }
        s
    }

    #[test]
    fn taylor_examples() {
        assert_eq!(hyp2f1_taylor(&HypParams::level4(), 2).unwrap(), vec![rat(1), ratio(1, 4), ratio(9, 64)]);
        assert_eq!(hyp2f1_taylor(&HypParams::level3(), 1).unwrap(), vec![rat(1), ratio(2, 9)]);
        assert_eq!(hyp2f1_taylor(&HypParams::level3(), 0).unwrap(), vec![rat(1)]);
        assert_eq!(hyp2f1_taylor(&HypParams::level4(), 3).unwrap()[3], ratio(25, 256));
    }

    #[test]
    fn taylor_pole() {
        let p = HypParams::new(rat(1), rat(1), rat(-2));
        assert_eq!(hyp2f1_taylor(&p, 1).unwrap().len(), 2);
        assert_eq!(hyp2f1_taylor(&p, 5), Err(Error::PoleInRecurrence(2)));
        assert!(matches!(hyp2f1_num(&p, 0.5, 1e-12, 100), Err(Error::PoleInRecurrence(2))));
    }

    #[test]
    fn num_examples() {
        for p in [HypParams::level4(), HypParams::level3()] {
            assert_eq!(hyp2f1_num(&p, 0.0, 1e-13, 10).unwrap(), 1.0);
        }
        let x = 0.01;
        let expect = 1.0 + x / 4.0 + 9.0 * x * x / 64.0 + 25.0 * x * x * x / 256.0;
        assert!((hyp2f1_num(&HypParams::level4(), x, 1e-15, 1000).unwrap() - expect).abs() < 1e-9);
        // K(k)/(pi/2) at k^2 = 1/2: 1.1803405990161...
        let k = hyp2f1_num(&HypParams::level4(), 0.5, 1e-15, 10_000).unwrap();
        assert!((k - 1.180_340_599_016_096_2).abs() < 1e-13, "{k}");
        let t = hyp2f1_num(&HypParams::level3(), 0.2, 1e-15, 10_000).unwrap();
        assert!((t - naive(1.0 / 3.0, 2.0 / 3.0, 1.0, 0.2, 200)).abs() < 1e-14);
    }

    #[test]
    fn num_errors() {
        let p = HypParams::level4();
        assert_eq!(hyp2f1_num(&p, 1.0, 1e-13, 100), Err(Error::OutsideDisc(1.0)));
        assert_eq!(hyp2f1_num(&p, -0.1, 1e-13, 100), Err(Error::OutsideDisc(-0.1)));
        match hyp2f1_num(&p, 0.999, 1e-13, 50) {
            Err(Error::SlowConvergence { partial, terms }) => {
                assert_eq!(terms, 50);
                assert!((partial - naive(0.5, 0.5, 1.0, 0.999, 50)).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        assert!(hyp2f1_num(&p, 0.995, DEFAULT_TOL, DEFAULT_MAX_TERMS).is_ok());
    }

    #[test]
    fn symmetric_in_a_b() {
        let mut seed = 12345u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..20 {
            let a = ratio((next() * 20.0) as i64 + 1, 7);
            let b = ratio((next() * 20.0) as i64 + 1, 5);
            let c = ratio((next() * 20.0) as i64 + 1, 3);
            let x = next() * 0.9;
            let p = HypParams::new(a, b, c);
            let lhs = hyp2f1_num(&p, x, 1e-16, DEFAULT_MAX_TERMS).unwrap();
            let rhs = hyp2f1_num(&p.swapped(), x, 1e-16, DEFAULT_MAX_TERMS).unwrap();
            assert!((lhs - rhs).abs() <= 1e-14 * lhs.abs().max(1.0), "{p:?} x={x}");
        }
    }

    #[test]
    fn agrees_with_exact_taylor() {
        for p in [HypParams::level4(), HypParams::level3()] {
            let coeffs = hyp2f1_taylor(&p, 60).unwrap();
            for i in 0..=30 {
                let x = 0.01 * i as f64;
                let exact = coeffs.iter().rev().fold(0.0, |acc, c| acc * x + rational_to_f64(c));
                let num = hyp2f1_num(&p, x, DEFAULT_TOL, DEFAULT_MAX_TERMS).unwrap();
                assert!((exact - num).abs() <= 1e-12, "x={x}");
            }
        }
    }

    #[test]
    fn inversion_parameter_coefficients_positive() {
        for p in [HypParams::level4(), HypParams::level3()] {
            assert!(hyp2f1_taylor(&p, 200).unwrap().iter().all(|c| c.is_positive()));
        }
    }
}
