//! Truncated formal power series in `q` with exact rational coefficients.
//!
//! A [`QSeries`] of order `N` stands for `sum_{k=0}^{N} c_k q^k + O(q^{N+1})`.
//! Binary operations truncate to the shorter operand; nothing is ever
//! extended past the order it was computed to.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<BigRational>,
}

impl QSeries {
    /// Builds a series of order `coeffs.len() - 1`. An empty vector is
    /// treated as the zero series of order 0.
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        Self { coeffs }
    }

    pub fn from_ints<I: Into<BigInt>>(coeffs: impl IntoIterator<Item = I>) -> Self {
        Self::new(
            coeffs
                .into_iter()
                .map(|c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![BigRational::zero(); order + 1] }
    }

    pub fn constant(c: BigRational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(BigRational::one(), order)
    }

    /// `c * q^power`, truncated to `order` (zero if `power > order`).
    pub fn monomial(c: BigRational, power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigRational> {
        self.coeffs
    }

    /// Coefficient of `q^k`; `None` beyond the truncation order.
    pub fn coeff(&self, k: usize) -> Option<&BigRational> {
        self.coeffs.get(k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient, `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Drops everything above `order`. Never extends.
    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        Self { coeffs: self.coeffs[..=n].to_vec() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Multiplies by `q^shift`, keeping the order.
    pub fn shift_up(&self, shift: usize) -> Self {
        let n = self.order();
        let mut coeffs = vec![BigRational::zero(); n + 1];
        if shift <= n {
            coeffs[shift..].clone_from_slice(&self.coeffs[..=n - shift]);
        }
        Self { coeffs }
    }

    /// Exact product truncated to the common order.
    ///
    /// Both operands are brought to integer form over their denominator
    /// lcm, so the inner loop is a plain bigint convolution with one
    /// reduction per output coefficient.
    pub fn mul_series(&self, other: &QSeries) -> QSeries {
        let n = self.order().min(other.order());
        let (a, da) = scaled_integers(&self.coeffs[..=n]);
        let (b, db) = scaled_integers(&other.coeffs[..=n]);
        let b_support: Vec<usize> = (0..=n).filter(|&j| !b[j].is_zero()).collect();
        let mut acc = vec![BigInt::zero(); n + 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for &j in &b_support {
                if i + j > n {
                    break;
                }
                acc[i + j] += ai * &b[j];
            }
        }
        let den = da * db;
        QSeries {
            coeffs: acc.into_iter().map(|c| BigRational::new(c, den.clone())).collect(),
        }
    }

    /// `self^m` by repeated squaring; `m = 0` gives the unit series.
    pub fn pow(&self, mut m: u32) -> QSeries {
        let mut result = QSeries::one(self.order());
        let mut base = self.clone();
        while m > 0 {
            if m & 1 == 1 {
                result = result.mul_series(&base);
            }
            m >>= 1;
            if m > 0 {
                base = base.mul_series(&base);
            }
        }
        result
    }

    /// Multiplicative inverse to the same order.
    pub fn inv(&self) -> Result<QSeries> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::NonUnitSeries);
        }
        let n = self.order();
        let inv_a0 = a0.recip();
        let (a, da) = scaled_integers(&self.coeffs);
        let mut out: Vec<BigRational> = Vec::with_capacity(n + 1);
        out.push(inv_a0.clone());
        for k in 1..=n {
            // sum_{j=1}^{k} a_j * out_{k-j}, with a_j = a[j] / da
            let mut s = BigRational::zero();
            for j in 1..=k {
                if !a[j].is_zero() {
                    s += &out[k - j] * &a[j];
                }
            }
            out.push(-(s / &da) * &inv_a0);
        }
        Ok(QSeries { coeffs: out })
    }

    /// `self / other` to the common order.
    pub fn div_series(&self, other: &QSeries) -> Result<QSeries> {
        let n = self.order().min(other.order());
        Ok(self.truncate(n).mul_series(&other.truncate(n).inv()?))
    }

    /// The operator `q d/dq`: coefficient `k` becomes `k * c_k`.
    ///
    /// The order is unchanged. This is exact even for a truncated input,
    /// since `q d/dq` never moves a coefficient to a lower power.
    pub fn qderiv(&self) -> QSeries {
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        }
    }

    /// `sum_k outer[k] * inner^k`, truncated to `inner`'s order.
    ///
    /// `outer` may be shorter than `order + 1`, in which case it is read as
    /// a polynomial. Evaluated by Horner's rule.
    pub fn compose(outer: &[BigRational], inner: &QSeries) -> Result<QSeries> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::PositiveValuation);
        }
        let n = inner.order();
        let top = outer.len().min(n + 1);
        if top == 0 {
            return Ok(QSeries::zero(n));
        }
        let mut acc = QSeries::constant(outer[top - 1].clone(), n);
        for c in outer[..top - 1].iter().rev() {
            acc = acc.mul_series(inner);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Sums the series at a numeric `q` (the truncated polynomial).
    pub fn evaluate(&self, q: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * q + rational_to_f64(c))
    }

    /// Largest absolute coefficient as a float.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| rational_to_f64(&c.abs()))
            .fold(0.0, f64::max)
    }

    /// Text form: one `k<TAB>num/den` line per coefficient.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!("{k}\t{}/{}\n", c.numer(), c.denom()));
        }
        out
    }

    /// Coefficients as `"num/den"` strings, for JSON output.
    pub fn to_fraction_strings(&self) -> Vec<String> {
        self.coeffs
            .iter()
            .map(|c| format!("{}/{}", c.numer(), c.denom()))
            .collect()
    }
}

impl FromStr for QSeries {
    type Err = Error;

    /// Parses the text form written by [`QSeries::to_text`]. Powers must
    /// appear in ascending order starting at 0 with no gaps.
    fn from_str(s: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        for (i, line) in s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let bad = |reason: &str| Error::MalformedSeries { line: i + 1, reason: reason.into() };
            let (k, frac) = line.split_once('\t').ok_or_else(|| bad("missing tab"))?;
            let k: usize = k.trim().parse().map_err(|_| bad("bad power"))?;
            if k != coeffs.len() {
                return Err(bad("powers must ascend from 0"));
            }
            let (num, den) = frac.trim().split_once('/').ok_or_else(|| bad("missing '/'"))?;
            let num: BigInt = num.parse().map_err(|_| bad("bad numerator"))?;
            let den: BigInt = den.parse().map_err(|_| bad("bad denominator"))?;
            if !den.is_positive() {
                return Err(bad("denominator must be positive"));
            }
            coeffs.push(BigRational::new(num, den));
        }
        if coeffs.is_empty() {
            return Err(Error::MalformedSeries { line: 0, reason: "empty".into() });
        }
        Ok(QSeries { coeffs })
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ if a.is_one() => write!(f, "q^{k}")?,
                _ => write!(f, "{a}*q^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

fn binary_op(a: &QSeries, b: &QSeries, op: impl Fn(&BigRational, &BigRational) -> BigRational) -> QSeries {
    let n = a.order().min(b.order());
    QSeries {
        coeffs: (0..=n).map(|k| op(&a.coeffs[k], &b.coeffs[k])).collect(),
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        binary_op(self, rhs, |x, y| x + y)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        binary_op(self, rhs, |x, y| x - y)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        self.mul_series(rhs)
    }
}

impl Mul<&BigRational> for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &BigRational) -> QSeries {
        self.scale(rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

/// Integer numerators over the lcm of the denominators.
fn scaled_integers(coeffs: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let den = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| if c.denom().is_one() { acc } else { acc.lcm(c.denom()) });
    let ints = coeffs
        .iter()
        .map(|c| {
            if c.denom() == &den {
                c.numer().clone()
            } else {
                c.numer() * (&den / c.denom())
            }
        })
        .collect();
    (ints, den)
}

/// Nearest-float conversion that survives numerators and denominators
/// beyond the `f64` range.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64().filter(|v| v.is_finite()) {
        return v;
    }
    let bits = |x: &BigInt| x.bits() as i64;
    let shift = bits(r.numer()) - bits(r.denom());
    // Bring the quotient near 1, convert, then undo the scaling.
    let scaled = if shift >= 0 {
        BigRational::new(r.numer().clone(), r.denom() << (shift as usize))
    } else {
        BigRational::new(r.numer() << ((-shift) as usize), r.denom().clone())
    };
    let m = scaled.to_f64().unwrap_or(0.0);
    m * 2f64.powi(shift as i32)
}

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for `n / d`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(c: &[i64]) -> QSeries {
        QSeries::from_ints(c.iter().copied())
    }

    #[test]
    fn inverse_of_one_plus_q() {
        let a = s(&[1, 1, 0, 0]);
        assert_eq!(a.inv().unwrap(), s(&[1, -1, 1, -1]));
    }

    #[test]
    fn shift_keeps_order() {
        assert_eq!(s(&[1, 2, 3]).shift_up(1), s(&[0, 1, 2]));
        assert_eq!(s(&[1, 2, 3]).shift_up(2), s(&[0, 0, 1]));
        assert_eq!(s(&[1, 2, 3]).shift_up(5), s(&[0, 0, 0]));
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(&s(&[1, 1, 0, 0]) * &s(&[1, -1, 0, 0]), s(&[1, 0, -1, 0]));
    }

    #[test]
    fn binomial_power() {
        // oracle: C(4, k)
        let binom: Vec<i64> = (0..=2).map(|k| [1, 4, 6, 4, 1][k]).collect();
        assert_eq!(s(&[1, 1, 0]).pow(4), s(&binom));
        assert_eq!(s(&[3, 1, 2]).pow(0), s(&[1, 0, 0]));
    }

    #[test]
    fn non_unit_inverse_fails() {
        assert_eq!(s(&[0, 1, 2]).inv(), Err(Error::NonUnitSeries));
    }

    #[test]
    fn mismatched_orders_truncate() {
        let a = s(&[1, 2, 3, 4, 5]);
        let b = s(&[1, 1]);
        assert_eq!((&a + &b).order(), 1);
        assert_eq!(&a * &b, s(&[1, 3]));
    }

    #[test]
    fn qderiv_examples() {
        assert_eq!(s(&[1, 1, 1]).qderiv(), s(&[0, 1, 2]));
        assert!(s(&[7, 0, 0]).qderiv().is_zero());
        assert_eq!(s(&[0, 0, 0, 3]).qderiv(), s(&[0, 0, 0, 9]));
    }

    #[test]
    fn compose_examples() {
        let ones = vec![rat(1); 4];
        assert_eq!(QSeries::compose(&ones, &s(&[0, 1, 0, 0])).unwrap(), s(&[1, 1, 1, 1]));
        assert_eq!(QSeries::compose(&ones, &s(&[0, 2, 0])).unwrap(), s(&[1, 2, 4]));
        // (1 + x)^2 at x = q + q^2: 1 + 2(q + q^2) + (q + q^2)^2 = 1 + 2q + 3q^2 + ...
        let sq = [rat(1), rat(2), rat(1)];
        assert_eq!(QSeries::compose(&sq, &s(&[0, 1, 1])).unwrap(), s(&[1, 2, 3]));
        assert_eq!(
            QSeries::compose(&ones, &s(&[1, 1])),
            Err(Error::PositiveValuation)
        );
    }

    #[test]
    fn rational_coefficients_multiply() {
        let a = QSeries::new(vec![ratio(1, 2), ratio(1, 3)]);
        let b = QSeries::new(vec![ratio(2, 3), ratio(-3, 4)]);
        assert_eq!(&a * &b, QSeries::new(vec![ratio(1, 3), ratio(-3, 8) + ratio(2, 9)]));
    }

    #[test]
    fn text_form() {
        let a = QSeries::new(vec![rat(1), ratio(-3, 4), rat(0)]);
        assert_eq!(a.to_text(), "0\t1/1\n1\t-3/4\n2\t0/1\n");
        assert_eq!(a.to_text().parse::<QSeries>().unwrap(), a);
        assert!("0\t1/0\n".parse::<QSeries>().is_err());
        assert!("1\t1/1\n".parse::<QSeries>().is_err());
        assert_eq!(a.to_string(), "1 - 3/4*q^1 + O(q^3)");
    }

    #[test]
    fn huge_rational_to_float() {
        let big = BigRational::new(BigInt::from(10).pow(400) * 3, BigInt::from(10).pow(399));
        assert!((rational_to_f64(&big) - 30.0).abs() < 1e-12);
    }

    fn series(order: usize) -> impl Strategy<Value = QSeries> {
        prop::collection::vec(-9i64..=9, order + 1).prop_map(QSeries::from_ints)
    }

    fn unit_series(order: usize) -> impl Strategy<Value = QSeries> {
        (prop_oneof![-9i64..=-1, 1i64..=9], prop::collection::vec(-9i64..=9, order))
            .prop_map(|(c0, rest)| QSeries::from_ints(std::iter::once(c0).chain(rest)))
    }

    proptest! {
        #[test]
        fn ring_laws((a, b, c) in (0usize..=20).prop_flat_map(|n| (series(n), series(n), series(n)))) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn inverse_is_unit(a in (0usize..=20).prop_flat_map(unit_series)) {
            let n = a.order();
            prop_assert_eq!(&a * &a.inv().unwrap(), QSeries::one(n));
        }

        #[test]
        fn leibniz(a in series(15), b in series(12)) {
            let lhs = (&a * &b).qderiv();
            let rhs = &(&a.qderiv() * &b) + &(&a * &b.qderiv());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn text_roundtrip(a in series(10), d in 1i64..50) {
            let a = a.scale(&ratio(1, d));
            prop_assert_eq!(a.to_text().parse::<QSeries>().unwrap(), a);
        }
    }
}
