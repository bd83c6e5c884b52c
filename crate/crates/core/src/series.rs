//! Truncated formal power series in `z` and the generating functions of `W`.
//!
//! The q-integer `[t]_q` that the generating functions are written in is used
//! purely as an indeterminate, so it is modeled as the formal variable `z`.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qcalculus::newton_normalizer;
use crate::qcore::{binom2, q_binomial, q_factorial, q_falling_laurent, q_int, LaurentPoly, PolyFraction};
use crate::whitney::{WhitneyParams, WhitneyTable};

pub const DEFAULT_ORDER: usize = 12;

/// Coefficient ring of a [`Series`].
pub trait SeriesCoeff:
    Clone
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn try_recip(&self) -> Option<Self>;
}

impl SeriesCoeff for PolyFraction {
    fn try_recip(&self) -> Option<Self> {
        self.recip().ok()
    }
}

impl SeriesCoeff for BigRational {
    fn try_recip(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
}

/// `sum_{n <= order} c_n z^n`; the vector always has `order + 1` entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<C> {
    coeffs: Vec<C>,
}

pub type PowerSeries = Series<PolyFraction>;

impl<C: SeriesCoeff> Series<C> {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![C::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(C::one(), 0, order)
    }

    /// `c z^power`, truncated at `order`.
    pub fn monomial(c: C, power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = c;
        }
        s
    }

    /// Pads with zeros or truncates to `order`.
    pub fn from_coeffs(mut coeffs: Vec<C>, order: usize) -> Self {
        coeffs.resize(order + 1, C::zero());
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &C {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn scale(&self, c: &C) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self {
            coeffs: (0..=order)
                .map(|i| self.coeffs[i].clone() + other.coeffs[i].clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self {
            coeffs: (0..=order)
                .map(|i| self.coeffs[i].clone() - other.coeffs[i].clone())
                .collect(),
        }
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = Self::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j] = out.coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.order()), |acc, _| acc.mul(self))
    }

    /// Multiplicative inverse up to the series order.
    pub fn inverse(&self) -> Result<Self> {
        let inv0 = self.coeffs[0]
            .try_recip()
            .ok_or(Error::NonInvertibleConstantTerm)?;
        let order = self.order();
        let mut out = Self::zero(order);
        out.coeffs[0] = inv0.clone();
        for n in 1..=order {
            let mut acc = C::zero();
            for i in 1..=n {
                if !self.coeffs[i].is_zero() {
                    acc = acc + self.coeffs[i].clone() * out.coeffs[n - i].clone();
                }
            }
            out.coeffs[n] = -(acc * inv0.clone());
        }
        Ok(out)
    }
}

pub fn series_inverse(s: &PowerSeries) -> Result<PowerSeries> {
    s.inverse()
}

/// `1 - a z`.
fn one_minus(a: &LaurentPoly, order: usize) -> PowerSeries {
    PowerSeries::from_coeffs(vec![PolyFraction::one(), (-a).into()], order)
}

/// `q^{m C(k,2) + k r} z^k / prod_{j=0}^{k} (1 - [mj + r]_q z)`.
pub fn rational_gf(params: WhitneyParams, k: usize, order: usize) -> Result<PowerSeries> {
    if k > order {
        return Err(Error::InvalidParameter(format!(
            "column {k} exceeds series order {order}"
        )));
    }
    let lead = LaurentPoly::q_pow(params.star_exponent(k as i64));
    let mut s = PowerSeries::monomial(lead.into(), k, order);
    for j in 0..=k as i64 {
        s = s.mul(&one_minus(&params.weight(j), order).inverse()?);
    }
    Ok(s)
}

/// `e_q(a z) = sum_n a^n z^n / [n]_q!`.
pub fn q_exponential(a: &LaurentPoly, order: usize) -> PowerSeries {
    let coeffs = (0..=order)
        .map(|n| {
            let den = q_factorial(n as i64).expect("nonnegative");
            PolyFraction::new(a.pow(n as u32), den).expect("q-factorial is nonzero")
        })
        .collect();
    PowerSeries::from_coeffs(coeffs, order)
}

/// Exponential-type generating function of column `k`:
/// `sum_n W[n,k] z^n / [n]_q!`, built from the explicit j-sum of
/// q-exponentials.
pub fn egf(params: WhitneyParams, k: usize, order: usize) -> Result<PowerSeries> {
    if k > order {
        return Err(Error::InvalidParameter(format!(
            "column {k} exceeds series order {order}"
        )));
    }
    let m = params.m();
    let k_i = k as i64;
    let mut sum = PowerSeries::zero(order);
    for j in 0..=k_i {
        let d = k_i - j;
        let sign = if d % 2 == 0 { 1 } else { -1 };
        let c = q_binomial(k_i, j, m)?
            .shift(m * binom2(d))
            .scale(&BigInt::from(sign));
        sum = sum.add(&q_exponential(&params.weight(j), order).scale(&c.into()));
    }
    let norm = PolyFraction::new(LaurentPoly::one(), newton_normalizer(params, k_i)?)?;
    Ok(sum.scale(&norm))
}

/// `e^{rt} (e^{mt} - 1)^k / (k! m^k)` over the rationals.
pub fn classical_egf(m: i64, r: i64, k: u32, order: usize) -> Series<BigRational> {
    let exp_series = |a: i64, skip_constant: bool| {
        let mut fact = BigInt::one();
        let coeffs = (0..=order)
            .map(|n| {
                if n > 0 {
                    fact *= n;
                }
                if n == 0 && skip_constant {
                    BigRational::zero()
                } else {
                    BigRational::new(BigInt::from(a).pow(n as u32), fact.clone())
                }
            })
            .collect();
        Series::from_coeffs(coeffs, order)
    };
    let denom: BigInt = (1..=k as i64).map(BigInt::from).product::<BigInt>() * BigInt::from(m).pow(k);
    exp_series(r, false)
        .mul(&exp_series(m, true).pow(k))
        .scale(&BigRational::new(BigInt::one(), denom))
}

/// Horizontal generating function at an exact rational `q`:
/// `sum_k W[n,k] [t-r|m]_{k,q} == [t]_q^n`.
pub fn horizontal_gf_check_with(table: &WhitneyTable, n: i64, t: i64, qval: &BigRational) -> Result<bool> {
    let (lhs, rhs) = horizontal_gf_sides(table, n, t, qval)?;
    Ok(lhs == rhs)
}

pub fn horizontal_gf_sides(
    table: &WhitneyTable,
    n: i64,
    t: i64,
    qval: &BigRational,
) -> Result<(BigRational, BigRational)> {
    if qval.is_zero() {
        return Err(Error::EvalAtZero);
    }
    let params = table.params();
    let mut lhs = BigRational::zero();
    for k in 0..=n {
        let falling = q_falling_laurent(t, params.r(), params.m(), k);
        lhs += table.get(n, k).eval(qval)? * falling.eval(qval)?;
    }
    let rhs = num_traits::pow(q_int(t).eval(qval)?, n as usize);
    Ok((lhs, rhs))
}

pub fn horizontal_gf_check(params: WhitneyParams, n: i64, t: i64, qval: &BigRational) -> Result<bool> {
    if n < 0 {
        return Err(Error::InvalidParameter(format!("n must be ≥ 0, got {n}")));
    }
    horizontal_gf_check_with(&WhitneyTable::build(params, n as usize), n, t, qval)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::parse_rational;
    use crate::whitney::{classical_w, w, w_table};

    fn p(m: i64, r: i64) -> WhitneyParams {
        WhitneyParams::new(m, r).unwrap()
    }

    fn lp(c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_coeffs(c.iter().copied())
    }

    fn frac(c: &[i64]) -> PolyFraction {
        lp(c).into()
    }

    #[test]
    fn inverse_examples() {
        let a = lp(&[2, 1]);
        let s = one_minus(&a, 6).inverse().unwrap();
        for n in 0..=6 {
            assert_eq!(s.coeff(n), &PolyFraction::from(a.pow(n as u32)));
        }
        assert_eq!(PowerSeries::one(4).inverse().unwrap(), PowerSeries::one(4));
        let prod = one_minus(&lp(&[1]), 5).mul(&one_minus(&lp(&[2]), 5));
        assert_eq!(prod.inverse().unwrap().mul(&prod), PowerSeries::one(5));
        let bad = PowerSeries::monomial(frac(&[1]), 1, 3);
        assert_eq!(bad.inverse().unwrap_err(), Error::NonInvertibleConstantTerm);
    }

    #[test]
    fn multiplication_is_associative_at_truncation() {
        let a = PowerSeries::from_coeffs(vec![frac(&[1, 1]), frac(&[0, 2]), frac(&[3])], 5);
        let b = one_minus(&lp(&[1, 0, 1]), 5).inverse().unwrap();
        let c = q_exponential(&lp(&[0, 1]), 5);
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn rational_gf_examples() {
        for (m, r) in [(1, 0), (2, 1), (3, 2)] {
            let s = rational_gf(p(m, r), 0, 6).unwrap();
            for n in 0..=6 {
                assert_eq!(s.coeff(n), &PolyFraction::from(q_int(r).pow(n as u32)));
            }
        }
        let s = rational_gf(p(1, 1), 1, 2).unwrap();
        assert_eq!(s.coeff(2), &frac(&[0, 2, 1]));
        let s = rational_gf(p(2, 1), 3, 6).unwrap();
        for n in 0..3 {
            assert!(s.coeff(n).is_zero());
        }
        assert!(rational_gf(p(1, 1), 3, 2).is_err());
    }

    #[test]
    fn rational_gf_matches_table() {
        for m in 1..=3 {
            for r in 0..=2 {
                let t = w_table(p(m, r), 12);
                for k in 0..=5 {
                    let s = rational_gf(p(m, r), k, 12).unwrap();
                    for n in 0..=12 {
                        assert_eq!(s.coeff(n).to_laurent().unwrap(), t.get(n as i64, k as i64));
                    }
                }
            }
        }
    }

    #[test]
    fn q_exponential_examples() {
        assert_eq!(q_exponential(&LaurentPoly::zero(), 5), PowerSeries::one(5));
        let s = q_exponential(&LaurentPoly::one(), 3);
        assert_eq!(s.coeff(2), &PolyFraction::new(lp(&[1]), lp(&[1, 1])).unwrap());
        let s = q_exponential(&q_int(2), 3);
        assert_eq!(s.coeff(1), &frac(&[1, 1]));
    }

    #[test]
    fn egf_examples() {
        let s = egf(p(2, 1), 0, 5).unwrap();
        for n in 0..=5 {
            let expected =
                PolyFraction::new(q_int(1).pow(n as u32), q_factorial(n as i64).unwrap()).unwrap();
            assert_eq!(s.coeff(n), &expected);
        }
        let s = egf(p(1, 1), 1, 3).unwrap();
        assert_eq!(s.coeff(2), &PolyFraction::new(lp(&[0, 2, 1]), lp(&[1, 1])).unwrap());
        let s = egf(p(3, 2), 4, 6).unwrap();
        for n in 0..4 {
            assert!(s.coeff(n).is_zero());
        }
    }

    #[test]
    fn egf_times_factorial_recovers_w() {
        for (m, r) in [(1, 0), (2, 2), (3, 1)] {
            for k in 0..=4 {
                let s = egf(p(m, r), k, 8).unwrap();
                for n in 0..=8 {
                    let scaled = s.coeff(n).scale_laurent(&q_factorial(n as i64).unwrap());
                    assert_eq!(scaled.to_laurent().unwrap(), w(p(m, r), n as i64, k as i64));
                }
            }
        }
    }

    #[test]
    fn classical_egf_matches_q_one() {
        for (m, r) in [(1, 0), (2, 1), (3, 2)] {
            for k in 0..=4u32 {
                let s = classical_egf(m, r, k, 8);
                let mut fact = BigInt::one();
                for n in 0..=8usize {
                    if n > 0 {
                        fact *= n;
                    }
                    let expected = BigRational::new(classical_w(p(m, r), n as i64, k as i64), fact.clone());
                    assert_eq!(s.coeff(n), &expected);
                }
            }
        }
    }

    #[test]
    fn horizontal_gf_examples() {
        let two = parse_rational("2").unwrap();
        assert!(horizontal_gf_check(p(3, 2), 0, 5, &two).unwrap());
        let t = w_table(p(1, 1), 2);
        let (lhs, rhs) = horizontal_gf_sides(&t, 2, 2, &two).unwrap();
        assert_eq!(lhs, BigRational::from_integer(9.into()));
        assert_eq!(rhs, BigRational::from_integer(9.into()));
        assert!(horizontal_gf_check(p(2, 1), 3, 7, &parse_rational("3/2").unwrap()).unwrap());
        assert_eq!(
            horizontal_gf_check(p(2, 1), 3, 7, &BigRational::zero()),
            Err(Error::EvalAtZero)
        );
    }
}
