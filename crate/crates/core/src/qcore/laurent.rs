//! Sparse Laurent polynomials in `q` with big-integer coefficients.
//!
//! Every Whitney number, q-integer and q-binomial in this crate is a value of
//! [`LaurentPoly`]. Terms are kept in a `BTreeMap` keyed by exponent, and zero
//! coefficients are never stored, so structural equality is ring equality.

use std::collections::BTreeMap;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * q^e`.
    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    /// `q^e`.
    pub fn q_pow(e: i64) -> Self {
        Self::monomial(1, e)
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, merging repeated
    /// exponents and dropping zeros.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    /// Dense constructor: `coeffs[i]` is the coefficient of `q^i`.
    pub fn from_coeffs<C: Into<BigInt>>(coeffs: impl IntoIterator<Item = C>) -> Self {
        Self::from_terms(coeffs.into_iter().enumerate().map(|(i, c)| (i as i64, c)))
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// True when every coefficient is nonnegative and no exponent is negative.
    pub fn is_nonnegative_polynomial(&self) -> bool {
        self.min_exponent().is_none_or(|e| e >= 0)
            && self.terms.values().all(|c| !c.is_negative())
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(&k, c)| (k + e, c.clone())).collect(),
        }
    }

    /// Substitutes `q -> q^b`.
    pub fn substitute_power(&self, b: i64) -> Self {
        assert!(b != 0, "substitution exponent must be nonzero");
        Self {
            terms: self.terms.iter().map(|(&k, c)| (k * b, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&k, v)| (k, v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Sum of coefficients, i.e. the value at `q = 1`.
    pub fn coefficient_sum(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Exact value at a rational point.
    ///
    /// Homogenized Horner over the integers, so only one reduction happens at
    /// the end.
    pub fn eval(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            return Err(Error::EvalAtZero);
        }
        let (Some(lo), Some(hi)) = (self.min_exponent(), self.max_exponent()) else {
            return Ok(BigRational::zero());
        };
        let (p, d) = (a.numer().clone(), a.denom().clone());
        if d.is_one() {
            // integer fast path: q^lo * P(p)
            let mut acc = BigInt::zero();
            let mut e = hi;
            for (&k, c) in self.terms.iter().rev() {
                while e > k {
                    acc *= &p;
                    e -= 1;
                }
                acc += c;
            }
            while e > lo {
                acc *= &p;
                e -= 1;
            }
            return Ok(BigRational::from_integer(acc) * pow_rational(a, lo));
        }
        // N = sum c_i p^(i-lo) d^(hi-i); value = N / d^(hi-lo) * a^lo
        let mut acc = BigInt::zero();
        let mut e = hi;
        let mut dpow = BigInt::one();
        for (&k, c) in self.terms.iter().rev() {
            while e > k {
                acc *= &p;
                dpow *= &d;
                e -= 1;
            }
            acc += c * &dpow;
        }
        while e > lo {
            acc *= &p;
            dpow *= &d;
            e -= 1;
        }
        Ok(BigRational::new(acc, dpow) * pow_rational(a, lo))
    }

    /// Exact quotient `self / divisor` in `Z[q, q^-1]`.
    ///
    /// Both operands are shifted to ordinary polynomials with nonzero constant
    /// terms, then quotient coefficients are eliminated from the lowest exponent
    /// upward.
    pub fn exact_div(&self, divisor: &LaurentPoly) -> Result<LaurentPoly> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let a_lo = self.min_exponent().unwrap();
        let b_lo = divisor.min_exponent().unwrap();
        let a = dense(self, a_lo);
        let b = dense(divisor, b_lo);
        if a.len() < b.len() {
            return Err(Error::NonExactDivision);
        }
        let qlen = a.len() - b.len() + 1;
        let mut rem = a;
        let mut quot = vec![BigInt::zero(); qlen];
        let b0 = &b[0];
        for i in 0..qlen {
            if rem[i].is_zero() {
                continue;
            }
            let (c, r) = rem[i].div_rem(b0);
            if !r.is_zero() {
                return Err(Error::NonExactDivision);
            }
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() {
                    rem[i + j] -= &c * bj;
                }
            }
            quot[i] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::NonExactDivision);
        }
        Ok(Self::from_coeffs(quot).shift(a_lo - b_lo))
    }

    /// Compact human-readable form such as `1 + 2q - q^-1`.
    pub fn to_pretty(&self) -> String {
        self.to_string()
    }
}

fn dense(p: &LaurentPoly, lo: i64) -> Vec<BigInt> {
    let hi = p.max_exponent().unwrap();
    let mut v = vec![BigInt::zero(); (hi - lo + 1) as usize];
    for (&e, c) in &p.terms {
        v[(e - lo) as usize] = c.clone();
    }
    v
}

fn pow_rational(a: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { a.recip() } else { a.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

/// `a / b` with a zero-remainder guarantee; see [`LaurentPoly::exact_div`].
pub fn laurent_exact_div(a: &LaurentPoly, b: &LaurentPoly) -> Result<LaurentPoly> {
    a.exact_div(b)
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (&e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let show_coeff = e == 0 || !abs.is_one();
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match e {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

// JSON form: sorted list of [exponent, "coefficient"] pairs.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (&e, c) in &self.terms {
            seq.serialize_element(&(e, c.to_string()))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct TermsVisitor;

        impl<'de> Visitor<'de> for TermsVisitor {
            type Value = LaurentPoly;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a list of [exponent, \"coefficient\"] pairs")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Self::Value, A::Error> {
                let mut p = LaurentPoly::zero();
                let mut last: Option<i64> = None;
                while let Some((e, c)) = seq.next_element::<(i64, String)>()? {
                    if last.is_some_and(|l| l >= e) {
                        return Err(de::Error::custom("exponents must be strictly increasing"));
                    }
                    last = Some(e);
                    let c: BigInt = c.parse().map_err(de::Error::custom)?;
                    if c.is_zero() {
                        return Err(de::Error::custom("zero coefficient in canonical form"));
                    }
                    p.terms.insert(e, c);
                }
                Ok(p)
            }
        }

        deserializer.deserialize_seq(TermsVisitor)
    }
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        LaurentPoly::one()
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl From<BigInt> for LaurentPoly {
    fn from(c: BigInt) -> Self {
        Self::constant(c)
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, -c);
        }
    }
}

impl MulAssign<&LaurentPoly> for LaurentPoly {
    fn mul_assign(&mut self, rhs: &LaurentPoly) {
        *self = &*self * rhs;
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&ea, ca) in &self.terms {
            for (&eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        -&self
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl AddAssign<LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: LaurentPoly) {
        *self += &rhs;
    }
}

impl SubAssign<LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: LaurentPoly) {
        *self -= &rhs;
    }
}

impl MulAssign<LaurentPoly> for LaurentPoly {
    fn mul_assign(&mut self, rhs: LaurentPoly) {
        *self = &*self * &rhs;
    }
}

impl Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::zero(), |mut acc, p| {
            acc += &p;
            acc
        })
    }
}

impl<'a> Sum<&'a LaurentPoly> for LaurentPoly {
    fn sum<I: Iterator<Item = &'a LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::zero(), |mut acc, p| {
            acc += p;
            acc
        })
    }
}

impl Product for LaurentPoly {
    fn product<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::one(), |acc, p| &acc * &p)
    }
}

impl<'a> Product<&'a LaurentPoly> for LaurentPoly {
    fn product<I: Iterator<Item = &'a LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::one(), |acc, p| &acc * p)
    }
}
