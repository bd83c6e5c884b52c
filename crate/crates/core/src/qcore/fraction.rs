use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::LaurentPoly;
use crate::error::{Error, Result};

/// Quotient of two Laurent polynomials, never reduced.
///
/// Equality is cross-multiplication: `a/b == c/d` iff `a*d == c*b`.
#[derive(Clone)]
pub struct PolyFraction {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl PolyFraction {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self { num, den })
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denom(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    /// The Laurent polynomial this fraction equals, if the division is exact.
    pub fn to_laurent(&self) -> Result<LaurentPoly> {
        self.num.exact_div(&self.den).map_err(|e| match e {
            Error::NonExactDivision => Error::InternalNonLaurent,
            other => other,
        })
    }

    pub fn eval(&self, a: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(a)?;
        if d.is_zero() {
            return Err(Error::DenominatorVanishes);
        }
        Ok(self.num.eval(a)? / d)
    }

    pub fn scale_laurent(&self, p: &LaurentPoly) -> Self {
        Self {
            num: &self.num * p,
            den: self.den.clone(),
        }
    }
}

impl From<LaurentPoly> for PolyFraction {
    fn from(num: LaurentPoly) -> Self {
        Self {
            num,
            den: LaurentPoly::one(),
        }
    }
}

impl PartialEq for PolyFraction {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for PolyFraction {}

impl fmt::Debug for PolyFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl fmt::Display for PolyFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Add<&PolyFraction> for &PolyFraction {
    type Output = PolyFraction;

    fn add(self, rhs: &PolyFraction) -> PolyFraction {
        // Common denominators are the norm for series coefficients; avoid growth.
        if self.den == rhs.den {
            return PolyFraction {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            };
        }
        PolyFraction {
            num: &self.num * &rhs.den + &rhs.num * &self.den,
            den: &self.den * &rhs.den,
        }
    }
}

impl Sub<&PolyFraction> for &PolyFraction {
    type Output = PolyFraction;

    fn sub(self, rhs: &PolyFraction) -> PolyFraction {
        self + &(-rhs)
    }
}

impl Mul<&PolyFraction> for &PolyFraction {
    type Output = PolyFraction;

    fn mul(self, rhs: &PolyFraction) -> PolyFraction {
        PolyFraction {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
    }
}

impl Neg for &PolyFraction {
    type Output = PolyFraction;

    fn neg(self) -> PolyFraction {
        PolyFraction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<PolyFraction> for PolyFraction {
            type Output = PolyFraction;
            fn $method(self, rhs: PolyFraction) -> PolyFraction {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PolyFraction {
    type Output = PolyFraction;
    fn neg(self) -> PolyFraction {
        -&self
    }
}

impl Zero for PolyFraction {
    fn zero() -> Self {
        LaurentPoly::zero().into()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for PolyFraction {
    fn one() -> Self {
        LaurentPoly::one().into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_coeffs(c.iter().copied())
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            PolyFraction::new(lp(&[1]), LaurentPoly::zero()).unwrap_err(),
            Error::DivisionByZero
        );
    }

    #[test]
    fn cross_multiplication_equality() {
        let a = PolyFraction::new(lp(&[1, 2, 1]), lp(&[1, 1])).unwrap();
        let b = PolyFraction::from(lp(&[1, 1]));
        assert_eq!(a, b);
        assert_eq!(a.to_laurent().unwrap(), lp(&[1, 1]));
        let c = PolyFraction::new(lp(&[1, 0, 1]), lp(&[1, 1])).unwrap();
        assert_eq!(c.to_laurent(), Err(Error::InternalNonLaurent));
    }

    #[test]
    fn negative_q_integer_from_quotient() {
        // (1 - q^-2) / (1 - q) = -q^-2 - q^-1
        let f = PolyFraction::new(
            LaurentPoly::one() - LaurentPoly::q_pow(-2),
            LaurentPoly::one() - LaurentPoly::q_pow(1),
        )
        .unwrap();
        assert_eq!(
            f.to_laurent().unwrap(),
            LaurentPoly::from_terms([(-2, -1), (-1, -1)])
        );
    }

    #[test]
    fn evaluation_checks_denominator() {
        let f = PolyFraction::new(lp(&[1]), lp(&[-1, 1])).unwrap();
        let one = BigRational::one();
        assert_eq!(f.eval(&one), Err(Error::DenominatorVanishes));
        let two = BigRational::from_integer(2.into());
        assert_eq!(f.eval(&two).unwrap(), one);
    }

    #[test]
    fn arithmetic_matches_rational_evaluation() {
        let a = PolyFraction::new(lp(&[1, 3]), lp(&[2, 0, 1])).unwrap();
        let b = PolyFraction::new(lp(&[0, -1, 4]), lp(&[1, 1])).unwrap();
        let x = BigRational::new(3.into(), 7.into());
        let (ea, eb) = (a.eval(&x).unwrap(), b.eval(&x).unwrap());
        assert_eq!((&a + &b).eval(&x).unwrap(), &ea + &eb);
        assert_eq!((&a - &b).eval(&x).unwrap(), &ea - &eb);
        assert_eq!((&a * &b).eval(&x).unwrap(), &ea * &eb);
    }
}
