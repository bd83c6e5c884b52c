//! Exact arithmetic foundation: Laurent polynomials, their fractions, exact
//! rational evaluation, and the standard q-notation.

mod fraction;
mod laurent;
mod qnum;

pub use fraction::PolyFraction;
pub use laurent::{laurent_exact_div, LaurentPoly};
pub use num_rational::BigRational;
pub use qnum::{
    binom2, gauss_product_check, gauss_product_lhs, gauss_product_rhs, q_binomial,
    q_binomial_inverse, q_binomial_transform, q_factorial, q_falling, q_falling_laurent, q_int,
};

/// Values that can be evaluated exactly at a rational `q`.
pub trait EvalQ {
    fn eval_q(&self, a: &BigRational) -> crate::Result<BigRational>;
}

impl EvalQ for LaurentPoly {
    fn eval_q(&self, a: &BigRational) -> crate::Result<BigRational> {
        self.eval(a)
    }
}

impl EvalQ for PolyFraction {
    fn eval_q(&self, a: &BigRational) -> crate::Result<BigRational> {
        self.eval(a)
    }
}

pub fn eval_q<P: EvalQ + ?Sized>(p: &P, a: &BigRational) -> crate::Result<BigRational> {
    p.eval_q(a)
}

/// Parses `"p/q"` or a plain integer into an exact rational.
pub fn parse_rational(s: &str) -> crate::Result<BigRational> {
    let bad = || crate::Error::InvalidParameter(format!("cannot parse rational {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: num_bigint::BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: num_bigint::BigInt = d.trim().parse().map_err(|_| bad())?;
            if num_traits::Zero::is_zero(&d) {
                return Err(crate::Error::InvalidParameter(format!(
                    "zero denominator in {s:?}"
                )));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}
