//! q-integers, q-factorials, Gaussian binomials and the q-binomial transform.

use super::{LaurentPoly, PolyFraction};
use crate::error::{Error, Result};

/// `k choose 2`, valid for any integer `k`.
pub fn binom2(k: i64) -> i64 {
    k * (k - 1) / 2
}

/// The q-integer `[n]_q`.
///
/// For `n >= 0` this is `1 + q + ... + q^(n-1)`; for `n < 0` it is the Laurent
/// polynomial `-q^n - ... - q^-1`, which equals `(1 - q^n) / (1 - q)`.
pub fn q_int(n: i64) -> LaurentPoly {
    if n >= 0 {
        LaurentPoly::from_terms((0..n).map(|e| (e, 1)))
    } else {
        LaurentPoly::from_terms((n..0).map(|e| (e, -1)))
    }
}

pub fn q_factorial(n: i64) -> Result<LaurentPoly> {
    if n < 0 {
        return Err(Error::InvalidParameter(format!(
            "q-factorial needs n >= 0, got {n}"
        )));
    }
    Ok((1..=n).map(q_int).product())
}

/// Gaussian binomial `[n k]` in the variable `q^base`.
pub fn q_binomial(n: i64, k: i64, base: i64) -> Result<LaurentPoly> {
    if n < 0 {
        return Err(Error::InvalidParameter(format!(
            "q-binomial needs n >= 0, got {n}"
        )));
    }
    if base < 1 {
        return Err(Error::InvalidParameter(format!(
            "q-binomial base exponent must be >= 1, got {base}"
        )));
    }
    if k < 0 || k > n {
        return Ok(LaurentPoly::zero());
    }
    let k = k.min(n - k);
    // [n]_q! / ([k]_q! [n-k]_q!) = [n][n-1]...[n-k+1] / [k]!
    let top: LaurentPoly = ((n - k + 1)..=n).map(q_int).product();
    let coeff = top.exact_div(&q_factorial(k)?)?;
    Ok(coeff.substitute_power(base))
}

/// `[t-r|m]_{k,q} = prod_{i<k} [t - r - i m]_q`, as a fraction with unit
/// denominator.
pub fn q_falling(t: i64, r: i64, m: i64, k: i64) -> PolyFraction {
    q_falling_laurent(t, r, m, k).into()
}

pub fn q_falling_laurent(t: i64, r: i64, m: i64, k: i64) -> LaurentPoly {
    (0..k.max(0)).map(|i| q_int(t - r - i * m)).product()
}

/// `f_n = sum_k [n k]_q g_k` for every `n` up to the length of `g`.
pub fn q_binomial_transform(g: &[LaurentPoly]) -> Vec<LaurentPoly> {
    (0..g.len() as i64)
        .map(|n| {
            (0..=n)
                .map(|k| &q_binomial(n, k, 1).expect("valid range") * &g[k as usize])
                .sum()
        })
        .collect()
}

/// Inverse of [`q_binomial_transform`] for indices `0..=n`:
/// `g_n = sum_k (-1)^(n-k) q^C(n-k,2) [n k]_q f_k`.
pub fn q_binomial_inverse(f: &[LaurentPoly], n: usize) -> Result<Vec<LaurentPoly>> {
    if f.len() < n + 1 {
        return Err(Error::InvalidParameter(format!(
            "inversion to index {n} needs {} terms, got {}",
            n + 1,
            f.len()
        )));
    }
    Ok((0..=n as i64)
        .map(|i| {
            (0..=i)
                .map(|k| {
                    let d = i - k;
                    let sign = if d % 2 == 0 { 1 } else { -1 };
                    let w = LaurentPoly::monomial(sign, binom2(d));
                    &(&w * &q_binomial(i, k, 1).expect("valid range")) * &f[k as usize]
                })
                .sum()
        })
        .collect())
}

/// Polynomial in `x` with Laurent coefficients, low degree first.
fn x_poly_mul(a: &[LaurentPoly], b: &[LaurentPoly]) -> Vec<LaurentPoly> {
    let mut out = vec![LaurentPoly::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Left side `sum_k q^C(k,2) [n k]_q x^k` as an `x`-coefficient list.
pub fn gauss_product_lhs(n: i64) -> Vec<LaurentPoly> {
    (0..=n)
        .map(|k| q_binomial(n, k, 1).expect("valid range").shift(binom2(k)))
        .collect()
}

/// Right side `(1+x)(1+xq)...(1+xq^(n-1))` as an `x`-coefficient list.
pub fn gauss_product_rhs(n: i64) -> Vec<LaurentPoly> {
    (0..n).fold(vec![LaurentPoly::one()], |acc, i| {
        x_poly_mul(&acc, &[LaurentPoly::one(), LaurentPoly::q_pow(i)])
    })
}

pub fn gauss_product_check(n: i64) -> bool {
    n >= 0 && gauss_product_lhs(n) == gauss_product_rhs(n)
}
