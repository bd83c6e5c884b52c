//! The q-difference operator `Δ^k_{Q,h}` with `Q = q^b`, and the explicit
//! formula for `W` that it yields through Newton interpolation.

use std::collections::HashMap;

use crate::error::Result;
use crate::qcore::{binom2, q_binomial, q_factorial, q_int, LaurentPoly};
use crate::whitney::WhitneyParams;

/// `f(x) = [x + offset]_q ^ power`, evaluated at integer points only.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QPowerFunction {
    pub offset: i64,
    pub power: u32,
}

impl QPowerFunction {
    pub fn new(offset: i64, power: u32) -> Self {
        Self { offset, power }
    }

    /// The constant function 1.
    pub fn constant_one() -> Self {
        Self::new(0, 0)
    }

    pub fn evaluate(&self, x: i64) -> LaurentPoly {
        q_int(x + self.offset).pow(self.power)
    }
}

/// Applies `prod_{j<k} (E_h - Q^j)` factor by factor.
///
/// `g_0 = f`, `g_{i+1}(y) = g_i(y + h) - Q^i g_i(y)`; the result is `g_k(x)`.
pub fn q_diff_recursive(f: &QPowerFunction, qbase_exp: i64, h: i64, k: u32, x: i64) -> LaurentPoly {
    let mut memo = HashMap::new();
    apply_factors(f, qbase_exp, h, k, x, &mut memo)
}

fn apply_factors(
    f: &QPowerFunction,
    b: i64,
    h: i64,
    i: u32,
    y: i64,
    memo: &mut HashMap<(u32, i64), LaurentPoly>,
) -> LaurentPoly {
    if i == 0 {
        return f.evaluate(y);
    }
    if let Some(v) = memo.get(&(i, y)) {
        return v.clone();
    }
    let shifted = apply_factors(f, b, h, i - 1, y + h, memo);
    let here = apply_factors(f, b, h, i - 1, y, memo);
    let v = shifted - here.shift(b * (i as i64 - 1));
    memo.insert((i, y), v.clone());
    v
}

/// `sum_{j=0}^{k} (-1)^{k-j} Q^{C(k-j,2)} [k j]_Q f(x + j h)` with `Q = q^b`.
pub fn q_diff_explicit(f: &QPowerFunction, qbase_exp: i64, h: i64, k: u32, x: i64) -> LaurentPoly {
    let k = k as i64;
    (0..=k)
        .map(|j| {
            let d = k - j;
            let sign = if d % 2 == 0 { 1 } else { -1 };
            let coeff = q_binomial(k, j, qbase_exp)
                .expect("valid q-binomial range")
                .shift(qbase_exp * binom2(d));
            (&coeff * &f.evaluate(x + j * h)).scale(&sign.into())
        })
        .sum()
}

/// `[k]_{q^m}! [m]_q^k`.
pub fn newton_normalizer(params: WhitneyParams, k: i64) -> Result<LaurentPoly> {
    let m = params.m();
    Ok(&q_factorial(k)?.substitute_power(m) * &q_int(m).pow(k as u32))
}

/// Explicit formula for `W[n,k]`: the alternating q-binomial sum of
/// `[jm + r]^n`, divided exactly by `[k]_{q^m}! [m]_q^k`.
pub fn whitney_explicit(params: WhitneyParams, n: i64, k: i64) -> Result<LaurentPoly> {
    if n < 0 || k < 0 || k > n {
        return Ok(LaurentPoly::zero());
    }
    let m = params.m();
    let numer: LaurentPoly = (0..=k)
        .map(|j| {
            let d = k - j;
            let sign = if d % 2 == 0 { 1 } else { -1 };
            let coeff = q_binomial(k, j, m)
                .expect("valid q-binomial range")
                .shift(m * binom2(d));
            (&coeff * &params.weight(j).pow(n as u32)).scale(&sign.into())
        })
        .sum();
    numer.exact_div(&newton_normalizer(params, k)?)
}

/// Newton coefficients of `f(x) = [x + r]^n` on the nodes `0, m, 2m, ...`:
/// `Δ^k_{q^m,m} f(0) / ([k]_{q^m}! [m]^k)` for `k = 0..=kmax`.
pub fn newton_coefficients(params: WhitneyParams, n: u32, kmax: u32) -> Result<Vec<LaurentPoly>> {
    let f = QPowerFunction::new(params.r(), n);
    (0..=kmax.min(n))
        .map(|k| {
            q_diff_explicit(&f, params.m(), params.m(), k, 0)
                .exact_div(&newton_normalizer(params, k as i64)?)
        })
        .collect()
}
