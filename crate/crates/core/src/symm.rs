//! Complete homogeneous symmetric functions, A-tableaux, and the convolution
//! identities of the normalized numbers `W*`.

use crate::error::{Error, Result};
use crate::qcore::LaurentPoly;
use crate::whitney::{Rule, TableCache, WhitneyParams};

pub const DEFAULT_TABLEAU_CAP: u128 = 1_000_000;

/// `h_d(values)`: the sum over all size-`d` multisets of `values` of their
/// product.
pub fn h_complete(values: &[LaurentPoly], d: usize) -> LaurentPoly {
    // h_d(x_1..x_j) = h_d(x_1..x_{j-1}) + x_j h_{d-1}(x_1..x_j)
    let mut h = vec![LaurentPoly::zero(); d + 1];
    h[0] = LaurentPoly::one();
    for x in values {
        for e in 1..=d {
            let add = x * &h[e - 1];
            h[e] += add;
        }
    }
    h.swap_remove(d)
}

/// The values `[m i + r]_q` for `i` in `lo..=hi`.
fn weights(params: WhitneyParams, lo: i64, hi: i64) -> Vec<LaurentPoly> {
    (lo..=hi).map(|i| params.weight(i)).collect()
}

/// `W*[n,k] = h_{n-k}([r], [m+r], ..., [mk+r])`.
pub fn w_star_symmetric(params: WhitneyParams, n: i64, k: i64) -> LaurentPoly {
    if n < 0 || k < 0 || k > n {
        return LaurentPoly::zero();
    }
    h_complete(&weights(params, 0, k), (n - k) as usize)
}

/// `W_{m, r + m*shift}[s, t - shift]` as `h_{s-t+shift}(x_shift, ..., x_t)`.
pub fn shifted_w_star_symmetric(params: WhitneyParams, shift: i64, s: i64, t: i64) -> LaurentPoly {
    let degree = s - t + shift;
    if shift < 0 || t < shift || degree < 0 {
        return LaurentPoly::zero();
    }
    h_complete(&weights(params, shift, t), degree as usize)
}

/// `W*_{m, r + m*shift}[s, t - shift]` from the triangular recurrence.
pub fn shifted_w_star(params: WhitneyParams, shift: i64, s: i64, t: i64) -> LaurentPoly {
    assert!(shift >= 0 && t >= shift, "need t >= shift >= 0");
    crate::whitney::w_star(params.shifted(shift), s, t - shift)
}

/// Weakly increasing column lengths `c_1 <= ... <= c_len`, each in `0..=max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ATableau {
    column_lengths: Vec<i64>,
}

impl ATableau {
    pub fn new(column_lengths: Vec<i64>, max: i64) -> Result<Self> {
        let ordered = column_lengths.windows(2).all(|w| w[0] <= w[1]);
        let in_range = column_lengths.iter().all(|&c| (0..=max).contains(&c));
        if !(ordered && in_range) {
            return Err(Error::InvalidParameter(format!(
                "column lengths {column_lengths:?} are not weakly increasing in 0..={max}"
            )));
        }
        Ok(Self { column_lengths })
    }

    pub fn column_lengths(&self) -> &[i64] {
        &self.column_lengths
    }

    /// `prod_c [m |c| + r]_q`.
    pub fn weight(&self, params: WhitneyParams) -> LaurentPoly {
        self.column_lengths.iter().map(|&c| params.weight(c)).product()
    }
}

/// All tableaux with `columns` columns of length at most `max`, in
/// lexicographic order.
pub fn tableaux(max: i64, columns: usize) -> impl Iterator<Item = ATableau> {
    let mut current: Option<Vec<i64>> = (max >= 0).then(|| vec![0; columns]);
    std::iter::from_fn(move || {
        let out = current.clone()?;
        // advance: bump the rightmost entry below max and reset the tail to it
        let next = current.as_mut().unwrap();
        match next.iter().rposition(|&c| c < max) {
            Some(i) => {
                let v = next[i] + 1;
                next[i..].iter_mut().for_each(|c| *c = v);
            }
            None => current = None,
        }
        Some(ATableau { column_lengths: out })
    })
}

/// `C(n, k)` computed without overflow for the sizes used here.
fn binomial_u128(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of tableaux in `T^A(k, n-k)`: size-`(n-k)` multisets of `k+1`
/// lengths.
pub fn tableau_count(n: i64, k: i64) -> u128 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    binomial_u128(n as u128, k as u128)
}

pub fn tableau_sum(params: WhitneyParams, n: i64, k: i64) -> Result<LaurentPoly> {
    tableau_sum_with_cap(params, n, k, DEFAULT_TABLEAU_CAP)
}

/// `W*[n,k]` as the weight sum over explicitly enumerated A-tableaux.
pub fn tableau_sum_with_cap(params: WhitneyParams, n: i64, k: i64, cap: u128) -> Result<LaurentPoly> {
    if n < 0 || k < 0 || k > n {
        return Ok(LaurentPoly::zero());
    }
    let count = tableau_count(n, k);
    if count > cap {
        return Err(Error::EnumerationTooLarge { count, cap });
    }
    Ok(tableaux(k, (n - k) as usize).map(|t| t.weight(params)).sum())
}

/// Both sides of
/// `W*[n+1, l+j+1] = sum_{k=0}^{n} W*_{m,r}[k,l] W*_{m,r+m(l+1)}[n-k,j]`.
pub fn convolution_first_sides(
    cache: &mut TableCache,
    params: WhitneyParams,
    n: i64,
    l: i64,
    j: i64,
) -> (LaurentPoly, LaurentPoly) {
    let lhs = cache.star(params, n + 1, l + j + 1);
    let shifted = params.shifted(l + 1);
    let rhs = (0..=n)
        .map(|k| &cache.star(params, k, l) * &cache.star(shifted, n - k, j))
        .sum();
    (lhs, rhs)
}

pub fn convolution_first(params: WhitneyParams, n: i64, l: i64, j: i64) -> bool {
    let (lhs, rhs) = convolution_first_sides(&mut TableCache::new(Rule::Standard), params, n, l, j);
    lhs == rhs
}

/// Both sides of
/// `W*[s+p, t] = sum_{k=max(0,t-p)}^{min(t,s)} W*_{m,r}[s,k] W*_{m,r+mk}[p,t-k]`.
pub fn convolution_second_sides(
    cache: &mut TableCache,
    params: WhitneyParams,
    s: i64,
    p: i64,
    t: i64,
) -> (LaurentPoly, LaurentPoly) {
    let lhs = cache.star(params, s + p, t);
    let rhs = ((t - p).max(0)..=t.min(s))
        .map(|k| &cache.star(params, s, k) * &cache.star(params.shifted(k), p, t - k))
        .sum();
    (lhs, rhs)
}

pub fn convolution_second(params: WhitneyParams, s: i64, p: i64, t: i64) -> bool {
    let (lhs, rhs) = convolution_second_sides(&mut TableCache::new(Rule::Standard), params, s, p, t);
    lhs == rhs
}
