//! The q-analogue r-Whitney numbers `W_{m,r}[n,k]_q` and their normalized
//! form `W*`.
//!
//! [`WhitneyTable`] is the memoized triangular recurrence and the single
//! authority for "the numbers". The vertical and horizontal recurrences are
//! separate routes that never read a memo built by a different rule.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::{binom2, q_int, LaurentPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WhitneyParams {
    m: i64,
    r: i64,
}

impl WhitneyParams {
    pub fn new(m: i64, r: i64) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidParameter("m must be ≥ 1".into()));
        }
        if r < 0 {
            return Err(Error::InvalidParameter("r must be ≥ 0".into()));
        }
        Ok(Self { m, r })
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    /// Parameters `(m, r + m*by)`.
    pub fn shifted(&self, by: i64) -> Self {
        assert!(by >= 0, "shift must be nonnegative");
        Self {
            m: self.m,
            r: self.r + self.m * by,
        }
    }

    /// `[mk + r]_q`.
    pub fn weight(&self, k: i64) -> LaurentPoly {
        q_int(self.m * k + self.r)
    }

    /// Exponent `m*C(k,2) + k*r` of the factor removed by `W*`.
    pub fn star_exponent(&self, k: i64) -> i64 {
        self.m * binom2(k) + k * self.r
    }
}

/// Which triangular recurrence builds a table.
///
/// `PerturbedDiagonal` raises the diagonal coefficient `q^{m(k-1)+r}` by one
/// power of `q`. It exists so that the verification suites can be shown to
/// catch a wrong recurrence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Rule {
    #[default]
    Standard,
    PerturbedDiagonal,
}

impl Rule {
    fn diagonal_exponent(self, params: &WhitneyParams, k: i64) -> i64 {
        let e = params.m * (k - 1) + params.r;
        match self {
            Rule::Standard => e,
            Rule::PerturbedDiagonal => e + 1,
        }
    }
}

/// Triangle `W[n,k]` for `0 <= k <= n <= nmax`.
#[derive(Clone, Debug, Serialize)]
pub struct WhitneyTable {
    params: WhitneyParams,
    #[serde(skip)]
    nmax: usize,
    #[serde(skip)]
    rule: Rule,
    rows: Vec<Vec<LaurentPoly>>,
}

impl WhitneyTable {
    pub fn build(params: WhitneyParams, nmax: usize) -> Self {
        Self::build_with_rule(params, nmax, Rule::Standard)
    }

    pub fn build_with_rule(params: WhitneyParams, nmax: usize, rule: Rule) -> Self {
        let mut rows: Vec<Vec<LaurentPoly>> = vec![vec![LaurentPoly::one()]];
        for n in 1..=nmax {
            let prev = &rows[n - 1];
            let row = (0..=n)
                .map(|k| {
                    let k_i = k as i64;
                    let mut v = LaurentPoly::zero();
                    if k >= 1 {
                        v += prev[k - 1].shift(rule.diagonal_exponent(&params, k_i));
                    }
                    if k < n {
                        v += &params.weight(k_i) * &prev[k];
                    }
                    v
                })
                .collect();
            rows.push(row);
        }
        Self {
            params,
            nmax,
            rule,
            rows,
        }
    }

    pub fn params(&self) -> WhitneyParams {
        self.params
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn rows(&self) -> &[Vec<LaurentPoly>] {
        &self.rows
    }

    /// `W[n,k]`, with zero outside the triangle.
    ///
    /// Panics if `n` exceeds the table's `nmax`.
    pub fn get(&self, n: i64, k: i64) -> LaurentPoly {
        if n < 0 || k < 0 || k > n {
            return LaurentPoly::zero();
        }
        assert!(
            n as usize <= self.nmax,
            "row {n} is beyond table bound {}",
            self.nmax
        );
        self.rows[n as usize][k as usize].clone()
    }

    /// `W*[n,k] = q^{-m C(k,2) - k r} W[n,k]`.
    pub fn star(&self, n: i64, k: i64) -> LaurentPoly {
        self.get(n, k).shift(-self.params.star_exponent(k))
    }

    pub fn row_sum(&self, n: i64) -> LaurentPoly {
        (0..=n).map(|k| self.get(n, k)).sum()
    }
}

/// Lazily built tables for several parameter pairs, all under one [`Rule`].
///
/// Identities that mix `(m, r)` with shifted parameters read every value
/// through one cache, so a perturbed rule affects both sides alike.
#[derive(Debug, Default)]
pub struct TableCache {
    rule: Rule,
    tables: HashMap<WhitneyParams, WhitneyTable>,
}

impl TableCache {
    pub fn new(rule: Rule) -> Self {
        Self {
            rule,
            tables: HashMap::new(),
        }
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    /// Table for `params` covering at least rows `0..=nmax`.
    pub fn table(&mut self, params: WhitneyParams, nmax: usize) -> &WhitneyTable {
        let rule = self.rule;
        let entry = self
            .tables
            .entry(params)
            .or_insert_with(|| WhitneyTable::build_with_rule(params, nmax, rule));
        if entry.nmax() < nmax {
            *entry = WhitneyTable::build_with_rule(params, nmax, rule);
        }
        entry
    }

    pub fn get(&mut self, params: WhitneyParams, n: i64, k: i64) -> LaurentPoly {
        if n < 0 {
            return LaurentPoly::zero();
        }
        self.table(params, n as usize).get(n, k)
    }

    pub fn star(&mut self, params: WhitneyParams, n: i64, k: i64) -> LaurentPoly {
        if n < 0 {
            return LaurentPoly::zero();
        }
        self.table(params, n as usize).star(n, k)
    }
}

pub fn w_table(params: WhitneyParams, nmax: usize) -> WhitneyTable {
    WhitneyTable::build(params, nmax)
}

pub fn w(params: WhitneyParams, n: i64, k: i64) -> LaurentPoly {
    if n < 0 || k < 0 || k > n {
        return LaurentPoly::zero();
    }
    WhitneyTable::build(params, n as usize).get(n, k)
}

pub fn w_star(params: WhitneyParams, n: i64, k: i64) -> LaurentPoly {
    w(params, n, k).shift(-params.star_exponent(k))
}

/// Row sum `sum_k W[n,k]`, the q-analogue of an r-Dowling number.
pub fn r_dowling(params: WhitneyParams, n: i64) -> LaurentPoly {
    if n < 0 {
        return LaurentPoly::zero();
    }
    WhitneyTable::build(params, n as usize).row_sum(n)
}

/// Column `k` for rows `0..=nmax`, built only from `W[n,0] = [r]^n` and the
/// vertical recurrence.
pub fn vertical_column(params: WhitneyParams, k: i64, nmax: usize) -> Vec<LaurentPoly> {
    let base = params.weight(0);
    let mut col: Vec<LaurentPoly> = (0..=nmax as u32).map(|n| base.pow(n)).collect();
    for c in 0..k.max(0) {
        col = next_column(params, c, &col);
    }
    if k < 0 {
        col.iter_mut().for_each(|v| *v = LaurentPoly::zero());
    }
    col
}

// Column c+1 from column c:
// W[n+1,c+1] = q^{mc+r} sum_{j=c}^{n} [m(c+1)+r]^{n-j} W[j,c]
fn next_column(params: WhitneyParams, c: i64, col: &[LaurentPoly]) -> Vec<LaurentPoly> {
    let weight = params.weight(c + 1);
    let lead = params.m * c + params.r;
    let mut out = vec![LaurentPoly::zero(); col.len()];
    // running sum S_n = sum_{j=c}^{n} weight^{n-j} W[j,c] with S_n = weight*S_{n-1} + W[n,c]
    let mut running = LaurentPoly::zero();
    for n in 0..col.len().saturating_sub(1) {
        running = &weight * &running + &col[n];
        if n as i64 >= c {
            out[n + 1] = running.shift(lead);
        }
    }
    out
}

/// `W[n+1,k+1]` from column `k` alone.
pub fn w_vertical(params: WhitneyParams, n: i64, k: i64) -> LaurentPoly {
    if n < 0 || k < 0 || k > n {
        return LaurentPoly::zero();
    }
    let col = vertical_column(params, k, n as usize);
    let weight = params.weight(k + 1);
    (k..=n)
        .map(|j| &weight.pow((n - j) as u32) * &col[j as usize])
        .sum::<LaurentPoly>()
        .shift(params.m * k + params.r)
}

/// `r_{k+j+1,q} / r_{k+1,q}` as the telescoped product
/// `prod_{h=k+1}^{k+j} q^{-r-mh+m} [mh+r]_q`.
pub fn horizontal_ratio(params: WhitneyParams, k: i64, j: i64) -> LaurentPoly {
    ((k + 1)..=(k + j))
        .map(|h| params.weight(h).shift(-params.r - params.m * h + params.m))
        .product()
}

/// `W[n,k]` reconstructed from row `n+1`, supplied by `row_above(i) = W[n+1,i]`.
pub fn w_horizontal_from_row<F>(params: WhitneyParams, n: i64, k: i64, row_above: F) -> LaurentPoly
where
    F: Fn(i64) -> LaurentPoly,
{
    if n < 0 || k < 0 || k > n {
        return LaurentPoly::zero();
    }
    (0..=(n - k))
        .map(|j| {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            let coeff = horizontal_ratio(params, k, j).shift(-params.r - params.m * (k + j));
            (&coeff * &row_above(k + j + 1)).scale(&BigInt::from(sign))
        })
        .sum()
}

pub fn w_horizontal(params: WhitneyParams, n: i64, k: i64) -> LaurentPoly {
    if n < 0 || k < 0 || k > n {
        return LaurentPoly::zero();
    }
    let table = WhitneyTable::build(params, n as usize + 1);
    w_horizontal_from_row(params, n, k, |i| table.get(n + 1, i))
}

/// `W_{m,r}(n,k)` at `q = 1`.
pub fn classical_w(params: WhitneyParams, n: i64, k: i64) -> BigInt {
    w(params, n, k).coefficient_sum()
}

/// The q-free recurrence `W(n,k) = W(n-1,k-1) + (mk+r) W(n-1,k)`.
pub fn classical_w_recurrence(params: WhitneyParams, n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let mut row = vec![BigInt::from(1)];
    for i in 1..=n as usize {
        let mut next = vec![BigInt::zero(); i + 1];
        for (kk, slot) in next.iter_mut().enumerate() {
            if kk >= 1 {
                *slot += &row[kk - 1];
            }
            if kk < i {
                *slot += &row[kk] * (params.m * kk as i64 + params.r);
            }
        }
        row = next;
    }
    row[k as usize].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_coeffs(c.iter().copied())
    }

    fn p(m: i64, r: i64) -> WhitneyParams {
        WhitneyParams::new(m, r).unwrap()
    }

    /// Set partitions of {1..n} into exactly k blocks, by restricted growth strings.
    fn set_partitions(n: usize, k: usize) -> u64 {
        fn go(i: usize, n: usize, blocks: usize, k: usize) -> u64 {
            if i == n {
                return (blocks == k) as u64;
            }
            (0..=blocks)
                .map(|b| go(i + 1, n, blocks.max(b + 1), k))
                .sum()
        }
        if n == 0 {
            return (k == 0) as u64;
        }
        go(0, n, 0, k)
    }

    #[test]
    fn params_validation() {
        assert!(WhitneyParams::new(0, 0).is_err());
        assert!(WhitneyParams::new(1, -1).is_err());
        assert_eq!(p(2, 3).shifted(2), p(2, 7));
    }

    #[test]
    fn boundary_values() {
        for (m, r) in [(1, 0), (2, 1), (3, 2)] {
            assert_eq!(w(p(m, r), 0, 0), LaurentPoly::one());
            assert!(w(p(m, r), 2, 3).is_zero());
            assert!(w(p(m, r), -1, 0).is_zero());
            assert!(w(p(m, r), 2, -1).is_zero());
            let t = w_table(p(m, r), 6);
            for n in 0..=6 {
                assert_eq!(t.get(n, 0), q_int(r).pow(n as u32));
                assert_eq!(t.get(n, n), LaurentPoly::q_pow(m * binom2(n) + n * r));
                assert_eq!(t.star(n, n), LaurentPoly::one());
            }
        }
    }

    #[test]
    fn small_values() {
        assert_eq!(w(p(1, 1), 2, 1), lp(&[0, 2, 1]));
        let t = w_table(p(1, 1), 2);
        assert_eq!(t.rows()[2], vec![lp(&[1]), lp(&[0, 2, 1]), lp(&[0, 0, 0, 1])]);
        assert_eq!(w_table(p(1, 0), 0).rows(), &[vec![LaurentPoly::one()]]);
        assert_eq!(w_star(p(1, 1), 2, 1), lp(&[2, 1]));
        assert_eq!(w_star(p(2, 1), 3, 0), q_int(1).pow(3));
    }

    #[test]
    fn stirling_triangle_at_q_one() {
        let t = w_table(p(1, 0), 3);
        let at_one: Vec<Vec<BigInt>> = t
            .rows()
            .iter()
            .map(|row| row.iter().map(LaurentPoly::coefficient_sum).collect())
            .collect();
        let expected: Vec<Vec<BigInt>> = vec![vec![1], vec![0, 1], vec![0, 1, 1], vec![0, 1, 3, 1]]
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect();
        assert_eq!(at_one, expected);
        for n in 0..=8 {
            for k in 0..=n {
                assert_eq!(
                    classical_w(p(1, 0), n as i64, k as i64),
                    BigInt::from(set_partitions(n, k)),
                    "S({n},{k})"
                );
            }
        }
    }

    #[test]
    fn classical_examples() {
        assert_eq!(classical_w(p(1, 0), 4, 2), BigInt::from(7));
        assert_eq!(classical_w(p(2, 1), 2, 1), BigInt::from(4));
        assert_eq!(classical_w(p(3, 2), 5, 0), BigInt::from(32));
        for (m, r) in [(1, 0), (1, 2), (2, 1), (3, 2)] {
            for n in 0..=8 {
                for k in 0..=n {
                    assert_eq!(classical_w(p(m, r), n, k), classical_w_recurrence(p(m, r), n, k));
                }
            }
        }
    }

    #[test]
    fn dowling_values() {
        assert_eq!(r_dowling(p(2, 1), 0), LaurentPoly::one());
        assert_eq!(r_dowling(p(1, 0), 4).coefficient_sum(), BigInt::from(15));
        let d = r_dowling(p(1, 1), 2);
        assert_eq!(d, lp(&[1, 2, 1, 1]));
        assert_eq!(d.coefficient_sum(), BigInt::from(5));
    }

    #[test]
    fn ehrenborg_variant_for_stirling_case() {
        let t = w_table(p(1, 0), 10);
        for n in 1..=10 {
            for k in 1..=n {
                let rhs = t.get(n - 1, k - 1).shift(k - 1) + &q_int(k) * &t.get(n - 1, k);
                assert_eq!(t.get(n, k), rhs);
            }
        }
    }

    #[test]
    fn vertical_examples() {
        let pr = p(1, 1);
        assert_eq!(w_vertical(pr, 1, 0), lp(&[0, 2, 1]));
        for k in 0..4 {
            let expected = w(pr, k, k).shift(k + 1);
            assert_eq!(w_vertical(pr, k, k), expected);
        }
        assert_eq!(w_vertical(p(2, 1), 2, 1), w(p(2, 1), 3, 2));
    }

    #[test]
    fn horizontal_examples() {
        for (m, r) in [(1, 0), (1, 2), (2, 1), (3, 2)] {
            let pr = p(m, r);
            assert_eq!(w_horizontal(pr, 1, 0), q_int(r));
            for n in 0..4 {
                assert_eq!(w_horizontal(pr, n, n), w(pr, n, n));
            }
        }
        assert_eq!(w_horizontal(p(2, 1), 3, 1), w(p(2, 1), 3, 1));
    }

    #[test]
    fn routes_agree_on_small_grid() {
        for m in 1..=3 {
            for r in 0..=2 {
                let pr = p(m, r);
                let t = w_table(pr, 8);
                for n in 0..=7 {
                    for k in 0..=n {
                        assert_eq!(w_vertical(pr, n, k), t.get(n + 1, k + 1));
                        let h = w_horizontal_from_row(pr, n, k, |i| t.get(n + 1, i));
                        assert_eq!(h, t.get(n, k));
                        assert!(t.get(n, k).is_nonnegative_polynomial());
                        assert!(t.star(n, k).is_nonnegative_polynomial());
                    }
                }
            }
        }
    }

    #[test]
    fn perturbed_rule_differs() {
        let t = WhitneyTable::build_with_rule(p(1, 1), 3, Rule::PerturbedDiagonal);
        assert_ne!(t.get(2, 1), w(p(1, 1), 2, 1));
        // the perturbation is q^k W
        assert_eq!(t.get(3, 2), w(p(1, 1), 3, 2).shift(2));
    }
}
