//! Hankel matrices of `W*`, exact determinants over `Z[q, q^-1]`, and the
//! LU factorization behind the product formula
//! `det(W*[s+i+j, s+j])_{0<=i,j<=n} = prod_k [m(s+k)+r]^k`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::{q_int, LaurentPoly};
use crate::whitney::{Rule, TableCache, WhitneyParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HankelSpec {
    pub params: WhitneyParams,
    /// Starting column shift.
    pub s: i64,
    /// The matrix has order `n + 1`.
    pub n: i64,
}

impl HankelSpec {
    pub fn new(params: WhitneyParams, s: i64, n: i64) -> Result<Self> {
        if s < 0 || n < 0 {
            return Err(Error::InvalidParameter(format!(
                "Hankel spec needs s >= 0 and n >= 0, got s={s} n={n}"
            )));
        }
        Ok(Self { params, s, n })
    }

    pub fn order(&self) -> usize {
        self.n as usize + 1
    }
}

/// Square matrix over the Laurent ring.
#[derive(Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ExactMatrix {
    rows: Vec<Vec<LaurentPoly>>,
}

impl ExactMatrix {
    pub fn new(rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("matrix must be square".into()));
        }
        Ok(Self { rows })
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> LaurentPoly) -> Self {
        Self {
            rows: (0..order).map(|i| (0..order).map(|j| f(i, j)).collect()).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<LaurentPoly>] {
        &self.rows
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        let n = self.order();
        assert_eq!(n, other.order(), "order mismatch");
        ExactMatrix::from_fn(n, |i, j| (0..n).map(|k| &self.rows[i][k] * &other.rows[k][j]).sum())
    }

    pub fn map<F: Fn(&LaurentPoly) -> LaurentPoly>(&self, f: F) -> ExactMatrix {
        ExactMatrix {
            rows: self.rows.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }

    pub fn diagonal_product(&self) -> LaurentPoly {
        (0..self.order()).map(|i| &self.rows[i][i]).product()
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows.iter()).finish()
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Entry `(i, j) = W*[s+i+j, s+j]`, read through `cache`.
pub fn hankel_matrix_with(cache: &mut TableCache, spec: &HankelSpec) -> ExactMatrix {
    let s = spec.s;
    ExactMatrix::from_fn(spec.order(), |i, j| {
        let (i, j) = (i as i64, j as i64);
        cache.star(spec.params, s + i + j, s + j)
    })
}

pub fn hankel_matrix(spec: &HankelSpec) -> ExactMatrix {
    hankel_matrix_with(&mut TableCache::new(Rule::Standard), spec)
}

/// Determinant by fraction-free (Bareiss) elimination without row exchanges.
/// Every interior division must be exact; a zero pivot falls back to
/// cofactor expansion.
pub fn det_exact(mat: &ExactMatrix) -> Result<LaurentPoly> {
    let n = mat.order();
    if n == 0 {
        return Ok(LaurentPoly::one());
    }
    let mut a = mat.rows.clone();
    let mut prev = LaurentPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            return Ok(det_cofactor(mat));
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.exact_div(&prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(a[n - 1][n - 1].clone())
}

/// Laplace expansion along the first row.
pub fn det_cofactor(mat: &ExactMatrix) -> LaurentPoly {
    fn go(rows: &[Vec<LaurentPoly>], cols: &[usize]) -> LaurentPoly {
        if cols.is_empty() {
            return LaurentPoly::one();
        }
        let row = &rows[rows.len() - cols.len()];
        let mut total = LaurentPoly::zero();
        for (idx, &c) in cols.iter().enumerate() {
            if row[c].is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = &row[c] * &go(rows, &rest);
            if idx % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }
    let cols: Vec<usize> = (0..mat.order()).collect();
    go(&mat.rows, &cols)
}

/// `prod_{k=0}^{n} [m(s+k)+r]_q^k`.
pub fn hankel_closed_form(spec: &HankelSpec) -> LaurentPoly {
    let (m, r) = (spec.params.m(), spec.params.r());
    (0..=spec.n)
        .map(|k| q_int(m * (spec.s + k) + r).pow(k as u32))
        .product()
}

/// Determinant and closed form for the Hankel matrix read through `cache`.
pub fn hankel_sides(cache: &mut TableCache, spec: &HankelSpec) -> Result<(LaurentPoly, LaurentPoly)> {
    let det = det_exact(&hankel_matrix_with(cache, spec))?;
    Ok((det, hankel_closed_form(spec)))
}

pub fn hankel_transform_check(spec: &HankelSpec) -> Result<bool> {
    let (det, closed) = hankel_sides(&mut TableCache::new(Rule::Standard), spec)?;
    Ok(det == closed)
}

/// `L(i,j) = W*_{m,r}[s+i, s+j]` for `j <= i` and
/// `U(i,j) = W*_{m, r+m(s+i)}[j, j-i]` for `i <= j`.
pub fn lu_factors(cache: &mut TableCache, spec: &HankelSpec) -> (ExactMatrix, ExactMatrix) {
    let (params, s, order) = (spec.params, spec.s, spec.order());
    let lower = ExactMatrix::from_fn(order, |i, j| {
        if j > i {
            return LaurentPoly::zero();
        }
        cache.star(params, s + i as i64, s + j as i64)
    });
    let upper = ExactMatrix::from_fn(order, |i, j| {
        if i > j {
            return LaurentPoly::zero();
        }
        let shifted = params.shifted(s + i as i64);
        cache.star(shifted, j as i64, (j - i) as i64)
    });
    (lower, upper)
}

/// Result of checking the LU factorization for one spec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LuReport {
    pub product_matches: bool,
    pub determinant_matches: bool,
    pub diagonal_matches: bool,
}

impl LuReport {
    pub fn all(&self) -> bool {
        self.product_matches && self.determinant_matches && self.diagonal_matches
    }
}

pub fn lu_report(cache: &mut TableCache, spec: &HankelSpec) -> Result<LuReport> {
    let hankel = hankel_matrix_with(cache, spec);
    let (lower, upper) = lu_factors(cache, spec);
    let product_matches = lower.mul(&upper) == hankel;
    let det = det_exact(&hankel)?;
    let determinant_matches = det == &lower.diagonal_product() * &upper.diagonal_product();
    let (m, r) = (spec.params.m(), spec.params.r());
    let diagonal_matches = (0..spec.order()).all(|k| {
        *upper.get(k, k) == q_int(m * (spec.s + k as i64) + r).pow(k as u32)
    });
    Ok(LuReport {
        product_matches,
        determinant_matches,
        diagonal_matches,
    })
}

pub fn lu_check(spec: &HankelSpec) -> Result<bool> {
    Ok(lu_report(&mut TableCache::new(Rule::Standard), spec)?.all())
}

/// Determinant of an integer matrix by Gaussian elimination over the
/// rationals.
pub fn det_integer(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().cloned().map(BigRational::from_integer).collect())
        .collect();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let pivot = a[k][k].clone();
        det *= &pivot;
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest {
            let factor = &row[k] / &pivot;
            for (x, p) in row[k..].iter_mut().zip(&pivot_row[k..]) {
                *x -= &factor * p;
            }
        }
    }
    det.to_integer()
}

/// Both sides of the `q = 1` Hankel identity with entries read through `cache`.
pub fn classical_hankel_sides(cache: &mut TableCache, spec: &HankelSpec) -> (BigInt, BigInt) {
    let s = spec.s;
    let order = spec.order();
    let rows: Vec<Vec<BigInt>> = (0..order as i64)
        .map(|i| {
            (0..order as i64)
                .map(|j| cache.star(spec.params, s + i + j, s + j).coefficient_sum())
                .collect()
        })
        .collect();
    let (m, r) = (spec.params.m(), spec.params.r());
    let closed: BigInt = (0..=spec.n)
        .map(|k| BigInt::from(m * (s + k) + r).pow(k as u32))
        .product();
    (det_integer(&rows), closed)
}

pub fn classical_hankel_check(m: i64, r: i64, s: i64, n: i64) -> Result<bool> {
    let spec = HankelSpec::new(WhitneyParams::new(m, r)?, s, n)?;
    let (det, closed) = classical_hankel_sides(&mut TableCache::new(Rule::Standard), &spec);
    Ok(det == closed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(m: i64, r: i64, s: i64, n: i64) -> HankelSpec {
        HankelSpec::new(WhitneyParams::new(m, r).unwrap(), s, n).unwrap()
    }

    fn c(v: i64) -> LaurentPoly {
        LaurentPoly::constant(v)
    }

    #[test]
    fn matrix_examples() {
        let h = hankel_matrix(&spec(2, 1, 3, 0));
        assert_eq!(h.rows(), &[vec![LaurentPoly::one()]]);
        for (m, r) in [(1, 0), (2, 1), (3, 2)] {
            let h = hankel_matrix(&spec(m, r, 0, 1));
            let expected = vec![
                vec![LaurentPoly::one(), LaurentPoly::one()],
                vec![q_int(r), q_int(r) + q_int(m + r)],
            ];
            assert_eq!(h.rows(), expected.as_slice());
            assert_eq!(det_exact(&h).unwrap(), q_int(m + r));
        }
    }

    #[test]
    fn determinant_edge_cases() {
        assert_eq!(det_exact(&ExactMatrix::new(vec![vec![c(1)]]).unwrap()).unwrap(), c(1));
        assert!(ExactMatrix::new(vec![vec![c(1), c(2)]]).is_err());
        // zero leading pivot takes the cofactor route
        let m = ExactMatrix::new(vec![vec![c(0), c(1)], vec![c(1), c(0)]]).unwrap();
        assert_eq!(det_exact(&m).unwrap(), c(-1));
    }

    #[test]
    fn transform_examples() {
        assert!(hankel_transform_check(&spec(3, 2, 2, 0)).unwrap());
        for (m, r) in [(1, 0), (2, 1)] {
            assert!(hankel_transform_check(&spec(m, r, 0, 1)).unwrap());
        }
        let h = hankel_matrix(&spec(1, 0, 0, 2)).map(|p| LaurentPoly::constant(p.coefficient_sum()));
        let expected = vec![
            vec![c(1), c(1), c(1)],
            vec![c(0), c(1), c(3)],
            vec![c(0), c(1), c(7)],
        ];
        assert_eq!(h.rows(), expected.as_slice());
        assert_eq!(det_exact(&h).unwrap(), c(4));
    }

    #[test]
    fn lu_examples() {
        assert!(lu_check(&spec(1, 1, 0, 0)).unwrap());
        let mut cache = TableCache::new(Rule::Standard);
        let (l, u) = lu_factors(&mut cache, &spec(1, 1, 0, 1));
        assert_eq!(l.rows(), &[vec![c(1), c(0)], vec![q_int(1), c(1)]]);
        assert_eq!(u.rows(), &[vec![c(1), c(1)], vec![c(0), q_int(2)]]);
        assert_eq!(l.mul(&u), hankel_matrix(&spec(1, 1, 0, 1)));
        assert!(lu_check(&spec(2, 1, 1, 2)).unwrap());
    }

    #[test]
    fn classical_examples() {
        assert!(classical_hankel_check(1, 0, 1, 1).unwrap());
        let mut cache = TableCache::new(Rule::Standard);
        let (det, closed) = classical_hankel_sides(&mut cache, &spec(1, 0, 1, 1));
        assert_eq!((det, closed), (BigInt::from(2), BigInt::from(2)));
        let (det, _) = classical_hankel_sides(&mut cache, &spec(1, 0, 0, 2));
        assert_eq!(det, BigInt::from(4));
        let (det, _) = classical_hankel_sides(&mut cache, &spec(2, 1, 0, 1));
        assert_eq!(det, BigInt::from(3));
    }

    #[test]
    fn integer_determinant_with_row_swap() {
        let rows = vec![
            vec![BigInt::from(0), BigInt::from(2)],
            vec![BigInt::from(3), BigInt::from(5)],
        ];
        assert_eq!(det_integer(&rows), BigInt::from(-6));
    }

    fn arb_matrix(order: usize) -> impl Strategy<Value = ExactMatrix> {
        prop::collection::vec(
            prop::collection::vec(-3i64..=3, 0..=3).prop_map(LaurentPoly::from_coeffs),
            order * order,
        )
        .prop_map(move |cells| {
            ExactMatrix::from_fn(order, |i, j| cells[i * order + j].clone())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn bareiss_matches_cofactor(m in arb_matrix(4)) {
            prop_assert_eq!(det_exact(&m).unwrap(), det_cofactor(&m));
        }

        #[test]
        fn bareiss_matches_cofactor_with_shifts(m in arb_matrix(3), e in -3i64..=3) {
            let shifted = m.map(|p| p.shift(e));
            prop_assert_eq!(det_exact(&shifted).unwrap(), det_cofactor(&shifted));
        }
    }
}
