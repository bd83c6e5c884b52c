use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{Grid, Outcome, ReportBuilder};
use crate::error::Result;
use crate::hankel::{
    classical_hankel_sides, det_cofactor, det_exact, hankel_matrix_with, hankel_sides, lu_report, HankelSpec,
};
use crate::qcalculus::{newton_coefficients, q_diff_explicit, q_diff_recursive, whitney_explicit, QPowerFunction};
use crate::qcore::{
    gauss_product_lhs, gauss_product_rhs, q_binomial, q_binomial_inverse, q_binomial_transform, q_factorial,
    q_falling_laurent, q_int, LaurentPoly,
};
use crate::series::{classical_egf, egf, horizontal_gf_sides, rational_gf};
use crate::symm::{
    convolution_first_sides, convolution_second_sides, shifted_w_star_symmetric, tableau_count, tableau_sum,
    tableaux, w_star_symmetric,
};
use crate::whitney::{
    classical_w_recurrence, vertical_column, w_horizontal_from_row, Rule, TableCache, WhitneyParams,
};

fn all_params(grid: &Grid) -> Vec<WhitneyParams> {
    grid.m
        .iter()
        .flat_map(|&m| grid.r.iter().map(move |&r| WhitneyParams::new(m, r).expect("validated grid")))
        .collect()
}

fn pj(p: WhitneyParams) -> Value {
    json!({"m": p.m(), "r": p.r()})
}

fn with(p: WhitneyParams, extra: Value) -> Value {
    let mut v = pj(p);
    if let (Value::Object(base), Value::Object(more)) = (&mut v, extra) {
        base.extend(more);
    }
    v
}

/// Runs `f` for every `(m, r)` of the grid in parallel, each worker with its
/// own cache, and concatenates the outcomes in grid order.
fn per_params<F>(grid: &Grid, rule: Rule, f: F) -> Vec<Outcome>
where
    F: Fn(WhitneyParams, &mut TableCache) -> Vec<Outcome> + Sync,
{
    all_params(grid)
        .into_par_iter()
        .map(|p| f(p, &mut TableCache::new(rule)))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn triangle(nmax: i64) -> impl Iterator<Item = (i64, i64)> {
    (0..=nmax).flat_map(|n| (0..=n).map(move |k| (n, k)))
}

/// Set partitions of an `n`-set into `k` blocks, counted by restricted
/// growth strings.
fn set_partitions(n: usize, k: usize) -> BigInt {
    fn go(i: usize, n: usize, blocks: usize, k: usize) -> u64 {
        if blocks > k {
            return 0;
        }
        if i == n {
            return (blocks == k) as u64;
        }
        (0..=blocks).map(|b| go(i + 1, n, blocks.max(b + 1), k)).sum()
    }
    if n == 0 {
        return BigInt::from((k == 0) as u64);
    }
    BigInt::from(go(0, n, 0, k))
}

pub(crate) fn recurrences(grid: &Grid, rule: Rule) -> ReportBuilder {
    let nmax = grid.recurrence_nmax;
    let mut b = ReportBuilder::default();

    b.push(
        "boundary",
        per_params(grid, rule, |p, cache| {
            let t = cache.table(p, nmax as usize);
            (0..=nmax)
                .flat_map(|n| {
                    let col0 = Outcome::compare(
                        "boundary",
                        with(p, json!({"n": n, "k": 0})),
                        &t.get(n, 0),
                        &q_int(p.r()).pow(n as u32),
                    );
                    let diag = Outcome::compare(
                        "boundary",
                        with(p, json!({"n": n, "k": n})),
                        &t.get(n, n),
                        &LaurentPoly::q_pow(p.star_exponent(n)),
                    );
                    [col0, diag]
                })
                .collect()
        }),
    );

    b.push(
        "vertical",
        per_params(grid, rule, |p, cache| {
            let t = cache.table(p, nmax as usize).clone();
            let mut out = Vec::new();
            for k in 0..=nmax {
                let col = vertical_column(p, k, nmax as usize);
                for n in k..=nmax {
                    out.push(Outcome::compare(
                        "vertical",
                        with(p, json!({"n": n, "k": k})),
                        &t.get(n, k),
                        &col[n as usize],
                    ));
                }
            }
            out
        }),
    );

    b.push(
        "horizontal",
        per_params(grid, rule, |p, cache| {
            let t = cache.table(p, nmax as usize + 1);
            triangle(nmax)
                .map(|(n, k)| {
                    let rebuilt = w_horizontal_from_row(p, n, k, |i| t.get(n + 1, i));
                    Outcome::compare("horizontal", with(p, json!({"n": n, "k": k})), &t.get(n, k), &rebuilt)
                })
                .collect()
        }),
    );

    // only meaningful for the Stirling case m = 1, r = 0
    b.push(
        "stirling-variant",
        per_params(grid, rule, |p, cache| {
            if (p.m(), p.r()) != (1, 0) {
                return Vec::new();
            }
            let t = cache.table(p, nmax as usize);
            triangle(nmax)
                .filter(|&(n, k)| n >= 1 && k >= 1)
                .map(|(n, k)| {
                    let rhs = t.get(n - 1, k - 1).shift(k - 1) + &q_int(k) * &t.get(n - 1, k);
                    Outcome::compare("stirling-variant", with(p, json!({"n": n, "k": k})), &t.get(n, k), &rhs)
                })
                .collect()
        }),
    );

    b.push(
        "positivity",
        per_params(grid, rule, |p, cache| {
            let t = cache.table(p, nmax as usize);
            triangle(nmax)
                .map(|(n, k)| {
                    let ok = t.get(n, k).is_nonnegative_polynomial() && t.star(n, k).is_nonnegative_polynomial();
                    Outcome::truth("positivity", with(p, json!({"n": n, "k": k})), ok)
                })
                .collect()
        }),
    );

    let cmax = grid.classical_nmax;
    b.push(
        "classical-recurrence",
        per_params(grid, rule, |p, cache| {
            let t = cache.table(p, cmax as usize);
            triangle(cmax)
                .map(|(n, k)| {
                    Outcome::compare_display(
                        "classical-recurrence",
                        with(p, json!({"n": n, "k": k})),
                        &t.get(n, k).coefficient_sum(),
                        &classical_w_recurrence(p, n, k),
                    )
                })
                .collect()
        }),
    );

    b.push(
        "stirling-set-partitions",
        per_params(grid, rule, |p, cache| {
            if (p.m(), p.r()) != (1, 0) {
                return Vec::new();
            }
            let t = cache.table(p, cmax as usize);
            triangle(cmax)
                .map(|(n, k)| {
                    Outcome::compare_display(
                        "stirling-set-partitions",
                        with(p, json!({"n": n, "k": k})),
                        &t.get(n, k).coefficient_sum(),
                        &set_partitions(n as usize, k as usize),
                    )
                })
                .collect()
        }),
    );
    b
}

pub(crate) fn explicit(grid: &Grid, rule: Rule) -> ReportBuilder {
    let nmax = grid.explicit_nmax;
    let mut b = ReportBuilder::default();

    b.push(
        "explicit-formula",
        per_params(grid, rule, |p, cache| {
            let t = cache.table(p, nmax as usize);
            triangle(nmax)
                .map(|(n, k)| {
                    Outcome::from_result(
                        "explicit-formula",
                        with(p, json!({"n": n, "k": k})),
                        whitney_explicit(p, n, k).map(|e| (t.get(n, k), e)),
                    )
                })
                .collect()
        }),
    );

    b.push(
        "newton-coefficients",
        per_params(grid, rule, |p, cache| {
            let t = cache.table(p, nmax as usize);
            (0..=nmax)
                .map(|n| {
                    let row: Vec<LaurentPoly> = (0..=n).map(|k| t.get(n, k)).collect();
                    Outcome::from_result(
                        "newton-coefficients",
                        with(p, json!({"n": n})),
                        newton_coefficients(p, n as u32, n as u32).map(|c| (row, c)),
                    )
                })
                .collect()
        }),
    );

    let mut cells = Vec::new();
    for &h in &grid.diff_h {
        for &base in &grid.diff_bases {
            for c in -grid.diff_offset_max..=grid.diff_offset_max {
                for n in 0..=grid.diff_power_max {
                    cells.push((h, base, c, n));
                }
            }
        }
    }
    let diff: Vec<Outcome> = cells
        .into_par_iter()
        .flat_map_iter(|(h, base, c, n)| {
            let f = QPowerFunction::new(c, n);
            let xs = grid.diff_x.clone();
            (0..=grid.diff_kmax).flat_map(move |k| {
                xs.clone().into_iter().map(move |x| {
                    Outcome::compare(
                        "q-difference",
                        json!({"h": h, "base": base, "c": c, "n": n, "k": k, "x": x}),
                        &q_diff_recursive(&f, base, h, k, x),
                        &q_diff_explicit(&f, base, h, k, x),
                    )
                })
            })
        })
        .collect();
    b.push("q-difference", diff);

    let cmax = grid.classical_nmax;
    b.push(
        "explicit-at-one",
        per_params(grid, rule, |p, cache| {
            let t = cache.table(p, cmax as usize);
            triangle(cmax)
                .map(|(n, k)| {
                    let (m, r) = (p.m(), p.r());
                    let mut sum = BigInt::zero();
                    let mut binom = BigInt::one();
                    for j in 0..=k {
                        if j > 0 {
                            binom = binom * (k - j + 1) / j;
                        }
                        let term = &binom * BigInt::from(m * j + r).pow(n as u32);
                        if (k - j) % 2 == 0 {
                            sum += term;
                        } else {
                            sum -= term;
                        }
                    }
                    let kfact: BigInt = (1..=k).map(BigInt::from).product();
                    let denom = kfact * BigInt::from(m).pow(k as u32);
                    Outcome::compare_display(
                        "explicit-at-one",
                        with(p, json!({"n": n, "k": k})),
                        &BigRational::from_integer(t.get(n, k).coefficient_sum()),
                        &BigRational::new(sum, denom),
                    )
                })
                .collect()
        }),
    );
    b
}

pub(crate) fn genfun(grid: &Grid, rule: Rule) -> Result<ReportBuilder> {
    let qvals = grid.qvals()?;
    let mut b = ReportBuilder::default();

    let order = grid.rational_gf_nmax as usize;
    b.push(
        "rational-gf",
        per_params(grid, rule, |p, cache| {
            let t = cache.table(p, order);
            let mut out = Vec::new();
            for k in 0..=(grid.gf_kmax as usize).min(order) {
                match rational_gf(p, k, order) {
                    Ok(s) => {
                        for n in 0..=order {
                            let coeff = s.coeff(n).to_laurent();
                            out.push(Outcome::from_result(
                                "rational-gf",
                                with(p, json!({"n": n, "k": k})),
                                coeff.map(|c| (t.get(n as i64, k as i64), c)),
                            ));
                        }
                    }
                    Err(e) => out.push(Outcome::from_result::<LaurentPoly>(
                        "rational-gf",
                        with(p, json!({"k": k})),
                        Err(e),
                    )),
                }
            }
            out
        }),
    );

    let order = grid.egf_nmax as usize;
    b.push(
        "egf",
        per_params(grid, rule, |p, cache| {
            let t = cache.table(p, order);
            let mut out = Vec::new();
            for k in 0..=(grid.gf_kmax as usize).min(order) {
                match egf(p, k, order) {
                    Ok(s) => {
                        for n in 0..=order {
                            let scaled = q_factorial(n as i64)
                                .and_then(|f| s.coeff(n).scale_laurent(&f).to_laurent());
                            out.push(Outcome::from_result(
                                "egf",
                                with(p, json!({"n": n, "k": k})),
                                scaled.map(|c| (t.get(n as i64, k as i64), c)),
                            ));
                        }
                    }
                    Err(e) => {
                        out.push(Outcome::from_result::<LaurentPoly>("egf", with(p, json!({"k": k})), Err(e)))
                    }
                }
            }
            out
        }),
    );

    let hmax = grid.horizontal_nmax;
    b.push(
        "horizontal-gf",
        per_params(grid, rule, |p, cache| {
            let t = cache.table(p, hmax as usize);
            let mut out = Vec::new();
            for n in 0..=hmax {
                for tt in grid.t_min..=grid.t_max {
                    for (qs, q) in grid.qvals.iter().zip(&qvals) {
                        let params = with(p, json!({"n": n, "t": tt, "q": qs}));
                        out.push(match horizontal_gf_sides(t, n, tt, q) {
                            Ok((l, r)) => Outcome::compare_display("horizontal-gf", params, &l, &r),
                            Err(e) => Outcome::from_result::<LaurentPoly>("horizontal-gf", params, Err(e)),
                        });
                    }
                }
            }
            out
        }),
    );

    b.push("horizontal-gf-interpolation", interpolation_cell(grid, rule));

    let cmax = grid.classical_nmax as usize;
    b.push(
        "classical-egf",
        per_params(grid, rule, |p, cache| {
            let t = cache.table(p, cmax);
            let mut out = Vec::new();
            for k in 0..=(grid.gf_kmax as usize).min(cmax) {
                let s = classical_egf(p.m(), p.r(), k as u32, cmax);
                let mut fact = BigInt::one();
                for n in 0..=cmax {
                    if n > 0 {
                        fact *= n;
                    }
                    out.push(Outcome::compare_display(
                        "classical-egf",
                        with(p, json!({"n": n, "k": k})),
                        &BigRational::from_integer(t.get(n as i64, k as i64).coefficient_sum()),
                        &(s.coeff(n) * BigRational::from_integer(fact.clone())),
                    ));
                }
            }
            out
        }),
    );
    Ok(b)
}

/// One cell of the horizontal generating function checked as a polynomial
/// identity: after clearing negative powers, both sides agree at more
/// integer points than the degree of their difference.
fn interpolation_cell(grid: &Grid, rule: Rule) -> Vec<Outcome> {
    let Some(&m) = grid.m.iter().max() else {
        return Vec::new();
    };
    let Some(&r) = grid.r.iter().max() else {
        return Vec::new();
    };
    let p = WhitneyParams::new(m, r).expect("validated grid");
    let n = grid.horizontal_nmax.min(3);
    let t = grid.t_max;
    let table = cache_table(rule, p, n as usize);
    let lhs: LaurentPoly = (0..=n)
        .map(|k| &table.get(n, k) * &q_falling_laurent(t, r, m, k))
        .sum();
    let rhs = q_int(t).pow(n as u32);
    let diff = &lhs - &rhs;
    let span = match (diff.min_exponent(), diff.max_exponent()) {
        (Some(lo), Some(hi)) => hi - lo,
        _ => 0,
    };
    let points = (2 * n * (r + m * n) + 1).max(span + 1);
    let params = with(p, json!({"n": n, "t": t, "points": points}));
    let mut agree = true;
    for x in 1..=points {
        let xq = BigRational::from_integer(BigInt::from(x));
        let sides = horizontal_gf_sides(&table, n, t, &xq);
        match sides {
            Ok((l, r)) if l == r => {}
            Ok(_) => agree = false,
            Err(e) => return vec![Outcome::from_result::<LaurentPoly>("horizontal-gf-interpolation", params, Err(e))],
        }
    }
    vec![Outcome::truth("horizontal-gf-interpolation", params, agree)]
}

fn cache_table(rule: Rule, p: WhitneyParams, nmax: usize) -> crate::whitney::WhitneyTable {
    TableCache::new(rule).table(p, nmax).clone()
}

pub(crate) fn symmetric(grid: &Grid, rule: Rule) -> ReportBuilder {
    let mut b = ReportBuilder::default();
    let nmax = grid.explicit_nmax;
    b.push(
        "complete-homogeneous",
        per_params(grid, rule, |p, cache| {
            let t = cache.table(p, nmax as usize);
            triangle(nmax)
                .map(|(n, k)| {
                    Outcome::compare(
                        "complete-homogeneous",
                        with(p, json!({"n": n, "k": k})),
                        &t.star(n, k),
                        &w_star_symmetric(p, n, k),
                    )
                })
                .collect()
        }),
    );

    let tmax = grid.tableau_nmax;
    b.push(
        "tableau-sum",
        per_params(grid, rule, |p, cache| {
            let t = cache.table(p, tmax as usize);
            triangle(tmax)
                .map(|(n, k)| {
                    Outcome::from_result(
                        "tableau-sum",
                        with(p, json!({"n": n, "k": k})),
                        tableau_sum(p, n, k).map(|s| (t.star(n, k), s)),
                    )
                })
                .collect()
        }),
    );

    b.push(
        "tableau-count",
        triangle(tmax)
            .map(|(n, k)| {
                let enumerated = tableaux(k, (n - k) as usize).count() as u128;
                Outcome::compare("tableau-count", json!({"n": n, "k": k}), &enumerated, &tableau_count(n, k))
            })
            .collect(),
    );

    b.push(
        "shifted-complete-homogeneous",
        per_params(grid, rule, |p, cache| {
            let mut out = Vec::new();
            for shift in 0..=3 {
                for s in 0..=6 {
                    for t in shift..=(s + shift) {
                        out.push(Outcome::compare(
                            "shifted-complete-homogeneous",
                            with(p, json!({"shift": shift, "s": s, "t": t})),
                            &cache.star(p.shifted(shift), s, t - shift),
                            &shifted_w_star_symmetric(p, shift, s, t),
                        ));
                    }
                }
            }
            out
        }),
    );
    b
}

pub(crate) fn convolution(grid: &Grid, rule: Rule) -> ReportBuilder {
    let mut b = ReportBuilder::default();
    let nmax = grid.convolution_nmax;
    b.push(
        "first-convolution",
        per_params(grid, rule, |p, cache| {
            let mut out = Vec::new();
            for n in 0..=nmax {
                for l in 0..=n {
                    for j in 0..=(n - l) {
                        let (lhs, rhs) = convolution_first_sides(cache, p, n, l, j);
                        out.push(Outcome::compare(
                            "first-convolution",
                            with(p, json!({"n": n, "l": l, "j": j})),
                            &lhs,
                            &rhs,
                        ));
                    }
                }
            }
            out
        }),
    );

    let spmax = grid.convolution_sp_max;
    b.push(
        "second-convolution",
        per_params(grid, rule, |p, cache| {
            let mut out = Vec::new();
            for s in 0..=spmax {
                for q in 0..=spmax {
                    for t in 0..=(s + q) {
                        let (lhs, rhs) = convolution_second_sides(cache, p, s, q, t);
                        out.push(Outcome::compare(
                            "second-convolution",
                            with(p, json!({"s": s, "p": q, "t": t})),
                            &lhs,
                            &rhs,
                        ));
                    }
                }
            }
            out
        }),
    );
    b
}

pub(crate) fn hankel(grid: &Grid, rule: Rule) -> ReportBuilder {
    let specs = |p: WhitneyParams| {
        (0..=grid.hankel_smax)
            .flat_map(move |s| (0..=grid.hankel_nmax).map(move |n| HankelSpec::new(p, s, n).expect("valid spec")))
    };
    let cell = |spec: &HankelSpec| with(spec.params, json!({"s": spec.s, "n": spec.n}));
    let mut b = ReportBuilder::default();

    b.push(
        "determinant",
        per_params(grid, rule, |p, cache| {
            specs(p)
                .map(|spec| Outcome::from_result("determinant", cell(&spec), hankel_sides(cache, &spec)))
                .collect()
        }),
    );

    let lu = per_params(grid, rule, |p, cache| {
        specs(p)
            .flat_map(|spec| match lu_report(cache, &spec) {
                Ok(rep) => vec![
                    Outcome::truth("lu-product", cell(&spec), rep.product_matches),
                    Outcome::truth("lu-determinant", cell(&spec), rep.determinant_matches),
                    Outcome::truth("lu-diagonal", cell(&spec), rep.diagonal_matches),
                ],
                Err(e) => vec![Outcome::from_result::<LaurentPoly>("lu", cell(&spec), Err(e))],
            })
            .collect()
    });
    b.push("lu-factorization", lu);

    b.push(
        "bareiss-vs-cofactor",
        per_params(grid, rule, |p, cache| {
            specs(p)
                .map(|spec| {
                    let mat = hankel_matrix_with(cache, &spec);
                    Outcome::from_result(
                        "bareiss-vs-cofactor",
                        cell(&spec),
                        det_exact(&mat).map(|d| (d, det_cofactor(&mat))),
                    )
                })
                .collect()
        }),
    );

    b.push(
        "classical-determinant",
        per_params(grid, rule, |p, cache| {
            specs(p)
                .map(|spec| {
                    let (det, closed) = classical_hankel_sides(cache, &spec);
                    Outcome::compare_display("classical-determinant", cell(&spec), &det, &closed)
                })
                .collect()
        }),
    );
    b
}

/// A fixed, irregular test sequence of Laurent polynomials.
fn sample_sequence(len: usize, seed: i64) -> Vec<LaurentPoly> {
    (0..len as i64)
        .map(|i| {
            let terms = (0..3).map(|j| {
                let c = ((i * 7 + j * 5 + seed * 3) % 11) - 5;
                (j - 1 + (i + seed) % 3, BigInt::from(c))
            });
            LaurentPoly::from_terms(terms)
        })
        .collect()
}

pub(crate) fn qbinomial(grid: &Grid) -> ReportBuilder {
    let mut b = ReportBuilder::default();
    let nmax = grid.inversion_nmax;

    let mut roundtrip = Vec::new();
    for seed in 0..4 {
        for n in 0..=nmax {
            let g = sample_sequence(n + 1, seed);
            let f = q_binomial_transform(&g);
            let cell = json!({"seed": seed, "n": n});
            roundtrip.push(Outcome::from_result(
                "inversion-roundtrip",
                cell.clone(),
                q_binomial_inverse(&f, n).map(|back| (back, g.clone())),
            ));
            let back = q_binomial_inverse(&g, n).map(|gi| (q_binomial_transform(&gi), g.clone()));
            roundtrip.push(Outcome::from_result("inversion-roundtrip", cell, back));
        }
    }
    b.push("inversion-roundtrip", roundtrip);

    // g_k = q^C(k,2) has transform f_n = prod_{i<n} (1 + q^i)
    let g: Vec<LaurentPoly> = (0..=nmax as i64).map(|k| LaurentPoly::q_pow(k * (k - 1) / 2)).collect();
    let f = q_binomial_transform(&g);
    b.push(
        "inversion-known-pair",
        (0..=nmax)
            .map(|n| {
                let expected: LaurentPoly =
                    (0..n as i64).map(|i| LaurentPoly::one() + LaurentPoly::q_pow(i)).product();
                Outcome::compare("inversion-known-pair", json!({"n": n}), &f[n], &expected)
            })
            .collect(),
    );

    b.push(
        "gauss-product",
        (0..=grid.gauss_nmax)
            .map(|n| Outcome::compare("gauss-product", json!({"n": n}), &gauss_product_lhs(n), &gauss_product_rhs(n)))
            .collect(),
    );

    b.push(
        "q-pascal",
        (1..=grid.gauss_nmax)
            .flat_map(|n| (1..n).map(move |k| (n, k)))
            .map(|(n, k)| {
                let lhs = q_binomial(n, k, 1).expect("valid range");
                let rhs = q_binomial(n - 1, k - 1, 1).expect("valid range")
                    + q_binomial(n - 1, k, 1).expect("valid range").shift(k);
                Outcome::compare("q-pascal", json!({"n": n, "k": k}), &lhs, &rhs)
            })
            .collect(),
    );
    b
}
