//! Identity suites: every computation route checked against the others over a
//! parameter [`Grid`].
//!
//! Values of `W` always come from tables built under the caller's [`Rule`];
//! the closed forms they are compared with never do. Running a suite with
//! [`Rule::PerturbedDiagonal`] therefore has to fail.

mod grid;
mod suites;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

pub use grid::Grid;

use crate::error::{Error, Result};
use crate::whitney::Rule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Recurrences,
    Explicit,
    Genfun,
    Symmetric,
    Convolution,
    Hankel,
    QBinomial,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Recurrences,
        Suite::Explicit,
        Suite::Genfun,
        Suite::Symmetric,
        Suite::Convolution,
        Suite::Hankel,
        Suite::QBinomial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Recurrences => "recurrences",
            Suite::Explicit => "explicit",
            Suite::Genfun => "genfun",
            Suite::Symmetric => "symmetric",
            Suite::Convolution => "convolution",
            Suite::Hankel => "hankel",
            Suite::QBinomial => "qbinomial",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A suite selector as given on the command line; `all` expands to every
/// suite.
pub fn parse_selector(s: &str) -> Result<Vec<Suite>> {
    if s == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    Suite::from_str(s).map(|suite| vec![suite])
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                Error::InvalidParameter(format!(
                    "unknown suite {s:?}; expected one of {}, all",
                    names.join(", ")
                ))
            })
    }
}

/// One failed cell: the parameter tuple and both sides of the identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub params: Value,
    pub identity: String,
    pub lhs: Value,
    pub rhs: Value,
}

/// Pass/fail counts for a single identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityTally {
    pub identity: String,
    pub cells: usize,
    pub failed: usize,
}

impl IdentityTally {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cells: usize,
    pub identities: Vec<IdentityTally>,
    /// At most [`MAX_RECORDED_FAILURES`] witnesses per identity.
    pub failures: Vec<Failure>,
}

pub const MAX_RECORDED_FAILURES: usize = 5;

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.identities.iter().all(IdentityTally::passed)
    }

    pub fn failed_cells(&self) -> usize {
        self.identities.iter().map(|t| t.failed).sum()
    }

    pub fn tally(&self, identity: &str) -> Option<&IdentityTally> {
        self.identities.iter().find(|t| t.identity == identity)
    }
}

/// Outcome of checking one cell of one identity.
pub(crate) struct Outcome {
    ok: bool,
    failure: Option<Failure>,
}

impl Outcome {
    pub(crate) fn compare<T: Serialize + PartialEq>(identity: &str, params: Value, lhs: &T, rhs: &T) -> Self {
        if lhs == rhs {
            return Outcome { ok: true, failure: None };
        }
        Outcome {
            ok: false,
            failure: Some(Failure {
                params,
                identity: identity.to_string(),
                lhs: serde_json::to_value(lhs).unwrap_or(Value::Null),
                rhs: serde_json::to_value(rhs).unwrap_or(Value::Null),
            }),
        }
    }

    pub(crate) fn from_result<T: Serialize + PartialEq>(
        identity: &str,
        params: Value,
        sides: Result<(T, T)>,
    ) -> Self {
        match sides {
            Ok((lhs, rhs)) => Self::compare(identity, params, &lhs, &rhs),
            Err(e) => Outcome {
                ok: false,
                failure: Some(Failure {
                    params,
                    identity: identity.to_string(),
                    lhs: Value::String(format!("error: {e}")),
                    rhs: Value::Null,
                }),
            },
        }
    }

    /// Like [`Outcome::compare`] for values without a JSON form; mismatches
    /// are recorded as display strings.
    pub(crate) fn compare_display<T: PartialEq + fmt::Display>(
        identity: &str,
        params: Value,
        lhs: &T,
        rhs: &T,
    ) -> Self {
        if lhs == rhs {
            return Outcome { ok: true, failure: None };
        }
        Outcome {
            ok: false,
            failure: Some(Failure {
                params,
                identity: identity.to_string(),
                lhs: Value::String(lhs.to_string()),
                rhs: Value::String(rhs.to_string()),
            }),
        }
    }

    pub(crate) fn truth(identity: &str, params: Value, ok: bool) -> Self {
        Self::compare(identity, params, &ok, &true)
    }
}

/// Collects outcomes identity by identity, in a fixed order.
#[derive(Default)]
pub(crate) struct ReportBuilder {
    identities: Vec<IdentityTally>,
    failures: Vec<Failure>,
}

impl ReportBuilder {
    pub(crate) fn push(&mut self, identity: &str, outcomes: Vec<Outcome>) {
        let cells = outcomes.len();
        let mut failed = 0;
        let mut recorded = 0;
        for o in outcomes {
            if !o.ok {
                failed += 1;
                if recorded < MAX_RECORDED_FAILURES {
                    if let Some(f) = o.failure {
                        self.failures.push(f);
                        recorded += 1;
                    }
                }
            }
        }
        self.identities.push(IdentityTally {
            identity: identity.to_string(),
            cells,
            failed,
        });
    }

    pub(crate) fn finish(self, suite: Suite) -> SuiteReport {
        SuiteReport {
            suite: suite.name().to_string(),
            cells: self.identities.iter().map(|t| t.cells).sum(),
            identities: self.identities,
            failures: self.failures,
        }
    }
}

pub fn run_suite(suite: Suite, grid: &Grid, rule: Rule) -> Result<SuiteReport> {
    grid.validate()?;
    let report = match suite {
        Suite::Recurrences => suites::recurrences(grid, rule),
        Suite::Explicit => suites::explicit(grid, rule),
        Suite::Genfun => suites::genfun(grid, rule)?,
        Suite::Symmetric => suites::symmetric(grid, rule),
        Suite::Convolution => suites::convolution(grid, rule),
        Suite::Hankel => suites::hankel(grid, rule),
        Suite::QBinomial => suites::qbinomial(grid),
    };
    Ok(report.finish(suite))
}

pub fn run_suites(suites: &[Suite], grid: &Grid, rule: Rule) -> Result<Vec<SuiteReport>> {
    suites.iter().map(|&s| run_suite(s, grid, rule)).collect()
}

/// Human-readable report, one line per identity.
pub fn render_text(reports: &[SuiteReport]) -> String {
    let mut out = String::new();
    for report in reports {
        for t in &report.identities {
            let status = if t.passed() { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{status} {}/{}: {} cells, {} failed\n",
                report.suite,
                t.identity,
                t.cells,
                t.failed
            ));
        }
        for f in &report.failures {
            out.push_str(&format!(
                "  witness {} {}: lhs={} rhs={}\n",
                f.identity, f.params, f.lhs, f.rhs
            ));
        }
    }
    let failed: Vec<_> = reports.iter().filter(|r| !r.passed()).map(|r| r.suite.as_str()).collect();
    if failed.is_empty() {
        out.push_str("all identities PASS\n");
    } else {
        out.push_str(&format!("FAILED suites: {}\n", failed.join(", ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selectors() {
        assert_eq!(parse_selector("all").unwrap().len(), Suite::ALL.len());
        assert_eq!(parse_selector("hankel").unwrap(), vec![Suite::Hankel]);
        assert!(parse_selector("bogus").is_err());
    }

    #[test]
    fn small_grid_passes_and_mutation_fails() {
        let grid = Grid {
            m: vec![1, 2],
            r: vec![0, 1],
            recurrence_nmax: 5,
            explicit_nmax: 5,
            tableau_nmax: 5,
            classical_nmax: 5,
            gf_kmax: 3,
            rational_gf_nmax: 6,
            egf_nmax: 5,
            horizontal_nmax: 4,
            t_min: -2,
            t_max: 4,
            diff_kmax: 3,
            convolution_nmax: 3,
            convolution_sp_max: 3,
            hankel_smax: 1,
            hankel_nmax: 2,
            inversion_nmax: 4,
            gauss_nmax: 4,
            ..Grid::default()
        };
        for suite in Suite::ALL {
            let ok = run_suite(suite, &grid, Rule::Standard).unwrap();
            assert!(ok.passed(), "{}", render_text(&[ok]));
        }
        for suite in [Suite::Recurrences, Suite::Explicit, Suite::Genfun, Suite::Symmetric, Suite::Hankel] {
            let bad = run_suite(suite, &grid, Rule::PerturbedDiagonal).unwrap();
            assert!(!bad.passed(), "suite {suite} missed the perturbation");
            assert!(!bad.failures.is_empty());
        }
    }
}
