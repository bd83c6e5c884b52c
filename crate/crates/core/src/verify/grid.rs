use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{parse_rational, BigRational};

/// Parameter grid for every identity suite. Missing JSON fields take the
/// defaults below.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grid {
    pub m: Vec<i64>,
    pub r: Vec<i64>,
    /// Recurrence routes: `0 <= k <= n <= recurrence_nmax`.
    pub recurrence_nmax: i64,
    /// Explicit formula and symmetric-function route.
    pub explicit_nmax: i64,
    pub tableau_nmax: i64,
    pub classical_nmax: i64,
    pub gf_kmax: i64,
    pub rational_gf_nmax: i64,
    pub egf_nmax: i64,
    pub horizontal_nmax: i64,
    pub t_min: i64,
    pub t_max: i64,
    pub qvals: Vec<String>,
    pub diff_kmax: u32,
    pub diff_h: Vec<i64>,
    pub diff_bases: Vec<i64>,
    pub diff_offset_max: i64,
    pub diff_power_max: u32,
    pub diff_x: Vec<i64>,
    pub convolution_nmax: i64,
    pub convolution_sp_max: i64,
    pub hankel_smax: i64,
    pub hankel_nmax: i64,
    pub inversion_nmax: usize,
    pub gauss_nmax: i64,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            m: vec![1, 2, 3],
            r: vec![0, 1, 2],
            recurrence_nmax: 10,
            explicit_nmax: 9,
            tableau_nmax: 8,
            classical_nmax: 8,
            gf_kmax: 5,
            rational_gf_nmax: 12,
            egf_nmax: 10,
            horizontal_nmax: 8,
            t_min: -3,
            t_max: 12,
            qvals: ["2", "1/2", "3/5", "-2"].map(String::from).to_vec(),
            diff_kmax: 6,
            diff_h: vec![1, 2, 3],
            diff_bases: vec![1, 2, 3],
            diff_offset_max: 3,
            diff_power_max: 4,
            diff_x: (-2..=2).collect(),
            convolution_nmax: 6,
            convolution_sp_max: 5,
            hankel_smax: 3,
            hankel_nmax: 4,
            inversion_nmax: 8,
            gauss_nmax: 10,
        }
    }
}

impl Grid {
    pub fn from_json(text: &str) -> Result<Self> {
        let grid: Grid = serde_json::from_str(text)
            .map_err(|e| Error::InvalidParameter(format!("bad grid config: {e}")))?;
        grid.validate()?;
        Ok(grid)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidParameter(format!("cannot read grid {}: {e}", path.display()))
        })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.into()));
        if self.m.iter().any(|&m| m < 1) {
            return bad("m must be ≥ 1");
        }
        if self.r.iter().any(|&r| r < 0) {
            return bad("r must be ≥ 0");
        }
        let bounds = [
            self.recurrence_nmax,
            self.explicit_nmax,
            self.tableau_nmax,
            self.classical_nmax,
            self.gf_kmax,
            self.rational_gf_nmax,
            self.egf_nmax,
            self.horizontal_nmax,
            self.convolution_nmax,
            self.convolution_sp_max,
            self.hankel_smax,
            self.hankel_nmax,
            self.gauss_nmax,
        ];
        if bounds.iter().any(|&b| b < 0) {
            return bad("grid bounds must be ≥ 0");
        }
        if self.t_min > self.t_max {
            return bad("t_min must not exceed t_max");
        }
        if self.diff_h.iter().any(|&h| h < 1) || self.diff_bases.iter().any(|&b| b < 1) {
            return bad("difference steps and base exponents must be ≥ 1");
        }
        for q in self.qvals()? {
            if num_traits::Zero::is_zero(&q) {
                return bad("qvals must be nonzero");
            }
        }
        Ok(())
    }

    pub fn qvals(&self) -> Result<Vec<BigRational>> {
        self.qvals.iter().map(|s| parse_rational(s)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_config_keeps_defaults() {
        let g = Grid::from_json(r#"{"m":[2],"qvals":["7/3"]}"#).unwrap();
        assert_eq!(g.m, vec![2]);
        assert_eq!(g.r, vec![0, 1, 2]);
        assert_eq!(g.qvals().unwrap()[0], parse_rational("7/3").unwrap());
    }

    #[test]
    fn invalid_configs_rejected() {
        assert!(Grid::from_json(r#"{"m":[0]}"#).is_err());
        assert!(Grid::from_json(r#"{"qvals":["0"]}"#).is_err());
        assert!(Grid::from_json(r#"{"qvals":["a/b"]}"#).is_err());
        assert!(Grid::from_json(r#"{"bogus":1}"#).is_err());
        assert!(Grid::from_json("not json").is_err());
    }
}
