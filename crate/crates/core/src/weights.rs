//! Weight configurations `ϖ_1, …, ϖ_n ∈ (ℝ^r)^*` describing a diagonal action
//! of `ℝ^r` on `ℝ^n`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::Rat;

/// The morphism `α : ℝ^r → Diag(ℝ^n)` as an `n × r` matrix whose rows are the
/// weights. Every row is nonzero (minimal `n`).
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawConfig")]
pub struct WeightConfig {
    r: usize,
    n: usize,
    weights: Vec<Vec<Rat>>,
}

#[derive(Deserialize)]
struct RawConfig {
    r: usize,
    n: usize,
    weights: Vec<Vec<Rat>>,
}

impl TryFrom<RawConfig> for WeightConfig {
    type Error = Error;
    fn try_from(raw: RawConfig) -> Result<WeightConfig> {
        WeightConfig::new(raw.r, raw.n, raw.weights)
    }
}

impl WeightConfig {
    pub fn new(r: usize, n: usize, weights: Vec<Vec<Rat>>) -> Result<WeightConfig> {
        if r == 0 || n == 0 {
            return Err(Error::Domain(format!("need r, n >= 1 (got r={r}, n={n})")));
        }
        if weights.len() != n {
            return Err(Error::Domain(format!(
                "expected {n} weight rows, found {}",
                weights.len()
            )));
        }
        for (i, row) in weights.iter().enumerate() {
            if row.len() != r {
                return Err(Error::Domain(format!(
                    "weight {} has {} entries, expected r={r}",
                    i + 1,
                    row.len()
                )));
            }
            if row.iter().all(Rat::is_zero) {
                return Err(Error::Domain(format!(
                    "weight {} is zero; every weight must be nonzero",
                    i + 1
                )));
            }
        }
        Ok(WeightConfig { r, n, weights })
    }

    /// Convenience constructor from integer rows.
    pub fn from_ints(rows: &[&[i64]]) -> Result<WeightConfig> {
        let r = rows.first().map_or(0, |row| row.len());
        let weights = rows
            .iter()
            .map(|row| row.iter().map(|&v| Rat::int(v)).collect())
            .collect();
        WeightConfig::new(r, rows.len(), weights)
    }

    pub fn from_json(text: &str) -> Result<WeightConfig> {
        serde_json::from_str(text).map_err(|e| {
            let msg = e.to_string();
            Error::Parse(
                msg.strip_prefix("parse error: ")
                    .unwrap_or(&msg)
                    .to_string(),
            )
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[Vec<Rat>] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &[Rat] {
        &self.weights[i]
    }

    /// `ϖ_i(U)`.
    pub fn eval(&self, i: usize, u: &[Rat]) -> Rat {
        linalg::dot(&self.weights[i], u)
    }

    pub fn matrix(&self) -> Matrix {
        Matrix::from_rows(&self.weights, self.r)
    }

    pub fn rank(&self) -> usize {
        self.matrix().rank()
    }

    /// Precomposition by `g ∈ GL_r`: row `ϖ_i` becomes `ϖ_i ∘ g`.
    pub fn precompose(&self, g: &Matrix) -> Result<WeightConfig> {
        if g.rows() != self.r || g.cols() != self.r {
            return Err(Error::Domain(
                "precomposition matrix has wrong shape".into(),
            ));
        }
        let rows = self.matrix().mul(g);
        let weights = (0..self.n).map(|i| rows.row(i).to_vec()).collect();
        WeightConfig::new(self.r, self.n, weights)
    }

    pub fn permute(&self, perm: &[usize]) -> Result<WeightConfig> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n
            || perm
                .iter()
                .any(|&i| i >= self.n || std::mem::replace(&mut seen[i], true))
        {
            return Err(Error::Domain("not a permutation".into()));
        }
        let weights = perm.iter().map(|&i| self.weights[i].clone()).collect();
        WeightConfig::new(self.r, self.n, weights)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

impl fmt::Debug for WeightConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "WeightConfig(r={}, n={}, {:?})",
            self.r, self.n, self.weights
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_input_schema() {
        let cfg = WeightConfig::from_json(
            r#"{"r":2,"n":3,"weights":[["-1","1"],["-1","0"],["-1","-1"]]}"#,
        )
        .unwrap();
        assert_eq!(cfg.r(), 2);
        assert_eq!(cfg.n(), 3);
        assert_eq!(cfg.weight(2), &[Rat::int(-1), Rat::int(-1)]);
    }

    #[test]
    fn rejects_zero_weight_and_bad_shapes() {
        let zero = WeightConfig::from_json(r#"{"r":2,"n":2,"weights":[["0","0"],["1","0"]]}"#);
        assert!(matches!(zero, Err(Error::Parse(msg)) if msg.contains("nonzero")));
        assert!(WeightConfig::from_json(r#"{"r":2,"n":3,"weights":[["1","0"]]}"#).is_err());
        assert!(WeightConfig::from_json(r#"{"r":1,"n":1,"weights":[["1/0"]]}"#).is_err());
    }

    #[test]
    fn precompose_and_permute() {
        let cfg = WeightConfig::from_ints(&[&[-1, 1], &[-1, 0], &[-1, -1]]).unwrap();
        let g = Matrix::from_rows(
            &[
                vec![Rat::int(2), Rat::int(1)],
                vec![Rat::zero(), Rat::int(1)],
            ],
            2,
        );
        let h = cfg.precompose(&g).unwrap();
        assert_eq!(h.weight(0), &[Rat::int(-2), Rat::int(0)]);
        let p = cfg.permute(&[2, 0, 1]).unwrap();
        assert_eq!(p.weight(0), cfg.weight(2));
        assert!(cfg.permute(&[0, 0, 1]).is_err());
    }
}
