//! Eigenvalue profiles of `-δ` and the threshold bookkeeping `w_k`, `W_k`,
//! `h/w_k`, `h/W_k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{Rat, XRat};

/// Real parts `0 ≤ λ_1 ≤ … ≤ λ_n` of the eigenvalues of `-δ`, with
/// `h = Σ λ_i > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawProfile")]
pub struct EigProfile {
    lambdas: Vec<Rat>,
    h: Rat,
}

#[derive(Deserialize)]
struct RawProfile {
    lambdas: Vec<Rat>,
}

impl TryFrom<RawProfile> for EigProfile {
    type Error = Error;
    fn try_from(raw: RawProfile) -> Result<EigProfile> {
        EigProfile::new(raw.lambdas)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threshold {
    /// `h / w_k`
    OverSmallest,
    /// `h / W_k`
    OverLargest,
}

impl EigProfile {
    /// Sorts the input; rejects negative entries and a nonpositive trace.
    pub fn new(mut lambdas: Vec<Rat>) -> Result<EigProfile> {
        if lambdas.is_empty() {
            return Err(Error::Domain("empty eigenvalue profile".into()));
        }
        if let Some(neg) = lambdas.iter().find(|l| l.is_negative()) {
            return Err(Error::Domain(format!(
                "eigenvalue real part {neg} of -delta is negative"
            )));
        }
        lambdas.sort();
        let h: Rat = lambdas.iter().sum();
        if !h.is_positive() {
            return Err(Error::Domain("trace h must be positive".into()));
        }
        Ok(EigProfile { lambdas, h })
    }

    pub fn from_ints(values: &[i64]) -> Result<EigProfile> {
        EigProfile::new(values.iter().map(|&v| Rat::int(v)).collect())
    }

    /// Constant profile `(1, …, 1)` of length `n` (real hyperbolic case).
    pub fn constant(n: usize) -> EigProfile {
        EigProfile::new(vec![Rat::one(); n]).expect("n >= 1")
    }

    /// `(1, …, 1, 2)` with `2m - 2` ones (complex hyperbolic case).
    pub fn heisenberg(m: usize) -> EigProfile {
        let mut l = vec![Rat::one(); 2 * m - 2];
        l.push(Rat::int(2));
        EigProfile::new(l).expect("m >= 1")
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[Rat] {
        &self.lambdas
    }

    pub fn h(&self) -> &Rat {
        &self.h
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k > self.n() {
            Err(Error::Domain(format!(
                "k={k} out of range 0..={}",
                self.n()
            )))
        } else {
            Ok(())
        }
    }

    /// Sum of the `k` smallest eigenvalues.
    pub fn w(&self, k: usize) -> Result<Rat> {
        self.check_k(k)?;
        Ok(self.lambdas[..k].iter().sum())
    }

    /// Sum of the `k` largest eigenvalues.
    #[allow(non_snake_case)]
    pub fn W(&self, k: usize) -> Result<Rat> {
        self.check_k(k)?;
        Ok(self.lambdas[self.n() - k..].iter().sum())
    }

    pub fn threshold(&self, which: Threshold, k: usize) -> Result<XRat> {
        let denom = match which {
            Threshold::OverSmallest => self.w(k)?,
            Threshold::OverLargest => self.W(k)?,
        };
        XRat::quotient(&self.h, &denom)
    }

    /// `h / w_k`
    pub fn h_over_w(&self, k: usize) -> Result<XRat> {
        self.threshold(Threshold::OverSmallest, k)
    }

    /// `h / W_k`
    #[allow(non_snake_case)]
    pub fn h_over_W(&self, k: usize) -> Result<XRat> {
        self.threshold(Threshold::OverLargest, k)
    }
}
