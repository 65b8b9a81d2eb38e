//! Straight configurations in `ℝ² ⋉ ℝ³`: three weights spanning `(ℝ²)^*` on
//! an affine line that misses the origin. Canonical form `(μ₁, μ₂, μ₃)` and
//! the critical exponent `p_α`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rat;
use crate::weights::WeightConfig;

/// Canonical triple with `Σμ = 0`, `0 ≤ μ₂−μ₃ ≤ μ₁−μ₂ = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CanonicalMu {
    pub mu: [Rat; 3],
    pub p_alpha: Rat,
}

impl CanonicalMu {
    /// Normalizes any triple that is not constant: re-centres, orders and
    /// rescales it. Equivalent to canonicalizing [`config_from_mu`].
    pub fn from_pattern(mu: [Rat; 3]) -> Result<CanonicalMu> {
        let mean: Rat = mu.iter().sum::<Rat>() / Rat::int(3);
        let t: Vec<Rat> = mu.iter().map(|m| m - &mean).collect();
        normalize(t)
    }

    pub fn mu1(&self) -> &Rat {
        &self.mu[0]
    }

    pub fn mu2(&self) -> &Rat {
        &self.mu[1]
    }

    pub fn mu3(&self) -> &Rat {
        &self.mu[2]
    }
}

fn normalize(mut t: Vec<Rat>) -> Result<CanonicalMu> {
    t.sort_by(|a, b| b.cmp(a));
    let ordered = |t: &[Rat]| {
        let (g1, g2) = (&t[0] - &t[1], &t[1] - &t[2]);
        !g2.is_negative() && g2 <= g1
    };
    if !ordered(&t) {
        t = t.iter().rev().map(|x| -x).collect();
    }
    debug_assert!(ordered(&t));
    let gap = &t[0] - &t[1];
    if gap.is_zero() {
        return Err(Error::Contract(
            "weights do not span a line (all coincide)".into(),
        ));
    }
    let mu: Vec<Rat> = t.iter().map(|x| x / &gap).collect();
    let p_alpha = Rat::one() + (&mu[0] - &mu[2]) / (&mu[0] - &mu[1]);
    let [a, b, c]: [Rat; 3] = mu.try_into().expect("three entries");
    Ok(CanonicalMu {
        mu: [a, b, c],
        p_alpha,
    })
}

fn check_shape(cfg: &WeightConfig) -> Result<()> {
    if cfg.r() != 2 || cfg.n() != 3 {
        return Err(Error::Domain(format!(
            "straight configurations need (r, n) = (2, 3), got ({}, {})",
            cfg.r(),
            cfg.n()
        )));
    }
    Ok(())
}

fn det2(a: &[Rat], b: &[Rat]) -> Rat {
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn is_straight(cfg: &WeightConfig) -> Result<bool> {
    check_shape(cfg)?;
    if cfg.rank() < 2 {
        return Ok(false);
    }
    let w = cfg.weights();
    let (d2, d3) = (sub(&w[1], &w[0]), sub(&w[2], &w[0]));
    if !det2(&d2, &d3).is_zero() {
        return Ok(false);
    }
    let d = if d2.iter().any(|x| !x.is_zero()) {
        d2
    } else {
        d3
    };
    // The line ϖ₁ + ℝd meets 0 iff ϖ₁ ∥ d.
    Ok(!det2(&w[0], &d).is_zero())
}

pub fn canonicalize(cfg: &WeightConfig) -> Result<CanonicalMu> {
    if !is_straight(cfg)? {
        return Err(Error::Contract(
            "configuration is not straight (weights must span and lie on an affine line missing 0)"
                .into(),
        ));
    }
    let w = cfg.weights();
    let three = Rat::int(3);
    let centroid: Vec<Rat> = (0..2)
        .map(|j| w.iter().map(|row| &row[j]).sum::<Rat>() / &three)
        .collect();
    let d = [sub(&w[1], &w[0]), sub(&w[2], &w[0])]
        .into_iter()
        .find(|v| v.iter().any(|x| !x.is_zero()))
        .expect("spanning weights are not all equal");
    let j = if d[0].is_zero() { 1 } else { 0 };
    let t = w
        .iter()
        .map(|row| (&row[j] - &centroid[j]) / &d[j])
        .collect();
    normalize(t)
}

pub fn p_alpha(cfg: &WeightConfig) -> Result<Rat> {
    Ok(canonicalize(cfg)?.p_alpha)
}

pub fn same_isomorphism_class(a: &WeightConfig, b: &WeightConfig) -> Result<bool> {
    Ok(canonicalize(a)? == canonicalize(b)?)
}

/// Within the straight family, quasi-isometry coincides with isomorphism.
pub fn quasi_isometric(a: &WeightConfig, b: &WeightConfig) -> Result<bool> {
    same_isomorphism_class(a, b)
}

/// Weights `ϖ_i = −ε₁* + μ_i ε₂*`, i.e. `α(t, s) = exp(−t I₃ + s D_μ)`.
pub fn config_from_mu(mu: &[Rat; 3]) -> WeightConfig {
    let rows = mu.iter().map(|m| vec![-Rat::one(), m.clone()]).collect();
    WeightConfig::new(2, 3, rows).expect("first coordinate is nonzero")
}
