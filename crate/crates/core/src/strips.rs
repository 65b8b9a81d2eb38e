//! Strip classification of `L^p`-cohomology for `G = ℝ ⋉_δ H` from the
//! eigenvalue profile of `−δ`, and the closed-form tables for real and
//! complex hyperbolic spaces, the straight family and `SL₃(ℝ)/SO₃(ℝ)`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Flag, PuncturedIntervalSet, Status};
use crate::profile::EigProfile;
use crate::rational::{dual_pair, Rat, XRat};
use crate::straight::{canonicalize, CanonicalMu};
use crate::weights::WeightConfig;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualPair {
    pub q: Rat,
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripFlags {
    pub vanishes: bool,
    pub hausdorff_iso_z: bool,
    pub boundary_density: bool,
    pub torsion_nonzero: bool,
    pub dual: DualPair,
    /// The strict inequality behind each raised flag.
    pub reasons: Vec<String>,
}

impl StripFlags {
    pub fn status(&self) -> Status {
        if self.vanishes {
            Status::Zero
        } else if self.hausdorff_iso_z {
            Status::HausdorffOnly
        } else {
            Status::Unknown
        }
    }

    pub fn flag_set(&self) -> BTreeSet<Flag> {
        let mut flags = BTreeSet::new();
        if self.hausdorff_iso_z {
            flags.insert(Flag::Hausdorff);
        }
        if self.boundary_density {
            flags.insert(Flag::Density);
        }
        if self.torsion_nonzero {
            flags.insert(Flag::Torsion);
        }
        flags
    }
}

/// `lo < p < hi` with extended-rational bounds.
fn between(lo: &XRat, p: &Rat, hi: &XRat) -> bool {
    lo.lt_rat(p) && hi.gt_rat(p)
}

fn check_degree(profile: &EigProfile, k: usize) -> Result<()> {
    if k == 0 || k > profile.n() {
        return Err(Error::Domain(format!(
            "degree k={k} out of range 1..={}",
            profile.n()
        )));
    }
    Ok(())
}

/// Flags at `(p, k)`. `abelian` asserts `H ≅ ℝ^n`, which enables the torsion
/// flag.
pub fn classify(profile: &EigProfile, k: usize, p: &Rat, abelian: bool) -> Result<StripFlags> {
    check_degree(profile, k)?;
    if *p <= Rat::one() {
        return Err(Error::Domain(format!("exponent p={p} must exceed 1")));
    }
    let (big_k, big_km1) = (profile.h_over_W(k)?, profile.h_over_W(k - 1)?);
    let (small_k, small_km1) = (profile.h_over_w(k)?, profile.h_over_w(k - 1)?);
    let mut reasons = Vec::new();

    let below = big_k.gt_rat(p);
    let above = small_km1.lt_rat(p);
    if below {
        reasons.push(format!("vanishes: p < h/W_k = {big_k}"));
    }
    if above {
        reasons.push(format!("vanishes: p > h/w_(k-1) = {small_km1}"));
    }
    let hausdorff = between(&big_k, p, &big_km1);
    if hausdorff {
        reasons.push(format!(
            "hausdorff: h/W_k = {big_k} < p < h/W_(k-1) = {big_km1}"
        ));
    }
    let density = between(&small_k, p, &small_km1);
    if density {
        reasons.push(format!(
            "density: h/w_k = {small_k} < p < h/w_(k-1) = {small_km1}"
        ));
    }
    let torsion = abelian && between(&big_km1, p, &small_km1);
    if torsion {
        reasons.push(format!(
            "torsion: h/W_(k-1) = {big_km1} < p < h/w_(k-1) = {small_km1}"
        ));
    }
    let (q, degree) = dual_pair(p, k, profile.n() + 1)?;
    Ok(StripFlags {
        vanishes: below || above,
        hausdorff_iso_z: hausdorff,
        boundary_density: density,
        torsion_nonzero: torsion,
        dual: DualPair { q, degree },
        reasons,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripReport {
    pub degree: usize,
    pub regions: PuncturedIntervalSet,
}

impl StripReport {
    pub fn status_at(&self, p: &Rat) -> Option<Status> {
        self.regions.status_at(p)
    }

    pub fn to_markdown(&self) -> String {
        format!(
            "### Degree {}\n\n{}",
            self.degree,
            self.regions.to_markdown()
        )
    }
}

/// Renders several reports under a title.
pub fn render_markdown(title: &str, reports: &[StripReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "## {title}\n");
    for r in reports {
        out.push_str(&r.to_markdown());
        out.push('\n');
    }
    out
}

/// Partition of `(1, ∞)` by constant flag set; every threshold is a puncture.
pub fn strip_report(profile: &EigProfile, k: usize, abelian: bool) -> Result<StripReport> {
    check_degree(profile, k)?;
    let mut breaks = Vec::new();
    for t in [
        profile.h_over_W(k)?,
        profile.h_over_W(k - 1)?,
        profile.h_over_w(k)?,
        profile.h_over_w(k - 1)?,
    ] {
        if let XRat::Finite(v) = t {
            breaks.push(v);
        }
    }
    let regions = PuncturedIntervalSet::from_breakpoints(breaks, |p| {
        let flags = classify(profile, k, p, abelian)?;
        Ok((flags.status(), flags.flag_set()))
    })?;
    Ok(StripReport { degree: k, regions })
}

fn table_from(
    degree: usize,
    breaks: Vec<Rat>,
    tag: impl Fn(&Rat) -> Status,
) -> Result<StripReport> {
    let regions = PuncturedIntervalSet::from_breakpoints(breaks, |p| {
        let status = tag(p);
        let flags = if status == Status::Nonzero {
            BTreeSet::from([Flag::Hausdorff])
        } else {
            BTreeSet::new()
        };
        Ok((status, flags))
    })?;
    Ok(StripReport { degree, regions })
}

/// Real hyperbolic space `ℝ ⋉ ℝ^n`: nonzero exactly on `(n/k, n/(k−1))`.
pub fn real_hyperbolic_table(n: usize, k: usize) -> Result<StripReport> {
    if n < 2 || k == 0 || k > n {
        return Err(Error::Domain(format!(
            "need n >= 2 and 1 <= k <= n (n={n}, k={k})"
        )));
    }
    let lo = Rat::new(n as i64, k as i64);
    let hi = if k == 1 {
        XRat::PosInf
    } else {
        XRat::Finite(Rat::new(n as i64, k as i64 - 1))
    };
    let mut breaks = vec![lo.clone()];
    if let XRat::Finite(h) = &hi {
        breaks.push(h.clone());
    }
    table_from(k, breaks, |p| {
        if *p > lo && hi.gt_rat(p) {
            Status::Nonzero
        } else {
            Status::Zero
        }
    })
}

/// Complex hyperbolic space of real dimension `2m`, degree `1 ≤ k ≤ 2m−1`.
pub fn complex_hyperbolic_table(m: usize, k: usize) -> Result<StripReport> {
    if m < 2 || k == 0 || k >= 2 * m {
        return Err(Error::Domain(format!(
            "need m >= 2 and 1 <= k <= 2m-1 (m={m}, k={k})"
        )));
    }
    let two_m = 2 * m as i64;
    let k_i = k as i64;
    let a = Rat::new(two_m, k_i + 1);
    let b = Rat::new(two_m, k_i);
    let c = if k == 1 {
        XRat::PosInf
    } else {
        XRat::Finite(Rat::new(two_m, k_i - 1))
    };
    let lower_nonzero = k >= m;
    let upper_nonzero = k <= m;
    let mut breaks = vec![a.clone(), b.clone()];
    if let XRat::Finite(v) = &c {
        breaks.push(v.clone());
    }
    table_from(k, breaks, |p| {
        let nonzero =
            (*p > a && *p < b && lower_nonzero) || (*p > b && c.gt_rat(p) && upper_nonzero);
        if nonzero {
            Status::Nonzero
        } else {
            Status::Zero
        }
    })
}

/// Degree-2 table of a straight group from its canonical triple.
pub fn s_alpha_degree2_mu(mu: &CanonicalMu) -> Result<StripReport> {
    let p_alpha = mu.p_alpha.clone();
    let breaks = vec![Rat::new(3, 2), p_alpha.clone(), Rat::int(3)];
    table_from(2, breaks, |p| {
        if *p < p_alpha {
            Status::Zero
        } else {
            Status::Nonzero
        }
    })
}

/// Degree-2 table of a straight group: zero below `p_α`, nonzero above,
/// unknown at `3/2`, `p_α` and `3`.
pub fn s_alpha_degree2(cfg: &WeightConfig) -> Result<StripReport> {
    s_alpha_degree2_mu(&canonicalize(cfg)?)
}

/// Degree-2 table of `SL₃(ℝ)/SO₃(ℝ)`.
pub fn sl3_degree2() -> StripReport {
    let breaks = vec![Rat::new(4, 3), Rat::int(2), Rat::int(4)];
    table_from(2, breaks, |p| {
        if *p < Rat::int(2) {
            Status::Zero
        } else {
            Status::Nonzero
        }
    })
    .expect("fixed table is well formed")
}
