//! Punctured interval sets over the exponent domain `p ∈ (1, +∞)`.
//!
//! A set is a list of disjoint open intervals, each tagged with a [`Status`]
//! and optional [`Flag`]s, plus isolated punctures whose status is always
//! unknown. The canonical form merges adjacent intervals with identical tags;
//! the junction point stays a puncture.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{Rat, XRat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Zero,
    Nonzero,
    HausdorffOnly,
    Unknown,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Zero => "zero",
            Status::Nonzero => "nonzero",
            Status::HausdorffOnly => "hausdorff_only",
            Status::Unknown => "unknown",
        }
    }
}

/// Informational annotations that never change a [`Status`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    Hausdorff,
    Density,
    Torsion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub lo: Rat,
    pub hi: XRat,
    pub status: Status,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub flags: BTreeSet<Flag>,
}

impl Piece {
    pub fn new(lo: Rat, hi: XRat, status: Status) -> Piece {
        Piece {
            lo,
            hi,
            status,
            flags: BTreeSet::new(),
        }
    }

    pub fn with_flags(mut self, flags: impl IntoIterator<Item = Flag>) -> Piece {
        self.flags.extend(flags);
        self
    }

    pub fn contains(&self, p: &Rat) -> bool {
        *p > self.lo && self.hi.gt_rat(p)
    }

    fn same_tags(&self, other: &Piece) -> bool {
        self.status == other.status && self.flags == other.flags
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Puncture {
    pub at: Rat,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSet")]
pub struct PuncturedIntervalSet {
    pieces: Vec<Piece>,
    punctures: Vec<Puncture>,
}

#[derive(Deserialize)]
struct RawSet {
    pieces: Vec<Piece>,
    #[serde(default)]
    punctures: Vec<Puncture>,
}

impl TryFrom<RawSet> for PuncturedIntervalSet {
    type Error = Error;
    fn try_from(raw: RawSet) -> Result<Self> {
        if raw.punctures.iter().any(|p| p.status != Status::Unknown) {
            return Err(Error::Parse("punctures must have status unknown".into()));
        }
        PuncturedIntervalSet::new(raw.pieces, raw.punctures.into_iter().map(|p| p.at))
    }
}

impl PuncturedIntervalSet {
    pub fn empty() -> PuncturedIntervalSet {
        PuncturedIntervalSet {
            pieces: Vec::new(),
            punctures: Vec::new(),
        }
    }

    /// Validates and normalizes. Empty intervals (`lo >= hi`) are dropped;
    /// overlapping intervals are rejected.
    pub fn new(
        pieces: impl IntoIterator<Item = Piece>,
        punctures: impl IntoIterator<Item = Rat>,
    ) -> Result<PuncturedIntervalSet> {
        let one = Rat::one();
        let mut pieces: Vec<Piece> = pieces.into_iter().filter(|p| p.hi.gt_rat(&p.lo)).collect();
        for p in &pieces {
            if p.lo < one {
                return Err(Error::Domain(format!(
                    "interval ({}, {}) leaves the exponent domain (1, inf)",
                    p.lo, p.hi
                )));
            }
        }
        pieces.sort_by(|a, b| a.lo.cmp(&b.lo));
        for w in pieces.windows(2) {
            if w[0].hi.gt_rat(&w[1].lo) {
                return Err(Error::Domain(format!(
                    "intervals ({}, {}) and ({}, {}) overlap",
                    w[0].lo, w[0].hi, w[1].lo, w[1].hi
                )));
            }
        }
        let punct: BTreeSet<Rat> = punctures.into_iter().collect();
        for at in &punct {
            if *at <= one {
                return Err(Error::Domain(format!("puncture {at} is not > 1")));
            }
            let in_closure = pieces.iter().any(|p| *at >= p.lo && !p.hi.lt_rat(at));
            if !in_closure {
                return Err(Error::Domain(format!(
                    "puncture {at} lies outside the closure of the intervals"
                )));
            }
        }
        let mut merged: Vec<Piece> = Vec::with_capacity(pieces.len());
        for p in pieces {
            match merged.last_mut() {
                Some(last) if last.hi == XRat::Finite(p.lo.clone()) && last.same_tags(&p) => {
                    last.hi = p.hi;
                }
                _ => merged.push(p),
            }
        }
        Ok(PuncturedIntervalSet {
            pieces: merged,
            punctures: punct
                .into_iter()
                .map(|at| Puncture {
                    at,
                    status: Status::Unknown,
                })
                .collect(),
        })
    }

    /// Partitions `(1, +∞)` at the given breakpoints and tags each open
    /// interval from a sample point inside it. Every breakpoint `> 1` becomes
    /// a puncture.
    pub fn from_breakpoints<F>(
        breakpoints: impl IntoIterator<Item = Rat>,
        mut tag: F,
    ) -> Result<Self>
    where
        F: FnMut(&Rat) -> Result<(Status, BTreeSet<Flag>)>,
    {
        let one = Rat::one();
        let cuts: BTreeSet<Rat> = breakpoints.into_iter().filter(|b| *b > one).collect();
        let mut bounds: Vec<XRat> = vec![XRat::Finite(one)];
        bounds.extend(cuts.iter().cloned().map(XRat::Finite));
        bounds.push(XRat::PosInf);
        let mut pieces = Vec::new();
        for w in bounds.windows(2) {
            let lo = w[0].finite().expect("finite lower bound").clone();
            let sample = match &w[1] {
                XRat::Finite(hi) => (&lo + hi) / Rat::int(2),
                XRat::PosInf => &lo + Rat::one(),
            };
            let (status, flags) = tag(&sample)?;
            pieces.push(Piece {
                lo,
                hi: w[1].clone(),
                status,
                flags,
            });
        }
        PuncturedIntervalSet::new(pieces, cuts)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn punctures(&self) -> &[Puncture] {
        &self.punctures
    }

    pub fn puncture_points(&self) -> impl Iterator<Item = &Rat> {
        self.punctures.iter().map(|p| &p.at)
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn is_punctured_at(&self, p: &Rat) -> bool {
        self.punctures.iter().any(|x| x.at == *p)
    }

    /// Status at `p`: punctures are unknown, points outside every interval
    /// (including bare endpoints) give `None`.
    pub fn status_at(&self, p: &Rat) -> Option<Status> {
        if self.is_punctured_at(p) {
            return Some(Status::Unknown);
        }
        self.piece_at(p).map(|piece| piece.status)
    }

    pub fn piece_at(&self, p: &Rat) -> Option<&Piece> {
        self.pieces.iter().find(|piece| piece.contains(p))
    }

    /// Membership in the open, punctured set.
    pub fn contains(&self, p: &Rat) -> bool {
        !self.is_punctured_at(p) && self.piece_at(p).is_some()
    }

    /// True when the intervals tile `(1, +∞)` and every junction between two
    /// intervals is a puncture.
    pub fn covers_domain(&self) -> bool {
        let Some(first) = self.pieces.first() else {
            return false;
        };
        if !first.lo.is_one() || !self.pieces.last().unwrap().hi.is_infinite() {
            return false;
        }
        self.pieces.windows(2).all(|w| match &w[0].hi {
            XRat::Finite(h) => *h == w[1].lo && self.is_punctured_at(h),
            XRat::PosInf => false,
        })
    }

    /// Sub-intervals carrying `status` (punctures kept where they fall).
    pub fn with_status(&self, status: Status) -> Vec<&Piece> {
        self.pieces.iter().filter(|p| p.status == status).collect()
    }

    /// Intersection with the open interval `(lo, hi)`, keeping tags.
    pub fn restrict(&self, lo: &Rat, hi: &XRat) -> Result<PuncturedIntervalSet> {
        let pieces = self.pieces.iter().filter_map(|p| {
            let nlo = p.lo.clone().max(lo.clone());
            let nhi = std::cmp::min(p.hi.clone(), hi.clone());
            nhi.gt_rat(&nlo).then(|| Piece {
                lo: nlo,
                hi: nhi,
                status: p.status,
                flags: p.flags.clone(),
            })
        });
        let pieces: Vec<Piece> = pieces.collect();
        let punct: Vec<Rat> = self
            .puncture_points()
            .filter(|at| *at > lo && hi.gt_rat(at))
            .cloned()
            .collect();
        PuncturedIntervalSet::new(pieces, punct)
    }

    /// One line per interval, e.g. `(3/2, 3) nonzero`, then the punctures.
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        if self.pieces.is_empty() {
            return "(empty)\n".to_string();
        }
        out.push_str("| interval | status | flags | excluded points |\n");
        out.push_str("|---|---|---|---|\n");
        for piece in &self.pieces {
            let hi = match &piece.hi {
                XRat::Finite(h) => h.to_string(),
                XRat::PosInf => "+inf".to_string(),
            };
            let flags: Vec<&str> = piece
                .flags
                .iter()
                .map(|f| match f {
                    Flag::Hausdorff => "hausdorff",
                    Flag::Density => "density",
                    Flag::Torsion => "torsion",
                })
                .collect();
            let inside: Vec<String> = self
                .puncture_points()
                .filter(|at| piece.contains(at))
                .map(|at| at.to_string())
                .collect();
            let _ = writeln!(
                out,
                "| ({}; {}) | {} | {} | {} |",
                piece.lo,
                hi,
                piece.status.as_str(),
                flags.join(", "),
                if inside.is_empty() {
                    String::new()
                } else {
                    format!("{{{}}}", inside.join(", "))
                }
            );
        }
        let all: Vec<String> = self.puncture_points().map(|a| a.to_string()).collect();
        if !all.is_empty() {
            let _ = writeln!(out, "\nUnknown at p ∈ {{{}}}.", all.join(", "));
        }
        out
    }
}
