//! Exact arithmetic for L^p-cohomology of solvable Lie groups: weight
//! configurations, critical exponents, strip tables, Heisenberg exterior
//! calculus and the exponent bookkeeping behind decay estimates.

pub mod asymptotics;
pub mod error;
pub mod heis;
pub mod interval;
pub mod linalg;
pub mod poly;
pub mod profile;
pub mod rational;
pub mod straight;
pub mod strips;
pub mod structure;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
pub use heis::HeisForm;
pub use interval::{Flag, Piece, Puncture, PuncturedIntervalSet, Status};
pub use poly::Poly;
pub use profile::{EigProfile, Threshold};
pub use rational::{conjugate, dual_pair, Rat, XRat};
pub use straight::CanonicalMu;
pub use strips::{StripFlags, StripReport};
pub use weights::WeightConfig;
