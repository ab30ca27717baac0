//! Photon-number statistics of generalized coherent states (equal-angle
//! superpositions of `N` coherent states), their photon-added variants and
//! elliptic-geometry superpositions, together with a planner that finds the
//! amplitude windows over which these states truncate to a single Fock state
//! or an equal two-level superposition.

pub mod cli;
pub mod error;
pub mod numerics;
pub mod pnd;
pub mod scissors;
pub mod states;

pub use error::{Error, Result};
pub use pnd::{Moments, PhotonNumberDistribution, Source};
pub use scissors::{ParameterWindow, ReachabilityRecord, TruncationOutcome};
pub use states::{CircularStateSpec, EllipticStateSpec, FockExpansion};
