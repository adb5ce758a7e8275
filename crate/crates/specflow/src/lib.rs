//! Metric geometry of unitary-operator spectra and spectral flow.
//!
//! The crate models spectra of unitary operators in `1 + L1` as finite
//! multisets on the circle with a distinguished sticky point, computes the
//! optimal-matching metric between them, tracks eigenvalue arguments
//! continuously along operator paths, counts spectral flow through fixed
//! angles, and applies the machinery to lattice scattering models where the
//! spectral shift function splits into absolutely continuous and singular
//! parts.

pub mod cli;
pub mod lift;
pub mod linalg;
pub mod matching;
pub mod mu;
pub mod plot;
pub mod rigged;
pub mod scatter;
pub mod unispec;
pub mod verify;

pub use lift::{ArgumentTrack, LiftError, LiftParams, SpectrumPath};
pub use matching::{
    brute_force_d, distance_d, monotone_matching_check, MatchingError, MatchingResult,
};
pub use mu::{crossing_count_doubled, mu_concat, mu_invariant, MuError, MuInvariant};
pub use rigged::{
    counting_function, rho1, CirclePoint, LinePoint, Multiplicity, RiggedError, RiggedSet, Space,
    SpacePoint, StepFunction,
};
pub use scatter::{ScatterError, ScatteringModel, T0Matrix, XiDecomposition};
pub use unispec::{spec, trace_norm, EigenPair, UnispecError, UnitaryTC};
