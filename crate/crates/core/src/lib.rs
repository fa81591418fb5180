//! Configuration and worst-case analysis of beyond-diagonal reconfigurable
//! intelligent surfaces (BD-RIS).
//!
//! A BD-RIS with `N` elements is described by a real symmetric susceptance
//! matrix `B` whose sparsity pattern is fixed by the architecture
//! (single-, group-, tridiagonal tree- or fully-connected). The reflected
//! channel is `h_Rᴴ Θ h_T` with the Cayley image
//! `Θ = (I + jZ₀B)⁻¹(I − jZ₀B)`, and the received power can never exceed
//! `‖h_R‖²‖h_T‖²`.
//!
//! Modules:
//!
//! * [`numeric`]: minimum-norm least squares and matrix checks;
//! * [`channel`]: channel pairs, their file format, and scenario generators;
//! * [`architecture`]: patterns, the Cayley map, received power and bounds;
//! * [`optimize`]: per-architecture maximizers and a brute-force search;
//! * [`adversarial`]: membership tests for channels that defeat an architecture;
//! * [`experiment`]: the seeded Monte Carlo harness and its CSV outputs.

pub mod adversarial;
pub mod architecture;
pub mod channel;
pub mod error;
pub mod experiment;
pub mod numeric;
pub mod optimize;
pub mod rng;

pub use adversarial::{in_a, in_a_bruteforce, MembershipReport, DEFAULT_MEMBERSHIP_TOL};
pub use architecture::{
    ArchSelector, ArchitectureKind, ArchitectureSpec, ScatteringMatrix, SparsityPattern, SusceptanceMatrix, DEFAULT_Z0,
};
pub use channel::ChannelPair;
pub use error::{Error, Result};
pub use experiment::{ExperimentConfig, Scenario, SummaryRow, TrialRecord};
pub use numeric::{Complex64, ComplexVec, DEFAULT_RANK_RTOL};
pub use optimize::{OptimizeResult, SearchResult};
pub use rng::SimRng;
