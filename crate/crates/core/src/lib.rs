//! Energy-optimal data harvesting from a ground sensor with a hovering UAV.
//!
//! A UAV circles above a battery-limited sensor and must pull a fixed amount
//! of data off it within a fixed number of time slots. Each slot the
//! controller picks a modulation order (or mutes) and climbs, holds, or
//! descends by one height step. Higher altitude raises the line-of-sight
//! probability of the air-to-ground link but worsens the distance-dependent
//! path loss, so the sensor's transmission energy depends on both choices.
//!
//! The crate models this trade-off as a constrained finite-horizon Markov
//! decision process and provides:
//!
//! - [`channel`]: the probabilistic LoS/NLoS channel and the per-slot
//!   transmission-energy model,
//! - [`mdp`]: state/action spaces, transition kernel, and feasibility rules,
//! - [`solver`]: exact backward induction producing value and policy tables,
//! - [`sim`]: a seeded Monte Carlo rollout engine with deterministic replay,
//! - [`oracle`]: a memo-free exhaustive search used to certify the solver,
//! - [`experiments`]: fixed-height baseline comparison and modulation-set
//!   sweeps.
//!
//! The crate is `no_std`-compatible (with `alloc`); disable default features
//! and enable `libm` for builds without the standard library.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("skyharvest-core needs either the `std` or the `libm` feature for float math");

pub(crate) mod math;

pub mod channel;
pub mod error;
pub mod experiments;
pub mod mdp;
pub mod oracle;
pub mod sim;
pub mod solver;

pub use channel::{ChannelParams, DistanceModel, LinkParams};
pub use error::Error;
pub use mdp::{HeightMove, MdpAction, MdpState, StateSpace, SystemParams};
pub use sim::{RngSeed, RolloutTrace};
pub use solver::{solve, PolicyTable, Solution, ValueTable};

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
