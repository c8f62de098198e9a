//! Error type shared across the crate.

use alloc::string::String;

/// Everything that can go wrong while building or solving an instance.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter violated its documented constraint.
    #[error("invalid parameter `{field}`: {message}")]
    InvalidParams {
        field: &'static str,
        message: String,
    },

    /// Modulation order is not a member of the configured modulation set.
    #[error("modulation order {mod_order} is not in the configured modulation set")]
    UnknownModulation { mod_order: u32 },

    /// Action cannot be taken in the given state.
    #[error("infeasible action at slot {slot}: {reason}")]
    InfeasibleAction { slot: u32, reason: String },

    /// Path-loss gain must be strictly positive.
    #[error("path-loss gain must be positive, got {gain}")]
    NonPositiveGain { gain: f64 },

    /// The instance admits no action sequence meeting the data and height
    /// constraints; `reason` names the binding constraint.
    #[error("infeasible instance: {reason}")]
    InfeasibleInstance { reason: String },

    /// A rollout or exact evaluation reached a state the policy does not
    /// cover. Indicates a solver or coverage bug, not a recoverable event.
    #[error("policy has no action for slot {slot}, height {height_m} m, {data_quanta} quanta, blocked={blocked}")]
    PolicyMissingState {
        slot: u32,
        height_m: f64,
        data_quanta: u64,
        blocked: bool,
    },

    /// A rollout finished the horizon with data still queued.
    #[error("trace ended with {data_quanta} data quanta undelivered")]
    IncompleteDelivery { data_quanta: u64 },

    /// Injected blockage sequence does not match the horizon length.
    #[error("blockage sequence has {got} entries, expected {expected}")]
    BlockageLengthMismatch { expected: usize, got: usize },

    /// The exhaustive search would exceed its node budget.
    #[error("exhaustive search budget exceeded: visited {visited} nodes, budget {budget}")]
    SearchBudgetExceeded { visited: u64, budget: u64 },
}
