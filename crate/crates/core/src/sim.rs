//! Seeded Monte Carlo rollouts of a solved policy.
//!
//! Blockage is the only random element: heights and data evolve
//! deterministically from the policy's actions, while the next slot's
//! blockage indicator is drawn from the LoS probability at the post-move
//! height. Rollouts are bit-reproducible across platforms: rollout `i` of a
//! run seeded with `s` draws from `ChaCha8Rng::seed_from_u64(s)` on stream
//! `i`, so distinct rollouts never share a random stream and any rollout can
//! be replayed in isolation.

use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel;
use crate::error::Error;
use crate::mdp::{self, MdpState, SystemParams};
use crate::solver::PolicyTable;
use crate::Result;

/// Seed for a simulation run. The same seed, parameters, and policy produce
/// bit-identical traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngSeed(pub u64);

/// What happened in one slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotRecord {
    pub slot: u32,
    /// Blockage state during the slot.
    pub blocked: bool,
    /// Modulation order used (1 = muting).
    pub mod_order: u32,
    /// Flight height during the slot in meters.
    pub height_m: f64,
    /// Height move commanded for the next slot, in meters.
    pub move_m: f64,
    /// Sensor transmission energy spent in the slot, in joules.
    pub energy_j: f64,
}

/// Complete record of one mission.
#[derive(Debug, Clone, PartialEq)]
pub struct RolloutTrace {
    pub slots: Vec<SlotRecord>,
    pub total_energy_j: f64,
    pub bits_delivered: f64,
}

/// Sample mean and standard error over a batch of rollouts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyEstimate {
    pub mean_j: f64,
    pub std_error_j: f64,
    pub n_rollouts: u64,
}

/// Roll the policy out once with sampled blockage, starting unblocked.
/// Uses random stream 0 of the seed; see the module docs for the stream
/// rule.
pub fn rollout(policy: &PolicyTable, params: &SystemParams, seed: RngSeed) -> Result<RolloutTrace> {
    let mut rng = rollout_rng(seed, 0);
    run_rollout(policy, params, false, |_, p_los| {
        uniform_f64(&mut rng) >= p_los
    })
}

/// Roll the policy out once with an injected blockage sequence, one entry
/// per slot (`blockage[0]` is the initial state). Deterministic replay for
/// studying specific blockage realizations.
pub fn rollout_with_blockage(
    policy: &PolicyTable,
    params: &SystemParams,
    blockage: &[bool],
) -> Result<RolloutTrace> {
    if blockage.len() != params.n_slots as usize {
        return Err(Error::BlockageLengthMismatch {
            expected: params.n_slots as usize,
            got: blockage.len(),
        });
    }
    run_rollout(policy, params, blockage[0], |slot, _| {
        blockage[slot as usize - 1]
    })
}

/// Sample mean and standard error of the total energy over `n_rollouts`
/// independent rollouts (streams `0..n_rollouts` of the seed).
pub fn estimate_expected_energy(
    policy: &PolicyTable,
    params: &SystemParams,
    n_rollouts: u64,
    seed: RngSeed,
) -> Result<EnergyEstimate> {
    if n_rollouts == 0 {
        return Err(Error::InvalidParams {
            field: "n_rollouts",
            message: alloc::string::String::from("must be >= 1"),
        });
    }
    let mut totals = Vec::with_capacity(n_rollouts as usize);
    for i in 0..n_rollouts {
        let mut rng = rollout_rng(seed, i);
        let trace = run_rollout(policy, params, false, |_, p_los| {
            uniform_f64(&mut rng) >= p_los
        })?;
        totals.push(trace.total_energy_j);
    }
    let mean = kahan_sum(totals.iter().copied()) / n_rollouts as f64;
    let std_error = if n_rollouts < 2 {
        0.0
    } else {
        let ss = kahan_sum(totals.iter().map(|&x| (x - mean) * (x - mean)));
        crate::math::sqrt(ss / ((n_rollouts - 1) as f64 * n_rollouts as f64))
    };
    Ok(EnergyEstimate {
        mean_j: mean,
        std_error_j: std_error,
        n_rollouts,
    })
}

fn rollout_rng(seed: RngSeed, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    rng.set_stream(index);
    rng
}

/// Uniform draw in [0, 1) with 53-bit resolution.
fn uniform_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn run_rollout(
    policy: &PolicyTable,
    params: &SystemParams,
    initial_blocked: bool,
    mut next_blocked: impl FnMut(u32, f64) -> bool,
) -> Result<RolloutTrace> {
    params.validate()?;
    let space = params.state_space();
    if *policy.space() != space {
        return Err(Error::InvalidParams {
            field: "policy",
            message: alloc::string::String::from("policy was solved on a different state grid"),
        });
    }
    let n = params.n_slots;
    let mut state = params.initial_state();
    state.blocked = initial_blocked;

    let mut slots = Vec::with_capacity(n as usize);
    let mut total = 0.0;
    let mut quanta_delivered = 0u64;
    for t in 1..=n {
        let action = policy.action(&state).ok_or(Error::PolicyMissingState {
            slot: state.slot,
            height_m: state.height_m(params),
            data_quanta: state.data_quanta,
            blocked: state.blocked,
        })?;
        let delivered = mdp::bits_of(action.mod_order);
        let level = i64::from(state.level) + action.climb.level_delta();
        let level_ok = if t == n {
            state.level == 1 && level == 0
        } else {
            level >= 1 && level <= i64::from(space.levels)
        };
        if delivered > state.data_quanta || !level_ok {
            return Err(Error::InfeasibleAction {
                slot: t,
                reason: alloc::format!(
                    "policy action {:?}/{} is invalid at height {} m with {} quanta left",
                    action.climb,
                    action.mod_order,
                    state.height_m(params),
                    state.data_quanta
                ),
            });
        }
        let energy = mdp::slot_cost(params, state.level, state.blocked, action.mod_order);
        slots.push(SlotRecord {
            slot: t,
            blocked: state.blocked,
            mod_order: action.mod_order,
            height_m: state.height_m(params),
            move_m: action.climb.meters(params.height_step_m),
            energy_j: energy,
        });
        total += energy;
        quanta_delivered += delivered;
        let data_quanta = state.data_quanta - delivered;
        if t < n {
            let next_level = level as u32;
            let p_los = channel::los_probability(params.height_m(next_level), &params.channel);
            state = MdpState {
                slot: t + 1,
                level: next_level,
                data_quanta,
                blocked: next_blocked(t + 1, p_los),
            };
        } else if data_quanta > 0 {
            return Err(Error::IncompleteDelivery { data_quanta });
        }
    }
    Ok(RolloutTrace {
        slots,
        total_energy_j: total,
        bits_delivered: quanta_delivered as f64 * params.quantum_bits(),
    })
}

fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}
