//! Exact backward induction over the finite horizon.
//!
//! Starting from the terminal condition (all data delivered, UAV landed) the
//! solver walks the stages backwards, minimizing immediate energy plus
//! expected cost-to-go over the feasible actions of every state. Dead-end
//! states carry an explicit `+inf` sentinel that propagates through
//! expectations; no large finite surrogate is ever used. Ties between
//! equal-value actions resolve to the smaller modulation order, then to the
//! move order hold, descend, climb, so repeated solves produce identical
//! tables.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::channel;
use crate::error::Error;
use crate::mdp::{self, MdpAction, MdpState, StateSpace, SystemParams};
use crate::Result;

/// Minimum expected energy-to-go for every enumerated state, per stage.
/// Infeasible states hold `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueTable {
    space: StateSpace,
    stages: Vec<Vec<f64>>,
}

impl ValueTable {
    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn horizon(&self) -> u32 {
        self.space.n_slots
    }

    /// Cost-to-go of a mid-mission state. Panics if the state lies outside
    /// the enumerated grid.
    pub fn value(&self, state: &MdpState) -> f64 {
        assert!(
            self.space.contains(state),
            "state {state:?} outside the solved grid"
        );
        self.stages[state.slot as usize - 1]
            [self.space.index(state.level, state.data_quanta, state.blocked)]
    }

    /// Minimized objective: the value of the initial state (slot 1, height
    /// `u`, full queue, unblocked).
    pub fn initial_value(&self) -> f64 {
        self.stages[0][self.space.index(1, self.space.data_quanta, false)]
    }
}

/// Optimal action for every feasible state, per stage. States with infinite
/// value have no entry.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyTable {
    space: StateSpace,
    stages: Vec<Vec<Option<MdpAction>>>,
}

impl PolicyTable {
    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn horizon(&self) -> u32 {
        self.space.n_slots
    }

    /// Optimal action at `state`, or `None` when the state is infeasible or
    /// outside the grid.
    pub fn action(&self, state: &MdpState) -> Option<MdpAction> {
        if !self.space.contains(state) {
            return None;
        }
        self.stages[state.slot as usize - 1]
            [self.space.index(state.level, state.data_quanta, state.blocked)]
    }

    pub(crate) fn empty(space: StateSpace) -> Self {
        let per_stage = space.per_stage();
        PolicyTable {
            space,
            stages: vec![vec![None; per_stage]; space.n_slots as usize],
        }
    }

    pub(crate) fn set(&mut self, state: &MdpState, action: MdpAction) {
        let idx = self
            .space
            .index(state.level, state.data_quanta, state.blocked);
        self.stages[state.slot as usize - 1][idx] = Some(action);
    }
}

/// One row of the offline lookup table.
#[derive(Debug, Clone, PartialEq)]
pub struct LookupRow {
    pub slot: u32,
    pub data_quanta: u64,
    pub data_bits: f64,
    pub height_m: f64,
    pub blocked: bool,
    /// Optimal height move in meters.
    pub move_m: f64,
    /// Optimal modulation order.
    pub mod_order: u32,
    /// Expected energy-to-go in joules.
    pub value_j: f64,
}

/// Result of a solve: value and policy tables plus the set of states that
/// can actually occur.
#[derive(Debug, Clone)]
pub struct Solution {
    params: SystemParams,
    values: ValueTable,
    policy: PolicyTable,
    /// Per stage: true for states reachable from slot 1 (either initial
    /// blockage realization) through finite-valued feasible actions.
    reachable: Vec<Vec<bool>>,
}

impl Solution {
    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn values(&self) -> &ValueTable {
        &self.values
    }

    pub fn policy(&self) -> &PolicyTable {
        &self.policy
    }

    /// Minimized expected total energy from the initial state.
    pub fn initial_value(&self) -> f64 {
        self.values.initial_value()
    }

    /// True when `state` can occur at its slot under some feasible history.
    pub fn is_reachable(&self, state: &MdpState) -> bool {
        let space = self.values.space;
        space.contains(state)
            && self.reachable[state.slot as usize - 1]
                [space.index(state.level, state.data_quanta, state.blocked)]
    }

    /// Number of states enumerated by [`Self::lookup_rows`] at `slot`.
    pub fn feasible_state_count(&self, slot: u32) -> usize {
        self.reachable[slot as usize - 1]
            .iter()
            .filter(|&&r| r)
            .count()
    }

    /// Lookup-table rows for one slot: every state that can occur, with its
    /// optimal action and value.
    pub fn lookup_rows(&self, slot: u32) -> Vec<LookupRow> {
        assert!(slot >= 1 && slot <= self.values.horizon());
        let space = self.values.space;
        let q = self.params.quantum_bits();
        space
            .iter_stage(slot)
            .filter(|s| self.is_reachable(s))
            .map(|s| {
                let action = self
                    .policy
                    .action(&s)
                    .expect("reachable states carry an action");
                LookupRow {
                    slot,
                    data_quanta: s.data_quanta,
                    data_bits: s.data_quanta as f64 * q,
                    height_m: s.height_m(&self.params),
                    blocked: s.blocked,
                    move_m: action.climb.meters(self.params.height_step_m),
                    mod_order: action.mod_order,
                    value_j: self.values.value(&s),
                }
            })
            .collect()
    }
}

/// Minimized objective of a finished solve; equal to
/// [`ValueTable::initial_value`].
pub fn value_of_initial_state(values: &ValueTable) -> f64 {
    values.initial_value()
}

/// Solve the instance by backward induction.
///
/// Returns the value and policy tables, or an error naming the binding
/// constraint when no action sequence can deliver the data and land on
/// time.
pub fn solve(params: &SystemParams) -> Result<Solution> {
    params.validate()?;
    let space = params.state_space();
    let n = params.n_slots;
    let per_stage = space.per_stage();

    // LoS probability per post-move level; level 0 is the landed state.
    let p_los: Vec<f64> = (0..=space.levels)
        .map(|lvl| channel::los_probability(params.height_m(lvl), &params.channel))
        .collect();

    let mut value_stages: Vec<Vec<f64>> = vec![Vec::new(); n as usize];
    let mut action_stages: Vec<Vec<Option<MdpAction>>> = vec![Vec::new(); n as usize];

    for t in (1..=n).rev() {
        let mut values = vec![f64::INFINITY; per_stage];
        let mut actions: Vec<Option<MdpAction>> = vec![None; per_stage];
        for state in space.iter_stage(t) {
            let idx = space.index(state.level, state.data_quanta, state.blocked);
            let mut best = f64::INFINITY;
            let mut best_action = None;
            for action in mdp::feasible_actions(&state, params) {
                let cost = mdp::slot_cost(params, state.level, state.blocked, action.mod_order);
                let future = if t == n {
                    // Landing slot: feasibility already forces an empty
                    // queue and the descent to ground, both worth zero.
                    0.0
                } else {
                    let level = (i64::from(state.level) + action.climb.level_delta()) as u32;
                    let data = state.data_quanta - mdp::bits_of(action.mod_order);
                    let next = &value_stages[t as usize];
                    expected_value(
                        p_los[level as usize],
                        next[space.index(level, data, false)],
                        next[space.index(level, data, true)],
                    )
                };
                let q = cost + future;
                if q < best {
                    best = q;
                    best_action = Some(action);
                }
            }
            values[idx] = best;
            actions[idx] = best_action;
        }
        value_stages[t as usize - 1] = values;
        action_stages[t as usize - 1] = actions;
    }

    let initial = space.index(1, space.data_quanta, false);
    if value_stages[0][initial].is_infinite() {
        return Err(Error::InfeasibleInstance {
            reason: infeasibility_reason(params),
        });
    }

    let reachable = mark_reachable(params, &space, &value_stages);
    Ok(Solution {
        params: params.clone(),
        values: ValueTable {
            space,
            stages: value_stages,
        },
        policy: PolicyTable {
            space,
            stages: action_stages,
        },
        reachable,
    })
}

/// Expectation over the two blockage outcomes with explicit infinity
/// propagation: a successor with positive probability and infinite value
/// makes the whole expectation infinite, while zero-probability branches
/// are ignored.
pub(crate) fn expected_value(p_los: f64, value_clear: f64, value_blocked: f64) -> f64 {
    let mut acc = 0.0;
    for (p, v) in [(p_los, value_clear), (1.0 - p_los, value_blocked)] {
        if p > 0.0 {
            if v.is_infinite() {
                return f64::INFINITY;
            }
            acc += p * v;
        }
    }
    acc
}

fn infeasibility_reason(params: &SystemParams) -> String {
    let quanta = params.data_quanta();
    let capacity = u64::from(params.n_slots) * params.max_bits_per_slot();
    if quanta > capacity {
        format!(
            "data volume exceeds worst-case capacity: {} quanta > {} slots x {} quanta/slot = {}",
            quanta,
            params.n_slots,
            params.max_bits_per_slot(),
            capacity
        )
    } else {
        format!(
            "no schedule over the modulation set {:?} delivers exactly {} quanta in {} slots with the landing constraint",
            params.mod_set, quanta, params.n_slots
        )
    }
}

/// Forward closure of the two initial states under finite-valued feasible
/// actions: the states an online controller can ever find itself in.
fn mark_reachable(
    params: &SystemParams,
    space: &StateSpace,
    value_stages: &[Vec<f64>],
) -> Vec<Vec<bool>> {
    let n = params.n_slots as usize;
    let mut reachable = vec![vec![false; space.per_stage()]; n];
    for blocked in [false, true] {
        let idx = space.index(1, space.data_quanta, blocked);
        if value_stages[0][idx].is_finite() {
            reachable[0][idx] = true;
        }
    }
    for t in 1..=params.n_slots {
        if t as usize == n {
            break;
        }
        for state in space.iter_stage(t) {
            let idx = space.index(state.level, state.data_quanta, state.blocked);
            if !reachable[t as usize - 1][idx] {
                continue;
            }
            for action in mdp::feasible_actions(&state, params) {
                let level = (i64::from(state.level) + action.climb.level_delta()) as u32;
                let data = state.data_quanta - mdp::bits_of(action.mod_order);
                let next = &value_stages[t as usize];
                let clear = space.index(level, data, false);
                let blocked_idx = space.index(level, data, true);
                // Only finite-valued actions can be recommended; both
                // blockage outcomes of such an action are then possible.
                if next[clear].is_finite() && next[blocked_idx].is_finite() {
                    reachable[t as usize][clear] = true;
                    reachable[t as usize][blocked_idx] = true;
                }
            }
        }
    }
    reachable
}
