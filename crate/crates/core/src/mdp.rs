//! Discrete state/action spaces, reward, transition kernel, and feasibility
//! rules of the data-harvesting MDP.
//!
//! A state is the slot index, the flight height (stored as a multiple of the
//! height step `u`), the remaining data (stored as an integer count of data
//! quanta, one quantum being `symbol_rate * slot_duration` bits), and the
//! blockage indicator. An action pairs a height move in `{+u, 0, -u}` with a
//! modulation order from the configured set.
//!
//! Transitions are deterministic in height and data; only the next blockage
//! state is random, drawn from the LoS probability at the *post-move*
//! height. The mission must end with all data delivered and the UAV back at
//! height `u` in the final slot, descending to ground; the feasibility rules
//! here prune actions that make that terminal condition unreachable.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::channel::{self, ChannelParams, LinkParams};
use crate::error::Error;
use crate::Result;

/// Height move commanded for the next slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeightMove {
    /// Keep the current height.
    Hold,
    /// Descend by one height step.
    Down,
    /// Climb by one height step.
    Up,
}

impl HeightMove {
    /// All moves in the canonical tie-breaking order.
    pub const ALL: [HeightMove; 3] = [HeightMove::Hold, HeightMove::Down, HeightMove::Up];

    /// Signed change in height level.
    pub fn level_delta(self) -> i64 {
        match self {
            HeightMove::Hold => 0,
            HeightMove::Down => -1,
            HeightMove::Up => 1,
        }
    }

    /// Signed height change in meters for step size `step_m`.
    pub fn meters(self, step_m: f64) -> f64 {
        self.level_delta() as f64 * step_m
    }
}

/// One MDP action: a height move plus a modulation order (1 = muting).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MdpAction {
    pub climb: HeightMove,
    pub mod_order: u32,
}

/// One MDP state.
///
/// `level` counts height steps, so the height in meters is
/// `level * height_step_m`; mid-mission states keep `level >= 1`. The landed
/// terminal pseudo-state produced by the final slot's descent has `level ==
/// 0` and `slot == n_slots + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MdpState {
    /// Slot index, 1-based.
    pub slot: u32,
    /// Height in units of the height step.
    pub level: u32,
    /// Remaining data in quanta.
    pub data_quanta: u64,
    /// True when the link is currently blocked (NLoS).
    pub blocked: bool,
}

impl MdpState {
    pub fn height_m(&self, params: &SystemParams) -> f64 {
        f64::from(self.level) * params.height_step_m
    }
}

/// All physical and MDP constants of one problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    /// Number of time slots in the mission.
    pub n_slots: u32,
    /// Total data volume to collect, in bits.
    pub data_bits: f64,
    /// Sensor symbol rate in symbols per second.
    pub symbol_rate: f64,
    /// Minimal height adjustment `u` in meters; also the takeoff height.
    pub height_step_m: f64,
    /// Maximum flight height in meters; must be a multiple of the step.
    pub height_max_m: f64,
    /// Modulation orders, ascending, starting with 1 (muting); every other
    /// entry is a power of two (constellation size).
    pub mod_set: Vec<u32>,
    pub channel: ChannelParams,
    pub link: LinkParams,
}

impl SystemParams {
    /// Reference urban data-collection scenario used by the bundled
    /// experiments and tests: 10 slots of 50 s, 30 Mbit to collect at
    /// 120 ksym/s, 30 m height steps, muting/BPSK modulation, and an urban
    /// S-curve channel with 30 dB NLoS attenuation.
    pub fn reference() -> Self {
        let symbol_rate = 1.2e5;
        SystemParams {
            n_slots: 10,
            data_bits: 30e6,
            symbol_rate,
            height_step_m: 30.0,
            height_max_m: 600.0,
            mod_set: alloc::vec![1, 2],
            channel: ChannelParams {
                alpha: 3.0,
                beta0: 1.0,
                kappa: 1e-3,
                a_env: 1.0,
                b_env: 1.0,
                radius_m: 50.0,
                distance_model: Default::default(),
            },
            link: LinkParams {
                noise_power_w: channel::noise_power_from_density(-120.0, symbol_rate),
                ber_threshold: 1e-5,
                slot_duration_s: 50.0,
            },
        }
    }

    /// Check every documented invariant; other operations assume this
    /// passed.
    pub fn validate(&self) -> Result<()> {
        self.channel.validate()?;
        self.link.validate()?;
        if self.n_slots < 2 {
            return Err(Error::InvalidParams {
                field: "n_slots",
                message: format!("must be >= 2, got {}", self.n_slots),
            });
        }
        if !(self.symbol_rate > 0.0) || !self.symbol_rate.is_finite() {
            return Err(Error::InvalidParams {
                field: "symbol_rate",
                message: format!("must be positive and finite, got {}", self.symbol_rate),
            });
        }
        if !(self.height_step_m > 0.0) || !self.height_step_m.is_finite() {
            return Err(Error::InvalidParams {
                field: "height_step_m",
                message: format!("must be positive and finite, got {}", self.height_step_m),
            });
        }
        if !(self.height_max_m >= self.height_step_m) {
            return Err(Error::InvalidParams {
                field: "height_max_m",
                message: format!(
                    "must be >= height_step_m ({}), got {}",
                    self.height_step_m, self.height_max_m
                ),
            });
        }
        let levels = self.height_max_m / self.height_step_m;
        if crate::math::abs(levels - round(levels)) > 1e-9 * levels.max(1.0) {
            return Err(Error::InvalidParams {
                field: "height_max_m",
                message: format!(
                    "must be an integer multiple of height_step_m, got {} / {} = {}",
                    self.height_max_m, self.height_step_m, levels
                ),
            });
        }
        if !(self.data_bits >= 0.0) || !self.data_bits.is_finite() {
            return Err(Error::InvalidParams {
                field: "data_bits",
                message: format!("must be non-negative and finite, got {}", self.data_bits),
            });
        }
        let q = self.quantum_bits();
        let quanta = self.data_bits / q;
        if crate::math::abs(quanta - round(quanta)) > 1e-9 * quanta.max(1.0) {
            return Err(Error::InvalidParams {
                field: "data_bits",
                message: format!(
                    "must be an integer multiple of the data quantum q = symbol_rate * slot_duration = {} bits, got {} (= {} quanta)",
                    q, self.data_bits, quanta
                ),
            });
        }
        if self.mod_set.is_empty() || self.mod_set[0] != 1 {
            return Err(Error::InvalidParams {
                field: "mod_set",
                message: String::from("must start with 1 (muting)"),
            });
        }
        for pair in self.mod_set.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::InvalidParams {
                    field: "mod_set",
                    message: format!(
                        "must be strictly ascending, found {} after {}",
                        pair[1], pair[0]
                    ),
                });
            }
        }
        for &m in &self.mod_set[1..] {
            if !m.is_power_of_two() {
                return Err(Error::InvalidParams {
                    field: "mod_set",
                    message: format!("constellation sizes must be powers of 2, got {m}"),
                });
            }
        }
        Ok(())
    }

    /// Bits carried by one quantum: `symbol_rate * slot_duration`, the data
    /// delivered per slot per bit of spectral efficiency.
    pub fn quantum_bits(&self) -> f64 {
        self.symbol_rate * self.link.slot_duration_s
    }

    /// Total data volume in quanta. Assumes `validate()` passed.
    pub fn data_quanta(&self) -> u64 {
        round(self.data_bits / self.quantum_bits()) as u64
    }

    /// Number of height levels (`height_max / height_step`).
    pub fn levels(&self) -> u32 {
        round(self.height_max_m / self.height_step_m) as u32
    }

    /// Largest per-slot delivery in quanta under the configured set.
    pub fn max_bits_per_slot(&self) -> u64 {
        self.mod_set.last().map_or(0, |&m| bits_of(m))
    }

    pub fn height_m(&self, level: u32) -> f64 {
        f64::from(level) * self.height_step_m
    }

    /// State at the start of the mission: slot 1, height `u`, full data
    /// queue, unblocked.
    pub fn initial_state(&self) -> MdpState {
        MdpState {
            slot: 1,
            level: 1,
            data_quanta: self.data_quanta(),
            blocked: false,
        }
    }

    pub fn state_space(&self) -> StateSpace {
        StateSpace {
            n_slots: self.n_slots,
            levels: self.levels(),
            data_quanta: self.data_quanta(),
        }
    }
}

fn round(x: f64) -> f64 {
    // f64::round is not in core; floor-free rounding good for x >= 0
    let t = (x + 0.5) as u64;
    t as f64
}

/// Dimensions and dense indexing of the per-stage state grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateSpace {
    pub n_slots: u32,
    pub levels: u32,
    pub data_quanta: u64,
}

impl StateSpace {
    /// States per stage: `levels * (data_quanta + 1) * 2`.
    pub fn per_stage(&self) -> usize {
        self.levels as usize * (self.data_quanta as usize + 1) * 2
    }

    /// Total enumerated states: `n_slots * per_stage()`.
    pub fn total(&self) -> usize {
        self.n_slots as usize * self.per_stage()
    }

    /// Dense index of `(level, data, blocked)` within one stage.
    pub fn index(&self, level: u32, data_quanta: u64, blocked: bool) -> usize {
        debug_assert!(level >= 1 && level <= self.levels);
        debug_assert!(data_quanta <= self.data_quanta);
        ((level as usize - 1) * (self.data_quanta as usize + 1) + data_quanta as usize) * 2
            + usize::from(blocked)
    }

    pub fn contains(&self, state: &MdpState) -> bool {
        state.slot >= 1
            && state.slot <= self.n_slots
            && state.level >= 1
            && state.level <= self.levels
            && state.data_quanta <= self.data_quanta
    }

    /// All states of one stage in index order.
    pub fn iter_stage(&self, slot: u32) -> impl Iterator<Item = MdpState> + '_ {
        let dq = self.data_quanta;
        (1..=self.levels).flat_map(move |level| {
            (0..=dq).flat_map(move |data_quanta| {
                [false, true].into_iter().map(move |blocked| MdpState {
                    slot,
                    level,
                    data_quanta,
                    blocked,
                })
            })
        })
    }
}

#[inline]
pub(crate) fn bits_of(mod_order: u32) -> u64 {
    // log2 of a power of two; mod_order 1 (muting) gives 0
    u64::from(mod_order.trailing_zeros())
}

/// Data delivered by one slot at `mod_order`, as an integer count of quanta
/// (`log2` of the constellation size). Errors if the order is not in the
/// configured set.
pub fn bits_per_slot(mod_order: u32, params: &SystemParams) -> Result<u64> {
    if !params.mod_set.contains(&mod_order) {
        return Err(Error::UnknownModulation { mod_order });
    }
    Ok(bits_of(mod_order))
}

/// Per-slot energy in joules, priced at the *current* height and blockage
/// state. Infallible for validated params (the gain is always positive).
#[inline]
pub(crate) fn slot_cost(params: &SystemParams, level: u32, blocked: bool, mod_order: u32) -> f64 {
    let gain = channel::path_loss(
        f64::from(level) * params.height_step_m,
        blocked,
        &params.channel,
    );
    channel::slot_energy(mod_order, gain, &params.link)
        .expect("validated params yield positive gain")
}

fn action_is_feasible(state: &MdpState, action: &MdpAction, params: &SystemParams) -> bool {
    feasible_actions(state, params).contains(action)
}

/// Immediate cost of an action: the sensor's transmission energy for the
/// slot, using the height and blockage of the current state.
pub fn reward(state: &MdpState, action: &MdpAction, params: &SystemParams) -> Result<f64> {
    if !action_is_feasible(state, action, params) {
        return Err(Error::InfeasibleAction {
            slot: state.slot,
            reason: format!(
                "move {:?} with order {} violates a height, data, or terminal-reachability constraint",
                action.climb, action.mod_order
            ),
        });
    }
    Ok(slot_cost(params, state.level, state.blocked, action.mod_order))
}

/// Successor distribution of a feasible action: height and data evolve
/// deterministically, the next blockage state is drawn at the post-move
/// height. Zero-probability branches are dropped, so the result has one or
/// two entries and the probabilities sum to 1.
///
/// In the final slot the action descends below the operating band; the
/// returned states then carry `slot == n_slots + 1` and `level == 0` (the
/// landed terminal pseudo-state).
pub fn successors(
    state: &MdpState,
    action: &MdpAction,
    params: &SystemParams,
) -> Result<Vec<(MdpState, f64)>> {
    if !action_is_feasible(state, action, params) {
        return Err(Error::InfeasibleAction {
            slot: state.slot,
            reason: format!(
                "move {:?} with order {} violates a height, data, or terminal-reachability constraint",
                action.climb, action.mod_order
            ),
        });
    }
    let level = (i64::from(state.level) + action.climb.level_delta()) as u32;
    let data_quanta = state.data_quanta - bits_of(action.mod_order);
    let p_los = channel::los_probability(params.height_m(level), &params.channel);
    let mut out = Vec::with_capacity(2);
    if p_los > 0.0 {
        out.push((
            MdpState {
                slot: state.slot + 1,
                level,
                data_quanta,
                blocked: false,
            },
            p_los,
        ));
    }
    if 1.0 - p_los > 0.0 {
        out.push((
            MdpState {
                slot: state.slot + 1,
                level,
                data_quanta,
                blocked: true,
            },
            1.0 - p_los,
        ));
    }
    Ok(out)
}

/// All actions available in `state`, in canonical order: modulation order
/// ascending, then move Hold, Down, Up. The order doubles as the solver's
/// tie-breaking preference.
///
/// Filters applied:
/// - the delivery must not overshoot the remaining data;
/// - the post-move height stays within `[u, height_max]` (mid-mission);
/// - the post-move height can still return to `u` by slot `n_slots`;
/// - the remaining data still fits in the remaining slots at the largest
///   configured order;
/// - in the final slot only the landing descent from height `u` is allowed,
///   and the delivery must clear the queue exactly.
///
/// An empty result mid-horizon marks a dead-end state; the solver assigns
/// such states infinite value.
pub fn feasible_actions(state: &MdpState, params: &SystemParams) -> Vec<MdpAction> {
    let mut out = Vec::new();
    let space = params.state_space();
    if !space.contains(state) {
        return out;
    }
    let n = params.n_slots;
    if state.slot == n {
        // Landing slot: start at u, descend to ground, finish the queue.
        if state.level != 1 {
            return out;
        }
        for &m in &params.mod_set {
            if bits_of(m) == state.data_quanta {
                out.push(MdpAction {
                    climb: HeightMove::Down,
                    mod_order: m,
                });
            }
        }
        return out;
    }
    let slots_after_move = u64::from(n - state.slot - 1);
    let capacity_slots = u64::from(n - state.slot);
    let max_bits = params.max_bits_per_slot();
    for &m in &params.mod_set {
        let delivered = bits_of(m);
        if delivered > state.data_quanta {
            continue;
        }
        let data_left = state.data_quanta - delivered;
        if data_left > capacity_slots.saturating_mul(max_bits) {
            continue;
        }
        for climb in HeightMove::ALL {
            let level = i64::from(state.level) + climb.level_delta();
            if level < 1 || level > i64::from(space.levels) {
                continue;
            }
            if (level - 1) as u64 > slots_after_move {
                continue;
            }
            out.push(MdpAction {
                climb,
                mod_order: m,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn small(n_slots: u32, data_quanta: u64, levels: u32, mod_set: Vec<u32>) -> SystemParams {
        let mut p = SystemParams::reference();
        p.n_slots = n_slots;
        p.data_bits = data_quanta as f64 * p.quantum_bits();
        p.height_max_m = levels as f64 * p.height_step_m;
        p.mod_set = mod_set;
        p.validate().unwrap();
        p
    }

    #[test]
    fn reference_scenario_validates() {
        let p = SystemParams::reference();
        p.validate().unwrap();
        assert_eq!(p.data_quanta(), 5);
        assert_eq!(p.levels(), 20);
        assert_eq!(p.quantum_bits(), 6e6);
    }

    #[test]
    fn state_space_size_matches_formula() {
        let p = SystemParams::reference();
        let space = p.state_space();
        assert_eq!(space.per_stage(), 20 * 6 * 2);
        assert_eq!(space.total(), 10 * 20 * 6 * 2);
        assert_eq!(space.iter_stage(1).count(), space.per_stage());
        // index round-trips over the whole stage
        for (i, s) in space.iter_stage(3).enumerate() {
            assert_eq!(space.index(s.level, s.data_quanta, s.blocked), i);
        }
    }

    #[test]
    fn bits_per_slot_for_configured_orders() {
        let p = small(4, 3, 2, vec![1, 2, 4, 8, 16, 32]);
        assert_eq!(bits_per_slot(1, &p).unwrap(), 0);
        assert_eq!(bits_per_slot(2, &p).unwrap(), 1);
        assert_eq!(bits_per_slot(4, &p).unwrap(), 2);
        assert_eq!(bits_per_slot(32, &p).unwrap(), 5);
        assert!(matches!(
            bits_per_slot(64, &p),
            Err(Error::UnknownModulation { mod_order: 64 })
        ));
    }

    #[test]
    fn validation_rejects_bad_instances() {
        let mut p = SystemParams::reference();
        p.height_step_m = 7.0;
        p.height_max_m = 400.0;
        assert!(
            matches!(p.validate(), Err(Error::InvalidParams { field, .. }) if field == "height_max_m")
        );

        let mut p = SystemParams::reference();
        p.data_bits = 31e6; // not a multiple of 6e6
        let err = p.validate().unwrap_err();
        match err {
            Error::InvalidParams { field, message } => {
                assert_eq!(field, "data_bits");
                assert!(message.contains("6000000"), "message: {message}");
            }
            other => panic!("unexpected error {other:?}"),
        }

        for bad in [vec![2, 4], vec![1, 3], vec![1, 4, 2], vec![1, 2, 2], vec![]] {
            let mut p = SystemParams::reference();
            p.mod_set = bad.clone();
            assert!(p.validate().is_err(), "accepted {bad:?}");
        }

        let mut p = SystemParams::reference();
        p.n_slots = 1;
        assert!(p.validate().is_err());
    }

    #[test]
    fn reward_examples() {
        // muting is free everywhere
        let p = small(10, 5, 20, vec![1, 2]);
        let s = p.initial_state();
        let mute = MdpAction {
            climb: HeightMove::Hold,
            mod_order: 1,
        };
        assert_eq!(reward(&s, &mute, &p).unwrap(), 0.0);

        // BPSK at 50 m, LoS: frozen composition of path loss and energy
        let mut p50 = small(10, 5, 12, vec![1, 2]);
        p50.height_step_m = 50.0;
        p50.height_max_m = 600.0;
        p50.validate().unwrap();
        let s = p50.initial_state();
        let tx = MdpAction {
            climb: HeightMove::Hold,
            mod_order: 2,
        };
        let e = reward(&s, &tx, &p50).unwrap();
        assert!((e - 3.7138078322010474e-5).abs() / e < 1e-14);

        // same state but blocked costs 1/kappa as much
        let blocked = MdpState { blocked: true, ..s };
        let e_n = reward(&blocked, &tx, &p50).unwrap();
        assert!((e_n / e - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn reward_rejects_infeasible_action() {
        let p = small(10, 5, 20, vec![1, 2]);
        let s = p.initial_state();
        let bad = MdpAction {
            climb: HeightMove::Down, // would leave the operating band
            mod_order: 1,
        };
        assert!(matches!(
            reward(&s, &bad, &p),
            Err(Error::InfeasibleAction { slot: 1, .. })
        ));
    }

    #[test]
    fn successors_two_point_distribution() {
        let p = small(10, 2, 20, vec![1, 2]);
        let s = p.initial_state(); // H = 30 m, D = 2, LoS
        let a = MdpAction {
            climb: HeightMove::Up,
            mod_order: 2,
        };
        let succ = successors(&s, &a, &p).unwrap();
        assert_eq!(succ.len(), 2);
        let (clear, blocked) = (&succ[0], &succ[1]);
        assert_eq!(clear.0.slot, 2);
        assert_eq!(clear.0.level, 2); // 60 m
        assert_eq!(clear.0.data_quanta, 1);
        assert!(!clear.0.blocked);
        assert!(blocked.0.blocked);
        // frozen Pr_LoS(60 m)
        assert!((clear.1 - 0.46905411738424535).abs() < 1e-15);
        assert!((clear.1 + blocked.1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn idle_transition_keeps_height_and_data() {
        let p = small(10, 2, 20, vec![1, 2]);
        let s = MdpState {
            slot: 3,
            level: 2,
            data_quanta: 2,
            blocked: true,
        };
        let a = MdpAction {
            climb: HeightMove::Hold,
            mod_order: 1,
        };
        let succ = successors(&s, &a, &p).unwrap();
        for (next, _) in &succ {
            assert_eq!(next.level, s.level);
            assert_eq!(next.data_quanta, s.data_quanta);
            assert_eq!(next.slot, 4);
        }
        let total: f64 = succ.iter().map(|(_, pr)| pr).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn feasible_actions_boundaries() {
        let p = small(10, 5, 20, vec![1, 2, 4]);

        // slot 1 at the floor: descending is not available
        let s = p.initial_state();
        let acts = feasible_actions(&s, &p);
        assert!(!acts.is_empty());
        assert!(acts.iter().all(|a| a.climb != HeightMove::Down));

        // one quantum left: 4-QAM would overshoot
        let s = MdpState {
            slot: 5,
            level: 2,
            data_quanta: 1,
            blocked: false,
        };
        let acts = feasible_actions(&s, &p);
        assert!(acts.iter().all(|a| a.mod_order != 4));
        assert!(acts.iter().any(|a| a.mod_order == 2));

        // landing slot with an empty queue: descend muted, nothing else
        let s = MdpState {
            slot: 10,
            level: 1,
            data_quanta: 0,
            blocked: false,
        };
        assert_eq!(
            feasible_actions(&s, &p),
            vec![MdpAction {
                climb: HeightMove::Down,
                mod_order: 1
            }]
        );

        // landing slot away from the floor: dead end
        let s = MdpState {
            slot: 10,
            level: 2,
            data_quanta: 0,
            blocked: false,
        };
        assert!(feasible_actions(&s, &p).is_empty());

        // slot before landing must move onto the floor
        let s = MdpState {
            slot: 9,
            level: 2,
            data_quanta: 0,
            blocked: false,
        };
        let acts = feasible_actions(&s, &p);
        assert!(!acts.is_empty());
        assert!(acts.iter().all(|a| a.climb == HeightMove::Down));
    }

    #[test]
    fn feasible_actions_capacity_filter() {
        // two slots, two quanta, BPSK only: muting now would strand data
        let p = small(2, 2, 1, vec![1, 2]);
        let s = p.initial_state();
        assert_eq!(
            feasible_actions(&s, &p),
            vec![MdpAction {
                climb: HeightMove::Hold,
                mod_order: 2
            }]
        );
    }

    #[test]
    fn canonical_action_order() {
        let p = small(10, 5, 20, vec![1, 2]);
        let s = MdpState {
            slot: 5,
            level: 3,
            data_quanta: 3,
            blocked: false,
        };
        let acts = feasible_actions(&s, &p);
        let expect = vec![
            (HeightMove::Hold, 1),
            (HeightMove::Down, 1),
            (HeightMove::Up, 1),
            (HeightMove::Hold, 2),
            (HeightMove::Down, 2),
            (HeightMove::Up, 2),
        ];
        let got: Vec<_> = acts.iter().map(|a| (a.climb, a.mod_order)).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn successor_distributions_valid_everywhere() {
        let p = small(6, 3, 3, vec![1, 2, 4]);
        let space = p.state_space();
        for t in 1..=p.n_slots {
            for s in space.iter_stage(t) {
                for a in feasible_actions(&s, &p) {
                    let succ = successors(&s, &a, &p).unwrap();
                    assert!(!succ.is_empty() && succ.len() <= 2);
                    let mut total = 0.0;
                    for (next, pr) in &succ {
                        assert!(*pr > 0.0 && *pr <= 1.0);
                        assert_eq!(next.slot, t + 1);
                        assert_eq!(
                            i64::from(next.level) - i64::from(s.level),
                            a.climb.level_delta()
                        );
                        assert_eq!(s.data_quanta - next.data_quanta, bits_of(a.mod_order));
                        total += pr;
                    }
                    assert!((total - 1.0).abs() < 1e-12);
                }
            }
        }
    }
}
