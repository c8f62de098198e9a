//! Independent brute-force verification of the backward-induction solver.
//!
//! Two deliberately different code paths compute the same quantities the
//! solver produces:
//!
//! - [`evaluate_policy_exact`] pushes the exact state-occupancy distribution
//!   forward through the transition kernel and accumulates expected energy,
//!   with no sampling;
//! - [`brute_force_optimum`] minimizes expected cost by exhaustive depth-first
//!   search over the reachable decision tree, recomputing every subtree from
//!   scratch (no memoization, no stage tables).
//!
//! Neither path touches the solver's backward recursion; they share only the
//! channel and MDP primitives. [`run_certification`] throws randomized small
//! instances at both the solver and the search and reports every gap.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel;
use crate::error::Error;
use crate::mdp::{self, MdpState, SystemParams};
use crate::solver::{solve, PolicyTable};
use crate::Result;

/// Node budget for the exhaustive search. The search refuses instances
/// whose decision tree grows past this many evaluations.
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

/// Relative agreement required between solver and search values.
pub const CERTIFICATION_REL_TOL: f64 = 1e-9;

/// Expected total energy of `policy` from the initial state, computed by
/// exact forward propagation of the state distribution (no sampling).
///
/// Returns `+inf` when the policy strands probability mass in a dead end,
/// and an error when a state carrying mass has no stored action.
pub fn evaluate_policy_exact(policy: &PolicyTable, params: &SystemParams) -> Result<f64> {
    params.validate()?;
    let space = params.state_space();
    if *policy.space() != space {
        return Err(Error::InvalidParams {
            field: "policy",
            message: String::from("policy was solved on a different state grid"),
        });
    }
    let n = params.n_slots;
    let mut dist = vec![0.0_f64; space.per_stage()];
    let init = params.initial_state();
    dist[space.index(init.level, init.data_quanta, init.blocked)] = 1.0;

    let mut total = 0.0;
    for t in 1..=n {
        let mut next_dist = vec![0.0_f64; space.per_stage()];
        for state in space.iter_stage(t) {
            let idx = space.index(state.level, state.data_quanta, state.blocked);
            let mass = dist[idx];
            if mass == 0.0 {
                continue;
            }
            let action = policy.action(&state).ok_or(Error::PolicyMissingState {
                slot: state.slot,
                height_m: state.height_m(params),
                data_quanta: state.data_quanta,
                blocked: state.blocked,
            })?;
            if !mdp::feasible_actions(&state, params).contains(&action) {
                // The policy walked itself into a corner; the mission
                // cannot complete from here.
                return Ok(f64::INFINITY);
            }
            total += mass * mdp::slot_cost(params, state.level, state.blocked, action.mod_order);
            if t < n {
                for (next, pr) in mdp::successors(&state, &action, params)? {
                    next_dist[space.index(next.level, next.data_quanta, next.blocked)] +=
                        mass * pr;
                }
            }
        }
        dist = next_dist;
    }
    Ok(total)
}

/// Result of the exhaustive search.
#[derive(Debug, Clone)]
pub struct BruteForceResult {
    /// Minimum expected total energy from the initial state; `+inf` when
    /// the instance is infeasible.
    pub expected_energy_j: f64,
    /// Argmin action for every state the search visited.
    pub policy: PolicyTable,
    /// Number of search-tree nodes evaluated.
    pub nodes_visited: u64,
}

/// Minimum expected total energy over all policies, by exhaustive
/// depth-first search with the default node budget.
pub fn brute_force_optimum(params: &SystemParams) -> Result<BruteForceResult> {
    brute_force_optimum_with_budget(params, DEFAULT_SEARCH_BUDGET)
}

/// As [`brute_force_optimum`], refusing with a size report once the search
/// tree exceeds `budget` nodes.
pub fn brute_force_optimum_with_budget(
    params: &SystemParams,
    budget: u64,
) -> Result<BruteForceResult> {
    params.validate()?;
    let mut search = Search {
        params,
        visited: 0,
        budget,
        policy: PolicyTable::empty(params.state_space()),
    };
    let value = search.best_value(&params.initial_state())?;
    Ok(BruteForceResult {
        expected_energy_j: value,
        policy: search.policy,
        nodes_visited: search.visited,
    })
}

struct Search<'a> {
    params: &'a SystemParams,
    visited: u64,
    budget: u64,
    policy: PolicyTable,
}

impl Search<'_> {
    /// Minimum expected cost-to-go from `state`, recomputed afresh for every
    /// tree node.
    fn best_value(&mut self, state: &MdpState) -> Result<f64> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::SearchBudgetExceeded {
                visited: self.visited,
                budget: self.budget,
            });
        }
        let landing = state.slot == self.params.n_slots;
        let mut best = f64::INFINITY;
        let mut best_action = None;
        for action in mdp::feasible_actions(state, self.params) {
            let cost = mdp::slot_cost(self.params, state.level, state.blocked, action.mod_order);
            let mut future = 0.0;
            if !landing {
                let level = (i64::from(state.level) + action.climb.level_delta()) as u32;
                let data_quanta = state.data_quanta - mdp::bits_of(action.mod_order);
                let p_los = channel::los_probability(
                    self.params.height_m(level),
                    &self.params.channel,
                );
                for (pr, blocked) in [(p_los, false), (1.0 - p_los, true)] {
                    if pr <= 0.0 {
                        continue;
                    }
                    let v = self.best_value(&MdpState {
                        slot: state.slot + 1,
                        level,
                        data_quanta,
                        blocked,
                    })?;
                    if v.is_infinite() {
                        future = f64::INFINITY;
                        break;
                    }
                    future += pr * v;
                }
            }
            let q = cost + future;
            if q < best {
                best = q;
                best_action = Some(action);
            }
        }
        if let Some(action) = best_action {
            if best.is_finite() {
                self.policy.set(state, action);
            }
        }
        Ok(best)
    }
}

/// Draw one instance from the certification family: 2-4 slots, up to three
/// height levels, up to three modulation orders (possibly with a gap), up
/// to three data quanta, and NLoS attenuation from mild to severe.
pub fn random_small_instance(rng: &mut impl RngCore) -> SystemParams {
    fn pick<T: Copy>(rng: &mut impl RngCore, options: &[T]) -> T {
        options[(rng.next_u32() as usize) % options.len()]
    }

    let mut p = SystemParams::reference();
    p.n_slots = pick(rng, &[2, 3, 4]);
    p.height_step_m = pick(rng, &[10.0, 20.0, 30.0, 50.0]);
    let levels = pick(rng, &[1u32, 2, 3]);
    p.height_max_m = f64::from(levels) * p.height_step_m;
    p.mod_set = match rng.next_u32() % 3 {
        0 => vec![1, 2],
        1 => vec![1, 2, 4],
        _ => vec![1, 4], // gapped set: exact delivery can be unreachable
    };
    p.symbol_rate = pick(rng, &[1e5, 1.2e5]);
    p.link.slot_duration_s = pick(rng, &[10.0, 50.0]);
    let quanta = u64::from(rng.next_u32() % 4);
    p.data_bits = quanta as f64 * p.quantum_bits();
    p.channel.kappa = pick(rng, &[1.0, 0.1, 1e-3]);
    p.channel.radius_m = pick(rng, &[30.0, 50.0, 80.0]);
    p.channel.alpha = pick(rng, &[2.0, 3.0]);
    p.channel.a_env = pick(rng, &[0.5, 1.0, 1.5]);
    p.channel.b_env = pick(rng, &[0.5, 1.0, 1.5]);
    p.channel.beta0 = pick(rng, &[0.5, 1.0]);
    p.link.noise_power_w = pick(rng, &[1.2e-10, 1e-12]);
    p.link.ber_threshold = pick(rng, &[1e-5, 1e-3]);
    p.validate().expect("generated instance must validate");
    p
}

/// Solver-vs-search comparison for one instance.
#[derive(Debug, Clone)]
pub struct CertInstance {
    pub index: usize,
    /// Compact parameter log, enough to regenerate interest in a failure.
    pub summary: String,
    /// Backward-induction value; `None` when the solver reports the
    /// instance infeasible.
    pub solver_value: Option<f64>,
    /// Exhaustive-search value; `None` when the search proves infeasibility.
    pub oracle_value: Option<f64>,
    pub rel_gap: f64,
    pub agree: bool,
}

/// Outcome of a certification run.
#[derive(Debug, Clone)]
pub struct CertificationReport {
    pub seed: u64,
    pub instances: Vec<CertInstance>,
    pub max_rel_gap: f64,
}

impl CertificationReport {
    pub fn agreements(&self) -> usize {
        self.instances.iter().filter(|i| i.agree).count()
    }

    pub fn all_agree(&self) -> bool {
        self.agreements() == self.instances.len()
    }
}

/// Solve `n_instances` seeded random small instances with both the solver
/// and the exhaustive search and record every value gap. Disagreement
/// beyond [`CERTIFICATION_REL_TOL`] is a release-blocking failure.
pub fn run_certification(n_instances: usize, seed: u64) -> Result<CertificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut instances = Vec::with_capacity(n_instances);
    let mut max_rel_gap = 0.0_f64;
    for index in 0..n_instances {
        let params = random_small_instance(&mut rng);
        let summary = format!(
            "N={} u={} levels={} D={}q mods={:?} kappa={} R={} alpha={} a={} b={} beta0={} sigma2={:e} gamma={:e} tau={}",
            params.n_slots,
            params.height_step_m,
            params.levels(),
            params.data_quanta(),
            params.mod_set,
            params.channel.kappa,
            params.channel.radius_m,
            params.channel.alpha,
            params.channel.a_env,
            params.channel.b_env,
            params.channel.beta0,
            params.link.noise_power_w,
            params.link.ber_threshold,
            params.link.slot_duration_s,
        );
        let solver_value = match solve(&params) {
            Ok(sol) => Some(sol.initial_value()),
            Err(Error::InfeasibleInstance { .. }) => None,
            Err(other) => return Err(other),
        };
        let search = brute_force_optimum(&params)?;
        let oracle_value = search.expected_energy_j.is_finite().then_some(search.expected_energy_j);
        let (rel_gap, agree) = match (solver_value, oracle_value) {
            (Some(a), Some(b)) => {
                let scale = crate::math::abs(a).max(crate::math::abs(b));
                let gap = if scale == 0.0 {
                    0.0
                } else {
                    crate::math::abs(a - b) / scale
                };
                (gap, gap <= CERTIFICATION_REL_TOL)
            }
            (None, None) => (0.0, true),
            _ => (f64::INFINITY, false),
        };
        max_rel_gap = max_rel_gap.max(rel_gap);
        instances.push(CertInstance {
            index,
            summary,
            solver_value,
            oracle_value,
            rel_gap,
            agree,
        });
    }
    Ok(CertificationReport {
        seed,
        instances,
        max_rel_gap,
    })
}

/// LoS probability helper re-exported for report text.
pub fn los_probability_at(params: &SystemParams, height_m: f64) -> f64 {
    channel::los_probability(height_m, &params.channel)
}
