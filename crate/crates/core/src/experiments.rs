//! Baseline comparisons: optimal fixed-height design and modulation-set
//! size sweeps.
//!
//! The fixed-height baseline keeps the online modulation choice but freezes
//! the altitude, dropping the takeoff/landing height constraint so any
//! altitude (on or off the step grid) can be evaluated. It is solved by a
//! dedicated dynamic program over (remaining data, blockage) rather than by
//! reusing the joint solver, which gives the test suite two independent code
//! paths to cross-check on degenerate grids.
//!
//! All experiment outputs are exact DP values; nothing here samples.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::channel;
use crate::error::Error;
use crate::mdp::{self, SystemParams};
use crate::solver;
use crate::Result;

/// Altitude grid for the fixed-height enumeration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeightGrid {
    pub min_m: f64,
    pub max_m: f64,
    pub step_m: f64,
}

impl Default for HeightGrid {
    /// 1 m to 400 m in 1 m steps.
    fn default() -> Self {
        HeightGrid {
            min_m: 1.0,
            max_m: 400.0,
            step_m: 1.0,
        }
    }
}

impl HeightGrid {
    fn heights(&self) -> Result<Vec<f64>> {
        if !(self.step_m > 0.0) || self.min_m > self.max_m || !(self.min_m > 0.0) {
            return Err(Error::InvalidParams {
                field: "height_grid",
                message: format!(
                    "need 0 < min <= max and step > 0, got [{}, {}] step {}",
                    self.min_m, self.max_m, self.step_m
                ),
            });
        }
        let count = ((self.max_m - self.min_m) / self.step_m + 0.5) as usize + 1;
        Ok((0..count)
            .map(|i| self.min_m + i as f64 * self.step_m)
            .filter(|&h| h <= self.max_m + 1e-9 * self.step_m)
            .collect())
    }
}

/// Expected energy per candidate altitude, plus the argmin.
#[derive(Debug, Clone)]
pub struct FixedHeightResult {
    /// `(height_m, expected_energy_j)` per grid point.
    pub rows: Vec<(f64, f64)>,
    pub best_height_m: f64,
    pub best_energy_j: f64,
}

/// Which quantity a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    /// Minimal height adjustment `u` in meters.
    HeightStep,
    /// Modulation-set size (nested prefixes of {1, 2, 4, ...}).
    ModSetSize,
}

/// One sweep sample: the joint design against the best fixed-height design
/// under the same modulation set.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    /// Independent variable: `u` in meters or the modulation-set size.
    pub x: f64,
    /// Joint-design expected energy; `+inf` when infeasible.
    pub expected_energy_j: f64,
    pub fixed_best_height_m: f64,
    pub fixed_best_energy_j: f64,
    /// `1 - joint / fixed`, and 0 when the baseline is free or infeasible.
    pub savings_fraction: f64,
    /// Relative improvement over the previous sweep point (mod-set sweep
    /// only).
    pub rel_improvement: Option<f64>,
}

/// Result of a parameter sweep.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub variable: SweepVariable,
    pub points: Vec<SweepPoint>,
    /// First set size whose relative improvement over the previous size
    /// falls below the saturation tolerance (mod-set sweep only).
    pub saturation_size: Option<u32>,
}

/// Expected energy of the fixed-height design at `height_m`: online
/// modulation over (remaining data, blockage), altitude frozen, no landing
/// constraint, delivery still exact by the final slot.
pub fn solve_fixed_height(params: &SystemParams, height_m: f64) -> Result<f64> {
    params.validate()?;
    if !(height_m > 0.0) || !height_m.is_finite() {
        return Err(Error::InvalidParams {
            field: "height_m",
            message: format!("must be positive and finite, got {height_m}"),
        });
    }
    let n = params.n_slots;
    let dq = params.data_quanta();
    let max_bits = params.max_bits_per_slot();
    if dq > u64::from(n) * max_bits {
        return Err(Error::InfeasibleInstance {
            reason: format!(
                "data volume exceeds worst-case capacity: {} quanta > {} slots x {} quanta/slot",
                dq, n, max_bits
            ),
        });
    }
    let p_los = channel::los_probability(height_m, &params.channel);
    let gain_clear = channel::path_loss(height_m, false, &params.channel);
    let gain_blocked = channel::path_loss(height_m, true, &params.channel);
    let cost = |blocked: bool, m: u32| -> Result<f64> {
        channel::slot_energy(m, if blocked { gain_blocked } else { gain_clear }, &params.link)
    };

    let idx = |d: u64, blocked: bool| d as usize * 2 + usize::from(blocked);
    let mut v_next = vec![f64::INFINITY; (dq as usize + 1) * 2];
    v_next[idx(0, false)] = 0.0;
    v_next[idx(0, true)] = 0.0;
    for t in (1..=n).rev() {
        let mut v = vec![f64::INFINITY; (dq as usize + 1) * 2];
        for d in 0..=dq {
            for blocked in [false, true] {
                let mut best = f64::INFINITY;
                for &m in &params.mod_set {
                    let delivered = mdp::bits_of(m);
                    if delivered > d {
                        continue;
                    }
                    let data_left = d - delivered;
                    if data_left > u64::from(n - t) * max_bits {
                        continue;
                    }
                    let q = cost(blocked, m)?
                        + solver::expected_value(
                            p_los,
                            v_next[idx(data_left, false)],
                            v_next[idx(data_left, true)],
                        );
                    if q < best {
                        best = q;
                    }
                }
                v[idx(d, blocked)] = best;
            }
        }
        v_next = v;
    }
    let value = v_next[idx(dq, false)];
    if value.is_infinite() {
        return Err(Error::InfeasibleInstance {
            reason: format!(
                "no schedule over the modulation set {:?} delivers exactly {} quanta in {} slots",
                params.mod_set, dq, n
            ),
        });
    }
    Ok(value)
}

/// Evaluate [`solve_fixed_height`] over the grid. Ties go to the lowest
/// altitude.
pub fn sweep_fixed_height(params: &SystemParams, grid: &HeightGrid) -> Result<FixedHeightResult> {
    let mut rows = Vec::new();
    let mut best: Option<(f64, f64)> = None;
    for h in grid.heights()? {
        let value = solve_fixed_height(params, h)?;
        rows.push((h, value));
        if best.map_or(true, |(_, e)| value < e) {
            best = Some((h, value));
        }
    }
    let (best_height_m, best_energy_j) = best.ok_or(Error::InvalidParams {
        field: "height_grid",
        message: String::from("grid is empty"),
    })?;
    Ok(FixedHeightResult {
        rows,
        best_height_m,
        best_energy_j,
    })
}

/// Solve the joint design for each height step `u` and report the savings
/// against the best fixed-height design (which does not depend on `u`).
pub fn compare_joint_vs_fixed(
    params: &SystemParams,
    u_values: &[f64],
    grid: &HeightGrid,
) -> Result<SweepResult> {
    let fixed = sweep_fixed_height(params, grid)?;
    let mut points = Vec::with_capacity(u_values.len());
    for &u in u_values {
        let ratio = params.height_max_m / u;
        if !(u > 0.0) || crate::math::abs(ratio - (ratio + 0.5) as u64 as f64) > 1e-9 * ratio {
            return Err(Error::InvalidParams {
                field: "u_values",
                message: format!(
                    "height step {} must positively divide height_max {}",
                    u, params.height_max_m
                ),
            });
        }
        let mut joint = params.clone();
        joint.height_step_m = u;
        let value = solver::solve(&joint)?.initial_value();
        points.push(SweepPoint {
            x: u,
            expected_energy_j: value,
            fixed_best_height_m: fixed.best_height_m,
            fixed_best_energy_j: fixed.best_energy_j,
            savings_fraction: savings(value, fixed.best_energy_j),
            rel_improvement: None,
        });
    }
    Ok(SweepResult {
        variable: SweepVariable::HeightStep,
        points,
        saturation_size: None,
    })
}

/// Solve the joint design under nested modulation sets `{1}`, `{1,2}`,
/// `{1,2,4}`, ... up to `max_size` orders, verifying that the value never
/// increases with the set size, and report the first size whose relative
/// improvement falls below `saturation_tol`. Each size is also compared
/// against its own best fixed-height baseline.
pub fn sweep_modulation_set(
    params: &SystemParams,
    max_size: u32,
    saturation_tol: f64,
    grid: &HeightGrid,
) -> Result<SweepResult> {
    if max_size < 2 {
        return Err(Error::InvalidParams {
            field: "max_size",
            message: format!("must be >= 2, got {max_size}"),
        });
    }
    let mut points: Vec<SweepPoint> = Vec::with_capacity(max_size as usize);
    let mut saturation_size = None;
    let mut prev_value = f64::INFINITY;
    for size in 1..=max_size {
        let mut sized = params.clone();
        sized.mod_set = (0..size).map(|k| 1u32 << k.min(31)).collect();
        sized.mod_set[0] = 1;
        let value = match solver::solve(&sized) {
            Ok(sol) => sol.initial_value(),
            Err(Error::InfeasibleInstance { .. }) => f64::INFINITY,
            Err(other) => return Err(other),
        };
        let fixed = match sweep_fixed_height(&sized, grid) {
            Ok(f) => Some(f),
            Err(Error::InfeasibleInstance { .. }) => None,
            Err(other) => return Err(other),
        };
        assert!(
            value <= prev_value,
            "enlarging the modulation set must never cost more: size {} gives {} after {}",
            size,
            value,
            prev_value
        );
        let rel_improvement = if size == 1 {
            None
        } else if prev_value.is_infinite() {
            Some(if value.is_finite() { f64::INFINITY } else { 0.0 })
        } else if prev_value == 0.0 {
            Some(0.0)
        } else {
            Some((prev_value - value) / prev_value)
        };
        if saturation_size.is_none() {
            if let Some(imp) = rel_improvement {
                if imp < saturation_tol {
                    saturation_size = Some(size);
                }
            }
        }
        let (fixed_h, fixed_e) = fixed
            .as_ref()
            .map_or((f64::NAN, f64::INFINITY), |f| (f.best_height_m, f.best_energy_j));
        points.push(SweepPoint {
            x: f64::from(size),
            expected_energy_j: value,
            fixed_best_height_m: fixed_h,
            fixed_best_energy_j: fixed_e,
            savings_fraction: savings(value, fixed_e),
            rel_improvement,
        });
        prev_value = value;
    }
    Ok(SweepResult {
        variable: SweepVariable::ModSetSize,
        points,
        saturation_size,
    })
}

/// `1 - joint/fixed`, defined as 0 when the baseline is zero or either side
/// is infeasible.
fn savings(joint: f64, fixed: f64) -> f64 {
    if fixed == 0.0 || fixed.is_infinite() || joint.is_infinite() {
        0.0
    } else {
        1.0 - joint / fixed
    }
}
