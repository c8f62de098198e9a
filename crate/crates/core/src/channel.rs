//! Air-to-ground channel and transmission-energy model.
//!
//! The link between the circling UAV and the ground sensor is either
//! line-of-sight or blocked by a building. Blockage is probabilistic: the
//! LoS probability follows an S-curve in the elevation angle, so climbing
//! improves the odds of a clear link while worsening the distance-dependent
//! path loss. Under M-QAM with a hard bit-error-rate cap, the sensor
//! transmits at exactly the power that meets the cap, which fixes the energy
//! spent in a slot as a closed-form function of the modulation order and the
//! channel gain.

use crate::error::Error;
use crate::math;
use crate::Result;

/// How the UAV-sensor distance enters the path-loss law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistanceModel {
    /// Squared distance taken as `height + radius`. This matches the
    /// widely-circulated form of the elevation-angle LoS model and is the
    /// default; note it is not dimensionally a Euclidean distance.
    #[default]
    HeightPlusRadius,
    /// Squared distance taken as `height^2 + radius^2` (slant range).
    Euclidean,
}

/// Parameters of the probabilistic LoS path-loss model.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelParams {
    /// Path-loss exponent.
    pub alpha: f64,
    /// Reference channel gain at 1 m under LoS.
    pub beta0: f64,
    /// Extra attenuation factor applied under NLoS, in (0, 1].
    pub kappa: f64,
    /// S-curve environment parameter `a`.
    pub a_env: f64,
    /// S-curve environment parameter `b`.
    pub b_env: f64,
    /// Hovering radius of the circular trajectory in meters.
    pub radius_m: f64,
    /// Distance convention used by [`path_loss`].
    pub distance_model: DistanceModel,
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) {
            return Err(Error::InvalidParams {
                field: "channel.alpha",
                message: alloc::format!("must be > 0, got {}", self.alpha),
            });
        }
        if !(self.beta0 > 0.0) {
            return Err(Error::InvalidParams {
                field: "channel.beta0",
                message: alloc::format!("must be > 0, got {}", self.beta0),
            });
        }
        if !(self.kappa > 0.0 && self.kappa <= 1.0) {
            return Err(Error::InvalidParams {
                field: "channel.kappa",
                message: alloc::format!("must be in (0, 1], got {}", self.kappa),
            });
        }
        if !(self.a_env > 0.0) {
            return Err(Error::InvalidParams {
                field: "channel.a_env",
                message: alloc::format!("must be > 0, got {}", self.a_env),
            });
        }
        if !(self.b_env > 0.0) {
            return Err(Error::InvalidParams {
                field: "channel.b_env",
                message: alloc::format!("must be > 0, got {}", self.b_env),
            });
        }
        if !(self.radius_m > 0.0) {
            return Err(Error::InvalidParams {
                field: "channel.radius_m",
                message: alloc::format!("must be > 0, got {}", self.radius_m),
            });
        }
        Ok(())
    }
}

/// Link-level constants: noise power, BER cap, and slot duration.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkParams {
    /// AWGN power at the receiver in watts.
    pub noise_power_w: f64,
    /// Bit-error-rate cap, in (0, 0.2). The cap must stay below 0.2 so the
    /// energy expression keeps a positive sign.
    pub ber_threshold: f64,
    /// Slot duration in seconds.
    pub slot_duration_s: f64,
}

impl LinkParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.noise_power_w > 0.0) {
            return Err(Error::InvalidParams {
                field: "link.noise_power_w",
                message: alloc::format!("must be > 0, got {}", self.noise_power_w),
            });
        }
        if !(self.ber_threshold > 0.0 && self.ber_threshold < 0.2) {
            return Err(Error::InvalidParams {
                field: "link.ber_threshold",
                message: alloc::format!("must be in (0, 0.2), got {}", self.ber_threshold),
            });
        }
        if !(self.slot_duration_s > 0.0) {
            return Err(Error::InvalidParams {
                field: "link.slot_duration_s",
                message: alloc::format!("must be > 0, got {}", self.slot_duration_s),
            });
        }
        Ok(())
    }
}

/// Elevation angle in radians between the sensor and the UAV at `height_m`,
/// i.e. `arctan(height / radius)`. Strictly increasing in height, in
/// `[0, pi/2)`.
pub fn elevation_angle(height_m: f64, params: &ChannelParams) -> f64 {
    debug_assert!(height_m >= 0.0);
    math::atan(height_m / params.radius_m)
}

/// Probability that the link is line-of-sight at the given flight height:
/// `1 / (1 + a * exp(-b * (theta - a)))` with `theta` the elevation angle.
/// Strictly increasing in height for a fixed radius, always in (0, 1).
pub fn los_probability(height_m: f64, params: &ChannelParams) -> f64 {
    let theta = elevation_angle(height_m, params);
    1.0 / (1.0 + params.a_env * math::exp(-params.b_env * (theta - params.a_env)))
}

/// Channel power gain at the given height and blockage state.
///
/// LoS: `beta0 * d2^(-alpha/2)`; NLoS: the same scaled by `kappa`, where
/// `d2` is the squared-distance surrogate picked by
/// [`ChannelParams::distance_model`].
pub fn path_loss(height_m: f64, blocked: bool, params: &ChannelParams) -> f64 {
    debug_assert!(height_m >= 0.0);
    let d2 = match params.distance_model {
        DistanceModel::HeightPlusRadius => height_m + params.radius_m,
        DistanceModel::Euclidean => height_m * height_m + params.radius_m * params.radius_m,
    };
    let gain = params.beta0 * math::powf(d2, -params.alpha / 2.0);
    if blocked {
        params.kappa * gain
    } else {
        gain
    }
}

/// Sensor transmission energy for one slot at modulation order `mod_order`
/// and channel gain `gain`:
/// `sigma^2 * (M - 1) * tau * ln(gamma / 0.2) / (-1.6 * gain)`.
///
/// Muting (`mod_order == 1`) costs exactly zero. Energy is linear in
/// `M - 1` and inversely proportional to the gain.
pub fn slot_energy(mod_order: u32, gain: f64, link: &LinkParams) -> Result<f64> {
    if !(gain > 0.0) || !gain.is_finite() {
        return Err(Error::NonPositiveGain { gain });
    }
    if mod_order == 1 {
        return Ok(0.0);
    }
    let m = f64::from(mod_order);
    Ok(link.noise_power_w * (m - 1.0) * link.slot_duration_s * math::ln(link.ber_threshold / 0.2)
        / (-1.6 * gain))
}

/// Bit error rate of M-QAM at transmit power `power_w` over channel gain
/// `gain`: `0.2 * exp(-1.6 * gain * p / (sigma^2 * (M - 1)))`. Defined for
/// `mod_order >= 2`.
pub fn ber(mod_order: u32, gain: f64, power_w: f64, link: &LinkParams) -> f64 {
    debug_assert!(mod_order >= 2);
    let m = f64::from(mod_order);
    0.2 * math::exp(-1.6 * gain * power_w / (link.noise_power_w * (m - 1.0)))
}

/// Convert a noise power density in dBm/Hz to a total noise power in watts
/// over the given bandwidth: `10^((density - 30)/10) * bandwidth`.
pub fn noise_power_from_density(density_dbm_per_hz: f64, bandwidth_hz: f64) -> f64 {
    debug_assert!(bandwidth_hz > 0.0);
    math::powf(10.0, (density_dbm_per_hz - 30.0) / 10.0) * bandwidth_hz
}

#[cfg(test)]
mod tests {
    use super::*;

    fn channel() -> ChannelParams {
        ChannelParams {
            alpha: 3.0,
            beta0: 1.0,
            kappa: 1e-3,
            a_env: 1.0,
            b_env: 1.0,
            radius_m: 50.0,
            distance_model: DistanceModel::HeightPlusRadius,
        }
    }

    fn link() -> LinkParams {
        LinkParams {
            noise_power_w: 1.2e-10,
            ber_threshold: 1e-5,
            slot_duration_s: 50.0,
        }
    }

    #[test]
    fn elevation_angle_known_points() {
        let ch = channel();
        assert!((elevation_angle(50.0, &ch) - core::f64::consts::FRAC_PI_4).abs() < 1e-12);
        assert_eq!(elevation_angle(0.0, &ch), 0.0);
        // arctan(86.6025 / 50) = arctan(1.73205...) ~ pi/3
        assert!((elevation_angle(86.6025, &ch) - 1.0471973493043079).abs() < 1e-12);
        assert!((elevation_angle(86.6025, &ch) - core::f64::consts::FRAC_PI_3).abs() < 1e-6);
    }

    #[test]
    fn elevation_angle_increasing_and_bounded() {
        let ch = channel();
        let mut prev = -1.0;
        for h in 0..=600 {
            let theta = elevation_angle(h as f64, &ch);
            assert!(theta > prev);
            assert!((0.0..core::f64::consts::FRAC_PI_2).contains(&theta));
            prev = theta;
        }
    }

    #[test]
    fn los_probability_known_points() {
        let ch = channel();
        // 1 / (1 + e)
        assert!((los_probability(0.0, &ch) - 0.2689414213699951).abs() < 1e-15);
        // theta = pi/4
        assert!((los_probability(50.0, &ch) - 0.44655449828040683).abs() < 1e-15);
        // theta -> pi/2 limit: 1 / (1 + exp(-(pi/2 - 1)))
        let limit = 1.0 / (1.0 + (-(core::f64::consts::FRAC_PI_2 - 1.0)).exp());
        assert!((limit - 0.6389469030891122).abs() < 1e-15);
        assert!(los_probability(1e9, &ch) < limit);
        assert!((los_probability(1e9, &ch) - limit).abs() < 1e-6);
    }

    #[test]
    fn los_probability_strictly_increasing_on_grid() {
        let ch = channel();
        let mut prev = 0.0;
        for h in 0..=600 {
            let p = los_probability(h as f64, &ch);
            assert!(p > prev && p < 1.0, "h={h} p={p}");
            prev = p;
        }
    }

    #[test]
    fn path_loss_known_points() {
        let ch = channel();
        let g = path_loss(50.0, false, &ch);
        assert!((g - 1.0e-3).abs() < 1e-18); // 100^(-1.5)
        let g_blocked = path_loss(50.0, true, &ch);
        assert!((g_blocked - 1.0e-6).abs() < 1e-21);

        // kappa = 1 makes blockage irrelevant to the gain
        let mut ch1 = channel();
        ch1.kappa = 1.0;
        for h in [0.0, 30.0, 90.0, 300.0] {
            assert_eq!(path_loss(h, true, &ch1), path_loss(h, false, &ch1));
        }
    }

    #[test]
    fn path_loss_strictly_decreasing_on_grid() {
        for model in [DistanceModel::HeightPlusRadius, DistanceModel::Euclidean] {
            let mut ch = channel();
            ch.distance_model = model;
            for blocked in [false, true] {
                let mut prev = f64::INFINITY;
                for h in 0..=600 {
                    let g = path_loss(h as f64, blocked, &ch);
                    assert!(g < prev, "model={model:?} blocked={blocked} h={h}");
                    prev = g;
                }
            }
        }
    }

    #[test]
    fn euclidean_distance_model() {
        let mut ch = channel();
        ch.distance_model = DistanceModel::Euclidean;
        // (30^2 + 50^2)^(-1.5) = 3400^(-1.5)
        let g = path_loss(30.0, false, &ch);
        assert!((g - 3400.0_f64.powf(-1.5)).abs() < 1e-20);
    }

    #[test]
    fn slot_energy_muting_is_free() {
        let lk = link();
        for gain in [1e-9, 1e-3, 1.0] {
            assert_eq!(slot_energy(1, gain, &lk).unwrap(), 0.0);
        }
    }

    #[test]
    fn slot_energy_scales_with_constellation_and_gain() {
        let lk = link();
        let e2 = slot_energy(2, 1e-3, &lk).unwrap();
        let e4 = slot_energy(4, 1e-3, &lk).unwrap();
        assert!((e4 / e2 - 3.0).abs() < 1e-12); // (4-1)/(2-1)

        let e_nlos = slot_energy(2, 1e-6, &lk).unwrap();
        assert!((e_nlos / e2 - 1000.0).abs() < 1e-9); // gain ratio 1/kappa

        // frozen reference: BPSK at 30 m, LoS, default urban parameters
        let g30 = path_loss(30.0, false, &channel());
        let e30 = slot_energy(2, g30, &lk).unwrap();
        assert!((e30 - 2.6573845658152558e-5).abs() / e30 < 1e-14);
    }

    #[test]
    fn slot_energy_positive_unless_muting() {
        let lk = link();
        for m in [2u32, 4, 8, 16, 32] {
            for gain in [1e-9, 1e-3, 0.5] {
                assert!(slot_energy(m, gain, &lk).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn slot_energy_rejects_non_positive_gain() {
        let lk = link();
        assert!(matches!(
            slot_energy(2, 0.0, &lk),
            Err(Error::NonPositiveGain { .. })
        ));
        assert!(matches!(
            slot_energy(2, -1.0, &lk),
            Err(Error::NonPositiveGain { .. })
        ));
    }

    #[test]
    fn ber_round_trip_reproduces_threshold() {
        let ch = channel();
        let lk = link();
        for m in [2u32, 4, 8, 16, 32] {
            for h in (0..=600).step_by(25) {
                for blocked in [false, true] {
                    let g = path_loss(h as f64, blocked, &ch);
                    let e = slot_energy(m, g, &lk).unwrap();
                    let p = e / lk.slot_duration_s;
                    let back = ber(m, g, p, &lk);
                    assert!(
                        (back - lk.ber_threshold).abs() / lk.ber_threshold < 1e-12,
                        "m={m} h={h} blocked={blocked} back={back}"
                    );
                }
            }
        }
    }

    #[test]
    fn noise_power_conversions() {
        assert!((noise_power_from_density(-120.0, 1.0) - 1e-15).abs() < 1e-27);
        assert!((noise_power_from_density(-120.0, 1.2e5) - 1.2e-10).abs() < 1e-22);
        assert!((noise_power_from_density(-30.0, 1.0) - 1e-6).abs() < 1e-18);
    }

    #[test]
    fn param_validation_catches_bad_fields() {
        let mut ch = channel();
        ch.kappa = 1.5;
        assert!(matches!(ch.validate(), Err(Error::InvalidParams { field, .. }) if field == "channel.kappa"));

        let mut lk = link();
        lk.ber_threshold = 0.3;
        assert!(matches!(lk.validate(), Err(Error::InvalidParams { field, .. }) if field == "link.ber_threshold"));
    }
}
