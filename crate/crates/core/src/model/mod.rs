//! Network parameters, tier identifiers and operating modes.
//!
//! Everything is stored in SI units (m, m⁻², W, Hz, s). Unit conversions happen
//! only at the configuration boundary (see [`file`]).

pub mod file;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Real;

pub use file::{load_config, parse_config, LoadError};

/// Base-station tier. The derived order (`Macro < Small < Uav`) is only used
/// to break exact ties deterministically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TierId {
    Macro,
    Small,
    Uav,
}

impl TierId {
    pub const ALL: [TierId; 3] = [TierId::Macro, TierId::Small, TierId::Uav];

    #[inline]
    pub const fn index(self) -> usize {
        self as usize
    }

    pub const fn from_index(i: usize) -> Option<TierId> {
        match i {
            0 => Some(TierId::Macro),
            1 => Some(TierId::Small),
            2 => Some(TierId::Uav),
            _ => None,
        }
    }

    /// One-letter symbol (`m`, `s`, `v`) used in column names.
    pub const fn symbol(self) -> &'static str {
        match self {
            TierId::Macro => "m",
            TierId::Small => "s",
            TierId::Uav => "v",
        }
    }

    /// The two tiers other than `self`, in tier order.
    pub fn others(self) -> [TierId; 2] {
        match self {
            TierId::Macro => [TierId::Small, TierId::Uav],
            TierId::Small => [TierId::Macro, TierId::Uav],
            TierId::Uav => [TierId::Macro, TierId::Small],
        }
    }
}

impl fmt::Display for TierId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TierId::Macro => "macro",
            TierId::Small => "small",
            TierId::Uav => "uav",
        })
    }
}

/// Operating architecture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Control and data from the same base station, universal frequency reuse.
    Conventional,
    /// UAV tier carries control on its own band; macro/small carry data only.
    Split,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::Conventional, Mode::Split];

    /// Tiers whose transmissions interfere with a user served by `serving`.
    pub fn interferers(self, serving: TierId) -> &'static [TierId] {
        match (self, serving) {
            (Mode::Conventional, _) => &TierId::ALL,
            (Mode::Split, TierId::Uav) => &[TierId::Uav],
            (Mode::Split, _) => &[TierId::Macro, TierId::Small],
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Conventional => "conventional",
            Mode::Split => "split",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "conventional" | "con" | "joint" => Ok(Mode::Conventional),
            "split" | "sp" => Ok(Mode::Split),
            other => Err(format!("unknown mode `{other}` (expected conventional or split)")),
        }
    }
}

/// Per-tier deployment parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TierParams<S = f64> {
    /// Base stations per m².
    pub intensity: S,
    /// Transmit power in watts.
    pub power: S,
    /// Antenna height in metres.
    pub height: S,
}

/// Full set of physical and protocol parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig<S = f64> {
    pub tiers: [TierParams<S>; 3],
    /// Path-loss exponent η (> 2).
    pub path_loss_exponent: S,
    /// Overall bandwidth W in Hz.
    pub bandwidth_total: S,
    /// Band left to macro/small data in split mode (W_c), Hz.
    pub bandwidth_legacy: S,
    /// Band given to the UAV tier in split mode (W_c′), Hz.
    pub bandwidth_uav: S,
    /// Control overhead fraction in conventional mode (μ_c).
    pub overhead_conventional: S,
    /// Control overhead fraction of the UAV band in split mode (μ_c′).
    pub overhead_split: S,
    /// Control handover delay d_c, seconds.
    pub ho_delay_control: S,
    /// Data-only handover delay d_c′, seconds.
    pub ho_delay_data: S,
    /// User intensity λ^(u), users per m².
    pub user_intensity: S,
    /// Noise power σ² in watts.
    pub noise_power: S,
    /// Linear SINR threshold used for coverage reporting.
    pub sinr_threshold: S,
}

impl<S> Index<TierId> for NetworkConfig<S> {
    type Output = TierParams<S>;

    fn index(&self, k: TierId) -> &TierParams<S> {
        &self.tiers[k.index()]
    }
}

impl<S> IndexMut<TierId> for NetworkConfig<S> {
    fn index_mut(&mut self, k: TierId) -> &mut TierParams<S> {
        &mut self.tiers[k.index()]
    }
}

/// A violated configuration invariant.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{field} must be finite, got {value}")]
    NonFinite { field: String, value: f64 },
    #[error("{field} must be strictly positive, got {value}")]
    NonPositive { field: String, value: f64 },
    #[error("{field} must be non-negative, got {value}")]
    Negative { field: String, value: f64 },
    #[error("path-loss exponent must exceed 2, got {0}")]
    PathLossExponent(f64),
    #[error("bandwidth split mismatch: W = {total} Hz but W_c + W_c' = {legacy} + {uav} Hz")]
    BandwidthSplit { total: f64, legacy: f64, uav: f64 },
    #[error("{field} must lie in [0, 1), got {value}")]
    Overhead { field: String, value: f64 },
    #[error("data handover delay {data} s exceeds control handover delay {control} s")]
    DelayOrdering { control: f64, data: f64 },
    #[error("height ordering h_v > h_m > h_s violated: h_m = {macro_height} m, h_s = {small_height} m, h_v = {uav_height} m")]
    HeightOrdering { macro_height: f64, small_height: f64, uav_height: f64 },
}

impl ConfigError {
    /// Short invariant name, stable for scripting.
    pub fn kind(&self) -> &'static str {
        match self {
            ConfigError::NonFinite { .. } => "NonFinite",
            ConfigError::NonPositive { .. } => "NonPositive",
            ConfigError::Negative { .. } => "Negative",
            ConfigError::PathLossExponent(_) => "PathLossExponent",
            ConfigError::BandwidthSplit { .. } => "BandwidthSplit",
            ConfigError::Overhead { .. } => "Overhead",
            ConfigError::DelayOrdering { .. } => "DelayOrdering",
            ConfigError::HeightOrdering { .. } => "HeightOrdering",
        }
    }
}

/// Converts dBm to watts.
pub fn dbm_to_watts<S: Real>(p_dbm: S) -> S {
    S::lit(10.0).powf((p_dbm - S::lit(30.0)) / S::lit(10.0))
}

pub fn watts_to_dbm<S: Real>(p_w: S) -> S {
    S::lit(10.0) * p_w.log10() + S::lit(30.0)
}

/// Converts an intensity given per km² into per m².
pub fn per_km2<S: Real>(x: S) -> S {
    x * S::lit(1e-6)
}

pub fn mhz<S: Real>(x: S) -> S {
    x * S::lit(1e6)
}

/// Thermal noise over `bandwidth` Hz: −174 dBm/Hz + 10·log10(W) + NF.
pub fn thermal_noise_watts<S: Real>(bandwidth: S, noise_figure_db: S) -> S {
    dbm_to_watts(S::lit(-174.0) + S::lit(10.0) * bandwidth.log10() + noise_figure_db)
}

/// Default receiver noise figure in dB.
pub const DEFAULT_NOISE_FIGURE_DB: f64 = 9.0;

/// (P_k / P_j)^(2/η).
pub fn power_ratio<S: Real>(k: TierId, j: TierId, config: &NetworkConfig<S>) -> S {
    if k == j {
        return S::one();
    }
    let two_over_eta = S::lit(2.0) / config.path_loss_exponent;
    // Through logs so that the product of reciprocal ratios is exactly representable.
    ((config[k].power.ln() - config[j].power.ln()) * two_over_eta).exp()
}

impl<S: Real> NetworkConfig<S> {
    /// Three-tier baseline deployment: powers {45, 24, 30} dBm, heights
    /// {40, 20, 45} m, intensities {4, 15, 5} per km², η = 4, W = 10 MHz with
    /// 7/3 MHz split, overheads 0.3/0.5, handover delays 0.7/0.1 s,
    /// 100 users per km², 0 dB threshold and thermal noise with a 9 dB noise figure.
    pub fn baseline() -> Self {
        let l = S::lit;
        let tier = |p_dbm: f64, h: f64, lambda_km2: f64| TierParams {
            intensity: per_km2(l(lambda_km2)),
            power: dbm_to_watts(l(p_dbm)),
            height: l(h),
        };
        let w = mhz(l(10.0));
        NetworkConfig {
            tiers: [tier(45.0, 40.0, 4.0), tier(24.0, 20.0, 15.0), tier(30.0, 45.0, 5.0)],
            path_loss_exponent: l(4.0),
            bandwidth_total: w,
            bandwidth_legacy: mhz(l(7.0)),
            bandwidth_uav: mhz(l(3.0)),
            overhead_conventional: l(0.3),
            overhead_split: l(0.5),
            ho_delay_control: l(0.7),
            ho_delay_data: l(0.1),
            user_intensity: per_km2(l(100.0)),
            noise_power: thermal_noise_watts(w, l(DEFAULT_NOISE_FIGURE_DB)),
            sinr_threshold: S::one(),
        }
    }

    /// Checks every invariant and returns the configuration unchanged if all hold.
    pub fn validate(self) -> Result<Self, ConfigError> {
        self.check()?;
        Ok(self)
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        let finite = |field: &str, v: S| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::NonFinite { field: field.into(), value: v.as_f64() })
            }
        };
        let positive = |field: &str, v: S| {
            finite(field, v)?;
            if v > S::zero() {
                Ok(())
            } else {
                Err(ConfigError::NonPositive { field: field.into(), value: v.as_f64() })
            }
        };
        let non_negative = |field: &str, v: S| {
            finite(field, v)?;
            if v >= S::zero() {
                Ok(())
            } else {
                Err(ConfigError::Negative { field: field.into(), value: v.as_f64() })
            }
        };
        let fraction = |field: &str, v: S| {
            finite(field, v)?;
            if v >= S::zero() && v < S::one() {
                Ok(())
            } else {
                Err(ConfigError::Overhead { field: field.into(), value: v.as_f64() })
            }
        };

        for k in TierId::ALL {
            let t = &self[k];
            positive(&format!("{k}.intensity"), t.intensity)?;
            positive(&format!("{k}.power"), t.power)?;
            non_negative(&format!("{k}.height"), t.height)?;
        }

        finite("path_loss_exponent", self.path_loss_exponent)?;
        if self.path_loss_exponent <= S::lit(2.0) {
            return Err(ConfigError::PathLossExponent(self.path_loss_exponent.as_f64()));
        }

        positive("bandwidth_total", self.bandwidth_total)?;
        positive("bandwidth_legacy", self.bandwidth_legacy)?;
        non_negative("bandwidth_uav", self.bandwidth_uav)?;
        let split_sum = self.bandwidth_legacy + self.bandwidth_uav;
        if (self.bandwidth_total - split_sum).abs() > S::lit(1e-9) * self.bandwidth_total {
            return Err(ConfigError::BandwidthSplit {
                total: self.bandwidth_total.as_f64(),
                legacy: self.bandwidth_legacy.as_f64(),
                uav: self.bandwidth_uav.as_f64(),
            });
        }

        fraction("overhead_conventional", self.overhead_conventional)?;
        fraction("overhead_split", self.overhead_split)?;

        non_negative("ho_delay_control", self.ho_delay_control)?;
        non_negative("ho_delay_data", self.ho_delay_data)?;
        if self.ho_delay_data > self.ho_delay_control {
            return Err(ConfigError::DelayOrdering {
                control: self.ho_delay_control.as_f64(),
                data: self.ho_delay_data.as_f64(),
            });
        }

        non_negative("user_intensity", self.user_intensity)?;
        non_negative("noise_power", self.noise_power)?;
        non_negative("sinr_threshold", self.sinr_threshold)?;

        let (hm, hs, hv) =
            (self[TierId::Macro].height, self[TierId::Small].height, self[TierId::Uav].height);
        if !(hv > hm && hm > hs) {
            return Err(ConfigError::HeightOrdering {
                macro_height: hm.as_f64(),
                small_height: hs.as_f64(),
                uav_height: hv.as_f64(),
            });
        }
        Ok(())
    }

    /// Total BS intensity over all tiers.
    pub fn total_intensity(&self) -> S {
        self.tiers.iter().fold(S::zero(), |acc, t| acc + t.intensity)
    }

    /// Stable hash over every field, used to key cached estimates.
    pub fn fingerprint(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        for t in &self.tiers {
            for v in [t.intensity, t.power, t.height] {
                v.as_f64().to_bits().hash(&mut h);
            }
        }
        for v in [
            self.path_loss_exponent,
            self.bandwidth_total,
            self.bandwidth_legacy,
            self.bandwidth_uav,
            self.overhead_conventional,
            self.overhead_split,
            self.ho_delay_control,
            self.ho_delay_data,
            self.user_intensity,
            self.noise_power,
            self.sinr_threshold,
        ] {
            v.as_f64().to_bits().hash(&mut h);
        }
        h.finish()
    }

    /// Hash over the fields that shape the association tessellation only
    /// (intensities, powers, heights, η).
    pub fn geometry_fingerprint(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        for t in &self.tiers {
            for v in [t.intensity, t.power, t.height] {
                v.as_f64().to_bits().hash(&mut h);
            }
        }
        self.path_loss_exponent.as_f64().to_bits().hash(&mut h);
        h.finish()
    }

    /// Converts every field to another scalar type.
    pub fn cast<T: Real>(&self) -> NetworkConfig<T> {
        let c = |v: S| T::lit(v.as_f64());
        NetworkConfig {
            tiers: self.tiers.map(|t| TierParams {
                intensity: c(t.intensity),
                power: c(t.power),
                height: c(t.height),
            }),
            path_loss_exponent: c(self.path_loss_exponent),
            bandwidth_total: c(self.bandwidth_total),
            bandwidth_legacy: c(self.bandwidth_legacy),
            bandwidth_uav: c(self.bandwidth_uav),
            overhead_conventional: c(self.overhead_conventional),
            overhead_split: c(self.overhead_split),
            ho_delay_control: c(self.ho_delay_control),
            ho_delay_data: c(self.ho_delay_data),
            user_intensity: c(self.user_intensity),
            noise_power: c(self.noise_power),
            sinr_threshold: c(self.sinr_threshold),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_kind(cfg: NetworkConfig, kind: &str) {
        match cfg.validate() {
            Err(e) => assert_eq!(e.kind(), kind, "{e}"),
            Ok(_) => panic!("expected {kind} error"),
        }
    }

    #[test]
    fn dbm_conversions() {
        assert!((dbm_to_watts(30.0_f64) - 1.0).abs() < 1e-15);
        assert!((dbm_to_watts(0.0_f64) - 0.001).abs() < 1e-18);
        assert!((dbm_to_watts(45.0_f64) - 10f64.powf(1.5)).abs() < 1e-12);
        assert!((dbm_to_watts(45.0_f64) - 31.6228).abs() < 1e-4);
        assert!((watts_to_dbm(dbm_to_watts(24.0_f64)) - 24.0).abs() < 1e-12);
    }

    #[test]
    fn thermal_noise_over_ten_mhz() {
        // -174 + 70 + 9 = -95 dBm
        let n = thermal_noise_watts(1e7_f64, 9.0);
        assert!((watts_to_dbm(n) + 95.0).abs() < 1e-9);
    }

    #[test]
    fn baseline_is_valid() {
        let cfg = NetworkConfig::<f64>::baseline().validate().unwrap();
        assert!((cfg[TierId::Macro].power - 31.6227766).abs() < 1e-6);
        assert!((cfg.bandwidth_uav - 3e6).abs() < 1e-6);
        // idempotent
        assert_eq!(cfg.clone().validate().unwrap(), cfg);
    }

    #[test]
    fn height_ordering_rejected() {
        let mut cfg = NetworkConfig::baseline();
        cfg[TierId::Small].height = 50.0;
        assert_kind(cfg, "HeightOrdering");
    }

    #[test]
    fn path_loss_exponent_boundary() {
        let mut cfg = NetworkConfig::baseline();
        cfg.path_loss_exponent = 2.0;
        assert_kind(cfg, "PathLossExponent");
    }

    #[test]
    fn bandwidth_split_rejected() {
        let mut cfg = NetworkConfig::baseline();
        cfg.bandwidth_uav = 2.5e6;
        assert_kind(cfg, "BandwidthSplit");
    }

    #[test]
    fn delay_ordering_rejected() {
        let mut cfg = NetworkConfig::baseline();
        cfg.ho_delay_data = 1.0;
        assert_kind(cfg, "DelayOrdering");
    }

    #[test]
    fn overhead_range() {
        let mut cfg = NetworkConfig::baseline();
        cfg.overhead_split = 1.0;
        assert_kind(cfg, "Overhead");
    }

    #[test]
    fn zero_intensity_rejected() {
        let mut cfg = NetworkConfig::baseline();
        cfg[TierId::Uav].intensity = 0.0;
        assert_kind(cfg, "NonPositive");
    }

    #[test]
    fn power_ratio_values() {
        let cfg = NetworkConfig::<f64>::baseline();
        let p_sm = power_ratio(TierId::Small, TierId::Macro, &cfg);
        let expected = (10f64.powf(2.4) / 10f64.powf(4.5)).sqrt();
        assert!((p_sm - expected).abs() < 1e-12);
        assert!((p_sm - 0.0891).abs() < 1e-4);
        assert_eq!(power_ratio(TierId::Uav, TierId::Uav, &cfg), 1.0);
    }

    #[test]
    fn power_ratio_reciprocity_and_transitivity() {
        let cfg = NetworkConfig::<f64>::baseline();
        for k in TierId::ALL {
            for j in TierId::ALL {
                let kj = power_ratio(k, j, &cfg);
                let jk = power_ratio(j, k, &cfg);
                assert!((kj * jk - 1.0).abs() < 1e-12);
                for l in TierId::ALL {
                    let jl = power_ratio(j, l, &cfg);
                    let kl = power_ratio(k, l, &cfg);
                    assert!((kj * jl - kl).abs() < 1e-12 * kl.max(1.0));
                }
            }
        }
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("Split".parse::<Mode>().unwrap(), Mode::Split);
        assert_eq!("conventional".parse::<Mode>().unwrap(), Mode::Conventional);
        assert!("both".parse::<Mode>().is_err());
    }

    #[test]
    fn split_interferers() {
        assert_eq!(Mode::Split.interferers(TierId::Uav), &[TierId::Uav]);
        assert_eq!(Mode::Split.interferers(TierId::Small), &[TierId::Macro, TierId::Small]);
        assert_eq!(Mode::Conventional.interferers(TierId::Macro).len(), 3);
    }

    #[test]
    fn cast_roundtrip_f32() {
        let cfg = NetworkConfig::<f64>::baseline();
        let c32: NetworkConfig<f32> = cfg.cast();
        assert!(c32.clone().validate().is_ok());
        assert!((c32[TierId::Macro].height - 40.0).abs() < 1e-6);
    }
}
