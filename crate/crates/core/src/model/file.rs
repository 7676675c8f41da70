//! TOML configuration files.
//!
//! Keys carry their unit as a suffix (`_dbm`, `_m`, `_per_km2`, `_mhz`, `_s`,
//! `_db`, `_w`). Tier parameters live under `[tier.macro]`, `[tier.small]`
//! and `[tier.uav]`:
//!
//! ```toml
//! path_loss_exponent = 4.0
//! bandwidth_total_mhz = 10.0
//! bandwidth_legacy_mhz = 7.0
//! overhead_conventional = 0.3
//! overhead_split = 0.5
//! ho_delay_control_s = 0.7
//! ho_delay_data_s = 0.1
//! user_intensity_per_km2 = 100.0
//!
//! [tier.macro]
//! power_dbm = 45.0
//! height_m = 40.0
//! intensity_per_km2 = 4.0
//! # [tier.small], [tier.uav] likewise
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use super::{
    dbm_to_watts, mhz, per_km2, thermal_noise_watts, NetworkConfig, TierParams,
    DEFAULT_NOISE_FIGURE_DB,
};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{line}: {message}", path.display())]
    Parse { path: PathBuf, line: usize, message: String },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTier {
    power_dbm: f64,
    height_m: f64,
    intensity_per_km2: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTiers {
    #[serde(rename = "macro")]
    macro_: RawTier,
    small: RawTier,
    uav: RawTier,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    path_loss_exponent: f64,
    bandwidth_total_mhz: f64,
    bandwidth_legacy_mhz: f64,
    bandwidth_uav_mhz: Option<f64>,
    overhead_conventional: f64,
    overhead_split: f64,
    ho_delay_control_s: f64,
    ho_delay_data_s: f64,
    user_intensity_per_km2: f64,
    #[serde(default)]
    sinr_threshold_db: f64,
    noise_power_dbm: Option<f64>,
    noise_power_w: Option<f64>,
    noise_figure_db: Option<f64>,
    tier: RawTiers,
}

fn line_of(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

/// Parses configuration text. `path` is only used for error messages.
pub fn parse_config(src: &str, path: &Path) -> Result<NetworkConfig, LoadError> {
    let raw: RawConfig = toml::from_str(src).map_err(|e| LoadError::Parse {
        path: path.to_path_buf(),
        line: e.span().map(|s| line_of(src, s.start)).unwrap_or(1),
        message: e.message().to_string(),
    })?;

    let noise_err = |message: &str| LoadError::Parse {
        path: path.to_path_buf(),
        line: src
            .find("noise_power")
            .map(|off| line_of(src, off))
            .unwrap_or(1),
        message: message.to_string(),
    };
    let total = mhz(raw.bandwidth_total_mhz);
    let noise_power = match (raw.noise_power_dbm, raw.noise_power_w, raw.noise_figure_db) {
        (Some(_), Some(_), _) => {
            return Err(noise_err("set at most one of noise_power_dbm and noise_power_w"))
        }
        (Some(_), _, Some(_)) | (_, Some(_), Some(_)) => {
            return Err(noise_err("noise_figure_db only applies to the thermal default"))
        }
        (Some(dbm), None, None) => dbm_to_watts(dbm),
        (None, Some(w), None) => w,
        (None, None, nf) => thermal_noise_watts(total, nf.unwrap_or(DEFAULT_NOISE_FIGURE_DB)),
    };

    let tier = |t: &RawTier| TierParams {
        intensity: per_km2(t.intensity_per_km2),
        power: dbm_to_watts(t.power_dbm),
        height: t.height_m,
    };
    let legacy = mhz(raw.bandwidth_legacy_mhz);
    Ok(NetworkConfig {
        tiers: [tier(&raw.tier.macro_), tier(&raw.tier.small), tier(&raw.tier.uav)],
        path_loss_exponent: raw.path_loss_exponent,
        bandwidth_total: total,
        bandwidth_legacy: legacy,
        bandwidth_uav: raw.bandwidth_uav_mhz.map(mhz).unwrap_or(total - legacy),
        overhead_conventional: raw.overhead_conventional,
        overhead_split: raw.overhead_split,
        ho_delay_control: raw.ho_delay_control_s,
        ho_delay_data: raw.ho_delay_data_s,
        user_intensity: per_km2(raw.user_intensity_per_km2),
        noise_power,
        sinr_threshold: 10f64.powf(raw.sinr_threshold_db / 10.0),
    })
}

/// Reads and parses a configuration file (no validation).
pub fn load_config(path: impl AsRef<Path>) -> Result<NetworkConfig, LoadError> {
    let path = path.as_ref();
    let src = std::fs::read_to_string(path)
        .map_err(|source| LoadError::Io { path: path.to_path_buf(), source })?;
    parse_config(&src, path)
}

/// Baseline deployment in file form.
pub const BASELINE_TOML: &str = r#"# Three-tier macro/small/UAV baseline deployment
path_loss_exponent = 4.0
bandwidth_total_mhz = 10.0
bandwidth_legacy_mhz = 7.0
bandwidth_uav_mhz = 3.0
overhead_conventional = 0.3
overhead_split = 0.5
ho_delay_control_s = 0.7
ho_delay_data_s = 0.1
user_intensity_per_km2 = 100.0
sinr_threshold_db = 0.0
noise_figure_db = 9.0

[tier.macro]
power_dbm = 45.0
height_m = 40.0
intensity_per_km2 = 4.0

[tier.small]
power_dbm = 24.0
height_m = 20.0
intensity_per_km2 = 15.0

[tier.uav]
power_dbm = 30.0
height_m = 45.0
intensity_per_km2 = 5.0
"#;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TierId;

    #[test]
    fn baseline_text_matches_builder() {
        let cfg = parse_config(BASELINE_TOML, Path::new("baseline.toml")).unwrap();
        let reference = NetworkConfig::<f64>::baseline();
        for k in TierId::ALL {
            assert!((cfg[k].power - reference[k].power).abs() < 1e-12);
            assert!((cfg[k].intensity - reference[k].intensity).abs() < 1e-18);
            assert_eq!(cfg[k].height, reference[k].height);
        }
        assert!((cfg.noise_power / reference.noise_power - 1.0).abs() < 1e-12);
        assert_eq!(cfg.sinr_threshold, 1.0);
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn parse_error_reports_line() {
        let broken = BASELINE_TOML.replace("height_m = 20.0", "height_m = \"twenty\"");
        let err = parse_config(&broken, Path::new("cfg.toml")).unwrap_err();
        let expected_line = broken.lines().position(|l| l.contains("twenty")).unwrap() + 1;
        match &err {
            LoadError::Parse { line, .. } => assert_eq!(*line, expected_line),
            other => panic!("unexpected {other}"),
        }
        assert!(err.to_string().starts_with(&format!("cfg.toml:{expected_line}:")));
    }

    #[test]
    fn unknown_key_rejected() {
        let broken = format!("{BASELINE_TOML}\n[extra]\nfoo = 1\n");
        assert!(matches!(
            parse_config(&broken, Path::new("x.toml")),
            Err(LoadError::Parse { .. })
        ));
    }

    #[test]
    fn explicit_zero_noise() {
        let src = BASELINE_TOML.replace("noise_figure_db = 9.0", "noise_power_w = 0.0");
        let cfg = parse_config(&src, Path::new("x.toml")).unwrap();
        assert_eq!(cfg.noise_power, 0.0);
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            load_config("/nonexistent/cfg.toml"),
            Err(LoadError::Io { .. })
        ));
    }
}
