use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use super::deployment::{association_weights, ppp_disk};
use super::{trial_rng, Moments, SimEstimate};
use crate::error::{Error, Result};
use crate::model::{Mode, NetworkConfig, TierId};

/// One snapshot seen by a user at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkSample {
    pub trial: u64,
    pub tier: TierId,
    /// Horizontal distance to the serving BS (m).
    pub horizontal: f64,
    /// Faded received power from the serving BS (W).
    pub signal: f64,
    /// Faded interference per tier, serving BS excluded (W).
    pub interference: [f64; 3],
}

impl LinkSample {
    pub fn sinr(&self, mode: Mode, noise_power: f64) -> f64 {
        let i: f64 = mode.interferers(self.tier).iter().map(|j| self.interference[j.index()]).sum();
        let denom = i + noise_power;
        if denom > 0.0 {
            self.signal / denom
        } else {
            f64::INFINITY
        }
    }
}

/// Independent snapshots drawn with [`sample_links`].
#[derive(Debug, Clone)]
pub struct LinkBatch {
    pub samples: Vec<LinkSample>,
    pub noise_power: f64,
    pub window_radius: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageEstimate {
    pub overall: SimEstimate,
    /// Coverage among users served by each tier.
    pub per_tier: [SimEstimate; 3],
}

/// Disk radius beyond which the mean interference is below 0.1% of the mean
/// interference beyond the typical nearest-BS distance (1/√(πΛ)), capped at 25 km.
pub fn default_window_radius(config: &NetworkConfig) -> f64 {
    let r0 = 1.0 / (std::f64::consts::PI * config.total_intensity()).sqrt();
    let r = r0 * 1e3f64.powf(1.0 / (config.path_loss_exponent - 2.0));
    r.clamp(10.0 * r0, 25_000.0)
}

/// Mean interference from tier-k BSs beyond horizontal radius `r`.
fn far_field_mean(config: &NetworkConfig, k: TierId, r: f64) -> f64 {
    let eta = config.path_loss_exponent;
    2.0 * std::f64::consts::PI * config[k].intensity * config[k].power * r.powf(2.0 - eta)
        / (eta - 2.0)
}

struct Scratch {
    pts: Vec<[f64; 2]>,
    powers: [Vec<f64>; 3],
}

fn draw_link(config: &NetworkConfig, radius: f64, seed: u64, trial: u64, s: &mut Scratch) -> Result<LinkSample> {
    let mut rng = trial_rng(seed, trial);
    let w = association_weights(config);
    let eta = config.path_loss_exponent;
    let mut best: Option<(f64, TierId, usize, f64)> = None;
    for k in TierId::ALL {
        let h2 = config[k].height.powi(2);
        ppp_disk(config[k].intensity, radius, &mut rng, &mut s.pts);
        let powers = &mut s.powers[k.index()];
        powers.clear();
        for (i, p) in s.pts.iter().enumerate() {
            let r2 = p[0] * p[0] + p[1] * p[1];
            let d2 = r2 + h2;
            let q = w[k.index()] * d2;
            if best.is_none_or(|(bq, ..)| q < bq) {
                best = Some((q, k, i, r2.sqrt()));
            }
            let fading: f64 = Exp1.sample(&mut rng);
            powers.push(config[k].power * fading * d2.powf(-eta / 2.0));
        }
    }
    let (_, tier, index, horizontal) = best.ok_or(Error::EmptyDeployment)?;
    let mut interference = [0.0; 3];
    for k in TierId::ALL {
        let powers = &s.powers[k.index()];
        let total: f64 = powers
            .iter()
            .enumerate()
            .filter(|&(i, _)| !(k == tier && i == index))
            .map(|(_, p)| p)
            .sum();
        interference[k.index()] = total + far_field_mean(config, k, radius);
    }
    Ok(LinkSample { trial, tier, horizontal, signal: s.powers[tier.index()][index], interference })
}

/// Draws `samples` independent snapshots (trial `t` uses stream `t` of `seed`).
pub fn sample_links(
    config: &NetworkConfig,
    samples: usize,
    seed: u64,
    window_radius: Option<f64>,
) -> Result<LinkBatch> {
    let radius = window_radius.unwrap_or_else(|| default_window_radius(config));
    let samples = (0..samples as u64)
        .into_par_iter()
        .map_init(
            || Scratch { pts: Vec::new(), powers: Default::default() },
            |s, t| draw_link(config, radius, seed, t, s),
        )
        .collect::<Result<Vec<_>>>()?;
    Ok(LinkBatch { samples, noise_power: config.noise_power, window_radius: radius, seed })
}

impl LinkBatch {
    /// Fraction of users served by each tier.
    pub fn association(&self) -> [SimEstimate; 3] {
        TierId::ALL.map(|k| {
            SimEstimate::from_samples(self.samples.iter().map(|s| f64::from(u8::from(s.tier == k))))
        })
    }

    pub fn horizontal_distances(&self, tier: TierId) -> Vec<f64> {
        self.samples.iter().filter(|s| s.tier == tier).map(|s| s.horizontal).collect()
    }

    pub fn coverage(&self, mode: Mode, threshold: f64) -> CoverageEstimate {
        let mut overall = Moments::default();
        let mut per_tier = [Moments::default(); 3];
        for s in &self.samples {
            let hit = f64::from(u8::from(s.sinr(mode, self.noise_power) > threshold));
            overall.push(hit);
            per_tier[s.tier.index()].push(hit);
        }
        CoverageEstimate { overall: overall.estimate(), per_tier: per_tier.map(|m| m.estimate()) }
    }

    /// E[log₂(1 + SINR)] over users served by `tier`.
    pub fn spectral_efficiency(&self, mode: Mode, tier: TierId) -> SimEstimate {
        SimEstimate::from_samples(
            self.samples
                .iter()
                .filter(|s| s.tier == tier)
                .map(|s| s.sinr(mode, self.noise_power).ln_1p() / std::f64::consts::LN_2),
        )
    }
}

/// Empirical association probabilities from `samples` snapshots.
pub fn estimate_association(config: &NetworkConfig, samples: usize, seed: u64) -> Result<[SimEstimate; 3]> {
    Ok(sample_links(config, samples, seed, None)?.association())
}

/// Empirical P[SINR > T] overall and per serving tier.
pub fn estimate_coverage(
    mode: Mode,
    threshold: f64,
    config: &NetworkConfig,
    samples: usize,
    seed: u64,
) -> Result<CoverageEstimate> {
    if samples < 1000 {
        return Err(Error::Domain(format!("coverage estimation needs at least 1000 samples, got {samples}")));
    }
    Ok(sample_links(config, samples, seed, None)?.coverage(mode, threshold))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_threshold_always_covered() {
        let cfg = NetworkConfig::baseline();
        let b = sample_links(&cfg, 2000, 1, None).unwrap();
        for mode in Mode::ALL {
            assert_eq!(b.coverage(mode, 0.0).overall.value, 1.0);
        }
    }

    #[test]
    fn no_interference_no_noise_is_always_covered() {
        let lone = LinkSample {
            trial: 0,
            tier: TierId::Uav,
            horizontal: 10.0,
            signal: 1e-9,
            interference: [0.0; 3],
        };
        assert_eq!(lone.sinr(Mode::Split, 0.0), f64::INFINITY);
        let batch = LinkBatch { samples: vec![lone; 1000], noise_power: 0.0, window_radius: 1.0, seed: 0 };
        assert_eq!(batch.coverage(Mode::Split, 1e12).overall.value, 1.0);
    }

    #[test]
    fn deterministic_and_order_independent() {
        let cfg = NetworkConfig::baseline();
        let a = sample_links(&cfg, 500, 9, None).unwrap();
        let b = sample_links(&cfg, 500, 9, None).unwrap();
        assert_eq!(a.samples, b.samples);
        let mut s = Scratch { pts: Vec::new(), powers: Default::default() };
        let serial: Vec<_> = (0..500).map(|t| draw_link(&cfg, a.window_radius, 9, t, &mut s).unwrap()).collect();
        assert_eq!(serial, a.samples);
    }

    #[test]
    fn window_radius_rule() {
        let cfg = NetworkConfig::baseline();
        let r = default_window_radius(&cfg);
        let r0 = 1.0 / (std::f64::consts::PI * cfg.total_intensity()).sqrt();
        // η = 4: (r0/R)² = 1e-3.
        assert!(((r0 / r).powi(2) - 1e-3).abs() < 1e-12);
    }
}
