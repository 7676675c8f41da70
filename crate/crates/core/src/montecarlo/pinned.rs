//! Estimators conditioned on a fixed serving link.

use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use super::deployment::{association_weights, ppp_disk};
use super::links::default_window_radius;
use super::{trial_rng, SimEstimate};
use crate::error::{Error, Result};
use crate::model::{Mode, NetworkConfig, TierId};

/// Serving BS of tier `tier` pinned at horizontal distance `horizontal` (m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinnedLink {
    pub tier: TierId,
    pub horizontal: f64,
}

impl PinnedLink {
    pub fn distance(&self, config: &NetworkConfig) -> f64 {
        self.horizontal.hypot(config[self.tier].height)
    }
}

/// Faded interference at the origin given that the pinned BS serves the user:
/// every other BS lies outside the region in which it would win association.
fn pinned_interference<R: rand::Rng>(
    mode: Mode,
    link: PinnedLink,
    config: &NetworkConfig,
    radius: f64,
    rng: &mut R,
    pts: &mut Vec<[f64; 2]>,
) -> f64 {
    let w = association_weights(config);
    let eta = config.path_loss_exponent;
    let q_serv = w[link.tier.index()] * link.distance(config).powi(2);
    let mut total = 0.0;
    for &j in mode.interferers(link.tier) {
        let h2 = config[j].height.powi(2);
        ppp_disk(config[j].intensity, radius, rng, pts);
        for p in pts.iter() {
            let d2 = p[0] * p[0] + p[1] * p[1] + h2;
            if w[j.index()] * d2 < q_serv {
                continue;
            }
            let fading: f64 = Exp1.sample(rng);
            total += config[j].power * fading * d2.powf(-eta / 2.0);
        }
        total += 2.0 * std::f64::consts::PI * config[j].intensity * config[j].power
            * radius.powf(2.0 - eta)
            / (eta - 2.0);
    }
    total
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < 100 {
        return Err(Error::Domain(format!("need at least 100 samples, got {samples}")));
    }
    Ok(())
}

/// Empirical E[exp(−s·I)] for the interference seen with `link` serving.
pub fn estimate_laplace(
    mode: Mode,
    link: PinnedLink,
    s: f64,
    config: &NetworkConfig,
    samples: usize,
    seed: u64,
) -> Result<SimEstimate> {
    check_samples(samples)?;
    let radius = default_window_radius(config);
    let values: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map_init(Vec::new, |pts, t| {
            let mut rng = trial_rng(seed, t);
            (-s * pinned_interference(mode, link, config, radius, &mut rng, pts)).exp()
        })
        .collect();
    Ok(SimEstimate::from_samples(values))
}

/// Empirical P[SINR > T] with `link` serving.
pub fn estimate_conditional_coverage(
    mode: Mode,
    link: PinnedLink,
    threshold: f64,
    config: &NetworkConfig,
    samples: usize,
    seed: u64,
) -> Result<SimEstimate> {
    check_samples(samples)?;
    let radius = default_window_radius(config);
    let eta = config.path_loss_exponent;
    let gain = config[link.tier].power * link.distance(config).powf(-eta);
    let values: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map_init(Vec::new, |pts, t| {
            let mut rng = trial_rng(seed, t);
            let i = pinned_interference(mode, link, config, radius, &mut rng, pts);
            let fading: f64 = Exp1.sample(&mut rng);
            f64::from(u8::from(gain * fading > threshold * (i + config.noise_power)))
        })
        .collect();
    Ok(SimEstimate::from_samples(values))
}

/// Paired estimate of coverage(2R) − coverage(R) for the default window
/// radius R: each snapshot is drawn in the larger disk and evaluated twice.
pub fn window_sensitivity(
    mode: Mode,
    threshold: f64,
    config: &NetworkConfig,
    samples: usize,
    seed: u64,
) -> Result<SimEstimate> {
    check_samples(samples)?;
    let r_in = default_window_radius(config);
    let r_out = 2.0 * r_in;
    let w = association_weights(config);
    let eta = config.path_loss_exponent;
    let far = |k: TierId, r: f64| {
        2.0 * std::f64::consts::PI * config[k].intensity * config[k].power * r.powf(2.0 - eta)
            / (eta - 2.0)
    };
    let diffs = (0..samples as u64)
        .into_par_iter()
        .map_init(Vec::new, |pts, t| -> Result<f64> {
            let mut rng = trial_rng(seed, t);
            // (tier, horizontal r², weighted distance, faded received power)
            let mut links: Vec<(TierId, f64, f64, f64)> = Vec::new();
            for k in TierId::ALL {
                let h2 = config[k].height.powi(2);
                ppp_disk(config[k].intensity, r_out, &mut rng, pts);
                for p in pts.iter() {
                    let r2 = p[0] * p[0] + p[1] * p[1];
                    let fading: f64 = Exp1.sample(&mut rng);
                    let power = config[k].power * fading * (r2 + h2).powf(-eta / 2.0);
                    links.push((k, r2, w[k.index()] * (r2 + h2), power));
                }
            }
            let covered = |radius: f64| -> Result<bool> {
                let inside = |l: &&(TierId, f64, f64, f64)| l.1 <= radius * radius;
                let (idx, serving) = links
                    .iter()
                    .enumerate()
                    .filter(|(_, l)| inside(l))
                    .min_by(|a, b| a.1 .2.total_cmp(&b.1 .2))
                    .ok_or(Error::EmptyDeployment)?;
                let interferers = mode.interferers(serving.0);
                let mut i: f64 = links
                    .iter()
                    .enumerate()
                    .filter(|(j, l)| *j != idx && inside(l) && interferers.contains(&l.0))
                    .map(|(_, l)| l.3)
                    .sum();
                i += interferers.iter().map(|&k| far(k, radius)).sum::<f64>();
                Ok(serving.3 > threshold * (i + config.noise_power))
            };
            let big = f64::from(u8::from(covered(r_out)?));
            let small = f64::from(u8::from(covered(r_in)?));
            Ok(big - small)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SimEstimate::from_samples(diffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_argument_laplace_is_one() {
        let cfg = NetworkConfig::baseline();
        let link = PinnedLink { tier: TierId::Macro, horizontal: 80.0 };
        let e = estimate_laplace(Mode::Conventional, link, 0.0, &cfg, 200, 1).unwrap();
        assert_eq!(e.value, 1.0);
    }

    #[test]
    fn no_interfering_tiers_gives_one() {
        let mut cfg = NetworkConfig::baseline();
        cfg[TierId::Uav].intensity = 0.0;
        let link = PinnedLink { tier: TierId::Uav, horizontal: 80.0 };
        let e = estimate_laplace(Mode::Split, link, 1e9, &cfg, 200, 1).unwrap();
        assert_eq!(e.value, 1.0);
    }

    #[test]
    fn sample_floor() {
        let cfg = NetworkConfig::baseline();
        let link = PinnedLink { tier: TierId::Small, horizontal: 50.0 };
        assert!(estimate_laplace(Mode::Split, link, 1.0, &cfg, 10, 1).is_err());
    }
}
