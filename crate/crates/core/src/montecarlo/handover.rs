//! Handover counting along straight user trajectories.
//!
//! The PPPs are isotropic, so a trajectory with uniformly random heading has
//! the same crossing law as one along the x-axis; the simulator walks
//! [0, L] × {0} through a deployment drawn in the guarded rectangle
//! [−g, L+g] × [−g, g].

use rand::Rng;
use rayon::prelude::*;

use super::deployment::{association_weights, poisson_count};
use super::{trial_rng, Moments, SimEstimate};
use crate::error::{Error, Result};
use crate::model::{NetworkConfig, TierId};

const STEP: f64 = 0.5;
const RESOLUTION: f64 = 0.01;

/// Crossing rates estimated from simulated trajectories.
#[derive(Debug, Clone, PartialEq)]
pub struct HandoverSimulation {
    pub velocity: f64,
    pub trajectory_length: f64,
    pub trials: usize,
    /// Handovers per second from tier i to tier j, off-diagonal entries
    /// symmetrised as (HO_ij + HO_ji)/2.
    pub rates: [[SimEstimate; 3]; 3],
    /// All handovers per second.
    pub total: SimEstimate,
}

#[derive(Clone, Copy)]
struct Site {
    x: f64,
    /// w·(y² + h²): weighted distance offset from the trajectory line.
    offset: f64,
    w: f64,
    tier: TierId,
}

struct Track {
    sites: Vec<Site>,
    w_min: f64,
}

impl Track {
    fn q(&self, i: usize, px: f64) -> f64 {
        let s = &self.sites[i];
        s.w * (px - s.x).powi(2) + s.offset
    }

    /// Index of the serving site at (px, 0); `hint` seeds the search bound.
    fn best(&self, px: f64, hint: usize) -> usize {
        let mut best = hint;
        let mut bq = self.q(hint, px);
        let reach = (bq / self.w_min).sqrt();
        let lo = self.sites.partition_point(|s| s.x < px - reach);
        let hi = self.sites.partition_point(|s| s.x <= px + reach);
        for i in lo..hi {
            let q = self.q(i, px);
            if q < bq || (q == bq && (self.sites[i].tier, i) < (self.sites[best].tier, best)) {
                bq = q;
                best = i;
            }
        }
        best
    }

    fn refine(&self, s0: f64, w0: usize, s1: f64, w1: usize, counts: &mut [[u32; 3]; 3]) {
        if s1 - s0 <= RESOLUTION {
            counts[self.sites[w0].tier.index()][self.sites[w1].tier.index()] += 1;
            return;
        }
        let mid = 0.5 * (s0 + s1);
        let wm = self.best(mid, w0);
        if wm != w0 {
            self.refine(s0, w0, mid, wm, counts);
        }
        if wm != w1 {
            self.refine(mid, wm, s1, w1, counts);
        }
    }
}

fn guard_margin(config: &NetworkConfig) -> Result<f64> {
    let lam_min = TierId::ALL
        .iter()
        .map(|&k| config[k].intensity)
        .filter(|&l| l > 0.0)
        .fold(f64::INFINITY, f64::min);
    if !lam_min.is_finite() {
        return Err(Error::EmptyDeployment);
    }
    Ok(5.0 / lam_min.sqrt())
}

fn trial_counts(config: &NetworkConfig, length: f64, guard: f64, seed: u64, trial: u64) -> Result<[[u32; 3]; 3]> {
    let mut rng = trial_rng(seed, trial);
    let w = association_weights(config);
    let (x0, x1, half) = (-guard, length + guard, guard);
    let area = (x1 - x0) * 2.0 * half;
    let mut sites = Vec::new();
    for k in TierId::ALL {
        let n = poisson_count(config[k].intensity * area, &mut rng);
        let h2 = config[k].height.powi(2);
        for _ in 0..n {
            let x = x0 + (x1 - x0) * rng.random::<f64>();
            let y = half * (2.0 * rng.random::<f64>() - 1.0);
            sites.push(Site { x, offset: w[k.index()] * (y * y + h2), w: w[k.index()], tier: k });
        }
    }
    if sites.is_empty() {
        return Err(Error::EmptyDeployment);
    }
    sites.sort_by(|a, b| a.x.total_cmp(&b.x));
    let w_min = TierId::ALL
        .iter()
        .filter(|&&k| config[k].intensity > 0.0)
        .map(|&k| w[k.index()])
        .fold(f64::INFINITY, f64::min);
    let track = Track { sites, w_min };

    // Full scan for the first position, then local searches.
    let mut current = (0..track.sites.len())
        .min_by(|&a, &b| track.q(a, 0.0).total_cmp(&track.q(b, 0.0)))
        .unwrap_or(0);
    current = track.best(0.0, current);
    let steps = (length / STEP).ceil() as usize;
    let mut counts = [[0u32; 3]; 3];
    let mut prev_s = 0.0;
    for i in 1..=steps {
        let s = length * i as f64 / steps as f64;
        let next = track.best(s, current);
        if next != current {
            track.refine(prev_s, current, s, next, &mut counts);
        }
        current = next;
        prev_s = s;
    }
    Ok(counts)
}

/// Walks `trials` straight trajectories of `trajectory_length` metres at
/// speed `velocity` and returns handover rates per (from, to) tier pair.
pub fn simulate_handovers(
    config: &NetworkConfig,
    velocity: f64,
    trajectory_length: f64,
    trials: usize,
    seed: u64,
) -> Result<HandoverSimulation> {
    if !(trajectory_length > 0.0) || trials < 2 {
        return Err(Error::Domain("need a positive trajectory length and at least two trials".into()));
    }
    if !(velocity >= 0.0) {
        return Err(Error::Domain(format!("velocity must be non-negative, got {velocity}")));
    }
    let guard = guard_margin(config)?;
    let per_trial = (0..trials as u64)
        .into_par_iter()
        .map(|t| trial_counts(config, trajectory_length, guard, seed, t))
        .collect::<Result<Vec<_>>>()?;

    let scale = velocity / trajectory_length;
    let mut moments = [[Moments::default(); 3]; 3];
    let mut total = Moments::default();
    for c in &per_trial {
        let mut sum = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let v = if i == j {
                    c[i][j] as f64
                } else {
                    0.5 * (c[i][j] + c[j][i]) as f64
                };
                moments[i][j].push(v * scale);
                sum += c[i][j] as f64;
            }
        }
        total.push(sum * scale);
    }
    Ok(HandoverSimulation {
        velocity,
        trajectory_length,
        trials,
        rates: moments.map(|row| row.map(|m| m.estimate())),
        total: total.estimate(),
    })
}
