//! Length intensity of cell boundaries in the weighted (max-RSS) tessellation.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{NetworkConfig, TierId};
use crate::montecarlo::{trial_rng, SimEstimate};

/// Relative standard error above which [`boundary_intensities`] refuses to
/// return an estimate.
pub const MAX_RELATIVE_SE: f64 = 0.05;

/// Boundary length per unit area (m/m²) between tiers i and j, symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryIntensities {
    pub mu: [[f64; 3]; 3],
    pub standard_error: [[f64; 3]; 3],
    /// Sum over unordered pairs.
    pub total: SimEstimate,
    /// Covariance of the estimated means of the unordered pairs, in
    /// `[mm, ms, mv, ss, sv, vv]` order.
    pub covariance: [[f64; 6]; 6],
}

impl BoundaryIntensities {
    pub fn get(&self, i: TierId, j: TierId) -> f64 {
        self.mu[i.index()][j.index()]
    }

    /// μ multiplied by `factor` (standard errors likewise).
    pub fn scaled(&self, factor: f64) -> Self {
        BoundaryIntensities {
            mu: self.mu.map(|r| r.map(|v| v * factor)),
            standard_error: self.standard_error.map(|r| r.map(|v| v * factor.abs())),
            total: SimEstimate {
                value: self.total.value * factor,
                standard_error: self.total.standard_error * factor.abs(),
                samples: self.total.samples,
            },
            covariance: self.covariance.map(|r| r.map(|v| v * factor * factor)),
        }
    }

    /// Standard error of Σ_ij w_ij·μ_ij (ordered pairs).
    pub fn linear_standard_error(&self, weights: &[[f64; 3]; 3]) -> f64 {
        let c: Vec<f64> = PAIRS
            .iter()
            .map(|&(i, j)| if i == j { weights[i][i] } else { weights[i][j] + weights[j][i] })
            .collect();
        let mut var = 0.0;
        for a in 0..6 {
            for b in 0..6 {
                var += c[a] * self.covariance[a][b] * c[b];
            }
        }
        var.max(0.0).sqrt()
    }

    /// Builds the symmetric matrix from per-replicate unordered-pair values
    /// (`[mm, ms, mv, ss, sv, vv]` order).
    fn from_replicates(values: &[[f64; 6]]) -> Self {
        let mut mu = [[0.0; 3]; 3];
        let mut se = [[0.0; 3]; 3];
        for (p, (i, j)) in PAIRS.iter().enumerate() {
            let est = SimEstimate::from_samples(values.iter().map(|v| v[p]));
            mu[*i][*j] = est.value;
            mu[*j][*i] = est.value;
            se[*i][*j] = est.standard_error;
            se[*j][*i] = est.standard_error;
        }
        let total = SimEstimate::from_samples(values.iter().map(|v| v.iter().sum::<f64>()));
        let n = values.len() as f64;
        let mut covariance = [[0.0; 6]; 6];
        if values.len() > 1 {
            let mean: [f64; 6] = std::array::from_fn(|p| values.iter().map(|v| v[p]).sum::<f64>() / n);
            for v in values {
                for a in 0..6 {
                    for b in 0..6 {
                        covariance[a][b] += (v[a] - mean[a]) * (v[b] - mean[b]);
                    }
                }
            }
            let norm = (n - 1.0) * n;
            covariance = covariance.map(|r| r.map(|x| x / norm));
        }
        BoundaryIntensities { mu, standard_error: se, total, covariance }
    }
}

const PAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

fn pair_slot(a: usize, b: usize) -> usize {
    let (i, j) = if a <= b { (a, b) } else { (b, a) };
    PAIRS.iter().position(|&p| p == (i, j)).expect("valid tier pair")
}

/// Chord-sampling parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryEstimation {
    pub chords: usize,
    /// Chord length (m).
    pub length: f64,
    pub seed: u64,
}

impl BoundaryEstimation {
    /// `chords` chords of length 10/√Λ.
    pub fn for_config(config: &NetworkConfig, chords: usize, seed: u64) -> Self {
        BoundaryEstimation { chords, length: 10.0 / config.total_intensity().sqrt(), seed }
    }

    fn check(&self) -> Result<()> {
        if self.chords < 2 || !(self.length > 0.0) || !self.length.is_finite() {
            return Err(Error::Domain("boundary estimation needs ≥ 2 chords of positive length".into()));
        }
        Ok(())
    }
}

/// Weighted squared distance w·(d² + h²) with w = P^(−2/η); the user is
/// served by the BS that minimises it.
fn weights(config: &NetworkConfig) -> [f64; 3] {
    let e = -2.0 / config.path_loss_exponent;
    TierId::ALL.map(|k| config[k].power.powf(e))
}

/// Per-tier half-widths of the region outside which a BS cannot serve any
/// point of a line: every point of the plane has, except with probability
/// e^(−25π), a tier-j BS within horizontal distance 5/√λ_j.
fn reach(config: &NetworkConfig) -> Result<[f64; 3]> {
    let w = weights(config);
    let q_star = TierId::ALL
        .iter()
        .filter(|&&k| config[k].intensity > 0.0)
        .map(|&k| w[k.index()] * (25.0 / config[k].intensity + config[k].height.powi(2)))
        .fold(f64::INFINITY, f64::min);
    if !q_star.is_finite() {
        return Err(Error::EmptyDeployment);
    }
    Ok(TierId::ALL.map(|k| (q_star / w[k.index()] - config[k].height.powi(2)).max(0.0).sqrt()))
}

#[derive(Clone, Copy)]
struct Site {
    x: f64,
    offset: f64,
    w: f64,
    tier: usize,
}

impl Site {
    fn q(&self, t: f64) -> f64 {
        self.w * (t - self.x).powi(2) + self.offset
    }
}

/// Smallest root of a·t² + b·t + c beyond `after` at which the polynomial
/// turns negative.
fn next_descent(a: f64, b: f64, c: f64, after: f64) -> Option<f64> {
    let descending = |t: f64| 2.0 * a * t + b < 0.0;
    if a == 0.0 {
        if b == 0.0 {
            return None;
        }
        let t = -c / b;
        return (t > after && descending(t)).then_some(t);
    }
    let disc = b * b - 4.0 * a * c;
    if disc <= 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + b.signum() * sq);
    let (mut r1, mut r2) = (q / a, if q != 0.0 { c / q } else { -b / a });
    if r1 > r2 {
        std::mem::swap(&mut r1, &mut r2);
    }
    [r1, r2].into_iter().find(|&t| t > after && descending(t))
}

/// Unordered-pair boundary crossings along the segment [0, ℓ] × {0}.
fn chord_crossings(config: &NetworkConfig, length: f64, reach: &[f64; 3], seed: u64, trial: u64) -> Result<[u32; 6]> {
    let mut rng = trial_rng(seed, trial);
    let w = weights(config);
    let mut sites = Vec::new();
    for k in TierId::ALL {
        let d = reach[k.index()];
        let (x0, x1) = (-d, length + d);
        let area = (x1 - x0) * 2.0 * d;
        let n = crate::montecarlo::poisson_count(config[k].intensity * area, &mut rng);
        let h2 = config[k].height.powi(2);
        for _ in 0..n {
            let x = x0 + (x1 - x0) * rng.random::<f64>();
            let y = d * (2.0 * rng.random::<f64>() - 1.0);
            sites.push(Site { x, offset: w[k.index()] * (y * y + h2), w: w[k.index()], tier: k.index() });
        }
    }
    if sites.is_empty() {
        return Err(Error::EmptyDeployment);
    }
    let mut cur = (0..sites.len())
        .min_by(|&a, &b| sites[a].q(0.0).total_cmp(&sites[b].q(0.0)))
        .expect("non-empty");
    let mut t = 0.0;
    let mut counts = [0u32; 6];
    let eps = 1e-9 * length;
    loop {
        let c = sites[cur];
        let mut next: Option<(f64, usize)> = None;
        for (i, b) in sites.iter().enumerate() {
            if i == cur {
                continue;
            }
            // q_b − q_c as a polynomial in t.
            let a2 = b.w - c.w;
            let a1 = -2.0 * (b.w * b.x - c.w * c.x);
            let a0 = b.w * b.x * b.x + b.offset - c.w * c.x * c.x - c.offset;
            if let Some(r) = next_descent(a2, a1, a0, t + eps) {
                if next.is_none_or(|(best, _)| r < best) {
                    next = Some((r, i));
                }
            }
        }
        match next {
            Some((r, i)) if r < length => {
                counts[pair_slot(c.tier, sites[i].tier)] += 1;
                cur = i;
                t = r;
            }
            _ => break,
        }
    }
    Ok(counts)
}

/// Boundary length intensities from the number of typed boundary crossings
/// along random chords: a chord of length ℓ crosses (2/π)·μ·ℓ boundary
/// length on average in an isotropic tessellation.
pub fn boundary_intensities(config: &NetworkConfig, est: &BoundaryEstimation) -> Result<BoundaryIntensities> {
    est.check()?;
    let reach = reach(config)?;
    let counts = (0..est.chords as u64)
        .into_par_iter()
        .map(|t| chord_crossings(config, est.length, &reach, est.seed, t))
        .collect::<Result<Vec<_>>>()?;
    let factor = std::f64::consts::PI / (2.0 * est.length);
    let values: Vec<[f64; 6]> = counts.iter().map(|c| c.map(|n| n as f64 * factor)).collect();
    let mu = BoundaryIntensities::from_replicates(&values);
    let rel = mu.total.standard_error / mu.total.value;
    if !(rel <= MAX_RELATIVE_SE) {
        return Err(Error::InsufficientSamples { relative_se: rel, limit: MAX_RELATIVE_SE });
    }
    Ok(mu)
}

/// Lower envelope of the parabolas (x − s)² + c over sorted centres `s`,
/// evaluated at x = 0.5, 1.5, …; writes the winning item index per pixel.
struct Envelope {
    v: Vec<usize>,
    z: Vec<f64>,
}

impl Envelope {
    fn new() -> Self {
        Envelope { v: Vec::new(), z: Vec::new() }
    }

    fn evaluate(&mut self, s: &[f64], c: &[f64], width: usize, out_q: &mut [f64], out_id: &mut [usize]) {
        self.v.clear();
        self.z.clear();
        let cross = |a: usize, b: usize| ((c[b] + s[b] * s[b]) - (c[a] + s[a] * s[a])) / (2.0 * (s[b] - s[a]));
        for i in 0..s.len() {
            loop {
                let Some(&last) = self.v.last() else {
                    self.v.push(i);
                    break;
                };
                if s[i] == s[last] {
                    if c[i] < c[last] {
                        self.v.pop();
                        self.z.pop();
                        continue;
                    }
                    break;
                }
                let x = cross(last, i);
                if self.z.last().is_some_and(|&zl| x <= zl) {
                    self.v.pop();
                    self.z.pop();
                    continue;
                }
                self.z.push(x);
                self.v.push(i);
                break;
            }
        }
        // self.z[k] is where v[k+1] takes over from v[k].
        let mut k = 0;
        for px in 0..width {
            let x = px as f64 + 0.5;
            while k < self.z.len() && self.z[k] < x {
                k += 1;
            }
            let i = self.v[k];
            out_q[px] = (x - s[i]).powi(2) + c[i];
            out_id[px] = i;
        }
    }
}

/// Independent estimate from rasterised tessellations: `windows` squares of
/// `side` metres at 1 m resolution, boundaries counted as label changes
/// between horizontally and vertically adjacent pixels.
pub fn raster_boundary_intensities(
    config: &NetworkConfig,
    side: usize,
    windows: usize,
    seed: u64,
) -> Result<BoundaryIntensities> {
    if side < 16 || windows < 2 {
        return Err(Error::Domain("raster estimation needs side ≥ 16 m and ≥ 2 windows".into()));
    }
    let reach = reach(config)?;
    let w = weights(config);
    let values = (0..windows as u64)
        .into_par_iter()
        .map(|t| -> Result<[f64; 6]> {
            let mut rng = trial_rng(seed, t);
            let l = side as f64;
            // Per tier: sites sorted by x; (x, y, offset/w).
            let mut tiers: Vec<Vec<(f64, f64, f64)>> = Vec::new();
            for k in TierId::ALL {
                let d = reach[k.index()];
                let span = l + 2.0 * d;
                let n = crate::montecarlo::poisson_count(config[k].intensity * span * span, &mut rng);
                let h2 = config[k].height.powi(2);
                let mut v: Vec<(f64, f64, f64)> = (0..n)
                    .map(|_| (-d + span * rng.random::<f64>(), -d + span * rng.random::<f64>(), h2))
                    .collect();
                v.sort_by(|a, b| a.0.total_cmp(&b.0));
                tiers.push(v);
            }
            if tiers.iter().all(Vec::is_empty) {
                return Err(Error::EmptyDeployment);
            }
            let mut env = Envelope::new();
            let mut q = vec![0.0; side];
            let mut id = vec![0usize; side];
            let mut best_q = vec![0.0; side];
            let mut label = vec![(0usize, 0usize); side];
            let mut prev = vec![(usize::MAX, 0usize); side];
            let mut counts = [0u64; 6];
            let mut s = Vec::new();
            let mut c = Vec::new();
            for row in 0..side {
                let y = row as f64 + 0.5;
                best_q.iter_mut().for_each(|v| *v = f64::INFINITY);
                for (k, sites) in tiers.iter().enumerate() {
                    if sites.is_empty() {
                        continue;
                    }
                    s.clear();
                    c.clear();
                    for &(sx, sy, h2) in sites {
                        s.push(sx);
                        c.push((y - sy).powi(2) + h2);
                    }
                    env.evaluate(&s, &c, side, &mut q, &mut id);
                    for px in 0..side {
                        let wq = w[k] * q[px];
                        if wq < best_q[px] {
                            best_q[px] = wq;
                            label[px] = (k, id[px]);
                        }
                    }
                }
                for px in 0..side {
                    if px > 0 && label[px] != label[px - 1] {
                        counts[pair_slot(label[px].0, label[px - 1].0)] += 1;
                    }
                    if prev[px].0 != usize::MAX && label[px] != prev[px] {
                        counts[pair_slot(label[px].0, prev[px].0)] += 1;
                    }
                }
                prev.copy_from_slice(&label);
            }
            // Crossings per unit area of a line family with unit spacing is
            // (2/π)·μ; two orthogonal families are averaged.
            let pairs = (side * (side - 1)) as f64;
            let factor = std::f64::consts::PI / 4.0 / pairs;
            Ok(counts.map(|n| n as f64 * factor))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundaryIntensities::from_replicates(&values))
}
