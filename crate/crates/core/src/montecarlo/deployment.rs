use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::trial_rng;
use crate::error::{Error, Result};
use crate::model::{NetworkConfig, TierId};

/// Base-station positions of one network realisation, in a disk centred on
/// the user.
#[derive(Debug, Clone, PartialEq)]
pub struct Deployment {
    /// Horizontal coordinates (m) per tier, indexed by [`TierId::index`].
    pub points: [Vec<[f64; 2]>; 3],
    pub window_radius: f64,
    pub seed: u64,
}

impl Deployment {
    pub fn tier(&self, k: TierId) -> &[[f64; 2]] {
        &self.points[k.index()]
    }

    pub fn len(&self) -> usize {
        self.points.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Poisson(mean) draw; zero mean gives zero.
pub(crate) fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).map(|d| d.sample(rng) as usize).unwrap_or(0)
}

/// Fills `out` with a homogeneous PPP of `intensity` in the disk of radius `r`.
pub(crate) fn ppp_disk<R: Rng + ?Sized>(intensity: f64, r: f64, rng: &mut R, out: &mut Vec<[f64; 2]>) {
    out.clear();
    let n = poisson_count(intensity * std::f64::consts::PI * r * r, rng);
    out.reserve(n);
    for _ in 0..n {
        let rho = r * rng.random::<f64>().sqrt();
        let theta = std::f64::consts::TAU * rng.random::<f64>();
        out.push([rho * theta.cos(), rho * theta.sin()]);
    }
}

/// Independent PPPs for all tiers in a disk of `window_radius` around the origin.
pub fn sample_deployment(config: &NetworkConfig, window_radius: f64, seed: u64) -> Deployment {
    let mut rng = trial_rng(seed, 0);
    let mut points: [Vec<[f64; 2]>; 3] = Default::default();
    for k in TierId::ALL {
        ppp_disk(config[k].intensity, window_radius, &mut rng, &mut points[k.index()]);
    }
    Deployment { points, window_radius, seed }
}

/// Serving base station of a user at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Association {
    pub tier: TierId,
    pub index: usize,
    /// 3-D distance (m).
    pub distance: f64,
    /// Horizontal distance (m).
    pub horizontal: f64,
}

/// Weight w_k = P_k^(−2/η): the user attaches to the BS minimising w_k·Z².
pub(crate) fn association_weights(config: &NetworkConfig) -> [f64; 3] {
    let e = -2.0 / config.path_loss_exponent;
    TierId::ALL.map(|k| config[k].power.powf(e))
}

/// Max-RSS association of a user at the origin. Ties go to the lower tier.
pub fn associate(deployment: &Deployment, config: &NetworkConfig) -> Result<Association> {
    let w = association_weights(config);
    let mut best: Option<(f64, Association)> = None;
    for k in TierId::ALL {
        let h2 = config[k].height.powi(2);
        for (index, p) in deployment.tier(k).iter().enumerate() {
            let r2 = p[0] * p[0] + p[1] * p[1];
            let q = w[k.index()] * (r2 + h2);
            if best.as_ref().is_none_or(|(bq, _)| q < *bq) {
                let a = Association { tier: k, index, distance: (r2 + h2).sqrt(), horizontal: r2.sqrt() };
                best = Some((q, a));
            }
        }
    }
    best.map(|(_, a)| a).ok_or(Error::EmptyDeployment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::SimEstimate;

    fn cfg() -> NetworkConfig {
        NetworkConfig::baseline()
    }

    #[test]
    fn empty_tier() {
        let mut c = cfg();
        c[TierId::Small].intensity = 0.0;
        let d = sample_deployment(&c, 2000.0, 3);
        assert!(d.tier(TierId::Small).is_empty());
        assert!(!d.tier(TierId::Macro).is_empty());
    }

    #[test]
    fn deterministic() {
        let a = sample_deployment(&cfg(), 1500.0, 11);
        let b = sample_deployment(&cfg(), 1500.0, 11);
        let c = sample_deployment(&cfg(), 1500.0, 12);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn points_inside_window() {
        let d = sample_deployment(&cfg(), 800.0, 5);
        for k in TierId::ALL {
            for p in d.tier(k) {
                assert!(p[0].hypot(p[1]) <= 800.0);
            }
        }
    }

    #[test]
    fn mean_count() {
        let c = cfg();
        let r = 2000.0;
        let est = SimEstimate::from_samples(
            (0..10_000u64).map(|s| sample_deployment(&c, r, s).tier(TierId::Small).len() as f64),
        );
        let expected = 15e-6 * std::f64::consts::PI * r * r;
        assert!((expected - 188.4956).abs() < 1e-3);
        assert!(est.agrees_with(expected, 3.0), "{est:?}");
    }

    #[test]
    fn single_bs_and_nearest() {
        let c = cfg();
        let mut d = Deployment { points: Default::default(), window_radius: 100.0, seed: 0 };
        assert!(matches!(associate(&d, &c), Err(Error::EmptyDeployment)));
        d.points[2].push([30.0, 40.0]);
        let a = associate(&d, &c).unwrap();
        assert_eq!((a.tier, a.index), (TierId::Uav, 0));
        assert!((a.horizontal - 50.0).abs() < 1e-12);

        let mut same = cfg();
        for k in TierId::ALL {
            same[k].power = 1.0;
            same[k].height = 10.0;
        }
        let mut d = Deployment { points: Default::default(), window_radius: 100.0, seed: 0 };
        d.points[1] = vec![[20.0, 0.0], [0.0, 10.0]];
        let a = associate(&d, &same).unwrap();
        assert_eq!(a.index, 1);
    }

    #[test]
    fn tie_goes_to_lower_tier() {
        let mut same = cfg();
        for k in TierId::ALL {
            same[k].power = 1.0;
            same[k].height = 10.0;
        }
        let mut d = Deployment { points: Default::default(), window_radius: 100.0, seed: 0 };
        d.points[2].push([10.0, 0.0]);
        d.points[1].push([0.0, 10.0]);
        assert_eq!(associate(&d, &same).unwrap().tier, TierId::Small);
    }
}
