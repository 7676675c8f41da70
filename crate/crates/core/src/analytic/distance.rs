//! Horizontal serving-distance law per tier.

use super::association::ServingGeometry;
use crate::model::{NetworkConfig, TierId};
use crate::scalar::Real;

/// Density of the horizontal distance X_k to the serving BS, given that the
/// user associates with tier `tier`. Zero for negative `x`.
pub fn serving_distance_pdf<S: Real>(tier: TierId, x: S, config: &NetworkConfig<S>) -> S {
    if !(x >= S::zero()) || config[tier].intensity <= S::zero() {
        return S::zero();
    }
    let geo = ServingGeometry::new(tier, config);
    let a_k = geo.mass(S::zero(), S::infinity());
    if a_k <= S::zero() {
        return S::zero();
    }
    S::lit(2.0) * x * (geo.log_density(x * x) - a_k.ln()).exp()
}

/// P[X_k ≤ x | association with `tier`].
pub fn serving_distance_cdf<S: Real>(tier: TierId, x: S, config: &NetworkConfig<S>) -> S {
    if !(x > S::zero()) {
        return S::zero();
    }
    let geo = ServingGeometry::new(tier, config);
    let a_k = geo.mass(S::zero(), S::infinity());
    if a_k <= S::zero() {
        return S::zero();
    }
    if x.is_infinite() {
        return S::one();
    }
    let tail = geo.mass(x * x, S::infinity());
    (S::one() - tail / a_k).max(S::zero()).min(S::one())
}

/// Horizontal distances (m) where the density of `tier` has a kink.
pub fn distance_kinks<S: Real>(tier: TierId, config: &NetworkConfig<S>) -> Vec<S> {
    ServingGeometry::new(tier, config).kinks().into_iter().map(|u| u.sqrt()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{integrate_panels, QuadratureSpec};

    fn normalisation(tier: TierId, cfg: &NetworkConfig) -> f64 {
        let mut breaks = vec![0.0];
        breaks.extend(distance_kinks(tier, cfg));
        breaks.push(f64::INFINITY);
        let lam = cfg.total_intensity();
        let scale = 1.0 / (std::f64::consts::PI * lam).sqrt();
        let spec = QuadratureSpec::default().tightened(100.0);
        integrate_panels(|x| serving_distance_pdf(tier, x, cfg), &breaks, scale, &spec)
            .unwrap()
            .value
    }

    #[test]
    fn densities_integrate_to_one() {
        let cfg = NetworkConfig::<f64>::baseline();
        for k in TierId::ALL {
            let total = normalisation(k, &cfg);
            assert!((total - 1.0).abs() < 1e-8, "{k}: {total}");
        }
    }

    #[test]
    fn cdf_is_integral_of_pdf() {
        let cfg = NetworkConfig::<f64>::baseline();
        let spec = QuadratureSpec::default().tightened(100.0);
        for k in TierId::ALL {
            let mut breaks = vec![0.0];
            breaks.extend(distance_kinks(k, &cfg).into_iter().filter(|&b| b < 150.0));
            breaks.push(150.0);
            let integral =
                integrate_panels(|x| serving_distance_pdf(k, x, &cfg), &breaks, 1.0, &spec)
                    .unwrap()
                    .value;
            let cdf = serving_distance_cdf(k, 150.0, &cfg);
            assert!((integral - cdf).abs() < 1e-9, "{k}: {integral} vs {cdf}");
        }
    }

    #[test]
    fn cdf_limits_and_monotonicity() {
        let cfg = NetworkConfig::<f64>::baseline();
        for k in TierId::ALL {
            assert_eq!(serving_distance_cdf(k, 0.0, &cfg), 0.0);
            assert_eq!(serving_distance_cdf(k, f64::INFINITY, &cfg), 1.0);
            let mut prev = 0.0;
            for i in 1..400 {
                let c = serving_distance_cdf(k, i as f64 * 2.5, &cfg);
                assert!(c >= prev);
                prev = c;
            }
            assert!(prev > 0.99);
        }
    }

    #[test]
    fn density_is_non_negative_and_zero_outside_support() {
        let cfg = NetworkConfig::<f64>::baseline();
        for k in TierId::ALL {
            assert_eq!(serving_distance_pdf(k, -1.0, &cfg), 0.0);
            for i in 0..500 {
                assert!(serving_distance_pdf(k, i as f64, &cfg) >= 0.0);
            }
        }
    }

    #[test]
    fn single_tier_is_rayleigh() {
        let mut cfg = NetworkConfig::<f64>::baseline();
        cfg[TierId::Macro].intensity = 0.0;
        cfg[TierId::Small].intensity = 0.0;
        let lam = cfg[TierId::Uav].intensity;
        let pi = std::f64::consts::PI;
        for x in [1.0, 50.0, 200.0, 600.0] {
            let expected = 2.0 * pi * lam * x * (-pi * lam * x * x).exp();
            let got = serving_distance_pdf(TierId::Uav, x, &cfg);
            assert!((got / expected - 1.0).abs() < 1e-12);
        }
    }
}
