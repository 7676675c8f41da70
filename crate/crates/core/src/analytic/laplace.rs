//! Laplace transform of the aggregate interference under Rayleigh fading.

use crate::error::{Error, Result};
use crate::model::{power_ratio, Mode, NetworkConfig, TierId};
use crate::scalar::Real;
use crate::specfun::interference_integral;

/// log 𝓛_I(T·z^η/P_k) for a user served by `tier` at 3-D distance `z`.
///
/// Interferers of tier j lie at 3-D distance at least
/// r_j = max(h_j, √P_jk · z): the association rule keeps them beyond
/// √P_jk · z and their antenna height keeps them beyond h_j. Each tier adds
///
/// ```text
/// −2πλ_j r_j² · τ_j/(η−2) · ₂F₁(1, 1−2/η; 2−2/η; −τ_j),   τ_j = T (P_j/P_k)(z/r_j)^η
/// ```
///
/// which is the usual −2πλ_j P_jk z² T/(η−2)·₂F₁(…; −T) whenever the
/// association constraint is the binding one.
pub fn log_laplace_interference<S: Real>(
    mode: Mode,
    tier: TierId,
    threshold: S,
    z: S,
    config: &NetworkConfig<S>,
) -> Result<S> {
    if !(threshold >= S::zero()) {
        return Err(Error::Domain(format!("threshold must be non-negative, got {threshold}")));
    }
    if !(z >= S::zero()) {
        return Err(Error::Domain(format!("serving distance must be non-negative, got {z}")));
    }
    let eta = config.path_loss_exponent;
    let z2 = z * z;
    let mut log_lt = S::zero();
    for &j in mode.interferers(tier) {
        let lam = config[j].intensity;
        if lam <= S::zero() || threshold == S::zero() {
            continue;
        }
        let p_jk = power_ratio(j, tier, config);
        let r2 = config[j].height.powi(2).max(p_jk * z2);
        if r2 <= S::zero() {
            continue;
        }
        // P_j/P_k = P_jk^(η/2); (z²/r²)^(η/2)·P_jk^(η/2) = (P_jk z²/r²)^(η/2).
        let tau = threshold * (p_jk * z2 / r2).powf(eta / S::lit(2.0));
        log_lt = log_lt - S::lit(2.0) * S::PI() * lam * r2 * interference_integral(eta, tau)?;
    }
    Ok(log_lt)
}

/// d/d(z²) of −log 𝓛_I once every association constraint binds:
/// 2π·I(T)·Σ_j λ_j P_jk, with I the normalised interference integral.
pub(crate) fn laplace_decay_rate<S: Real>(
    mode: Mode,
    tier: TierId,
    threshold: S,
    config: &NetworkConfig<S>,
) -> Result<S> {
    let weight = mode
        .interferers(tier)
        .iter()
        .fold(S::zero(), |acc, &j| acc + config[j].intensity * power_ratio(j, tier, config));
    Ok(S::lit(2.0) * S::PI() * weight * interference_integral(config.path_loss_exponent, threshold)?)
}

/// 𝓛_I(T·z^η/P_k); see [`log_laplace_interference`].
pub fn laplace_interference<S: Real>(
    mode: Mode,
    tier: TierId,
    threshold: S,
    z: S,
    config: &NetworkConfig<S>,
) -> Result<S> {
    log_laplace_interference(mode, tier, threshold, z, config).map(|v| v.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{integrate, QuadratureSpec};

    #[test]
    fn zero_threshold_gives_one() {
        let cfg = NetworkConfig::<f64>::baseline();
        for mode in Mode::ALL {
            for k in TierId::ALL {
                assert_eq!(laplace_interference(mode, k, 0.0, 120.0, &cfg).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn no_uav_interferers_gives_one() {
        let mut cfg = NetworkConfig::<f64>::baseline();
        cfg[TierId::Uav].intensity = 0.0;
        for t in [0.1, 1.0, 10.0, 1e4] {
            let v = laplace_interference(Mode::Split, TierId::Uav, t, 60.0, &cfg).unwrap();
            assert_eq!(v, 1.0);
        }
    }

    #[test]
    fn negative_threshold_rejected() {
        let cfg = NetworkConfig::<f64>::baseline();
        assert!(laplace_interference(Mode::Split, TierId::Macro, -1.0, 60.0, &cfg).is_err());
    }

    /// Direct radial integration of the PPP probability generating functional.
    fn radial_oracle(mode: Mode, k: TierId, t: f64, z: f64, cfg: &NetworkConfig) -> f64 {
        let eta = cfg.path_loss_exponent;
        let s = t * z.powf(eta) / cfg[k].power;
        let spec = QuadratureSpec::default().tightened(100.0);
        let mut log_lt = 0.0;
        for &j in mode.interferers(k) {
            let p_jk = power_ratio(j, k, cfg);
            let hj2 = cfg[j].height.powi(2);
            let y0 = (p_jk * z * z - hj2).max(0.0).sqrt();
            let pj = cfg[j].power;
            let integral = integrate(
                |y: f64| {
                    let d2 = y * y + hj2;
                    let g = s * pj * d2.powf(-eta / 2.0);
                    y * g / (1.0 + g)
                },
                y0,
                f64::INFINITY,
                &spec,
            )
            .unwrap();
            log_lt -= 2.0 * std::f64::consts::PI * cfg[j].intensity * integral;
        }
        log_lt.exp()
    }

    #[test]
    fn matches_radial_integration() {
        let cfg = NetworkConfig::<f64>::baseline();
        for mode in Mode::ALL {
            for k in TierId::ALL {
                for &t in &[0.3, 1.0, 10.0] {
                    for &x in &[0.0, 30.0, 100.0, 400.0] {
                        let z = (x * x + cfg[k].height.powi(2)).sqrt();
                        let got = laplace_interference(mode, k, t, z, &cfg).unwrap();
                        let want = radial_oracle(mode, k, t, z, &cfg);
                        assert!((got - want).abs() < 1e-9, "{mode}/{k} T={t} x={x}: {got} vs {want}");
                    }
                }
            }
        }
    }

    #[test]
    fn split_never_below_conventional() {
        let cfg = NetworkConfig::<f64>::baseline();
        for k in TierId::ALL {
            for &t in &[0.1, 1.0, 10.0, 100.0] {
                let z = 80.0;
                let con = laplace_interference(Mode::Conventional, k, t, z, &cfg).unwrap();
                let sp = laplace_interference(Mode::Split, k, t, z, &cfg).unwrap();
                assert!(sp >= con);
            }
        }
    }
}
