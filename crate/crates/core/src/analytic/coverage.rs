//! SINR coverage: conditional on the serving distance, per tier, and overall.

use super::association::{association_probabilities, ServingGeometry};
use super::laplace::{laplace_decay_rate, log_laplace_interference};
use crate::error::{Error, Result};
use crate::model::{Mode, NetworkConfig, TierId};
use crate::scalar::Real;
use crate::specfun::{integrate_panels, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageResult<S = f64> {
    pub mode: Mode,
    /// Linear SINR threshold.
    pub threshold: S,
    /// C_m, C_s, C_v.
    pub per_tier: [S; 3],
    pub overall: S,
}

impl<S: Real> CoverageResult<S> {
    pub fn get(&self, k: TierId) -> S {
        self.per_tier[k.index()]
    }
}

/// P[SINR > T | serving tier, horizontal distance `x`].
pub fn conditional_coverage<S: Real>(
    mode: Mode,
    tier: TierId,
    threshold: S,
    x: S,
    config: &NetworkConfig<S>,
) -> Result<S> {
    if !(x >= S::zero()) {
        return Err(Error::Domain(format!("distance must be non-negative, got {x}")));
    }
    let z2 = x * x + config[tier].height.powi(2);
    log_conditional(mode, tier, threshold, z2, config).map(|v| v.exp())
}

fn log_conditional<S: Real>(
    mode: Mode,
    tier: TierId,
    threshold: S,
    z2: S,
    config: &NetworkConfig<S>,
) -> Result<S> {
    let eta = config.path_loss_exponent;
    let noise = if config.noise_power > S::zero() && threshold > S::zero() {
        -threshold * config.noise_power * z2.powf(eta / S::lit(2.0)) / config[tier].power
    } else {
        S::zero()
    };
    Ok(noise + log_laplace_interference(mode, tier, threshold, z2.sqrt(), config)?)
}

/// C_k(T): conditional coverage averaged over the serving-distance law of `tier`.
pub fn coverage_probability<S: Real>(
    mode: Mode,
    tier: TierId,
    threshold: S,
    config: &NetworkConfig<S>,
) -> Result<S> {
    coverage_probability_with(mode, tier, threshold, config, &QuadratureSpec::default())
}

pub fn coverage_probability_with<S: Real>(
    mode: Mode,
    tier: TierId,
    threshold: S,
    config: &NetworkConfig<S>,
    spec: &QuadratureSpec<S>,
) -> Result<S> {
    if !(threshold >= S::zero()) {
        return Err(Error::Domain(format!("threshold must be non-negative, got {threshold}")));
    }
    let geo = ServingGeometry::new(tier, config);
    let a_k = geo.mass(S::zero(), S::infinity());
    if a_k <= S::zero() {
        return Ok(S::zero());
    }
    if threshold == S::zero() {
        return Ok(S::one());
    }
    if threshold.is_infinite() {
        return Ok(S::zero());
    }
    let hk2 = config[tier].height.powi(2);
    let log_a = a_k.ln();
    let mut failure = None;
    let integrand = |u: S| {
        if u.is_infinite() {
            return S::zero();
        }
        match log_conditional(mode, tier, threshold, u + hk2, config) {
            Ok(lc) => (lc + geo.log_density(u) - log_a).exp(),
            Err(e) => {
                failure.get_or_insert(e);
                S::zero()
            }
        }
    };
    let mut breaks = vec![S::zero()];
    breaks.extend(geo.kinks());
    breaks.push(S::infinity());
    let mut decay = geo.tail_rate() + laplace_decay_rate(mode, tier, threshold, config)?;
    if config.noise_power > S::zero() {
        // u at which the noise term alone reaches e^(−1).
        let u_noise = (config[tier].power / (threshold * config.noise_power))
            .powf(S::lit(2.0) / config.path_loss_exponent);
        decay = decay + S::one() / u_noise;
    }
    let est = integrate_panels(integrand, &breaks, S::one() / decay, spec)?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(est.value.max(S::zero()).min(S::one()))
}

/// C = Σ_k A_k C_k together with the per-tier terms.
pub fn overall_coverage<S: Real>(
    mode: Mode,
    threshold: S,
    config: &NetworkConfig<S>,
) -> Result<CoverageResult<S>> {
    let assoc = association_probabilities(config);
    let mut per_tier = [S::zero(); 3];
    let mut overall = S::zero();
    for k in TierId::ALL {
        per_tier[k.index()] = coverage_probability(mode, k, threshold, config)?;
        overall = overall + assoc.get(k) * per_tier[k.index()];
    }
    Ok(CoverageResult { mode, threshold, per_tier, overall })
}
