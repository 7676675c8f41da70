//! Spectral efficiency, application rates and per-BS load.

use super::association::AssociationResult;
use super::coverage::coverage_probability_with;
use crate::error::Result;
use crate::model::{Mode, NetworkConfig, TierId};
use crate::scalar::Real;
use crate::specfun::{integrate_panels, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult<S = f64> {
    pub mode: Mode,
    /// R_k in bit/s/Hz.
    pub spectral_efficiency: [S; 3],
    /// T_k in bit/s.
    pub application_rate: [S; 3],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadResult<S = f64> {
    /// N_m, N_s, N_v.
    pub users: [S; 3],
}

impl<S: Real> LoadResult<S> {
    pub fn get(&self, k: TierId) -> S {
        self.users[k.index()]
    }
}

/// E[log₂(1 + SINR)] for users served by `tier`, from
/// R = (1/ln 2) ∫₀^∞ C_k(e^s − 1) ds.
pub fn spectral_efficiency<S: Real>(
    mode: Mode,
    tier: TierId,
    config: &NetworkConfig<S>,
) -> Result<S> {
    spectral_efficiency_with(mode, tier, config, &QuadratureSpec::default())
}

pub fn spectral_efficiency_with<S: Real>(
    mode: Mode,
    tier: TierId,
    config: &NetworkConfig<S>,
    spec: &QuadratureSpec<S>,
) -> Result<S> {
    if config[tier].intensity <= S::zero() {
        return Ok(S::zero());
    }
    let inner = spec.tightened(100.0);
    let mut failure = None;
    let integrand = |s: S| {
        if s.is_infinite() {
            return S::zero();
        }
        match coverage_probability_with(mode, tier, s.exp_m1(), config, &inner) {
            Ok(c) => c,
            Err(e) => {
                failure.get_or_insert(e);
                S::zero()
            }
        }
    };
    let l = S::lit;
    let breaks = [l(0.0), l(2.0), l(4.0), l(8.0), l(16.0), S::infinity()];
    let est = integrate_panels(integrand, &breaks, l(4.0), spec)?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(est.value / S::LN_2())
}

/// Bandwidth/overhead products of the per-tier spectral efficiencies.
pub fn rates_from_efficiency<S: Real>(
    mode: Mode,
    spectral_efficiency: [S; 3],
    config: &NetworkConfig<S>,
) -> RateResult<S> {
    let mut application_rate = [S::zero(); 3];
    for k in TierId::ALL {
        let r = spectral_efficiency[k.index()];
        application_rate[k.index()] = match (mode, k) {
            (Mode::Conventional, _) => {
                (S::one() - config.overhead_conventional) * config.bandwidth_total * r
            }
            (Mode::Split, TierId::Uav) => {
                (S::one() - config.overhead_split) * config.bandwidth_uav * r
            }
            (Mode::Split, _) => config.bandwidth_legacy * r,
        };
    }
    RateResult { mode, spectral_efficiency, application_rate }
}

/// Spectral efficiencies and application rates of all three tiers.
pub fn application_rates<S: Real>(mode: Mode, config: &NetworkConfig<S>) -> Result<RateResult<S>> {
    let mut se = [S::zero(); 3];
    for k in TierId::ALL {
        se[k.index()] = spectral_efficiency(mode, k, config)?;
    }
    Ok(rates_from_efficiency(mode, se, config))
}

/// Mean number of users sharing the serving BS: N_k = 1.28 λ_u A_k/λ_k + 1.
pub fn mean_users<S: Real>(config: &NetworkConfig<S>, assoc: &AssociationResult<S>) -> LoadResult<S> {
    let mut users = [S::one(); 3];
    for k in TierId::ALL {
        let lam = config[k].intensity;
        if lam > S::zero() {
            users[k.index()] =
                S::lit(1.28) * config.user_intensity * assoc.get(k) / lam + S::one();
        }
    }
    LoadResult { users }
}
