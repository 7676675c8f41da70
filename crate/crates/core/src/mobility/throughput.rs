use super::boundary::BoundaryIntensities;
use super::handover::{handover_stats, ControlTessellation, HandoverStats};
use crate::analytic::{
    application_rates, association_probabilities, mean_users, AssociationResult, LoadResult,
    RateResult,
};
use crate::error::Result;
use crate::model::{Mode, NetworkConfig, TierId};

/// Average throughput of a mobile user in one architecture.
#[derive(Debug, Clone, PartialEq)]
pub struct ThroughputReport {
    pub mode: Mode,
    pub velocity: f64,
    pub association: [f64; 3],
    /// T_k in bit/s.
    pub application_rate: [f64; 3],
    /// N_k.
    pub users: [f64; 3],
    pub handover_cost: f64,
    /// Σ A_k·T_k·(1 − H_c), bit/s.
    pub throughput: f64,
    /// Σ (A_k/N_k)·T_k·(1 − H_c), bit/s.
    pub throughput_per_user: f64,
    /// Set when H_c > 1 and the handover factor was floored at zero.
    pub saturated: bool,
}

/// Combines velocity-independent inputs with a handover cost.
pub fn assemble_throughput(
    assoc: &AssociationResult,
    rates: &RateResult,
    loads: &LoadResult,
    velocity: f64,
    handover_cost: f64,
) -> ThroughputReport {
    let factor = (1.0 - handover_cost).max(0.0);
    let mut at = 0.0;
    let mut at_u = 0.0;
    for k in TierId::ALL {
        let i = k.index();
        let carried = assoc.get(k) * rates.application_rate[i];
        at += carried;
        at_u += carried / loads.users[i];
    }
    ThroughputReport {
        mode: rates.mode,
        velocity,
        association: assoc.as_array(),
        application_rate: rates.application_rate,
        users: loads.users,
        handover_cost,
        throughput: at * factor,
        throughput_per_user: at_u * factor,
        saturated: handover_cost > 1.0,
    }
}

/// Full evaluation for one mode and velocity given boundary intensities.
pub fn average_throughput(
    mode: Mode,
    config: &NetworkConfig,
    velocity: f64,
    mu: &BoundaryIntensities,
    control: ControlTessellation,
) -> Result<(ThroughputReport, HandoverStats)> {
    let assoc = association_probabilities(config);
    let rates = application_rates(mode, config)?;
    let loads = mean_users(config, &assoc);
    let stats = handover_stats(mu, velocity, config, control);
    Ok((assemble_throughput(&assoc, &rates, &loads, velocity, stats.cost(mode)), stats))
}
