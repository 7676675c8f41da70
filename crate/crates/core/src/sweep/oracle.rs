use super::table::{Cell, Table};
use super::Evaluator;
use crate::analytic::{association_probabilities, overall_coverage, spectral_efficiency};
use crate::error::Result;
use crate::mobility::handover_rates;
use crate::model::{Mode, NetworkConfig, TierId};
use crate::montecarlo::{sample_links, simulate_handovers, LinkBatch, SimEstimate};

/// Monte Carlo cross-check settings.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSettings {
    /// Link snapshots for association, coverage and spectral efficiency.
    pub samples: usize,
    pub seed: u64,
    /// Velocity of the simulated trajectories, m/s.
    pub velocity: f64,
    pub trajectories: usize,
    /// Length of each trajectory, m.
    pub trajectory_length: f64,
}

impl Default for OracleSettings {
    fn default() -> Self {
        OracleSettings {
            samples: 100_000,
            seed: 1,
            velocity: 20.0,
            trajectories: 200,
            trajectory_length: 20_000.0,
        }
    }
}

pub const ORACLE_COLUMNS: [&str; 7] =
    ["quantity", "mode", "tier", "analytic", "monte_carlo", "standard_error", "z_score"];

fn row(quantity: &str, mode: &str, tier: &str, analytic: f64, mc: SimEstimate) -> Vec<Cell> {
    vec![
        Cell::Text(quantity.into()),
        Cell::Text(mode.into()),
        Cell::Text(tier.into()),
        Cell::Number(analytic),
        Cell::Number(mc.value),
        Cell::Number(mc.standard_error),
        Cell::Number(mc.z_score(analytic)),
    ]
}

/// Analytic values next to their Monte Carlo estimates. Returns the link
/// batch as well so that raw samples can be dumped.
pub fn oracle_table(
    config: &NetworkConfig,
    evaluator: &Evaluator,
    settings: &OracleSettings,
    modes: &[Mode],
) -> Result<(Table, LinkBatch)> {
    config.check()?;
    let mut table = Table::new(ORACLE_COLUMNS.iter().map(|s| s.to_string()).collect());
    let batch = sample_links(config, settings.samples, settings.seed, None)?;

    let assoc = association_probabilities(config);
    let mc = batch.association();
    for k in TierId::ALL {
        table.rows.push(row("association", "-", k.symbol(), assoc.get(k), mc[k.index()]));
    }

    let t = config.sinr_threshold;
    for &mode in modes {
        let m = mode.to_string();
        let cov = overall_coverage(mode, t, config)?;
        let est = batch.coverage(mode, t);
        for k in TierId::ALL {
            table.rows.push(row("coverage", &m, k.symbol(), cov.get(k), est.per_tier[k.index()]));
        }
        table.rows.push(row("coverage", &m, "all", cov.overall, est.overall));
        for k in TierId::ALL {
            let r = spectral_efficiency(mode, k, config)?;
            table.rows.push(row("spectral_efficiency_bps_per_hz", &m, k.symbol(), r, batch.spectral_efficiency(mode, k)));
        }
    }

    let mu = evaluator.boundary(config)?;
    let v = settings.velocity;
    let sim = simulate_handovers(config, v, settings.trajectory_length, settings.trajectories, settings.seed)?;
    let predicted = handover_rates(&mu, v);
    let pi = std::f64::consts::PI;
    for i in TierId::ALL {
        for j in TierId::ALL {
            let (a, b) = (i.index(), j.index());
            if b < a {
                continue;
            }
            let coef = if a == b { 2.0 } else { 1.0 } / pi * v;
            let s = sim.rates[a][b];
            // The prediction carries its own sampling error.
            let combined = SimEstimate {
                standard_error: s.standard_error.hypot(coef * mu.standard_error[a][b]),
                ..s
            };
            let tier = format!("{}{}", i.symbol(), j.symbol());
            table.rows.push(row("handover_rate_per_s", "-", &tier, predicted[a][b], combined));
        }
    }
    let total_pred: f64 = predicted.iter().flatten().sum();
    let total = SimEstimate {
        standard_error: sim.total.standard_error.hypot(2.0 / pi * v * mu.total.standard_error),
        ..sim.total
    };
    table.rows.push(row("handover_rate_per_s", "-", "all", total_pred, total));
    Ok((table, batch))
}
