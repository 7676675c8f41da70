use std::fmt;
use std::str::FromStr;

use super::boundary::BoundaryIntensities;
use crate::model::{Mode, NetworkConfig, TierId};

/// Which tessellation drives control-plane handovers in the split architecture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ControlTessellation {
    /// UAV–UAV boundaries of the three-tier max-RSS tessellation.
    #[default]
    Weighted,
    /// The Voronoi tessellation of the UAV tier alone (μ = 2√λ_v).
    UavOnly,
}

impl fmt::Display for ControlTessellation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ControlTessellation::Weighted => "weighted",
            ControlTessellation::UavOnly => "uav-only",
        })
    }
}

impl FromStr for ControlTessellation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "weighted" => Ok(ControlTessellation::Weighted),
            "uav-only" | "uav_only" | "uavonly" => Ok(ControlTessellation::UavOnly),
            other => Err(format!("unknown control tessellation `{other}`")),
        }
    }
}

/// Handover rates and the resulting costs of both architectures.
#[derive(Debug, Clone, PartialEq)]
pub struct HandoverStats {
    /// HO_ij in handovers per second.
    pub ho_rate: [[f64; 3]; 3],
    /// m/s.
    pub velocity: f64,
    pub cost_conventional: f64,
    pub cost_split: f64,
    /// Standard errors propagated from the boundary estimate.
    pub total_rate_se: f64,
    pub cost_conventional_se: f64,
    pub cost_split_se: f64,
}

impl HandoverStats {
    pub fn total_rate(&self) -> f64 {
        self.ho_rate.iter().flatten().sum()
    }

    pub fn cost(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Conventional => self.cost_conventional,
            Mode::Split => self.cost_split,
        }
    }

    pub fn cost_se(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Conventional => self.cost_conventional_se,
            Mode::Split => self.cost_split_se,
        }
    }
}

fn rate_coefficients(velocity: f64) -> [[f64; 3]; 3] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| if i == j { 2.0 } else { 1.0 } / std::f64::consts::PI * velocity)
    })
}

/// HO_ii = (2/π)·μ_ii·v and HO_ij = (1/π)·μ_ij·v for i ≠ j.
pub fn handover_rates(mu: &BoundaryIntensities, velocity: f64) -> [[f64; 3]; 3] {
    let c = rate_coefficients(velocity);
    std::array::from_fn(|i| std::array::from_fn(|j| c[i][j] * mu.mu[i][j]))
}

/// Fraction of time spent in handover execution.
///
/// Conventional: d_c·Σ_ij HO_ij. Split: control handovers (UAV–UAV) cost
/// d_c, every other pair costs d_c′.
pub fn handover_cost(
    ho: &[[f64; 3]; 3],
    velocity: f64,
    config: &NetworkConfig,
    mode: Mode,
    control: ControlTessellation,
) -> f64 {
    let v = TierId::Uav.index();
    let all: f64 = ho.iter().flatten().sum();
    match mode {
        Mode::Conventional => config.ho_delay_control * all,
        Mode::Split => {
            let control_rate = match control {
                ControlTessellation::Weighted => ho[v][v],
                ControlTessellation::UavOnly => {
                    4.0 / std::f64::consts::PI * config[TierId::Uav].intensity.sqrt() * velocity
                }
            };
            config.ho_delay_control * control_rate + config.ho_delay_data * (all - ho[v][v])
        }
    }
}

pub fn handover_stats(
    mu: &BoundaryIntensities,
    velocity: f64,
    config: &NetworkConfig,
    control: ControlTessellation,
) -> HandoverStats {
    let ho = handover_rates(mu, velocity);
    let c = rate_coefficients(velocity);
    let v = TierId::Uav.index();
    let (dc, dd) = (config.ho_delay_control, config.ho_delay_data);
    let split_weights: [[f64; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| match (i == v && j == v, control) {
            (true, ControlTessellation::Weighted) => dc * c[i][j],
            (true, ControlTessellation::UavOnly) => 0.0,
            (false, _) => dd * c[i][j],
        })
    });
    let total_rate_se = mu.linear_standard_error(&c);
    HandoverStats {
        cost_conventional: handover_cost(&ho, velocity, config, Mode::Conventional, control),
        cost_split: handover_cost(&ho, velocity, config, Mode::Split, control),
        total_rate_se,
        cost_conventional_se: dc * total_rate_se,
        cost_split_se: mu.linear_standard_error(&split_weights),
        ho_rate: ho,
        velocity,
    }
}
