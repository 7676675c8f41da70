//! Parameter sweeps over velocity, UAV intensity and SINR threshold, with
//! tabular output.

mod oracle;
mod table;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::analytic::{
    application_rates, association_probabilities, mean_users, overall_coverage, CoverageResult,
    RateResult,
};
use crate::error::{Error, Result};
use crate::mobility::{
    assemble_throughput, handover_stats, BoundaryCache, BoundaryEstimation, BoundaryIntensities,
    ControlTessellation, HandoverStats, ThroughputReport,
};
use crate::model::{per_km2, Mode, NetworkConfig, TierId};

pub use oracle::{oracle_table, OracleSettings};
pub use table::{format_number, Cell, Format, Table};

/// Chords used per boundary estimate unless configured otherwise.
pub const DEFAULT_CHORDS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepVariable {
    /// User velocity, m/s.
    Velocity,
    /// UAV intensity, BS/km².
    UavIntensity,
    /// SINR threshold, dB.
    Threshold,
}

impl SweepVariable {
    pub const ALL: [SweepVariable; 3] =
        [SweepVariable::Velocity, SweepVariable::UavIntensity, SweepVariable::Threshold];

    /// Output column holding the swept value.
    pub fn column(self) -> &'static str {
        match self {
            SweepVariable::Velocity => "velocity_mps",
            SweepVariable::UavIntensity => "uav_intensity_per_km2",
            SweepVariable::Threshold => "threshold_db",
        }
    }

    pub fn default_grid(self) -> Vec<f64> {
        match self {
            SweepVariable::Velocity => (0..=8).map(|i| 5.0 * i as f64).collect(),
            SweepVariable::UavIntensity => (0..7).map(|i| 0.5 * 2f64.powi(i)).collect(),
            SweepVariable::Threshold => (-2..=2).map(|i| 5.0 * i as f64).collect(),
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepVariable::Velocity => "velocity",
            SweepVariable::UavIntensity => "uav_intensity",
            SweepVariable::Threshold => "threshold",
        })
    }
}

impl FromStr for SweepVariable {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "velocity" | "v" => Ok(SweepVariable::Velocity),
            "uav_intensity" | "lambda_v" => Ok(SweepVariable::UavIntensity),
            "threshold" | "sinr_threshold" => Ok(SweepVariable::Threshold),
            other => Err(format!(
                "unknown sweep variable `{other}` (expected velocity, uav_intensity or threshold)"
            )),
        }
    }
}

/// Terrestrial intensities tied to the UAV intensity: λ_m = macro·λ_v and
/// λ_s = small·λ_v.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub macro_ratio: f64,
    pub small_ratio: f64,
}

impl Coupling {
    /// λ_v = 2λ_m = 3λ_s.
    pub const UAV_LED: Coupling = Coupling { macro_ratio: 0.5, small_ratio: 1.0 / 3.0 };
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    /// Swept values in the variable's unit, strictly increasing.
    pub grid: Vec<f64>,
    /// Only used when sweeping UAV intensity.
    pub coupling: Option<Coupling>,
    pub modes: Vec<Mode>,
    /// Output columns to keep (all when `None`). The swept column and `mode`
    /// are always kept.
    pub outputs: Option<Vec<String>>,
    /// Velocity (m/s) for sweeps over other variables.
    pub velocity: f64,
}

impl SweepSpec {
    /// Both modes, default grid, 20 m/s for non-velocity sweeps.
    pub fn new(variable: SweepVariable) -> Self {
        SweepSpec {
            variable,
            grid: variable.default_grid(),
            coupling: None,
            modes: Mode::ALL.to_vec(),
            outputs: None,
            velocity: 20.0,
        }
    }

    pub fn with_grid(mut self, grid: Vec<f64>) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_coupling(mut self, coupling: Coupling) -> Self {
        self.coupling = Some(coupling);
        self
    }

    pub fn with_modes(mut self, modes: Vec<Mode>) -> Self {
        self.modes = modes;
        self
    }

    pub fn with_velocity(mut self, velocity: f64) -> Self {
        self.velocity = velocity;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Sweep(m));
        if self.grid.is_empty() {
            return bad("grid is empty".into());
        }
        if let Some(x) = self.grid.iter().find(|x| !x.is_finite()) {
            return bad(format!("grid value {x} is not finite"));
        }
        if let Some(w) = self.grid.windows(2).find(|w| w[1] <= w[0]) {
            return bad(format!("grid is not strictly increasing at {} → {}", w[0], w[1]));
        }
        match self.variable {
            SweepVariable::Velocity if self.grid[0] < 0.0 => {
                return bad("velocities must be non-negative".into())
            }
            SweepVariable::UavIntensity if self.grid[0] <= 0.0 => {
                return bad("UAV intensities must be positive".into())
            }
            _ => {}
        }
        if let Some(c) = self.coupling {
            if !(c.macro_ratio > 0.0 && c.small_ratio > 0.0)
                || !c.macro_ratio.is_finite()
                || !c.small_ratio.is_finite()
            {
                return bad("coupling coefficients must be positive".into());
            }
            if self.variable != SweepVariable::UavIntensity {
                return bad("coupling only applies to uav_intensity sweeps".into());
            }
        }
        if self.modes.is_empty() {
            return bad("no modes selected".into());
        }
        if !(self.velocity >= 0.0 && self.velocity.is_finite()) {
            return bad(format!("velocity must be non-negative, got {}", self.velocity));
        }
        Ok(())
    }

    /// Configuration and velocity at grid value `x`.
    pub fn point(&self, base: &NetworkConfig, x: f64) -> (NetworkConfig, f64) {
        let mut cfg = base.clone();
        let mut velocity = self.velocity;
        match self.variable {
            SweepVariable::Velocity => velocity = x,
            SweepVariable::UavIntensity => {
                let lv = per_km2(x);
                cfg[TierId::Uav].intensity = lv;
                if let Some(c) = self.coupling {
                    cfg[TierId::Macro].intensity = c.macro_ratio * lv;
                    cfg[TierId::Small].intensity = c.small_ratio * lv;
                }
            }
            SweepVariable::Threshold => cfg.sinr_threshold = 10f64.powf(x / 10.0),
        }
        (cfg, velocity)
    }
}

/// Everything computed at one (configuration, mode, velocity) point.
#[derive(Debug, Clone)]
pub struct PointResult {
    pub config: NetworkConfig,
    pub report: ThroughputReport,
    pub handover: HandoverStats,
    pub coverage: CoverageResult,
    pub rates: RateResult,
    pub boundary: Arc<BoundaryIntensities>,
}

impl PointResult {
    /// Standard error of AT and AT_u inherited from the handover cost.
    pub fn throughput_se(&self) -> (f64, f64) {
        if self.report.saturated {
            return (0.0, 0.0);
        }
        let factor = 1.0 - self.report.handover_cost;
        let se = self.handover.cost_se(self.report.mode);
        if factor <= 0.0 {
            return (0.0, 0.0);
        }
        (self.report.throughput / factor * se, self.report.throughput_per_user / factor * se)
    }
}

/// A sweep point that could not be evaluated.
#[derive(Debug)]
pub struct PointFailure {
    pub value: f64,
    pub mode: Mode,
    pub error: Error,
}

impl fmt::Display for PointFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.mode, format_number(self.value), self.error)
    }
}

#[derive(Debug)]
pub struct SweepOutcome {
    /// Rows of the points that succeeded, in grid × mode order.
    pub table: Table,
    pub failures: Vec<PointFailure>,
}

impl SweepOutcome {
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluates points and sweeps, sharing boundary estimates across calls.
#[derive(Debug)]
pub struct Evaluator {
    pub chords: usize,
    pub seed: u64,
    pub control: ControlTessellation,
    cache: BoundaryCache,
}

impl Evaluator {
    pub fn new(chords: usize, seed: u64) -> Self {
        Evaluator { chords, seed, control: ControlTessellation::default(), cache: BoundaryCache::new() }
    }

    pub fn with_control(mut self, control: ControlTessellation) -> Self {
        self.control = control;
        self
    }

    pub fn cache(&self) -> &BoundaryCache {
        &self.cache
    }

    pub fn boundary(&self, config: &NetworkConfig) -> Result<Arc<BoundaryIntensities>> {
        self.cache.get_or_estimate(config, &BoundaryEstimation::for_config(config, self.chords, self.seed))
    }

    pub fn run_point(&self, config: &NetworkConfig, mode: Mode, velocity: f64) -> Result<PointResult> {
        config.check()?;
        if !(velocity >= 0.0 && velocity.is_finite()) {
            return Err(Error::Domain(format!("velocity must be non-negative, got {velocity}")));
        }
        let boundary = self.boundary(config)?;
        let assoc = association_probabilities(config);
        let rates = application_rates(mode, config)?;
        let loads = mean_users(config, &assoc);
        let coverage = overall_coverage(mode, config.sinr_threshold, config)?;
        let handover = handover_stats(&boundary, velocity, config, self.control);
        let report = assemble_throughput(&assoc, &rates, &loads, velocity, handover.cost(mode));
        Ok(PointResult { config: config.clone(), report, handover, coverage, rates, boundary })
    }

    /// Evaluates every grid point for every mode in parallel. Points that
    /// fail are reported in [`SweepOutcome::failures`]; an invalid spec or
    /// base configuration is an error.
    pub fn run_sweep(&self, spec: &SweepSpec, base: &NetworkConfig) -> Result<SweepOutcome> {
        spec.validate()?;
        base.check()?;
        let jobs: Vec<(f64, Mode)> =
            spec.grid.iter().flat_map(|&x| spec.modes.iter().map(move |&m| (x, m))).collect();
        let results: Vec<Result<Vec<Cell>, PointFailure>> = jobs
            .par_iter()
            .map(|&(x, mode)| {
                let (cfg, v) = spec.point(base, x);
                self.run_point(&cfg, mode, v)
                    .map(|p| point_row(spec.variable, x, &p))
                    .map_err(|error| PointFailure { value: x, mode, error })
            })
            .collect();
        let mut table = Table::new(point_columns(spec.variable));
        let mut failures = Vec::new();
        for r in results {
            match r {
                Ok(row) => table.rows.push(row),
                Err(f) => failures.push(f),
            }
        }
        if let Some(keep) = &spec.outputs {
            let mut keep = keep.clone();
            keep.push(spec.variable.column().into());
            keep.push("mode".into());
            table = table.select(&keep)?;
        }
        Ok(SweepOutcome { table, failures })
    }
}

const TIER_SUFFIX: [&str; 3] = ["m", "s", "v"];

/// Column names of a point row; the swept variable comes first.
pub fn point_columns(variable: SweepVariable) -> Vec<String> {
    let mut cols = vec![variable.column().to_string(), "mode".to_string()];
    for v in SweepVariable::ALL {
        if v != variable {
            cols.push(v.column().into());
        }
    }
    let per_tier = |prefix: &str, unit: &str| {
        TIER_SUFFIX.iter().map(move |k| format!("{prefix}_{k}{unit}")).collect::<Vec<_>>()
    };
    cols.extend(per_tier("a", ""));
    cols.push("coverage".into());
    cols.extend(per_tier("coverage", ""));
    cols.extend(per_tier("r", "_bps_per_hz"));
    cols.extend(per_tier("t", "_bps"));
    cols.extend(per_tier("n", "_users"));
    for c in [
        "mu_total_m_per_m2",
        "mu_total_se_m_per_m2",
        "ho_total_per_s",
        "ho_total_se_per_s",
        "ho_vv_per_s",
        "h_c",
        "h_c_se",
        "at_bps",
        "at_se_bps",
        "at_u_bps",
        "at_u_se_bps",
        "saturated",
    ] {
        cols.push(c.into());
    }
    cols
}

/// One row in [`point_columns`] order.
pub fn point_row(variable: SweepVariable, value: f64, p: &PointResult) -> Vec<Cell> {
    let n = Cell::Number;
    let context = |v: SweepVariable| match v {
        SweepVariable::Velocity => p.report.velocity,
        SweepVariable::UavIntensity => p.config[TierId::Uav].intensity * 1e6,
        SweepVariable::Threshold => 10.0 * p.config.sinr_threshold.log10(),
    };
    let mut row = vec![n(value), Cell::Text(p.report.mode.to_string())];
    for v in SweepVariable::ALL {
        if v != variable {
            row.push(n(context(v)));
        }
    }
    row.extend(p.report.association.map(n));
    row.push(n(p.coverage.overall));
    row.extend(p.coverage.per_tier.map(n));
    row.extend(p.rates.spectral_efficiency.map(n));
    row.extend(p.rates.application_rate.map(n));
    row.extend(p.report.users.map(n));
    let (at_se, at_u_se) = p.throughput_se();
    let uav = TierId::Uav.index();
    row.extend([
        n(p.boundary.total.value),
        n(p.boundary.total.standard_error),
        n(p.handover.total_rate()),
        n(p.handover.total_rate_se),
        n(p.handover.ho_rate[uav][uav]),
        n(p.report.handover_cost),
        n(p.handover.cost_se(p.report.mode)),
        n(p.report.throughput),
        n(at_se),
        n(p.report.throughput_per_user),
        n(at_u_se),
        n(if p.report.saturated { 1.0 } else { 0.0 }),
    ]);
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        let ok = SweepSpec::new(SweepVariable::Velocity);
        assert!(ok.validate().is_ok());
        assert_eq!(ok.grid.len(), 9);
        assert!(matches!(ok.clone().with_grid(vec![]).validate(), Err(Error::Sweep(_))));
        assert!(ok.clone().with_grid(vec![0.0, 5.0, 5.0]).validate().is_err());
        assert!(ok.clone().with_grid(vec![-1.0, 5.0]).validate().is_err());
        assert!(ok.clone().with_coupling(Coupling::UAV_LED).validate().is_err());
        let lam = SweepSpec::new(SweepVariable::UavIntensity);
        assert_eq!(lam.grid, vec![0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0]);
        let neg = Coupling { macro_ratio: -1.0, small_ratio: 1.0 };
        assert!(lam.clone().with_coupling(neg).validate().is_err());
        assert!(lam.with_coupling(Coupling::UAV_LED).validate().is_ok());
    }

    #[test]
    fn coupling_ties_intensities() {
        let spec = SweepSpec::new(SweepVariable::UavIntensity).with_coupling(Coupling::UAV_LED);
        let (cfg, v) = spec.point(&NetworkConfig::baseline(), 6.0);
        assert_eq!(v, 20.0);
        assert!((cfg[TierId::Uav].intensity - 6e-6).abs() < 1e-18);
        assert!((cfg[TierId::Macro].intensity - 3e-6).abs() < 1e-18);
        assert!((cfg[TierId::Small].intensity - 2e-6).abs() < 1e-18);
        let t = SweepSpec::new(SweepVariable::Threshold);
        let (cfg, _) = t.point(&NetworkConfig::baseline(), 10.0);
        assert!((cfg.sinr_threshold - 10.0).abs() < 1e-12);
    }

    #[test]
    fn row_matches_columns() {
        let ev = Evaluator::new(600, 2);
        let p = ev.run_point(&NetworkConfig::baseline(), Mode::Split, 10.0).unwrap();
        for var in SweepVariable::ALL {
            assert_eq!(point_columns(var).len(), point_row(var, 1.0, &p).len());
        }
        let cols = point_columns(SweepVariable::Threshold);
        let row = point_row(SweepVariable::Threshold, 0.0, &p);
        let v = cols.iter().position(|c| c == "velocity_mps").unwrap();
        assert_eq!(row[v], Cell::Number(10.0));
        let u = cols.iter().position(|c| c == "uav_intensity_per_km2").unwrap();
        assert!((row[u].as_f64().unwrap() - 5.0).abs() < 1e-9);
    }

    #[test]
    fn rest_point_has_no_penalty() {
        let ev = Evaluator::new(600, 2);
        let cfg = NetworkConfig::baseline();
        let p = ev.run_point(&cfg, Mode::Conventional, 0.0).unwrap();
        let expected: f64 = TierId::ALL
            .iter()
            .map(|&k| {
                let i = k.index();
                p.report.association[i] * 0.7 * 10e6 * p.rates.spectral_efficiency[i]
            })
            .sum();
        assert!((p.report.throughput - expected).abs() <= 1e-9 * expected);
        assert_eq!(p.throughput_se(), (0.0, 0.0));
    }

    #[test]
    fn invalid_config_is_rejected() {
        let mut cfg = NetworkConfig::baseline();
        cfg.path_loss_exponent = 1.5;
        let ev = Evaluator::new(600, 2);
        assert!(matches!(ev.run_point(&cfg, Mode::Split, 1.0), Err(Error::Config(_))));
        let spec = SweepSpec::new(SweepVariable::Velocity);
        assert!(matches!(ev.run_sweep(&spec, &cfg), Err(Error::Config(_))));
    }

    #[test]
    fn failing_points_are_collected() {
        let ev = Evaluator::new(3, 2);
        let spec = SweepSpec::new(SweepVariable::Velocity).with_grid(vec![0.0, 10.0]);
        let out = ev.run_sweep(&spec, &NetworkConfig::baseline()).unwrap();
        assert_eq!(out.failures.len(), 4);
        assert!(out.table.rows.is_empty());
        assert!(out.failures.iter().all(|f| f.error.is_numerical()));
    }

    #[test]
    fn output_selection() {
        let ev = Evaluator::new(600, 2);
        let mut spec = SweepSpec::new(SweepVariable::Velocity).with_grid(vec![0.0, 10.0]);
        spec.outputs = Some(vec!["h_c".into()]);
        let out = ev.run_sweep(&spec, &NetworkConfig::baseline()).unwrap();
        assert_eq!(out.table.columns, vec!["velocity_mps", "mode", "h_c"]);
        assert_eq!(out.table.rows.len(), 4);
        assert_eq!(ev.cache().estimations(), 1);
    }
}
