//! Stochastic-geometry engine and Monte Carlo oracle for three-tier
//! (macro / small / UAV) downlink cellular networks.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod mobility;
pub mod model;
pub mod montecarlo;
pub mod scalar;
pub mod specfun;
pub mod sweep;

pub use error::{Error, Result};
pub use model::{Mode, NetworkConfig, TierId, TierParams};
pub use scalar::Real;

/// Concrete single- and double-precision configurations.
pub type NetworkConfigF32 = NetworkConfig<f32>;
pub type NetworkConfigF64 = NetworkConfig<f64>;
pub type AssociationF32 = analytic::AssociationResult<f32>;
pub type AssociationF64 = analytic::AssociationResult<f64>;
pub type CoverageF32 = analytic::CoverageResult<f32>;
pub type CoverageF64 = analytic::CoverageResult<f64>;
pub type RatesF32 = analytic::RateResult<f32>;
pub type RatesF64 = analytic::RateResult<f64>;
