//! Closed-form and quadrature-based performance metrics of the three-tier network.

mod association;
pub mod closed_form;
mod coverage;
mod distance;
mod laplace;
mod rates;

pub use association::{
    association_probabilities, AssociationParts, AssociationResult, DistanceBreakpoints,
};
pub use coverage::{
    conditional_coverage, coverage_probability, coverage_probability_with, overall_coverage,
    CoverageResult,
};
pub use distance::{distance_kinks, serving_distance_cdf, serving_distance_pdf};
pub use laplace::{laplace_interference, log_laplace_interference};
pub use rates::{
    application_rates, mean_users, rates_from_efficiency, spectral_efficiency,
    spectral_efficiency_with, LoadResult, RateResult,
};
