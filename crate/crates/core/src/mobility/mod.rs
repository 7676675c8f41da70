//! Handover rates, handover costs and mobility-aware average throughput.

mod boundary;
mod cache;
mod handover;
mod throughput;

pub use boundary::{
    boundary_intensities, raster_boundary_intensities, BoundaryEstimation, BoundaryIntensities,
    MAX_RELATIVE_SE,
};
pub use cache::BoundaryCache;
pub use handover::{handover_cost, handover_rates, handover_stats, ControlTessellation, HandoverStats};
pub use throughput::{assemble_throughput, average_throughput, ThroughputReport};
