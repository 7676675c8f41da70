//! Numerical kernels: the interference hypergeometric term and adaptive
//! Gauss–Kronrod quadrature on finite and semi-infinite ranges.

mod hyp2f1;
mod quadrature;

pub use hyp2f1::{hyp2f1_coverage, interference_integral};
pub use quadrature::{integrate, integrate_estimate, integrate_panels, Estimate, QuadratureSpec};
