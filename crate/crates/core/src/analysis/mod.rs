//! Quadrature, transforms on `[-1, 1]` and on the three-sphere, Gram checks
//! and the weighted coefficient seminorms.

mod interval;
mod quadrature;
mod seminorm;
mod sphere;

pub use interval::{
    analyze_interval, analyze_interval_with, completeness_projector_check, fit_interval,
    gram_matrix, interval_rule, projected_action, synthesize_interval, ProjectorCheck,
};
pub use quadrature::{gauss_legendre, trapezoid, QuadratureRule};
pub use seminorm::{
    p_seminorm, seminorm_bound_check, t_seminorm, weight, BoundKind, BoundResidual, Coefficients,
    SeminormKind, SeminormValue, ALL_BOUNDS,
};
pub use sphere::{analyze_s3, analyze_s3_dual, s3_gram_check, synthesize_s3, S3GramReport, S3Grid};
