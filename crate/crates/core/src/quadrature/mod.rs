//! Deterministic quadrature on the unit disk.

mod disk;
mod gauss;
mod sum;

pub use disk::{
    build_disk_rule, integrate, integrate_real, DiskRule, Quadrature, RegionRule, WeightedNodes,
    DEFAULT_ANGULAR_ORDER, DEFAULT_RADIAL_ORDER,
};
pub use gauss::{gauss_jacobi, gauss_legendre, gauss_radial, GaussRule};
pub use sum::tree_sum;
