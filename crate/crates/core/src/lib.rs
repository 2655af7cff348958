//! Numerical core for equivariant Berezin quantization on the hyperbolic disk.

pub mod bergman;
pub mod error;
pub mod fuchsian;
pub mod geometry;
pub mod linalg;
pub mod quadrature;
pub mod quantization;
pub mod truncation;

pub use error::{Error, Result};
pub use geometry::{
    cpow, d_kernel, d_tilde, discrete_series_action, hyperbolic_distance, hyperbolic_midpoint,
    DiskPoint, SU11Element, Weight, BOUNDARY_GUARD,
};
