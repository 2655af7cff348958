//! Fuchsian groups: generators, orbit tables and Dirichlet domains.

mod domain;
mod group;
mod orbit;

pub use domain::{FundamentalDomain, TIE_TOL};
pub use group::{cyclic_group, octagon_group, trivial_group, FuchsianGroup, Generator};
pub use orbit::{
    counting_function, counting_trend, enumerate_orbit, enumerate_orbit_with_cap, exponent_probe,
    reduce_point, CountingTrend, ExponentProbe, OrbitEntry, OrbitTable, DEFAULT_DEDUP_TOL,
    DEFAULT_ENTRY_CAP,
};
