//! Shared inputs for the benchmarks in `benches/`.

use berezin_core::fuchsian::{enumerate_orbit, octagon_group, FundamentalDomain, OrbitTable};
use berezin_core::Weight;

/// Octagon orbit table at `depth` with the default dedup tolerance.
pub fn octagon_table(depth: usize) -> OrbitTable {
    enumerate_orbit(
        &octagon_group(),
        depth,
        berezin_core::fuchsian::DEFAULT_DEDUP_TOL,
    )
    .expect("octagon enumerates")
}

pub fn octagon_domain(table: &OrbitTable) -> FundamentalDomain {
    FundamentalDomain::dirichlet(table).expect("table is deep enough")
}

pub fn weight(r: f64) -> Weight {
    Weight::new(r).expect("valid weight")
}
