//! Compressions to finite unions of tiles, their norms, and the orbit sums
//! controlling them.

mod compress;
mod equivalence;
mod orbit_sums;
mod region;
mod sequences;

pub use compress::{
    compress, compress_terms, CompressedOperator, Compressible, KernelTerm, DEFAULT_PRUNE,
};
pub use equivalence::{
    bump_function, domain_probes, equivalence_constant, equivalence_integral, l1_estimate,
    sandwich, EquivalenceConstant, EquivalenceParams, Sandwich, SandwichSetup,
};
pub use orbit_sums::{
    double_orbit_sum, orbit_sum_yn, phased_orbit_sum, root_n_orbit_sum, OrbitSum, PhasedSumOptions,
};
pub use region::{build_region, TruncationRegion};
pub use sequences::{l1_sequence, norm_sequence, sqrt_n_hs_sequence, NormSequence, SequenceEntry};
