//! Berezin symbols of invariant operators and the constructions built on them.

mod calibration;
mod eval_vector;
mod identities;
mod norms;
mod poincare;
mod star;
mod symbol;
mod toeplitz;
mod trace;

pub use calibration::{calibrate, Calibration};
pub use eval_vector::{EvalTerm, EvalVector};
pub use identities::{
    mean_value_eval_residual, mean_value_residual, reproducing_check, reproducing_majorant,
    reproducing_residual, IdentityCheck, PRUNE_RELATIVE,
};
pub use norms::{hs_norm_2r, l2_group_sum, lambda_norm, L2Formula, LambdaNorm};
pub use poincare::{poincare_series, poincare_shells, poincare_sup, SeriesValue};
pub use star::{star_product, StarProduct};
pub use symbol::{
    cauchy_riemann_residual, invariance_defect, ConstantSymbol, FnSymbol, InvariantSymbol,
    LinearCombination, Symbol,
};
pub use toeplitz::{invariant_toeplitz_symbol, measure_toeplitz_symbol, PointSumSymbol};
pub use trace::{diagonal_integral, trace_tau, trace_tau_star, trace_unnormalized, Diagonal};
