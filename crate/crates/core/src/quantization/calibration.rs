//! Constants of the calculus, computed from the group-free oracle rather than
//! copied from closed forms.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::bergman::{toeplitz_matrix, MonomialBasis, TruncatedOperator};
use crate::error::Result;
use crate::geometry::{DiskPoint, Weight};
use crate::linalg::{factored_singular_values, CMatrix};
use crate::quadrature::{build_disk_rule, Quadrature};
use crate::quantization::identities::mean_value_residual;
use crate::quantization::star::star_product;
use crate::quantization::symbol::{ConstantSymbol, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Calibration {
    pub r: f64,
    /// Prefactor of the star-product integral against `λ_r`.
    pub kappa_star: f64,
    /// Constant of the mean-value identity.
    pub kappa_meanvalue: f64,
    /// Normalisation turning `λ_r` quadrature weights into the measure of
    /// the reproducing kernel, for discretised integral operators.
    pub kappa_kernel: f64,
    /// `(r-1)/π`, the constant printed for the mean-value identity, kept for
    /// comparison.
    pub printed_meanvalue: f64,
    /// Mean-value residual of the constant symbol with the printed constant.
    pub printed_meanvalue_residual: f64,
}

/// Calibrates the constants for weight `w`:
///
/// * `kappa_star` makes the star product of two truncated operators reproduce
///   the symbol of their matrix product at the origin;
/// * `kappa_meanvalue` is `1/∫ d(0, ζ)^r dλ₀(ζ)`;
/// * `kappa_kernel` makes the discretised projection onto constants have
///   unit nuclear norm.
pub fn calibrate(w: Weight) -> Result<Calibration> {
    let r = w.r();
    // mean value: integrate d(0,ζ)^r = (1-|ζ|²)^{r/2} against λ₀
    let mv_rule = build_disk_rule(0.0, 32, 8, r / 2.0)?;
    let mass: f64 = mv_rule
        .nodes()
        .iter()
        .zip(mv_rule.weights())
        .map(|(x, w)| w * (1.0 - x.norm_sqr()).powf(r / 2.0))
        .sum();
    let kappa_meanvalue = 1.0 / mass;

    // kernel: projection onto constants has kernel 1 against c·λ_r; its
    // Nyström matrix √wᵢ √wⱼ has nuclear norm Σ w, which must equal 1
    let lr = build_disk_rule(r, 24, 8, 0.0)?;
    let sq = CMatrix::from_iterator(
        lr.len(),
        1,
        lr.weights().iter().map(|x| Complex64::new(x.sqrt(), 0.0)),
    );
    let nuclear: f64 = factored_singular_values(&sq, &sq)?.iter().sum();
    let kappa_kernel = 1.0 / nuclear;

    // star: unnormalised product of two rank-one operators at the origin,
    // compared with the matrix product
    let basis = MonomialBasis::new(w, 10);
    let a = TruncatedOperator::rank_one(
        basis.clone(),
        Complex64::new(0.3, 0.1),
        Complex64::new(-0.2, 0.2),
    );
    let b = toeplitz_matrix(
        |x| Complex64::new(1.0 + x.norm_sqr(), 0.0),
        &basis,
        &build_disk_rule(r, 16, 32, 0.0)?,
    )?;
    let want = a
        .compose(&b)
        .symbol_unchecked(Complex64::new(0.1, 0.0), Complex64::new(0.0, 0.1));
    let s = star_product(
        std::sync::Arc::new(a),
        std::sync::Arc::new(b),
        &build_disk_rule(r, 16, 40, 0.0)?,
    )?;
    let got = s.eval(Complex64::new(0.1, 0.0), Complex64::new(0.0, 0.1));
    let kappa_star = w.c_r() * (want / got).re;

    let printed_meanvalue = (r - 1.0) / PI;
    let one = ConstantSymbol {
        weight: w,
        value: Complex64::new(1.0, 0.0),
    };
    let printed = mean_value_residual(
        &one,
        DiskPoint::new(Complex64::new(0.0, 0.0))?,
        &mv_rule,
        printed_meanvalue,
    )?;
    Ok(Calibration {
        r,
        kappa_star,
        kappa_meanvalue,
        kappa_kernel,
        printed_meanvalue,
        printed_meanvalue_residual: printed.residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_match_closed_forms() {
        for r in [3.5, 6.0, 8.0, 9.0] {
            let w = Weight::new(r).unwrap();
            let c = calibrate(w).unwrap();
            assert!(
                (c.kappa_meanvalue - (r - 2.0) / (2.0 * PI)).abs() < 1e-12,
                "{c:?}"
            );
            assert!((c.kappa_kernel - (r - 1.0) / PI).abs() < 1e-12);
            assert!((c.kappa_star - (r - 1.0) / PI).abs() < 1e-9, "{c:?}");
            assert!(c.printed_meanvalue_residual > 0.5);
        }
    }
}
