//! Traces through the diagonal of the symbol.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fuchsian::FundamentalDomain;
use crate::quadrature::{tree_sum, Quadrature};
use crate::quantization::star::StarProduct;
use crate::quantization::symbol::Symbol;

/// Symbols whose diagonal has a faster path than pointwise evaluation.
pub trait Diagonal {
    fn diagonal(&self, zs: &[Complex64]) -> Vec<Complex64>;
}

impl<S: Symbol + ?Sized> Diagonal for S {
    fn diagonal(&self, zs: &[Complex64]) -> Vec<Complex64> {
        zs.par_iter().map(|&z| self.eval(z, z)).collect()
    }
}

fn lambda0_integral(
    values: &[Complex64],
    nodes: &[Complex64],
    weights: &[f64],
    s: f64,
) -> Result<Complex64> {
    let terms: Vec<Complex64> = values
        .iter()
        .zip(nodes)
        .zip(weights)
        .map(|((v, x), w)| v * (w * (1.0 - x.norm_sqr()).powf(-s)))
        .collect();
    if let Some(i) = terms
        .iter()
        .position(|t| !t.re.is_finite() || !t.im.is_finite())
    {
        return Err(Error::NonFinite {
            index: i,
            re: nodes[i].re,
            im: nodes[i].im,
        });
    }
    Ok(tree_sum(&terms))
}

/// `∫ Â(η̄, η) dλ₀(η)` over the region covered by `rule`, from precomputed
/// diagonal values.
pub fn diagonal_integral<Q: Quadrature + ?Sized>(
    diag: &[Complex64],
    rule: &Q,
) -> Result<Complex64> {
    lambda0_integral(diag, rule.nodes(), rule.weights(), rule.measure_exponent())
}

/// Unnormalised trace `c_r ∫ Â(η̄, η) dλ₀(η)`. On the whole disk this is the
/// ordinary trace of a trace-class operator; on a fundamental domain it is
/// the trace of the invariant von Neumann algebra that pairs with the
/// evaluation vector to give `c_r Â(z̄, ζ)`.
pub fn trace_unnormalized<S: Symbol + ?Sized, Q: Quadrature + ?Sized>(
    a: &S,
    rule: &Q,
) -> Result<Complex64> {
    let diag = a.diagonal(rule.nodes());
    Ok(diagonal_integral(&diag, rule)? * a.weight().c_r())
}

/// `λ₀` mass of the rule, checked against the covolume so that a rule that
/// does not cover the domain is refused. Normalising by the rule's own mass
/// makes `τ(1) = 1` exact.
fn domain_mass<Q: Quadrature + ?Sized>(domain: &FundamentalDomain, rule: &Q) -> Result<f64> {
    let ones = vec![Complex64::new(1.0, 0.0); rule.len()];
    let mass = diagonal_integral(&ones, rule)?.re;
    if (mass - domain.covolume()).abs() > 1e-3 * domain.covolume() {
        return Err(Error::InvalidArgument(format!(
            "rule mass {mass} does not match the covolume {}",
            domain.covolume()
        )));
    }
    Ok(mass)
}

/// `τ(A) = λ₀(F)⁻¹ ∫_F Â(z̄, z) dλ₀(z)`; `rule` must cover the domain, for
/// instance [`FundamentalDomain::rule`].
pub fn trace_tau<S: Symbol + ?Sized, Q: Quadrature + ?Sized>(
    a: &S,
    domain: &FundamentalDomain,
    rule: &Q,
) -> Result<Complex64> {
    let mass = domain_mass(domain, rule)?;
    let diag = a.diagonal(rule.nodes());
    Ok(diagonal_integral(&diag, rule)? / mass)
}

/// [`trace_tau`] for star products, using blocked grid evaluation.
pub fn trace_tau_star<Q: Quadrature + ?Sized>(
    a: &StarProduct,
    domain: &FundamentalDomain,
    rule: &Q,
) -> Result<Complex64> {
    let mass = domain_mass(domain, rule)?;
    let diag = a.eval_diagonal(rule.nodes());
    Ok(diagonal_integral(&diag, rule)? / mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::{enumerate_orbit, octagon_group};
    use crate::geometry::{DiskPoint, Weight};
    use crate::quantization::{ConstantSymbol, EvalVector};

    #[test]
    fn constant_and_eval_vector_traces() {
        let t4 = enumerate_orbit(&octagon_group(), 4, 1e-9).unwrap();
        let dom = FundamentalDomain::dirichlet(&t4).unwrap();
        let rule = dom.rule(0.0, 8, 10).unwrap();
        let w = Weight::new(8.0).unwrap();
        let one = ConstantSymbol {
            weight: w,
            value: Complex64::new(1.0, 0.0),
        };
        assert!((trace_tau(&one, &dom, &rule).unwrap() - 1.0).norm() < 1e-14);
        // τ(E_{z,ζ}) = 1/λ₀(F): the pairing constant for the identity
        let t3 = enumerate_orbit(&octagon_group(), 3, 1e-9).unwrap();
        let e = EvalVector::new(
            &t3,
            w,
            DiskPoint::from_re_im(0.1, 0.0).unwrap(),
            DiskPoint::from_re_im(0.0, -0.1).unwrap(),
        )
        .unwrap();
        let fine = dom.rule(0.0, 16, 16).unwrap();
        let tau = trace_tau(&e, &dom, &fine).unwrap();
        assert!((tau - 1.0 / dom.covolume()).norm() < 1e-4, "{tau}");
    }
}
