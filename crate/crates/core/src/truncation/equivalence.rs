//! Empirical constant relating `‖·‖_{λ,r}` to the operator norm, and the
//! sandwich check on Toeplitz test operators.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bergman::{operator_sup_norm, toeplitz_matrix, MonomialBasis};
use crate::error::{Error, Result};
use crate::fuchsian::{reduce_point, FundamentalDomain, OrbitTable};
use crate::geometry::{d_kernel, DiskPoint, Weight};
use crate::quadrature::{tree_sum, Quadrature};
use crate::quantization::{
    invariant_toeplitz_symbol, lambda_norm, poincare_series, EvalVector, Symbol,
};
use crate::truncation::compress::{Compressible, DEFAULT_PRUNE};
use crate::truncation::region::build_region;

/// Discretisation of the L¹ estimates behind [`equivalence_constant`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquivalenceParams {
    /// Tiles in the region whose normalised nuclear norm estimates `‖E‖_{L¹}`.
    pub n_est: usize,
    /// Word-length depth of the evaluation vectors.
    pub eval_depth: usize,
    /// Per-tile rule of the compression.
    pub region_angular: usize,
    pub region_radial: usize,
    /// Rule for `ζ` on the domain.
    pub zeta_angular: usize,
    pub zeta_radial: usize,
}

impl Default for EquivalenceParams {
    fn default() -> Self {
        EquivalenceParams {
            n_est: 1,
            eval_depth: 3,
            region_angular: 2,
            region_radial: 3,
            zeta_angular: 1,
            zeta_radial: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceConstant {
    /// `M̂_r`, the largest per-probe integral.
    pub value: f64,
    pub per_probe: Vec<f64>,
}

/// `(1/N)‖χ_{G_N} E_{z,ζ} χ_{G_N}‖₁`, the L¹ estimate of an evaluation vector.
pub fn l1_estimate(
    e: &EvalVector,
    domain: &FundamentalDomain,
    table: &OrbitTable,
    n: usize,
    angular: usize,
    radial: usize,
) -> Result<f64> {
    let w = e.weight();
    let region = build_region(domain, table, n)?;
    let rule = region.rule(w.r(), angular, radial)?;
    Ok(e.compress_factored(&rule, w.c_r(), DEFAULT_PRUNE)?
        .nuclear_norm()?
        / n as f64)
}

/// `∫ f dλ₀` over a rule of any measure exponent.
fn integrate_lambda0<Q: Quadrature + ?Sized>(
    rule: &Q,
    f: impl Fn(Complex64) -> Result<f64> + Sync,
) -> Result<f64> {
    let s = rule.measure_exponent();
    let terms: Vec<f64> = rule
        .nodes()
        .par_iter()
        .zip(rule.weights().par_iter())
        .map(|(&x, &wt)| Ok(f(x)? * wt * (1.0 - x.norm_sqr()).powf(-s)))
        .collect::<Result<_>>()?;
    let v = tree_sum(&terms);
    if !v.is_finite() {
        return Err(Error::NonFinite {
            index: 0,
            re: f64::NAN,
            im: f64::NAN,
        });
    }
    Ok(v)
}

/// `M̂_r = max_z ∫_F (‖E_{z,ζ}‖_{L¹}/c_r) d(z, ζ)^r dλ₀(ζ)` over the probes.
///
/// `ζ` ranges over the domain only: over the whole disk the integrand tends
/// to a nonzero constant far from `z` and the integral diverges. The column
/// integral over `z` equals the row integral because
/// `‖E_{ζ,z}‖ = ‖E_{z,ζ}‖` (adjoint).
pub fn equivalence_constant(
    domain: &FundamentalDomain,
    table: &OrbitTable,
    w: Weight,
    params: &EquivalenceParams,
    probes: &[Complex64],
) -> Result<EquivalenceConstant> {
    if probes.is_empty() {
        return Err(Error::InvalidArgument("empty probe grid".into()));
    }
    let evals = table.truncated(params.eval_depth.min(table.max_word_length()));
    let zeta_rule = domain.rule(0.0, params.zeta_angular, params.zeta_radial)?;
    let mut per_probe = Vec::with_capacity(probes.len());
    for &z in probes {
        let zp = DiskPoint::new(z)?;
        let v = integrate_lambda0(&zeta_rule, |zeta| {
            let e = EvalVector::new(&evals, w, zp, DiskPoint::new(zeta)?)?;
            let l1 = l1_estimate(
                &e,
                domain,
                table,
                params.n_est,
                params.region_angular,
                params.region_radial,
            )?;
            Ok(l1 / w.c_r() * d_kernel(z, zeta).powf(w.r()))
        })?;
        per_probe.push(v);
    }
    Ok(EquivalenceConstant {
        value: per_probe.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        per_probe,
    })
}

/// Same integral for an arbitrary `ζ` rule with a user-supplied L¹ estimate
/// and any `ζ` region, for checks against closed forms.
pub fn equivalence_integral<Q, F>(z: Complex64, w: Weight, zeta_rule: &Q, l1: F) -> Result<f64>
where
    Q: Quadrature + ?Sized,
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    let r = w.r();
    integrate_lambda0(zeta_rule, |zeta| {
        Ok(l1(zeta)? / w.c_r() * d_kernel(z, zeta).powf(r))
    })
}

/// Invariant test function `1 + ε K_s(z, 0)/K_s(0, 0)` with
/// `K_s(z, 0) = Σ_γ d(γz, 0)^s`, evaluated after moving `z` into the domain.
pub fn bump_function(
    table: &OrbitTable,
    s: f64,
    eps: f64,
) -> Result<impl Fn(Complex64) -> Complex64 + Sync + '_> {
    let ws = Weight::new(s)?;
    let origin = Complex64::new(0.0, 0.0);
    let peak = poincare_series(table, origin, origin, ws)?.value;
    Ok(move |z: Complex64| {
        let (zr, _) = reduce_point(table, z);
        let k = poincare_series(table, zr, origin, ws)
            .map(|v| v.value)
            .unwrap_or(f64::NAN);
        Complex64::new(1.0 + eps * k / peak, 0.0)
    })
}

/// Probe grid on the closed domain: the origin, the nodes of a coarse domain
/// rule, and points just inside the vertices and edge midpoints, where
/// invariant symbols often peak.
pub fn domain_probes(
    domain: &FundamentalDomain,
    angular: usize,
    radial: usize,
) -> Result<Vec<Complex64>> {
    let mut probes = vec![Complex64::new(0.0, 0.0)];
    probes.extend(domain.rule(0.0, angular, radial)?.nodes().iter().copied());
    let v = domain.vertices();
    for (k, &a) in v.iter().enumerate() {
        let b = v[(k + 1) % v.len()];
        probes.push(a * 0.999);
        let m = crate::geometry::hyperbolic_midpoint(a, b);
        probes.push(m * 0.999);
    }
    Ok(probes)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sandwich {
    /// Largest singular value of the monomial truncation.
    pub operator_norm: f64,
    pub lambda_norm: f64,
    pub m_hat: f64,
    /// `‖A‖_∞ ≤ ‖A‖_{λ,r}`.
    pub lower_holds: bool,
    /// `‖A‖_{λ,r} ≤ M̂_r ‖A‖_∞`.
    pub upper_holds: bool,
}

/// Quadratures and truncations used by [`sandwich`].
pub struct SandwichSetup<'a, F: Quadrature + ?Sized, D: Quadrature + ?Sized, M: Quadrature + ?Sized>
{
    pub table: &'a OrbitTable,
    /// Rule on the domain for the symbol of `T_φ`.
    pub domain_rule: &'a F,
    /// Whole-disk rule for the λ-norm integrals.
    pub lambda_rule: &'a D,
    pub probes: &'a [Complex64],
    /// `λ_r` rule on the disk for the Toeplitz matrix.
    pub matrix_rule: &'a M,
    pub degree_cap: usize,
}

/// Checks `‖T_φ‖ ≤ ‖T_φ‖_{λ,r} ≤ M̂_r ‖T_φ‖` for an invariant `φ`. The operator
/// norm comes from the group-free monomial truncation, which only sees `T_φ`
/// as an operator on the full weighted Bergman space.
pub fn sandwich<P, F, D, M>(
    phi: P,
    w: Weight,
    m_hat: f64,
    setup: &SandwichSetup<'_, F, D, M>,
) -> Result<Sandwich>
where
    P: Fn(Complex64) -> Complex64 + Sync,
    F: Quadrature + ?Sized,
    D: Quadrature + ?Sized,
    M: Quadrature + ?Sized,
{
    let symbol = invariant_toeplitz_symbol(&phi, setup.table, w, setup.domain_rule)?;
    let lam = lambda_norm(&symbol, setup.probes, setup.lambda_rule)?.value;
    let op = operator_sup_norm(&toeplitz_matrix(
        &phi,
        &MonomialBasis::new(w, setup.degree_cap),
        setup.matrix_rule,
    )?);
    Ok(Sandwich {
        operator_norm: op,
        lambda_norm: lam,
        m_hat,
        lower_holds: op <= lam,
        upper_holds: lam <= m_hat * op,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::{enumerate_orbit, octagon_group, trivial_group};
    use crate::quadrature::{build_disk_rule, gauss_legendre, WeightedNodes};
    use crate::truncation::compress_terms;
    use crate::truncation::KernelTerm;
    use std::f64::consts::PI;

    #[test]
    fn trivial_group_integrand_is_one() {
        let w = Weight::new(8.0).unwrap();
        let t = enumerate_orbit(&trivial_group(), 1, 1e-9).unwrap();
        let disk = build_disk_rule(8.0, 32, 64, 0.0).unwrap();
        let big = 0.5;
        // polar Gauss rule for λ₀ on |ζ| < big
        let (rad, ang) = (
            gauss_legendre(24, 0.0, big).unwrap(),
            gauss_legendre(32, 0.0, 2.0 * PI).unwrap(),
        );
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for (&t, &wt) in rad.nodes.iter().zip(&rad.weights) {
            for (&a, &wa) in ang.nodes.iter().zip(&ang.weights) {
                nodes.push(Complex64::from_polar(t, a));
                weights.push(wt * wa * t / (1.0 - t * t).powi(2));
            }
        }
        let inner = WeightedNodes::new(nodes, weights, 0.0).unwrap();
        let z = Complex64::new(0.0, 0.0);
        let v = equivalence_integral(z, w, &inner, |zeta| {
            let e = EvalVector::new(&t, w, DiskPoint::new(z)?, DiskPoint::new(zeta)?)?;
            e.compress_factored(&disk, w.c_r(), DEFAULT_PRUNE)?
                .nuclear_norm()
        })
        .unwrap();
        let want = PI * big * big / (1.0 - big * big);
        assert!((v - want).abs() < 1e-6 * want, "{v} {want}");
        // one rank-one term reproduces the same closed form
        let term = KernelTerm {
            coeff: Complex64::new(w.c_r(), 0.0),
            u: z,
            v: z,
            last_shell: false,
        };
        let one = compress_terms(&[term], 8.0, &disk, w.c_r(), 0.0)
            .unwrap()
            .nuclear_norm()
            .unwrap();
        assert!((one - w.c_r()).abs() < 1e-8);
    }

    #[test]
    fn bump_is_invariant_and_peaks_at_the_origin() {
        let t = enumerate_orbit(&octagon_group(), 3, 1e-9).unwrap();
        let f = bump_function(&t, 6.0, 1.0).unwrap();
        assert!((f(Complex64::new(0.0, 0.0)).re - 2.0).abs() < 1e-12);
        let z = Complex64::new(0.2, -0.1);
        for e in t.entries().iter().filter(|e| e.word_length() == 1) {
            assert!((f(e.element.act(z)) - f(z)).norm() < 1e-9);
        }
    }
}
