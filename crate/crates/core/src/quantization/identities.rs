//! Numerical checks of the mean-value identities behind the calculus.
//!
//! Every symbol satisfies `c_{r/2} ∫ Â(z̄, ζ) d(z, ζ)^r dλ₀(ζ) = Â(z̄, z)`:
//! move `z` to 0 and use the mean-value property of the holomorphic function
//! `ζ ↦ Â(0, ζ)` against the radial weight `(1-|ζ|²)^{r/2}`. Applied to the
//! evaluation vector term by term it gives
//! `c_{r/2} ∫ E_{z,ζ}(η̄₁, η₂) d(z, ζ)^r dλ₀(ζ) = E_{z,z}(η̄₁, η₂)`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fuchsian::OrbitTable;
use crate::geometry::{cpow, d_kernel, DiskPoint, SU11Element, Weight};
use crate::quadrature::{tree_sum, Quadrature, WeightedNodes};
use crate::quantization::eval_vector::EvalVector;
use crate::quantization::symbol::Symbol;
use rayon::prelude::*;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Terms whose rigorous bound falls below this fraction of `|RHS|` are
/// skipped and their bounds added to the reported tail.
pub const PRUNE_RELATIVE: f64 = 1e-13;

fn lambda0_nodes<Q: Quadrature + ?Sized>(rule: &Q) -> WeightedNodes {
    WeightedNodes::from_rule(rule).reweighted(0.0)
}

fn centred(base: &WeightedNodes, centre: Complex64) -> Result<WeightedNodes> {
    Ok(base.translated(&SU11Element::moving_origin_to(DiskPoint::new(centre)?)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    /// `κ·∫ …`.
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub kappa: f64,
    /// `|lhs - rhs|`.
    pub residual: f64,
    /// `residual / |rhs|`.
    pub relative: f64,
    /// Bound on what the finite table and pruning left out.
    pub tail: f64,
}

impl IdentityCheck {
    fn new(lhs: Complex64, rhs: Complex64, kappa: f64, tail: f64) -> Self {
        let residual = (lhs - rhs).norm();
        IdentityCheck {
            lhs,
            rhs,
            kappa,
            residual,
            relative: residual / rhs.norm().max(1e-300),
            tail,
        }
    }
}

/// `κ ∫ Â(z̄, ζ) d(z, ζ)^r dλ₀(ζ)` against `Â(z̄, z)`, with the rule moved so
/// that its centre sits at `z`. `kappa` is normally `c_{r/2}`; pass another
/// value to test an alternative constant.
pub fn mean_value_residual<S: Symbol + ?Sized, Q: Quadrature + ?Sized>(
    a: &S,
    z: DiskPoint,
    rule: &Q,
    kappa: f64,
) -> Result<IdentityCheck> {
    let r = a.weight().r();
    let zv = z.value();
    let nodes = centred(&lambda0_nodes(rule), zv)?;
    let vals = a.eval_grid(&[zv], nodes.nodes());
    let terms: Vec<Complex64> = nodes
        .nodes()
        .iter()
        .zip(nodes.weights())
        .enumerate()
        .map(|(j, (&x, &w))| vals[(0, j)] * (d_kernel(zv, x).powf(r) * w))
        .collect();
    if let Some(i) = terms
        .iter()
        .position(|t| !t.re.is_finite() || !t.im.is_finite())
    {
        let x = nodes.nodes()[i];
        return Err(Error::NonFinite {
            index: i,
            re: x.re,
            im: x.im,
        });
    }
    let integral = tree_sum(&terms);
    let diag = a.eval(zv, zv);
    Ok(IdentityCheck::new(
        integral * kappa,
        diag,
        kappa,
        a.tail(zv, zv),
    ))
}

/// `κ ∫ E_{z,ζ}(η̄₁, η₂) d(z, ζ)^r dλ₀(ζ)` against `E_{z,z}(η̄₁, η₂)` with the
/// evaluation vector summed over `table`. Each group term is integrated on
/// a copy of `rule` centred where that term concentrates, and terms whose
/// bound `c_r (2π/(r-2)) [d(γz, η₂)/d(η₁, η₂)]^r` is negligible are skipped.
/// The tail adds those bounds to the bounds of the last shell.
pub fn reproducing_check<Q: Quadrature + ?Sized>(
    z: DiskPoint,
    table: &OrbitTable,
    w: Weight,
    rule: &Q,
    eta1: Complex64,
    eta2: Complex64,
    kappa: f64,
) -> Result<IdentityCheck> {
    let r = w.r();
    let zv = z.value();
    let base = lambda0_nodes(rule);
    let outer = w.c_r() * cpow(ONE - eta1.conj() * eta2, r);
    let d12 = d_kernel(eta1, eta2);
    let last = table.max_word_length();

    let mut rhs_terms = Vec::with_capacity(table.len());
    let mut bounds = Vec::with_capacity(table.len());
    for e in table.entries() {
        let gz = e.element.act(zv);
        rhs_terms.push(
            cpow(Complex64::new(1.0 - gz.norm_sqr(), 0.0), r)
                * cpow(ONE - eta1.conj() * gz, -r)
                * cpow(ONE - gz.conj() * eta2, -r),
        );
        bounds.push(w.c_r() * 2.0 * PI / (r - 2.0) * (d_kernel(gz, eta2) / d12).powf(r));
    }
    let rhs = outer * tree_sum(&rhs_terms);
    let cut = PRUNE_RELATIVE * rhs.norm();

    let mut lhs_terms = Vec::with_capacity(table.len());
    let mut tail = 0.0;
    for (k, e) in table.entries().iter().enumerate() {
        if last > 0 && e.word_length() == last {
            tail += bounds[k];
        }
        if bounds[k] < cut {
            tail += bounds[k];
            continue;
        }
        let g = e.element;
        let gz = g.act(zv);
        let ginv = g.inverse();
        let nodes = centred(&base, eta1)?;
        let vals: Vec<Complex64> = nodes
            .nodes()
            .iter()
            .zip(nodes.weights())
            .map(|(&xi, &wt)| {
                // evaluate the original integrand at ζ = γ⁻¹ξ
                let zeta = ginv.act(xi);
                let gzeta = g.act(zeta);
                let alpha = cpow(ONE - gz.conj() * gzeta, r);
                alpha
                    * cpow(ONE - eta1.conj() * gzeta, -r)
                    * cpow(ONE - gz.conj() * eta2, -r)
                    * (d_kernel(zv, zeta).powf(r) * wt)
            })
            .collect();
        lhs_terms.push(tree_sum(&vals));
    }
    let lhs = outer * tree_sum(&lhs_terms) * kappa;
    Ok(IdentityCheck::new(lhs, rhs, kappa, tail))
}

/// [`mean_value_residual`] for an evaluation vector, integrated term by term.
/// In modulus the `γ` term of `Ê(z̄, ζ) d(z, ζ)^r` is a multiple of
/// `d(γp, ζ)^r` with `p` the first centre, so each term gets a copy of the
/// rule centred at `γp`; one rule centred at `z` cannot resolve the orbit.
/// Pruning and the tail follow [`reproducing_check`].
pub fn mean_value_eval_residual<Q: Quadrature + ?Sized>(
    e: &EvalVector,
    z: DiskPoint,
    rule: &Q,
    kappa: f64,
) -> Result<IdentityCheck> {
    let w = e.weight();
    let r = w.r();
    let zv = z.value();
    let base = lambda0_nodes(rule);
    let rhs = e.eval(zv, zv);
    let last = e.terms().iter().map(|t| t.word_length).max().unwrap_or(0);
    let scale = kappa * w.c_r() * (1.0 - zv.norm_sqr()).powf(r / 2.0) * 2.0 * PI / (r - 2.0);
    let cut = PRUNE_RELATIVE * rhs.norm();
    let per_term: Vec<(Complex64, f64)> = e
        .terms()
        .par_iter()
        .map(|t| {
            let coeff = t.alpha * cpow(ONE - zv.conj() * t.gzeta, -r);
            let bound = scale * coeff.norm() * (1.0 - t.gz.norm_sqr()).powf(-r / 2.0);
            let tail = if last > 0 && t.word_length == last {
                bound
            } else {
                0.0
            };
            if bound < cut {
                return Ok((Complex64::new(0.0, 0.0), tail + bound));
            }
            let nodes = centred(&base, t.gz)?;
            let vals: Vec<Complex64> = nodes
                .nodes()
                .iter()
                .zip(nodes.weights())
                .map(|(&zeta, &wt)| {
                    cpow(ONE - zv.conj() * zeta, r)
                        * cpow(ONE - t.gz.conj() * zeta, -r)
                        * (d_kernel(zv, zeta).powf(r) * wt)
                })
                .collect();
            Ok((coeff * tree_sum(&vals), tail))
        })
        .collect::<Result<_>>()?;
    let sums: Vec<Complex64> = per_term.iter().map(|p| p.0).collect();
    let tails: Vec<f64> = per_term.iter().map(|p| p.1).collect();
    let lhs = tree_sum(&sums) * (w.c_r() * kappa);
    Ok(IdentityCheck::new(lhs, rhs, kappa, tree_sum(&tails)))
}

/// Worst relative residual of [`reproducing_check`] over the probe pairs.
pub fn reproducing_residual<Q: Quadrature + ?Sized>(
    z: DiskPoint,
    table: &OrbitTable,
    w: Weight,
    rule: &Q,
    probes: &[(Complex64, Complex64)],
) -> Result<(f64, f64)> {
    let mut worst: f64 = 0.0;
    let mut tail: f64 = 0.0;
    for &(a, b) in probes {
        let c = reproducing_check(z, table, w, rule, a, b, w.c_half())?;
        worst = worst.max(c.relative);
        tail = tail.max(c.tail / c.rhs.norm());
    }
    Ok((worst, tail))
}

/// `(c_{r/2}/c_r) d(z, ζ)^r ∫ Σ_γ |E-term_γ(η̄₁, η₂)| d(η₁, η₂)^r dλ₀(η₂)` by
/// quadrature, each term on a copy of the rule centred at `γz`. The chain of
/// equalities in the λ-norm bound for the evaluation vector says this equals
/// `K_r(ζ, η₁)`.
pub fn reproducing_majorant<Q: Quadrature + ?Sized>(
    z: DiskPoint,
    zeta: DiskPoint,
    eta1: Complex64,
    table: &OrbitTable,
    w: Weight,
    rule: &Q,
) -> Result<f64> {
    let r = w.r();
    let (zv, wv) = (z.value(), zeta.value());
    let base = lambda0_nodes(rule);
    let mut per_term = Vec::with_capacity(table.len());
    for e in table.entries() {
        let gz = e.element.act(zv);
        let gzeta = e.element.act(wv);
        let nodes = centred(&base, gz)?;
        let alpha = cpow(ONE - gz.conj() * gzeta, r);
        let vals: Vec<f64> = nodes
            .nodes()
            .iter()
            .zip(nodes.weights())
            .map(|(&eta2, &wt)| {
                let t = cpow(ONE - eta1.conj() * eta2, r)
                    * alpha
                    * cpow(ONE - eta1.conj() * gzeta, -r)
                    * cpow(ONE - gz.conj() * eta2, -r);
                t.norm() * w.c_r() * d_kernel(eta1, eta2).powf(r) * wt
            })
            .collect();
        per_term.push(tree_sum(&vals));
    }
    Ok(w.c_half() / w.c_r() * d_kernel(zv, wv).powf(r) * tree_sum(&per_term))
}
