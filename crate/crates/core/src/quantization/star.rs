//! Symbol of an operator product.
//!
//! `(AB)^(z̄, ζ) = c_r (1 - z̄ζ)^r ∫ B̂(z̄, η) Â(η̄, ζ) (1 - z̄η)^{-r} (1 - η̄ζ)^{-r} dλ_r(η)`,
//! obtained from `⟨AB e_z, e_ζ⟩ = ⟨B e_z, A* e_ζ⟩`. Note the right factor's
//! symbol carries the outer `z`.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{cpow, Weight};
use crate::linalg::{cgemm, CMatrix};
use crate::quadrature::Quadrature;
use crate::quantization::symbol::Symbol;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const DIAGONAL_BLOCK: usize = 64;

/// Lazily evaluated symbol of `A∘B`.
pub struct StarProduct {
    a: Arc<dyn Symbol>,
    b: Arc<dyn Symbol>,
    nodes: Vec<Complex64>,
    /// `c_r` times `λ_r` weights.
    weights: Vec<f64>,
}

/// `A ⋆ B`, the symbol of `A∘B`. The rule may have any measure exponent; it
/// must integrate the product of the two symbols accurately over the disk.
pub fn star_product<Q: Quadrature + ?Sized>(
    a: Arc<dyn Symbol>,
    b: Arc<dyn Symbol>,
    rule: &Q,
) -> Result<StarProduct> {
    let w = a.weight();
    if (b.weight().r() - w.r()).abs() > 1e-12 {
        return Err(Error::WeightMismatch(a.weight().r(), b.weight().r()));
    }
    let shift = w.r() - rule.measure_exponent();
    let weights = rule
        .nodes()
        .iter()
        .zip(rule.weights())
        .map(|(x, &wt)| w.c_r() * wt * (1.0 - x.norm_sqr()).powf(shift))
        .collect();
    Ok(StarProduct {
        a,
        b,
        nodes: rule.nodes().to_vec(),
        weights,
    })
}

impl StarProduct {
    fn grid(&self, zs: &[Complex64], zetas: &[Complex64]) -> CMatrix {
        let r = self.a.weight().r();
        let bz = self.b.eval_grid(zs, &self.nodes);
        let az = self.a.eval_grid(&self.nodes, zetas);
        let n = self.nodes.len();
        let u = DMatrix::from_fn(zs.len(), n, |i, k| {
            bz[(i, k)] * cpow(ONE - zs[i].conj() * self.nodes[k], -r) * self.weights[k]
        });
        let v = DMatrix::from_fn(n, zetas.len(), |k, j| {
            az[(k, j)] * cpow(ONE - self.nodes[k].conj() * zetas[j], -r)
        });
        let s = cgemm(&u, &v);
        DMatrix::from_fn(zs.len(), zetas.len(), |i, j| {
            cpow(ONE - zs[i].conj() * zetas[j], r) * s[(i, j)]
        })
    }

    /// `Â(z̄ᵢ, zᵢ)` for each point, evaluated in blocks through [`Symbol::eval_grid`].
    pub fn eval_diagonal(&self, zs: &[Complex64]) -> Vec<Complex64> {
        let blocks: Vec<Vec<Complex64>> = zs
            .chunks(DIAGONAL_BLOCK)
            .collect::<Vec<_>>()
            .par_iter()
            .map(|c| {
                let g = self.grid(c, c);
                (0..c.len()).map(|i| g[(i, i)]).collect()
            })
            .collect();
        blocks.into_iter().flatten().collect()
    }
}

impl Symbol for StarProduct {
    fn weight(&self) -> Weight {
        self.a.weight()
    }

    fn eval(&self, z: Complex64, zeta: Complex64) -> Complex64 {
        self.grid(&[z], &[zeta])[(0, 0)]
    }

    fn tail(&self, z: Complex64, zeta: Complex64) -> f64 {
        // crude: tails of the factors at the outer points
        self.a.tail(z, zeta) + self.b.tail(z, zeta)
    }

    fn eval_grid(&self, zs: &[Complex64], zetas: &[Complex64]) -> CMatrix {
        self.grid(zs, zetas)
    }
}
