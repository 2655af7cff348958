//! Symbols `Â(z̄, ζ)`: sesqui-analytic functions on the disk, holomorphic in
//! `ζ` and anti-holomorphic in `z`.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::bergman::TruncatedOperator;
use crate::error::{Error, Result};
use crate::fuchsian::OrbitTable;
use crate::geometry::{cpow, Weight};
use crate::linalg::{cgemm, CMatrix};

pub trait Symbol: Send + Sync {
    fn weight(&self) -> Weight;

    /// `Â(z̄, ζ)`.
    fn eval(&self, z: Complex64, zeta: Complex64) -> Complex64;

    /// Absolute size of the last orbit shell that entered [`Self::eval`].
    /// Exact symbols report 0.
    fn tail(&self, _z: Complex64, _zeta: Complex64) -> f64 {
        0.0
    }

    /// `Â(z̄ᵢ, ζⱼ)` with rows indexed by `zs`.
    fn eval_grid(&self, zs: &[Complex64], zetas: &[Complex64]) -> CMatrix {
        let rows: Vec<Vec<Complex64>> = zs
            .par_iter()
            .map(|&z| zetas.iter().map(|&w| self.eval(z, w)).collect())
            .collect();
        DMatrix::from_fn(zs.len(), zetas.len(), |i, j| rows[i][j])
    }
}

impl<S: Symbol + ?Sized> Symbol for Arc<S> {
    fn weight(&self) -> Weight {
        (**self).weight()
    }
    fn eval(&self, z: Complex64, zeta: Complex64) -> Complex64 {
        (**self).eval(z, zeta)
    }
    fn tail(&self, z: Complex64, zeta: Complex64) -> f64 {
        (**self).tail(z, zeta)
    }
    fn eval_grid(&self, zs: &[Complex64], zetas: &[Complex64]) -> CMatrix {
        (**self).eval_grid(zs, zetas)
    }
}

impl Symbol for TruncatedOperator {
    fn weight(&self) -> Weight {
        TruncatedOperator::weight(self)
    }

    fn eval(&self, z: Complex64, zeta: Complex64) -> Complex64 {
        self.symbol_unchecked(z, zeta)
    }

    fn eval_grid(&self, zs: &[Complex64], zetas: &[Complex64]) -> CMatrix {
        let b = self.basis();
        let n = b.dim();
        let cz: Vec<Vec<Complex64>> = zs.iter().map(|&z| b.coherent(z)).collect();
        let cw: Vec<Vec<Complex64>> = zetas.iter().map(|&w| b.coherent(w)).collect();
        let czt = DMatrix::from_fn(zs.len(), n, |i, k| cz[i][k]);
        let cwc = DMatrix::from_fn(n, zetas.len(), |m, j| cw[j][m].conj());
        let inner = cgemm(&czt, &cgemm(&self.matrix().transpose(), &cwc));
        let r = self.weight().r();
        DMatrix::from_fn(zs.len(), zetas.len(), |i, j| {
            inner[(i, j)] * cpow(Complex64::new(1.0, 0.0) - zs[i].conj() * zetas[j], r)
        })
    }
}

/// Symbol of `c·I`.
#[derive(Debug, Clone, Copy)]
pub struct ConstantSymbol {
    pub weight: Weight,
    pub value: Complex64,
}

impl Symbol for ConstantSymbol {
    fn weight(&self) -> Weight {
        self.weight
    }
    fn eval(&self, _z: Complex64, _zeta: Complex64) -> Complex64 {
        self.value
    }
}

/// Wraps a closure `(z, ζ) ↦ Â(z̄, ζ)`. The caller is responsible for
/// sesqui-analyticity; [`cauchy_riemann_residual`] can check it.
pub struct FnSymbol<F> {
    weight: Weight,
    f: F,
}

impl<F> FnSymbol<F>
where
    F: Fn(Complex64, Complex64) -> Complex64 + Send + Sync,
{
    pub fn new(weight: Weight, f: F) -> Self {
        FnSymbol { weight, f }
    }
}

impl<F> Symbol for FnSymbol<F>
where
    F: Fn(Complex64, Complex64) -> Complex64 + Send + Sync,
{
    fn weight(&self) -> Weight {
        self.weight
    }
    fn eval(&self, z: Complex64, zeta: Complex64) -> Complex64 {
        (self.f)(z, zeta)
    }
}

/// `Σ cₖ Âₖ`.
pub struct LinearCombination {
    weight: Weight,
    terms: Vec<(Complex64, Arc<dyn Symbol>)>,
}

impl LinearCombination {
    pub fn new(terms: Vec<(Complex64, Arc<dyn Symbol>)>) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty linear combination".into()))?;
        let weight = first.1.weight();
        for (_, s) in &terms {
            if (s.weight().r() - weight.r()).abs() > 1e-12 {
                return Err(Error::WeightMismatch(s.weight().r(), weight.r()));
            }
        }
        Ok(LinearCombination { weight, terms })
    }
}

impl Symbol for LinearCombination {
    fn weight(&self) -> Weight {
        self.weight
    }
    fn eval(&self, z: Complex64, zeta: Complex64) -> Complex64 {
        self.terms.iter().map(|(c, s)| c * s.eval(z, zeta)).sum()
    }
    fn tail(&self, z: Complex64, zeta: Complex64) -> f64 {
        self.terms
            .iter()
            .map(|(c, s)| c.norm() * s.tail(z, zeta))
            .sum()
    }
    fn eval_grid(&self, zs: &[Complex64], zetas: &[Complex64]) -> CMatrix {
        let mut acc = CMatrix::zeros(zs.len(), zetas.len());
        for (c, s) in &self.terms {
            acc += s.eval_grid(zs, zetas) * *c;
        }
        acc
    }
}

/// Marker wrapper for symbols of operators commuting with the discrete series
/// action of a group. Construction spot-checks
/// `Â(conj(γz), γζ) · j = Â(z̄, ζ)` on sample points.
#[derive(Clone)]
pub struct InvariantSymbol {
    inner: Arc<dyn Symbol>,
}

impl InvariantSymbol {
    pub fn new(
        inner: Arc<dyn Symbol>,
        table: &OrbitTable,
        samples: &[(Complex64, Complex64)],
        tol: f64,
    ) -> Result<Self> {
        let worst = invariance_defect(inner.as_ref(), table, samples);
        if worst > tol {
            return Err(Error::InvarianceViolation(worst));
        }
        Ok(InvariantSymbol { inner })
    }

    pub fn inner(&self) -> &Arc<dyn Symbol> {
        &self.inner
    }
}

impl Symbol for InvariantSymbol {
    fn weight(&self) -> Weight {
        self.inner.weight()
    }
    fn eval(&self, z: Complex64, zeta: Complex64) -> Complex64 {
        self.inner.eval(z, zeta)
    }
    fn tail(&self, z: Complex64, zeta: Complex64) -> f64 {
        self.inner.tail(z, zeta)
    }
    fn eval_grid(&self, zs: &[Complex64], zetas: &[Complex64]) -> CMatrix {
        self.inner.eval_grid(zs, zetas)
    }
}

/// Largest relative change `|Â(conj(γz), γζ) - Â(z̄, ζ)| / max(|Â(z̄, ζ)|, 1e-300)`
/// over the generators (words of length one) and their inverses. Symbols of
/// invariant operators are invariant under the diagonal action with no
/// multiplier, because the Berezin transform is.
pub fn invariance_defect<S: Symbol + ?Sized>(
    a: &S,
    table: &OrbitTable,
    samples: &[(Complex64, Complex64)],
) -> f64 {
    let gens: Vec<_> = table
        .entries()
        .iter()
        .filter(|e| e.word.len() == 1)
        .collect();
    let mut worst: f64 = 0.0;
    for &(z, w) in samples {
        let base = a.eval(z, w);
        for e in &gens {
            let moved = a.eval(e.element.act(z), e.element.act(w));
            worst = worst.max((moved - base).norm() / base.norm().max(1e-300));
        }
    }
    worst
}

/// Relative size of `∂/∂z̄` applied to `ζ ↦ Â(z̄, ζ)` and of `∂/∂z`
/// applied to `z ↦ Â(z̄, ζ)`, by centred differences with step `h`.
/// Both vanish for a genuine symbol.
pub fn cauchy_riemann_residual<S: Symbol + ?Sized>(
    a: &S,
    z: Complex64,
    zeta: Complex64,
    h: f64,
) -> f64 {
    let i = Complex64::new(0.0, 1.0);
    let f = |u: Complex64, v: Complex64| a.eval(u, v);
    // holomorphic in ζ: ∂_x f + i ∂_y f = 0 (∂/∂ζ̄ = ½(∂x + i∂y))
    let dx = (f(z, zeta + h) - f(z, zeta - h)) / (2.0 * h);
    let dy = (f(z, zeta + i * h) - f(z, zeta - i * h)) / (2.0 * h);
    let dbar = 0.5 * (dx + i * dy);
    // anti-holomorphic in z: ∂/∂z = ½(∂x - i∂y) vanishes
    let ex = (f(z + h, zeta) - f(z - h, zeta)) / (2.0 * h);
    let ey = (f(z + i * h, zeta) - f(z - i * h, zeta)) / (2.0 * h);
    let d = 0.5 * (ex - i * ey);
    let scale = (0.5 * (dx - i * dy)).norm() + (0.5 * (ex + i * ey)).norm() + f(z, zeta).norm();
    (dbar.norm() + d.norm()) / scale.max(1e-300)
}
