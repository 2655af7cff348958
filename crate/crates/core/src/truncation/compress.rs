//! Nyström discretisation of `χ_G A χ_G` as an integral operator on
//! `L²(G, c_r λ_r)` with kernel `Â(x̄, y)/(1 - x̄y)^r`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::cpow;
use crate::linalg::{cgemm, factored_singular_values, singular_values, CMatrix};
use crate::quadrature::Quadrature;
use crate::quantization::{EvalVector, PointSumSymbol, Symbol};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Default relative cut for rank-one terms in factored compressions.
pub const DEFAULT_PRUNE: f64 = 1e-12;

#[derive(Debug, Clone)]
enum Repr {
    Dense(CMatrix),
    /// `M = L Rᴴ`.
    Factored {
        left: CMatrix,
        right: CMatrix,
    },
}

#[derive(Debug, Clone)]
pub struct CompressedOperator {
    repr: Repr,
    nodes: usize,
    /// Nuclear-norm bound on the rank-one terms dropped by pruning plus the
    /// terms of the last word-length shell.
    tail: f64,
}

impl CompressedOperator {
    pub fn from_dense(m: CMatrix) -> Self {
        let nodes = m.nrows();
        CompressedOperator {
            repr: Repr::Dense(m),
            nodes,
            tail: 0.0,
        }
    }

    pub fn from_factors(left: CMatrix, right: CMatrix, tail: f64) -> Result<Self> {
        if left.shape() != right.shape() {
            return Err(Error::InvalidArgument("factor shapes differ".into()));
        }
        Ok(CompressedOperator {
            nodes: left.nrows(),
            repr: Repr::Factored { left, right },
            tail,
        })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn tail(&self) -> f64 {
        self.tail
    }

    /// Upper bound for the rank.
    pub fn dim_bound(&self) -> usize {
        match &self.repr {
            Repr::Dense(m) => m.nrows(),
            Repr::Factored { left, .. } => left.ncols().min(left.nrows()),
        }
    }

    pub fn to_dense(&self) -> CMatrix {
        match &self.repr {
            Repr::Dense(m) => m.clone(),
            Repr::Factored { left, right } => cgemm(left, &right.adjoint()),
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        let repr = match &self.repr {
            Repr::Dense(m) => Repr::Dense(m * Complex64::new(c, 0.0)),
            Repr::Factored { left, right } => Repr::Factored {
                left: left * Complex64::new(c, 0.0),
                right: right.clone(),
            },
        };
        CompressedOperator {
            repr,
            nodes: self.nodes,
            tail: self.tail * c.abs(),
        }
    }

    pub fn singular_values(&self) -> Result<Vec<f64>> {
        match &self.repr {
            Repr::Dense(m) => singular_values(m),
            Repr::Factored { left, right } if left.ncols() >= left.nrows() => {
                singular_values(&cgemm(left, &right.adjoint()))
            }
            Repr::Factored { left, right } => factored_singular_values(left, right),
        }
    }

    pub fn nuclear_norm(&self) -> Result<f64> {
        Ok(self.singular_values()?.iter().sum())
    }

    pub fn hs_norm(&self) -> Result<f64> {
        Ok(self
            .singular_values()?
            .iter()
            .map(|s| s * s)
            .sum::<f64>()
            .sqrt())
    }

    pub fn trace(&self) -> Complex64 {
        match &self.repr {
            Repr::Dense(m) => m.trace(),
            Repr::Factored { left, right } => left
                .iter()
                .zip(right.iter())
                .map(|(l, r)| l * r.conj())
                .sum(),
        }
    }

    /// Largest `|M_ij - conj(M_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let m = self.to_dense();
        let n = m.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..=i {
                worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

fn check_rule<Q: Quadrature + ?Sized>(rule: &Q, r: f64) -> Result<()> {
    if (rule.measure_exponent() - r).abs() > 1e-12 {
        return Err(Error::WeightMismatch(rule.measure_exponent(), r));
    }
    if rule.is_empty() {
        return Err(Error::EmptyMask);
    }
    Ok(())
}

/// Dense compression `M_ij = κ √wᵢ √wⱼ Â(x̄ᵢ, xⱼ)/(1 - x̄ᵢxⱼ)^r`. The rule must
/// integrate `λ_r` over the region.
pub fn compress<S: Symbol + ?Sized, Q: Quadrature + ?Sized>(
    a: &S,
    rule: &Q,
    kappa: f64,
) -> Result<CompressedOperator> {
    let r = a.weight().r();
    check_rule(rule, r)?;
    let x = rule.nodes();
    let sw: Vec<f64> = rule.weights().iter().map(|w| w.sqrt()).collect();
    let g = a.eval_grid(x, x);
    let m = DMatrix::from_fn(x.len(), x.len(), |i, j| {
        g[(i, j)] * cpow(ONE - x[i].conj() * x[j], -r) * (kappa * sw[i] * sw[j])
    });
    if let Some((k, _)) = m
        .iter()
        .enumerate()
        .find(|(_, v)| !v.re.is_finite() || !v.im.is_finite())
    {
        let i = k % x.len();
        return Err(Error::NonFinite {
            index: i,
            re: x[i].re,
            im: x[i].im,
        });
    }
    Ok(CompressedOperator::from_dense(m))
}

/// One term `a (1 - x̄u)^{-r} (1 - v̄y)^{-r}` of a kernel `Â(x̄, y)/(1 - x̄y)^r`.
#[derive(Debug, Clone, Copy)]
pub struct KernelTerm {
    pub coeff: Complex64,
    pub u: Complex64,
    pub v: Complex64,
    pub last_shell: bool,
}

/// Factored compression of a sum of rank-one kernel terms. Terms whose
/// rank-one nuclear norm `‖Lₖ‖‖Rₖ‖` is below `prune` times the largest are
/// dropped and accounted for in the tail, as are last-shell terms.
pub fn compress_terms<Q: Quadrature + ?Sized>(
    terms: &[KernelTerm],
    r: f64,
    rule: &Q,
    kappa: f64,
    prune: f64,
) -> Result<CompressedOperator> {
    check_rule(rule, r)?;
    let x = rule.nodes();
    let sw: Vec<f64> = rule.weights().iter().map(|w| w.sqrt()).collect();
    let cols: Vec<(Vec<Complex64>, Vec<Complex64>, f64)> = terms
        .par_iter()
        .map(|t| {
            let l: Vec<Complex64> = x
                .iter()
                .zip(&sw)
                .map(|(xi, s)| t.coeff * cpow(ONE - xi.conj() * t.u, -r) * (kappa * s))
                .collect();
            let rr: Vec<Complex64> = x
                .iter()
                .zip(&sw)
                .map(|(xj, s)| cpow(ONE - t.v * xj.conj(), -r) * *s)
                .collect();
            let nl = l.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            let nr = rr.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            (l, rr, nl * nr)
        })
        .collect();
    let biggest = cols.iter().fold(0.0f64, |m, c| m.max(c.2));
    let mut tail = 0.0;
    let mut keep = Vec::new();
    for (k, c) in cols.iter().enumerate() {
        if !c.2.is_finite() {
            return Err(Error::NonFinite {
                index: k,
                re: terms[k].u.re,
                im: terms[k].u.im,
            });
        }
        if terms[k].last_shell {
            tail += c.2;
        }
        if c.2 < prune * biggest {
            tail += c.2;
        } else {
            keep.push(k);
        }
    }
    let left = DMatrix::from_fn(x.len(), keep.len(), |i, k| cols[keep[k]].0[i]);
    let right = DMatrix::from_fn(x.len(), keep.len(), |i, k| cols[keep[k]].1[i]);
    CompressedOperator::from_factors(left, right, tail)
}

/// Symbols whose kernel is a finite sum of rank-one terms.
pub trait Compressible: Symbol {
    fn kernel_terms(&self) -> Vec<KernelTerm>;

    fn compress_factored<Q: Quadrature + ?Sized>(
        &self,
        rule: &Q,
        kappa: f64,
        prune: f64,
    ) -> Result<CompressedOperator> {
        compress_terms(&self.kernel_terms(), self.weight().r(), rule, kappa, prune)
    }
}

impl Compressible for EvalVector {
    fn kernel_terms(&self) -> Vec<KernelTerm> {
        let last = self
            .terms()
            .iter()
            .map(|t| t.word_length)
            .max()
            .unwrap_or(0);
        let c = self.weight().c_r();
        self.terms()
            .iter()
            .map(|t| KernelTerm {
                coeff: t.alpha * c,
                u: t.gzeta,
                v: t.gz,
                last_shell: last > 0 && t.word_length == last,
            })
            .collect()
    }
}

impl Compressible for PointSumSymbol {
    fn kernel_terms(&self) -> Vec<KernelTerm> {
        self.points()
            .iter()
            .zip(self.coeffs())
            .map(|(&p, &c)| KernelTerm {
                coeff: c,
                u: p,
                v: p,
                last_shell: false,
            })
            .collect()
    }
}
