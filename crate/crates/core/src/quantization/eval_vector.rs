//! The evaluation vector `E_{z,ζ} = c_r Σ_γ α_γ ⟨·, e_{γζ}⟩ e_{γz}` with
//! `α_γ = (1 - conj(γz)·γζ)^r`, an invariant operator whose pairing with `A`
//! under the trace on a fundamental domain returns `c_r Â(z̄, ζ)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Result;
use crate::fuchsian::OrbitTable;
use crate::geometry::{cpow, DiskPoint, Weight};
use crate::linalg::{cgemm, CMatrix};
use crate::quantization::symbol::Symbol;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Entries of the term-by-node factor held at once in [`Symbol::eval_grid`].
const GRID_BLOCK: usize = 1 << 21;

#[derive(Debug, Clone, Copy)]
pub struct EvalTerm {
    pub gz: Complex64,
    pub gzeta: Complex64,
    pub alpha: Complex64,
    pub word_length: usize,
}

#[derive(Debug, Clone)]
pub struct EvalVector {
    weight: Weight,
    z: Complex64,
    zeta: Complex64,
    terms: Vec<EvalTerm>,
    max_word_length: usize,
}

impl EvalVector {
    pub fn new(table: &OrbitTable, weight: Weight, z: DiskPoint, zeta: DiskPoint) -> Result<Self> {
        let r = weight.r();
        let terms = table
            .entries()
            .iter()
            .map(|e| {
                let gz = e.element.act(z.value());
                let gzeta = e.element.act(zeta.value());
                EvalTerm {
                    gz,
                    gzeta,
                    alpha: cpow(ONE - gz.conj() * gzeta, r),
                    word_length: e.word_length(),
                }
            })
            .collect();
        Ok(EvalVector {
            weight,
            z: z.value(),
            zeta: zeta.value(),
            terms,
            max_word_length: table.max_word_length(),
        })
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn zeta(&self) -> Complex64 {
        self.zeta
    }

    pub fn terms(&self) -> &[EvalTerm] {
        &self.terms
    }

    fn term(&self, t: &EvalTerm, eta1: Complex64, eta2: Complex64) -> Complex64 {
        let r = self.weight.r();
        t.alpha * cpow(ONE - eta1.conj() * t.gzeta, -r) * cpow(ONE - t.gz.conj() * eta2, -r)
    }

    /// Symbol with the group acting on the centres `z, ζ`.
    pub fn eval_form2(&self, eta1: Complex64, eta2: Complex64) -> Complex64 {
        let r = self.weight.r();
        let s: Complex64 = self.terms.iter().map(|t| self.term(t, eta1, eta2)).sum();
        self.weight.c_r() * cpow(ONE - eta1.conj() * eta2, r) * s
    }

    /// Symbol with the group acting on the arguments `η₁, η₂`; needs the
    /// group elements, so it re-walks the table.
    pub fn eval_form1(&self, table: &OrbitTable, eta1: Complex64, eta2: Complex64) -> Complex64 {
        let r = self.weight.r();
        let pre = cpow(ONE - self.z.conj() * self.zeta, r);
        let s: Complex64 = table
            .entries()
            .iter()
            .map(|e| {
                let a = e.element.act(eta1);
                let b = e.element.act(eta2);
                cpow(ONE - a.conj() * b, r)
                    * cpow(ONE - self.z.conj() * b, -r)
                    * cpow(ONE - a.conj() * self.zeta, -r)
            })
            .sum();
        self.weight.c_r() * pre * s
    }

    /// `Σ |term|` over the last word-length shell, scaled like the value.
    pub fn shell_tail(&self, eta1: Complex64, eta2: Complex64) -> f64 {
        let r = self.weight.r();
        let s: f64 = self
            .terms
            .iter()
            .filter(|t| t.word_length == self.max_word_length && self.max_word_length > 0)
            .map(|t| self.term(t, eta1, eta2).norm())
            .sum();
        self.weight.c_r() * cpow(ONE - eta1.conj() * eta2, r).norm() * s
    }
}

impl Symbol for EvalVector {
    fn weight(&self) -> Weight {
        self.weight
    }

    fn eval(&self, z: Complex64, zeta: Complex64) -> Complex64 {
        self.eval_form2(z, zeta)
    }

    fn tail(&self, z: Complex64, zeta: Complex64) -> f64 {
        self.shell_tail(z, zeta)
    }

    fn eval_grid(&self, zs: &[Complex64], zetas: &[Complex64]) -> CMatrix {
        let r = self.weight.r();
        let k = self.terms.len();
        let urows: Vec<Vec<Complex64>> = zs
            .par_iter()
            .map(|&x| {
                self.terms
                    .iter()
                    .map(|t| t.alpha * cpow(ONE - x.conj() * t.gzeta, -r))
                    .collect()
            })
            .collect();
        let u = DMatrix::from_fn(zs.len(), k, |i, g| urows[i][g]);
        let c = self.weight.c_r();
        let mut out = DMatrix::zeros(zs.len(), zetas.len());
        // the term-by-node factor is built a block of columns at a time
        let block = (GRID_BLOCK / k.max(1)).max(1);
        for (b, ys) in zetas.chunks(block).enumerate() {
            let vcols: Vec<Vec<Complex64>> = ys
                .par_iter()
                .map(|&y| {
                    self.terms
                        .iter()
                        .map(|t| cpow(ONE - t.gz.conj() * y, -r))
                        .collect()
                })
                .collect();
            let v = DMatrix::from_fn(k, ys.len(), |g, j| vcols[j][g]);
            let s = cgemm(&u, &v);
            for (j, &y) in ys.iter().enumerate() {
                for (i, &x) in zs.iter().enumerate() {
                    out[(i, b * block + j)] = c * cpow(ONE - x.conj() * y, r) * s[(i, j)];
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::{enumerate_orbit, octagon_group, trivial_group};

    fn p(re: f64, im: f64) -> DiskPoint {
        DiskPoint::from_re_im(re, im).unwrap()
    }

    #[test]
    fn forms_agree_for_octagon() {
        let t = enumerate_orbit(&octagon_group(), 3, 1e-9).unwrap();
        let w = Weight::new(8.0).unwrap();
        let e = EvalVector::new(&t, w, p(0.1, 0.05), p(-0.1, 0.15)).unwrap();
        for &(a, b) in &[
            (Complex64::new(0.2, 0.1), Complex64::new(-0.05, 0.0)),
            (Complex64::new(0.0, -0.3), Complex64::new(0.3, 0.3)),
        ] {
            let f2 = e.eval_form2(a, b);
            let f1 = e.eval_form1(&t, a, b);
            assert!(
                (f1 - f2).norm() < 1e-6 * f2.norm() + 10.0 * e.shell_tail(a, b),
                "{f1} {f2}"
            );
        }
    }

    #[test]
    fn trivial_group_reduces_to_rank_one() {
        let t = enumerate_orbit(&trivial_group(), 2, 1e-9).unwrap();
        let w = Weight::new(6.0).unwrap();
        let (z, zeta) = (Complex64::new(0.2, -0.1), Complex64::new(0.1, 0.3));
        let e = EvalVector::new(
            &t,
            w,
            DiskPoint::new(z).unwrap(),
            DiskPoint::new(zeta).unwrap(),
        )
        .unwrap();
        let (a, b) = (Complex64::new(-0.3, 0.2), Complex64::new(0.4, 0.0));
        let expect = w.c_r()
            * cpow(ONE - z.conj() * zeta, 6.0)
            * cpow(ONE - a.conj() * b, 6.0)
            * cpow(ONE - a.conj() * zeta, -6.0)
            * cpow(ONE - z.conj() * b, -6.0);
        assert!((e.eval(a, b) - expect).norm() < 1e-13 * expect.norm());
        let g = e.eval_grid(&[a, z], &[b, zeta]);
        assert!((g[(0, 0)] - expect).norm() < 1e-12 * expect.norm());
        assert!((g[(1, 1)] - e.eval(z, zeta)).norm() < 1e-12);
    }
}
