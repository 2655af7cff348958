//! Toeplitz operators with invariant symbols or invariant measures.
//!
//! Both have symbols of the form
//! `Â(z̄, ζ) = (1 - z̄ζ)^r Σ_p c_p (1 - z̄p)^{-r} (1 - p̄ζ)^{-r}`
//! with `p` running over the orbit of finitely many points of the domain.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fuchsian::{FundamentalDomain, OrbitTable};
use crate::geometry::{cpow, DiskPoint, Weight};
use crate::linalg::{cgemm, CMatrix};
use crate::quadrature::Quadrature;
use crate::quantization::symbol::Symbol;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const GRID_BLOCK: usize = 2048;

#[derive(Debug, Clone)]
pub struct PointSumSymbol {
    weight: Weight,
    points: Vec<Complex64>,
    coeffs: Vec<Complex64>,
    word_lengths: Vec<usize>,
    max_word_length: usize,
}

impl PointSumSymbol {
    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Keeps the terms accepted by `keep`. Used to drop orbit points that are
    /// hyperbolically far from every point of interest.
    pub fn filtered<F: Fn(Complex64, Complex64) -> bool>(&self, keep: F) -> Self {
        let idx: Vec<usize> = (0..self.points.len())
            .filter(|&i| keep(self.points[i], self.coeffs[i]))
            .collect();
        PointSumSymbol {
            weight: self.weight,
            points: idx.iter().map(|&i| self.points[i]).collect(),
            coeffs: idx.iter().map(|&i| self.coeffs[i]).collect(),
            word_lengths: idx.iter().map(|&i| self.word_lengths[i]).collect(),
            max_word_length: self.max_word_length,
        }
    }

    fn term(&self, i: usize, z: Complex64, zeta: Complex64) -> Complex64 {
        let r = self.weight.r();
        let p = self.points[i];
        self.coeffs[i] * cpow(ONE - z.conj() * p, -r) * cpow(ONE - p.conj() * zeta, -r)
    }
}

impl Symbol for PointSumSymbol {
    fn weight(&self) -> Weight {
        self.weight
    }

    fn eval(&self, z: Complex64, zeta: Complex64) -> Complex64 {
        let s: Complex64 = (0..self.points.len()).map(|i| self.term(i, z, zeta)).sum();
        cpow(ONE - z.conj() * zeta, self.weight.r()) * s
    }

    fn tail(&self, z: Complex64, zeta: Complex64) -> f64 {
        if self.max_word_length == 0 {
            return 0.0;
        }
        let s: f64 = (0..self.points.len())
            .filter(|&i| self.word_lengths[i] == self.max_word_length)
            .map(|i| self.term(i, z, zeta).norm())
            .sum();
        cpow(ONE - z.conj() * zeta, self.weight.r()).norm() * s
    }

    fn eval_grid(&self, zs: &[Complex64], zetas: &[Complex64]) -> CMatrix {
        let r = self.weight.r();
        let mut acc = CMatrix::zeros(zs.len(), zetas.len());
        for start in (0..self.points.len()).step_by(GRID_BLOCK) {
            let end = (start + GRID_BLOCK).min(self.points.len());
            let pts = &self.points[start..end];
            let cs = &self.coeffs[start..end];
            let urows: Vec<Vec<Complex64>> = zs
                .par_iter()
                .map(|&x| pts.iter().map(|&p| cpow(ONE - x.conj() * p, -r)).collect())
                .collect();
            let vcols: Vec<Vec<Complex64>> = zetas
                .par_iter()
                .map(|&y| {
                    pts.iter()
                        .zip(cs)
                        .map(|(&p, &c)| c * cpow(ONE - p.conj() * y, -r))
                        .collect()
                })
                .collect();
            let u = DMatrix::from_fn(zs.len(), pts.len(), |i, k| urows[i][k]);
            let v = DMatrix::from_fn(pts.len(), zetas.len(), |k, j| vcols[j][k]);
            acc += cgemm(&u, &v);
        }
        DMatrix::from_fn(zs.len(), zetas.len(), |i, j| {
            cpow(ONE - zs[i].conj() * zetas[j], r) * acc[(i, j)]
        })
    }
}

fn orbit_terms(table: &OrbitTable, w: Weight, atoms: &[(Complex64, Complex64)]) -> PointSumSymbol {
    let r = w.r();
    let mut points = Vec::with_capacity(atoms.len() * table.len());
    let mut coeffs = Vec::with_capacity(points.capacity());
    let mut word_lengths = Vec::with_capacity(points.capacity());
    for e in table.entries() {
        for &(eta, nu) in atoms {
            let p = e.element.act(eta);
            points.push(p);
            coeffs.push(nu * (w.c_r() * (1.0 - p.norm_sqr()).powf(r)));
            word_lengths.push(e.word_length());
        }
    }
    PointSumSymbol {
        weight: w,
        points,
        coeffs,
        word_lengths,
        max_word_length: table.max_word_length(),
    }
}

/// Symbol of `T_φ` for a group-invariant `φ`, computed by folding the
/// integral over the disk onto the domain: `rule` integrates over a
/// fundamental domain (any measure exponent; weights are converted to `λ₀`),
/// and `table` supplies the translates. For the trivial group pass a rule on
/// the whole disk.
///
/// `φ` is spot-checked for invariance under the generators at the first few
/// rule nodes.
pub fn invariant_toeplitz_symbol<F, Q>(
    phi: F,
    table: &OrbitTable,
    w: Weight,
    rule: &Q,
) -> Result<PointSumSymbol>
where
    F: Fn(Complex64) -> Complex64 + Sync,
    Q: Quadrature + ?Sized,
{
    let s = rule.measure_exponent();
    let gens: Vec<_> = table
        .entries()
        .iter()
        .filter(|e| e.word_length() == 1)
        .collect();
    for &eta in rule.nodes().iter().step_by((rule.len() / 8).max(1)) {
        let base = phi(eta);
        for e in &gens {
            let moved = phi(e.element.act(eta));
            let defect = (moved - base).norm() / base.norm().max(1.0);
            if defect > 1e-8 {
                return Err(Error::InvarianceViolation(defect));
            }
        }
    }
    let atoms: Vec<(Complex64, Complex64)> = rule
        .nodes()
        .par_iter()
        .zip(rule.weights().par_iter())
        .map(|(&eta, &wt)| (eta, phi(eta) * (wt * (1.0 - eta.norm_sqr()).powf(-s))))
        .collect();
    if let Some(i) = atoms
        .iter()
        .position(|(_, v)| !v.re.is_finite() || !v.im.is_finite())
    {
        let z = rule.nodes()[i];
        return Err(Error::NonFinite {
            index: i,
            re: z.re,
            im: z.im,
        });
    }
    Ok(orbit_terms(table, w, &atoms))
}

/// Symbol of the Toeplitz operator of the invariant measure that puts mass
/// `ν_k` on the orbit of each atom `η_k`. Atoms must lie in the domain.
pub fn measure_toeplitz_symbol(
    atoms: &[(Complex64, Complex64)],
    table: &OrbitTable,
    w: Weight,
    domain: &FundamentalDomain,
) -> Result<PointSumSymbol> {
    for &(eta, _) in atoms {
        if !domain.contains(DiskPoint::new(eta)?)? {
            return Err(Error::OutsideDomain {
                re: eta.re,
                im: eta.im,
            });
        }
    }
    Ok(orbit_terms(table, w, atoms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::{enumerate_orbit, octagon_group, trivial_group};
    use crate::quadrature::build_disk_rule;
    use crate::quantization::symbol::invariance_defect;

    #[test]
    fn trivial_group_modulus_squared() {
        let t = enumerate_orbit(&trivial_group(), 1, 1e-9).unwrap();
        let w = Weight::new(8.0).unwrap();
        let rule = build_disk_rule(0.0, 24, 32, 8.0).unwrap();
        let a =
            invariant_toeplitz_symbol(|x| Complex64::new(x.norm_sqr(), 0.0), &t, w, &rule).unwrap();
        let v = a.eval(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        assert!((v - Complex64::new(1.0 / 8.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn constant_symbol_folds_to_identity() {
        let t4 = enumerate_orbit(&octagon_group(), 4, 1e-9).unwrap();
        let dom = FundamentalDomain::dirichlet(&t4).unwrap();
        let rule = dom.rule(0.0, 6, 8).unwrap();
        let w = Weight::new(8.0).unwrap();
        let a = invariant_toeplitz_symbol(|_| Complex64::new(1.0, 0.0), &t4, w, &rule).unwrap();
        let (z, zeta) = (Complex64::new(0.1, 0.05), Complex64::new(-0.1, 0.2));
        let v = a.eval(z, zeta);
        assert!((v - 1.0).norm() < 1e-3, "{v}");
        // grid agrees with pointwise evaluation
        let g = a.eval_grid(&[z], &[zeta, z]);
        assert!((g[(0, 0)] - v).norm() < 1e-12);
        assert!(invariance_defect(&a, &t4, &[(z, zeta)]) < 1e-3);
    }

    #[test]
    fn measure_with_quadrature_atoms_matches_toeplitz() {
        let t = enumerate_orbit(&octagon_group(), 2, 1e-9).unwrap();
        let t4 = enumerate_orbit(&octagon_group(), 4, 1e-9).unwrap();
        let dom = FundamentalDomain::dirichlet(&t4).unwrap();
        let rule = dom.rule(0.0, 3, 3).unwrap();
        let w = Weight::new(8.0).unwrap();
        let phi = |x: Complex64| Complex64::new(1.0 + x.norm_sqr(), 0.0);
        // 1 + |x|² is not invariant
        let a = invariant_toeplitz_symbol(phi, &t, w, &rule);
        assert!(matches!(a, Err(Error::InvarianceViolation(_))));
        let one = |_x: Complex64| Complex64::new(2.0, 0.0);
        let a = invariant_toeplitz_symbol(one, &t, w, &rule).unwrap();
        let atoms: Vec<_> = rule
            .nodes()
            .iter()
            .zip(rule.weights())
            .map(|(&x, &wt)| (x, Complex64::new(2.0 * wt, 0.0)))
            .collect();
        let b = measure_toeplitz_symbol(&atoms, &t, w, &dom).unwrap();
        let (z, zeta) = (Complex64::new(0.2, 0.0), Complex64::new(0.0, 0.1));
        assert!((a.eval(z, zeta) - b.eval(z, zeta)).norm() < 1e-12);
        let outside = [(Complex64::new(0.9, 0.0), Complex64::new(1.0, 0.0))];
        assert!(matches!(
            measure_toeplitz_symbol(&outside, &t, w, &dom),
            Err(Error::OutsideDomain { .. })
        ));
    }
}
