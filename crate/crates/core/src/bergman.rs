//! The weighted Bergman space `H²(𝔻, dλ_r)` in a truncated orthonormal
//! monomial basis, used as a brute-force oracle.
//!
//! Inner product: `⟨f, g⟩ = c_r ∫ f ḡ dλ_r`, so `⟨1, 1⟩ = 1`, `‖xⁿ‖² = βₙ`
//! and the reproducing kernel is `(1 - x z̄)^{-r}`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{cpow, DiskPoint, Weight};
use crate::quadrature::Quadrature;

pub const DEFAULT_DEGREE_CAP: usize = 60;
pub const DEFAULT_TAIL_LIMIT: f64 = 1e-10;

/// `βₙ = ‖xⁿ‖² = Γ(n+1)Γ(r)/Γ(n+r)`, via `βₙ/βₙ₋₁ = n/(n+r-1)`.
pub fn monomial_norm_sq(w: Weight, n: usize) -> f64 {
    (1..=n).fold(1.0, |b, k| b * k as f64 / (k as f64 + w.r() - 1.0))
}

/// `e^r_z(x) = (1 - x z̄)^{-r}`.
pub fn reproducing_kernel(w: Weight, z: DiskPoint, x: DiskPoint) -> Complex64 {
    cpow(
        Complex64::new(1.0, 0.0) - x.value() * z.value().conj(),
        -w.r(),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonomialBasis {
    weight: Weight,
    degree_cap: usize,
    norms_sq: Vec<f64>,
}

impl MonomialBasis {
    pub fn new(weight: Weight, degree_cap: usize) -> Self {
        let mut norms_sq = Vec::with_capacity(degree_cap + 1);
        let mut b = 1.0;
        norms_sq.push(b);
        for n in 1..=degree_cap {
            b *= n as f64 / (n as f64 + weight.r() - 1.0);
            norms_sq.push(b);
        }
        MonomialBasis {
            weight,
            degree_cap,
            norms_sq,
        }
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    pub fn dim(&self) -> usize {
        self.degree_cap + 1
    }

    pub fn norms_sq(&self) -> &[f64] {
        &self.norms_sq
    }

    /// Coordinates of `e^r_z` in the orthonormal basis: `z̄ⁿ/√βₙ`.
    pub fn coherent(&self, z: Complex64) -> Vec<Complex64> {
        let zc = z.conj();
        let mut p = Complex64::new(1.0, 0.0);
        self.norms_sq
            .iter()
            .map(|b| {
                let v = p / b.sqrt();
                p *= zc;
                v
            })
            .collect()
    }

    /// Values of the orthonormal basis functions `xⁿ/√βₙ` at `x`.
    pub fn basis_values(&self, x: Complex64) -> Vec<Complex64> {
        self.coherent(x.conj())
    }

    /// Relative norm `‖e_z - P_N e_z‖/‖e_z‖` of the part of the coherent state
    /// beyond the degree cap.
    pub fn coherent_tail(&self, z: Complex64) -> f64 {
        let t = z.norm_sqr();
        if t == 0.0 {
            return 0.0;
        }
        // Terms pₙ = (1-t)^r tⁿ/βₙ of a negative binomial law; sum the tail directly.
        let r = self.weight.r();
        let n0 = self.degree_cap + 1;
        let log_p = r * (1.0 - t).ln() + n0 as f64 * t.ln() - self.log_beta(n0);
        let mut term = log_p.exp();
        let mut sum: f64 = 0.0;
        let mut n = n0;
        while term > 1e-40 * sum.max(1e-300) && n < n0 + 100_000 {
            sum += term;
            term *= t * (n as f64 + r) / (n as f64 + 1.0);
            n += 1;
        }
        sum.sqrt()
    }

    fn log_beta(&self, n: usize) -> f64 {
        if n < self.norms_sq.len() {
            return self.norms_sq[n].ln();
        }
        let r = self.weight.r();
        let mut lb = self.norms_sq[self.degree_cap].ln();
        for k in self.degree_cap + 1..=n {
            lb += (k as f64 / (k as f64 + r - 1.0)).ln();
        }
        lb
    }

    pub fn check_tail(&self, z: Complex64, limit: f64) -> Result<()> {
        let tail = self.coherent_tail(z);
        if tail > limit {
            return Err(Error::TruncationTail { tail, limit });
        }
        Ok(())
    }
}

/// A finite matrix `M_{mn} = ⟨A êₙ, ê_m⟩` in the orthonormal monomial basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    basis: MonomialBasis,
    matrix: DMatrix<Complex64>,
}

impl TruncatedOperator {
    pub fn new(basis: MonomialBasis, matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != basis.dim() || matrix.ncols() != basis.dim() {
            return Err(Error::InvalidArgument(format!(
                "matrix is {}x{}, basis has dimension {}",
                matrix.nrows(),
                matrix.ncols(),
                basis.dim()
            )));
        }
        if matrix
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::InvalidArgument(
                "matrix has non-finite entries".into(),
            ));
        }
        Ok(TruncatedOperator { basis, matrix })
    }

    pub fn identity(basis: MonomialBasis) -> Self {
        let n = basis.dim();
        TruncatedOperator {
            basis,
            matrix: DMatrix::identity(n, n),
        }
    }

    /// `f ↦ ⟨f, e_u⟩ e_v`.
    pub fn rank_one(basis: MonomialBasis, u: Complex64, v: Complex64) -> Self {
        let cu = basis.coherent(u);
        let cv = basis.coherent(v);
        let n = basis.dim();
        let matrix = DMatrix::from_fn(n, n, |m, k| cv[m] * cu[k].conj());
        TruncatedOperator { basis, matrix }
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn weight(&self) -> Weight {
        self.basis.weight()
    }

    pub fn adjoint(&self) -> Self {
        TruncatedOperator {
            basis: self.basis.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    /// Operator product `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        TruncatedOperator {
            basis: self.basis.clone(),
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        TruncatedOperator {
            basis: self.basis.clone(),
            matrix: &self.matrix + &other.matrix,
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        TruncatedOperator {
            basis: self.basis.clone(),
            matrix: &self.matrix * c,
        }
    }

    /// `Â(z̄, ζ)` without the truncation-tail check.
    pub fn symbol_unchecked(&self, z: Complex64, zeta: Complex64) -> Complex64 {
        let cz = self.basis.coherent(z);
        let cw = self.basis.coherent(zeta);
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, w) in cw.iter().enumerate() {
            let row: Complex64 = cz
                .iter()
                .enumerate()
                .map(|(k, c)| self.matrix[(m, k)] * c)
                .sum();
            acc += row * w.conj();
        }
        acc * cpow(
            Complex64::new(1.0, 0.0) - z.conj() * zeta,
            self.weight().r(),
        )
    }
}

/// Matrix of `T_φ` with entries `⟨φ êₙ, ê_m⟩ = c_r ∫ φ êₙ ē_m dλ_r`.
pub fn toeplitz_matrix<F, Q>(phi: F, basis: &MonomialBasis, rule: &Q) -> Result<TruncatedOperator>
where
    F: Fn(Complex64) -> Complex64 + Sync,
    Q: Quadrature + ?Sized,
{
    let w = basis.weight();
    if (rule.measure_exponent() - w.r()).abs() > 1e-12 {
        return Err(Error::WeightMismatch(rule.measure_exponent(), w.r()));
    }
    let n = basis.dim();
    let rows: Vec<(Vec<Complex64>, Complex64)> = rule
        .nodes()
        .par_iter()
        .zip(rule.weights().par_iter())
        .map(|(&x, &wt)| (basis.basis_values(x), phi(x) * (w.c_r() * wt)))
        .collect();
    if let Some(i) = rows
        .iter()
        .position(|(_, f)| !f.re.is_finite() || !f.im.is_finite())
    {
        let z = rule.nodes()[i];
        return Err(Error::NonFinite {
            index: i,
            re: z.re,
            im: z.im,
        });
    }
    let vmat = DMatrix::from_fn(rows.len(), n, |i, k| rows[i].0[k]);
    let dv = DMatrix::from_fn(rows.len(), n, |i, k| rows[i].0[k] * rows[i].1);
    // M_{mk} = Σᵢ conj(V_{im}) φᵢ wᵢ V_{ik}
    let matrix = vmat.adjoint() * dv;
    TruncatedOperator::new(basis.clone(), matrix)
}

/// Berezin symbol `⟨A e_z, e_ζ⟩/⟨e_z, e_ζ⟩`, refused when the coherent states
/// are not resolved by the degree cap.
pub fn berezin_symbol(a: &TruncatedOperator, z: DiskPoint, zeta: DiskPoint) -> Result<Complex64> {
    a.basis.check_tail(z.value(), DEFAULT_TAIL_LIMIT)?;
    a.basis.check_tail(zeta.value(), DEFAULT_TAIL_LIMIT)?;
    Ok(a.symbol_unchecked(z.value(), zeta.value()))
}

/// Largest singular value.
pub fn operator_sup_norm(a: &TruncatedOperator) -> f64 {
    a.matrix
        .clone()
        .singular_values()
        .iter()
        .fold(0.0, |m, &s| m.max(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{build_disk_rule, integrate};
    use nalgebra::DVector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn norms_match_beta_integrals() {
        let w4 = Weight::new(4.0).unwrap();
        assert_eq!(monomial_norm_sq(w4, 0), 1.0);
        assert!((monomial_norm_sq(w4, 1) - 0.25).abs() < 1e-15);
        let w = Weight::new(6.0).unwrap();
        let rule = build_disk_rule(6.0, 32, 64, 0.0).unwrap();
        for n in 0..=10 {
            let q = integrate(&rule, |x| {
                Complex64::new(x.norm_sqr().powi(n as i32) * w.c_r(), 0.0)
            })
            .unwrap();
            assert!((q.re - monomial_norm_sq(w, n)).abs() / q.re < 1e-9, "n={n}");
        }
        let b = MonomialBasis::new(w, 20);
        for n in 1..=20 {
            let ratio = b.norms_sq()[n] / b.norms_sq()[n - 1];
            assert!((ratio - n as f64 / (n as f64 + 5.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn kernel_reproduces() {
        let w = Weight::new(6.0).unwrap();
        let rule = build_disk_rule(6.0, 64, 128, 0.0).unwrap();
        let z = DiskPoint::from_re_im(0.4, 0.0).unwrap();
        // ⟨f, e_z⟩ = c_r ∫ f(x) conj(e_z(x)) dλ_r
        let v = integrate(&rule, |x| {
            x.powu(3) * reproducing_kernel(w, z, DiskPoint::new(x).unwrap()).conj() * w.c_r()
        })
        .unwrap();
        assert!((v - c(0.064, 0.0)).norm() < 1e-9);
        let zeta = DiskPoint::from_re_im(-0.2, 0.3).unwrap();
        let ip = integrate(&rule, |x| {
            let p = DiskPoint::new(x).unwrap();
            reproducing_kernel(w, z, p) * reproducing_kernel(w, zeta, p).conj() * w.c_r()
        })
        .unwrap();
        // linear in the first slot: ⟨e_z, e_ζ⟩ = e_z(ζ)
        let exact = cpow(c(1.0, 0.0) - zeta.value() * z.value().conj(), -6.0);
        assert!((ip - exact).norm() < 1e-9);
        let one = reproducing_kernel(w, DiskPoint::ORIGIN, zeta);
        assert_eq!(one, c(1.0, 0.0));
    }

    #[test]
    fn toeplitz_examples() {
        let w = Weight::new(8.0).unwrap();
        let basis = MonomialBasis::new(w, 30);
        let rule = build_disk_rule(8.0, 48, 128, 0.0).unwrap();
        let id = toeplitz_matrix(|_| c(1.0, 0.0), &basis, &rule).unwrap();
        assert!((id.matrix() - DMatrix::<Complex64>::identity(31, 31))
            .iter()
            .all(|v| v.norm() < 1e-12));
        let t = toeplitz_matrix(|x| c(x.norm_sqr(), 0.0), &basis, &rule).unwrap();
        for n in 0..=30 {
            let exact = (n as f64 + 1.0) / (n as f64 + 8.0);
            assert!((t.matrix()[(n, n)].re - exact).abs() < 1e-12);
        }
        let s = berezin_symbol(&t, DiskPoint::ORIGIN, DiskPoint::ORIGIN).unwrap();
        assert!((s - c(1.0 / 8.0, 0.0)).norm() < 1e-12);
        let re = toeplitz_matrix(|x| c(x.re, 0.0), &basis, &rule).unwrap();
        for m in 0..=30 {
            for n in 0..=30 {
                let v = re.matrix()[(m, n)];
                assert!((v - re.matrix()[(n, m)].conj()).norm() < 1e-13);
                if (m as i64 - n as i64).abs() != 1 {
                    assert!(v.norm() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn symbols_of_identity_and_rank_one() {
        let w = Weight::new(8.0).unwrap();
        let basis = MonomialBasis::new(w, 60);
        let id = TruncatedOperator::identity(basis.clone());
        let z = DiskPoint::from_re_im(0.3, 0.1).unwrap();
        let zeta = DiskPoint::from_re_im(-0.2, 0.25).unwrap();
        assert!((berezin_symbol(&id, z, zeta).unwrap() - c(1.0, 0.0)).norm() < 1e-12);

        let (u, v) = (c(0.2, -0.1), c(0.05, 0.3));
        let a = TruncatedOperator::rank_one(basis, u, v);
        let one = c(1.0, 0.0);
        let (zv, wv) = (z.value(), zeta.value());
        let exact = cpow(one - zv.conj() * wv, 8.0)
            / (cpow(one - zv.conj() * u, 8.0) * cpow(one - v.conj() * wv, 8.0));
        let got = berezin_symbol(&a, z, zeta).unwrap();
        assert!((got - exact).norm() / exact.norm() < 1e-10);
    }

    #[test]
    fn tail_check_refuses_far_points() {
        let b = MonomialBasis::new(Weight::new(8.0).unwrap(), 60);
        assert!(b.coherent_tail(c(0.3, 0.0)) < 1e-10);
        let far = DiskPoint::from_re_im(0.9, 0.0).unwrap();
        let id = TruncatedOperator::identity(b);
        assert!(matches!(
            berezin_symbol(&id, far, DiskPoint::ORIGIN),
            Err(Error::TruncationTail { .. })
        ));
    }

    #[test]
    fn sup_norm_cases() {
        let w = Weight::new(6.0).unwrap();
        let basis = MonomialBasis::new(w, 20);
        assert!(
            (operator_sup_norm(&TruncatedOperator::identity(basis.clone())) - 1.0).abs() < 1e-12
        );
        let diag = DMatrix::from_fn(21, 21, |m, n| {
            if m == n {
                c((n as f64 + 1.0) / (n as f64 + 6.0), 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let t = TruncatedOperator::new(basis.clone(), diag).unwrap();
        assert!((operator_sup_norm(&t) - 21.0 / 26.0).abs() < 1e-12);

        // unitary conjugation via a Householder reflection
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v = DVector::from_fn(21, |_, _| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let v = v.unscale(v.norm());
        let u = DMatrix::identity(21, 21) - (&v * v.adjoint()) * c(2.0, 0.0);
        let m = DMatrix::from_fn(21, 21, |_, _| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let a = TruncatedOperator::new(basis.clone(), m).unwrap();
        let b = TruncatedOperator::new(basis, &u * a.matrix() * u.adjoint()).unwrap();
        assert!((operator_sup_norm(&a) - operator_sup_norm(&b)).abs() < 1e-10);
    }

    #[test]
    fn toeplitz_is_contractive() {
        let w = Weight::new(6.0).unwrap();
        let basis = MonomialBasis::new(w, 24);
        let rule = build_disk_rule(6.0, 40, 96, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let coef: Vec<Complex64> = (0..6)
                .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let phi = |x: Complex64| {
                coef[0]
                    + coef[1] * x
                    + coef[2] * x.conj()
                    + coef[3] * x * x.conj()
                    + coef[4] * x * x
                    + coef[5] * x.conj().powu(3)
            };
            // sup over a fine polar grid, including the boundary circle
            let mut sup: f64 = 0.0;
            for i in 0..=50 {
                for k in 0..200 {
                    let x = Complex64::from_polar(i as f64 / 50.0, 2.0 * PI * k as f64 / 200.0);
                    sup = sup.max(phi(x).norm());
                }
            }
            let t = toeplitz_matrix(phi, &basis, &rule).unwrap();
            assert!(operator_sup_norm(&t) <= sup * (1.0 + 1e-9));
        }
    }

    #[test]
    fn positive_operator_has_nonnegative_diagonal_symbol() {
        let w = Weight::new(8.0).unwrap();
        let basis = MonomialBasis::new(w, 40);
        let rule = build_disk_rule(8.0, 40, 128, 0.0).unwrap();
        let t =
            toeplitz_matrix(|x| c(x.norm_sqr() + 0.1 * x.re * x.re, 0.0), &basis, &rule).unwrap();
        let p = t.adjoint().compose(&t);
        for k in 0..10 {
            let z = Complex64::from_polar(0.05 * k as f64, k as f64);
            assert!(p.symbol_unchecked(z, z).re >= 0.0);
        }
    }
}
