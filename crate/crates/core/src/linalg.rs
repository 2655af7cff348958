//! Dense complex helpers built on nalgebra's real kernels.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

fn split(a: &CMatrix) -> (DMatrix<f64>, DMatrix<f64>) {
    (a.map(|v| v.re), a.map(|v| v.im))
}

/// `A·B` via four real products, which go through the blocked real GEMM.
pub fn cgemm(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ai) = split(a);
    let (br, bi) = split(b);
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    DMatrix::from_fn(re.nrows(), re.ncols(), |i, j| {
        Complex64::new(re[(i, j)], im[(i, j)])
    })
}

/// `Aᴴ·B`.
pub fn cgemm_adjoint_left(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ai) = split(a);
    let (br, bi) = split(b);
    let re = ar.tr_mul(&br) + ai.tr_mul(&bi);
    let im = ar.tr_mul(&bi) - ai.tr_mul(&br);
    DMatrix::from_fn(re.nrows(), re.ncols(), |i, j| {
        Complex64::new(re[(i, j)], im[(i, j)])
    })
}

fn hermitian_part(h: &CMatrix) -> CMatrix {
    (h + h.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(hermitian_part(h))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// Hermitian eigen-decomposition `H = V Λ Vᴴ`, eigenvalues descending.
pub fn hermitian_eigen(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(hermitian_part(h));
    let n = h.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let v = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (vals, v)
}

/// Singular values of `L Rᴴ` (both `n×k`, tall) from the `k×k` Gram matrices.
/// Tiny singular values lose relative accuracy to the squaring, which is
/// harmless for nuclear and Frobenius norms.
pub fn factored_singular_values(l: &CMatrix, r: &CMatrix) -> Result<Vec<f64>> {
    if l.ncols() != r.ncols() {
        return Err(Error::InvalidArgument("factor ranks differ".into()));
    }
    let gl = cgemm_adjoint_left(l, l);
    let gr = cgemm_adjoint_left(r, r);
    let (lam, v) = hermitian_eigen(&gl);
    // C = V Λ^{1/2} so that Gl = C Cᴴ; σ² = eig(Cᴴ Gr C)
    let c = DMatrix::from_fn(v.nrows(), v.ncols(), |i, j| {
        v[(i, j)] * lam[j].max(0.0).sqrt()
    });
    let inner = cgemm_adjoint_left(&c, &cgemm(&gr, &c));
    let ev = hermitian_eigenvalues(&inner);
    if ev.iter().any(|x| !x.is_finite()) {
        return Err(Error::SvdFailure);
    }
    Ok(ev.iter().map(|x| x.max(0.0).sqrt()).collect())
}

/// Singular values of a general complex matrix.
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    let svd = m
        .clone()
        .try_svd(false, false, 1e-14, 10_000)
        .ok_or(Error::SvdFailure)?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rng: &mut ChaCha8Rng, n: usize, m: usize) -> CMatrix {
        DMatrix::from_fn(n, m, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    #[test]
    fn cgemm_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random(&mut rng, 7, 5);
        let b = random(&mut rng, 5, 4);
        let c = cgemm(&a, &b);
        assert!((c - &a * &b).iter().all(|v| v.norm() < 1e-13));
        let d = cgemm_adjoint_left(&a, &random(&mut rng, 7, 3));
        assert_eq!(d.shape(), (5, 3));
    }

    #[test]
    fn factored_matches_direct_svd() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let l = random(&mut rng, 40, 6);
        let r = random(&mut rng, 40, 6);
        let m = cgemm(&l, &r.adjoint());
        let direct = singular_values(&m).unwrap();
        let fact = factored_singular_values(&l, &r).unwrap();
        for k in 0..6 {
            assert!((direct[k] - fact[k]).abs() < 1e-9 * direct[0]);
        }
    }

    #[test]
    fn hermitian_eigen_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random(&mut rng, 6, 6);
        let h = &a + a.adjoint();
        let (lam, v) = hermitian_eigen(&h);
        let rec =
            &v * CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                6,
                lam.iter().map(|&x| Complex64::new(x, 0.0)),
            )) * v.adjoint();
        assert!((rec - &h).iter().all(|x| x.norm() < 1e-10));
    }
}
