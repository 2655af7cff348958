//! One-dimensional Gauss rules via the Golub–Welsch eigenvalue method.

use nalgebra::{DMatrix, SymmetricEigen};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Nodes and weights of a one-dimensional rule, nodes ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss–Jacobi rule for `∫_{-1}^{1} (1-x)^α (1+x)^β f(x) dx`.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<GaussRule> {
    if n == 0 {
        return Err(Error::OrderTooSmall(
            "Gauss rule needs at least one node".into(),
        ));
    }
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(Error::Integrability {
            s: alpha,
            decay: beta,
        });
    }
    let ab = alpha + beta;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    for (k, d) in diag.iter_mut().enumerate() {
        let kf = k as f64;
        *d = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            let t = 2.0 * kf + ab;
            (beta * beta - alpha * alpha) / (t * (t + 2.0))
        };
    }
    for (i, o) in off.iter_mut().enumerate() {
        let k = (i + 1) as f64;
        let t = 2.0 * k + ab;
        *o = if i == 0 {
            (4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))).sqrt()
        } else {
            (4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (t * t * (t + 1.0) * (t - 1.0))).sqrt()
        };
    }
    let ln_mu0 = (ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0)
        - ln_gamma(ab + 2.0);
    Ok(golub_welsch(&diag, &off, ln_mu0.exp()))
}

/// Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<GaussRule> {
    let base = gauss_jacobi(n, 0.0, 0.0)?;
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    Ok(GaussRule {
        nodes: base.nodes.iter().map(|x| mid + half * x).collect(),
        weights: base.weights.iter().map(|w| w * half).collect(),
    })
}

/// Gauss rule for `∫_0^1 (1-u)^p f(u) du`.
pub fn gauss_radial(n: usize, p: f64) -> Result<GaussRule> {
    let base = gauss_jacobi(n, p, 0.0)?;
    let scale = (-(p + 1.0) * std::f64::consts::LN_2).exp();
    Ok(GaussRule {
        nodes: base.nodes.iter().map(|x| 0.5 * (x + 1.0)).collect(),
        weights: base.weights.iter().map(|w| w * scale).collect(),
    })
}

fn golub_welsch(diag: &[f64], off: &[f64], mu0: f64) -> GaussRule {
    let n = diag.len();
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        jac[(i, i)] = diag[i];
    }
    for (i, &o) in off.iter().enumerate() {
        jac[(i, i + 1)] = o;
        jac[(i + 1, i)] = o;
    }
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|j| {
            let v0 = eig.eigenvectors[(0, j)];
            (eig.eigenvalues[j], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    GaussRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let g = gauss_legendre(10, 0.0, 2.0).unwrap();
        for k in 0..20 {
            let v: f64 = g
                .nodes
                .iter()
                .zip(&g.weights)
                .map(|(x, w)| w * x.powi(k))
                .sum();
            let exact = 2f64.powi(k + 1) / (k as f64 + 1.0);
            assert!((v - exact).abs() / exact < 1e-13, "k={k}");
        }
    }

    #[test]
    fn radial_rule_beta_integrals() {
        // ∫_0^1 (1-u)^p u^k du = B(k+1, p+1)
        for &p in &[-0.5, 0.0, 2.5, 6.0] {
            let g = gauss_radial(24, p).unwrap();
            for k in 0..30 {
                let v: f64 = g
                    .nodes
                    .iter()
                    .zip(&g.weights)
                    .map(|(u, w)| w * u.powi(k))
                    .sum();
                let kf = k as f64;
                let exact = (ln_gamma(kf + 1.0) + ln_gamma(p + 1.0) - ln_gamma(kf + p + 2.0)).exp();
                assert!((v - exact).abs() / exact < 1e-12, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(gauss_jacobi(0, 0.0, 0.0).is_err());
        assert!(gauss_jacobi(4, -1.0, 0.0).is_err());
    }
}
