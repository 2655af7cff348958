//! Product rules on the unit disk for `dλ_s(z) = (1-|z|²)^{s-2} dA`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::gauss::gauss_radial;
use super::sum::tree_sum;
use crate::error::{Error, Result};
use crate::geometry::{DiskPoint, SU11Element};

/// Anything that carries quadrature nodes and weights for some `λ_s`.
pub trait Quadrature: Sync {
    fn nodes(&self) -> &[Complex64];
    fn weights(&self) -> &[f64];
    /// The exponent `s` of the measure `λ_s` the weights target.
    fn measure_exponent(&self) -> f64;

    fn len(&self) -> usize {
        self.nodes().len()
    }

    fn is_empty(&self) -> bool {
        self.nodes().is_empty()
    }
}

/// Polar product rule: Gauss–Jacobi in `u = |z|²` absorbing the boundary
/// factor `(1-u)^{s-2+decay}`, uniform in the angle.
///
/// Weights are scaled so that `Σ wᵢ f(zᵢ) ≈ ∫ f dλ_s` for integrands
/// behaving like `(1-|z|²)^{decay} × smooth`.
#[derive(Debug, Clone)]
pub struct DiskRule {
    nodes: Vec<Complex64>,
    weights: Vec<f64>,
    measure_exponent: f64,
    decay_exponent: f64,
    radial_order: usize,
    angular_order: usize,
    angular_offset: f64,
}

pub const DEFAULT_RADIAL_ORDER: usize = 96;
pub const DEFAULT_ANGULAR_ORDER: usize = 256;

pub fn build_disk_rule(
    s: f64,
    radial_order: usize,
    angular_order: usize,
    decay_exponent: f64,
) -> Result<DiskRule> {
    DiskRule::with_offset(s, radial_order, angular_order, decay_exponent, 0.0)
}

impl DiskRule {
    pub fn with_offset(
        s: f64,
        radial_order: usize,
        angular_order: usize,
        decay_exponent: f64,
        angular_offset: f64,
    ) -> Result<Self> {
        // written to reject NaN too
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(s + decay_exponent > 1.0) {
            return Err(Error::Integrability {
                s,
                decay: decay_exponent,
            });
        }
        if radial_order < 2 || angular_order < 4 {
            return Err(Error::OrderTooSmall(format!(
                "radial order {radial_order} (need >= 2), angular order {angular_order} (need >= 4)"
            )));
        }
        let radial = gauss_radial(radial_order, s - 2.0 + decay_exponent)?;
        let dtheta = 2.0 * PI / angular_order as f64;
        let mut nodes = Vec::with_capacity(radial_order * angular_order);
        let mut weights = Vec::with_capacity(radial_order * angular_order);
        for (&u, &wu) in radial.nodes.iter().zip(&radial.weights) {
            let rho = u.sqrt();
            let w = 0.5 * dtheta * wu * (1.0 - u).powf(-decay_exponent);
            for k in 0..angular_order {
                let theta = angular_offset + dtheta * k as f64;
                nodes.push(Complex64::from_polar(rho, theta));
                weights.push(w);
            }
        }
        Ok(DiskRule {
            nodes,
            weights,
            measure_exponent: s,
            decay_exponent,
            radial_order,
            angular_order,
            angular_offset,
        })
    }

    pub fn decay_exponent(&self) -> f64 {
        self.decay_exponent
    }

    pub fn radial_order(&self) -> usize {
        self.radial_order
    }

    pub fn angular_order(&self) -> usize {
        self.angular_order
    }

    pub fn angular_offset(&self) -> f64 {
        self.angular_offset
    }

    /// Integrates `f` with this rule and with the radially doubled rule; fails
    /// with [`Error::OrderTooSmall`] when they differ by more than `rel_tol`.
    pub fn integrate_checked<F>(&self, f: F, rel_tol: f64) -> Result<Complex64>
    where
        F: Fn(Complex64) -> Complex64 + Sync,
    {
        let fine = DiskRule::with_offset(
            self.measure_exponent,
            2 * self.radial_order,
            self.angular_order,
            self.decay_exponent,
            self.angular_offset,
        )?;
        let a = integrate(self, &f)?;
        let b = integrate(&fine, &f)?;
        let scale = b.norm().max(f64::MIN_POSITIVE);
        if (a - b).norm() / scale > rel_tol {
            return Err(Error::OrderTooSmall(format!(
                "radial order {} misses tolerance {rel_tol:e} (doubling changed the value by {:e} relative)",
                self.radial_order,
                (a - b).norm() / scale
            )));
        }
        Ok(b)
    }
}

impl Quadrature for DiskRule {
    fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }
    fn weights(&self) -> &[f64] {
        &self.weights
    }
    fn measure_exponent(&self) -> f64 {
        self.measure_exponent
    }
}

/// A free-form node set: the common currency when rules are masked,
/// translated by group elements, reweighted or concatenated.
#[derive(Debug, Clone, Default)]
pub struct WeightedNodes {
    nodes: Vec<Complex64>,
    weights: Vec<f64>,
    measure_exponent: f64,
}

impl WeightedNodes {
    pub fn new(nodes: Vec<Complex64>, weights: Vec<f64>, measure_exponent: f64) -> Result<Self> {
        if nodes.len() != weights.len() {
            return Err(Error::InvalidArgument(format!(
                "{} nodes but {} weights",
                nodes.len(),
                weights.len()
            )));
        }
        Ok(WeightedNodes {
            nodes,
            weights,
            measure_exponent,
        })
    }

    pub fn from_rule<Q: Quadrature + ?Sized>(rule: &Q) -> Self {
        WeightedNodes {
            nodes: rule.nodes().to_vec(),
            weights: rule.weights().to_vec(),
            measure_exponent: rule.measure_exponent(),
        }
    }

    /// Same nodes, weights converted to target `λ_s` instead.
    pub fn reweighted(&self, s: f64) -> Self {
        let ds = s - self.measure_exponent;
        let weights = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(z, w)| w * (1.0 - z.norm_sqr()).powf(ds))
            .collect();
        WeightedNodes {
            nodes: self.nodes.clone(),
            weights,
            measure_exponent: s,
        }
    }

    /// Push-forward under `g`. `λ₀` is invariant, so only the `(1-|z|²)^s`
    /// density changes.
    pub fn translated(&self, g: &SU11Element) -> Self {
        let s = self.measure_exponent;
        let (nodes, weights) = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| {
                let gz = g.act(z);
                let ratio = (1.0 - gz.norm_sqr()) / (1.0 - z.norm_sqr());
                (gz, if s == 0.0 { w } else { w * ratio.powf(s) })
            })
            .unzip();
        WeightedNodes {
            nodes,
            weights,
            measure_exponent: s,
        }
    }

    pub fn concat(parts: &[WeightedNodes]) -> Result<Self> {
        let s = parts.first().map_or(0.0, |p| p.measure_exponent);
        if let Some(p) = parts.iter().find(|p| p.measure_exponent != s) {
            return Err(Error::WeightMismatch(s, p.measure_exponent));
        }
        Ok(WeightedNodes {
            nodes: parts.iter().flat_map(|p| p.nodes.iter().copied()).collect(),
            weights: parts
                .iter()
                .flat_map(|p| p.weights.iter().copied())
                .collect(),
            measure_exponent: s,
        })
    }
}

impl Quadrature for WeightedNodes {
    fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }
    fn weights(&self) -> &[f64] {
        &self.weights
    }
    fn measure_exponent(&self) -> f64 {
        self.measure_exponent
    }
}

/// A base rule restricted to the nodes accepted by a mask.
#[derive(Debug, Clone)]
pub struct RegionRule {
    indices: Vec<usize>,
    nodes: Vec<Complex64>,
    weights: Vec<f64>,
    measure_exponent: f64,
}

impl RegionRule {
    pub fn new<Q, M>(base: &Q, mask: M) -> Result<Self>
    where
        Q: Quadrature + ?Sized,
        M: Fn(DiskPoint) -> bool + Sync,
    {
        let keep: Vec<bool> = base
            .nodes()
            .par_iter()
            .map(|&z| DiskPoint::new(z).map(&mask).unwrap_or(false))
            .collect();
        let indices: Vec<usize> = keep
            .iter()
            .enumerate()
            .filter(|(_, &k)| k)
            .map(|(i, _)| i)
            .collect();
        if indices.is_empty() {
            return Err(Error::EmptyMask);
        }
        Ok(RegionRule {
            nodes: indices.iter().map(|&i| base.nodes()[i]).collect(),
            weights: indices.iter().map(|&i| base.weights()[i]).collect(),
            indices,
            measure_exponent: base.measure_exponent(),
        })
    }

    /// Positions of the retained nodes in the base rule.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn to_nodes(&self) -> WeightedNodes {
        WeightedNodes::from_rule(self)
    }
}

impl Quadrature for RegionRule {
    fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }
    fn weights(&self) -> &[f64] {
        &self.weights
    }
    fn measure_exponent(&self) -> f64 {
        self.measure_exponent
    }
}

/// `Σ wᵢ f(zᵢ)` with parallel evaluation and a fixed reduction tree.
pub fn integrate<Q, F>(rule: &Q, f: F) -> Result<Complex64>
where
    Q: Quadrature + ?Sized,
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let terms: Vec<Complex64> = rule
        .nodes()
        .par_iter()
        .zip(rule.weights().par_iter())
        .map(|(&z, &w)| f(z) * w)
        .collect();
    if let Some(i) = terms
        .iter()
        .position(|t| !t.re.is_finite() || !t.im.is_finite())
    {
        let z = rule.nodes()[i];
        return Err(Error::NonFinite {
            index: i,
            re: z.re,
            im: z.im,
        });
    }
    Ok(tree_sum(&terms))
}

pub fn integrate_real<Q, F>(rule: &Q, f: F) -> Result<f64>
where
    Q: Quadrature + ?Sized,
    F: Fn(Complex64) -> f64 + Sync,
{
    let terms: Vec<f64> = rule
        .nodes()
        .par_iter()
        .zip(rule.weights().par_iter())
        .map(|(&z, &w)| f(z) * w)
        .collect();
    if let Some(i) = terms.iter().position(|t| !t.is_finite()) {
        let z = rule.nodes()[i];
        return Err(Error::NonFinite {
            index: i,
            re: z.re,
            im: z.im,
        });
    }
    Ok(tree_sum(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::d_kernel;
    use statrs::function::gamma::ln_gamma;

    fn beta_fn(a: f64, b: f64) -> f64 {
        (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
    }

    #[test]
    fn total_mass_of_lambda_r() {
        for &r in &[3.0, 6.0, 8.0, 9.5] {
            let rule = build_disk_rule(r, 96, 256, 0.0).unwrap();
            let mass: f64 = tree_sum(rule.weights());
            let exact = PI / (r - 1.0);
            assert!((mass - exact).abs() / exact < 1e-12, "r={r}");
            let c_r = (r - 1.0) / PI;
            assert!((c_r * mass - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn lambda_zero_with_decay() {
        // ∫ d(0,ζ)^r dλ₀ = 2π/(r-2)
        for &r in &[6.0, 8.0] {
            let rule = build_disk_rule(0.0, 96, 256, r / 2.0).unwrap();
            let v =
                integrate_real(&rule, |z| d_kernel(Complex64::new(0.0, 0.0), z).powf(r)).unwrap();
            let exact = 2.0 * PI / (r - 2.0);
            assert!((v - exact).abs() / exact < 1e-12);
        }
    }

    #[test]
    fn zzbar_against_lambda4() {
        // ∫|z|² (1-|z|²)² dA = π B(2, 3)
        let rule = build_disk_rule(4.0, 32, 64, 0.0).unwrap();
        let v = integrate(&rule, |z| z * z.conj()).unwrap();
        let exact = PI * beta_fn(2.0, 3.0);
        assert!((v.re - exact).abs() / exact < 1e-13 && v.im.abs() < 1e-15);
    }

    #[test]
    fn monomials_exact() {
        let rule = build_disk_rule(5.0, 40, 64, 0.0).unwrap();
        for m in 0..=16u32 {
            for n in 0..=(32 - m).min(16) {
                let v = integrate(&rule, |z| z.powu(m) * z.conj().powu(n)).unwrap();
                let exact = if m == n {
                    PI * beta_fn(m as f64 + 1.0, 4.0)
                } else {
                    0.0
                };
                assert!(
                    (v.re - exact).abs() < 1e-10 * exact.max(1e-3) && v.im.abs() < 1e-12,
                    "{m},{n}"
                );
            }
        }
    }

    #[test]
    fn integrability_and_order_checks() {
        assert!(matches!(
            build_disk_rule(0.0, 8, 8, 1.0),
            Err(Error::Integrability { .. })
        ));
        assert!(matches!(
            build_disk_rule(4.0, 1, 8, 0.0),
            Err(Error::OrderTooSmall(_))
        ));
        let rough = build_disk_rule(0.0, 3, 16, 3.0).unwrap();
        let f = |z: Complex64| {
            Complex64::new(
                d_kernel(Complex64::new(0.0, 0.0), z).powi(6) * (1.0 + (20.0 * z.norm_sqr()).cos()),
                0.0,
            )
        };
        assert!(matches!(
            rough.integrate_checked(f, 1e-8),
            Err(Error::OrderTooSmall(_))
        ));
        let fine = build_disk_rule(0.0, 64, 16, 3.0).unwrap();
        assert!(fine.integrate_checked(f, 1e-8).is_ok());
    }

    #[test]
    fn non_finite_is_reported() {
        let rule = build_disk_rule(4.0, 4, 8, 0.0).unwrap();
        let err = integrate(&rule, |z| {
            if z.re > 0.5 {
                Complex64::new(f64::NAN, 0.0)
            } else {
                z
            }
        })
        .unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
    }

    #[test]
    fn region_rule_and_translation() {
        let rule = build_disk_rule(0.0, 64, 128, 4.0).unwrap();
        let region = RegionRule::new(&rule, |p| p.value().re > 0.0).unwrap();
        assert!(region.len() < rule.len());
        for (k, &i) in region.indices().iter().enumerate() {
            assert_eq!(region.weights()[k], rule.weights()[i]);
        }
        assert!(matches!(
            RegionRule::new(&rule, |_| false),
            Err(Error::EmptyMask)
        ));

        // λ₀-invariance: the d^8 bump centred at 0 integrates to the same
        // value as the translated rule against the translated bump.
        let g = SU11Element::translation(0.7, 1.1);
        let moved = WeightedNodes::from_rule(&rule).translated(&g);
        let p = g.orbit_point();
        let a = integrate_real(&rule, |z| d_kernel(Complex64::new(0.0, 0.0), z).powi(8)).unwrap();
        let b = integrate_real(&moved, |z| d_kernel(p, z).powi(8)).unwrap();
        assert!((a - b).abs() < 1e-12);

        let lam2 =
            WeightedNodes::from_rule(&build_disk_rule(4.0, 16, 16, 0.0).unwrap()).reweighted(6.0);
        let mass: f64 = lam2.weights().iter().sum();
        assert!((mass - PI / 5.0).abs() < 1e-12);
    }
}
