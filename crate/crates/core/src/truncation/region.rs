//! Unions `G_N = γ₁F ∪ … ∪ γ_N F` of the first `N` tiles.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fuchsian::{FundamentalDomain, OrbitTable};
use crate::geometry::{DiskPoint, SU11Element};
use crate::quadrature::WeightedNodes;

#[derive(Debug, Clone)]
pub struct TruncationRegion {
    domain: FundamentalDomain,
    /// Tile elements in table order (radius-sorted, identity first).
    elements: Vec<SU11Element>,
}

/// The first `n` tiles in the table's radius order.
pub fn build_region(
    domain: &FundamentalDomain,
    table: &OrbitTable,
    n: usize,
) -> Result<TruncationRegion> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "a region needs at least one tile".into(),
        ));
    }
    if n > table.len() {
        return Err(Error::InvalidArgument(format!(
            "region of {n} tiles requested from a table of {} elements",
            table.len()
        )));
    }
    Ok(TruncationRegion {
        domain: domain.clone(),
        elements: table.entries()[..n].iter().map(|e| e.element).collect(),
    })
}

impl TruncationRegion {
    /// Region made of explicitly chosen tiles, for enumeration-order checks.
    pub fn from_elements(domain: &FundamentalDomain, elements: Vec<SU11Element>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidArgument(
                "a region needs at least one tile".into(),
            ));
        }
        Ok(TruncationRegion {
            domain: domain.clone(),
            elements,
        })
    }

    pub fn n(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[SU11Element] {
        &self.elements
    }

    pub fn domain(&self) -> &FundamentalDomain {
        &self.domain
    }

    /// `γᵢ0` for each tile.
    pub fn centres(&self) -> Vec<Complex64> {
        self.elements.iter().map(|g| g.orbit_point()).collect()
    }

    /// `z ∈ γᵢF` for some `i`, tested as `γᵢ⁻¹z ∈ F`.
    pub fn contains(&self, z: DiskPoint) -> Result<bool> {
        let reach = self.domain.circumradius() + 1e-9;
        for g in &self.elements {
            let w = g.inverse().act(z.value());
            if w.norm() > reach {
                continue;
            }
            if self.domain.contains(DiskPoint::new(w)?)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// The domain's sector rule copied onto every tile. The measure `λ_s`
    /// transforms with the factor `((1-|γz|²)/(1-|z|²))^s`, which
    /// [`WeightedNodes::translated`] applies.
    pub fn rule(&self, s: f64, angular_per_sector: usize, radial: usize) -> Result<WeightedNodes> {
        let base = self.domain.rule(s, angular_per_sector, radial)?;
        let parts: Vec<WeightedNodes> = self.elements.iter().map(|g| base.translated(g)).collect();
        WeightedNodes::concat(&parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::{enumerate_orbit, octagon_group};
    use crate::quadrature::{build_disk_rule, Quadrature, RegionRule};
    use std::f64::consts::PI;

    fn setup() -> (FundamentalDomain, OrbitTable) {
        let t = enumerate_orbit(&octagon_group(), 4, 1e-9).unwrap();
        (FundamentalDomain::dirichlet(&t).unwrap(), t)
    }

    #[test]
    fn first_tile_is_the_domain_and_regions_nest() {
        let (dom, t) = setup();
        let g1 = build_region(&dom, &t, 1).unwrap();
        let g5 = build_region(&dom, &t, 5).unwrap();
        for k in 0..60 {
            let z =
                DiskPoint::new(Complex64::from_polar(0.012 * k as f64, 1.3 * k as f64)).unwrap();
            assert_eq!(g1.contains(z).unwrap(), dom.contains(z).unwrap());
            if g1.contains(z).unwrap() {
                assert!(g5.contains(z).unwrap());
            }
        }
        assert!(build_region(&dom, &t, t.len() + 1).is_err());
    }

    #[test]
    fn area_is_n_copies() {
        let (dom, t) = setup();
        // flat area measure, converted to λ₀ below
        let base = build_disk_rule(2.0, 200, 512, 0.0).unwrap();
        for n in [1, 3, 9] {
            let g = build_region(&dom, &t, n).unwrap();
            let masked = RegionRule::new(&base, |p| g.contains(p).unwrap_or(false)).unwrap();
            let area: f64 = masked
                .nodes()
                .iter()
                .zip(masked.weights())
                .map(|(x, w)| w / (1.0 - x.norm_sqr()).powi(2))
                .sum();
            assert!(
                (area - n as f64 * PI).abs() < 0.01 * n as f64 * PI,
                "{n}: {area}"
            );
            // λ₀ is invariant, so each copied rule keeps the mass of the original
            let r = g.rule(0.0, 4, 4).unwrap();
            let one: f64 = dom.rule(0.0, 4, 4).unwrap().weights().iter().sum();
            let exact: f64 = r.weights().iter().sum();
            assert!((exact - n as f64 * one).abs() < 1e-12 * n as f64);
        }
    }

    #[test]
    fn tiles_are_disjoint() {
        let (dom, t) = setup();
        let g = build_region(&dom, &t, 9).unwrap();
        let r = g.rule(0.0, 2, 3).unwrap();
        // every node lies in exactly one tile
        for &x in r.nodes() {
            let count = g
                .elements()
                .iter()
                .filter(|e| {
                    dom.contains(DiskPoint::new(e.inverse().act(x)).unwrap())
                        .unwrap()
                })
                .count();
            assert_eq!(count, 1);
        }
    }
}
