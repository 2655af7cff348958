//! The Dirichlet fundamental domain about 0 and quadrature on it.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::orbit::OrbitTable;
use crate::error::{Error, Result};
use crate::geometry::{d_kernel, DiskPoint};
use crate::quadrature::{gauss_legendre, Quadrature, RegionRule, WeightedNodes};

pub const TIE_TOL: f64 = 1e-12;
const VERTEX_SCAN: usize = 4096;

/// `{z : d(z, 0) ≥ d(z, γ0) for every γ}`, described through the orbit points
/// of a table.
#[derive(Debug, Clone)]
pub struct FundamentalDomain {
    /// Non-identity orbit points sorted by modulus.
    points: Vec<Complex64>,
    reliable: f64,
    /// Vertices by increasing argument in `[0, 2π)`, with their angles.
    vertices: Vec<(f64, Complex64)>,
    covolume: f64,
}

/// Euclidean radius that an orbit point may have and still define a bisector
/// meeting the closed disk `|w| ≤ t`: `tanh ρ` for `ρ = 2 artanh t`.
fn guard_radius(t: f64) -> f64 {
    2.0 * t / (1.0 + t * t)
}

impl FundamentalDomain {
    pub fn dirichlet(table: &OrbitTable) -> Result<Self> {
        let points = table.entries()[1..].iter().map(|e| e.point).collect();
        Self::from_points(points, table.reliable_radius())
    }

    /// Adds further bisector points; used to test that extra constraints only
    /// shrink the domain.
    pub fn with_extra_points(&self, extra: &[Complex64]) -> Result<Self> {
        let mut points = self.points.clone();
        points.extend_from_slice(extra);
        Self::from_points(points, self.reliable)
    }

    fn from_points(mut points: Vec<Complex64>, reliable: f64) -> Result<Self> {
        points.sort_by(|a, b| {
            a.norm()
                .total_cmp(&b.norm())
                .then(a.arg().total_cmp(&b.arg()))
        });
        if points.is_empty() {
            return Err(Error::InsufficientDepth(
                "the Dirichlet domain of the trivial group is the whole disk".into(),
            ));
        }
        let mut dom = FundamentalDomain {
            points,
            reliable,
            vertices: Vec::new(),
            covolume: f64::NAN,
        };
        dom.vertices = dom.find_vertices()?;
        let circ = dom.circumradius();
        // a missing point exactly at the guard radius only touches the
        // circumscribed disk, so equality up to rounding is enough
        if guard_radius(circ) > reliable * (1.0 + 1e-12) {
            return Err(Error::InsufficientDepth(format!(
                "domain reaches radius {circ:.6}; bisectors up to {:.6} are needed but the table is reliable only to {reliable:.6}",
                guard_radius(circ)
            )));
        }
        dom.covolume = dom.rule(0.0, 48, 48)?.weights().iter().sum();
        Ok(dom)
    }

    /// Which orbit point defines the boundary along the ray at angle `theta`,
    /// and the Euclidean distance to it.
    fn active_bisector(&self, theta: f64) -> (usize, f64) {
        let e = Complex64::from_polar(1.0, theta);
        let mut best = (usize::MAX, 1.0);
        for (i, p) in self.points.iter().enumerate() {
            let p2 = p.norm_sqr();
            // Rays never reach bisectors of points beyond the guard of the current best.
            if p.norm() > guard_radius(best.1) {
                break;
            }
            let c = (p.conj() * e).re;
            let disc = c * c - p2 * p2;
            if c <= 0.0 || disc < 0.0 {
                continue;
            }
            let t = (c - disc.sqrt()) / p2;
            if t < best.1 {
                best = (i, t);
            }
        }
        best
    }

    /// Euclidean distance from 0 to the boundary along the ray at angle `theta`.
    pub fn boundary_radius(&self, theta: f64) -> f64 {
        self.active_bisector(theta).1
    }

    fn find_vertices(&self) -> Result<Vec<(f64, Complex64)>> {
        let step = 2.0 * PI / VERTEX_SCAN as f64;
        let mut out = Vec::new();
        let mut prev = self.active_bisector(0.0).0;
        for k in 1..=VERTEX_SCAN {
            let th = step * k as f64;
            let cur = self.active_bisector(th).0;
            if cur != prev {
                let (mut lo, mut hi) = (th - step, th);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if self.active_bisector(mid).0 == prev {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let ang = (0.5 * (lo + hi)).rem_euclid(2.0 * PI);
                out.push((ang, Complex64::from_polar(self.boundary_radius(ang), ang)));
            }
            prev = cur;
        }
        if out.iter().any(|v| v.1.norm() >= 1.0 - 1e-9) || out.len() < 3 {
            return Err(Error::InsufficientDepth(
                "orbit points do not bound a compact polygon".into(),
            ));
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        // Several bisectors pass through each vertex; rounding can make the
        // active one flicker there, producing near-duplicate vertices.
        out.dedup_by(|b, a| (b.1 - a.1).norm() < 1e-9);
        if out.len() > 1 && (out[0].1 - out[out.len() - 1].1).norm() < 1e-9 {
            out.pop();
        }
        Ok(out)
    }

    pub fn vertices(&self) -> Vec<Complex64> {
        self.vertices.iter().map(|v| v.1).collect()
    }

    pub fn circumradius(&self) -> f64 {
        self.vertices.iter().map(|v| v.1.norm()).fold(0.0, f64::max)
    }

    pub fn inradius(&self) -> f64 {
        self.points[0].norm() / (1.0 + (1.0 - self.points[0].norm_sqr()).sqrt())
    }

    /// `λ₀(F)`, integrated with the sector rule of [`Self::rule`].
    pub fn covolume(&self) -> f64 {
        self.covolume
    }

    /// Membership with the tie rule `d(z,0) ≥ d(z,p) - TIE_TOL`. A negative
    /// answer is always certain; a positive one needs every bisector that can
    /// meet the disk of radius `|z|` to be tabulated.
    pub fn contains(&self, z: DiskPoint) -> Result<bool> {
        let zv = z.value();
        let guard = guard_radius(zv.norm());
        let d0 = d_kernel(zv, Complex64::new(0.0, 0.0));
        for p in &self.points {
            if p.norm() > guard {
                return Ok(true);
            }
            if d_kernel(zv, *p) > d0 + TIE_TOL {
                return Ok(false);
            }
        }
        if guard > self.reliable {
            return Err(Error::InsufficientDepth(format!(
                "membership at |z| = {} needs orbit points up to radius {guard:.6}, table reliable to {:.6}",
                zv.norm(),
                self.reliable
            )));
        }
        Ok(true)
    }

    /// Spectrally accurate rule for `λ_s` on the domain: Gauss–Legendre in the
    /// angle on each sector between consecutive vertices, and in the radius
    /// along each ray up to the boundary.
    pub fn rule(&self, s: f64, angular_per_sector: usize, radial: usize) -> Result<WeightedNodes> {
        let n = self.vertices.len();
        let mut nodes = Vec::with_capacity(n * angular_per_sector * radial);
        let mut weights = Vec::with_capacity(nodes.capacity());
        let unit = gauss_legendre(radial, 0.0, 1.0)?;
        for k in 0..n {
            let t0 = self.vertices[k].0;
            let mut t1 = self.vertices[(k + 1) % n].0;
            if t1 <= t0 {
                t1 += 2.0 * PI;
            }
            let ang = gauss_legendre(angular_per_sector, t0, t1)?;
            for (&th, &wth) in ang.nodes.iter().zip(&ang.weights) {
                let big_r = self.boundary_radius(th);
                for (&x, &wx) in unit.nodes.iter().zip(&unit.weights) {
                    let t = big_r * x;
                    nodes.push(Complex64::from_polar(t, th));
                    weights.push(wth * wx * big_r * t * (1.0 - t * t).powf(s - 2.0));
                }
            }
        }
        WeightedNodes::new(nodes, weights, s)
    }

    /// `λ₀(F)` estimated by masking an arbitrary rule with the membership test.
    pub fn covolume_masked<Q: Quadrature + ?Sized>(&self, rule: &Q) -> Result<f64> {
        let region = RegionRule::new(rule, |p| self.contains(p).unwrap_or(false))?;
        let s = region.measure_exponent();
        Ok(region
            .nodes()
            .iter()
            .zip(region.weights())
            .map(|(z, w)| w * (1.0 - z.norm_sqr()).powf(-s))
            .sum())
    }

    pub fn orbit_points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn reliable_radius(&self) -> f64 {
        self.reliable
    }
}
