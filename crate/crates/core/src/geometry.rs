//! Points of the unit disk, the SU(1,1) action by Möbius maps, and the
//! invariant two-point kernel `d(z, ζ)`.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default distance that every [`DiskPoint`] keeps from the unit circle.
pub const BOUNDARY_GUARD: f64 = 1e-12;

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub const ORIGIN: DiskPoint = DiskPoint(Complex64::new(0.0, 0.0));

    pub fn new(z: Complex64) -> Result<Self> {
        Self::with_guard(z, BOUNDARY_GUARD)
    }

    pub fn from_re_im(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    pub fn with_guard(z: Complex64, guard: f64) -> Result<Self> {
        if !z.re.is_finite() || !z.im.is_finite() || z.norm() >= 1.0 - guard {
            return Err(Error::BoundaryGuard {
                re: z.re,
                im: z.im,
                guard,
            });
        }
        Ok(DiskPoint(z))
    }

    #[inline]
    pub fn value(self) -> Complex64 {
        self.0
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.0.norm()
    }
}

impl From<DiskPoint> for Complex64 {
    fn from(p: DiskPoint) -> Self {
        p.0
    }
}

impl fmt::Display for DiskPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.0.re, self.0.im)
    }
}

/// The weight `r = 1/h` of the quantization together with `c_r = (r-1)/π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weight {
    r: f64,
}

impl Weight {
    pub fn new(r: f64) -> Result<Self> {
        if !r.is_finite() || r <= 2.0 {
            return Err(Error::InvalidWeight(r));
        }
        Ok(Weight { r })
    }

    #[inline]
    pub fn r(self) -> f64 {
        self.r
    }

    /// Reproducing constant `(r-1)/π` of `H²(𝔻, dλ_r)`.
    #[inline]
    pub fn c_r(self) -> f64 {
        (self.r - 1.0) / std::f64::consts::PI
    }

    /// Reproducing constant of the half weight, `(r/2 - 1)/π = (r-2)/(2π)`.
    #[inline]
    pub fn c_half(self) -> f64 {
        (self.r - 2.0) / (2.0 * std::f64::consts::PI)
    }

    pub fn is_integer(self) -> bool {
        (self.r - self.r.round()).abs() < 1e-12
    }
}

/// Principal-branch power `base^r`. Integer exponents use repeated
/// multiplication, which agrees with the principal branch.
#[inline]
pub fn cpow(base: Complex64, r: f64) -> Complex64 {
    let n = r.round();
    if (r - n).abs() < 1e-12 && n.abs() <= 64.0 {
        base.powi(n as i32)
    } else {
        (base.ln() * r).exp()
    }
}

/// `d(z, ζ) = (1-|z|²)^½ (1-|ζ|²)^½ / |1 - z̄ζ|`, equal to `sech(ρ/2)` for the
/// hyperbolic distance `ρ` of curvature -1.
#[inline]
pub fn d_kernel(z: impl Into<Complex64>, zeta: impl Into<Complex64>) -> f64 {
    let (z, w) = (z.into(), zeta.into());
    ((1.0 - z.norm_sqr()) * (1.0 - w.norm_sqr())).sqrt()
        / (Complex64::new(1.0, 0.0) - z.conj() * w).norm()
}

/// Phase-carrying variant `(1-|z|²)^½ (1-|w|²)^½ / (1 - z̄w)`.
#[inline]
pub fn d_tilde(z: impl Into<Complex64>, w: impl Into<Complex64>) -> Complex64 {
    let (z, w) = (z.into(), w.into());
    let num = ((1.0 - z.norm_sqr()) * (1.0 - w.norm_sqr())).sqrt();
    Complex64::new(num, 0.0) / (Complex64::new(1.0, 0.0) - z.conj() * w)
}

/// Hyperbolic distance for the curvature -1 metric `4|dz|²/(1-|z|²)²`.
pub fn hyperbolic_distance(z: impl Into<Complex64>, w: impl Into<Complex64>) -> f64 {
    let (z, w) = (z.into(), w.into());
    let t = (z - w).norm() / (Complex64::new(1.0, 0.0) - z.conj() * w).norm();
    2.0 * t.min(1.0).atanh()
}

/// Point halfway between `a` and `b` along the geodesic.
pub fn hyperbolic_midpoint(a: Complex64, b: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    // move a to 0, halve, move back
    let bb = (b - a) / (one - a.conj() * b);
    let t = bb.norm();
    if t == 0.0 {
        return a;
    }
    let m = bb * ((t.atanh() / 2.0).tanh() / t);
    (m + a) / (one + a.conj() * m)
}

/// An element `[[a, b], [b̄, ā]]` of SU(1,1), acting by `z ↦ (az + b)/(b̄z + ā)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SU11Element {
    a: Complex64,
    b: Complex64,
}

impl SU11Element {
    pub const IDENTITY: SU11Element = SU11Element {
        a: Complex64::new(1.0, 0.0),
        b: Complex64::new(0.0, 0.0),
    };

    /// Builds an element, rescaling so that `|a|² - |b|² = 1`.
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let det = a.norm_sqr() - b.norm_sqr();
        if !det.is_finite() || det <= 0.0 {
            return Err(Error::InvalidGroupElement(det));
        }
        let s = det.sqrt();
        Ok(SU11Element { a: a / s, b: b / s })
    }

    /// Hyperbolic translation of length `t` along the diameter at angle `angle`.
    pub fn translation(t: f64, angle: f64) -> Self {
        SU11Element {
            a: Complex64::new((t / 2.0).cosh(), 0.0),
            b: Complex64::from_polar((t / 2.0).sinh(), angle),
        }
    }

    /// Rotation `z ↦ e^{iθ} z`.
    pub fn rotation(theta: f64) -> Self {
        SU11Element {
            a: Complex64::from_polar(1.0, theta / 2.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    /// The boost sending 0 to `p`.
    pub fn moving_origin_to(p: DiskPoint) -> Self {
        let s = (1.0 - p.value().norm_sqr()).sqrt();
        SU11Element {
            a: Complex64::new(1.0 / s, 0.0),
            b: p.value() / s,
        }
    }

    #[inline]
    pub fn a(&self) -> Complex64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn determinant(&self) -> f64 {
        self.a.norm_sqr() - self.b.norm_sqr()
    }

    pub fn trace(&self) -> f64 {
        2.0 * self.a.re
    }

    pub fn inverse(&self) -> Self {
        SU11Element {
            a: self.a.conj(),
            b: -self.b,
        }
    }

    /// Composition `self ∘ other`, renormalized onto the determinant-one shell.
    pub fn compose(&self, other: &Self) -> Self {
        let a = self.a * other.a + self.b * other.b.conj();
        let b = self.a * other.b + self.b * other.a.conj();
        let det = a.norm_sqr() - b.norm_sqr();
        let s = det.sqrt();
        SU11Element { a: a / s, b: b / s }
    }

    /// Representative of `±g` with `Re a > 0` (or `Im a > 0` when `Re a = 0`).
    /// Both signs act identically on the disk.
    pub fn canonical(&self) -> Self {
        let flip = self.a.re < 0.0 || (self.a.re == 0.0 && self.a.im < 0.0);
        if flip {
            SU11Element {
                a: -self.a,
                b: -self.b,
            }
        } else {
            *self
        }
    }

    /// Möbius action on a raw complex number (no boundary checks).
    #[inline]
    pub fn act(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.b.conj() * z + self.a.conj())
    }

    /// Möbius action with the boundary guard applied to the image.
    pub fn apply(&self, z: DiskPoint) -> Result<DiskPoint> {
        DiskPoint::new(self.act(z.value()))
    }

    /// Image of the origin, `b/ā`.
    #[inline]
    pub fn orbit_point(&self) -> Complex64 {
        self.b / self.a.conj()
    }

    /// The angle `α` with `e^{iα} = a/ā`, in `(-π, π]`.
    pub fn phase_alpha(&self) -> f64 {
        let alpha = (self.a / self.a.conj()).arg();
        if alpha <= -std::f64::consts::PI {
            alpha + 2.0 * std::f64::consts::PI
        } else {
            alpha
        }
    }

    /// `ℵ = e^{i(π + α)}`.
    pub fn aleph(&self) -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::PI + self.phase_alpha())
    }

    pub fn max_entry_diff(&self, other: &Self) -> f64 {
        (self.a - other.a).norm().max((self.b - other.b).norm())
    }
}

impl Mul for SU11Element {
    type Output = SU11Element;

    fn mul(self, rhs: Self) -> Self {
        self.compose(&rhs)
    }
}

/// Weight-`r` discrete-series action `(π_r(g) f)(z) = (a - b̄z)^{-r} f(g⁻¹ z)`.
pub fn discrete_series_action<F>(
    w: Weight,
    g: &SU11Element,
    f: F,
    z: DiskPoint,
) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    if !w.is_integer() {
        return Err(Error::NonIntegerWeight(w.r()));
    }
    let zv = z.value();
    let inv = g.inverse();
    let factor = g.a() - g.b().conj() * zv;
    Ok(cpow(factor, -w.r()) * f(inv.act(zv)))
}
