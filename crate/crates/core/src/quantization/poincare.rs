//! The Poincaré series `K_r(z, η) = Σ_γ d(γη, z)^r`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fuchsian::OrbitTable;
use crate::geometry::{d_kernel, Weight};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    /// Contribution of the last word-length shell.
    pub tail: f64,
}

/// Per-shell partial sums of `Σ_γ d(γη, z)^r`, indexed by word length.
pub fn poincare_shells(table: &OrbitTable, z: Complex64, eta: Complex64, w: Weight) -> Vec<f64> {
    let mut shells = vec![0.0; table.max_word_length() + 1];
    for e in table.entries() {
        shells[e.word_length()] += d_kernel(e.element.act(eta), z).powf(w.r());
    }
    shells
}

/// Sums the series over the table. Fails with `NonConvergence` when the last
/// shell is not smaller than the one before it, which happens when the table
/// is too shallow for the distance between `z` and `η` or when `r` is close
/// to the critical exponent.
pub fn poincare_series(
    table: &OrbitTable,
    z: Complex64,
    eta: Complex64,
    w: Weight,
) -> Result<SeriesValue> {
    let shells = poincare_shells(table, z, eta, w);
    let value: f64 = shells.iter().sum();
    let n = shells.len();
    let tail = shells[n - 1];
    if n >= 2 && tail > 0.0 && tail >= shells[n - 2] {
        return Err(Error::NonConvergence {
            last: tail,
            previous: shells[n - 2],
        });
    }
    Ok(SeriesValue { value, tail })
}

/// `max K_r(z, η)` over the probe points, with the tail at the maximiser.
pub fn poincare_sup(table: &OrbitTable, probes: &[Complex64], w: Weight) -> Result<SeriesValue> {
    let mut best = SeriesValue {
        value: 0.0,
        tail: 0.0,
    };
    for &z in probes {
        for &eta in probes {
            let v = poincare_series(table, z, eta, w)?;
            if v.value > best.value {
                best = v;
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::{enumerate_orbit, octagon_group, trivial_group};

    #[test]
    fn trivial_group_gives_single_term() {
        let t = enumerate_orbit(&trivial_group(), 3, 1e-9).unwrap();
        let w = Weight::new(8.0).unwrap();
        let z = Complex64::new(0.3, 0.1);
        let eta = Complex64::new(-0.2, 0.4);
        let v = poincare_series(&t, z, eta, w).unwrap();
        assert!((v.value - d_kernel(z, eta).powf(8.0)).abs() < 1e-15);
    }

    #[test]
    fn octagon_series_converges_and_is_invariant() {
        let t = enumerate_orbit(&octagon_group(), 4, 1e-9).unwrap();
        let w = Weight::new(8.0).unwrap();
        let z = Complex64::new(0.1, 0.05);
        let eta = Complex64::new(-0.15, 0.2);
        let v = poincare_series(&t, z, eta, w).unwrap();
        assert!(v.tail < 1e-4 * v.value, "{v:?}");
        // K(γz, η) = K(z, η) up to truncation
        let g = t.entries()[1].element;
        let moved = poincare_series(&t, g.act(z), eta, w).unwrap();
        assert!((moved.value - v.value).abs() < 1e-4 * v.value);
    }

    #[test]
    fn shallow_table_near_critical_exponent_is_refused() {
        let t = enumerate_orbit(&octagon_group(), 3, 1e-9).unwrap();
        let w = Weight::new(2.05).unwrap();
        let r = poincare_series(&t, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), w);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }
}
