//! Orbit sums bounding the normalised compressions. The tiles `σ₁, …, σ_N`
//! are the first `N` table entries; outer sums run over the table up to a
//! word-length cap and report their shells.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fuchsian::OrbitTable;
use crate::geometry::{cpow, d_kernel, d_tilde, Weight};
use crate::quadrature::tree_sum;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSum {
    pub value: f64,
    /// Contribution of the last outer shell.
    pub tail: f64,
    /// Partial sums after each outer word length, so boundedness in the cap
    /// can be inspected.
    pub partial: Vec<f64>,
    /// `|value - value without the last inner shell|`, zero for single sums.
    pub inner_change: f64,
}

impl OrbitSum {
    pub fn relative_inner_change(&self) -> f64 {
        if self.value == 0.0 {
            0.0
        } else {
            self.inner_change / self.value
        }
    }
}

/// Extra factors of the phased double sum; with all three off it is the plain double sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhasedSumOptions {
    /// `(1 - conj(σᵢ0)·γ0)⁻¹` on the first factor.
    pub derivative_factor: bool,
    /// `|1 - conj(γ0)·γγ₁0| / (1 - conj(γ0)·γγ₁0)` on the second factor.
    pub phase: bool,
    /// Replace `d` by the phase-carrying `d̃`.
    pub tilde: bool,
}

impl PhasedSumOptions {
    pub const FULL: PhasedSumOptions = PhasedSumOptions {
        derivative_factor: true,
        phase: true,
        tilde: true,
    };
    pub const NONE: PhasedSumOptions = PhasedSumOptions {
        derivative_factor: false,
        phase: false,
        tilde: false,
    };
}

fn tiles(table: &OrbitTable, n: usize) -> Result<Vec<Complex64>> {
    if n == 0 || n > table.len() {
        return Err(Error::InvalidArgument(format!(
            "N = {n} outside 1..={}",
            table.len()
        )));
    }
    Ok(table.entries()[..n].iter().map(|e| e.point).collect())
}

/// Sums per-entry terms by word-length shell, checking the last shell.
fn by_shells(table: &OrbitTable, cap: usize, terms: &[f64]) -> Result<(f64, f64, Vec<f64>)> {
    let mut shells = vec![Vec::new(); cap + 1];
    for (e, &t) in table.entries().iter().zip(terms) {
        shells[e.word_length()].push(t);
    }
    let sums: Vec<f64> = shells.iter().map(|s| tree_sum(s)).collect();
    let k = sums.len();
    if sums.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite {
            index: 0,
            re: f64::NAN,
            im: f64::NAN,
        });
    }
    if k >= 2 && sums[k - 1] > 0.0 && sums[k - 1] >= sums[k - 2] {
        return Err(Error::NonConvergence {
            last: sums[k - 1],
            previous: sums[k - 2],
        });
    }
    let mut partial = Vec::with_capacity(k);
    let mut acc = 0.0;
    for s in &sums {
        acc += s;
        partial.push(acc);
    }
    Ok((tree_sum(&sums), sums[k - 1], partial))
}

fn outer(table: &OrbitTable, outer_cap: usize) -> Result<OrbitTable> {
    if outer_cap == 0 || outer_cap > table.max_word_length() {
        return Err(Error::InvalidArgument(format!(
            "outer cap {outer_cap} outside 1..={}",
            table.max_word_length()
        )));
    }
    Ok(table.truncated(outer_cap))
}

fn single_sum(
    table: &OrbitTable,
    n: usize,
    w: Weight,
    outer_cap: usize,
    norm: f64,
) -> Result<OrbitSum> {
    let sig = tiles(table, n)?;
    let t = outer(table, outer_cap)?;
    let two_r = 2.0 * w.r();
    let terms: Vec<f64> = t
        .entries()
        .par_iter()
        .map(|e| {
            let inner: Vec<f64> = sig
                .iter()
                .map(|s| d_kernel(e.point, *s).powf(two_r))
                .collect();
            (tree_sum(&inner) / norm).sqrt()
        })
        .collect();
    let (value, tail, partial) = by_shells(&t, outer_cap, &terms)?;
    Ok(OrbitSum {
        value,
        tail,
        partial,
        inner_change: 0.0,
    })
}

/// `y_N = Σ_γ [ (1/N) Σᵢ d(γ0, σᵢ0)^{2r} ]^{1/2}`.
pub fn orbit_sum_yn(table: &OrbitTable, n: usize, w: Weight, outer_cap: usize) -> Result<OrbitSum> {
    single_sum(table, n, w, outer_cap, n as f64)
}

/// `Σ_γ [ (1/N²) Σᵢ d(γ0, σᵢ0)^{2r} ]^{1/2}`, computed directly.
pub fn root_n_orbit_sum(
    table: &OrbitTable,
    n: usize,
    w: Weight,
    outer_cap: usize,
) -> Result<OrbitSum> {
    single_sum(table, n, w, outer_cap, (n * n) as f64)
}

/// Double orbit sum `Σ_{γ₁} [ (1/N²) Σᵢⱼ |Σ_γ d(γ0, σᵢ0)^r d(σⱼ0, γγ₁0)^r|² ]^{1/2}`,
/// with `γ₁` up to `outer_cap` and `γ` up to `inner_depth`.
pub fn double_orbit_sum(
    table: &OrbitTable,
    n: usize,
    w: Weight,
    outer_cap: usize,
    inner_depth: usize,
) -> Result<OrbitSum> {
    phased_orbit_sum(table, n, w, outer_cap, inner_depth, PhasedSumOptions::NONE)
}

/// The double orbit sum with the factors selected in `opts`.
pub fn phased_orbit_sum(
    table: &OrbitTable,
    n: usize,
    w: Weight,
    outer_cap: usize,
    inner_depth: usize,
    opts: PhasedSumOptions,
) -> Result<OrbitSum> {
    let sig = tiles(table, n)?;
    let t = outer(table, outer_cap)?;
    if inner_depth < 2 || inner_depth > table.max_word_length() {
        return Err(Error::InvalidArgument(format!(
            "inner depth {inner_depth} outside 2..={}",
            table.max_word_length()
        )));
    }
    let inner = table.truncated(inner_depth);
    let r = w.r();
    let pow = |a: Complex64, b: Complex64| -> Complex64 {
        if opts.tilde {
            cpow(d_tilde(a, b), r)
        } else {
            Complex64::new(d_kernel(a, b).powf(r), 0.0)
        }
    };
    // first factor does not depend on γ₁
    let d: Vec<Vec<Complex64>> = inner
        .entries()
        .iter()
        .map(|g| {
            sig.iter()
                .map(|&s| {
                    let mut v = pow(s, g.point);
                    if opts.derivative_factor {
                        v /= ONE - s.conj() * g.point;
                    }
                    v
                })
                .collect()
        })
        .collect();
    let last = inner_depth;
    let nn = (n * n) as f64;
    let per: Vec<(f64, f64)> = t
        .entries()
        .par_iter()
        .map(|g1| {
            let mut full = vec![Complex64::new(0.0, 0.0); n * n];
            let mut shell = vec![Complex64::new(0.0, 0.0); n * n];
            for (g, dg) in inner.entries().iter().zip(&d) {
                let q = g.element.act(g1.point);
                let mut factor = ONE;
                if opts.phase {
                    let u = ONE - g.point.conj() * q;
                    factor = Complex64::new(u.norm(), 0.0) / u;
                }
                let e: Vec<Complex64> = sig.iter().map(|&s| pow(q, s) * factor).collect();
                let target = if g.word_length() == last {
                    &mut shell
                } else {
                    &mut full
                };
                for i in 0..n {
                    for j in 0..n {
                        target[i * n + j] += dg[i] * e[j];
                    }
                }
            }
            let without: Vec<f64> = full.iter().map(|c| c.norm_sqr()).collect();
            let with: Vec<f64> = full
                .iter()
                .zip(&shell)
                .map(|(a, b)| (a + b).norm_sqr())
                .collect();
            (
                (tree_sum(&with) / nn).sqrt(),
                (tree_sum(&without) / nn).sqrt(),
            )
        })
        .collect();
    let with: Vec<f64> = per.iter().map(|p| p.0).collect();
    let without: Vec<f64> = per.iter().map(|p| p.1).collect();
    let (value, tail, partial) = by_shells(&t, outer_cap, &with)?;
    let reduced = tree_sum(&without);
    Ok(OrbitSum {
        value,
        tail,
        partial,
        inner_change: (value - reduced).abs(),
    })
}
