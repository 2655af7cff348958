//! Normalised norms of compressions to growing tile unions.

use crate::error::{Error, Result};
use crate::fuchsian::{FundamentalDomain, OrbitTable};
use crate::quadrature::WeightedNodes;
use crate::truncation::compress::CompressedOperator;
use crate::truncation::region::build_region;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequenceEntry {
    pub n: usize,
    /// `(1/N)‖·‖₁`.
    pub l1: f64,
    /// `(1/√N)‖·‖₂`.
    pub hs: f64,
    pub dim: usize,
    /// Nuclear-norm tail of the compression, scaled by `1/N`.
    pub tail: f64,
}

impl SequenceEntry {
    /// `(1/N)‖·‖₁ ≤ √(dim/N) (1/√N)‖·‖₂`, with rounding slack.
    pub fn cauchy_schwarz_holds(&self) -> bool {
        let n = self.n as f64;
        self.l1 <= (self.dim as f64 / n).sqrt() * self.hs * (1.0 + 1e-10) + 1e-300
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormSequence {
    pub entries: Vec<SequenceEntry>,
}

fn increments(v: &[f64]) -> Vec<f64> {
    v.windows(2)
        .map(|p| {
            if p[0] == 0.0 {
                0.0
            } else {
                ((p[1] - p[0]) / p[0]).abs()
            }
        })
        .collect()
}

impl NormSequence {
    pub fn l1_values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.l1).collect()
    }

    pub fn hs_values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.hs).collect()
    }

    /// Relative changes `|v_{N+1} - v_N|/|v_N|` of the L¹ sequence.
    pub fn l1_increments(&self) -> Vec<f64> {
        increments(&self.l1_values())
    }

    pub fn hs_increments(&self) -> Vec<f64> {
        increments(&self.hs_values())
    }

    /// Relative change over the last two `N`, or 0 for a single entry.
    pub fn trend(&self) -> f64 {
        self.l1_increments().last().copied().unwrap_or(0.0)
    }
}

/// Compresses to `G_1, …, G_{n_max}` and records both normalised norms. The
/// rule on each region copies the domain's `λ_r` sector rule to every tile.
pub fn norm_sequence<F>(
    compressor: F,
    r: f64,
    domain: &FundamentalDomain,
    table: &OrbitTable,
    angular_per_sector: usize,
    radial: usize,
    n_max: usize,
) -> Result<NormSequence>
where
    F: Fn(&WeightedNodes) -> Result<CompressedOperator>,
{
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let mut entries = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let region = build_region(domain, table, n)?;
        let rule = region.rule(r, angular_per_sector, radial)?;
        let c = compressor(&rule)?;
        let s = c.singular_values()?;
        let nf = n as f64;
        entries.push(SequenceEntry {
            n,
            l1: s.iter().sum::<f64>() / nf,
            hs: s.iter().map(|x| x * x).sum::<f64>().sqrt() / nf.sqrt(),
            dim: c.dim_bound(),
            tail: c.tail() / nf,
        });
    }
    Ok(NormSequence { entries })
}

/// `(N, (1/N)‖χ_{G_N} A χ_{G_N}‖₁)` for `N = 1..n_max`.
pub fn l1_sequence<F>(
    compressor: F,
    r: f64,
    domain: &FundamentalDomain,
    table: &OrbitTable,
    angular_per_sector: usize,
    radial: usize,
    n_max: usize,
) -> Result<Vec<(usize, f64)>>
where
    F: Fn(&WeightedNodes) -> Result<CompressedOperator>,
{
    let s = norm_sequence(
        compressor,
        r,
        domain,
        table,
        angular_per_sector,
        radial,
        n_max,
    )?;
    Ok(s.entries.iter().map(|e| (e.n, e.l1)).collect())
}

/// `(N, (1/√N)‖χ_{G_N} A χ_{G_N}‖₂)` for `N = 1..n_max`.
pub fn sqrt_n_hs_sequence<F>(
    compressor: F,
    r: f64,
    domain: &FundamentalDomain,
    table: &OrbitTable,
    angular_per_sector: usize,
    radial: usize,
    n_max: usize,
) -> Result<Vec<(usize, f64)>>
where
    F: Fn(&WeightedNodes) -> Result<CompressedOperator>,
{
    let s = norm_sequence(
        compressor,
        r,
        domain,
        table,
        angular_per_sector,
        radial,
        n_max,
    )?;
    Ok(s.entries.iter().map(|e| (e.n, e.hs)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::{enumerate_orbit, octagon_group};
    use crate::geometry::{DiskPoint, Weight};
    use crate::quantization::{ConstantSymbol, EvalVector};
    use crate::truncation::{compress, Compressible, DEFAULT_PRUNE};
    use num_complex::Complex64;

    #[test]
    fn eval_vector_sequence_is_positive_and_scales() {
        let w = Weight::new(8.0).unwrap();
        let t4 = enumerate_orbit(&octagon_group(), 4, 1e-9).unwrap();
        let dom = FundamentalDomain::dirichlet(&t4).unwrap();
        let t3 = t4.truncated(3);
        let e = EvalVector::new(
            &t3,
            w,
            DiskPoint::from_re_im(0.0, 0.0).unwrap(),
            DiskPoint::from_re_im(0.2, 0.0).unwrap(),
        )
        .unwrap();
        let c = w.c_r();
        let s = norm_sequence(
            |q| e.compress_factored(q, c, DEFAULT_PRUNE),
            8.0,
            &dom,
            &t4,
            2,
            3,
            4,
        )
        .unwrap();
        let twice = norm_sequence(
            |q| Ok(e.compress_factored(q, c, DEFAULT_PRUNE)?.scaled(2.0)),
            8.0,
            &dom,
            &t4,
            2,
            3,
            4,
        )
        .unwrap();
        for (a, b) in s.entries.iter().zip(&twice.entries) {
            assert!(a.l1 > 0.0 && a.cauchy_schwarz_holds(), "{a:?}");
            assert!((b.l1 - 2.0 * a.l1).abs() < 1e-10 * a.l1);
        }
        let zero = ConstantSymbol {
            weight: w,
            value: Complex64::new(0.0, 0.0),
        };
        let z = sqrt_n_hs_sequence(|q| compress(&zero, q, c), 8.0, &dom, &t4, 1, 2, 2).unwrap();
        assert!(z.iter().all(|(_, v)| *v == 0.0));
    }
}
