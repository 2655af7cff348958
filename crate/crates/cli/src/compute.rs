//! `compute`: one table per target. Quantities built from a truncated orbit
//! carry a tail column; for symbols it is the change from dropping the last
//! word-length shell.

use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use berezin_core::fuchsian::OrbitTable;
use berezin_core::quadrature::build_disk_rule;
use berezin_core::quantization::{
    lambda_norm, poincare_series, star_product, trace_tau, trace_tau_star, EvalVector, Symbol,
};
use berezin_core::truncation::{
    domain_probes, double_orbit_sum, norm_sequence, orbit_sum_yn, phased_orbit_sum,
    root_n_orbit_sum, Compressible, PhasedSumOptions, DEFAULT_PRUNE,
};
use berezin_core::DiskPoint;

use crate::error::{CliError, CliResult};
use crate::report::Table;
use crate::suite::Context;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Target {
    /// Poincaré series `K_r(z, ζ)`.
    Kr,
    /// Evaluation-vector symbol at `(z, ζ)`.
    Eval,
    /// `E_{z,ζ} ⋆ E_{ζ,z}` at `(z, ζ)`.
    Star,
    /// `τ(E_{z,ζ})` and `τ(E_{z,ζ} ⋆ E_{ζ,z})`.
    Trace,
    LambdaNorm,
    /// Normalised nuclear and HS norms of `E_{z,ζ}` for `N = 1..n_max`.
    L1Seq,
    /// `y_N`, the `1/√N` scaled sum and the two double sums for `N = 1..n_max`.
    Sums,
}

/// A disk point written `re,im`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointArg(pub Complex64);

impl FromStr for PointArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (re, im) = s
            .split_once(',')
            .ok_or_else(|| format!("expected re,im, got {s:?}"))?;
        let p = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        let z = Complex64::new(p(re)?, p(im)?);
        if z.norm() >= 1.0 {
            return Err(format!("{s} is not inside the unit disk"));
        }
        Ok(PointArg(z))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, clap::Args)]
pub struct Points {
    /// First point `z`.
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub z: PointArg,
    /// Second point `ζ`.
    #[arg(long, default_value = "0.2,0", allow_hyphen_values = true)]
    pub zeta: PointArg,
}

fn points(p: &Points) -> CliResult<(DiskPoint, DiskPoint)> {
    Ok((DiskPoint::new(p.z.0)?, DiskPoint::new(p.zeta.0)?))
}

/// `f` on the full table and with the last shell dropped.
fn with_tail(
    table: &OrbitTable,
    f: impl Fn(&OrbitTable) -> CliResult<Complex64>,
) -> CliResult<(Complex64, f64)> {
    let full = f(table)?;
    let depth = table.max_word_length();
    if depth <= 1 {
        return Ok((full, 0.0));
    }
    let shallow = f(&table.truncated(depth - 1))?;
    Ok((full, (full - shallow).norm()))
}

pub fn cmd_compute(ctx: &Context, target: Target, p: &Points) -> CliResult<Table> {
    compute(ctx, target, p).map_err(|e| e.context(format!("compute {target:?}")))
}

fn compute(ctx: &Context, target: Target, p: &Points) -> CliResult<Table> {
    let cfg = &ctx.config;
    let w = ctx.weight;
    let r = w.r();
    let hash = cfg.hash();
    let table = ctx.table()?;
    let (z, zeta) = points(p)?;
    let head = ["z_re", "z_im", "zeta_re", "zeta_im"];
    let at = [z.value().re, z.value().im, zeta.value().re, zeta.value().im];
    let cols =
        |rest: &[&'static str]| -> Vec<&'static str> { head.iter().chain(rest).copied().collect() };
    let row = |rest: &[f64]| -> Vec<f64> { at.iter().chain(rest).copied().collect() };
    let star_rule = || build_disk_rule(r, cfg.disk_radial, cfg.disk_angular, 0.0);

    let t = match target {
        Target::Kr => {
            let s = poincare_series(table, z.value(), zeta.value(), w)?;
            let mut t = Table::new(hash, &cols(&["value", "tail"]));
            t.push(row(&[s.value, s.tail]));
            t
        }
        Target::Eval => {
            let (v, tail) = with_tail(table, |t| {
                Ok(EvalVector::new(t, w, z, zeta)?.eval(z.value(), zeta.value()))
            })?;
            let mut t = Table::new(hash, &cols(&["re", "im", "tail"]));
            t.push(row(&[v.re, v.im, tail]));
            t
        }
        Target::Star => {
            let rule = star_rule()?;
            let (v, tail) = with_tail(table, |t| {
                let a: Arc<dyn Symbol> = Arc::new(EvalVector::new(t, w, z, zeta)?);
                let b: Arc<dyn Symbol> = Arc::new(EvalVector::new(t, w, zeta, z)?);
                Ok(star_product(a, b, &rule)?.eval(z.value(), zeta.value()))
            })?;
            let mut t = Table::new(hash, &cols(&["re", "im", "tail"]));
            t.push(row(&[v.re, v.im, tail]));
            t
        }
        Target::Trace => {
            let dom = ctx.domain()?;
            let frule = dom.rule(0.0, cfg.domain_angular, cfg.domain_radial)?;
            let rule = star_rule()?;
            let (v, tail) = with_tail(table, |t| {
                Ok(trace_tau(&EvalVector::new(t, w, z, zeta)?, dom, &frule)?)
            })?;
            let (s, stail) = with_tail(table, |t| {
                let a: Arc<dyn Symbol> = Arc::new(EvalVector::new(t, w, z, zeta)?);
                let b: Arc<dyn Symbol> = Arc::new(EvalVector::new(t, w, zeta, z)?);
                Ok(trace_tau_star(&star_product(a, b, &rule)?, dom, &frule)?)
            })?;
            let mut t = Table::new(
                hash,
                &cols(&[
                    "tau_re",
                    "tau_im",
                    "tau_tail",
                    "tau_star_re",
                    "tau_star_im",
                    "tau_star_tail",
                ]),
            );
            t.push(row(&[v.re, v.im, tail, s.re, s.im, stail]));
            t
        }
        Target::LambdaNorm => {
            let probes = domain_probes(ctx.domain()?, 2, 4)?;
            let rule = build_disk_rule(0.0, cfg.disk_radial, cfg.disk_angular, r / 2.0)?;
            let norm =
                |t: &OrbitTable| lambda_norm(&EvalVector::new(t, w, z, zeta)?, &probes, &rule);
            let full = norm(table)?;
            let depth = table.max_word_length();
            let tail = if depth > 1 {
                (full.value - norm(&table.truncated(depth - 1))?.value).abs()
            } else {
                0.0
            };
            let mut t = Table::new(hash, &cols(&["value", "row", "column", "tail"]));
            t.push(row(&[full.value, full.row, full.column, tail]));
            t
        }
        Target::L1Seq => {
            let e = EvalVector::new(table, w, z, zeta)?;
            let seq = norm_sequence(
                |q| e.compress_factored(q, w.c_r(), DEFAULT_PRUNE),
                r,
                ctx.domain()?,
                table,
                3,
                5,
                cfg.n_max,
            )?;
            let mut t = Table::new(hash, &cols(&["n", "l1", "hs", "dim", "tail"]));
            for x in &seq.entries {
                t.push(row(&[x.n as f64, x.l1, x.hs, x.dim as f64, x.tail]));
            }
            t
        }
        Target::Sums => {
            let depth = table.max_word_length();
            if depth < 3 {
                return Err(CliError::Config(format!(
                    "sums need depth >= 3, have {depth}"
                )));
            }
            let cap = depth.min(4);
            let mut t = Table::new(
                hash,
                &[
                    "n",
                    "y_n",
                    "y_n_tail",
                    "root_n",
                    "root_n_tail",
                    "double_sum",
                    "double_sum_tail",
                    "phased_sum",
                    "phased_sum_tail",
                ],
            );
            for n in 1..=cfg.n_max {
                let y = orbit_sum_yn(table, n, w, depth)?;
                let c = root_n_orbit_sum(table, n, w, depth)?;
                let s8 = double_orbit_sum(table, n, w, cap, cap)?;
                let s9 = phased_orbit_sum(table, n, w, cap, cap, PhasedSumOptions::FULL)?;
                t.push(vec![
                    n as f64, y.value, y.tail, c.value, c.tail, s8.value, s8.tail, s9.value,
                    s9.tail,
                ]);
            }
            t
        }
    };
    Ok(t)
}
