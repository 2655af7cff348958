//! The norms `‖·‖_{λ,r}` and `‖·‖_{2,r}` on symbols.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fuchsian::OrbitTable;
use crate::geometry::{cpow, d_kernel, DiskPoint, Weight};
use crate::quadrature::{tree_sum, Quadrature};
use crate::quantization::symbol::Symbol;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn lambda0_weights<Q: Quadrature + ?Sized>(rule: &Q) -> Vec<f64> {
    let s = rule.measure_exponent();
    rule.nodes()
        .iter()
        .zip(rule.weights())
        .map(|(x, w)| w * (1.0 - x.norm_sqr()).powf(-s))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaNorm {
    /// `max(row, column)`.
    pub value: f64,
    /// `sup_z ∫ |Â(z̄, ζ)| d(z, ζ)^r dλ₀(ζ)` over the probes.
    pub row: f64,
    /// `sup_ζ ∫ |Â(z̄, ζ)| d(z, ζ)^r dλ₀(z)` over the probes.
    pub column: f64,
}

/// `‖A‖_{λ,r}` with the sup taken over `probes` (an under-approximation of
/// the true sup) and the integrals over `rule`, which should cover the whole
/// disk and carry a decay exponent around `r/2`.
pub fn lambda_norm<S: Symbol + ?Sized, Q: Quadrature + ?Sized>(
    a: &S,
    probes: &[Complex64],
    rule: &Q,
) -> Result<LambdaNorm> {
    if probes.is_empty() {
        return Err(Error::InvalidArgument("empty probe grid".into()));
    }
    let r = a.weight().r();
    let w0 = lambda0_weights(rule);
    let nodes = rule.nodes();
    let rows = a.eval_grid(probes, nodes);
    let cols = a.eval_grid(nodes, probes);
    let mut row: f64 = 0.0;
    let mut column: f64 = 0.0;
    for (i, &z) in probes.iter().enumerate() {
        let fr: Vec<f64> = (0..nodes.len())
            .map(|j| rows[(i, j)].norm() * d_kernel(z, nodes[j]).powf(r) * w0[j])
            .collect();
        let fc: Vec<f64> = (0..nodes.len())
            .map(|j| cols[(j, i)].norm() * d_kernel(z, nodes[j]).powf(r) * w0[j])
            .collect();
        let (sr, sc) = (tree_sum(&fr), tree_sum(&fc));
        if !sr.is_finite() || !sc.is_finite() {
            return Err(Error::NonFinite {
                index: i,
                re: z.re,
                im: z.im,
            });
        }
        row = row.max(sr);
        column = column.max(sc);
    }
    Ok(LambdaNorm {
        value: row.max(column),
        row,
        column,
    })
}

/// `‖A‖_{2,r}` for an invariant symbol: the square root of
/// `c_r² ∫_F ∫_𝔻 |Â(η̄, ξ)|² d(η, ξ)^{2r} dλ₀(ξ) dλ₀(η)`, which is
/// `Tr_F(A*A)` for the trace normalised as in [`super::trace_unnormalized`].
/// `domain_rule` covers a fundamental domain, `disk_rule` the whole disk.
pub fn hs_norm_2r<S, Q, R>(a: &S, domain_rule: &Q, disk_rule: &R) -> Result<f64>
where
    S: Symbol + ?Sized,
    Q: Quadrature + ?Sized,
    R: Quadrature + ?Sized,
{
    let w = a.weight();
    let r = w.r();
    let wf = lambda0_weights(domain_rule);
    let wd = lambda0_weights(disk_rule);
    let g = a.eval_grid(domain_rule.nodes(), disk_rule.nodes());
    let mut rows = Vec::with_capacity(wf.len());
    for (i, &eta) in domain_rule.nodes().iter().enumerate() {
        let terms: Vec<f64> = disk_rule
            .nodes()
            .iter()
            .enumerate()
            .map(|(j, &xi)| g[(i, j)].norm_sqr() * d_kernel(eta, xi).powf(2.0 * r) * wd[j])
            .collect();
        rows.push(tree_sum(&terms) * wf[i]);
    }
    let total = tree_sum(&rows) * w.c_r() * w.c_r();
    if !total.is_finite() {
        return Err(Error::NonFinite {
            index: 0,
            re: f64::NAN,
            im: f64::NAN,
        });
    }
    Ok(total.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L2Formula {
    /// Real part of the truncated sum, i.e. `‖E_{z,ζ}‖²_{2,r}`.
    pub value: f64,
    pub imaginary: f64,
    /// Absolute sum over the last word-length shell.
    pub tail: f64,
}

/// Closed form of `‖E_{z,ζ}‖²_{2,r}` as a sum over the group:
/// `c_r² Σ_γ (1 - ζ̄z)^r (1 - conj(γz)·γζ)^r / ((1 - conj(γz)·z)^r (1 - ζ̄·γζ)^r)`.
pub fn l2_group_sum(
    z: DiskPoint,
    zeta: DiskPoint,
    table: &OrbitTable,
    w: Weight,
) -> Result<L2Formula> {
    let r = w.r();
    let (z, zeta) = (z.value(), zeta.value());
    let lead = cpow(ONE - zeta.conj() * z, r);
    let mut shells = vec![Complex64::new(0.0, 0.0); table.max_word_length() + 1];
    let mut abs_shells = vec![0.0; table.max_word_length() + 1];
    for e in table.entries() {
        let gz = e.element.act(z);
        let gzeta = e.element.act(zeta);
        let t = lead
            * cpow(ONE - gz.conj() * gzeta, r)
            * cpow(ONE - gz.conj() * z, -r)
            * cpow(ONE - zeta.conj() * gzeta, -r);
        shells[e.word_length()] += t;
        abs_shells[e.word_length()] += t.norm();
    }
    let n = shells.len();
    if n >= 2 && abs_shells[n - 1] > 0.0 && abs_shells[n - 1] >= abs_shells[n - 2] {
        return Err(Error::NonConvergence {
            last: abs_shells[n - 1],
            previous: abs_shells[n - 2],
        });
    }
    let total: Complex64 = shells.iter().sum::<Complex64>() * (w.c_r() * w.c_r());
    Ok(L2Formula {
        value: total.re,
        imaginary: total.im,
        tail: abs_shells[n - 1] * w.c_r() * w.c_r(),
    })
}
