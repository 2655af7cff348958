//! The verification suite behind `verify`, one function per acceptance
//! criterion. Results are named `cNN.<check>`.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use nalgebra_free::random_operator;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use berezin_core::bergman::{toeplitz_matrix, MonomialBasis, TruncatedOperator};
use berezin_core::fuchsian::{
    counting_trend, trivial_group, FundamentalDomain, OrbitTable, DEFAULT_DEDUP_TOL,
};
use berezin_core::quadrature::{build_disk_rule, Quadrature};
use berezin_core::quantization::{
    calibrate, hs_norm_2r, l2_group_sum, mean_value_eval_residual, mean_value_residual,
    reproducing_residual, star_product, ConstantSymbol, EvalVector, Symbol,
};
use berezin_core::truncation::{
    bump_function, domain_probes, double_orbit_sum, equivalence_constant, norm_sequence,
    orbit_sum_yn, phased_orbit_sum, root_n_orbit_sum, sandwich, Compressible, EquivalenceParams,
    PhasedSumOptions, SandwichSetup, DEFAULT_PRUNE,
};
use berezin_core::{d_kernel, hyperbolic_distance, DiskPoint, SU11Element, Weight};

use crate::config::{RunConfig, CRITERIA};
use crate::error::{CliError, CliResult};
use crate::report::{CheckResult, Constants, Report};

/// Random truncated operators for the group-free checks.
mod nalgebra_free {
    use super::*;

    pub fn random_operator(
        basis: &MonomialBasis,
        rng: &mut ChaCha8Rng,
    ) -> CliResult<TruncatedOperator> {
        let n = basis.dim();
        let mut m = berezin_core::linalg::CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let scale = 0.8f64.powi((i + j) as i32);
                m[(i, j)] =
                    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                        * scale;
            }
        }
        Ok(TruncatedOperator::new(basis.clone(), m)?)
    }
}

/// Shared, lazily built inputs of a run.
pub struct Context {
    pub config: RunConfig,
    pub weight: Weight,
    table: OnceLock<Result<OrbitTable, String>>,
    domain: OnceLock<Result<FundamentalDomain, String>>,
}

impl Context {
    pub fn new(config: RunConfig) -> CliResult<Self> {
        config.validate()?;
        Ok(Context {
            weight: config.weight()?,
            config,
            table: OnceLock::new(),
            domain: OnceLock::new(),
        })
    }

    pub fn table(&self) -> CliResult<&OrbitTable> {
        self.table
            .get_or_init(|| {
                self.config
                    .table(self.config.depth)
                    .map_err(|e| e.to_string())
            })
            .as_ref()
            .map_err(|e| CliError::Config(e.clone()))
    }

    pub fn domain(&self) -> CliResult<&FundamentalDomain> {
        let t = self.table()?;
        self.domain
            .get_or_init(|| FundamentalDomain::dirichlet(t).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|e| CliError::Config(e.clone()))
    }

    fn trivial(&self) -> CliResult<bool> {
        Ok(self.config.load_group()?.is_trivial())
    }

    fn rng(&self, criterion: u32) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.config.seed ^ (u64::from(criterion) << 32))
    }
}

fn random_point(rng: &mut ChaCha8Rng, max: f64) -> Complex64 {
    Complex64::from_polar(
        max * rng.random::<f64>().sqrt(),
        rng.random_range(0.0..2.0 * PI),
    )
}

fn random_element(rng: &mut ChaCha8Rng) -> SU11Element {
    let t: f64 = rng.random_range(0.0..2.5);
    let (p, q) = (
        rng.random_range(0.0..2.0 * PI),
        rng.random_range(0.0..2.0 * PI),
    );
    SU11Element::new(
        Complex64::from_polar(t.cosh(), p),
        Complex64::from_polar(t.sinh(), q),
    )
    .expect("cosh² - sinh² = 1")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Geometry invariance.
pub fn c01(ctx: &Context) -> CliResult<Vec<CheckResult>> {
    let mut rng = ctx.rng(1);
    let (mut inv, mut sech): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let g = random_element(&mut rng);
        let (z, w) = (random_point(&mut rng, 0.9), random_point(&mut rng, 0.9));
        inv = inv.max((d_kernel(g.act(z), g.act(w)) - d_kernel(z, w)).abs());
        sech = sech.max((d_kernel(z, w) - 1.0 / (hyperbolic_distance(z, w) / 2.0).cosh()).abs());
    }
    Ok(vec![
        CheckResult::at_most("c01.d_kernel_invariance", inv, 1e-11, 0.0),
        CheckResult::at_most("c01.d_is_sech_half_distance", sech, 1e-10, 0.0),
    ])
}

/// Quadrature oracles for `r ∈ {6, 8}`.
pub fn c02(ctx: &Context) -> CliResult<Vec<CheckResult>> {
    let (nr, na) = (ctx.config.disk_radial, ctx.config.disk_angular);
    let mut out = Vec::new();
    for r in [6.0, 8.0] {
        let w = Weight::new(r)?;
        let mass: f64 = build_disk_rule(r, nr, na, 0.0)?
            .weights()
            .iter()
            .sum::<f64>()
            * w.c_r();
        out.push(CheckResult::at_most(
            format!("c02.mass_r{r}"),
            (mass - 1.0).abs(),
            1e-8,
            0.0,
        ));
        let rule = build_disk_rule(0.0, nr, na, r / 2.0)?;
        let mv: f64 = rule
            .nodes()
            .iter()
            .zip(rule.weights())
            .map(|(x, wt)| wt * (1.0 - x.norm_sqr()).powf(r / 2.0))
            .sum();
        out.push(CheckResult::at_most(
            format!("c02.mean_value_integral_r{r}"),
            rel(mv, 2.0 * PI / (r - 2.0)),
            1e-8,
            0.0,
        ));
    }
    Ok(out)
}

/// Covolume of the Dirichlet domain by masked quadrature.
pub fn c03(ctx: &Context) -> CliResult<Vec<CheckResult>> {
    if ctx.trivial()? {
        return Ok(Vec::new());
    }
    let dom = ctx.domain()?;
    let masked = dom.covolume_masked(&build_disk_rule(2.0, 200, 512, 0.0)?)?;
    let mut out = vec![CheckResult::at_most(
        "c03.masked_vs_polygon",
        rel(masked, dom.covolume()),
        0.01,
        0.0,
    )];
    if let Some(g) = ctx.config.genus()? {
        let want = PI * (f64::from(g) - 1.0);
        out.push(CheckResult::at_most(
            "c03.gauss_bonnet",
            rel(masked, want),
            0.01,
            0.0,
        ));
    }
    Ok(out)
}

/// Orbit counting against the Huber-type constant `1/(2g-1)`.
pub fn c04(ctx: &Context) -> CliResult<Vec<CheckResult>> {
    let Some(g) = ctx.config.genus()? else {
        return Ok(Vec::new());
    };
    let table = ctx.config.table(ctx.config.counting_depth)?;
    let trend = counting_trend(&table, 16)?;
    let target = 1.0 / (2.0 * f64::from(g) - 1.0);
    let ratio = trend.mean / target;
    Ok(vec![CheckResult::flag(
        "c04.counting_over_huber_constant",
        ratio,
        2.0,
        0.0,
        (0.5..=2.0).contains(&ratio),
    )])
}

/// Monomial-basis Toeplitz oracle.
pub fn c05(ctx: &Context) -> CliResult<Vec<CheckResult>> {
    let w = ctx.weight;
    let r = w.r();
    let basis = MonomialBasis::new(w, 60);
    let t = toeplitz_matrix(
        |x| Complex64::new(x.norm_sqr(), 0.0),
        &basis,
        &build_disk_rule(r, 64, 128, 0.0)?,
    )?;
    let diag = (0..basis.dim())
        .map(|n| (t.matrix()[(n, n)].re - (n as f64 + 1.0) / (n as f64 + r)).abs())
        .fold(0.0, f64::max);
    let sym =
        (t.symbol_unchecked(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)) - 1.0 / r).norm();
    Ok(vec![
        CheckResult::at_most("c05.toeplitz_diagonal", diag, 1e-9, 0.0),
        CheckResult::at_most("c05.symbol_at_origin", sym, 1e-9, 0.0),
    ])
}

/// Star product against matrix products, unit law and associativity.
pub fn c06(ctx: &Context) -> CliResult<Vec<CheckResult>> {
    let w = ctx.weight;
    let r = w.r();
    let mut rng = ctx.rng(6);
    let basis = MonomialBasis::new(w, 8);
    let rule = build_disk_rule(r, 16, 40, 0.0)?;
    let pts: Vec<(Complex64, Complex64)> = (0..ctx.config.probes.max(3))
        .map(|_| (random_point(&mut rng, 0.6), random_point(&mut rng, 0.6)))
        .collect();
    let worst_rel = |s: &dyn Symbol, want: &dyn Fn(Complex64, Complex64) -> Complex64| {
        let (mut err, mut scale): (f64, f64) = (0.0, 0.0);
        for &(z, zeta) in &pts {
            let v = want(z, zeta);
            err = err.max((s.eval(z, zeta) - v).norm());
            scale = scale.max(v.norm());
        }
        err / scale
    };
    let mut product: f64 = 0.0;
    let mut ops = Vec::new();
    for _ in 0..10 {
        let a = random_operator(&basis, &mut rng)?;
        let b = random_operator(&basis, &mut rng)?;
        let ab = a.compose(&b);
        let s = star_product(Arc::new(a.clone()), Arc::new(b.clone()), &rule)?;
        product = product.max(worst_rel(&s, &|z, zeta| ab.symbol_unchecked(z, zeta)));
        ops.push(a);
    }
    let a: Arc<dyn Symbol> = Arc::new(ops[0].clone());
    let one: Arc<dyn Symbol> = Arc::new(ConstantSymbol {
        weight: w,
        value: Complex64::new(1.0, 0.0),
    });
    // the constant symbol is not a polynomial: the unit law needs a finer rule
    let unit_rule = build_disk_rule(r, 32, 80, 0.0)?;
    let left = star_product(one.clone(), a.clone(), &unit_rule)?;
    let right = star_product(a.clone(), one, &unit_rule)?;
    let unit = worst_rel(&left, &|z, zeta| a.eval(z, zeta))
        .max(worst_rel(&right, &|z, zeta| a.eval(z, zeta)));
    let (b, c): (Arc<dyn Symbol>, Arc<dyn Symbol>) =
        (Arc::new(ops[1].clone()), Arc::new(ops[2].clone()));
    let ab: Arc<dyn Symbol> = Arc::new(star_product(a.clone(), b.clone(), &rule)?);
    let bc: Arc<dyn Symbol> = Arc::new(star_product(b, c.clone(), &rule)?);
    let ab_c = star_product(ab, c, &rule)?;
    let a_bc = star_product(a, bc, &rule)?;
    let assoc = worst_rel(&ab_c, &|z, zeta| a_bc.eval(z, zeta));
    let cal = calibrate(w)?;
    Ok(vec![
        CheckResult::at_most("c06.star_vs_matrix_product", product, 1e-6, 0.0),
        CheckResult::at_most("c06.unit_law", unit, 1e-8, 0.0),
        CheckResult::at_most("c06.associativity", assoc, 1e-5, 0.0),
        CheckResult::at_most(
            "c06.kappa_star_vs_c_r",
            rel(cal.kappa_star, w.c_r()),
            1e-8,
            0.0,
        ),
        CheckResult::at_most(
            "c06.kappa_meanvalue_vs_c_half",
            rel(cal.kappa_meanvalue, w.c_half()),
            1e-8,
            0.0,
        ),
        CheckResult::at_most(
            "c06.kappa_kernel_vs_c_r",
            rel(cal.kappa_kernel, w.c_r()),
            1e-8,
            0.0,
        ),
    ])
}

/// Reproducing-integral and diagonal-restoration identities.
pub fn c07(ctx: &Context) -> CliResult<Vec<CheckResult>> {
    let w = ctx.weight;
    let r = w.r();
    let mut rng = ctx.rng(7);
    let (nr, na) = (ctx.config.disk_radial, ctx.config.disk_angular);
    let base = build_disk_rule(0.0, nr, na, r / 2.0)?;
    let fine = build_disk_rule(0.0, 2 * nr, 2 * na, r / 2.0)?;
    let pairs: Vec<(Complex64, Complex64)> = (0..ctx.config.probes.min(4))
        .map(|_| (random_point(&mut rng, 0.5), random_point(&mut rng, 0.5)))
        .collect();
    let z = DiskPoint::new(random_point(&mut rng, 0.3))?;
    let mut out = Vec::new();

    // group-free closed forms
    let trivial = berezin_core::fuchsian::enumerate_orbit(&trivial_group(), 1, DEFAULT_DEDUP_TOL)?;
    let (l3, _) = reproducing_residual(z, &trivial, w, &base, &pairs)?;
    out.push(CheckResult::at_most(
        "c07.trivial.reproducing",
        l3,
        1e-6,
        0.0,
    ));
    let basis = MonomialBasis::new(w, 12);
    let op = random_operator(&basis, &mut rng)?;
    let r4 = mean_value_residual(&op, z, &build_disk_rule(0.0, 48, 96, r / 2.0)?, w.c_half())?;
    out.push(CheckResult::at_most(
        "c07.trivial.mean_value",
        r4.relative,
        1e-6,
        r4.tail,
    ));

    // constant symbol: calibrated constant restores the diagonal, the printed one does not
    let one = ConstantSymbol {
        weight: w,
        value: Complex64::new(1.0, 0.0),
    };
    let good = mean_value_residual(&one, z, &base, w.c_half())?;
    let printed = mean_value_residual(&one, z, &base, (r - 1.0) / PI)?;
    out.push(CheckResult::at_most(
        "c07.mean_value.calibrated_constant",
        good.relative,
        1e-6,
        0.0,
    ));
    out.push(CheckResult::above(
        "c07.mean_value.printed_constant_rejected",
        printed.relative,
        1e-3,
        0.0,
    ));

    if ctx.trivial()? {
        return Ok(out);
    }
    let table = ctx.table()?;
    let depth = table.max_word_length();
    let shallow = table.truncated(depth - 1);
    let (res, tail) = reproducing_residual(z, table, w, &base, &pairs)?;
    let (res_s, tail_s) = reproducing_residual(z, &shallow, w, &base, &pairs)?;
    let (res_f, _) = reproducing_residual(z, table, w, &fine, &pairs)?;
    out.push(CheckResult::at_most(
        "c07.group.reproducing",
        res,
        1e-3,
        tail,
    ));
    out.push(CheckResult::flag(
        "c07.group.reproducing.extra_shell_ratio",
        (res + tail) / (res_s + tail_s),
        1.0,
        tail,
        res + tail < res_s + tail_s,
    ));
    out.push(CheckResult::flag(
        "c07.group.reproducing.doubling_ratio",
        res_f / res,
        1.0,
        tail,
        res_f < res,
    ));

    let (p, q) = (
        DiskPoint::new(random_point(&mut rng, 0.3))?,
        DiskPoint::new(random_point(&mut rng, 0.3))?,
    );
    let e = EvalVector::new(table, w, p, q)?;
    let e_s = EvalVector::new(&shallow, w, p, q)?;
    let c = mean_value_eval_residual(&e, z, &base, w.c_half())?;
    let c_s = mean_value_eval_residual(&e_s, z, &base, w.c_half())?;
    let c_f = mean_value_eval_residual(&e, z, &fine, w.c_half())?;
    let scale = c.rhs.norm();
    out.push(CheckResult::at_most(
        "c07.group.mean_value",
        c.relative,
        1e-3,
        c.tail / scale,
    ));
    out.push(CheckResult::flag(
        "c07.group.mean_value.extra_shell_ratio",
        (c.residual + c.tail) / (c_s.residual + c_s.tail),
        1.0,
        c.tail / scale,
        c.residual + c.tail < c_s.residual + c_s.tail,
    ));
    out.push(CheckResult::flag(
        "c07.group.mean_value.doubling_ratio",
        c_f.residual / c.residual,
        1.0,
        c.tail / scale,
        c_f.residual < c.residual,
    ));
    Ok(out)
}

/// Group-sum formula for `‖E‖²_{2,r}` against the double integral.
pub fn c08(ctx: &Context) -> CliResult<Vec<CheckResult>> {
    if ctx.trivial()? {
        return Ok(Vec::new());
    }
    let w = ctx.weight;
    let mut rng = ctx.rng(8);
    let table = ctx.table()?;
    let dom = ctx.domain()?;
    // the double integral uses one shell less: its cost grows with the table
    let evals = table.truncated(table.max_word_length().min(5) - 1);
    let frule = dom.rule(0.0, ctx.config.domain_angular, ctx.config.domain_radial)?;
    let drule = build_disk_rule(w.r(), 64, 192, 0.0)?;
    let (mut worst, mut tail): (f64, f64) = (0.0, 0.0);
    for _ in 0..ctx.config.probes {
        let (z, zeta) = (
            DiskPoint::new(random_point(&mut rng, 0.3))?,
            DiskPoint::new(random_point(&mut rng, 0.3))?,
        );
        let closed = l2_group_sum(z, zeta, table, w)?;
        let hs = hs_norm_2r(&EvalVector::new(&evals, w, z, zeta)?, &frule, &drule)?;
        worst = worst.max(rel(hs * hs, closed.value));
        tail = tail.max(closed.tail / closed.value);
    }
    Ok(vec![CheckResult::at_most(
        "c08.l2_group_sum_vs_integral",
        worst,
        1e-4,
        tail,
    )])
}

/// Normalised nuclear norms of compressions to growing tile unions.
pub fn c09(ctx: &Context) -> CliResult<Vec<CheckResult>> {
    if ctx.trivial()? {
        return Ok(Vec::new());
    }
    let w = ctx.weight;
    let table = ctx.table()?;
    let dom = ctx.domain()?;
    let evals = table.truncated(table.max_word_length().min(4));
    let e = EvalVector::new(
        &evals,
        w,
        DiskPoint::ORIGIN,
        DiskPoint::from_re_im(0.2, 0.0)?,
    )?;
    let seq = norm_sequence(
        |q| e.compress_factored(q, w.c_r(), DEFAULT_PRUNE),
        w.r(),
        dom,
        table,
        3,
        5,
        ctx.config.n_max,
    )?;
    let inc = seq.l1_increments();
    let tail = seq
        .entries
        .iter()
        .map(|x| x.tail / x.l1)
        .fold(0.0, f64::max);
    let mut out = vec![CheckResult::flag(
        "c09.l1_positive",
        seq.entries
            .iter()
            .map(|x| x.l1)
            .fold(f64::INFINITY, f64::min),
        0.0,
        tail,
        seq.entries.iter().all(|x| x.l1 > 0.0),
    )];
    if inc.len() >= 2 {
        let ratio = inc[inc.len() - 1] / inc[0];
        out.push(CheckResult::at_most(
            "c09.last_over_first_increment",
            ratio,
            0.5,
            tail,
        ));
    }
    let cs = seq
        .entries
        .iter()
        .map(|x| x.l1 / ((x.dim as f64 / x.n as f64).sqrt() * x.hs))
        .fold(0.0, f64::max);
    out.push(CheckResult::flag(
        "c09.cauchy_schwarz_ratio",
        cs,
        1.0,
        0.0,
        seq.entries.iter().all(|x| x.cauchy_schwarz_holds()),
    ));
    Ok(out)
}

/// Orbit sums `y_N`, the double and phased double sums and the `1/N²` sum.
pub fn c10(ctx: &Context) -> CliResult<Vec<CheckResult>> {
    if ctx.trivial()? {
        return Ok(Vec::new());
    }
    let w = ctx.weight;
    let table = ctx.table()?;
    let depth = table.max_word_length();
    let n_max = ctx.config.n_max;
    let (mut lo, mut hi, mut cor, mut tail) = (f64::INFINITY, 0.0f64, 0.0f64, 0.0f64);
    for n in 1..=n_max {
        let y = orbit_sum_yn(table, n, w, depth)?;
        let c = root_n_orbit_sum(table, n, w, depth)?;
        let s = table.entries()[n - 1].radius;
        let scaled = y.value * (1.0 - s).sqrt();
        lo = lo.min(scaled);
        hi = hi.max(scaled);
        cor = cor.max(rel(c.value, y.value / (n as f64).sqrt()));
        tail = tail.max(y.tail / y.value);
    }
    let outer = depth.min(4);
    let inner = depth.min(4);
    let s8 = double_orbit_sum(table, n_max, w, outer, inner)?;
    let s9 = phased_orbit_sum(table, n_max, w, outer, inner, PhasedSumOptions::FULL)?;
    let s9_plain = phased_orbit_sum(table, n_max, w, outer, inner, PhasedSumOptions::NONE)?;
    Ok(vec![
        CheckResult::at_most("c10.yn_scaled_max_over_min", hi / lo, 3.0, tail),
        CheckResult::at_most("c10.root_n_sum_vs_yn", cor, 1e-12, tail),
        CheckResult::flag(
            "c10.double_sum_value",
            s8.value,
            f64::INFINITY,
            s8.tail,
            s8.value.is_finite(),
        ),
        CheckResult::at_most(
            "c10.double_sum_inner_shell_change",
            s8.relative_inner_change(),
            0.05,
            s8.tail / s8.value,
        ),
        CheckResult::flag(
            "c10.phased_sum_value",
            s9.value,
            f64::INFINITY,
            s9.tail,
            s9.value.is_finite(),
        ),
        CheckResult::at_most(
            "c10.phased_sum_inner_shell_change",
            s9.relative_inner_change(),
            0.05,
            s9.tail / s9.value,
        ),
        CheckResult::at_most(
            "c10.phased_without_factors_vs_double",
            rel(s9_plain.value, s8.value),
            1e-12,
            0.0,
        ),
    ])
}

/// Test functions `1 + ε K_s(z, 0)/K_s(0, 0)` for the sandwich check.
pub const SANDWICH_SYMBOLS: [(f64, f64); 5] = [
    (6.0, 1.0),
    (8.0, 2.0),
    (8.0, -0.5),
    (10.0, 1.0),
    (12.0, -0.3),
];

fn m_hat(ctx: &Context, r: f64, probes: &[Complex64]) -> CliResult<f64> {
    let params = EquivalenceParams {
        zeta_angular: 2,
        zeta_radial: 5,
        ..EquivalenceParams::default()
    };
    Ok(equivalence_constant(
        ctx.domain()?,
        ctx.table()?,
        Weight::new(r)?,
        &params,
        probes,
    )?
    .value)
}

/// Equivalence constant and the sandwich on Toeplitz test operators.
pub fn c11(ctx: &Context) -> CliResult<(Vec<CheckResult>, Option<f64>)> {
    if ctx.trivial()? {
        return Ok((Vec::new(), None));
    }
    let w = ctx.weight;
    let dom = ctx.domain()?;
    let coarse = domain_probes(dom, 1, 3)?;
    let r0 = w.r();
    let ms: Vec<f64> = [r0, r0 + 0.5, r0 + 1.0]
        .iter()
        .map(|&r| m_hat(ctx, r, &coarse))
        .collect::<CliResult<_>>()?;
    let (lo, hi) = ms
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &m| (a.min(m), b.max(m)));
    let mut out = vec![CheckResult::at_most(
        "c11.m_hat_variation",
        (hi - lo) / lo,
        0.1,
        0.0,
    )];

    let table = ctx.table()?;
    let sym_table = table.truncated(table.max_word_length().min(3));
    let probes = domain_probes(dom, 2, 4)?;
    let frule = dom.rule(w.r(), 3, 4)?;
    let lrule = build_disk_rule(0.0, 32, 64, w.r() / 2.0)?;
    let mrule = build_disk_rule(w.r(), 48, 128, 0.0)?;
    let setup = SandwichSetup {
        table: &sym_table,
        domain_rule: &frule,
        lambda_rule: &lrule,
        probes: &probes,
        matrix_rule: &mrule,
        degree_cap: 60,
    };
    for (s, eps) in SANDWICH_SYMBOLS {
        let phi = bump_function(&sym_table, s, eps)?;
        let sw = sandwich(&phi, w, ms[0], &setup)?;
        let tag = format!("s{s}_eps{eps}");
        out.push(CheckResult::flag(
            format!("c11.{tag}.operator_over_lambda"),
            sw.operator_norm / sw.lambda_norm,
            1.0,
            0.0,
            sw.lower_holds,
        ));
        // the Schur test bound, with the kernel constant the literal inequality omits
        let schur = sw.operator_norm / (w.c_r() * sw.lambda_norm);
        out.push(CheckResult::at_most(
            format!("c11.{tag}.operator_over_schur_bound"),
            schur,
            1.0,
            0.0,
        ));
        out.push(CheckResult::flag(
            format!("c11.{tag}.lambda_over_mhat_operator"),
            sw.lambda_norm / (sw.m_hat * sw.operator_norm),
            1.0,
            0.0,
            sw.upper_holds,
        ));
    }
    Ok((out, Some(ms[0])))
}

fn guard(k: u32, f: impl FnOnce() -> CliResult<Vec<CheckResult>>) -> Vec<CheckResult> {
    f().unwrap_or_else(|e| vec![CheckResult::error(format!("c{k:02}"), &e.to_string())])
}

/// Runs one criterion; errors become a failing result naming the criterion.
pub fn run_criterion(ctx: &Context, k: u32) -> (Vec<CheckResult>, Option<f64>) {
    let f = match k {
        1 => c01,
        2 => c02,
        3 => c03,
        4 => c04,
        5 => c05,
        6 => c06,
        7 => c07,
        8 => c08,
        9 => c09,
        10 => c10,
        11 => {
            return c11(ctx)
                .unwrap_or_else(|e| (vec![CheckResult::error("c11", &e.to_string())], None));
        }
        _ => {
            return (
                vec![CheckResult::error(format!("c{k:02}"), "no such criterion")],
                None,
            )
        }
    };
    (guard(k, || f(ctx)), None)
}

/// The full report for the enabled criteria.
pub fn verify(config: &RunConfig) -> CliResult<Report> {
    let ctx = Context::new(config.clone())?;
    let cal = calibrate(ctx.weight)?;
    let mut results = Vec::new();
    let mut m_r_hat = None;
    for k in (1..=CRITERIA).filter(|&k| config.enabled(k)) {
        let (mut r, m) = run_criterion(&ctx, k);
        results.append(&mut r);
        m_r_hat = m_r_hat.or(m);
    }
    Ok(Report {
        config_hash: config.hash(),
        constants: Constants {
            kappa_star: cal.kappa_star,
            kappa_meanvalue: cal.kappa_meanvalue,
            kappa_kernel: cal.kappa_kernel,
            m_r_hat,
        },
        results,
    })
}
