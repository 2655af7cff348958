//! Invariants of the geometry, kernels and norm machinery as properties.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use proptest::prelude::*;

use berezin_core::bergman::{MonomialBasis, TruncatedOperator};
use berezin_core::fuchsian::{enumerate_orbit, octagon_group, trivial_group, OrbitTable};
use berezin_core::quadrature::{build_disk_rule, Quadrature};
use berezin_core::quantization::{
    mean_value_residual, poincare_series, poincare_shells, star_product, ConstantSymbol,
    EvalVector, Symbol,
};
use berezin_core::truncation::{
    compress_terms, orbit_sum_yn, root_n_orbit_sum, Compressible, KernelTerm, DEFAULT_PRUNE,
};
use berezin_core::{
    d_kernel, hyperbolic_distance, hyperbolic_midpoint, DiskPoint, SU11Element, Weight,
};

fn octagon(depth: usize) -> &'static OrbitTable {
    static T3: OnceLock<OrbitTable> = OnceLock::new();
    static T4: OnceLock<OrbitTable> = OnceLock::new();
    let cell = if depth == 3 { &T3 } else { &T4 };
    cell.get_or_init(|| enumerate_orbit(&octagon_group(), depth, 1e-9).unwrap())
}

fn point(max: f64) -> impl Strategy<Value = Complex64> {
    (0.0..max, 0.0..2.0 * PI).prop_map(|(t, a): (f64, f64)| Complex64::from_polar(t, a))
}

fn element() -> impl Strategy<Value = SU11Element> {
    (0.0..2.5f64, 0.0..2.0 * PI, 0.0..2.0 * PI).prop_map(|(t, p, q)| {
        SU11Element::new(
            Complex64::from_polar(t.cosh(), p),
            Complex64::from_polar(t.sinh(), q),
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_kernel_is_invariant_and_symmetric(g in element(), z in point(0.95), w in point(0.95)) {
        let d = d_kernel(z, w);
        prop_assert!((d_kernel(g.act(z), g.act(w)) - d).abs() < 1e-11);
        prop_assert!((d_kernel(w, z) - d).abs() < 1e-15);
        prop_assert!(d > 0.0 && d <= 1.0);
    }

    #[test]
    fn d_kernel_is_sech_of_half_distance(z in point(0.95), w in point(0.95)) {
        let rho = hyperbolic_distance(z, w);
        prop_assert!(((rho / 2.0).cosh().powi(2) * d_kernel(z, w).powi(2) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn inverse_undoes_the_action(g in element(), z in point(0.9)) {
        prop_assert!((g.inverse().act(g.act(z)) - z).norm() < 1e-9);
        prop_assert!((g.compose(&g.inverse()).act(z) - z).norm() < 1e-9);
    }

    #[test]
    fn midpoint_is_equidistant(a in point(0.9), b in point(0.9)) {
        let m = hyperbolic_midpoint(a, b);
        let (da, db) = (hyperbolic_distance(m, a), hyperbolic_distance(m, b));
        prop_assert!((da - db).abs() < 1e-8 * (1.0 + da));
        prop_assert!((da + db - hyperbolic_distance(a, b)).abs() < 1e-8 * (1.0 + da));
    }

    #[test]
    fn weighted_measure_has_unit_mass(r in 2.5f64..24.0) {
        let w = Weight::new(r).unwrap();
        let mass: f64 = build_disk_rule(r, 32, 8, 0.0).unwrap().weights().iter().sum::<f64>() * w.c_r();
        prop_assert!((mass - 1.0).abs() < 1e-10, "{mass}");
    }

    #[test]
    fn poincare_series_is_symmetric(z in point(0.4), eta in point(0.4), r in 6.0f64..12.0) {
        let w = Weight::new(r).unwrap();
        let t = octagon(4);
        // exact for any table closed under inverses, converged or not
        let a: f64 = poincare_shells(t, z, eta, w).iter().sum();
        let b: f64 = poincare_shells(t, eta, z, w).iter().sum();
        prop_assert!((a - b).abs() < 1e-12 * a);
        prop_assert!(a >= d_kernel(z, eta).powf(r));
    }

    #[test]
    fn root_n_sum_is_yn_over_root_n(n in 1usize..10, r in 7.0f64..10.0) {
        let w = Weight::new(r).unwrap();
        let t = octagon(4);
        let y = orbit_sum_yn(t, n, w, 4).unwrap();
        let c = root_n_orbit_sum(t, n, w, 4).unwrap();
        prop_assert!((c.value - y.value / (n as f64).sqrt()).abs() <= 1e-12 * y.value);
    }

    #[test]
    fn mean_value_identity_for_constants(z in point(0.8), r in 5.0f64..14.0) {
        let w = Weight::new(r).unwrap();
        let one = ConstantSymbol { weight: w, value: Complex64::new(1.0, 0.0) };
        let rule = build_disk_rule(0.0, 32, 8, r / 2.0).unwrap();
        let c = mean_value_residual(&one, DiskPoint::new(z).unwrap(), &rule, w.c_half()).unwrap();
        prop_assert!(c.relative < 1e-10, "{c:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn nuclear_norm_bounds_hilbert_schmidt(z in point(0.3), zeta in point(0.3)) {
        let w = Weight::new(8.0).unwrap();
        let t = octagon(3);
        let e = EvalVector::new(t, w, DiskPoint::new(z).unwrap(), DiskPoint::new(zeta).unwrap()).unwrap();
        let rule = build_disk_rule(8.0, 12, 24, 0.0).unwrap();
        let a = e.compress_factored(&rule, w.c_r(), DEFAULT_PRUNE).unwrap();
        let (nuc, hs) = (a.nuclear_norm().unwrap(), a.hs_norm().unwrap());
        let dim = a.dim_bound() as f64;
        prop_assert!(hs <= nuc * (1.0 + 1e-12));
        prop_assert!(nuc <= dim.sqrt() * hs * (1.0 + 1e-12));
    }

    #[test]
    fn compression_scales_linearly(c in 0.1f64..10.0, u in point(0.5)) {
        let rule = build_disk_rule(8.0, 12, 24, 0.0).unwrap();
        let term = KernelTerm { coeff: Complex64::new(1.0, 0.0), u, v: u, last_shell: false };
        let one = compress_terms(&[term], 8.0, &rule, 1.0, 0.0).unwrap().nuclear_norm().unwrap();
        let scaled = KernelTerm { coeff: Complex64::new(c, 0.0), ..term };
        let many = compress_terms(&[scaled], 8.0, &rule, 1.0, 0.0).unwrap().nuclear_norm().unwrap();
        prop_assert!((many - c * one).abs() < 1e-10 * c * one);
    }

    #[test]
    fn trivial_star_product_is_the_matrix_product(seed in any::<u64>(), z in point(0.5), zeta in point(0.5)) {
        use rand::{Rng, SeedableRng};
        let w = Weight::new(8.0).unwrap();
        let basis = MonomialBasis::new(w, 6);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut random = || {
            let n = basis.dim();
            let m = berezin_core::linalg::CMatrix::from_fn(n, n, |i, j| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * 0.7f64.powi((i + j) as i32)
            });
            TruncatedOperator::new(basis.clone(), m).unwrap()
        };
        let (a, b) = (random(), random());
        let want = a.compose(&b).symbol_unchecked(z, zeta);
        let s = star_product(Arc::new(a), Arc::new(b), &build_disk_rule(8.0, 16, 32, 0.0).unwrap()).unwrap();
        prop_assert!((s.eval(z, zeta) - want).norm() < 1e-9 * (1.0 + want.norm()));
    }
}

#[test]
fn trivial_group_has_a_single_term() {
    let t = enumerate_orbit(&trivial_group(), 3, 1e-9).unwrap();
    assert_eq!(t.len(), 1);
    let w = Weight::new(8.0).unwrap();
    let z = Complex64::new(0.3, -0.2);
    assert!((poincare_series(&t, z, z, w).unwrap().value - 1.0).abs() < 1e-15);
}
