use std::sync::Arc;

use lcfn::variational::{
    critical_points, dbr_forward_check, lagrange_witness, verify_local_order, DiracKernel,
    DiracParams, OrderStatus, Verdict,
};
use lcfn::{FuzzyFn, GeneratorA, Interval, QuadratureSpec};
use proptest::prelude::*;

fn gen(am: f64) -> Arc<GeneratorA> {
    Arc::new(GeneratorA::triangular(am - 1.0, am, am + 2.0).unwrap())
}

fn params() -> impl Strategy<Value = DiracParams> {
    (0.05..2.0f64, 0..4u32, 1..12u32).prop_map(|(e, l, k)| DiracParams::new(e, l, k))
}

/// Midpoint sum of the kernel on a fine grid; independent of the adaptive rule.
fn midpoint_mass(kernel: &DiracKernel) -> f64 {
    let eps = kernel.epsilon();
    let n = 20_000;
    let h = 2.0 * eps / n as f64;
    (0..n).map(|i| kernel.eval(-eps + (i as f64 + 0.5) * h)).sum::<f64>() * h
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_has_unit_mass_and_even_compact_support(p in params(), s in 0.0..1.0f64) {
        let kernel = DiracKernel::new(p).unwrap();
        prop_assert!((midpoint_mass(&kernel) - 1.0).abs() < 1e-9);
        let x = s * p.epsilon;
        prop_assert_eq!(kernel.eval(x), kernel.eval(-x));
        prop_assert!(kernel.eval(x) >= 0.0);
        prop_assert_eq!(kernel.eval(p.epsilon * (1.0 + s)), 0.0);
        prop_assert_eq!(kernel.eval(-p.epsilon * (1.0 + s)), 0.0);
    }

    #[test]
    fn kernel_is_flat_at_the_edges(p in params()) {
        // Near ±ε the bump behaves like C·h^{2(l+1)k}, so all derivatives up
        // to order l vanish there.
        let kernel = DiracKernel::new(DiracParams::new(p.epsilon, p.l, p.k.min(3))).unwrap();
        let power = 2 * kernel.params().power();
        let h = 1e-3 * p.epsilon;
        let ratio = kernel.eval(p.epsilon - h) / kernel.eval(p.epsilon - 0.5 * h);
        let expected = 2f64.powi(power as i32);
        prop_assert!((ratio / expected - 1.0).abs() < 1e-3, "{ratio} vs {expected}");
        let left = kernel.eval(-p.epsilon + h) / kernel.eval(-p.epsilon + 0.5 * h);
        prop_assert_eq!(left, ratio);
    }

    #[test]
    fn quadratic_center_has_one_verified_extremum(
        am in -1.0..1.0f64,
        c in -0.5..0.5f64,
        s in prop_oneof![0.5..3.0f64, -3.0..-0.5f64],
        beta in -2.0..2.0f64,
    ) {
        // center = s(t − c)² regardless of how it is split between r and q.
        let r = format!("{s}*(t - {c})^2 - {}*t", am * beta);
        let q = format!("{beta}*t");
        let f = FuzzyFn::parse(&r, &q, &gen(am), Interval::new(-1.0, 1.0)).unwrap();
        let cps = critical_points(&f).unwrap();
        prop_assert_eq!(cps.len(), 1);
        let cp = cps[0];
        prop_assert!((cp.t_star - c).abs() < 1e-9, "{} vs {c}", cp.t_star);
        prop_assert!(cp.center_d1.abs() <= 1e-10 * (1.0 + s.abs()));
        let expected = if s > 0.0 { Verdict::LocalMin } else { Verdict::LocalMax };
        prop_assert_eq!(cp.verdict, expected);
        let report = verify_local_order(&f, &cp, 1e-3, 100).unwrap();
        prop_assert_eq!(report.status, OrderStatus::Holds);
    }
}

#[test]
fn exponential_pairing_error_shrinks_with_k() {
    let spec = QuadratureSpec::default();
    let mut last = f64::INFINITY;
    for k in [1, 2, 4, 8, 16, 32] {
        let kernel = DiracKernel::new(DiracParams::new(0.3, 1, k)).unwrap();
        let err = (kernel.pair_with(|x| Ok(x.exp()), &spec).unwrap() - 1.0).abs();
        assert!(err < last, "k={k}: {err} >= {last}");
        last = err;
    }
    assert!(last < 1e-3);
}

#[test]
fn forward_residual_tracks_quadrature_tolerance() {
    let g = FuzzyFn::parse("sin(t)", "t^2", &gen(0.0), Interval::new(0.0, std::f64::consts::PI))
        .unwrap();
    let f = g.derivative();
    let mut previous = f64::INFINITY;
    for tol in [1e-4, 1e-7, 1e-10] {
        let spec = QuadratureSpec::default().with_tol(tol);
        let report = dbr_forward_check(&f, &g, None, &spec).unwrap();
        assert!(report.max_residual <= 10.0 * tol, "tol {tol}: {}", report.max_residual);
        assert!(report.max_residual <= previous.max(1e-13));
        previous = report.max_residual;
    }
}

#[test]
fn witness_limit_uses_the_center() {
    let spec = QuadratureSpec::default();
    let f = FuzzyFn::parse("t", "t - 0.25", &gen(0.5), Interval::new(0.0, 1.0)).unwrap();
    let center = f.center_at(0.5).unwrap();
    let w = lagrange_witness(&f, 0.5, DiracParams::new(0.1, 1, 32), &spec).unwrap();
    assert_eq!(w.limit, center * center);
    assert!((w.b_k - w.limit).abs() < 0.05 * w.limit);
}
