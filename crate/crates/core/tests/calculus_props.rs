mod common;

use std::sync::Arc;

use lcfn::calculus::{ftc_check, ibp_check, product_rule_check, square_integral};
use lcfn::{CalculusError, FuzzyFn, GeneratorA, Interval, Lcfn, Method, QuadratureError, QuadratureSpec};
use proptest::prelude::*;

/// `c0 + c1*sin(w*t) + c2*t^2` with small coefficients.
fn component() -> impl Strategy<Value = String> {
    (-2.0..2.0f64, -2.0..2.0f64, 0.2..3.0f64, -1.0..1.0f64)
        .prop_map(|(c0, c1, w, c2)| format!("{c0} + {c1}*sin({w}*t) + {c2}*t^2"))
}

fn domain() -> impl Strategy<Value = Interval> {
    (-2.0..1.0f64, 0.2..2.5f64).prop_map(|(a, w)| Interval::new(a, a + w))
}

fn fuzzy_pair() -> impl Strategy<Value = (FuzzyFn, FuzzyFn)> {
    (common::generator(), domain(), component(), component(), component(), component()).prop_map(
        |(gen, d, r1, q1, r2, q2)| {
            (FuzzyFn::parse(&r1, &q1, &gen, d).unwrap(), FuzzyFn::parse(&r2, &q2, &gen, d).unwrap())
        },
    )
}

fn coord_gap(a: &Lcfn, b: &Lcfn) -> f64 {
    (a.r() - b.r()).abs().max((a.q() - b.q()).abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn integral_is_linear((f, g) in fuzzy_pair(), lambda in -3.0..3.0f64) {
        let spec = QuadratureSpec::default();
        let combined = f.scale(lambda).add(&g).unwrap().integrate(&spec).unwrap();
        let separate = f.integrate(&spec).unwrap().scale(lambda).add(&g.integrate(&spec).unwrap()).unwrap();
        let bound = (2.0 + lambda.abs()) * spec.abs_tol;
        prop_assert!(coord_gap(&combined, &separate) < bound, "{}", coord_gap(&combined, &separate));
    }

    #[test]
    fn derivative_is_the_limit_quotient((f, _g) in fuzzy_pair(), s in 0.1..0.9f64) {
        let d = f.domain();
        let t = d.lo + s * d.width();
        let quotient = |h: f64| {
            let hi = f.at(t + h).unwrap();
            let lo = f.at(t - h).unwrap();
            hi.sub(&lo).unwrap().scale(1.0 / (2.0 * h))
        };
        let h = 1e-3 * d.width();
        let coarse = quotient(h);
        let fine = quotient(0.5 * h);
        let limit = fine.scale(4.0 / 3.0).sub(&coarse.scale(1.0 / 3.0)).unwrap();
        let exact = f.deriv(t).unwrap();
        prop_assert!(exact.sub(&limit).unwrap().norm() < 1e-7 * (1.0 + exact.norm()));
    }

    #[test]
    fn calculus_identities_hold((f, g) in fuzzy_pair(), s in 0.1..0.9f64) {
        let spec = QuadratureSpec::default();
        let ftc = ftc_check(&f, &spec).unwrap();
        prop_assert!(ftc.passed, "{ftc:?}");
        let ibp = ibp_check(&f, &g, &spec).unwrap();
        prop_assert!(ibp.passed, "{ibp:?}");
        let d = f.domain();
        let pr = product_rule_check(&f, &g, d.lo + s * d.width()).unwrap();
        prop_assert!(pr.passed, "{pr:?}");
    }

    #[test]
    fn square_integral_routes_agree((f, _g) in fuzzy_pair()) {
        let spec = QuadratureSpec::default();
        let report = square_integral(&f, &spec).unwrap();
        prop_assert!(report.nonnegative);
        prop_assert!(report.route_gap < 1e-8 * (1.0 + report.center_direct.abs()), "{report:?}");
        prop_assert!(report.passed, "{report:?}");
    }

    #[test]
    fn gauss_legendre_agrees_with_simpson((f, _g) in fuzzy_pair()) {
        let simpson = f.integrate(&QuadratureSpec::default()).unwrap();
        let gl = f.integrate(&QuadratureSpec::gauss_legendre(64)).unwrap();
        prop_assert!(coord_gap(&simpson, &gl) < 1e-9);
    }
}

#[test]
fn center_zero_square_integral_is_zero() {
    let gen = Arc::new(GeneratorA::triangular(-0.5, 0.5, 2.5).unwrap());
    let f = FuzzyFn::parse("t", "-2*t", &gen, Interval::new(0.0, 1.0)).unwrap();
    let report = square_integral(&f, &QuadratureSpec::default()).unwrap();
    assert!(report.integral.center.abs() < 1e-10);
    assert_eq!(report.violation_fraction, 0.0);
    assert!(report.passed);
}

#[test]
fn quadrature_methods_round_trip_through_strings() {
    for m in [Method::AdaptiveSimpson, Method::GaussLegendre(16)] {
        assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
    }
    assert!("trapezoid".parse::<Method>().is_err());
}

#[test]
fn sqrt_at_zero_does_not_converge() {
    let gen = Arc::new(GeneratorA::triangular(-1.0, 0.0, 2.0).unwrap());
    let f = FuzzyFn::parse("sqrt(t)", "0", &gen, Interval::new(0.0, 1.0)).unwrap();
    let err = f.integrate(&QuadratureSpec::default()).unwrap_err();
    assert!(matches!(err, CalculusError::Quadrature(QuadratureError::NonConvergent { .. })), "{err}");
}
