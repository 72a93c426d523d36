mod common;

use lcfn::generator::{GeneratorA, GeneratorError};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn alpha_levels_are_nested(g in common::generator(), pairs in prop::collection::vec((0.0..=1.0f64, 0.0..=1.0f64), 100)) {
        for (a, b) in pairs {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let outer = g.alpha_level(lo).unwrap();
            let inner = g.alpha_level(hi).unwrap();
            prop_assert!(inner.is_subset_of(&outer), "[A]_{hi} = {inner:?} not in [A]_{lo} = {outer:?}");
        }
    }

    #[test]
    fn one_level_is_the_peak_and_zero_level_the_support(g in common::generator()) {
        let top = g.alpha_level(1.0).unwrap();
        prop_assert_eq!((top.lo, top.hi), (g.peak(), g.peak()));
        prop_assert_eq!(g.alpha_level(0.0).unwrap(), g.support());
        prop_assert_eq!(g.membership(g.peak()), 1.0);
    }

    #[test]
    fn centering_is_idempotent_and_keeps_widths(g in common::generator(), alphas in prop::collection::vec(0.0..=1.0f64, 20)) {
        let c = g.center_at_zero().unwrap();
        prop_assert_eq!(c.peak(), 0.0);
        prop_assert_eq!(&c.center_at_zero().unwrap(), &c);
        for a in alphas {
            let w0 = g.alpha_level(a).unwrap().width();
            let w1 = c.alpha_level(a).unwrap().width();
            prop_assert!((w0 - w1).abs() <= 1e-12 * (1.0 + w0), "{w0} vs {w1}");
        }
    }

    #[test]
    fn mirror_images_are_rejected(peak in -2.0..2.0f64, parts in prop::collection::vec((0.05..1.0f64, 0.05..0.95f64), 1..4)) {
        let mut mus: Vec<f64> = parts.iter().map(|p| p.1).collect();
        mus.sort_by(f64::total_cmp);
        mus.dedup();
        let mut offsets = vec![(0.0, 1.0)];
        let mut x = 0.0;
        for (i, mu) in mus.iter().rev().enumerate() {
            x += parts[i].0;
            offsets.push((x, *mu));
        }
        offsets.push((x + parts[0].0, 0.0));
        let mut knots: Vec<(f64, f64)> = offsets.iter().rev().map(|&(d, mu)| (peak - d, mu)).collect();
        knots.extend(offsets.iter().skip(1).map(|&(d, mu)| (peak + d, mu)));
        let err = GeneratorA::piecewise_linear(knots).unwrap_err();
        prop_assert!(matches!(err, GeneratorError::Symmetric { .. }), "{err:?}");
    }
}

#[test]
fn validation_report_for_spec_triangle() {
    let report = lcfn::generator::validate(
        lcfn::generator::GeneratorKind::Triangular,
        &[(-1.0, 0.0), (0.0, 1.0), (2.0, 0.0)],
        1e-12,
    )
    .unwrap();
    assert_eq!(report.peak, 0.0);
    assert_eq!(report.peak_index, 1);
}
