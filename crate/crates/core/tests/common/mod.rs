#![allow(dead_code)]

use std::sync::Arc;

use lcfn::{GeneratorA, Lcfn};
use proptest::prelude::*;

/// Triangular generators with unequal spreads.
pub fn triangular() -> impl Strategy<Value = Arc<GeneratorA>> {
    (-2.0..2.0f64, 0.1..3.0f64, 0.1..3.0f64)
        .prop_filter("spreads must differ", |(_, l, r)| (l - r).abs() > 1e-3)
        .prop_map(|(m, l, r)| Arc::new(GeneratorA::triangular(m - l, m, m + r).unwrap()))
}

/// Piecewise-linear generators with 1 to 3 interior knots per branch.
pub fn piecewise() -> impl Strategy<Value = Arc<GeneratorA>> {
    (
        -2.0..2.0f64,
        prop::collection::vec((0.05..1.0f64, 0.05..0.95f64), 1..4),
        prop::collection::vec((0.05..1.0f64, 0.05..0.95f64), 1..4),
    )
        .prop_filter_map("must be asymmetric", |(peak, left, right)| {
            let branch = |parts: &[(f64, f64)]| {
                let mut mus: Vec<f64> = parts.iter().map(|p| p.1).collect();
                mus.sort_by(f64::total_cmp);
                mus.dedup();
                let mut x = 0.0;
                let mut out = vec![(0.0, 1.0)];
                for (i, mu) in mus.iter().rev().enumerate() {
                    x += parts[i].0;
                    out.push((x, *mu));
                }
                x += parts[0].0;
                out.push((x, 0.0));
                out
            };
            let mut knots: Vec<(f64, f64)> =
                branch(&left).into_iter().rev().map(|(d, mu)| (peak - d, mu)).collect();
            knots.extend(branch(&right).into_iter().skip(1).map(|(d, mu)| (peak + d, mu)));
            GeneratorA::piecewise_linear(knots).ok().map(Arc::new)
        })
}

pub fn generator() -> impl Strategy<Value = Arc<GeneratorA>> {
    prop_oneof![triangular(), piecewise()]
}

pub fn element(gen: Arc<GeneratorA>) -> impl Strategy<Value = Lcfn> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(move |(r, q)| Lcfn::new(r, q, &gen))
}
