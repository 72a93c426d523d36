use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::VariationalError;
use crate::calculus::{uniform_grid, CalculusError, FuzzyFn};
use crate::expr::{Expr, Func};
use crate::generator::Interval;
use crate::number::{Lcfn, LcfnView};
use crate::quadrature::QuadratureSpec;

pub const FORWARD_TOL: f64 = 1e-7;
/// A residual above this marks the hypothesis `g′ = f` as violated.
pub const DETECTION_THRESHOLD: f64 = 1e-3;
pub const RECONSTRUCT_TOL: f64 = 1e-9;
const BOUNDARY_TOL: f64 = 1e-12;

/// A named test function `η` with `η(a) = η(b) = 0`.
#[derive(Debug, Clone)]
pub struct TestFunction {
    pub label: String,
    pub eta: FuzzyFn,
}

/// `sin(mπ(t − a)/(b − a))` for `m = 1..=4`, each with `q = 0` and with `q`
/// equal to the same sine.
pub fn sine_catalog(f: &FuzzyFn) -> Vec<TestFunction> {
    let Interval { lo: a, hi: b } = f.domain();
    let mut out = Vec::with_capacity(8);
    for m in 1..=4 {
        let freq = m as f64 * PI / (b - a);
        let sine = Expr::num(freq).mul(Expr::t().sub(Expr::num(a))).call(Func::Sin);
        for (suffix, q) in [("0", Expr::num(0.0)), ("sin", sine.clone())] {
            let eta = FuzzyFn::new(sine.clone(), q, f.generator(), f.domain())
                .expect("domain already validated");
            out.push(TestFunction { label: format!("m={m},q={suffix}"), eta });
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogResidual {
    pub index: usize,
    pub label: String,
    /// `∫ [f ⊙ η ⊕ g ⊙ η′] dt`
    pub integral: LcfnView,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DbrForwardReport {
    pub test_functions: String,
    pub records: Vec<CatalogResidual>,
    pub tolerance: f64,
    pub max_residual: f64,
    pub detection_threshold: f64,
    /// Some residual exceeds the detection threshold, so `g′ = f` fails.
    pub violation_detected: bool,
    pub passed: bool,
}

/// `∫ [f ⊙ η ⊕ g ⊙ η′] dt = 0` for every test function in `catalog` (the
/// sine catalog when `None`). Holds when `g′ = f`.
pub fn dbr_forward_check(
    f: &FuzzyFn,
    g: &FuzzyFn,
    catalog: Option<&[TestFunction]>,
    spec: &QuadratureSpec,
) -> Result<DbrForwardReport, VariationalError> {
    let default;
    let (catalog, description) = match catalog {
        Some(c) => (c, "user-supplied test functions".to_string()),
        None => {
            default = sine_catalog(f);
            (&default[..], "sin(m*pi*(t - a)/(b - a)) for m = 1..4, with q = 0 and q = the same sine".to_string())
        }
    };
    let Interval { lo: a, hi: b } = f.domain();
    for (index, tf) in catalog.iter().enumerate() {
        for t in [a, b] {
            let v = tf.eta.at(t)?;
            let value = if v.r().abs() >= v.q().abs() { v.r() } else { v.q() };
            if value.abs() > BOUNDARY_TOL {
                return Err(VariationalError::CatalogBoundaryViolation { index, t, value });
            }
        }
    }
    let records = catalog
        .par_iter()
        .enumerate()
        .map(|(index, tf)| -> Result<CatalogResidual, CalculusError> {
            let integrand = f.cross(&tf.eta)?.add(&g.cross(&tf.eta.derivative())?)?;
            let integral = integrand.integrate(spec)?;
            Ok(CatalogResidual {
                index,
                label: tf.label.clone(),
                integral: integral.view(),
                residual: integral.norm(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let max_residual = records.iter().map(|r| r.residual).fold(0.0, f64::max);
    Ok(DbrForwardReport {
        test_functions: description,
        records,
        tolerance: FORWARD_TOL,
        max_residual,
        detection_threshold: DETECTION_THRESHOLD,
        violation_detected: max_residual > DETECTION_THRESHOLD,
        passed: max_residual < FORWARD_TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridValue {
    pub t: f64,
    pub r: f64,
    pub q: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualPoint {
    pub t: f64,
    /// `center(f(t) ⊖ u)`
    pub center_residual: f64,
    /// `max(|Δr|, |Δq|)` of `f(t) ⊖ u`
    pub coordinate_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReconstructionResult {
    /// `u = (b − a)⁻¹ ∫ f`
    pub u: LcfnView,
    /// `F(t) = ∫_a^t f` on the grid.
    pub accumulated: Vec<GridValue>,
    /// `g̃(t) = F(t) ⊕ u` on the grid.
    pub g_tilde: Vec<GridValue>,
    pub residual_grid: Vec<ResidualPoint>,
    pub max_center_residual: f64,
    pub max_coordinate_residual: f64,
    pub tolerance: f64,
    /// `f(t) ⊖ u` lies in the zero class on the whole grid.
    pub constant_modulo_zero_class: bool,
    /// `f(t) = u` on the whole grid.
    pub constant: bool,
}

/// Mean value `u`, accumulated integral `F` and residuals of `f ⊖ u` on an
/// `n`-point grid.
pub fn dbr_reconstruct(
    f: &FuzzyFn,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<ReconstructionResult, VariationalError> {
    if n < 2 {
        return Err(VariationalError::InvalidParams("grid needs at least 2 points".into()));
    }
    let d = f.domain();
    let gen = f.generator();
    let u = f.integrate(spec)?.scale(1.0 / d.width());
    let ts = uniform_grid(d, n);

    let cell_spec = spec.with_tol(spec.abs_tol / (n - 1) as f64);
    let cells = ts
        .par_windows(2)
        .map(|w| f.integrate_over(w[0], w[1], &cell_spec))
        .collect::<Result<Vec<_>, _>>()?;
    let mut accumulated = Vec::with_capacity(n);
    let mut acc = Lcfn::zero(gen);
    accumulated.push(GridValue { t: ts[0], r: 0.0, q: 0.0 });
    for (cell, &t) in cells.iter().zip(&ts[1..]) {
        acc = acc.add(cell).map_err(CalculusError::from)?;
        accumulated.push(GridValue { t, r: acc.r(), q: acc.q() });
    }
    let g_tilde = accumulated
        .iter()
        .map(|v| GridValue { t: v.t, r: v.r + u.r(), q: v.q + u.q() })
        .collect();

    let mut residual_grid = Vec::with_capacity(n);
    for &t in &ts {
        let diff = f.at(t)?.sub(&u).map_err(CalculusError::from)?;
        residual_grid.push(ResidualPoint {
            t,
            center_residual: diff.center(),
            coordinate_residual: diff.r().abs().max(diff.q().abs()),
        });
    }
    let max_center_residual = residual_grid.iter().map(|p| p.center_residual.abs()).fold(0.0, f64::max);
    let max_coordinate_residual =
        residual_grid.iter().map(|p| p.coordinate_residual).fold(0.0, f64::max);
    Ok(ReconstructionResult {
        u: u.view(),
        accumulated,
        g_tilde,
        residual_grid,
        max_center_residual,
        max_coordinate_residual,
        tolerance: RECONSTRUCT_TOL,
        constant_modulo_zero_class: max_center_residual <= RECONSTRUCT_TOL,
        constant: max_coordinate_residual <= RECONSTRUCT_TOL,
    })
}
