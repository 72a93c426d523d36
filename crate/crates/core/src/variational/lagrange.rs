use rayon::prelude::*;
use serde::Serialize;

use super::dirac::{DiracKernel, DiracParams};
use super::{HarnessConfig, VariationalError};
use crate::calculus::{CalculusError, FuzzyFn};
use crate::expr::EvalError;
use crate::generator::Interval;
use crate::number::Lcfn;
use crate::quadrature::QuadratureSpec;

/// Centers at most this large in magnitude are treated as zero by the scan.
pub const CENTER_THRESHOLD: f64 = 1e-9;
pub const RECOVERY_TOL: f64 = 0.05;
pub const LIMIT_NOTE: &str =
    "b_k is compared against (r(t0) + a_m q(t0))^2, the center of f(t0) squared";

/// `z ↦ δ_k(z − t0)`, the window weight of a test function concentrated at `t0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mollifier {
    pub t0: f64,
    pub kernel: DiracKernel,
}

impl Mollifier {
    pub fn new(t0: f64, params: DiracParams) -> Result<Self, VariationalError> {
        Ok(Mollifier { t0, kernel: DiracKernel::new(params)? })
    }

    pub fn window(&self) -> Interval {
        let eps = self.kernel.epsilon();
        Interval::new(self.t0 - eps, self.t0 + eps)
    }

    pub fn weight(&self, z: f64) -> f64 {
        self.kernel.eval(z - self.t0)
    }

    /// The test function `η_k(z) = f(z)·δ_k(z − t0)`, componentwise.
    pub fn eta(&self, f: &FuzzyFn, z: f64) -> Result<Lcfn, CalculusError> {
        Ok(f.at(z)?.scale(self.weight(z)))
    }

    /// `∫ h(z) dz` over the window for an element-valued integrand.
    fn integrate<H>(&self, h: H, spec: &QuadratureSpec) -> Result<(f64, f64), CalculusError>
    where
        H: Fn(f64) -> Result<Lcfn, EvalError>,
    {
        let w = self.window();
        let r = spec.integrate(|z| h(z).map(|v| v.r()), w.lo, w.hi)?;
        let q = spec.integrate(|z| h(z).map(|v| v.q()), w.lo, w.hi)?;
        Ok((r, q))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub eta: Mollifier,
    /// Center of `∫ f ⊙ η_k`.
    pub b_k: f64,
    /// `(r(t0) + a_m q(t0))²`, the limit of `b_k`.
    pub limit: f64,
}

fn check_window(f: &FuzzyFn, t0: f64, epsilon: f64) -> Result<(), VariationalError> {
    let d = f.domain();
    if !(d.lo < t0 - epsilon && t0 + epsilon < d.hi) {
        return Err(VariationalError::WindowOutsideDomain { t0, epsilon, domain: d });
    }
    Ok(())
}

/// Builds `η_k(z) = f(z)δ_k(z − t0)` and evaluates `b_k = center ∫ f ⊙ η_k`.
pub fn lagrange_witness(
    f: &FuzzyFn,
    t0: f64,
    params: DiracParams,
    spec: &QuadratureSpec,
) -> Result<Witness, VariationalError> {
    check_window(f, t0, params.epsilon)?;
    let center = f.center_at(t0)?;
    if center == 0.0 {
        return Err(VariationalError::ZeroCenterAtT0 { t0 });
    }
    let eta = Mollifier::new(t0, params)?;
    let (r, q) = eta.integrate(
        |z| {
            let v = f.at_unchecked(z)?;
            Ok(v.cross(&v.scale(eta.weight(z))).expect("same generator"))
        },
        spec,
    )?;
    let b_k = Lcfn::new(r, q, f.generator()).center();
    Ok(Witness { eta, b_k, limit: center * center })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Recovery {
    pub t0: f64,
    /// `∫ f(z) ⊙ δ_k(z − t0) dz`, with `δ_k` embedded as a real.
    pub recovered: [f64; 2],
    pub direct: [f64; 2],
    /// `max(|Δr|, |Δq|)`
    pub error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Recovers `(r(t0), q(t0))` with the crisp mollifier `η̃_k = δ_k(· − t0) + 0A`.
pub fn lagrange_recover(
    f: &FuzzyFn,
    t0: f64,
    params: DiracParams,
    spec: &QuadratureSpec,
) -> Result<Recovery, VariationalError> {
    check_window(f, t0, params.epsilon)?;
    let eta = Mollifier::new(t0, params)?;
    let gen = f.generator();
    let (r, q) = eta.integrate(
        |z| {
            let v = f.at_unchecked(z)?;
            Ok(v.cross(&Lcfn::real(eta.weight(z), gen)).expect("same generator"))
        },
        spec,
    )?;
    let direct = f.at(t0)?;
    let error = (r - direct.r()).abs().max((q - direct.q()).abs());
    Ok(Recovery {
        t0,
        recovered: [r, q],
        direct: [direct.r(), direct.q()],
        error,
        tolerance: RECOVERY_TOL,
        passed: error <= RECOVERY_TOL,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRecord {
    pub index: usize,
    pub t0: f64,
    /// Window half-width after clamping to the domain.
    pub epsilon: f64,
    pub center: f64,
    /// `b_k` for each `k`, when the center is nonzero.
    pub b_k: Option<Vec<f64>>,
    pub witness_positive: Option<bool>,
    pub recovery: Recovery,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSummary {
    pub points: usize,
    pub admissible: usize,
    pub positive_witnesses: usize,
    pub recovery_failures: usize,
    pub max_recovery_error: f64,
    /// Every admissible point produced `b_k > 0` at the largest `k`.
    pub part_i_consistent: bool,
    pub part_ii_consistent: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LagrangeScanReport {
    pub config: HarnessConfig,
    pub note: &'static str,
    pub test_functions: &'static str,
    pub records: Vec<ScanRecord>,
    pub summary: ScanSummary,
}

/// Scans `t0` over the interior of the domain. Wherever the center of `f(t0)`
/// is nonzero the witness sequence must become positive; at every point the
/// crisp mollifier must recover `f(t0)`.
pub fn lagrange_scan(
    f: &FuzzyFn,
    config: &HarnessConfig,
    spec: &QuadratureSpec,
) -> Result<LagrangeScanReport, VariationalError> {
    config.validate()?;
    let d = f.domain();
    let n = config.grid;
    let step = d.width() / n as f64;
    let k_max = *config.k.iter().max().expect("validated nonempty");
    let records = (0..n)
        .into_par_iter()
        .map(|index| -> Result<ScanRecord, VariationalError> {
            let t0 = d.lo + step * (index as f64 + 0.5);
            let epsilon = config.epsilon.min(0.45 * (t0 - d.lo).min(d.hi - t0));
            let center = f.center_at(t0)?;
            let (b_k, witness_positive) = if center.abs() > CENTER_THRESHOLD {
                let b = config
                    .k
                    .iter()
                    .map(|&k| {
                        let params = DiracParams::new(epsilon, config.l, k);
                        lagrange_witness(f, t0, params, spec).map(|w| w.b_k)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let last = b[config.k.iter().position(|&k| k == k_max).unwrap_or(b.len() - 1)];
                (Some(b), Some(last > 0.0))
            } else {
                (None, None)
            };
            let recovery = lagrange_recover(f, t0, DiracParams::new(epsilon, config.l, k_max), spec)?;
            Ok(ScanRecord { index, t0, epsilon, center, b_k, witness_positive, recovery })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let admissible = records.iter().filter(|r| r.witness_positive.is_some()).count();
    let positive_witnesses = records.iter().filter(|r| r.witness_positive == Some(true)).count();
    let recovery_failures = records.iter().filter(|r| !r.recovery.passed).count();
    let max_recovery_error = records.iter().map(|r| r.recovery.error).fold(0.0, f64::max);
    let summary = ScanSummary {
        points: records.len(),
        admissible,
        positive_witnesses,
        recovery_failures,
        max_recovery_error,
        part_i_consistent: admissible == positive_witnesses,
        part_ii_consistent: recovery_failures == 0,
        passed: admissible == positive_witnesses && recovery_failures == 0,
    };
    Ok(LagrangeScanReport {
        config: config.clone(),
        note: LIMIT_NOTE,
        test_functions: "mollifier windows f(z)δ_k(z − t0) and δ_k(z − t0) + 0A",
        records,
        summary,
    })
}
