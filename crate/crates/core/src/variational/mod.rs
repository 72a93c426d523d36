//! Optimality conditions and the fundamental lemmas of the calculus of
//! variations, checked numerically.

mod critical;
mod dbr;
mod dirac;
mod lagrange;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calculus::CalculusError;
use crate::generator::Interval;
use crate::quadrature::QuadratureError;

pub use critical::{
    critical_points, critical_points_with, verify_local_order, CriticalPoint, CriticalSettings,
    LocalOrderReport, OrderStatus, OrderViolation, Verdict,
};
pub use dbr::{
    dbr_forward_check, dbr_reconstruct, sine_catalog, CatalogResidual, DbrForwardReport,
    GridValue, ReconstructionResult, ResidualPoint, TestFunction, DETECTION_THRESHOLD,
    FORWARD_TOL, RECONSTRUCT_TOL,
};
pub use dirac::{DiracKernel, DiracParams};
pub use lagrange::{
    lagrange_recover, lagrange_scan, lagrange_witness, LagrangeScanReport, Mollifier,
    Recovery, ScanRecord, ScanSummary, Witness, CENTER_THRESHOLD, LIMIT_NOTE, RECOVERY_TOL,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VariationalError {
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("window [{}, {}] around t0 = {t0} is not strictly inside [{}, {}]",
        t0 - epsilon, t0 + epsilon, domain.lo, domain.hi)]
    WindowOutsideDomain { t0: f64, epsilon: f64, domain: Interval },
    #[error("f(t0) has zero center at t0 = {t0}; no witness exists")]
    ZeroCenterAtT0 { t0: f64 },
    #[error("test function {index} does not vanish at t = {t} (value {value:e})")]
    CatalogBoundaryViolation { index: usize, t: f64, value: f64 },
}

impl From<QuadratureError> for VariationalError {
    fn from(e: QuadratureError) -> Self {
        VariationalError::Calculus(CalculusError::Quadrature(e))
    }
}

/// Settings shared by the mollifier-based harnesses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HarnessConfig {
    pub epsilon: f64,
    pub l: u32,
    pub k: Vec<u32>,
    pub grid: usize,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig { epsilon: 0.2, l: 1, k: vec![1, 2, 4, 8, 16], grid: 1024 }
    }
}

impl HarnessConfig {
    pub fn validate(&self) -> Result<(), VariationalError> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(VariationalError::InvalidParams(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.k.is_empty() || self.k.contains(&0) {
            return Err(VariationalError::InvalidParams("k must be a nonempty list of positive integers".into()));
        }
        if self.grid < 2 {
            return Err(VariationalError::InvalidParams("grid needs at least 2 points".into()));
        }
        Ok(())
    }
}
