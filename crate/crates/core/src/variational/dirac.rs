use std::f64::consts::PI;

use serde::Serialize;

use super::VariationalError;
use crate::expr::EvalError;
use crate::quadrature::{QuadratureError, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiracParams {
    pub epsilon: f64,
    /// Number of continuous derivatives that vanish at `±ε`.
    pub l: u32,
    pub k: u32,
}

impl DiracParams {
    pub fn new(epsilon: f64, l: u32, k: u32) -> Self {
        DiracParams { epsilon, l, k }
    }

    /// Exponent `(l + 1)k` of the cosine bump.
    pub fn power(&self) -> u32 {
        (self.l + 1) * self.k
    }
}

/// `δ_k(x) = c_k⁻¹ [(cos(πx/ε) + 1)/2]^{(l+1)k}` on `(−ε, ε)`, zero elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiracKernel {
    params: DiracParams,
    c_k: f64,
}

impl DiracKernel {
    pub fn new(params: DiracParams) -> Result<Self, VariationalError> {
        let DiracParams { epsilon, k, .. } = params;
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(VariationalError::InvalidParams(format!("epsilon must be positive, got {epsilon}")));
        }
        if k == 0 {
            return Err(VariationalError::InvalidParams("k must be at least 1".into()));
        }
        let p = params.power() as i32;
        let spec = QuadratureSpec::default().with_tol(1e-14 * epsilon);
        let c_k = spec.integrate(|x| Ok::<_, EvalError>(bump(x, epsilon, p)), -epsilon, epsilon)?;
        if c_k.is_nan() || c_k <= 0.0 {
            return Err(QuadratureError::InvalidSpec(format!("kernel mass underflowed for power {p}")).into());
        }
        Ok(DiracKernel { params, c_k })
    }

    pub fn params(&self) -> DiracParams {
        self.params
    }

    pub fn epsilon(&self) -> f64 {
        self.params.epsilon
    }

    /// The normalization `c_k = ∫ [(cos(πx/ε) + 1)/2]^{(l+1)k} dx`.
    pub fn c_k(&self) -> f64 {
        self.c_k
    }

    pub fn eval(&self, x: f64) -> f64 {
        bump(x, self.params.epsilon, self.params.power() as i32) / self.c_k
    }

    /// `∫ φ(x) δ_k(x) dx` over the support.
    pub fn pair_with<F>(&self, mut phi: F, spec: &QuadratureSpec) -> Result<f64, QuadratureError>
    where
        F: FnMut(f64) -> Result<f64, EvalError>,
    {
        let eps = self.params.epsilon;
        spec.integrate(|x| Ok(phi(x)? * self.eval(x)), -eps, eps)
    }
}

// Evaluated on |x| so that evenness holds bit for bit.
fn bump(x: f64, epsilon: f64, p: i32) -> f64 {
    let a = x.abs();
    if a >= epsilon {
        return 0.0;
    }
    (0.5 * ((PI * a / epsilon).cos() + 1.0)).powi(p)
}
