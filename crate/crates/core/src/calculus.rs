//! Functions `t ↦ r(t) + q(t)A` on a closed interval: componentwise
//! derivative and integral, and numerical checks of the calculus identities.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::expr::{DiffOrderError, EvalError, Expr, ParseError, Var};
use crate::generator::{GeneratorA, Interval};
use crate::number::{Lcfn, LcfnError, LcfnView};
use crate::quadrature::{QuadratureError, QuadratureSpec};

pub const FTC_TOL: f64 = 1e-8;
pub const FTC_SPOT_TOL: f64 = 1e-6;
pub const PRODUCT_RULE_TOL: f64 = 1e-8;
pub const IBP_TOL: f64 = 1e-8;
pub const INTERCHANGE_TOL: f64 = 1e-6;
pub const SQUARE_GRID: usize = 2048;
pub const SQUARE_THRESHOLD: f64 = 1e-9;

const FTC_SPOTS: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CalculusError {
    #[error("invalid domain [{a}, {b}]")]
    InvalidDomain { a: f64, b: f64 },
    #[error("t = {t} is outside the domain [{}, {}]", domain.lo, domain.hi)]
    OutsideDomain { t: f64, domain: Interval },
    #[error("not differentiable at t = {t}")]
    NonDifferentiable { t: f64 },
    #[error("evaluation failed at t = {t}: {source}")]
    Eval { t: f64, source: EvalError },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Lcfn(#[from] LcfnError),
    #[error(transparent)]
    DiffOrder(#[from] DiffOrderError),
    #[error("functions are defined on different domains")]
    DomainMismatch,
}

impl CalculusError {
    fn eval(t: f64, source: EvalError) -> Self {
        match source {
            EvalError::NonDifferentiable => CalculusError::NonDifferentiable { t },
            source => CalculusError::Eval { t, source },
        }
    }
}

/// `t ↦ r(t) + q(t)A` on `[a, b]`.
#[derive(Debug, Clone)]
pub struct FuzzyFn {
    r: Expr,
    q: Expr,
    gen: Arc<GeneratorA>,
    domain: Interval,
}

fn check_domain(domain: Interval) -> Result<Interval, CalculusError> {
    if domain.lo.is_finite() && domain.hi.is_finite() && domain.lo < domain.hi {
        Ok(domain)
    } else {
        Err(CalculusError::InvalidDomain { a: domain.lo, b: domain.hi })
    }
}

impl FuzzyFn {
    pub fn new(r: Expr, q: Expr, gen: &Arc<GeneratorA>, domain: Interval) -> Result<Self, CalculusError> {
        Ok(FuzzyFn { r, q, gen: Arc::clone(gen), domain: check_domain(domain)? })
    }

    pub fn parse(r: &str, q: &str, gen: &Arc<GeneratorA>, domain: Interval) -> Result<Self, CalculusError> {
        Self::new(Expr::parse(r)?, Expr::parse(q)?, gen, domain)
    }

    pub fn constant(value: &Lcfn, domain: Interval) -> Result<Self, CalculusError> {
        Self::new(Expr::num(value.r()), Expr::num(value.q()), value.generator(), domain)
    }

    pub fn r(&self) -> &Expr {
        &self.r
    }

    pub fn q(&self) -> &Expr {
        &self.q
    }

    pub fn generator(&self) -> &Arc<GeneratorA> {
        &self.gen
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn with_domain(&self, domain: Interval) -> Result<Self, CalculusError> {
        Self::new(self.r.clone(), self.q.clone(), &self.gen, domain)
    }

    /// `g(t) = r(t) + a_m q(t)`, the center of `f(t)`.
    pub fn center_expr(&self) -> Expr {
        self.r.clone().add(Expr::num(self.gen.peak()).mul(self.q.clone()))
    }

    /// Evaluates `f(t)`; `t` must lie in the domain.
    pub fn at(&self, t: f64) -> Result<Lcfn, CalculusError> {
        if !self.domain.contains(t) {
            return Err(CalculusError::OutsideDomain { t, domain: self.domain });
        }
        self.at_unchecked(t).map_err(|e| CalculusError::eval(t, e))
    }

    pub(crate) fn at_unchecked(&self, t: f64) -> Result<Lcfn, EvalError> {
        Ok(Lcfn::new(self.r.eval(t)?, self.q.eval(t)?, &self.gen))
    }

    pub fn center_at(&self, t: f64) -> Result<f64, CalculusError> {
        self.at(t).map(|v| v.center())
    }

    /// The derivative function `r′ + q′A`.
    pub fn derivative(&self) -> FuzzyFn {
        FuzzyFn {
            r: self.r.diff(Var::T),
            q: self.q.diff(Var::T),
            gen: Arc::clone(&self.gen),
            domain: self.domain,
        }
    }

    pub fn nth_derivative(&self, order: usize) -> Result<FuzzyFn, CalculusError> {
        Ok(FuzzyFn {
            r: self.r.diff_n(order)?,
            q: self.q.diff_n(order)?,
            gen: Arc::clone(&self.gen),
            domain: self.domain,
        })
    }

    /// `f′(t)` at an interior point. A kink of `abs` at `t` is an error.
    pub fn deriv(&self, t: f64) -> Result<Lcfn, CalculusError> {
        if !(self.domain.lo < t && t < self.domain.hi) {
            return Err(CalculusError::OutsideDomain { t, domain: self.domain });
        }
        let d = self.derivative();
        let r = d.r.eval_strict(t, None).map_err(|e| CalculusError::eval(t, e))?;
        let q = d.q.eval_strict(t, None).map_err(|e| CalculusError::eval(t, e))?;
        Ok(Lcfn::new(r, q, &self.gen))
    }

    fn check(&self, other: &FuzzyFn) -> Result<(), CalculusError> {
        if !(Arc::ptr_eq(&self.gen, &other.gen) || *self.gen == *other.gen) {
            return Err(LcfnError::GeneratorMismatch.into());
        }
        if self.domain != other.domain {
            return Err(CalculusError::DomainMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &FuzzyFn) -> Result<FuzzyFn, CalculusError> {
        self.check(other)?;
        Ok(FuzzyFn {
            r: self.r.clone().add(other.r.clone()),
            q: self.q.clone().add(other.q.clone()),
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &FuzzyFn) -> Result<FuzzyFn, CalculusError> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, lambda: f64) -> FuzzyFn {
        FuzzyFn {
            r: Expr::num(lambda).mul(self.r.clone()),
            q: Expr::num(lambda).mul(self.q.clone()),
            ..self.clone()
        }
    }

    /// `t ↦ f(t) ⊙ g(t)` with the cross-product coordinates written out as
    /// expressions, so it can be differentiated symbolically.
    pub fn cross(&self, other: &FuzzyFn) -> Result<FuzzyFn, CalculusError> {
        self.check(other)?;
        let am = Expr::num(self.gen.peak());
        let (rb, qb, rc, qc) = (&self.r, &self.q, &other.r, &other.q);
        let amqb = am.clone().mul(qb.clone());
        let amqc = am.mul(qc.clone());
        let r = rb.clone().mul(rc.clone()).sub(amqb.clone().mul(amqc.clone()));
        let mixed = rb.clone().mul(qc.clone()).add(rc.clone().mul(qb.clone()));
        let q = mixed.add(amqb.mul(qc.clone()).add(amqc.mul(qb.clone())));
        Ok(FuzzyFn { r, q, ..self.clone() })
    }

    /// `∫_a^b f(t) dt`, componentwise.
    pub fn integrate(&self, spec: &QuadratureSpec) -> Result<Lcfn, CalculusError> {
        self.integrate_over(self.domain.lo, self.domain.hi, spec)
    }

    /// `∫_lo^hi f(t) dt` for a sub-interval of the domain.
    pub fn integrate_over(&self, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<Lcfn, CalculusError> {
        for t in [lo, hi] {
            if !self.domain.contains(t) {
                return Err(CalculusError::OutsideDomain { t, domain: self.domain });
            }
        }
        let r = spec.integrate(|t| self.r.eval(t), lo, hi)?;
        let q = spec.integrate(|t| self.q.eval(t), lo, hi)?;
        Ok(Lcfn::new(r, q, &self.gen))
    }

    /// `n` equally spaced points covering the domain, endpoints included.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        uniform_grid(self.domain, n)
    }
}

pub(crate) fn uniform_grid(domain: Interval, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (domain.lo + domain.hi)],
        _ => {
            let step = domain.width() / (n - 1) as f64;
            (0..n)
                .map(|i| if i + 1 == n { domain.hi } else { domain.lo + step * i as f64 })
                .collect()
        }
    }
}

/// Deterministic, well-spread interior points of `domain`, kept `margin`
/// (as a fraction of the width) away from the ends.
pub(crate) fn spread_points(domain: Interval, n: usize, margin: f64) -> Vec<f64> {
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    let inner = 1.0 - 2.0 * margin;
    (0..n)
        .map(|k| {
            let u = (0.5 + golden * k as f64).fract();
            domain.lo + domain.width() * (margin + inner * u)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SpotCheck {
    pub t: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FtcReport {
    pub integral_of_derivative: LcfnView,
    pub endpoint_difference: LcfnView,
    pub residual: f64,
    pub tolerance: f64,
    /// `‖F′(t) ⊖ f(t)‖` for `F(t) = ∫_a^t f`.
    pub spot_checks: Vec<SpotCheck>,
    pub spot_tolerance: f64,
    pub passed: bool,
}

/// `∫_a^b f′ = f(b) ⊖ f(a)`, plus spot checks that `F(t) = ∫_a^t f` has
/// derivative `f`.
pub fn ftc_check(f: &FuzzyFn, spec: &QuadratureSpec) -> Result<FtcReport, CalculusError> {
    let Interval { lo: a, hi: b } = f.domain;
    let lhs = f.derivative().integrate(spec)?;
    let rhs = f.at(b)?.sub(&f.at(a)?)?;
    let residual = lhs.sub(&rhs)?.norm();

    let h = 1e-2 * f.domain.width();
    let mut spot_checks = Vec::with_capacity(FTC_SPOTS);
    for t in spread_points(f.domain, FTC_SPOTS, 0.1) {
        // Symmetric quotient (F(t+h) − F(t−h))/2h = (1/2h)∫_{t−h}^{t+h} f,
        // with one Richardson step.
        let quotient = |h: f64| -> Result<Lcfn, CalculusError> {
            Ok(f.integrate_over(t - h, t + h, spec)?.scale(0.5 / h))
        };
        let coarse = quotient(h)?;
        let fine = quotient(0.5 * h)?;
        let estimate = fine.scale(4.0 / 3.0).sub(&coarse.scale(1.0 / 3.0))?;
        let residual = estimate.sub(&f.at(t)?)?.norm();
        spot_checks.push(SpotCheck { t, residual });
    }
    let passed = residual < FTC_TOL && spot_checks.iter().all(|s| s.residual < FTC_SPOT_TOL);
    Ok(FtcReport {
        integral_of_derivative: lhs.view(),
        endpoint_difference: rhs.view(),
        residual,
        tolerance: FTC_TOL,
        spot_checks,
        spot_tolerance: FTC_SPOT_TOL,
        passed,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ProductRuleReport {
    pub t: f64,
    /// `(f ⊙ g)′(t)`, from the symbolic derivative of the product's coordinates.
    pub derivative_of_product: LcfnView,
    /// `f(t) ⊙ g′(t) ⊕ f′(t) ⊙ g(t)`
    pub expanded: LcfnView,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

pub fn product_rule_check(f: &FuzzyFn, g: &FuzzyFn, t: f64) -> Result<ProductRuleReport, CalculusError> {
    let lhs = f.cross(g)?.deriv(t)?;
    let rhs = f.at(t)?.cross(&g.deriv(t)?)?.add(&f.deriv(t)?.cross(&g.at(t)?)?)?;
    let residual = lhs.sub(&rhs)?.norm();
    Ok(ProductRuleReport {
        t,
        derivative_of_product: lhs.view(),
        expanded: rhs.view(),
        residual,
        tolerance: PRODUCT_RULE_TOL,
        passed: residual < PRODUCT_RULE_TOL,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct IbpReport {
    /// `∫ f ⊙ g′`
    pub lhs: LcfnView,
    /// `(f ⊙ g)(b) ⊖ (f ⊙ g)(a) ⊖ ∫ f′ ⊙ g`
    pub rhs: LcfnView,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

pub fn ibp_check(f: &FuzzyFn, g: &FuzzyFn, spec: &QuadratureSpec) -> Result<IbpReport, CalculusError> {
    let Interval { lo: a, hi: b } = f.domain;
    let lhs = f.cross(&g.derivative())?.integrate(spec)?;
    let fg = f.cross(g)?;
    let boundary = fg.at(b)?.sub(&fg.at(a)?)?;
    let rhs = boundary.sub(&f.derivative().cross(g)?.integrate(spec)?)?;
    let residual = lhs.sub(&rhs)?.norm();
    Ok(IbpReport {
        lhs: lhs.view(),
        rhs: rhs.view(),
        residual,
        tolerance: IBP_TOL,
        passed: residual < IBP_TOL,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SquareIntegralReport {
    /// `∫ f(t)² dt`
    pub integral: LcfnView,
    /// `∫ (r + a_m q)² dt`, integrated directly.
    pub center_direct: f64,
    pub route_gap: f64,
    pub abs_tol: f64,
    pub nonnegative: bool,
    pub grid_points: usize,
    pub threshold: f64,
    /// Fraction of grid points where `|r(t) + a_m q(t)| > threshold`.
    pub violation_fraction: f64,
    pub passed: bool,
}

/// `∫ f(t)² dt` with its center cross-checked against `∫ (r + a_m q)²`.
pub fn square_integral(f: &FuzzyFn, spec: &QuadratureSpec) -> Result<SquareIntegralReport, CalculusError> {
    let Interval { lo: a, hi: b } = f.domain;
    // Both routes carry quadrature error; the center weights the q error by |a_m|.
    let inner = (*spec).with_tol(spec.abs_tol / (4.0 * (2.0 + f.gen.peak().abs())));
    let square_at = |t: f64| f.at_unchecked(t).map(|v| v.square());
    let r = inner.integrate(|t| square_at(t).map(|s| s.r()), a, b)?;
    let q = inner.integrate(|t| square_at(t).map(|s| s.q()), a, b)?;
    let integral = Lcfn::new(r, q, &f.gen);
    let center = f.center_expr();
    let center_direct = inner.integrate(|t| center.eval(t).map(|g| g * g), a, b)?;
    let mut violations = 0usize;
    for t in f.grid(SQUARE_GRID) {
        if f.center_at(t)?.abs() > SQUARE_THRESHOLD {
            violations += 1;
        }
    }
    let route_gap = (integral.center() - center_direct).abs();
    let nonnegative = integral.center() >= -spec.abs_tol;
    Ok(SquareIntegralReport {
        integral: integral.view(),
        center_direct,
        route_gap,
        abs_tol: spec.abs_tol,
        nonnegative,
        grid_points: SQUARE_GRID,
        threshold: SQUARE_THRESHOLD,
        violation_fraction: violations as f64 / SQUARE_GRID as f64,
        passed: nonnegative && route_gap <= spec.abs_tol.max(1e-12 * center_direct.abs()),
    })
}

/// `(t, ε) ↦ r(t, ε) + q(t, ε)A` on `[a, b]`.
#[derive(Debug, Clone)]
pub struct TwoParamFn {
    r: Expr,
    q: Expr,
    gen: Arc<GeneratorA>,
    domain: Interval,
}

impl TwoParamFn {
    pub fn new(r: Expr, q: Expr, gen: &Arc<GeneratorA>, domain: Interval) -> Result<Self, CalculusError> {
        Ok(TwoParamFn { r, q, gen: Arc::clone(gen), domain: check_domain(domain)? })
    }

    /// Parses both components, which may use `t` and `eps`.
    pub fn parse(r: &str, q: &str, gen: &Arc<GeneratorA>, domain: Interval) -> Result<Self, CalculusError> {
        Self::new(Expr::parse_with_eps(r)?, Expr::parse_with_eps(q)?, gen, domain)
    }

    /// `t ↦ g(t, ε)`.
    pub fn at_eps(&self, eps: f64) -> FuzzyFn {
        let e = Expr::num(eps);
        FuzzyFn {
            r: self.r.substitute(Var::Eps, &e),
            q: self.q.substitute(Var::Eps, &e),
            gen: Arc::clone(&self.gen),
            domain: self.domain,
        }
    }

    /// `∂g/∂ε` as a two-parameter function.
    pub fn partial_eps(&self) -> TwoParamFn {
        TwoParamFn { r: self.r.diff(Var::Eps), q: self.q.diff(Var::Eps), ..self.clone() }
    }

    fn eval(&self, t: f64, eps: f64) -> Result<(f64, f64), EvalError> {
        Ok((self.r.eval_at(t, eps)?, self.q.eval_at(t, eps)?))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InterchangeReport {
    pub eps0: f64,
    /// `d/dε ∫ g(t, ε) dt` at `ε₀`, by central differences in `ε`.
    pub derivative_of_integral: LcfnView,
    /// `∫ ∂g/∂ε(t, ε₀) dt`
    pub integral_of_partial: LcfnView,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Differentiation in `ε` under the integral sign.
pub fn interchange_check(
    g: &TwoParamFn,
    eps0: f64,
    spec: &QuadratureSpec,
) -> Result<InterchangeReport, CalculusError> {
    let Interval { lo: a, hi: b } = g.domain;
    let h = 1e-3 * eps0.abs().max(1.0);
    // The ε-difference quotient is formed under the integral, which by
    // linearity equals the quotient of integrals without compounding
    // quadrature error by 1/h.
    let quotient = |t: f64, component: usize| -> Result<f64, EvalError> {
        let pick = |v: (f64, f64)| if component == 0 { v.0 } else { v.1 };
        let d = |h: f64| -> Result<f64, EvalError> {
            Ok((pick(g.eval(t, eps0 + h)?) - pick(g.eval(t, eps0 - h)?)) / (2.0 * h))
        };
        let coarse = d(h)?;
        let fine = d(0.5 * h)?;
        Ok((4.0 * fine - coarse) / 3.0)
    };
    let lhs_r = spec.integrate(|t| quotient(t, 0), a, b)?;
    let lhs_q = spec.integrate(|t| quotient(t, 1), a, b)?;
    let lhs = Lcfn::new(lhs_r, lhs_q, &g.gen);
    let rhs = g.partial_eps().at_eps(eps0).integrate(spec)?;
    let residual = lhs.sub(&rhs)?.norm();
    Ok(InterchangeReport {
        eps0,
        derivative_of_integral: lhs.view(),
        integral_of_partial: rhs.view(),
        residual,
        tolerance: INTERCHANGE_TOL,
        passed: residual < INTERCHANGE_TOL,
    })
}
