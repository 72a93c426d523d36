//! One-dimensional quadrature: adaptive Simpson (default) and adaptive
//! Gauss–Legendre panels (cross-check route).

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::expr::EvalError;

pub const DEFAULT_ABS_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_DEPTH: u32 = 40;
pub const DEFAULT_GL_POINTS: usize = 64;

/// Subdivision levels always taken before a convergence test is trusted.
const MIN_DEPTH: u32 = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("quadrature did not reach tolerance {abs_tol:e} within depth {max_depth} (near t = {near:e})")]
    NonConvergent { near: f64, abs_tol: f64, max_depth: u32 },
    #[error("integrand failed at t = {t}: {source}")]
    Eval { t: f64, source: EvalError },
    #[error("invalid quadrature settings: {0}")]
    InvalidSpec(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "name", content = "points")]
pub enum Method {
    AdaptiveSimpson,
    GaussLegendre(usize),
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::AdaptiveSimpson => f.write_str("simpson"),
            Method::GaussLegendre(n) => write!(f, "gauss-legendre:{n}"),
        }
    }
}

impl FromStr for Method {
    type Err = String;

    /// Accepts `simpson`, `gauss-legendre` and `gauss-legendre:N`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            None if s == "simpson" => Ok(Method::AdaptiveSimpson),
            None if s == "gauss-legendre" => Ok(Method::GaussLegendre(DEFAULT_GL_POINTS)),
            Some(("gauss-legendre", n)) => match n.parse::<usize>() {
                Ok(n) if n >= 1 => Ok(Method::GaussLegendre(n)),
                _ => Err(format!("invalid point count '{n}'")),
            },
            _ => Err(format!("unknown quadrature method '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSpec {
    pub method: Method,
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            method: Method::AdaptiveSimpson,
            abs_tol: DEFAULT_ABS_TOL,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

impl QuadratureSpec {
    pub fn gauss_legendre(n: usize) -> Self {
        QuadratureSpec { method: Method::GaussLegendre(n), ..Self::default() }
    }

    pub fn with_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn validate(&self) -> Result<(), QuadratureError> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(QuadratureError::InvalidSpec(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if let Method::GaussLegendre(0) = self.method {
            return Err(QuadratureError::InvalidSpec("Gauss-Legendre needs at least one point".into()));
        }
        Ok(())
    }

    /// Integrates `f` over `[a, b]`. Reversed bounds flip the sign.
    pub fn integrate<F>(&self, mut f: F, a: f64, b: f64) -> Result<f64, QuadratureError>
    where
        F: FnMut(f64) -> Result<f64, EvalError>,
    {
        self.validate()?;
        if a == b {
            return Ok(0.0);
        }
        if b < a {
            return self.integrate(f, b, a).map(|v| -v);
        }
        let mut eval = |t: f64| f(t).map_err(|source| QuadratureError::Eval { t, source });
        match self.method {
            Method::AdaptiveSimpson => simpson(&mut eval, a, b, self),
            Method::GaussLegendre(n) => {
                let rule = GaussLegendre::new(n);
                let whole = rule.apply(&mut eval, a, b)?;
                gl_adaptive(&rule, &mut eval, a, b, whole, self.abs_tol, 0, self)
            }
        }
    }
}

fn simpson<F>(f: &mut F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64, QuadratureError>
where
    F: FnMut(f64) -> Result<f64, QuadratureError>,
{
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a)?, f(m)?, f(b)?);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, [a, m, b], [fa, fm, fb], whole, spec.abs_tol, 0, spec)
}

fn simpson_step<F>(
    f: &mut F,
    [a, m, b]: [f64; 3],
    [fa, fm, fb]: [f64; 3],
    whole: f64,
    tol: f64,
    depth: u32,
    spec: &QuadratureSpec,
) -> Result<f64, QuadratureError>
where
    F: FnMut(f64) -> Result<f64, QuadratureError>,
{
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm)?, f(rm)?);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    let roundoff = 64.0 * f64::EPSILON * (left.abs() + right.abs());
    if depth >= MIN_DEPTH && (delta.abs() <= 15.0 * tol || delta.abs() <= roundoff) {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= spec.max_depth || lm <= a || rm >= b {
        return Err(QuadratureError::NonConvergent {
            near: m,
            abs_tol: spec.abs_tol,
            max_depth: spec.max_depth,
        });
    }
    let l = simpson_step(f, [a, lm, m], [fa, flm, fm], left, 0.5 * tol, depth + 1, spec)?;
    let r = simpson_step(f, [m, rm, b], [fm, frm, fb], right, 0.5 * tol, depth + 1, spec)?;
    Ok(l + r)
}

#[allow(clippy::too_many_arguments)]
fn gl_adaptive<F>(
    rule: &GaussLegendre,
    f: &mut F,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    spec: &QuadratureSpec,
) -> Result<f64, QuadratureError>
where
    F: FnMut(f64) -> Result<f64, QuadratureError>,
{
    let m = 0.5 * (a + b);
    let left = rule.apply(f, a, m)?;
    let right = rule.apply(f, m, b)?;
    let delta = left + right - whole;
    let roundoff = 64.0 * f64::EPSILON * (left.abs() + right.abs());
    if delta.abs() <= tol || delta.abs() <= roundoff {
        return Ok(left + right);
    }
    if depth >= spec.max_depth || m <= a || m >= b {
        return Err(QuadratureError::NonConvergent {
            near: m,
            abs_tol: spec.abs_tol,
            max_depth: spec.max_depth,
        });
    }
    let l = gl_adaptive(rule, f, a, m, left, 0.5 * tol, depth + 1, spec)?;
    let r = gl_adaptive(rule, f, m, b, right, 0.5 * tol, depth + 1, spec)?;
    Ok(l + r)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one point");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi's initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn apply<F, E>(&self, f: &mut F, a: f64, b: f64) -> Result<f64, E>
    where
        F: FnMut(f64) -> Result<f64, E>,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x)?;
        }
        Ok(half * sum)
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(f: fn(f64) -> f64) -> impl FnMut(f64) -> Result<f64, EvalError> {
        move |t| Ok(f(t))
    }

    #[test]
    fn simpson_basics() {
        let spec = QuadratureSpec::default();
        assert!((spec.integrate(ok(|t| t), 0.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        let v = spec.integrate(ok(f64::cos), 0.0, std::f64::consts::PI).unwrap();
        assert!(v.abs() < 1e-10);
        let v = spec.integrate(ok(f64::exp), 0.0, 2.0).unwrap();
        assert!((v - (2f64.exp() - 1.0)).abs() < 1e-10);
        let v = spec.integrate(ok(|t| t * t), 1.0, 0.0).unwrap();
        assert!((v + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn simpson_reports_non_convergence() {
        let spec = QuadratureSpec::default();
        let err = spec.integrate(ok(f64::sqrt), 0.0, 1.0).unwrap_err();
        assert!(matches!(err, QuadratureError::NonConvergent { .. }));
        let loose = QuadratureSpec::default().with_tol(1e-6);
        let v = loose.integrate(ok(f64::sqrt), 0.0, 1.0).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn gauss_legendre_rule() {
        for n in [1, 2, 5, 16, 64] {
            let rule = GaussLegendre::new(n);
            let sum: f64 = rule.weights().iter().sum();
            assert!((sum - 2.0).abs() < 1e-13, "n={n} sum={sum}");
            // exact for degree 2n-1
            let deg = 2 * n - 1;
            let mut f = |x: f64| Ok::<_, ()>(x.powi(deg as i32 - 1) * (deg as f64));
            let v = rule.apply(&mut f, 0.0, 1.0).unwrap();
            assert!((v - 1.0).abs() < 1e-12, "n={n} v={v}");
        }
    }

    #[test]
    fn gauss_legendre_route_agrees() {
        let gl = QuadratureSpec::gauss_legendre(64);
        let v = gl.integrate(ok(|t| (3.0 * t).sin() * t.exp()), 0.0, 2.0).unwrap();
        let s = QuadratureSpec::default()
            .integrate(ok(|t| (3.0 * t).sin() * t.exp()), 0.0, 2.0)
            .unwrap();
        assert!((v - s).abs() < 1e-10);
    }

    #[test]
    fn eval_errors_carry_location() {
        let spec = QuadratureSpec::default();
        let err = spec.integrate(|_| Err(EvalError::DivisionByZero), 0.0, 1.0).unwrap_err();
        assert_eq!(err, QuadratureError::Eval { t: 0.0, source: EvalError::DivisionByZero });
    }

    #[test]
    fn method_parsing() {
        assert_eq!("simpson".parse(), Ok(Method::AdaptiveSimpson));
        assert_eq!("gauss-legendre".parse(), Ok(Method::GaussLegendre(64)));
        assert_eq!("gauss-legendre:8".parse(), Ok(Method::GaussLegendre(8)));
        assert!("gauss-legendre:0".parse::<Method>().is_err());
        assert!("trapezoid".parse::<Method>().is_err());
    }
}
