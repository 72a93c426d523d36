use serde::Serialize;

use super::VariationalError;
use crate::calculus::{CalculusError, FuzzyFn};
use crate::expr::{EvalError, Expr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    LocalMin,
    LocalMax,
    Inconclusive,
}

/// A stationary point of the center `g = r + a_m q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub t_star: f64,
    /// `g′(t*)`
    pub center_d1: f64,
    /// `g″(t*)`
    pub center_d2: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalSettings {
    pub grid: usize,
    /// Final bracket width of the bisection.
    pub root_tol: f64,
    pub classify_tol: f64,
    /// `|g′|` below which a local extremum of `g′` counts as a double root.
    pub touch_tol: f64,
}

impl Default for CriticalSettings {
    fn default() -> Self {
        CriticalSettings { grid: 1024, root_tol: 1e-12, classify_tol: 1e-9, touch_tol: 1e-9 }
    }
}

pub fn critical_points(f: &FuzzyFn) -> Result<Vec<CriticalPoint>, VariationalError> {
    critical_points_with(f, &CriticalSettings::default())
}

struct Strict<'a>(&'a Expr);

impl Strict<'_> {
    fn at(&self, t: f64) -> Result<f64, CalculusError> {
        self.0.eval_strict(t, None).map_err(|source| match source {
            EvalError::NonDifferentiable => CalculusError::NonDifferentiable { t },
            source => CalculusError::Eval { t, source },
        })
    }
}

/// Scans `g′` on a uniform grid for sign changes and for double roots (where
/// `g″` changes sign while `g′` is within `touch_tol` of zero), refines each
/// by bisection and classifies by the sign of `g″`.
pub fn critical_points_with(
    f: &FuzzyFn,
    settings: &CriticalSettings,
) -> Result<Vec<CriticalPoint>, VariationalError> {
    if settings.grid < 2 || settings.root_tol.is_nan() || settings.root_tol <= 0.0 {
        return Err(VariationalError::InvalidParams("grid must have 2 points and root_tol must be positive".into()));
    }
    let g = f.center_expr();
    let d1 = g.diff_n(1).map_err(CalculusError::from)?;
    let d2 = g.diff_n(2).map_err(CalculusError::from)?;
    let (g1, g2) = (Strict(&d1), Strict(&d2));

    let ts = f.grid(settings.grid);
    let v1 = ts.iter().map(|&t| g1.at(t)).collect::<Result<Vec<_>, _>>()?;
    let v2 = ts.iter().map(|&t| g2.at(t)).collect::<Result<Vec<_>, _>>()?;

    let mut roots = Vec::new();
    for i in 0..ts.len() {
        if v1[i] == 0.0 {
            roots.push(ts[i]);
        }
        if i + 1 == ts.len() {
            break;
        }
        let (a, b) = (ts[i], ts[i + 1]);
        if v1[i] * v1[i + 1] < 0.0 {
            roots.push(bisect(&g1, a, b, v1[i], settings.root_tol)?);
        }
        if v2[i] * v2[i + 1] < 0.0 {
            let s = bisect(&g2, a, b, v2[i], settings.root_tol)?;
            if g1.at(s)?.abs() <= settings.touch_tol {
                roots.push(s);
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|b, a| (*b - *a).abs() <= 10.0 * settings.root_tol);

    roots
        .into_iter()
        .map(|t| {
            let center_d1 = g1.at(t)?;
            let center_d2 = g2.at(t)?;
            let verdict = if center_d2 > settings.classify_tol {
                Verdict::LocalMin
            } else if center_d2 < -settings.classify_tol {
                Verdict::LocalMax
            } else {
                Verdict::Inconclusive
            };
            Ok(CriticalPoint { t_star: t, center_d1, center_d2, verdict })
        })
        .collect()
}

fn bisect(h: &Strict<'_>, mut lo: f64, mut hi: f64, h_lo: f64, width: f64) -> Result<f64, CalculusError> {
    let lo_sign = h_lo.is_sign_positive();
    let mut f_lo = h_lo;
    let mut f_hi = h.at(hi)?;
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = h.at(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.is_sign_positive() == lo_sign {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
    }
    Ok(if f_lo.abs() <= f_hi.abs() { lo } else { hi })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderStatus {
    /// Every sample satisfies the claimed order.
    Holds,
    /// Violations occur only beyond the basin where `g′` keeps the sign
    /// pattern of the claimed extremum.
    ViolationsBeyondNeighborhood,
    /// A sample inside the basin violates the claim.
    Fails,
    /// Inconclusive critical point; nothing to check.
    NoClaim,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderViolation {
    pub z: f64,
    pub within_neighborhood: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalOrderReport {
    pub t_star: f64,
    pub verdict: Verdict,
    pub radius: f64,
    pub samples: usize,
    /// Half-widths of the basin left and right of `t*`, as far as sampled.
    pub neighborhood: [f64; 2],
    pub status: OrderStatus,
    pub first_violation: Option<OrderViolation>,
    pub violations: usize,
}

impl LocalOrderReport {
    pub fn passed(&self) -> bool {
        matches!(self.status, OrderStatus::Holds | OrderStatus::ViolationsBeyondNeighborhood | OrderStatus::NoClaim)
    }
}

/// Checks `f(t*) ≤ f(z)` (minimum) or `f(z) ≤ f(t*)` (maximum) in the total
/// order at `n` points symmetric about `t*` within `radius`.
pub fn verify_local_order(
    f: &FuzzyFn,
    cp: &CriticalPoint,
    radius: f64,
    n: usize,
) -> Result<LocalOrderReport, VariationalError> {
    let mut report = LocalOrderReport {
        t_star: cp.t_star,
        verdict: cp.verdict,
        radius,
        samples: 0,
        neighborhood: [0.0, 0.0],
        status: OrderStatus::NoClaim,
        first_violation: None,
        violations: 0,
    };
    if cp.verdict == Verdict::Inconclusive {
        return Ok(report);
    }
    let want_min = cp.verdict == Verdict::LocalMin;
    let d1 = f.center_expr().diff_n(1).map_err(CalculusError::from)?;
    let g1 = Strict(&d1);
    let domain = f.domain();
    let here = f.at(cp.t_star)?;

    let mut zs: Vec<f64> = (0..n)
        .map(|j| cp.t_star + radius * (-1.0 + (2 * j + 1) as f64 / n as f64))
        .filter(|&z| domain.lo < z && z < domain.hi)
        .collect();
    // Walk outward so the basin edge on each side is the first sample where
    // g′ stops pointing away from (min) or toward (max) t*.
    zs.sort_by(|a, b| (a - cp.t_star).abs().total_cmp(&(b - cp.t_star).abs()));
    let mut open = [true, true];
    let mut neighborhood = [0.0f64, 0.0f64];
    let mut violations = Vec::new();
    for &z in &zs {
        let side = usize::from(z > cp.t_star);
        let dist = (z - cp.t_star).abs();
        if open[side] {
            let slope = g1.at(z)?;
            let outward = if side == 1 { slope } else { -slope };
            let ok = if want_min { outward >= 0.0 } else { outward <= 0.0 };
            if ok {
                neighborhood[side] = dist;
            } else {
                open[side] = false;
            }
        }
        let there = f.at(z)?;
        let holds = if want_min { here.le(&there) } else { there.le(&here) }
            .map_err(CalculusError::from)?;
        if !holds {
            violations.push(OrderViolation { z, within_neighborhood: dist <= neighborhood[side] });
        }
    }
    report.samples = zs.len();
    report.neighborhood = neighborhood;
    report.violations = violations.len();
    report.status = if violations.is_empty() {
        OrderStatus::Holds
    } else if violations.iter().any(|v| v.within_neighborhood) {
        OrderStatus::Fails
    } else {
        OrderStatus::ViolationsBeyondNeighborhood
    };
    report.first_violation = violations
        .into_iter()
        .min_by(|a, b| a.z.total_cmp(&b.z));
    Ok(report)
}
