//! The generator fuzzy number `A` that spans the space of linearly correlated
//! fuzzy numbers.
//!
//! Generators are restricted to piecewise-linear membership functions. With
//! that restriction every query the rest of the crate needs (the peak, the
//! α-level endpoints, the asymmetry certificate) is decided exactly from the
//! knot list instead of by sampling.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default threshold below which a reflected branch counts as a mirror image.
pub const DEFAULT_SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("knots must be sorted strictly by abscissa (violated at index {index})")]
    UnsortedKnots { index: usize },
    #[error("no knot reaches membership 1")]
    NotNormal,
    #[error("{count} knots have membership 1; the 1-level must be a single point")]
    PlateauAtOne { count: usize },
    #[error("membership is mirror-symmetric about the peak (max deviation {deviation:e})")]
    Symmetric { deviation: f64 },
    #[error("first and last knots must have membership 0 (bounded support)")]
    OpenSupport,
    #[error("membership must rise to the peak and fall after it (violated at index {index})")]
    NotUnimodal { index: usize },
    #[error("interior knot {index} has membership 0")]
    InteriorZero { index: usize },
    #[error("membership {value} at index {index} is outside [0, 1]")]
    MembershipOutOfRange { index: usize, value: f64 },
    #[error("knot {index} is not finite")]
    NonFinite { index: usize },
    #[error("a generator needs at least three knots, got {0}")]
    TooFewKnots(usize),
    #[error("a triangular generator has exactly three knots, got {0}")]
    NotTriangular(usize),
    #[error("alpha {0} is outside [0, 1]")]
    AlphaOutOfRange(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    Triangular,
    PiecewiseLinear,
}

/// A closed real interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }
}

/// JSON form of a generator, as read from `--gen <path>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeneratorConfig {
    Triangular { left: f64, peak: f64, right: f64 },
    PiecewiseLinear { knots: Vec<[f64; 2]> },
}

/// Summary of a successful validation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationReport {
    pub peak: f64,
    pub peak_index: usize,
    pub support: Interval,
    /// Largest gap between the left branch reflected about the peak and the
    /// right branch, over the shared level grid. Zero means mirror symmetry.
    pub symmetry_deviation: f64,
}

/// The asymmetric generator `A`.
///
/// Immutable once built; every constructor validates.
#[derive(Debug, Clone)]
pub struct GeneratorA {
    kind: GeneratorKind,
    knots: Vec<(f64, f64)>,
    peak_index: usize,
    peak: f64,
    symmetry_deviation: f64,
    symmetry_tol: f64,
    fingerprint: u64,
}

impl PartialEq for GeneratorA {
    fn eq(&self, other: &Self) -> bool {
        self.fingerprint == other.fingerprint
            && self.kind == other.kind
            && self.knots.len() == other.knots.len()
            && self
                .knots
                .iter()
                .zip(&other.knots)
                .all(|(a, b)| a.0.to_bits() == b.0.to_bits() && a.1.to_bits() == b.1.to_bits())
    }
}

impl GeneratorA {
    pub fn triangular(left: f64, peak: f64, right: f64) -> Result<Self, GeneratorError> {
        Self::from_knots(
            GeneratorKind::Triangular,
            vec![(left, 0.0), (peak, 1.0), (right, 0.0)],
            DEFAULT_SYMMETRY_TOL,
        )
    }

    pub fn piecewise_linear(knots: Vec<(f64, f64)>) -> Result<Self, GeneratorError> {
        Self::from_knots(GeneratorKind::PiecewiseLinear, knots, DEFAULT_SYMMETRY_TOL)
    }

    pub fn from_config(config: &GeneratorConfig) -> Result<Self, GeneratorError> {
        match config {
            GeneratorConfig::Triangular { left, peak, right } => {
                Self::triangular(*left, *peak, *right)
            }
            GeneratorConfig::PiecewiseLinear { knots } => {
                Self::piecewise_linear(knots.iter().map(|k| (k[0], k[1])).collect())
            }
        }
    }

    /// Builds a generator with an explicit mirror-symmetry tolerance.
    pub fn from_knots(
        kind: GeneratorKind,
        knots: Vec<(f64, f64)>,
        symmetry_tol: f64,
    ) -> Result<Self, GeneratorError> {
        let report = validate(kind, &knots, symmetry_tol)?;
        let fingerprint = fingerprint(kind, &knots);
        Ok(GeneratorA {
            kind,
            knots,
            peak_index: report.peak_index,
            peak: report.peak,
            symmetry_deviation: report.symmetry_deviation,
            symmetry_tol,
            fingerprint,
        })
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    /// The unique point `a_m` of the 1-level.
    pub fn peak(&self) -> f64 {
        self.peak
    }

    pub fn symmetry_deviation(&self) -> f64 {
        self.symmetry_deviation
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn support(&self) -> Interval {
        Interval::new(self.knots[0].0, self.knots[self.knots.len() - 1].0)
    }

    pub fn to_config(&self) -> GeneratorConfig {
        match self.kind {
            GeneratorKind::Triangular => GeneratorConfig::Triangular {
                left: self.knots[0].0,
                peak: self.knots[1].0,
                right: self.knots[2].0,
            },
            GeneratorKind::PiecewiseLinear => GeneratorConfig::PiecewiseLinear {
                knots: self.knots.iter().map(|&(x, mu)| [x, mu]).collect(),
            },
        }
    }

    /// Membership degree `A(x)`.
    pub fn membership(&self, x: f64) -> f64 {
        let k = &self.knots;
        if x < k[0].0 || x > k[k.len() - 1].0 {
            return 0.0;
        }
        for w in k.windows(2) {
            let ((x0, m0), (x1, m1)) = (w[0], w[1]);
            if x == x1 {
                return m1;
            }
            if x < x1 {
                return m0 + (m1 - m0) * (x - x0) / (x1 - x0);
            }
        }
        k[k.len() - 1].1
    }

    /// The α-level `[a̲_α, ā_α]`. At α = 0 this is the closure of the support.
    pub fn alpha_level(&self, alpha: f64) -> Result<Interval, GeneratorError> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(GeneratorError::AlphaOutOfRange(alpha));
        }
        if alpha == 0.0 {
            return Ok(self.support());
        }
        Ok(Interval::new(
            lower_endpoint(&self.knots, self.peak_index, alpha, false),
            upper_endpoint(&self.knots, self.peak_index, alpha, false),
        ))
    }

    /// Translates the generator so that its peak sits at zero. The spanned
    /// space is unchanged: the shift is absorbed by the real coordinate.
    pub fn center_at_zero(&self) -> Result<GeneratorA, GeneratorError> {
        if self.peak == 0.0 {
            return Ok(self.clone());
        }
        let shift = self.peak;
        let knots = self.knots.iter().map(|&(x, mu)| (x - shift, mu)).collect();
        Self::from_knots(self.kind, knots, self.symmetry_tol)
    }
}

/// Checks the standing assumptions on a generator: sorted finite knots,
/// bounded support, a single-point 1-level, unimodality, and asymmetry.
pub fn validate(
    kind: GeneratorKind,
    knots: &[(f64, f64)],
    symmetry_tol: f64,
) -> Result<ValidationReport, GeneratorError> {
    if kind == GeneratorKind::Triangular && knots.len() != 3 {
        return Err(GeneratorError::NotTriangular(knots.len()));
    }
    if knots.len() < 3 {
        return Err(GeneratorError::TooFewKnots(knots.len()));
    }
    for (index, &(x, mu)) in knots.iter().enumerate() {
        if !x.is_finite() || !mu.is_finite() {
            return Err(GeneratorError::NonFinite { index });
        }
        if !(0.0..=1.0).contains(&mu) {
            return Err(GeneratorError::MembershipOutOfRange { index, value: mu });
        }
    }
    for (index, w) in knots.windows(2).enumerate() {
        if w[1].0 <= w[0].0 {
            return Err(GeneratorError::UnsortedKnots { index: index + 1 });
        }
    }
    let ones: Vec<usize> = (0..knots.len()).filter(|&i| knots[i].1 == 1.0).collect();
    let peak_index = match ones.len() {
        0 => return Err(GeneratorError::NotNormal),
        1 => ones[0],
        count => return Err(GeneratorError::PlateauAtOne { count }),
    };
    let last = knots.len() - 1;
    if knots[0].1 != 0.0 || knots[last].1 != 0.0 {
        return Err(GeneratorError::OpenSupport);
    }
    if let Some(index) = (1..last).find(|&i| knots[i].1 == 0.0) {
        return Err(GeneratorError::InteriorZero { index });
    }
    for i in 1..=peak_index {
        if knots[i].1 < knots[i - 1].1 {
            return Err(GeneratorError::NotUnimodal { index: i });
        }
    }
    for i in peak_index + 1..knots.len() {
        if knots[i].1 > knots[i - 1].1 {
            return Err(GeneratorError::NotUnimodal { index: i });
        }
    }

    let peak = knots[peak_index].0;
    let symmetry_deviation = mirror_deviation(knots, peak_index);
    if symmetry_deviation < symmetry_tol {
        return Err(GeneratorError::Symmetric {
            deviation: symmetry_deviation,
        });
    }
    Ok(ValidationReport {
        peak,
        peak_index,
        support: Interval::new(knots[0].0, knots[last].0),
        symmetry_deviation,
    })
}

// Both endpoint maps are piecewise linear in α with breakpoints at the knot
// levels, so comparing them (closed value and limit from above) at every knot
// level decides mirror symmetry exactly. A unimodal membership with a single
// peak can only be symmetric about that peak.
fn mirror_deviation(knots: &[(f64, f64)], peak_index: usize) -> f64 {
    let peak = knots[peak_index].0;
    let mut levels: Vec<f64> = knots.iter().map(|k| k.1).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let mut worst: f64 = 0.0;
    for &alpha in &levels {
        for strict in [false, true] {
            if strict && alpha == 1.0 {
                continue;
            }
            let left = peak - lower_endpoint(knots, peak_index, alpha, strict);
            let right = upper_endpoint(knots, peak_index, alpha, strict) - peak;
            worst = worst.max((left - right).abs());
        }
    }
    worst
}

/// Left endpoint of the α-level on the rising branch. With `strict` the
/// endpoint of `{A > α}` is returned instead (the limit from above).
fn lower_endpoint(knots: &[(f64, f64)], peak_index: usize, alpha: f64, strict: bool) -> f64 {
    let hits = |mu: f64| if strict { mu > alpha } else { mu >= alpha };
    let j = (0..=peak_index).find(|&j| hits(knots[j].1)).unwrap_or(peak_index);
    if j == 0 {
        return knots[0].0;
    }
    interpolate(knots[j - 1], knots[j], alpha)
}

fn upper_endpoint(knots: &[(f64, f64)], peak_index: usize, alpha: f64, strict: bool) -> f64 {
    let hits = |mu: f64| if strict { mu > alpha } else { mu >= alpha };
    let last = knots.len() - 1;
    let j = (peak_index..=last).rev().find(|&j| hits(knots[j].1)).unwrap_or(peak_index);
    if j == last {
        return knots[last].0;
    }
    interpolate(knots[j + 1], knots[j], alpha)
}

// `outer` lies below α (or at it), `inner` at or above.
fn interpolate(outer: (f64, f64), inner: (f64, f64), alpha: f64) -> f64 {
    let (x0, m0) = outer;
    let (x1, m1) = inner;
    if m1 == m0 || alpha == m0 {
        return x0;
    }
    if alpha == m1 {
        return x1;
    }
    x0 + (alpha - m0) / (m1 - m0) * (x1 - x0)
}

fn fingerprint(kind: GeneratorKind, knots: &[(f64, f64)]) -> u64 {
    let mut h = DefaultHasher::new();
    kind.hash(&mut h);
    for &(x, mu) in knots {
        x.to_bits().hash(&mut h);
        mu.to_bits().hash(&mut h);
    }
    h.finish()
}
