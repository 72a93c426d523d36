//! Elements `r + qA` of the space spanned by a generator, stored as the
//! coordinate pair `(r, q)`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::generator::{GeneratorA, GeneratorError, Interval};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LcfnError {
    #[error("operands are built on different generators")]
    GeneratorMismatch,
    #[error("coordinates must be finite, got ({r}, {q})")]
    NonFinite { r: f64, q: f64 },
}

/// Which side of zero an element's center lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignClass {
    ZeroClass,
    Positive,
    Negative,
}

impl SignClass {
    pub fn name(self) -> &'static str {
        match self {
            SignClass::ZeroClass => "zero",
            SignClass::Positive => "positive",
            SignClass::Negative => "negative",
        }
    }
}

impl fmt::Display for SignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The condition of the order that decided a strict comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Tier {
    /// Centers differ.
    I,
    /// Equal centers, different noise widths `|q|`.
    II,
    /// Equal centers and widths, opposite noise signs.
    III,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Comparison {
    pub ordering: Ordering,
    /// `None` exactly when the operands are equal.
    pub tier: Option<Tier>,
}

/// Both directions of the comparison between a real `λ` and an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScalarComparison {
    /// `λ ≤ B`
    pub scalar_le: bool,
    /// `B ≤ λ`
    pub le_scalar: bool,
}

/// A linearly correlated fuzzy number `r + qA`.
#[derive(Debug, Clone)]
pub struct Lcfn {
    r: f64,
    q: f64,
    gen: Arc<GeneratorA>,
}

/// Serialized form: `{"r":..,"q":..,"center":..,"class":".."}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LcfnView {
    pub r: f64,
    pub q: f64,
    pub center: f64,
    pub class: SignClass,
}

fn same_generator(a: &Arc<GeneratorA>, b: &Arc<GeneratorA>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn cmp_f64(a: f64, b: f64) -> Ordering {
    a.partial_cmp(&b).unwrap_or_else(|| a.total_cmp(&b))
}

impl Lcfn {
    pub fn new(r: f64, q: f64, gen: &Arc<GeneratorA>) -> Self {
        Lcfn { r, q, gen: Arc::clone(gen) }
    }

    pub fn try_new(r: f64, q: f64, gen: &Arc<GeneratorA>) -> Result<Self, LcfnError> {
        if !(r.is_finite() && q.is_finite() && q.mul_add(gen.peak(), r).is_finite()) {
            return Err(LcfnError::NonFinite { r, q });
        }
        Ok(Self::new(r, q, gen))
    }

    /// The real number `λ` embedded as `λ + 0A`.
    pub fn real(lambda: f64, gen: &Arc<GeneratorA>) -> Self {
        Self::new(lambda, 0.0, gen)
    }

    pub fn zero(gen: &Arc<GeneratorA>) -> Self {
        Self::new(0.0, 0.0, gen)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn coords(&self) -> (f64, f64) {
        (self.r, self.q)
    }

    pub fn generator(&self) -> &Arc<GeneratorA> {
        &self.gen
    }

    pub fn with_coords(&self, r: f64, q: f64) -> Self {
        Self::new(r, q, &self.gen)
    }

    fn check(&self, other: &Lcfn) -> Result<(), LcfnError> {
        if same_generator(&self.gen, &other.gen) {
            Ok(())
        } else {
            Err(LcfnError::GeneratorMismatch)
        }
    }

    pub fn add(&self, other: &Lcfn) -> Result<Lcfn, LcfnError> {
        self.check(other)?;
        Ok(self.with_coords(self.r + other.r, self.q + other.q))
    }

    pub fn sub(&self, other: &Lcfn) -> Result<Lcfn, LcfnError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, lambda: f64) -> Lcfn {
        self.with_coords(lambda * self.r, lambda * self.q)
    }

    pub fn neg(&self) -> Lcfn {
        self.scale(-1.0)
    }

    /// `r + q·a_m`, the midpoint of the 1-level.
    ///
    /// Evaluated with a fused multiply-add, so the result is the correctly
    /// rounded value of the exact center and its sign is exact.
    pub fn center(&self) -> f64 {
        self.q.mul_add(self.gen.peak(), self.r)
    }

    pub fn norm(&self) -> f64 {
        self.q.abs() + self.center().abs()
    }

    pub fn is_zero(&self) -> bool {
        self.r == 0.0 && self.q == 0.0
    }

    /// Total order: centers first, then noise width `|q|`, then `q`.
    pub fn compare(&self, other: &Lcfn) -> Result<Ordering, LcfnError> {
        self.compare_detailed(other).map(|c| c.ordering)
    }

    pub fn compare_detailed(&self, other: &Lcfn) -> Result<Comparison, LcfnError> {
        self.check(other)?;
        let strict = |ordering, tier| Comparison { ordering, tier: Some(tier) };
        match cmp_f64(self.center(), other.center()) {
            Ordering::Equal => {}
            o => return Ok(strict(o, Tier::I)),
        }
        match cmp_f64(self.q.abs(), other.q.abs()) {
            Ordering::Equal => {}
            o => return Ok(strict(o, Tier::II)),
        }
        match cmp_f64(self.q, other.q) {
            Ordering::Equal => {}
            o => return Ok(strict(o, Tier::III)),
        }
        // Same q and same rounded center, yet r may still differ when the
        // rounding of r + q·a_m absorbed the difference; exact centers then
        // differ, which is a tier-I decision.
        match cmp_f64(self.r, other.r) {
            Ordering::Equal => Ok(Comparison { ordering: Ordering::Equal, tier: None }),
            o => Ok(strict(o, Tier::I)),
        }
    }

    pub fn le(&self, other: &Lcfn) -> Result<bool, LcfnError> {
        Ok(self.compare(other)? != Ordering::Greater)
    }

    pub fn compare_scalar(&self, lambda: f64) -> ScalarComparison {
        let c = self.center();
        ScalarComparison {
            scalar_le: lambda <= c,
            le_scalar: lambda > c || (self.r == lambda && self.q == 0.0),
        }
    }

    /// The Ψ-cross product in coordinates:
    /// `(r_B r_C − a_m² q_B q_C) + (r_B q_C + r_C q_B + 2 a_m q_B q_C)A`.
    pub fn cross(&self, other: &Lcfn) -> Result<Lcfn, LcfnError> {
        self.check(other)?;
        let am = self.gen.peak();
        let (rb, qb, rc, qc) = (self.r, self.q, other.r, other.q);
        // Grouping a_m with q keeps B ⊙ B exactly zero whenever r = −a_m q is
        // representable; pairing the mixed terms keeps the result commutative
        // bit for bit.
        let (amqb, amqc) = (am * qb, am * qc);
        let r = rb * rc - amqb * amqc;
        let q = (rb * qc + rc * qb) + (amqb * qc + amqc * qb);
        Ok(self.with_coords(r, q))
    }

    /// The cross product from its definition `cB + bC − bc`, where `b` and `c`
    /// are the 1-level points of `B` and `C`. Uses only scaling and addition.
    pub fn cross_oracle(&self, other: &Lcfn) -> Result<Lcfn, LcfnError> {
        self.check(other)?;
        let b = self.center();
        let c = other.center();
        other
            .scale(b)
            .add(&self.scale(c))?
            .sub(&Lcfn::real(b * c, &self.gen))
    }

    pub fn square(&self) -> Lcfn {
        self.cross(self).expect("an element shares its own generator")
    }

    pub fn classify(&self) -> SignClass {
        let c = self.center();
        if c > 0.0 {
            SignClass::Positive
        } else if c < 0.0 {
            SignClass::Negative
        } else {
            SignClass::ZeroClass
        }
    }

    /// For a nonzero element, an element `C` outside the zero class with
    /// `B ⊙ C ≠ 0`. Returns `None` for the zero element.
    pub fn nonzero_product_witness(&self) -> Option<Lcfn> {
        if self.r != 0.0 {
            Some(Lcfn::real(self.r, &self.gen))
        } else if self.q == 0.0 {
            None
        } else if self.gen.peak() != 0.0 {
            Some(self.with_coords(0.0, self.q))
        } else {
            Some(Lcfn::real(self.q, &self.gen))
        }
    }

    /// The α-level of `r + qA` as an interval.
    pub fn realize_alpha(&self, alpha: f64) -> Result<Interval, GeneratorError> {
        let level = self.gen.alpha_level(alpha)?;
        let (lo, hi) = if self.q >= 0.0 {
            (level.lo, level.hi)
        } else {
            (level.hi, level.lo)
        };
        Ok(Interval::new(self.r + self.q * lo, self.r + self.q * hi))
    }

    /// Absolute-tolerance coordinate comparison, for test assertions only.
    pub fn approx_eq(&self, other: &Lcfn, tol: f64) -> bool {
        (self.r - other.r).abs() <= tol && (self.q - other.q).abs() <= tol
    }

    pub fn view(&self) -> LcfnView {
        LcfnView {
            r: self.r,
            q: self.q,
            center: self.center(),
            class: self.classify(),
        }
    }

    /// Parses a literal of the form `r+qA`, e.g. `3+2A`, `-1.5A`, `4`, `2*A`.
    pub fn parse_literal(src: &str, gen: &Arc<GeneratorA>) -> Result<Lcfn, LiteralError> {
        let (r, q) = parse_literal_coords(src)?;
        Lcfn::try_new(r, q, gen).map_err(|_| LiteralError {
            offset: 0,
            message: "literal is not finite".into(),
        })
    }
}

impl PartialEq for Lcfn {
    fn eq(&self, other: &Self) -> bool {
        self.r == other.r && self.q == other.q && same_generator(&self.gen, &other.gen)
    }
}

impl fmt::Display for Lcfn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 0.0 {
            return write!(f, "{}", self.r);
        }
        if self.r != 0.0 {
            write!(f, "{}", self.r)?;
            if self.q >= 0.0 {
                f.write_str("+")?;
            }
        }
        write!(f, "{}A", self.q)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("syntax error at byte {offset}: {message}")]
pub struct LiteralError {
    pub offset: usize,
    pub message: String,
}

fn literal_err(offset: usize, message: impl Into<String>) -> LiteralError {
    LiteralError { offset, message: message.into() }
}

/// Returns the `(r, q)` coordinates written in a literal.
pub fn parse_literal_coords(src: &str) -> Result<(f64, f64), LiteralError> {
    let bytes = src.as_bytes();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let mut real: Option<f64> = None;
    let mut noise: Option<f64> = None;
    let mut first = true;

    loop {
        skip_ws(&mut pos);
        if pos == bytes.len() {
            if first {
                return Err(literal_err(pos, "empty literal"));
            }
            break;
        }
        let term_start = pos;
        let mut sign = 1.0;
        match bytes[pos] {
            b'+' | b'-' => {
                if bytes[pos] == b'-' {
                    sign = -1.0;
                }
                pos += 1;
                skip_ws(&mut pos);
            }
            _ if !first => return Err(literal_err(pos, "expected '+' or '-'")),
            _ => {}
        }
        first = false;

        let num_start = pos;
        while pos < bytes.len()
            && (bytes[pos].is_ascii_digit()
                || bytes[pos] == b'.'
                || ((bytes[pos] == b'e' || bytes[pos] == b'E') && pos > num_start)
                || ((bytes[pos] == b'+' || bytes[pos] == b'-')
                    && pos > num_start
                    && matches!(bytes[pos - 1], b'e' | b'E')))
        {
            pos += 1;
        }
        let magnitude = if pos > num_start {
            Some(
                src[num_start..pos]
                    .parse::<f64>()
                    .map_err(|_| literal_err(num_start, format!("invalid number '{}'", &src[num_start..pos])))?,
            )
        } else {
            None
        };
        skip_ws(&mut pos);
        if pos < bytes.len() && !matches!(bytes[pos], b'*' | b'A' | b'+' | b'-') {
            return Err(literal_err(pos, format!("unexpected character '{}'", src[pos..].chars().next().unwrap_or('?'))));
        }
        let mut starred = false;
        if pos < bytes.len() && bytes[pos] == b'*' {
            if magnitude.is_none() {
                return Err(literal_err(pos, "'*' must follow a number"));
            }
            starred = true;
            pos += 1;
            skip_ws(&mut pos);
        }
        if pos < bytes.len() && bytes[pos] == b'A' {
            pos += 1;
            if noise.is_some() {
                return Err(literal_err(term_start, "the A part appears twice"));
            }
            noise = Some(sign * magnitude.unwrap_or(1.0));
        } else if starred {
            return Err(literal_err(pos, "expected 'A' after '*'"));
        } else if let Some(m) = magnitude {
            if real.is_some() {
                return Err(literal_err(term_start, "the real part appears twice"));
            }
            real = Some(sign * m);
        } else {
            return Err(literal_err(pos, "expected a number or 'A'"));
        }
    }
    Ok((real.unwrap_or(0.0), noise.unwrap_or(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(l: f64, m: f64, r: f64) -> Arc<GeneratorA> {
        Arc::new(GeneratorA::triangular(l, m, r).unwrap())
    }

    /// Generator with peak `am`.
    fn peaked(am: f64) -> Arc<GeneratorA> {
        gen(am - 1.0, am, am + 2.0)
    }

    fn n(r: f64, q: f64, g: &Arc<GeneratorA>) -> Lcfn {
        Lcfn::new(r, q, g)
    }

    #[test]
    fn vector_space_ops() {
        let g = peaked(0.0);
        assert_eq!(n(3.0, 2.0, &g).add(&n(1.0, -1.0, &g)).unwrap(), n(4.0, 1.0, &g));
        assert_eq!(n(3.0, 2.0, &g).add(&Lcfn::zero(&g)).unwrap(), n(3.0, 2.0, &g));
        assert_eq!(n(1.0, 1.0, &g).add(&n(-1.0, -1.0, &g)).unwrap(), Lcfn::zero(&g));
        assert_eq!(n(3.0, -1.0, &g).scale(2.0), n(6.0, -2.0, &g));
        assert!(n(3.0, -1.0, &g).scale(0.0).is_zero());
        assert_eq!(n(3.0, 2.0, &g).sub(&n(1.0, 2.0, &g)).unwrap(), n(2.0, 0.0, &g));
    }

    #[test]
    fn generator_mismatch() {
        let a = peaked(0.0);
        let b = peaked(0.5);
        assert_eq!(n(1.0, 1.0, &a).add(&n(1.0, 1.0, &b)).unwrap_err(), LcfnError::GeneratorMismatch);
        assert!(n(1.0, 1.0, &a).compare(&n(1.0, 1.0, &b)).is_err());
        assert!(n(1.0, 1.0, &a).cross(&n(1.0, 1.0, &b)).is_err());
        // Structurally equal generators built separately interoperate.
        let c = peaked(0.0);
        assert!(n(1.0, 1.0, &a).add(&n(1.0, 1.0, &c)).is_ok());
    }

    #[test]
    fn centers_and_norms() {
        assert_eq!(n(3.0, 2.0, &peaked(0.0)).center(), 3.0);
        assert_eq!(n(1.0, -2.0, &peaked(0.5)).center(), 0.0);
        assert_eq!(n(0.0, 4.0, &peaked(0.25)).center(), 1.0);
        assert_eq!(n(3.0, 2.0, &peaked(0.0)).norm(), 5.0);
        assert_eq!(Lcfn::zero(&peaked(0.0)).norm(), 0.0);
        assert_eq!(n(-1.0, 2.0, &peaked(0.5)).norm(), 2.0);
    }

    #[test]
    fn order_tiers() {
        let g = peaked(0.5);
        let c = n(1.0, 0.0, &g).compare_detailed(&n(0.0, 1.0, &g)).unwrap();
        assert_eq!(c, Comparison { ordering: Ordering::Greater, tier: Some(Tier::I) });

        let g = peaked(0.0);
        let c = n(3.0, -2.0, &g).compare_detailed(&n(3.0, 2.0, &g)).unwrap();
        assert_eq!(c, Comparison { ordering: Ordering::Less, tier: Some(Tier::III) });
        let c = n(3.0, 0.0, &g).compare_detailed(&n(3.0, 2.0, &g)).unwrap();
        assert_eq!(c, Comparison { ordering: Ordering::Less, tier: Some(Tier::II) });
        let c = n(4.0, 0.0, &g).compare_detailed(&n(4.0, 0.0, &g)).unwrap();
        assert_eq!(c, Comparison { ordering: Ordering::Equal, tier: None });
    }

    #[test]
    fn rounding_collisions_do_not_break_antisymmetry() {
        let g = peaked(0.5);
        let a = n(1.0, 1e20, &g);
        let b = n(2.0, 1e20, &g);
        assert_eq!(a.center(), b.center());
        assert_eq!(a.compare(&b).unwrap(), Ordering::Less);
        assert_eq!(b.compare(&a).unwrap(), Ordering::Greater);
    }

    #[test]
    fn scalar_comparison() {
        let g = peaked(0.5);
        let s = n(1.0, -2.0, &g).compare_scalar(0.0);
        assert!(s.scalar_le);
        assert!(!s.le_scalar);
        let s = n(0.0, 1.0, &g).compare_scalar(1.0);
        assert!(s.le_scalar && !s.scalar_le);
        let s = n(2.0, 0.0, &g).compare_scalar(2.0);
        assert!(s.le_scalar && s.scalar_le);
    }

    #[test]
    fn cross_examples() {
        let g = peaked(0.0);
        let b = n(3.0, 2.0, &g);
        let c = n(1.0, -1.0, &g);
        assert_eq!(b.cross(&c).unwrap(), n(3.0, -1.0, &g));
        assert_eq!(b.cross_oracle(&c).unwrap(), n(3.0, -1.0, &g));
        assert_eq!(b.cross(&Lcfn::real(1.0, &g)).unwrap(), b);
        assert!(Lcfn::zero(&g).cross_oracle(&c).unwrap().is_zero());
        assert_eq!(n(2.0, 0.0, &g).cross_oracle(&n(5.0, 0.0, &g)).unwrap(), n(10.0, 0.0, &g));

        let h = peaked(0.5);
        let z = n(1.0, -2.0, &h);
        for other in [n(3.0, 7.0, &h), n(-2.5, 0.25, &h), n(0.0, 1.0, &h)] {
            assert_eq!(z.cross(&other).unwrap().center(), 0.0);
        }
    }

    #[test]
    fn squares() {
        let g = peaked(0.0);
        let s = n(3.0, 2.0, &g).square();
        assert_eq!(s, n(9.0, 12.0, &g));
        assert_eq!(s.center(), 9.0);

        let h = peaked(0.5);
        let s = n(1.0, -2.0, &h).square();
        assert_eq!(s.coords(), (0.0, 0.0));
        assert_eq!(s.classify(), SignClass::ZeroClass);
        assert!(Lcfn::zero(&g).square().is_zero());
    }

    #[test]
    fn classification() {
        assert_eq!(n(1.0, -2.0, &peaked(0.5)).classify(), SignClass::ZeroClass);
        assert_eq!(n(3.0, 2.0, &peaked(0.0)).classify(), SignClass::Positive);
        assert_eq!(n(-1.0, 0.0, &peaked(0.0)).classify(), SignClass::Negative);
    }

    #[test]
    fn alpha_realization() {
        let g = gen(-1.0, 0.0, 2.0);
        assert_eq!(n(3.0, 2.0, &g).realize_alpha(0.5).unwrap(), Interval::new(2.0, 5.0));
        assert_eq!(n(1.0, -1.0, &g).realize_alpha(0.5).unwrap(), Interval::new(0.0, 1.5));
        for alpha in [0.0, 0.3, 1.0] {
            assert_eq!(n(7.0, 0.0, &g).realize_alpha(alpha).unwrap(), Interval::point(7.0));
        }
        assert!(n(1.0, 1.0, &g).realize_alpha(2.0).is_err());
    }

    #[test]
    fn witnesses_for_nonzero_elements() {
        for am in [0.0, 0.5] {
            let g = peaked(am);
            for b in [n(1.0, 0.0, &g), n(0.0, 3.0, &g), n(-2.0, 1.0, &g)] {
                let w = b.nonzero_product_witness().unwrap();
                assert_ne!(w.classify(), SignClass::ZeroClass);
                assert!(!b.cross(&w).unwrap().is_zero());
            }
            assert!(Lcfn::zero(&g).nonzero_product_witness().is_none());
        }
    }

    #[test]
    fn literals() {
        let ok = |s: &str| parse_literal_coords(s).unwrap();
        assert_eq!(ok("3+2A"), (3.0, 2.0));
        assert_eq!(ok("3-2A"), (3.0, -2.0));
        assert_eq!(ok("-1.5A"), (0.0, -1.5));
        assert_eq!(ok("4"), (4.0, 0.0));
        assert_eq!(ok("A"), (0.0, 1.0));
        assert_eq!(ok("-A"), (0.0, -1.0));
        assert_eq!(ok(" 3 + 2*A "), (3.0, 2.0));
        assert_eq!(ok("2A+3"), (3.0, 2.0));
        assert_eq!(ok("1e-3+2.5e2A"), (1e-3, 250.0));

        let err = |s: &str| parse_literal_coords(s).unwrap_err();
        assert_eq!(err("").offset, 0);
        assert_eq!(err("3+").offset, 2);
        assert_eq!(err("3+2B").offset, 3);
        assert_eq!(err("3 4").offset, 2);
        assert_eq!(err("1+2").offset, 1);
        assert_eq!(err("A+A").offset, 1);
        assert_eq!(err("2*").offset, 2);
    }

    #[test]
    fn display_round_trips_through_literal() {
        let g = peaked(0.0);
        for (r, q) in [(3.0, 2.0), (3.0, -2.0), (0.0, -1.5), (4.0, 0.0), (-0.125, 1e-7)] {
            let s = n(r, q, &g).to_string();
            assert_eq!(parse_literal_coords(&s).unwrap(), (r, q), "{s}");
        }
    }
}
