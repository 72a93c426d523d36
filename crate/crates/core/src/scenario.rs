//! JSON scenario files: a generator, a domain and component expressions.
//!
//! ```json
//! {"gen": {"kind": "triangular", "left": -1.0, "peak": 0.0, "right": 2.0},
//!  "domain": [0.0, 1.0], "r": "sin(t)", "q": "t^2"}
//! ```
//!
//! Optional keys: `name`, `g` (a second function `{"r": .., "q": ..}` used by
//! the product-rule, integration-by-parts and du Bois-Reymond checks),
//! `eps0` (for two-parameter functions in `t` and `eps`) and `t0`.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calculus::{CalculusError, FuzzyFn, TwoParamFn};
use crate::generator::{GeneratorA, GeneratorConfig, GeneratorError, Interval};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid scenario JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("scenario is missing '{0}'")]
    Missing(&'static str),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Components {
    pub r: String,
    pub q: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gen: Option<GeneratorConfig>,
    pub domain: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Components>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
}

impl Scenario {
    pub fn from_json(src: &str) -> Result<Self, ScenarioError> {
        Ok(serde_json::from_str(src)?)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let src = fs::read_to_string(path)
            .map_err(|source| ScenarioError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&src)
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.domain[0], self.domain[1])
    }

    /// The scenario's own generator, if it has one.
    pub fn generator(&self) -> Result<Option<Arc<GeneratorA>>, ScenarioError> {
        self.gen
            .as_ref()
            .map(|c| GeneratorA::from_config(c).map(Arc::new))
            .transpose()
            .map_err(Into::into)
    }

    pub fn has_f(&self) -> bool {
        self.r.is_some() || self.q.is_some()
    }

    /// `f = r + qA`; a missing component defaults to `0`.
    pub fn f(&self, gen: &Arc<GeneratorA>) -> Result<FuzzyFn, ScenarioError> {
        if !self.has_f() {
            return Err(ScenarioError::Missing("r"));
        }
        let r = self.r.as_deref().unwrap_or("0");
        let q = self.q.as_deref().unwrap_or("0");
        Ok(FuzzyFn::parse(r, q, gen, self.interval())?)
    }

    pub fn g(&self, gen: &Arc<GeneratorA>) -> Result<FuzzyFn, ScenarioError> {
        let g = self.g.as_ref().ok_or(ScenarioError::Missing("g"))?;
        Ok(FuzzyFn::parse(&g.r, &g.q, gen, self.interval())?)
    }

    /// `f` read as a function of `t` and `eps`.
    pub fn two_param(&self, gen: &Arc<GeneratorA>) -> Result<TwoParamFn, ScenarioError> {
        if !self.has_f() {
            return Err(ScenarioError::Missing("r"));
        }
        let r = self.r.as_deref().unwrap_or("0");
        let q = self.q.as_deref().unwrap_or("0");
        Ok(TwoParamFn::parse(r, q, gen, self.interval())?)
    }
}
