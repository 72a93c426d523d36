//! Arithmetic, order and calculus on linearly correlated fuzzy numbers
//! `r + qA` over an asymmetric generator `A`.
//!
//! Elements are stored as coordinate pairs `(r, q)` sharing an
//! [`Arc<GeneratorA>`](generator::GeneratorA). Functions of a real variable
//! are pairs of [`Expr`] components ([`calculus::FuzzyFn`]).

pub mod calculus;
pub mod expr;
pub mod generator;
pub mod number;
pub mod quadrature;
pub mod scenario;
pub mod variational;

pub use calculus::{CalculusError, FuzzyFn, TwoParamFn};
pub use expr::Expr;
pub use generator::{GeneratorA, GeneratorConfig, GeneratorError, Interval};
pub use number::{Lcfn, LcfnError, LcfnView, SignClass, Tier};
pub use quadrature::{Method, QuadratureError, QuadratureSpec};
pub use scenario::{Scenario, ScenarioError};
pub use variational::{HarnessConfig, VariationalError};
