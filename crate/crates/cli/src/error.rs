use std::process::ExitCode;

use lcfn::{CalculusError, LcfnError, QuadratureError, ScenarioError, VariationalError};
use thiserror::Error;

/// Failures that stop a run before a report is produced.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad invocation or configuration: exit 2.
    #[error("{0}")]
    Usage(String),
    /// Non-convergence or a failed evaluation: exit 3.
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn usage(msg: impl ToString) -> Self {
        CliError::Usage(msg.to_string())
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Numerical(_) => ExitCode::from(3),
        }
    }
}

impl From<QuadratureError> for CliError {
    fn from(e: QuadratureError) -> Self {
        match e {
            QuadratureError::InvalidSpec(_) => CliError::usage(e),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<CalculusError> for CliError {
    fn from(e: CalculusError) -> Self {
        match e {
            CalculusError::Quadrature(q) => q.into(),
            CalculusError::NonDifferentiable { .. }
            | CalculusError::Eval { .. }
            | CalculusError::Lcfn(LcfnError::NonFinite { .. }) => CliError::Numerical(e.to_string()),
            _ => CliError::usage(e),
        }
    }
}

impl From<VariationalError> for CliError {
    fn from(e: VariationalError) -> Self {
        match e {
            VariationalError::Calculus(c) => c.into(),
            _ => CliError::usage(e),
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Calculus(c) => c.into(),
            _ => CliError::usage(e),
        }
    }
}
