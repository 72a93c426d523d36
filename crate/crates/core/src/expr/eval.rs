use thiserror::Error;

use super::{BinOp, Expr, Func, Var};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{func} is undefined at {arg}")]
    Domain { func: &'static str, arg: f64 },
    #[error("result is not finite")]
    NonFinite,
    #[error("expression uses eps but no value was bound")]
    UnboundEps,
    #[error("not differentiable: sign evaluated at its kink")]
    NonDifferentiable,
}

/// Evaluation outcome with the number of times `sign` was evaluated at 0,
/// where the convention `abs'(0) = 0` was applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Traced {
    pub value: f64,
    pub kinks: usize,
}

struct Env {
    t: f64,
    eps: Option<f64>,
    strict: bool,
    kinks: usize,
}

impl Expr {
    /// Evaluates at `t`. `sign(0)` evaluates to 0.
    pub fn eval(&self, t: f64) -> Result<f64, EvalError> {
        self.eval_traced(t, None).map(|r| r.value)
    }

    pub fn eval_at(&self, t: f64, eps: f64) -> Result<f64, EvalError> {
        self.eval_traced(t, Some(eps)).map(|r| r.value)
    }

    /// Like [`Expr::eval`] but reports a kink hit as `NonDifferentiable`.
    pub fn eval_strict(&self, t: f64, eps: Option<f64>) -> Result<f64, EvalError> {
        let mut env = Env { t, eps, strict: true, kinks: 0 };
        self.walk(&mut env)
    }

    pub fn eval_traced(&self, t: f64, eps: Option<f64>) -> Result<Traced, EvalError> {
        let mut env = Env { t, eps, strict: false, kinks: 0 };
        let value = self.walk(&mut env)?;
        Ok(Traced { value, kinks: env.kinks })
    }

    fn walk(&self, env: &mut Env) -> Result<f64, EvalError> {
        let v = match self {
            Expr::Num(x) => *x,
            Expr::Var(Var::T) => env.t,
            Expr::Var(Var::Eps) => env.eps.ok_or(EvalError::UnboundEps)?,
            Expr::Neg(a) => -a.walk(env)?,
            Expr::Call(f, a) => {
                let x = a.walk(env)?;
                if *f == Func::Sign && x == 0.0 {
                    if env.strict {
                        return Err(EvalError::NonDifferentiable);
                    }
                    env.kinks += 1;
                }
                apply(*f, x)?
            }
            Expr::Bin(op, a, b) => {
                let x = a.walk(env)?;
                let y = b.walk(env)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == 0.0 {
                            return Err(EvalError::DivisionByZero);
                        }
                        x / y
                    }
                    BinOp::Pow => pow(x, y)?,
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite)
        }
    }
}

fn pow(x: f64, y: f64) -> Result<f64, EvalError> {
    if x == 0.0 && y < 0.0 {
        return Err(EvalError::DivisionByZero);
    }
    if x < 0.0 && y.fract() != 0.0 {
        return Err(EvalError::Domain { func: "pow", arg: x });
    }
    if y == 2.0 {
        return Ok(x * x);
    }
    if y.fract() == 0.0 && y.abs() <= i32::MAX as f64 {
        return Ok(x.powi(y as i32));
    }
    Ok(x.powf(y))
}

pub(super) fn apply(f: Func, x: f64) -> Result<f64, EvalError> {
    Ok(match f {
        Func::Sin => x.sin(),
        Func::Cos => x.cos(),
        Func::Exp => x.exp(),
        Func::Log => {
            if x <= 0.0 {
                return Err(EvalError::Domain { func: "log", arg: x });
            }
            x.ln()
        }
        Func::Abs => x.abs(),
        Func::Sqrt => {
            if x < 0.0 {
                return Err(EvalError::Domain { func: "sqrt", arg: x });
            }
            x.sqrt()
        }
        Func::Sign => {
            if x > 0.0 {
                1.0
            } else if x < 0.0 {
                -1.0
            } else {
                0.0
            }
        }
    })
}
