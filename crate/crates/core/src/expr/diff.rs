use thiserror::Error;

use super::{BinOp, Expr, Func, Var};

pub const MAX_DIFF_ORDER: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("derivative order {0} is outside 1..={MAX_DIFF_ORDER}")]
pub struct DiffOrderError(pub usize);

impl Expr {
    /// Symbolic partial derivative with respect to `var`.
    ///
    /// `abs(u)` differentiates to `sign(u)*u'`, so the derivative at a kink
    /// evaluates to 0 (and is counted by [`Expr::eval_traced`]).
    pub fn diff(&self, var: Var) -> Expr {
        match self {
            Expr::Num(_) => Expr::num(0.0),
            Expr::Var(v) => Expr::num(if *v == var { 1.0 } else { 0.0 }),
            Expr::Neg(a) => a.diff(var).neg(),
            Expr::Call(f, u) => chain(*f, u, var),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.as_ref(), b.as_ref());
                match op {
                    BinOp::Add => a.diff(var).add(b.diff(var)),
                    BinOp::Sub => a.diff(var).sub(b.diff(var)),
                    BinOp::Mul => {
                        let left = a.diff(var).mul(b.clone());
                        left.add(a.clone().mul(b.diff(var)))
                    }
                    BinOp::Div => {
                        if !b.depends_on(var) {
                            return a.diff(var).div(b.clone());
                        }
                        let num = a.diff(var).mul(b.clone()).sub(a.clone().mul(b.diff(var)));
                        num.div(b.clone().pow(Expr::num(2.0)))
                    }
                    BinOp::Pow => power_rule(a, b, var),
                }
            }
        }
    }

    /// Derivative of order 1 to 3 with respect to `t`.
    pub fn diff_n(&self, order: usize) -> Result<Expr, DiffOrderError> {
        if !(1..=MAX_DIFF_ORDER).contains(&order) {
            return Err(DiffOrderError(order));
        }
        let mut e = self.diff(Var::T);
        for _ in 1..order {
            e = e.diff(Var::T);
        }
        Ok(e)
    }
}

fn chain(f: Func, u: &Expr, var: Var) -> Expr {
    let du = u.diff(var);
    if du.as_num() == Some(0.0) {
        return Expr::num(0.0);
    }
    let u = u.clone();
    let outer = match f {
        Func::Sin => u.call(Func::Cos),
        Func::Cos => u.call(Func::Sin).neg(),
        Func::Exp => u.call(Func::Exp),
        Func::Log => return du.div(u),
        Func::Abs => u.call(Func::Sign),
        Func::Sqrt => return du.div(Expr::num(2.0).mul(u.call(Func::Sqrt))),
        Func::Sign => return Expr::num(0.0),
    };
    outer.mul(du)
}

fn power_rule(a: &Expr, b: &Expr, var: Var) -> Expr {
    let base_varies = a.depends_on(var);
    let exp_varies = b.depends_on(var);
    match (base_varies, exp_varies) {
        (false, false) => Expr::num(0.0),
        (true, false) => {
            let lowered = b.clone().sub(Expr::num(1.0));
            b.clone().mul(a.clone().pow(lowered)).mul(a.diff(var))
        }
        (false, true) => {
            let ln_a = a.clone().call(Func::Log);
            a.clone().pow(b.clone()).mul(ln_a).mul(b.diff(var))
        }
        (true, true) => {
            let ln_a = a.clone().call(Func::Log);
            let inner = b.diff(var).mul(ln_a).add(b.clone().mul(a.diff(var)).div(a.clone()));
            a.clone().pow(b.clone()).mul(inner)
        }
    }
}
