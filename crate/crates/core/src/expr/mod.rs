//! Real-valued expressions in the variable `t` (and, for two-parameter
//! families, `eps`), used as the `r(t)` and `q(t)` components of fuzzy
//! functions.
//!
//! Grammar, with `^` right-associative and unary minus binding looser than
//! `^` (so `-t^2` is `-(t^2)`):
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | 't' | 'pi' | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! Functions: `sin cos exp log abs sqrt`, plus `sign`, which shows up in
//! derivatives of `abs`.

mod diff;
mod eval;
mod parse;

use std::fmt;

pub use diff::{DiffOrderError, MAX_DIFF_ORDER};
pub use eval::{EvalError, Traced};
pub use parse::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    T,
    Eps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Abs,
    Sqrt,
    Sign,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
            Func::Sign => "sign",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "abs" => Func::Abs,
            "sqrt" => Func::Sqrt,
            "sign" => Func::Sign,
            _ => return None,
        })
    }
}

/// Expression tree. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Parses an expression in `t`.
    pub fn parse(src: &str) -> Result<Expr, ParseError> {
        parse::parse(src, false)
    }

    /// Parses an expression in `t` and `eps`.
    pub fn parse_with_eps(src: &str) -> Result<Expr, ParseError> {
        parse::parse(src, true)
    }

    pub fn num(x: f64) -> Expr {
        Expr::Num(x)
    }

    pub fn t() -> Expr {
        Expr::Var(Var::T)
    }

    pub fn eps() -> Expr {
        Expr::Var(Var::Eps)
    }

    pub fn as_num(&self) -> Option<f64> {
        match self {
            Expr::Num(x) => Some(*x),
            _ => None,
        }
    }

    pub fn depends_on(&self, var: Var) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(v) => *v == var,
            Expr::Neg(a) | Expr::Call(_, a) => a.depends_on(var),
            Expr::Bin(_, a, b) => a.depends_on(var) || b.depends_on(var),
        }
    }

    /// Substitutes `var` by `value` everywhere.
    pub fn substitute(&self, var: Var, value: &Expr) -> Expr {
        match self {
            Expr::Var(v) if *v == var => value.clone(),
            Expr::Num(_) | Expr::Var(_) => self.clone(),
            Expr::Neg(a) => a.substitute(var, value).neg(),
            Expr::Call(f, a) => a.substitute(var, value).call(*f),
            Expr::Bin(op, a, b) => {
                Expr::bin(*op, a.substitute(var, value), b.substitute(var, value))
            }
        }
    }

    // Smart constructors. They fold constants and drop additive and
    // multiplicative identities so that repeated differentiation stays small.

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        match op {
            BinOp::Add => a.add(b),
            BinOp::Sub => a.sub(b),
            BinOp::Mul => a.mul(b),
            BinOp::Div => a.div(b),
            BinOp::Pow => a.pow(b),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Expr) -> Expr {
        match (self.as_num(), other.as_num()) {
            (Some(0.0), _) => other,
            (_, Some(0.0)) => self,
            (Some(x), Some(y)) => fold(x + y).unwrap_or_else(|| raw(BinOp::Add, self, other)),
            _ => match other {
                Expr::Neg(inner) => raw(BinOp::Sub, self, *inner),
                other => raw(BinOp::Add, self, other),
            },
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, other: Expr) -> Expr {
        match (self.as_num(), other.as_num()) {
            (_, Some(0.0)) => self,
            (Some(0.0), _) => other.neg(),
            (Some(x), Some(y)) => fold(x - y).unwrap_or_else(|| raw(BinOp::Sub, self, other)),
            _ => raw(BinOp::Sub, self, other),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Expr) -> Expr {
        match (self.as_num(), other.as_num()) {
            (Some(0.0), _) | (_, Some(0.0)) => Expr::Num(0.0),
            (Some(1.0), _) => other,
            (_, Some(1.0)) => self,
            (Some(-1.0), _) => other.neg(),
            (_, Some(-1.0)) => self.neg(),
            (Some(x), Some(y)) => fold(x * y).unwrap_or_else(|| raw(BinOp::Mul, self, other)),
            _ => raw(BinOp::Mul, self, other),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(self, other: Expr) -> Expr {
        match (self.as_num(), other.as_num()) {
            (_, Some(1.0)) => self,
            (Some(0.0), Some(y)) if y != 0.0 => Expr::Num(0.0),
            (Some(x), Some(y)) if y != 0.0 => {
                fold(x / y).unwrap_or_else(|| raw(BinOp::Div, self, other))
            }
            _ => raw(BinOp::Div, self, other),
        }
    }

    pub fn pow(self, other: Expr) -> Expr {
        match (self.as_num(), other.as_num()) {
            (_, Some(1.0)) => self,
            (_, Some(0.0)) => Expr::Num(1.0),
            (Some(x), Some(y)) => fold(x.powf(y)).unwrap_or_else(|| raw(BinOp::Pow, self, other)),
            _ => raw(BinOp::Pow, self, other),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Expr {
        match self {
            Expr::Num(x) => Expr::Num(-x),
            Expr::Neg(inner) => *inner,
            other => Expr::Neg(Box::new(other)),
        }
    }

    pub fn call(self, f: Func) -> Expr {
        if let Some(x) = self.as_num() {
            if let Ok(v) = eval::apply(f, x) {
                return Expr::Num(v);
            }
        }
        Expr::Call(f, Box::new(self))
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Bin(BinOp::Pow, ..) => 4,
            _ => 5,
        }
    }
}

fn raw(op: BinOp, a: Expr, b: Expr) -> Expr {
    Expr::Bin(op, Box::new(a), Box::new(b))
}

fn fold(x: f64) -> Option<Expr> {
    x.is_finite().then_some(Expr::Num(x))
}

fn write_num(f: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    let a = x.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        write!(f, "{x:e}")
    } else {
        write!(f, "{x}")
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    if e.precedence() < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(x) if x.is_sign_negative() => {
                f.write_str("(")?;
                write_num(f, *x)?;
                f.write_str(")")
            }
            Expr::Num(x) => write_num(f, *x),
            Expr::Var(Var::T) => f.write_str("t"),
            Expr::Var(Var::Eps) => f.write_str("eps"),
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_operand(f, a, 3)
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Bin(op, a, b) => {
                let (sym, left, right) = match op {
                    BinOp::Add => (" + ", 1, 2),
                    BinOp::Sub => (" - ", 1, 2),
                    BinOp::Mul => ("*", 2, 3),
                    BinOp::Div => ("/", 2, 3),
                    BinOp::Pow => ("^", 5, 3),
                };
                write_operand(f, a, left)?;
                f.write_str(sym)?;
                write_operand(f, b, right)
            }
        }
    }
}
