//! Operator expressions and their canonical rendering.

use std::fmt;

use num_bigint::BigUint;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

/// Unary functions applied with call syntax. Catalog names applied to an
/// argument mean composition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Compose(String),
}

impl Func {
    pub fn name(&self) -> &str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Compose(name) => name,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigUint),
    D,
    /// catalog operator used as a value
    Named(String),
    Param(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    fn is_atom(&self) -> bool {
        !matches!(self, Expr::Binary(..) | Expr::Pow(..))
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_atom() {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }

    // operand of a binary operator; the right side of a same-level
    // operator needs parentheses since everything is left-associative
    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>, level: u8, right: bool) -> fmt::Result {
        let wrap = match self {
            Expr::Binary(op, ..) => op.precedence() < level || (right && op.precedence() == level),
            _ => false,
        };
        if wrap {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::D => write!(f, "D"),
            Expr::Named(name) | Expr::Param(name) => write!(f, "{name}"),
            Expr::Neg(e) => {
                write!(f, "-")?;
                e.fmt_atom(f)
            }
            Expr::Binary(op, l, r) => {
                l.fmt_operand(f, op.precedence(), false)?;
                write!(f, " {} ", op.symbol())?;
                r.fmt_operand(f, op.precedence(), true)
            }
            Expr::Pow(base, k) => {
                base.fmt_atom(f)?;
                write!(f, "^{k}")
            }
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}
