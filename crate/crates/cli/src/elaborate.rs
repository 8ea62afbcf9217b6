//! Turns an operator expression into its series in `D`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use umbra_core::operator::catalog;
use umbra_core::{Rat, Result, TruncatedSeries};

use crate::ast::{BinOp, Expr, Func};

fn series_at(e: &Expr, params: &BTreeMap<String, Rat>, order: i64) -> Result<TruncatedSeries> {
    let go = |e: &Expr| series_at(e, params, order);
    Ok(match e {
        Expr::Int(n) => TruncatedSeries::constant(Rat::from_integer(BigInt::from(n.clone())), order),
        Expr::D => TruncatedSeries::variable(order),
        Expr::Param(name) => TruncatedSeries::constant(params[name].clone(), order),
        Expr::Named(name) => catalog(name, params, order)?.series().clone(),
        Expr::Neg(inner) => -&go(inner)?,
        Expr::Binary(op, l, r) => {
            let (l, r) = (go(l)?, go(r)?);
            match op {
                BinOp::Add => &l + &r,
                BinOp::Sub => &l - &r,
                BinOp::Mul => &l * &r,
                BinOp::Div => &l * &r.reciprocal()?,
            }
        }
        Expr::Pow(base, k) => go(base)?.powi(*k)?,
        Expr::Call(Func::Exp, arg) => go(arg)?.exp()?,
        Expr::Call(Func::Log, arg) => go(arg)?.log()?,
        Expr::Call(Func::Compose(name), arg) => catalog(name, params, order)?.series().compose(&go(arg)?)?,
    })
}

/// Series of `e` known through `t^(order-1)`. Divisions lose precision, so
/// leaves are built at a raised order until the result reaches the target;
/// if it never does, the best attempt is returned with its honest order.
pub fn elaborate(e: &Expr, params: &BTreeMap<String, Rat>, order: i64) -> Result<TruncatedSeries> {
    let limit = 4 * order.max(1) + 16;
    let mut inner = order;
    loop {
        let s = series_at(e, params, inner)?;
        if s.order() >= order {
            return Ok(s.truncate(order));
        }
        if inner >= order + limit {
            return Ok(s);
        }
        inner += (order - s.order()).max(1);
    }
}
