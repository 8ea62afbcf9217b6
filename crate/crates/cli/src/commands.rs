//! Command dispatch. Each command returns a [`CommandResult`]; rendering is
//! left to the output module.

use std::collections::BTreeMap;

use rayon::prelude::*;
use umbra_core::identities::{binomial_suite, run_suite, SuiteConfig, SuiteReport, SUITES};
use umbra_core::logseq::LogBinomialSequence;
use umbra_core::numeric::{evaluate_numeric, NumericValue};
use umbra_core::operator::{expand_in_basis, lagrange_inversion};
use umbra_core::sequence::{connection_constants, generate_transfer};
use umbra_core::{DeltaOperator, HarmonicLogSeries, Polynomial, Rat, ShiftInvariantOperator, TruncatedSeries};

use crate::ast::Expr;
use crate::cli::{parse_range, parse_rational, Command, Settings};
use crate::elaborate::elaborate;
use crate::error::CliError;
use crate::parser::parse_operator;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Polynomials(Vec<(i64, Polynomial)>),
    LogWindows(Vec<(i64, HarmonicLogSeries)>),
    Coefficients { basis: &'static str, coeffs: Vec<(i64, Rat)>, newton: Option<bool> },
    Matrix(Vec<Vec<Rat>>),
    Reports { n: usize, reports: Vec<SuiteReport> },
    Value { n: i64, at: Rat, value: NumericValue },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    pub command: &'static str,
    /// normalized inputs: operators pretty-printed, parameters as rationals
    pub echo: Vec<(&'static str, String)>,
    pub settings: Settings,
    pub status: Status,
    pub payload: Payload,
}

struct Ctx {
    settings: Settings,
    echo: Vec<(&'static str, String)>,
}

impl Ctx {
    fn operator(&mut self, key: &'static str, text: &str) -> Result<Expr, CliError> {
        let e = parse_operator(text, &self.settings.params)?;
        self.echo.push((key, e.to_string()));
        Ok(e)
    }

    fn series(&mut self, key: &'static str, text: &str, order: i64) -> Result<TruncatedSeries, CliError> {
        let e = self.operator(key, text)?;
        Ok(elaborate(&e, &self.settings.params, order)?)
    }

    fn delta(&mut self, key: &'static str, text: &str, order: i64) -> Result<DeltaOperator, CliError> {
        Ok(DeltaOperator::from_series(self.series(key, text, order)?)?)
    }

    fn finish(self, command: &'static str, status: Status, payload: Payload) -> CommandResult {
        CommandResult { command, echo: self.echo, settings: self.settings, status, payload }
    }
}

fn index_range(n: Option<i64>, range: Option<&str>, symmetric: bool) -> Result<(i64, i64), CliError> {
    match (n, range) {
        (_, Some(r)) => parse_range(r),
        (Some(n), None) if n >= 0 => Ok((if symmetric { -n } else { 0 }, n)),
        (Some(n), None) => Err(CliError::Usage(format!("--n must be non-negative, got {n}"))),
        (None, None) => Ok((if symmetric { -5 } else { 0 }, 10)),
    }
}

pub fn run(command: &Command) -> Result<CommandResult, CliError> {
    match command {
        Command::Seq(a) => {
            let mut ctx = Ctx { settings: a.common.resolve()?, echo: vec![] };
            let (lo, hi) = index_range(a.n, a.range.as_deref(), false)?;
            if lo < 0 {
                return Err(CliError::Usage("polynomial sequences start at index 0; use logseq".into()));
            }
            let f = ctx.delta("op", &a.op, ctx.settings.order)?;
            let s = generate_transfer(&f, hi as usize)?;
            let rows = (lo..=hi).map(|n| (n, s.terms()[n as usize].clone())).collect();
            Ok(ctx.finish("seq", Status::Ok, Payload::Polynomials(rows)))
        }
        Command::Logseq(a) => {
            let mut ctx = Ctx { settings: a.common.resolve()?, echo: vec![] };
            let (lo, hi) = index_range(a.n, a.range.as_deref(), true)?;
            let f = ctx.delta("op", &a.op, ctx.settings.order)?;
            let s = LogBinomialSequence::new(f, ctx.settings.depth)?;
            let rows = (lo..=hi)
                .into_par_iter()
                .map(|n| s.term(n).map(|t| (n, t)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ctx.finish("logseq", Status::Ok, Payload::LogWindows(rows)))
        }
        Command::Expand(a) => {
            let mut ctx = Ctx { settings: a.common.resolve()?, echo: vec![] };
            let order = ctx.settings.order;
            let t = ShiftInvariantOperator::new(ctx.series("op", &a.op, order)?);
            let q = ctx.delta("op2", a.op2.as_deref().unwrap_or("D"), order)?;
            let c = expand_in_basis(&t, &q, a.n.unwrap_or(10) + 1)?;
            let coeffs = c.into_iter().enumerate().map(|(k, c)| (k as i64, c)).collect();
            Ok(ctx.finish("expand", Status::Ok, Payload::Coefficients { basis: "Q^k/k!", coeffs, newton: None }))
        }
        Command::Invert(a) => {
            let mut ctx = Ctx { settings: a.common.resolve()?, echo: vec![] };
            let order = ctx.settings.order;
            let f = ctx.delta("op", &a.op, order)?;
            let k_max = order - 1;
            let lag = lagrange_inversion(&f, &TruncatedSeries::variable(order + 2), k_max)?;
            let newton = f.inverse_series()?;
            let coeffs: Vec<(i64, Rat)> = lag.into_iter().enumerate().map(|(i, c)| (i as i64 + 1, c)).collect();
            let agree = coeffs.iter().all(|(k, c)| newton.coeff(*k).as_ref() == Some(c));
            let status = if agree { Status::Ok } else { Status::Fail };
            Ok(ctx.finish("invert", status, Payload::Coefficients { basis: "t^k", coeffs, newton: Some(agree) }))
        }
        Command::Connect(a) => {
            let mut ctx = Ctx { settings: a.common.resolve()?, echo: vec![] };
            let order = ctx.settings.order;
            let op2 = a.op2.as_deref().ok_or_else(|| CliError::Usage("connect needs --op2".into()))?;
            let g = ctx.delta("op", &a.op, order)?;
            let h = ctx.delta("op2", op2, order)?;
            let c = connection_constants(&g, &h, a.n.unwrap_or(10))?;
            Ok(ctx.finish("connect", Status::Ok, Payload::Matrix(c.rows().to_vec())))
        }
        Command::Verify(a) => verify(a),
        Command::Eval(a) => {
            let mut ctx = Ctx { settings: a.common.resolve()?, echo: vec![] };
            let at = parse_rational(&a.at)?;
            let f = ctx.delta("op", &a.op, ctx.settings.order)?;
            let s = LogBinomialSequence::new(f, ctx.settings.depth)?;
            let value = evaluate_numeric(&s.term(a.n)?, &at, a.digits)?;
            ctx.echo.push(("at", umbra_core::numbers::rat_string(&at)));
            Ok(ctx.finish("eval", Status::Ok, Payload::Value { n: a.n, at, value }))
        }
    }
}

fn verify(a: &crate::cli::VerifyArgs) -> Result<CommandResult, CliError> {
    let mut ctx = Ctx { settings: a.common.resolve()?, echo: vec![] };
    let n = a.n.unwrap_or(10);
    let mut names: Vec<&str> = Vec::new();
    for s in &a.suites {
        match s.as_str() {
            "all" => names.extend(SUITES),
            "binomial" => names.push("binomial"),
            other if SUITES.contains(&other) => names.push(other),
            other => {
                return Err(CliError::Usage(format!("unknown suite `{other}`; known: all, binomial, {}", SUITES.join(", "))))
            }
        }
    }
    let binomial = if names.contains(&"binomial") {
        let text = a.op.as_deref().ok_or_else(|| CliError::Usage("the binomial suite needs --op".into()))?;
        let order = ctx.settings.order;
        let f = ctx.delta("op", text, order)?;
        let mut s = generate_transfer(&f, n)?;
        if let Some(k) = a.corrupt {
            let bad = s.term(k)? + &Polynomial::one();
            s = s.with_term(k, bad);
            ctx.echo.push(("corrupt", k.to_string()));
        }
        Some(binomial_suite(&s, n, &ctx.echo[0].1)?)
    } else {
        None
    };
    let cfg = SuiteConfig { order: ctx.settings.order, n, depth: ctx.settings.depth, params: ctx.settings.params.clone() };
    let reports = names
        .par_iter()
        .map(|name| match *name {
            "binomial" => Ok(binomial.clone().unwrap()),
            other => run_suite(other, &cfg).unwrap(),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let status = if reports.iter().all(SuiteReport::passed) { Status::Ok } else { Status::Fail };
    Ok(ctx.finish("verify", status, Payload::Reports { n, reports }))
}

/// Parameters sorted by name, as strings.
pub fn param_echo(params: &BTreeMap<String, Rat>) -> Vec<(String, String)> {
    params.iter().map(|(k, v)| (k.clone(), umbra_core::numbers::rat_string(v))).collect()
}
