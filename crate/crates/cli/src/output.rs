//! Renderers. Rationals are always written exactly: "p/q" strings in json
//! and csv, `\frac{p}{q}` in latex.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};
use umbra_core::harmonic::HarmonicLogSeries;
use umbra_core::identities::SuiteReport;
use umbra_core::numbers::rat_string;
use umbra_core::{Polynomial, Rat};

use crate::cli::Format;
use crate::commands::{param_echo, CommandResult, Payload, Status};

pub fn render(r: &CommandResult, format: Format) -> String {
    match format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&to_json(r)).expect("json values serialize");
            text.push('\n');
            text
        }
        Format::Csv => to_csv(r),
        Format::Latex => to_latex(r),
        Format::Plain => to_plain(r),
    }
}

fn coeff_map(terms: impl IntoIterator<Item = (i64, Rat)>) -> Value {
    Value::Object(terms.into_iter().map(|(k, c)| (k.to_string(), Value::String(rat_string(&c)))).collect())
}

fn poly_terms(p: &Polynomial) -> Vec<(i64, Rat)> {
    p.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k as i64, c.clone())).collect()
}

fn window_terms(s: &HarmonicLogSeries) -> Vec<(i64, Rat)> {
    s.terms().rev().map(|(j, c)| (j, c.clone())).collect()
}

fn report_json(r: &SuiteReport) -> Value {
    json!({
        "suite": r.suite,
        "identity": r.identity,
        "status": if r.passed() { "pass" } else { "fail" },
        "checks": r.checks,
        "failures": r.failures,
        "notes": r.notes,
    })
}

pub fn to_json(r: &CommandResult) -> Value {
    let mut out = Map::new();
    out.insert("command".into(), json!(r.command));
    for (k, v) in &r.echo {
        out.insert((*k).into(), json!(v));
    }
    let params: Map<String, Value> = param_echo(&r.settings.params).into_iter().map(|(k, v)| (k, json!(v))).collect();
    out.insert("params".into(), Value::Object(params));
    out.insert("order".into(), json!(r.settings.order));
    out.insert("status".into(), json!(if r.status == Status::Ok { "ok" } else { "fail" }));
    match &r.payload {
        Payload::Polynomials(rows) => {
            let rows: Vec<Value> =
                rows.iter().map(|(n, p)| json!({"n": n, "coeffs": coeff_map(poly_terms(p)), "basis": "x^k"})).collect();
            out.insert("rows".into(), rows.into());
        }
        Payload::LogWindows(rows) => {
            out.insert("depth".into(), json!(r.settings.depth));
            let rows: Vec<Value> = rows
                .iter()
                .map(|(n, s)| {
                    json!({
                        "n": n,
                        "coeffs": coeff_map(window_terms(s)),
                        "basis": "lambda_k^(t)",
                        "floor": s.floor(),
                        "top": s.top(),
                        "order_t": s.order_t(),
                    })
                })
                .collect();
            out.insert("rows".into(), rows.into());
        }
        Payload::Coefficients { basis, coeffs, newton } => {
            out.insert("basis".into(), json!(basis));
            out.insert("coeffs".into(), coeff_map(coeffs.iter().cloned()));
            if let Some(agree) = newton {
                out.insert("newton".into(), json!(if *agree { "match" } else { "mismatch" }));
            }
        }
        Payload::Matrix(rows) => {
            let rows: Vec<Value> = rows
                .iter()
                .enumerate()
                .map(|(n, row)| {
                    let terms = row.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k as i64, c.clone()));
                    json!({"n": n, "coeffs": coeff_map(terms), "basis": "s_k"})
                })
                .collect();
            out.insert("rows".into(), rows.into());
        }
        Payload::Reports { n, reports } => {
            out.insert("n".into(), json!(n));
            out.insert("suites".into(), reports.iter().map(report_json).collect::<Vec<_>>().into());
        }
        Payload::Value { n, value, .. } => {
            out.insert("n".into(), json!(n));
            out.insert("depth".into(), json!(r.settings.depth));
            out.insert("digits".into(), json!(value.digits));
            out.insert("value".into(), json!(value.decimal()));
            out.insert("tail_bound".into(), json!(value.tail_decimal()));
        }
    }
    Value::Object(out)
}

fn to_csv(r: &CommandResult) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut row = |fields: &[String]| w.write_record(fields).expect("writing to memory");
    let s = |x: &dyn ToString| x.to_string();
    match &r.payload {
        Payload::Polynomials(rows) => {
            row(&[s(&"n"), s(&"degree"), s(&"coeff")]);
            for (n, p) in rows {
                for (k, c) in poly_terms(p) {
                    row(&[s(n), s(&k), rat_string(&c)]);
                }
            }
        }
        Payload::LogWindows(rows) => {
            row(&["n", "degree", "coeff", "order_t", "floor", "top"].map(String::from));
            for (n, w) in rows {
                let floor = w.floor().map(|f| f.to_string()).unwrap_or_default();
                for (k, c) in window_terms(w) {
                    row(&[s(n), s(&k), rat_string(&c), s(&w.order_t()), floor.clone(), s(&w.top())]);
                }
            }
        }
        Payload::Coefficients { coeffs, .. } => {
            row(&[s(&"k"), s(&"coeff")]);
            for (k, c) in coeffs {
                row(&[s(k), rat_string(c)]);
            }
        }
        Payload::Matrix(rows) => {
            row(&[s(&"n"), s(&"k"), s(&"coeff")]);
            for (n, cs) in rows.iter().enumerate() {
                for (k, c) in cs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    row(&[s(&n), s(&k), rat_string(c)]);
                }
            }
        }
        Payload::Reports { reports, .. } => {
            row(&["suite", "status", "checks", "failures"].map(String::from));
            for rep in reports {
                let status = if rep.passed() { "pass" } else { "fail" };
                row(&[rep.suite.clone(), s(&status), s(&rep.checks), s(&rep.failures.len())]);
            }
        }
        Payload::Value { n, at, value } => {
            row(&["n", "at", "value", "tail_bound"].map(String::from));
            row(&[s(n), rat_string(at), value.decimal(), value.tail_decimal().unwrap_or_default()]);
        }
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
}

fn latex_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        let sign = if r.is_negative() { "-" } else { "" };
        format!("{sign}\\frac{{{}}}{{{}}}", r.numer().abs(), r.denom())
    }
}

/// Signed sum of `coefficient * basis(k)`, highest index first.
fn latex_sum(terms: &[(i64, Rat)], basis: impl Fn(i64) -> String) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (k, c)) in terms.iter().enumerate() {
        let b = basis(*k);
        let mag = c.abs();
        match (i, c.is_negative()) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if b.is_empty() {
            out.push_str(&latex_rat(&mag));
        } else if mag.is_one() {
            out.push_str(&b);
        } else {
            let _ = write!(out, "{} {b}", latex_rat(&mag));
        }
    }
    out
}

fn latex_power(k: i64) -> String {
    match k {
        0 => String::new(),
        1 => "x".into(),
        _ => format!("x^{{{k}}}"),
    }
}

fn to_latex(r: &CommandResult) -> String {
    let mut out = String::new();
    match &r.payload {
        Payload::Polynomials(rows) => {
            for (n, p) in rows {
                let mut terms = poly_terms(p);
                terms.reverse();
                let _ = writeln!(out, "p_{{{n}}}(x) &= {} \\\\", latex_sum(&terms, latex_power));
            }
        }
        Payload::LogWindows(rows) => {
            for (n, w) in rows {
                let t = w.order_t();
                let mut body = latex_sum(&window_terms(w), |k| format!("\\lambda_{{{k}}}^{{({t})}}"));
                if w.floor().is_some() {
                    body.push_str(" + \\cdots");
                }
                let _ = writeln!(out, "p_{{{n}}} &= {body} \\\\");
            }
        }
        Payload::Coefficients { basis, coeffs, newton } => {
            let name = if *basis == "t^k" { "a" } else { "c" };
            for (k, c) in coeffs {
                let _ = writeln!(out, "{name}_{{{k}}} &= {} \\\\", latex_rat(c));
            }
            if let Some(agree) = newton {
                let _ = writeln!(out, "% Newton inversion: {}", if *agree { "match" } else { "mismatch" });
            }
        }
        Payload::Matrix(rows) => {
            out.push_str("\\begin{pmatrix}\n");
            for row in rows {
                let cells: Vec<String> = row.iter().map(latex_rat).collect();
                let _ = writeln!(out, "{} \\\\", cells.join(" & "));
            }
            out.push_str("\\end{pmatrix}\n");
        }
        Payload::Reports { reports, .. } => {
            out.push_str("\\begin{tabular}{lrr}\nsuite & status & checks \\\\\n\\hline\n");
            for rep in reports {
                let status = if rep.passed() { "pass" } else { "fail" };
                let _ = writeln!(out, "\\texttt{{{}}} & {status} & {} \\\\", rep.suite.replace('_', "\\_"), rep.checks);
            }
            out.push_str("\\end{tabular}\n");
        }
        Payload::Value { n, at, value } => {
            let _ = writeln!(out, "p_{{{n}}}\\left({}\\right) \\approx {}", latex_rat(at), value.decimal());
        }
    }
    out
}

fn to_plain(r: &CommandResult) -> String {
    let mut out = String::new();
    match &r.payload {
        Payload::Polynomials(rows) => {
            for (n, p) in rows {
                let _ = writeln!(out, "p_{n}(x) = {p}");
            }
        }
        Payload::LogWindows(rows) => {
            for (n, w) in rows {
                let _ = writeln!(out, "p_{n} = {w}");
            }
        }
        Payload::Coefficients { basis, coeffs, newton } => {
            let name = if *basis == "t^k" { "a" } else { "c" };
            for (k, c) in coeffs {
                let _ = writeln!(out, "{name}_{k} = {}", rat_string(c));
            }
            if let Some(agree) = newton {
                let _ = writeln!(out, "newton: {}", if *agree { "match" } else { "mismatch" });
            }
        }
        Payload::Matrix(rows) => {
            for row in rows {
                let cells: Vec<String> = row.iter().map(rat_string).collect();
                let _ = writeln!(out, "{}", cells.join(" "));
            }
        }
        Payload::Reports { reports, .. } => {
            for rep in reports {
                let status = if rep.passed() { "pass" } else { "FAIL" };
                let _ = writeln!(out, "{}: {status} ({} checks) {}", rep.suite, rep.checks, rep.identity);
                for f in &rep.failures {
                    let _ = writeln!(out, "  failure: {f}");
                }
                for note in &rep.notes {
                    let _ = writeln!(out, "  note: {note}");
                }
            }
        }
        Payload::Value { n, at, value } => {
            let tail = value.tail_decimal().map(|t| format!(" (tail ~ {t})")).unwrap_or_default();
            let _ = writeln!(out, "p_{n}({}) = {}{tail}", rat_string(at), value.decimal());
        }
    }
    out
}
