//! Named identity checks. Each suite rebuilds a closed-form identity from the
//! engine and reports every mismatch it finds.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::Result;
use crate::harmonic::HarmonicLogSeries;
use crate::logseq::{log_resum, log_sequence, log_taylor_coefficients, newton_expand, residual_term};
use crate::numbers::{binomial, factorial, frac, int, lower_factorial, rat_abs, rat_pow, rat_string, roman_coefficient, sign, stirling_second};
use crate::numeric::{evaluate_numeric, ln, rat_to_f64, to_decimal};
use crate::operator::{catalog, catalog_delta, expand_in_basis, lagrange_inversion, param, ShiftInvariantOperator};
use crate::polynomial::Polynomial;
use crate::sequence::{conjugate_sequence, connection_constants, generate_transfer, verify_binomial_identity, BinomialSequence};
use crate::series::TruncatedSeries;
use crate::Rat;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub order: i64,
    pub n: usize,
    pub depth: usize,
    pub params: BTreeMap<String, Rat>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { order: 16, n: 10, depth: 12, params: BTreeMap::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub identity: String,
    pub checks: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str, identity: &str) -> Self {
        SuiteReport { suite: suite.into(), identity: identity.into(), checks: 0, failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checks > 0
    }
}

pub const SUITES: &[&str] = &[
    "abel",
    "vandermonde",
    "expansion",
    "lagrange",
    "generating_function",
    "stirling",
    "connection_upper_lower",
    "residual",
    "pincherle",
    "logbinomial",
    "golden",
    "abel_numeric",
];

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Option<Result<SuiteReport>> {
    Some(match name {
        "abel" => abel(cfg),
        "vandermonde" => vandermonde(cfg),
        "expansion" => expansion(cfg),
        "lagrange" => lagrange(cfg),
        "generating_function" => generating_function(cfg),
        "stirling" => stirling(cfg),
        "connection_upper_lower" => connection_upper_lower(cfg),
        "residual" => residual(cfg),
        "pincherle" => pincherle(cfg),
        "logbinomial" => logbinomial(cfg),
        "golden" => golden(cfg),
        "abel_numeric" => abel_numeric(cfg),
        _ => return None,
    })
}

fn none() -> BTreeMap<String, Rat> {
    BTreeMap::new()
}

fn param_values(cfg: &SuiteConfig, key: &str, defaults: &[Rat]) -> Vec<Rat> {
    match cfg.params.get(key) {
        Some(v) => vec![v.clone()],
        None => defaults.to_vec(),
    }
}

/// Grid certification of the binomial identity for every term up to `n`.
pub fn binomial_suite(s: &BinomialSequence, n: usize, label: &str) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("binomial", "p_n(x+a) = sum_k C(n,k) p_k(a) p_{n-k}(x)");
    for k in 0..=n.min(s.len().saturating_sub(1)) {
        let res = verify_binomial_identity(s, k)?;
        r.check(res.is_ok(), || {
            let w = res.clone().unwrap_err();
            format!(
                "{label} n={k}: fails at x={}, a={} (lhs {}, rhs {})",
                rat_string(&w.x),
                rat_string(&w.a),
                rat_string(&w.lhs),
                rat_string(&w.rhs)
            )
        });
    }
    Ok(r)
}

fn abel(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("abel", "A_n(x+a) = sum_k C(n,k) A_k(a) A_{n-k}(x), A_n(x;b) = x(x-nb)^(n-1)");
    let order = cfg.order.max(cfg.n as i64 + 2);
    for b in param_values(cfg, "b", &[int(-1), int(1), frac(1, 2)]) {
        let f = catalog_delta("abel", &param("b", b.clone()), order)?;
        let s = generate_transfer(&f, cfg.n)?;
        for n in 0..=cfg.n {
            let closed = if n == 0 {
                Polynomial::one()
            } else {
                Polynomial::from_roots(&vec![&b * int(n as i64); n - 1]).mul_x()
            };
            r.check(s.term(n)? == &closed, || format!("b={b}: A_{n} differs from x(x-nb)^(n-1)"));
        }
        let sub = binomial_suite(&s, cfg.n, &format!("b={b}"))?;
        r.checks += sub.checks;
        r.failures.extend(sub.failures);
    }
    Ok(r)
}

fn lower_factorial_poly(n: usize) -> Polynomial {
    Polynomial::from_roots(&(0..n as i64).map(int).collect::<Vec<_>>())
}

fn upper_factorial_poly(n: usize) -> Polynomial {
    Polynomial::from_roots(&(0..n as i64).map(|i| int(-i)).collect::<Vec<_>>())
}

fn vandermonde(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("vandermonde", "(x+a)_n = sum_k C(n,k) (a)_k (x)_{n-k}");
    let f = catalog_delta("forward_difference", &none(), cfg.order.max(cfg.n as i64 + 2))?;
    let s = generate_transfer(&f, cfg.n)?;
    for n in 0..=cfg.n {
        r.check(s.term(n)? == &lower_factorial_poly(n), || format!("(x)_{n} is not x(x-1)...(x-n+1)"));
    }
    let sub = binomial_suite(&s, cfg.n, "lower factorial")?;
    r.checks += sub.checks;
    r.failures.extend(sub.failures);
    Ok(r)
}

fn expansion(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let count = 12usize;
    let order = cfg.order.max(count as i64 + 1);
    let mut r = SuiteReport::new("expansion", "T = sum_k c_k Q^k/k!: E^a in Delta, L in D, J in D");
    let delta = catalog_delta("forward_difference", &none(), order)?;
    let d = catalog_delta("derivative", &none(), order)?;
    for a in param_values(cfg, "a", &[int(3), frac(-1, 2), frac(5, 3)]) {
        let e = catalog("shift", &param("a", a.clone()), order)?;
        let c = expand_in_basis(&e, &delta, count)?;
        for (k, ck) in c.iter().enumerate() {
            r.check(*ck == lower_factorial(&a, k as u64), || format!("E^{a} in Delta: c_{k} = {ck}"));
        }
    }
    let lag = catalog("laguerre", &none(), order)?;
    let c = expand_in_basis(&lag, &d, count)?;
    for (k, ck) in c.iter().enumerate() {
        let expected = if k == 0 { Rat::zero() } else { -Rat::from_integer(factorial(k as u64)) };
        r.check(*ck == expected, || format!("L in D: c_{k} = {ck}"));
    }
    let j = catalog("bernoulli_op", &none(), order)?;
    let c = expand_in_basis(&j, &d, count)?;
    for (k, ck) in c.iter().enumerate() {
        r.check(*ck == frac(1, k as i64 + 1), || format!("J in D: c_{k} = {ck}"));
    }
    Ok(r)
}

fn lagrange_targets(cfg: &SuiteConfig, order: i64) -> Result<Vec<(String, crate::operator::DeltaOperator)>> {
    let mut ops = vec![
        ("forward_difference".to_string(), catalog_delta("forward_difference", &none(), order)?),
        ("laguerre".to_string(), catalog_delta("laguerre", &none(), order)?),
    ];
    for b in param_values(cfg, "b", &[int(1), int(-1), frac(1, 2)]) {
        ops.push((format!("abel(b={b})"), catalog_delta("abel", &param("b", b), order)?));
    }
    Ok(ops)
}

fn lagrange(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("lagrange", "[t^k] f^{-1}(t) = res t f'(t) f(t)^{-1-k}, against Newton inversion");
    let target = 20i64;
    let order = target + 1;
    let t = TruncatedSeries::variable(order + 2);
    for (name, f) in lagrange_targets(cfg, order)? {
        let lag = lagrange_inversion(&f, &t, target)?;
        let newton = f.inverse_series()?;
        for (i, c) in lag.iter().enumerate() {
            let k = i as i64 + 1;
            r.check(newton.coeff(k).as_ref() == Some(c), || format!("{name}: coefficient {k} differs"));
        }
    }
    Ok(r)
}

fn generating_function(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("generating_function", "sum_n p_n(x) t^n/n! = exp(x f^{-1}(t))");
    let deg = 8usize;
    let order = cfg.order.max(deg as i64 + 2);
    let mut ops = vec![];
    for name in ["derivative", "forward_difference", "backward_difference", "laguerre"] {
        ops.push((name.to_string(), catalog_delta(name, &none(), order)?));
    }
    for b in param_values(cfg, "b", &[int(1), int(-1), frac(1, 2)]) {
        ops.push((format!("abel(b={b})"), catalog_delta("abel", &param("b", b), order)?));
    }
    for (name, f) in ops {
        let s = generate_transfer(&f, deg)?;
        let inv = f.inverse_series()?.truncate(deg as i64 + 1);
        let mut power = TruncatedSeries::one(deg as i64 + 1);
        for k in 0..=deg {
            let kf = Rat::from_integer(factorial(k as u64));
            for n in 0..=deg {
                let lhs = s.term(n)?.coeff(k) / Rat::from_integer(factorial(n as u64));
                let rhs = power.coeff(n as i64).unwrap_or_default() / &kf;
                r.check(lhs == rhs, || format!("{name}: coefficient of x^{k} t^{n}"));
            }
            power = &power * &inv;
        }
    }
    Ok(r)
}

fn stirling(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("stirling", "conjugate sequence of Delta: phi_n(x) = sum_k S(n,k) x^k");
    let delta = catalog_delta("forward_difference", &none(), cfg.order.max(cfg.n as i64 + 1))?;
    let phi = conjugate_sequence(&delta, cfg.n)?;
    for n in 0..=cfg.n as u64 {
        for k in 0..=n {
            let c = phi.term(n as usize)?.coeff(k as usize);
            r.check(c == stirling_second(n, k), || format!("S({n},{k}) = {c}"));
        }
    }
    Ok(r)
}

fn connection_upper_lower(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(
        "connection_upper_lower",
        "(x)_n = sum_k (-1)^k C(n-1,k) n!/(n-k)! <x>_{n-k}",
    );
    let order = cfg.order.max(cfg.n as i64 + 2);
    let nabla = catalog_delta("backward_difference", &none(), order)?;
    let delta = catalog_delta("forward_difference", &none(), order)?;
    let c = connection_constants(&nabla, &delta, cfg.n)?;
    for n in 1..=cfg.n as i64 {
        for k in 0..n {
            let expected = sign(k) * binomial(n - 1, k as u64) * lower_factorial(&int(n), k as u64);
            let got = c.entry(n as usize, (n - k) as usize);
            r.check(got == expected, || format!("n={n} k={k}: {got} vs {expected}"));
        }
        r.check(c.entry(n as usize, 0).is_zero(), || format!("n={n}: nonzero constant column"));
    }
    let upper = generate_transfer(&nabla, cfg.n)?;
    for n in 0..=cfg.n {
        r.check(upper.term(n)? == &upper_factorial_poly(n), || format!("<x>_{n} mismatch"));
    }
    let rebuilt = c.apply_to(upper.terms())?;
    for (n, p) in rebuilt.iter().enumerate() {
        r.check(p == &lower_factorial_poly(n), || format!("rebuilt (x)_{n} mismatch"));
    }
    Ok(r)
}

fn window(lo: i64, terms: impl IntoIterator<Item = (i64, Rat)>) -> HarmonicLogSeries {
    HarmonicLogSeries::new(1, Some(lo), terms)
}

fn residual(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(
        "residual",
        "p_{-1} = f'(D) x^{-1}: Delta -> 1/(x+1), abel -> x(x+b)^-2, L_0 = log x + 1/x - 1/x^2 + 2/x^3 - 6/x^4 + ...",
    );
    let depth = cfg.depth as i64;
    let order = cfg.depth as i64 + 1;
    let delta = catalog_delta("forward_difference", &none(), order)?;
    let got = residual_term(&delta, cfg.depth)?;
    let expected = window(-depth, (0..depth).map(|k| (-1 - k, sign(k))));
    r.check(got == expected, || format!("Delta residual: {got}"));
    for b in param_values(cfg, "b", &[int(1), int(2), frac(-1, 2)]) {
        let abel = catalog_delta("abel", &param("b", b.clone()), order)?;
        let got = residual_term(&abel, cfg.depth)?;
        let expected = window(-depth, (0..depth).map(|k| (-1 - k, int(k + 1) * rat_pow(&-b.clone(), k))));
        r.check(got == expected, || format!("abel b={b} residual: {got}"));
    }
    let lag = catalog_delta("laguerre", &none(), order)?;
    let l0 = log_sequence(&lag, 0, cfg.depth)?;
    let prefix = [(0, int(1)), (-1, int(1)), (-2, int(-1)), (-3, int(2)), (-4, int(-6))];
    for (j, c) in prefix {
        r.check(l0.coeff(j) == Some(c.clone()), || format!("L_0 coefficient at degree {j}"));
    }
    for k in 1..depth {
        let expected = sign(k + 1) * Rat::from_integer(factorial(k as u64 - 1));
        r.check(l0.coeff(-k) == Some(expected), || format!("L_0 coefficient at degree {}", -k));
    }
    Ok(r)
}

fn pincherle(_cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("pincherle", "(D sigma - sigma D) s = s; D^k sigma - sigma D^k = k D^(k-1)");
    let d = |k: i64| ShiftInvariantOperator::derivative_power(k, k + 40);
    for t in 0..=2u32 {
        for n in -6..=6i64 {
            let s = HarmonicLogSeries::lambda(n, t);
            let lhs = &s.roman_shift().apply_operator(&d(1)) - &s.apply_operator(&d(1)).roman_shift();
            r.check(lhs.agrees_with(&s), || format!("t={t} n={n}: commutator gives {lhs}"));
            for k in 1..=5i64 {
                let lhs = &s.roman_shift().apply_operator(&d(k)) - &s.apply_operator(&d(k)).roman_shift();
                let rhs = s.apply_operator(&d(k - 1)).scale(&int(k));
                r.check(lhs.agrees_with(&rhs), || format!("t={t} n={n} k={k}"));
            }
        }
    }
    Ok(r)
}

fn logbinomial(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("logbinomial", "E^a lambda_n = sum_k [n|k] a^k lambda_{n-k}");
    let depth = cfg.depth as i64;
    for a in param_values(cfg, "a", &[int(1), frac(1, 2)]) {
        let e = catalog("shift", &param("a", a.clone()), depth)?;
        for n in -5..=-1i64 {
            let lhs = HarmonicLogSeries::lambda(n, 1).apply_operator(&e);
            let rhs = window(n - depth + 1, (0..depth).map(|k| (n - k, roman_coefficient(n, k) * rat_pow(&a, k))));
            r.check(lhs == rhs, || format!("a={a} n={n}: {lhs}"));
        }
    }
    Ok(r)
}

fn golden(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("golden", "1/x = sum_{m>=1} (m-1)! (x)_{-m}, (x)_{-m} = 1/((x+1)...(x+m))");
    let depth = cfg.depth;
    let s = HarmonicLogSeries::lambda(-1, 1);
    let c = newton_expand(&s, depth)?;
    for (&n, cn) in &c {
        let expected = Rat::from_integer(factorial((-n - 1) as u64));
        r.check(*cn == expected, || format!("coefficient at n={n}: {cn}"));
    }
    let delta = catalog_delta("forward_difference", &none(), depth as i64 + 1)?;
    let back = log_resum(&c, &delta, depth)?;
    let expected = window(-(depth as i64), [(-1, int(1))]);
    r.check(back == expected, || format!("resummation gives {back}"));
    r.notes.push(format!("resummation matches 1/x through x^-{depth}"));
    Ok(r)
}

fn abel_numeric(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(
        "abel_numeric",
        "b/(x+a) + log(x+a) = A_0(x) + sum_{k>=1} [0|k] A_k(a;b) A_{-k}(x); b/x^2 = sum_{n>=1} (nb)^n/n (x+nb)^(-n-1)",
    );
    let a = cfg.params.get("a").cloned().unwrap_or_else(|| int(1));
    let b = cfg.params.get("b").cloned().unwrap_or_else(|| int(2));
    let x = cfg.params.get("x").cloned().unwrap_or_else(|| int(5));
    let terms = 12i64;
    let digits = 20u32;
    let tol = frac(1, 10_000_000);

    // logarithmic binomial theorem for A_0 with twelve correction terms
    let depth = terms as usize + 1;
    let abel = catalog_delta("abel", &param("b", b.clone()), depth as i64 + 1)?;
    let mut rhs = log_sequence(&abel, 0, depth)?;
    for k in 1..=terms {
        let ak = &a * rat_pow(&(&a - &b * int(k)), k - 1);
        let term = log_sequence(&abel, -k, depth)?.scale(&(roman_coefficient(0, k) * ak));
        rhs = &rhs + &term;
    }
    let rhs = rhs.with_floor(-terms);
    let rhs_value = evaluate_numeric(&rhs, &x, digits)?.value;
    let xa = &x + &a;
    let lhs_value = &b / &xa + ln(&xa, digits + 4)?;
    let diff = rat_abs(&(&lhs_value - &rhs_value));
    r.check(diff < tol, || format!("|LHS - RHS| = {} at twelve terms", to_decimal(&diff, 12)));
    r.notes.push(format!(
        "a={a} b={b} x={x}: LHS {} RHS {} |diff| {}",
        to_decimal(&lhs_value, 12),
        to_decimal(&rhs_value, 12),
        to_decimal(&diff, 12)
    ));

    // closed-form terms summed pointwise, for comparison only
    let mut pointwise = &b / &x + ln(&x, digits + 4)?;
    for k in 1..=terms {
        let num = sign(k + 1) * &a * rat_pow(&(&a - &b * int(k)), k - 1) * &x;
        let den = int(k) * rat_pow(&(&x + &b * int(k)), k + 1);
        pointwise += num / den;
    }
    r.notes.push(format!("pointwise sum of the same twelve closed-form terms: {}", to_decimal(&pointwise, 12)));

    // corrected Taylor identity: coefficients of log x over the Abel log sequence
    let target = &b / (&x * &x);
    let mut previous: Option<Rat> = None;
    let mut settled = None;
    for depth in [12usize, 24, 48] {
        let f = catalog_delta("abel", &param("b", b.clone()), depth as i64 + 2)?;
        let c = log_taylor_coefficients(&HarmonicLogSeries::lambda(0, 1), &f, depth)?;
        for (&n, cn) in c.iter().filter(|(n, _)| **n < 0) {
            let m = -n;
            let expected = -rat_pow(&(&b * int(m)), m) / int(m);
            r.check(*cn == expected, || format!("log x coefficient on A_{n}: {cn}"));
        }
        let tail: BTreeMap<i64, Rat> = c.into_iter().filter(|(n, _)| *n < 0).collect();
        let sum = log_resum(&tail, &f, depth)?;
        let exact = window(-(depth as i64) + 1, [(-1, -b.clone())]);
        r.check(sum.agrees_with(&exact), || format!("depth {depth}: sum of A_-n terms is not -b/x"));
        let value = -evaluate_numeric(&sum, &x, digits)?.value / &x;
        let stable = previous.as_ref().is_some_and(|p| rat_abs(&(p - &value)) < tol);
        previous = Some(value.clone());
        if stable {
            settled = Some((depth, value));
            break;
        }
    }
    match settled {
        Some((depth, value)) => {
            let diff = rat_abs(&(&value - &target));
            r.check(diff < tol, || format!("corrected identity off by {}", to_decimal(&diff, 12)));
            r.notes.push(format!("corrected identity settles at depth {depth}: {}", to_decimal(&value, 12)));
        }
        None => r.check(false, || "corrected identity did not settle".into()),
    }
    // the same series summed at the point: each (x+nb)^(-n-1) expands in
    // 1/x only while nb < x, so the pointwise sum need not agree
    let (bf, xf) = (rat_to_f64(&b), rat_to_f64(&x));
    let pointwise: f64 = (1..=1u32 << 20)
        .map(|n| {
            let n = n as f64;
            let nb = n * bf;
            (-n * (xf / nb).ln_1p()).exp() / (n * (xf + nb))
        })
        .sum();
    r.notes.push(format!(
        "pointwise sum of the corrected series over 2^20 terms: {pointwise:.10} (expansions in 1/x diverge once nb >= x)"
    ));

    // the printed exponent -n-2 leaves the x^-2 coefficient at 0 instead of b
    let depth = 12i64;
    let mut printed = window(-depth, []);
    let mut corrected = window(-depth, []);
    for n in 1..depth {
        let nb = &b * int(n);
        let coef = rat_pow(&nb, n) / int(n);
        let e = catalog("shift", &param("a", nb), depth)?;
        printed = &printed + &HarmonicLogSeries::lambda(-n - 2, 1).apply_operator(&e).scale(&coef);
        corrected = &corrected + &HarmonicLogSeries::lambda(-n - 1, 1).apply_operator(&e).scale(&coef);
    }
    let expected = window(-depth, [(-2, b.clone())]);
    r.check(corrected.with_floor(-depth).agrees_with(&expected), || "corrected form is not b x^-2".into());
    let printed_ok = printed.with_floor(-depth).agrees_with(&expected);
    r.notes.push(format!(
        "with exponent -n-2 the x^-2 coefficient is {} (identity {})",
        printed.coeff(-2).map(|c| rat_string(&c)).unwrap_or_default(),
        if printed_ok { "holds" } else { "fails" }
    ));
    Ok(r)
}
