//! Acceptance criteria 1-13. Every check compares the engine against an
//! oracle computed here: closed forms, brute-force counts, Laurent
//! expansions built by hand, or plain floating-point sums.
//!
//! Prints one line per criterion and exits nonzero if any fails.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use num_traits::{One, Zero};
use umbra_core::harmonic::HarmonicLogSeries;
use umbra_core::identities::{run_suite, SuiteConfig};
use umbra_core::logseq::{log_sequence, newton_expand, residual_term};
use umbra_core::numeric::{evaluate_numeric, rat_to_f64};
use umbra_core::operator::{catalog, catalog_delta, expand_in_basis, lagrange_inversion, param, ShiftInvariantOperator};
use umbra_core::sequence::{conjugate_sequence, connection_constants, generate_transfer, verify_binomial_identity};
use umbra_core::{DeltaOperator, Polynomial, Rat, TruncatedSeries};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
type InverseCase = (String, DeltaOperator, Box<dyn Fn(i64) -> Rat>);

const ORDER: i64 = 16;

fn r(p: i64, q: i64) -> Rat {
    Rat::new(p.into(), q.into())
}

fn n_(k: i64) -> Rat {
    Rat::from_integer(k.into())
}

fn fact(n: i64) -> Rat {
    (1..=n).fold(Rat::one(), |acc, i| acc * n_(i))
}

fn falling(x: &Rat, n: i64) -> Rat {
    (0..n).fold(Rat::one(), |acc, i| acc * (x - n_(i)))
}

fn rising(x: &Rat, n: i64) -> Rat {
    (0..n).fold(Rat::one(), |acc, i| acc * (x + n_(i)))
}

/// Generalized binomial coefficient, any integer top.
fn choose(n: i64, k: i64) -> Rat {
    falling(&n_(n), k) / fact(k)
}

fn powr(x: &Rat, k: i64) -> Rat {
    if k >= 0 {
        (0..k).fold(Rat::one(), |acc, _| acc * x)
    } else {
        Rat::one() / powr(x, -k)
    }
}

fn horner(p: &Polynomial, x: &Rat) -> Rat {
    p.coeffs().iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
}

fn none() -> BTreeMap<String, Rat> {
    BTreeMap::new()
}

fn grid(n: i64) -> Vec<Rat> {
    (0..=n).map(|i| r(2 * i - n - 1, 3)).collect()
}

/// Checks `p == closed` on n+1 points and the binomial identity of the
/// closed form on an (n+1)^2 grid; both sides have degree <= n per variable.
fn certify_binomial(s: &[Polynomial], closed: impl Fn(i64, &Rat) -> Rat, label: &str) -> Result<usize, String> {
    let mut checks = 0;
    for (n, p) in s.iter().enumerate() {
        let n = n as i64;
        for x in grid(n) {
            if horner(p, &x) != closed(n, &x) {
                return Err(format!("{label}: term {n} differs from the closed form at x={x}"));
            }
            checks += 1;
        }
        for x in grid(n) {
            for a in grid(n) {
                let lhs = closed(n, &(&x + &a));
                let rhs = (0..=n).fold(Rat::zero(), |acc, k| acc + choose(n, k) * closed(k, &a) * closed(n - k, &x));
                if lhs != rhs {
                    return Err(format!("{label}: binomial identity fails at n={n} x={x} a={a}"));
                }
                checks += 1;
            }
        }
    }
    Ok(checks)
}

fn criterion_1() -> Outcome {
    let mut checks = 0;
    for b in [n_(-1), n_(1), r(1, 2)] {
        let f = catalog_delta("abel", &param("b", b.clone()), ORDER).map_err(|e| e.to_string())?;
        let s = generate_transfer(&f, 8).map_err(|e| e.to_string())?;
        let closed = |n: i64, x: &Rat| if n == 0 { Rat::one() } else { x * powr(&(x - &b * n_(n)), n - 1) };
        checks += certify_binomial(s.terms(), closed, &format!("b={b}"))?;
        for n in 0..=8 {
            if verify_binomial_identity(&s, n).map_err(|e| e.to_string())?.is_err() {
                return Err(format!("engine grid check fails for b={b} n={n}"));
            }
        }
    }
    Ok(format!("n <= 8, b in {{-1, 1, 1/2}}, {checks} exact point checks"))
}

fn criterion_2() -> Outcome {
    let f = catalog_delta("forward_difference", &none(), ORDER).map_err(|e| e.to_string())?;
    let s = generate_transfer(&f, 10).map_err(|e| e.to_string())?;
    let checks = certify_binomial(s.terms(), |n, x| falling(x, n), "lower factorial")?;
    Ok(format!("n <= 10, {checks} exact point checks"))
}

fn criterion_3() -> Outcome {
    let count = 13;
    let delta = catalog_delta("forward_difference", &none(), ORDER).map_err(|e| e.to_string())?;
    let d = catalog_delta("derivative", &none(), ORDER).map_err(|e| e.to_string())?;
    let expand = |t: &ShiftInvariantOperator, q: &DeltaOperator| expand_in_basis(t, q, count).map_err(|e| e.to_string());
    for a in [n_(3), r(-1, 2), r(5, 3)] {
        let e = catalog("shift", &param("a", a.clone()), ORDER).map_err(|e| e.to_string())?;
        for (k, c) in expand(&e, &delta)?.iter().enumerate() {
            if *c != falling(&a, k as i64) {
                return Err(format!("E^{a} in Delta: c_{k} = {c}"));
            }
        }
    }
    let lag = catalog("laguerre", &none(), ORDER).map_err(|e| e.to_string())?;
    for (k, c) in expand(&lag, &d)?.iter().enumerate() {
        let expected = if k == 0 { Rat::zero() } else { -fact(k as i64) };
        if *c != expected {
            return Err(format!("L in D: c_{k} = {c}"));
        }
    }
    let j = catalog("bernoulli_op", &none(), ORDER).map_err(|e| e.to_string())?;
    for (k, c) in expand(&j, &d)?.iter().enumerate() {
        if *c != r(1, k as i64 + 1) {
            return Err(format!("J in D: c_{k} = {c}"));
        }
    }
    Ok("E^a in Delta, L in D, J in D through k = 12".into())
}

fn criterion_4() -> Outcome {
    let target = 20;
    let order = target + 1;
    let t = TruncatedSeries::variable(order + 2);
    let mut cases: Vec<InverseCase> = vec![
        (
            "Delta".into(),
            catalog_delta("forward_difference", &none(), order).map_err(|e| e.to_string())?,
            Box::new(|k| r(if k % 2 == 1 { 1 } else { -1 }, k)),
        ),
        ("laguerre".into(), catalog_delta("laguerre", &none(), order).map_err(|e| e.to_string())?, Box::new(|_| n_(-1))),
    ];
    for b in [n_(1), n_(-1), r(1, 2)] {
        let f = catalog_delta("abel", &param("b", b.clone()), order).map_err(|e| e.to_string())?;
        cases.push((format!("abel b={b}"), f, Box::new(move |k| powr(&(-&b * n_(k)), k - 1) / fact(k))));
    }
    for (name, f, closed) in &cases {
        let lag = lagrange_inversion(f, &t, target).map_err(|e| e.to_string())?;
        let newton = f.inverse_series().map_err(|e| e.to_string())?;
        if lag.len() != target as usize {
            return Err(format!("{name}: {} Lagrange coefficients", lag.len()));
        }
        for (i, c) in lag.iter().enumerate() {
            let k = i as i64 + 1;
            if newton.coeff(k).as_ref() != Some(c) {
                return Err(format!("{name}: Lagrange and Newton differ at t^{k}"));
            }
            if *c != closed(k) {
                return Err(format!("{name}: t^{k} coefficient {c} differs from the closed form"));
            }
        }
    }
    Ok(format!("{} operators through t^{target}, also against closed-form inverses", cases.len()))
}

fn series_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate().take(a.len() - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn criterion_5() -> Outcome {
    let deg = 8i64;
    let len = deg as usize + 1;
    // inverse series f^{-1}(t), coefficient of t^k for k = 0..=deg
    let inverse = |g: &dyn Fn(i64) -> Rat| (0..=deg).map(|k| if k == 0 { Rat::zero() } else { g(k) }).collect::<Vec<_>>();
    let mut cases: Vec<(String, DeltaOperator, Vec<Rat>)> = vec![
        ("D".into(), catalog_delta("derivative", &none(), ORDER).unwrap(), inverse(&|k| if k == 1 { Rat::one() } else { Rat::zero() })),
        ("Delta".into(), catalog_delta("forward_difference", &none(), ORDER).unwrap(), inverse(&|k| r(if k % 2 == 1 { 1 } else { -1 }, k))),
        ("nabla".into(), catalog_delta("backward_difference", &none(), ORDER).unwrap(), inverse(&|k| r(1, k))),
        ("laguerre".into(), catalog_delta("laguerre", &none(), ORDER).unwrap(), inverse(&|_| n_(-1))),
    ];
    for b in [n_(1), n_(-1), r(1, 2)] {
        let f = catalog_delta("abel", &param("b", b.clone()), ORDER).unwrap();
        cases.push((format!("abel b={b}"), f, inverse(&|k| powr(&(-&b * n_(k)), k - 1) / fact(k))));
    }
    let mut checks = 0;
    for (name, f, g) in &cases {
        let s = generate_transfer(f, deg as usize).map_err(|e| e.to_string())?;
        // [x^j t^n] exp(x g(t)) = [t^n] g^j / j!
        let mut power = vec![Rat::zero(); len];
        power[0] = Rat::one();
        for j in 0..=deg {
            for n in 0..=deg {
                let lhs = s.terms()[n as usize].coeff(j as usize) / fact(n);
                let rhs = &power[n as usize] / fact(j);
                if lhs != rhs {
                    return Err(format!("{name}: coefficient of x^{j} t^{n}"));
                }
                checks += 1;
            }
            power = series_mul(&power, g);
        }
    }
    Ok(format!("{} delta operators, bidegree (8,8), {checks} coefficients", cases.len()))
}

/// Set partitions of an n-set by number of blocks, via restricted growth strings.
fn partition_counts(n: usize) -> Vec<u64> {
    fn walk(pos: usize, n: usize, blocks: usize, counts: &mut [u64]) {
        if pos == n {
            counts[blocks] += 1;
            return;
        }
        for b in 0..=blocks {
            walk(pos + 1, n, blocks.max(b + 1), counts);
        }
    }
    let mut counts = vec![0; n + 1];
    if n == 0 {
        counts[0] = 1;
    } else {
        walk(1, n, 1, &mut counts);
    }
    counts
}

fn criterion_6() -> Outcome {
    let delta = catalog_delta("forward_difference", &none(), ORDER).map_err(|e| e.to_string())?;
    let phi = conjugate_sequence(&delta, 10).map_err(|e| e.to_string())?;
    for n in 0..=10 {
        let counts = partition_counts(n);
        for (k, &count) in counts.iter().enumerate() {
            let c = phi.terms()[n].coeff(k);
            if c != n_(count as i64) {
                return Err(format!("S({n},{k}): engine {c}, brute force {count}"));
            }
        }
        if phi.terms()[n].degree() != Some(n) {
            return Err(format!("phi_{n} has the wrong degree"));
        }
    }
    Ok("n <= 10 against enumerated set partitions".into())
}

fn criterion_7() -> Outcome {
    let nabla = catalog_delta("backward_difference", &none(), ORDER).map_err(|e| e.to_string())?;
    let delta = catalog_delta("forward_difference", &none(), ORDER).map_err(|e| e.to_string())?;
    let c = connection_constants(&nabla, &delta, 10).map_err(|e| e.to_string())?;
    for n in 0..=10i64 {
        for j in 0..=10i64 {
            let expected = if n == 0 && j == 0 {
                Rat::one()
            } else if j >= 1 && j <= n {
                let k = n - j;
                let sign = if k % 2 == 0 { Rat::one() } else { -Rat::one() };
                sign * choose(n - 1, k) * fact(n) / fact(n - k)
            } else {
                Rat::zero()
            };
            let got = c.entry(n as usize, j as usize);
            if got != expected {
                return Err(format!("n={n} on <x>_{j}: engine {got}, closed form {expected}"));
            }
        }
        // (x)_n = sum_j c_nj <x>_j, checked on n+1 points
        for x in grid(n) {
            let sum = (0..=n).fold(Rat::zero(), |acc, j| acc + c.entry(n as usize, j as usize) * rising(&x, j));
            if sum != falling(&x, n) {
                return Err(format!("n={n}: expansion fails at x={x}"));
            }
        }
    }
    Ok("(x)_n in upper factorials, n <= 10".into())
}

/// Coefficients of `x^j (log x)^i` of a window, keyed by (j, i).
fn as_functions(s: &HarmonicLogSeries) -> BTreeMap<(i64, usize), Rat> {
    let mut out = BTreeMap::new();
    for (c, e) in s.expansions() {
        for (i, a) in e.log_coeffs.iter().enumerate() {
            if !a.is_zero() {
                *out.entry((e.degree, i)).or_insert_with(Rat::zero) += &c * a;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn criterion_8() -> Outcome {
    let depth = 12usize;
    let order = depth as i64 + 1;
    let check = |label: &str, s: &HarmonicLogSeries, expected: BTreeMap<(i64, usize), Rat>| -> Result<(), String> {
        if s.floor() != Some(-(depth as i64)) {
            return Err(format!("{label}: window floor {:?}", s.floor()));
        }
        let got = as_functions(s);
        if got != expected {
            return Err(format!("{label}: {s}"));
        }
        Ok(())
    };
    // 1/(x+1) = sum_k (-1)^k x^(-k-1)
    let delta = catalog_delta("forward_difference", &none(), order).map_err(|e| e.to_string())?;
    let s = residual_term(&delta, depth).map_err(|e| e.to_string())?;
    check("Delta", &s, (0..depth as i64).map(|k| ((-k - 1, 0), powr(&n_(-1), k))).collect())?;
    // x (x+b)^-2 = sum_k (k+1) (-b)^k x^(-k-1)
    for b in [n_(1), n_(2), r(-1, 2)] {
        let f = catalog_delta("abel", &param("b", b.clone()), order).map_err(|e| e.to_string())?;
        let s = residual_term(&f, depth).map_err(|e| e.to_string())?;
        let expected = (0..depth as i64).map(|k| ((-k - 1, 0), n_(k + 1) * powr(&-&b, k))).filter(|(_, c)| !c.is_zero());
        check(&format!("abel b={b}"), &s, expected.collect())?;
    }
    // log x + 1/x - 1/x^2 + 2/x^3 - 6/x^4 + ...
    let lag = catalog_delta("laguerre", &none(), order).map_err(|e| e.to_string())?;
    let l0 = log_sequence(&lag, 0, depth).map_err(|e| e.to_string())?;
    let got = as_functions(&l0);
    let prefix = [((0, 1), n_(1)), ((-1, 0), n_(1)), ((-2, 0), n_(-1)), ((-3, 0), n_(2)), ((-4, 0), n_(-6))];
    for (key, c) in prefix {
        if got.get(&key) != Some(&c) {
            return Err(format!("laguerre degree-0 term: coefficient of {key:?} is {:?}", got.get(&key)));
        }
    }
    if l0.floor() != Some(1 - depth as i64) {
        return Err(format!("laguerre window floor {:?}", l0.floor()));
    }
    Ok(format!("Delta, abel b in {{1, 2, -1/2}}, laguerre prefix; window depth {depth}"))
}

fn roman_factorial(n: i64) -> Rat {
    if n >= 0 {
        fact(n)
    } else {
        let sign = if (n - 1) % 2 == 0 { Rat::one() } else { -Rat::one() };
        sign / fact(-n - 1)
    }
}

type Model = BTreeMap<i64, Rat>;

fn model_d(s: &Model, k: i64, t: u32) -> Model {
    let mut out = Model::new();
    for (n, c) in s {
        if t == 0 && n - k < 0 {
            continue;
        }
        *out.entry(n - k).or_insert_with(Rat::zero) += c * roman_factorial(*n) / roman_factorial(n - k);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn model_sigma(s: &Model) -> Model {
    s.iter().filter(|(n, _)| **n != -1).map(|(n, c)| (n + 1, c.clone())).collect()
}

fn model_sub(a: &Model, b: &Model) -> Model {
    let mut out = a.clone();
    for (n, c) in b {
        *out.entry(*n).or_insert_with(Rat::zero) -= c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Engine result agrees with the model on its known window, and the model
/// has nothing below the window.
fn matches_model(s: &HarmonicLogSeries, m: &Model) -> bool {
    let floor = s.floor().unwrap_or(i64::MIN);
    m.iter().all(|(n, c)| *n < floor || s.coeff(*n).as_ref() == Some(c))
        && s.terms().all(|(n, c)| m.get(&n) == Some(c))
}

fn criterion_9() -> Outcome {
    let d = |k: i64| ShiftInvariantOperator::derivative_power(k, k + 40);
    let mut checks = 0;
    for t in 0..=2u32 {
        for n in -6..=6i64 {
            let lam = HarmonicLogSeries::lambda(n, t);
            let base: Model = if t == 0 && n < 0 { Model::new() } else { Model::from([(n, Rat::one())]) };
            for k in 1..=5i64 {
                // D^k sigma - sigma D^k = k D^(k-1); k = 1 is the commutator with D
                let model_lhs = model_sub(&model_d(&model_sigma(&base), k, t), &model_sigma(&model_d(&base, k, t)));
                let model_rhs: Model = model_d(&base, k - 1, t).into_iter().map(|(j, c)| (j, c * n_(k))).collect();
                let model_rhs: Model = model_rhs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                if model_lhs != model_rhs {
                    return Err(format!("oracle model: t={t} n={n} k={k}"));
                }
                let lhs = &lam.roman_shift().apply_operator(&d(k)) - &lam.apply_operator(&d(k)).roman_shift();
                if !matches_model(&lhs, &model_lhs) {
                    return Err(format!("t={t} n={n} k={k}: engine gives {lhs}"));
                }
                let dk = lam.apply_operator(&d(k));
                if !matches_model(&dk, &model_d(&base, k, t)) {
                    return Err(format!("t={t} n={n}: D^{k} gives {dk}"));
                }
                checks += 2;
            }
        }
    }
    Ok(format!("|n| <= 6, t <= 2, k <= 5, {checks} checks"))
}

fn criterion_10() -> Outcome {
    let depth = 12i64;
    for a in [n_(1), r(1, 2), n_(-2)] {
        let e = catalog("shift", &param("a", a.clone()), depth).map_err(|e| e.to_string())?;
        for n in -5..=-1i64 {
            // lambda_n = x^n for n < 0, so E^a lambda_n = (x+a)^n = sum_k C(n,k) a^k x^(n-k)
            let got = HarmonicLogSeries::lambda(n, 1).apply_operator(&e);
            if got.floor() != Some(n - depth + 1) {
                return Err(format!("a={a} n={n}: window floor {:?}", got.floor()));
            }
            for k in 0..depth {
                let expected = choose(n, k) * powr(&a, k);
                if got.coeff(n - k) != Some(expected.clone()) {
                    return Err(format!("a={a} n={n}: coefficient on lambda_{} is {:?}", n - k, got.coeff(n - k)));
                }
            }
        }
    }
    Ok("n in -5..-1, a in {1, 1/2, -2}, depth 12".into())
}

fn criterion_11() -> Outcome {
    let depth = 12usize;
    let c = newton_expand(&HarmonicLogSeries::lambda(-1, 1), depth).map_err(|e| e.to_string())?;
    // independent resummation: (x)_{-m} = 1/((x+1)...(x+m)) as a series in 1/x
    let len = depth + 1;
    let mut total = vec![Rat::zero(); len];
    for (&n, cn) in &c {
        let m = -n;
        let mut term = vec![Rat::zero(); len];
        term[0] = Rat::one();
        for i in 1..=m {
            // 1/(x+i) = sum_p (-i)^p x^(-p-1)
            let factor: Vec<Rat> = (0..len as i64).map(|p| if p == 0 { Rat::zero() } else { powr(&n_(-i), p - 1) }).collect();
            term = series_mul(&term, &factor);
        }
        for (p, v) in term.iter().enumerate() {
            total[p] += cn * v;
        }
    }
    let expected: Vec<Rat> = (0..len).map(|p| if p == 1 { Rat::one() } else { Rat::zero() }).collect();
    if total != expected {
        return Err(format!("resummed expansion is not 1/x: {:?}", total.iter().map(|r| r.to_string()).collect::<Vec<_>>()));
    }
    for (&n, cn) in &c {
        if *cn != fact(-n - 1) {
            return Err(format!("coefficient on (x)_{n} is {cn}, expected {}", fact(-n - 1)));
        }
    }
    Ok(format!("1/x through x^-{depth}; coefficients (m-1)! on (x)_(-m)"))
}

/// Pointwise sum of `sum_{n>=1} (nb)^n/n (x+nb)^(-n-1)`. Each term is
/// `(1 + x/(nb))^(-n) / (n (x+nb))` and `(1 + y/n)^n` grows with `n`, so the
/// tail past `N` is at most `1 / (c_N b N)` with `c_N = (1 + x/(Nb))^N`.
fn corrected_pointwise(b: f64, x: f64, tol: f64) -> (f64, u64, f64) {
    let term = |n: f64| (-n * (x / (n * b)).ln_1p()).exp() / (n * (x + n * b));
    let (mut sum, mut done, mut n_terms) = (0.0f64, 0u64, 16u64);
    loop {
        for n in done + 1..=n_terms {
            sum += term(n as f64);
        }
        done = n_terms;
        let c = (n_terms as f64 * (x / (n_terms as f64 * b)).ln_1p()).exp();
        let bound = 1.0 / (c * b * n_terms as f64);
        if bound < tol || n_terms >= 1 << 26 {
            return (sum, n_terms, bound);
        }
        n_terms *= 2;
    }
}

/// The identities hold between expansions in 1/x; numeric values come from
/// evaluating the truncated windows at the point.
fn criterion_12() -> Outcome {
    let (a, b, x) = (n_(1), n_(2), n_(5));
    let terms = 12i64;
    let depth = terms as usize + 1;
    let abel = catalog_delta("abel", &param("b", b.clone()), depth as i64 + 1).map_err(|e| e.to_string())?;
    let mut rhs = log_sequence(&abel, 0, depth).map_err(|e| e.to_string())?;
    for k in 1..=terms {
        // [0|k] = [0]!/([k]! [-k]!) = (-1)^(k+1)/k for k >= 1
        let roman = roman_factorial(0) / (roman_factorial(k) * roman_factorial(-k));
        let ak = &a * powr(&(&a - &b * n_(k)), k - 1);
        let term = log_sequence(&abel, -k, depth).map_err(|e| e.to_string())?.scale(&(roman * ak));
        rhs = &rhs + &term;
    }
    let rhs = rhs.with_floor(-terms);
    // b/(x+a) + log(x+a) = log x + sum_{j>=1} ((-1)^(j+1) a^j/j + b (-a)^(j-1)) x^-j
    let mut lhs_series = BTreeMap::from([((0, 1), Rat::one())]);
    for j in 1..=terms {
        let c = powr(&-&a, j) * n_(-1) / n_(j) + &b * powr(&-&a, j - 1);
        if !c.is_zero() {
            lhs_series.insert((-j, 0), c);
        }
    }
    if as_functions(&rhs) != lhs_series {
        return Err(format!("Abel: window {rhs} is not the expansion of b/(x+a) + log(x+a)"));
    }
    let rhs_value = evaluate_numeric(&rhs, &x, 20).map_err(|e| e.to_string())?.to_f64();
    let xa = rat_to_f64(&(&x + &a));
    let lhs = rat_to_f64(&b) / xa + xa.ln();
    let diff = (lhs - rhs_value).abs();
    if diff >= 1e-7 {
        return Err(format!("Abel: |LHS - RHS| = {diff:.3e} (LHS {lhs:.12}, RHS {rhs_value:.12})"));
    }

    // corrected identity: sum_{n=1}^N (nb)^n/n (x+nb)^(-n-1) expanded in 1/x
    // is exactly b x^-2 through x^-(N+1)
    let n_max = 24i64;
    let len = (n_max + 2) as usize;
    let mut total = vec![Rat::zero(); len];
    for n in 1..=n_max {
        let nb = &b * n_(n);
        let coef = powr(&nb, n) / n_(n);
        for j in 0..len as i64 - n - 1 {
            total[(n + 1 + j) as usize] += &coef * choose(-n - 1, j) * powr(&nb, j);
        }
    }
    let expected: Vec<Rat> = (0..len).map(|p| if p == 2 { b.clone() } else { Rat::zero() }).collect();
    if total != expected {
        return Err("corrected identity: expansion in 1/x is not b x^-2".into());
    }
    let formal = run_suite("abel_numeric", &SuiteConfig::default()).unwrap().map_err(|e| e.to_string())?;
    if !formal.passed() {
        return Err(format!("engine suite: {:?}", formal.failures));
    }
    let settled = formal.notes.iter().find(|n| n.contains("settles")).cloned().unwrap_or_default();

    let mut pointwise = rat_to_f64(&b) / 5.0 + 5f64.ln();
    for k in 1..=terms {
        let (kf, af, bf, xf) = (k as f64, 1.0, 2.0, 5.0);
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        pointwise += sign * af * (af - bf * kf).powi(k as i32 - 1) * xf / (kf * (xf + bf * kf).powi(k as i32 + 1));
    }
    let (corrected, n_terms, bound) = corrected_pointwise(2.0, 5.0, 5e-8);
    Ok(format!(
        "Abel window |LHS - RHS| = {diff:.2e}; {settled}\n    note: summed pointwise at x = 5 the twelve Abel terms give {pointwise:.10} \
         (LHS {lhs:.10}) and the corrected series gives {corrected:.10} after {n_terms} terms (tail <= {bound:.0e}), \
         not 0.08: the expansions of (x+nb)^(-n-1) in 1/x diverge once nb >= x"
    ))
}

fn criterion_13() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_umbra");
    let corrupt = Command::new(bin)
        .args(["verify", "--suite", "binomial", "--op", "exp(D)-1", "--n", "6", "--corrupt", "4"])
        .output()
        .map_err(|e| e.to_string())?;
    if corrupt.status.code() != Some(4) {
        return Err(format!("corrupted sequence: exit {:?}", corrupt.status.code()));
    }
    let parse = Command::new(bin).args(["seq", "--op", "exp("]).output().map_err(|e| e.to_string())?;
    let stderr = String::from_utf8_lossy(&parse.stderr);
    if parse.status.code() != Some(2) || !stderr.contains("byte 5") {
        return Err(format!("`exp(`: exit {:?}, stderr {stderr:?}", parse.status.code()));
    }
    Ok(format!("exit 4 on corruption; exit 2 with `{}`", stderr.trim()))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("Abel's identity", criterion_1),
        ("Vandermonde's identity", criterion_2),
        ("expansion theorem round trips", criterion_3),
        ("Lagrange inversion vs Newton", criterion_4),
        ("generating function", criterion_5),
        ("conjugate of Delta gives S(n,k)", criterion_6),
        ("lower/upper factorial connection", criterion_7),
        ("residual terms", criterion_8),
        ("Pincherle commutators", criterion_9),
        ("logarithmic binomial theorem", criterion_10),
        ("Newton expansion of 1/x", criterion_11),
        ("numeric Abel check", criterion_12),
        ("negative controls", criterion_13),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = check();
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {title} [{secs:.2}s]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {title} [{secs:.2}s]: {why}", i + 1);
            }
        }
    }
    let total = start.elapsed().as_secs_f64();
    println!("total {total:.2}s (budget 60s); {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 || total >= 60.0 {
        std::process::exit(1);
    }
}
