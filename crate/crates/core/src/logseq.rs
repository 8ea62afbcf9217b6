//! Logarithmic sequences of binomial type at log order 1.

use std::collections::BTreeMap;
use std::sync::RwLock;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::harmonic::HarmonicLogSeries;
use crate::numbers::{bernoulli_higher, roman_coefficient, roman_factorial};
use crate::operator::{catalog_delta, DeltaOperator, ShiftInvariantOperator};
use crate::series::TruncatedSeries;
use crate::Rat;

fn require_order(f: &DeltaOperator, depth: usize) -> Result<()> {
    let needed = depth as i64 + 1;
    if f.order() < needed {
        Err(Error::TruncationTooSmall { order: f.order(), needed })
    } else {
        Ok(())
    }
}

/// `f'(D) x^{-1}` on degrees `-depth ..= -1`.
pub fn residual_term(f: &DeltaOperator, depth: usize) -> Result<HarmonicLogSeries> {
    require_order(f, depth)?;
    let df = f.operator().pincherle_derivative();
    Ok(HarmonicLogSeries::lambda(-1, 1).apply_operator(&df).with_floor(-(depth as i64)))
}

/// `p_n = f'(D) g(D)^{-n-1} lambda_n` with `f = D g`, on degrees
/// `n - depth + 1 ..= n`.
pub fn log_sequence(f: &DeltaOperator, n: i64, depth: usize) -> Result<HarmonicLogSeries> {
    require_order(f, depth)?;
    let op = &f.series().derivative() * &f.quotient().powi(-n - 1)?;
    let s = HarmonicLogSeries::lambda(n, 1).apply_operator(&ShiftInvariantOperator::new(op));
    Ok(s.with_floor(n - depth as i64 + 1))
}

/// Terms `p_n = [n]! f(D)^{-n-1} p_{-1}` rebuilt from the residual term and
/// cached per degree.
#[derive(Debug)]
pub struct LogBinomialSequence {
    operator: DeltaOperator,
    depth: usize,
    residual: HarmonicLogSeries,
    cache: RwLock<BTreeMap<i64, HarmonicLogSeries>>,
}

impl LogBinomialSequence {
    pub fn new(operator: DeltaOperator, depth: usize) -> Result<Self> {
        let residual = residual_term(&operator, depth)?;
        Ok(LogBinomialSequence { operator, depth, residual, cache: RwLock::new(BTreeMap::new()) })
    }

    pub fn operator(&self) -> &DeltaOperator {
        &self.operator
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn residual(&self) -> &HarmonicLogSeries {
        &self.residual
    }

    pub fn term(&self, n: i64) -> Result<HarmonicLogSeries> {
        if let Some(s) = self.cache.read().expect("cache poisoned").get(&n) {
            return Ok(s.clone());
        }
        let power = self.operator.series().powi(-n - 1)?.scale(&roman_factorial(n));
        let s = self
            .residual
            .apply_operator(&ShiftInvariantOperator::new(power))
            .with_floor(n - self.depth as i64 + 1);
        self.cache.write().expect("cache poisoned").entry(n).or_insert_with(|| s.clone());
        Ok(s)
    }

    /// Number of cached terms.
    pub fn cached(&self) -> usize {
        self.cache.read().expect("cache poisoned").len()
    }
}

fn forward_difference(order: i64) -> DeltaOperator {
    catalog_delta("forward_difference", &BTreeMap::new(), order).expect("catalog entry")
}

/// `(x)_n^(1)`, the logarithmic lower factorial.
pub fn log_lower_factorial(n: i64, depth: usize) -> Result<HarmonicLogSeries> {
    log_sequence(&forward_difference(depth as i64 + 1), n, depth)
}

/// The same series from higher-order Bernoulli numbers:
/// `E^1 sum_k B_{k,n+1} [n|k] lambda_{n-k}`.
pub fn log_lower_factorial_bernoulli(n: i64, depth: usize) -> Result<HarmonicLogSeries> {
    let terms = (0..depth as u64).map(|k| (n - k as i64, bernoulli_higher(k, n + 1) * roman_coefficient(n, k as i64)));
    let inner = HarmonicLogSeries::new(1, Some(n - depth as i64 + 1), terms);
    let shift = ShiftInvariantOperator::new(TruncatedSeries::exp_linear(&Rat::one(), depth as i64));
    Ok(inner.apply_operator(&shift))
}

/// `sum_k <g(D)^k lambda_n>_(1) / [k]! lambda_k` for `k` in
/// `n - depth + 1 ..= n`.
pub fn log_conjugate_sequence(g: &DeltaOperator, n: i64, depth: usize) -> Result<HarmonicLogSeries> {
    require_order(g, depth)?;
    let lo = n - depth as i64 + 1;
    let rn = roman_factorial(n);
    let mut terms = Vec::new();
    for k in lo..=n {
        let gk = g.series().powi(k)?;
        let c = gk.coeff(n).ok_or(Error::UnknownCoefficient { exponent: n, order: gk.order() })?;
        if !c.is_zero() {
            terms.push((k, c * &rn / roman_factorial(k)));
        }
    }
    Ok(HarmonicLogSeries::new(1, Some(lo), terms))
}

/// Coefficients `<f(D)^n s>_(1) / [n]!` of `s` in the logarithmic sequence
/// of `f`, for `n` from the floor of `s` (or `top - depth + 1` when `s` is
/// exact) up to its top degree.
pub fn log_taylor_coefficients(s: &HarmonicLogSeries, f: &DeltaOperator, depth: usize) -> Result<BTreeMap<i64, Rat>> {
    if s.order_t() != 1 {
        return Err(Error::AugmentationOutsideWindow { floor: s.floor().unwrap_or(0) });
    }
    let top = s.top();
    let lo = s.floor().unwrap_or(top - depth as i64 + 1);
    let needed = top - lo + 2;
    if f.order() < needed {
        return Err(Error::TruncationTooSmall { order: f.order(), needed });
    }
    let mut out = BTreeMap::new();
    let mut power = f.series().powi(lo)?;
    for n in lo..=top {
        if n > lo {
            power = &power * f.series();
        }
        let aug = s.apply_operator(&ShiftInvariantOperator::new(power.clone())).augmentation(1)?;
        out.insert(n, aug / roman_factorial(n));
    }
    Ok(out)
}

/// Coefficients of `s` over the logarithmic lower factorials.
pub fn newton_expand(s: &HarmonicLogSeries, depth: usize) -> Result<BTreeMap<i64, Rat>> {
    let span = match s.floor() {
        Some(f) => s.top() - f,
        None => depth as i64 - 1,
    };
    log_taylor_coefficients(s, &forward_difference(span + 3), depth)
}

/// `sum_n c_n p_n` over the logarithmic sequence of `f`, each term on a
/// window of the given depth.
pub fn log_resum(coeffs: &BTreeMap<i64, Rat>, f: &DeltaOperator, depth: usize) -> Result<HarmonicLogSeries> {
    let seq = LogBinomialSequence::new(f.clone(), depth)?;
    let lo = coeffs.keys().next().copied().unwrap_or(0);
    let mut acc = HarmonicLogSeries::zero(1, Some(lo));
    for (&n, c) in coeffs {
        if !c.is_zero() {
            acc = &acc + &seq.term(n)?.scale(c);
        }
    }
    Ok(acc.with_floor(lo))
}
